"""Synthetic hypercubic instance families.

The "corners" family anchors the unit hypercube with deterministic
positive and negative points separated by a border gap, so the smallest
budget that separates everything is exactly 2d (the shifted facets).
The "uniform" family drops the gap and the anchors, keeping only the
random points.
"""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass, asdict
from pathlib import Path

import numpy as np

from .core import Dataset, Hyperplane

# random point counts keyed by dimension: (positives, negatives)
RANDOM_COUNTS = {2: (141, 200), 4: (200, 500), 8: (282, 8000)}

DEFAULT_GAMMA = 0.04


@dataclass
class GenConfig:
    d: int
    gamma: float = DEFAULT_GAMMA
    n_random_pos: int | None = None  # None: table value for d in {2, 4, 8}
    n_random_neg: int | None = None
    seed: int = 0

    def __post_init__(self):
        if self.d < 2:
            raise ValueError("dimension must be at least 2")
        if not 0 <= self.gamma < 0.5:
            raise ValueError("gamma must be in [0, 0.5)")
        if self.n_random_pos is None or self.n_random_neg is None:
            if self.d not in RANDOM_COUNTS:
                raise ValueError(
                    f"no default point counts for d={self.d}; set them explicitly"
                )
            pos, neg = RANDOM_COUNTS[self.d]
            if self.n_random_pos is None:
                self.n_random_pos = pos
            if self.n_random_neg is None:
                self.n_random_neg = neg
        if self.n_random_pos < 0 or self.n_random_neg < 0:
            raise ValueError("point counts must be nonnegative")


def corner_positives(d: int, gamma: float) -> np.ndarray:
    """One anchored positive per hypercube vertex, pulled inside by gamma."""
    pts = []
    for v in itertools.product((0.0, 1.0), repeat=d):
        pts.append([gamma if c == 0.0 else 1.0 - gamma for c in v])
    return np.array(pts)


def corner_negatives(d: int, gamma: float) -> np.ndarray:
    """d anchored negatives per vertex: pushed outside, one coordinate bent back."""
    pts = []
    for v in itertools.product((0.0, 1.0), repeat=d):
        outer = [-gamma if c == 0.0 else 1.0 + gamma for c in v]
        for j in range(d):
            q = list(outer)
            q[j] = 2.0 * gamma if q[j] == -gamma else 1.0 - 2.0 * gamma
            pts.append(q)
    return np.array(pts)


def _random_negatives(
    rng: np.random.Generator, d: int, count: int
) -> np.ndarray:
    """Uniform points in [-1, 2]^d minus the open unit cube, by rejection."""
    out = np.empty((count, d))
    filled = 0
    while filled < count:
        batch = rng.uniform(-1.0, 2.0, size=(max(count - filled, 16), d))
        inside = np.all((batch > 0.0) & (batch < 1.0), axis=1)
        batch = batch[~inside]
        take = min(batch.shape[0], count - filled)
        out[filled : filled + take] = batch[:take]
        filled += take
    return out


def generate_corner_family(cfg: GenConfig) -> Dataset:
    """Instance with anchored corner points and border gap (separable at 2d)."""
    if cfg.gamma <= 0:
        raise ValueError("the corner family needs a positive border gap")
    rng = np.random.default_rng(cfg.seed)
    pos_det = corner_positives(cfg.d, cfg.gamma)
    neg_det = corner_negatives(cfg.d, cfg.gamma)
    # random positives respect the gap so the 2d-budget certificate holds
    pos_rand = rng.uniform(
        cfg.gamma, 1.0 - cfg.gamma, size=(cfg.n_random_pos, cfg.d)
    )
    neg_rand = _random_negatives(rng, cfg.d, cfg.n_random_neg)
    return Dataset(
        positives=np.vstack([pos_det, pos_rand]),
        negatives=np.vstack([neg_det, neg_rand]),
    )


def generate_uniform_family(cfg: GenConfig) -> Dataset:
    """Instance with random points only: no gap, no anchors."""
    rng = np.random.default_rng(cfg.seed)
    pos = rng.uniform(0.0, 1.0, size=(cfg.n_random_pos, cfg.d))
    neg = _random_negatives(rng, cfg.d, cfg.n_random_neg)
    return Dataset(positives=pos, negatives=neg)


def facet_hyperplanes(d: int, gamma: float = DEFAULT_GAMMA) -> list[Hyperplane]:
    """The 2d unit-cube facets shifted outward by gamma/2.

    On any corner-family instance these certify separation error zero.
    """
    out = []
    for j in range(d):
        lo = np.zeros(d)
        lo[j] = 1.0
        out.append(Hyperplane(b=-gamma / 2.0, w=lo))
        hi = np.zeros(d)
        hi[j] = -1.0
        out.append(Hyperplane(b=1.0 - gamma / 2.0, w=hi))
    return out


def write_manifest(cfg: GenConfig, family: str, path: str | Path) -> None:
    data = {"family": family, **asdict(cfg)}
    Path(path).write_text(json.dumps(data, indent=2) + "\n")
