"""Evaluation harness: run a method, score it, estimate volumes.

Also contains the 2-D baseline that takes the exact convex hull of the
positives and greedily keeps the K facets that exclude the most
negatives.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass, field

import numpy as np

from .colgen import ColgenConfig, run_colgen
from .core import Dataset, Hyperplane, PcabSolution, separation_error
from .greedy import run_greedy
from .models import (
    BudgetParams,
    build_model_a,
    build_model_b,
    build_ov2007,
    extract_hyperplanes,
    hyperplanes_from_values,
)
from .solver import SolveOptions, solve_milp

METHODS = (
    "model-a",
    "model-b",
    "ov2007",
    "colgen-exact",
    "colgen-ahp",
    "greedy",
    "hull-greedy-2d",
)


class UnsupportedMethodError(ValueError):
    """Method unavailable for this dataset (wrong dimension, unknown name)."""


def default_time_limit(d: int, massive: bool = True) -> float:
    """Per-run wall limit: 6 * 10^(log2 d), a tenth of that for batch runs."""
    exponent = math.log2(d) - (1 if massive else 0)
    return 6.0 * 10.0**exponent


@dataclass
class RunConfig:
    method: str
    K: int
    time_limit: float | None = None  # None: default for the dataset dimension
    seed: int = 0
    thr: int | None = None
    n_max: int = 8
    warm_start: bool = False
    root_node_only: bool = False  # compact models only

    def __post_init__(self):
        if self.method not in METHODS:
            raise UnsupportedMethodError(f"unknown method {self.method!r}")
        if self.time_limit is not None and self.time_limit <= 0:
            raise ValueError("time_limit must be positive")


@dataclass
class ReportRow:
    method: str
    K: int
    d: int
    seconds: float
    error_pct: float | None  # None renders as NA (invalid solution)
    te_seconds: float

    def as_csv(self) -> list[str]:
        err = "NA" if self.error_pct is None else f"{self.error_pct:.4f}"
        return [
            self.method,
            str(self.K),
            str(self.d),
            f"{self.seconds:.3f}",
            err,
            f"{self.te_seconds:.3f}",
        ]


REPORT_FIELDS = ["method", "K", "d", "seconds", "error_pct", "te_seconds"]


def _solve_compact(ds: Dataset, p: BudgetParams, rc: RunConfig, limit: float):
    builders = {
        "model-a": build_model_a,
        "model-b": build_model_b,
        "ov2007": build_ov2007,
    }
    spec = builders[rc.method](ds, p)
    trace: list[tuple[float, int]] = []

    def on_incumbent(elapsed, _obj, values):
        hs = hyperplanes_from_values(values, p.K, ds.dim)
        hs = [h for h in hs if not h.is_degenerate()]
        err = separation_error(ds, hs) if hs else ds.num_negatives
        if not trace or err < trace[-1][1]:
            trace.append((elapsed, err))

    res = solve_milp(
        spec,
        SolveOptions(
            time_limit=limit,
            seed=rc.seed,
            root_node_only=rc.root_node_only,
            dive_lp_budget=None,
        ),
        on_incumbent=on_incumbent,
    )
    if not res.has_solution:
        return PcabSolution(hyperplanes=[], error=ds.num_negatives, trace=[]), False
    hs = extract_hyperplanes(res, p.K, ds.dim)
    degenerate = any(h.is_degenerate() for h in hs)
    hs = [h for h in hs if not h.is_degenerate()]
    err = separation_error(ds, hs) if hs else ds.num_negatives
    sol = PcabSolution(hyperplanes=hs, error=err, trace=trace)
    # a fully degenerate answer (all-zero hyperplanes) is not a valid solution
    valid = bool(hs) or not degenerate
    return sol, not valid


def run_method(
    ds: Dataset, p: BudgetParams, rc: RunConfig
) -> tuple[PcabSolution, ReportRow]:
    limit = (
        rc.time_limit
        if rc.time_limit is not None
        else default_time_limit(ds.dim)
    )
    start = time.monotonic()
    invalid = False
    if rc.method in ("model-a", "model-b", "ov2007"):
        sol, invalid = _solve_compact(ds, p, rc, limit)
    elif rc.method in ("colgen-exact", "colgen-ahp"):
        cfg = ColgenConfig(
            pricer="exact-root-node" if rc.method == "colgen-exact" else "ahp",
            time_limit=limit,
            thr=rc.thr,
            n_max=rc.n_max,
            seed=rc.seed,
            warm_start_with_greedy=rc.warm_start,
        )
        sol, _tele = run_colgen(ds, p, cfg)
    elif rc.method == "greedy":
        sol = run_greedy(ds, p, SolveOptions(time_limit=limit, seed=rc.seed))
    elif rc.method == "hull-greedy-2d":
        if ds.dim != 2:
            raise UnsupportedMethodError("hull-greedy-2d requires d = 2")
        sol = hull_greedy_2d(ds, p.K)
    else:  # pragma: no cover - RunConfig already validates
        raise UnsupportedMethodError(rc.method)
    seconds = time.monotonic() - start
    te = sol.trace[-1][0] if sol.trace else seconds
    n = ds.num_negatives
    row = ReportRow(
        method=rc.method,
        K=p.K,
        d=ds.dim,
        seconds=seconds,
        error_pct=None if invalid else 100.0 * sol.error / n,
        te_seconds=min(te, seconds),
    )
    return sol, row


# ---------------------------------------------------------------------------
# Monte-Carlo volume


def mc_volume(
    hs: list[Hyperplane],
    d: int,
    samples: int = 100_000,
    seed: int = 0,
) -> tuple[float, float]:
    """Volume of the enclosed region clipped to the sampling box [-1, 2]^d.

    Returns the estimate and its binomial standard error.
    """
    if samples < 1000:
        raise ValueError("use at least 1000 samples")
    rng = np.random.default_rng(seed)
    box_volume = 3.0**d
    if not hs:
        return box_volume, 0.0
    pts = rng.uniform(-1.0, 2.0, size=(samples, d))
    inside = np.ones(samples, dtype=bool)
    for h in hs:
        inside &= h.values(pts) >= 0.0
    frac = inside.mean()
    stderr = box_volume * math.sqrt(frac * (1.0 - frac) / samples)
    return box_volume * float(frac), float(stderr)


# ---------------------------------------------------------------------------
# 2-D exact hull baseline


def convex_hull_2d(points: np.ndarray) -> np.ndarray:
    """Monotone-chain hull; returns vertex indices in counterclockwise order."""
    pts = np.asarray(points, dtype=float)
    order = np.lexsort((pts[:, 1], pts[:, 0]))

    def cross(o, a, b):
        return (pts[a, 0] - pts[o, 0]) * (pts[b, 1] - pts[o, 1]) - (
            pts[a, 1] - pts[o, 1]
        ) * (pts[b, 0] - pts[o, 0])

    lower: list[int] = []
    for i in order:
        while len(lower) >= 2 and cross(lower[-2], lower[-1], i) <= 0:
            lower.pop()
        lower.append(int(i))
    upper: list[int] = []
    for i in order[::-1]:
        while len(upper) >= 2 and cross(upper[-2], upper[-1], i) <= 0:
            upper.pop()
        upper.append(int(i))
    return np.array(lower[:-1] + upper[:-1], dtype=int)


def hull_edge_hyperplanes(points: np.ndarray) -> list[Hyperplane]:
    """Inward-valid hyperplanes for each hull edge of a 2-D point set."""
    hull = convex_hull_2d(points)
    if hull.shape[0] < 3:
        raise ValueError("need at least 3 non-collinear points for a 2-D hull")
    out = []
    for a, b in zip(hull, np.roll(hull, -1)):
        pa, pb = points[a], points[b]
        edge = pb - pa
        w = np.array([-edge[1], edge[0]])  # left normal of a CCW edge
        out.append(Hyperplane(b=-float(w @ pa), w=w))
    return out


def hull_greedy_2d(ds: Dataset, K: int) -> PcabSolution:
    """Greedy facet selection from the exact hull of the positives."""
    start = time.monotonic()
    candidates = hull_edge_hyperplanes(ds.positives)
    values = np.stack([h.values(ds.negatives) for h in candidates])
    outside = values < 0.0  # candidate x negative: strictly excluded
    chosen: list[Hyperplane] = []
    covered = np.zeros(ds.num_negatives, dtype=bool)
    remaining = list(range(len(candidates)))
    trace: list[tuple[float, int]] = []
    for _ in range(min(K, len(candidates))):
        gains = [int((outside[c] & ~covered).sum()) for c in remaining]
        best = int(np.argmax(gains))
        if gains[best] == 0 and chosen:
            break
        c = remaining.pop(best)
        chosen.append(candidates[c])
        covered |= outside[c]
        trace.append((time.monotonic() - start, int((~covered).sum())))
        if covered.all():
            break
    error = separation_error(ds, chosen)
    return PcabSolution(hyperplanes=chosen, error=error, trace=trace)
