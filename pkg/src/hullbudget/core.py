"""Domain types and geometric predicates.

A labeled point cloud is split into positives (to be enclosed) and
negatives (to be excluded).  Solutions are sets of hyperplanes that keep
every positive point on the nonnegative side; quality is the number of
negative points that end up on the nonnegative side of *every*
hyperplane.
"""

from __future__ import annotations

import csv
import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable, Sequence

import numpy as np

DEFAULT_TOL = 1e-6

WeightFunction = Callable[[np.ndarray], float]


def unit_weights(_: np.ndarray) -> float:
    """Default weight function: constant 1 for every point."""
    return 1.0


class DimensionMismatchError(ValueError):
    """A hyperplane or point does not match the dataset dimension."""


@dataclass(frozen=True)
class Dataset:
    """Immutable labeled point cloud in R^d.

    ``positives`` has shape (m, d) and ``negatives`` shape (n, d); row
    order defines the point indices used everywhere else.
    """

    positives: np.ndarray
    negatives: np.ndarray

    def __post_init__(self):
        pos = np.asarray(self.positives, dtype=float)
        neg = np.asarray(self.negatives, dtype=float)
        if pos.ndim != 2 or neg.ndim != 2:
            raise ValueError("points must be given as 2-D arrays")
        if pos.shape[0] < 1 or neg.shape[0] < 1:
            raise ValueError("need at least one positive and one negative point")
        if pos.shape[1] != neg.shape[1]:
            raise DimensionMismatchError(
                f"positives are {pos.shape[1]}-d, negatives are {neg.shape[1]}-d"
            )
        if not (np.isfinite(pos).all() and np.isfinite(neg).all()):
            raise ValueError("points must have finite coordinates")
        pos.setflags(write=False)
        neg.setflags(write=False)
        object.__setattr__(self, "positives", pos)
        object.__setattr__(self, "negatives", neg)

    @property
    def dim(self) -> int:
        return self.positives.shape[1]

    @property
    def num_positives(self) -> int:
        return self.positives.shape[0]

    @property
    def num_negatives(self) -> int:
        return self.negatives.shape[0]


@dataclass(frozen=True)
class Hyperplane:
    """Affine function a -> b + w.a; the nonnegative side is 'inside'."""

    b: float
    w: np.ndarray

    def __post_init__(self):
        w = np.asarray(self.w, dtype=float)
        if w.ndim != 1:
            raise ValueError("w must be a vector")
        w.setflags(write=False)
        object.__setattr__(self, "b", float(self.b))
        object.__setattr__(self, "w", w)

    @property
    def dim(self) -> int:
        return self.w.shape[0]

    def values(self, points: np.ndarray) -> np.ndarray:
        points = np.asarray(points, dtype=float)
        if points.shape[-1] != self.dim:
            raise DimensionMismatchError(
                f"hyperplane is {self.dim}-d, points are {points.shape[-1]}-d"
            )
        return self.b + points @ self.w

    def is_degenerate(self, tol: float = DEFAULT_TOL) -> bool:
        return bool(np.max(np.abs(self.w)) < tol)


@dataclass
class PcabSolution:
    """At most K hyperplanes plus the separation error they achieve.

    ``trace`` collects (elapsed-seconds, error) improvement events, used
    for time-up-to-error reporting.
    """

    hyperplanes: list[Hyperplane]
    error: int
    trace: list[tuple[float, int]] = field(default_factory=list)

    def __post_init__(self):
        for h in self.hyperplanes:
            if h.is_degenerate():
                raise ValueError("degenerate (all-zero w) hyperplane in solution")
        self.error = int(self.error)


def is_valid(h: Hyperplane, ds: Dataset, tol: float = DEFAULT_TOL) -> bool:
    """True iff every positive point is on the nonnegative side of h."""
    if tol < 0:
        raise ValueError("tol must be nonnegative")
    return bool(np.all(h.values(ds.positives) >= -tol))


def separation_error(
    ds: Dataset, hs: Sequence[Hyperplane], tol: float = DEFAULT_TOL
) -> int:
    """Number of negatives on the nonnegative side of every hyperplane.

    With an empty hyperplane list the enclosing region is all of R^d, so
    every negative counts.
    """
    inside = np.ones(ds.num_negatives, dtype=bool)
    for h in hs:
        inside &= h.values(ds.negatives) >= -tol
    return int(inside.sum())


def shift_to_positives(h: Hyperplane, ds: Dataset) -> Hyperplane:
    """Move h as close as possible to the positives, keeping margin 1.

    Assumes h satisfies b + w.a >= 1 on all positives; the returned
    hyperplane attains equality for at least one of them.
    """
    if ds.num_positives == 0:
        return h
    b_new = 1.0 - float(np.min(ds.positives @ h.w))
    return Hyperplane(b=b_new, w=h.w)


# ---------------------------------------------------------------------------
# File formats


def write_dataset_csv(ds: Dataset, path: str | Path) -> None:
    """CSV with header label,x1,...,xd; label is +1 or -1."""
    path = Path(path)
    with path.open("w", newline="") as f:
        writer = csv.writer(f)
        writer.writerow(["label"] + [f"x{j + 1}" for j in range(ds.dim)])
        for row in ds.positives:
            writer.writerow(["+1"] + [repr(float(v)) for v in row])
        for row in ds.negatives:
            writer.writerow(["-1"] + [repr(float(v)) for v in row])


def read_dataset_csv(path: str | Path) -> Dataset:
    path = Path(path)
    pos: list[list[float]] = []
    neg: list[list[float]] = []
    with path.open(newline="") as f:
        reader = csv.reader(f)
        header = next(reader)
        if not header or header[0] != "label":
            raise ValueError(f"{path}: expected header starting with 'label'")
        d = len(header) - 1
        for lineno, row in enumerate(reader, start=2):
            if not row:
                continue
            if len(row) != d + 1:
                raise ValueError(f"{path}:{lineno}: expected {d + 1} fields")
            label = int(row[0])
            coords = [float(v) for v in row[1:]]
            if label == 1:
                pos.append(coords)
            elif label == -1:
                neg.append(coords)
            else:
                raise ValueError(f"{path}:{lineno}: label must be +1 or -1")
    return Dataset(positives=np.array(pos), negatives=np.array(neg))


def solution_to_dict(sol: PcabSolution) -> dict:
    return {
        "hyperplanes": [
            {"b": h.b, "w": [float(v) for v in h.w]} for h in sol.hyperplanes
        ],
        "error": sol.error,
        "trace": [[float(t), int(e)] for t, e in sol.trace],
    }


def write_solution_json(sol: PcabSolution, path: str | Path) -> None:
    Path(path).write_text(json.dumps(solution_to_dict(sol), indent=2) + "\n")


def read_solution_json(path: str | Path) -> PcabSolution:
    data = json.loads(Path(path).read_text())
    hyperplanes = [
        Hyperplane(b=h["b"], w=np.array(h["w"], dtype=float))
        for h in data["hyperplanes"]
    ]
    trace = [(float(t), int(e)) for t, e in data.get("trace", [])]
    return PcabSolution(hyperplanes=hyperplanes, error=data["error"], trace=trace)
