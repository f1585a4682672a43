"""Heuristic pricing: grow a separable negative subset, then multi-start.

``grow_column`` builds one column by scanning negatives in decreasing
dual order and keeping those that leave the grown subset's convex hull
disjoint from the positive hull.  ``multistart_pricing`` launches up to
``n_max`` such runs concurrently, with dual-weighted randomized starting
points, and collects every column produced.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .core import Dataset, Hyperplane, shift_to_positives
from .models import (
    Column,
    DualPrices,
    build_lsvm,
    hulls_intersect,
)
from .solver import ModelSpec, SolveOptions, solve_lp


@dataclass
class GrowInput:
    """Inputs of one growth run.

    ``order`` must sort the negative indices by nonincreasing lambda;
    ``start`` is the seed negative; ``thr`` caps how many candidates from
    the head of the order are considered.
    """

    order: np.ndarray
    start: int
    thr: int

    def __post_init__(self):
        self.order = np.asarray(self.order, dtype=int)


def dual_order(lam: np.ndarray) -> np.ndarray:
    """Indices of the negatives sorted by nonincreasing dual value."""
    # stable sort keeps index order among equal duals, for determinism
    return np.argsort(-np.asarray(lam, dtype=float), kind="stable")


def separating_hyperplane(
    ds: Dataset, subset: list[int], time_limit: float = 30.0
) -> Hyperplane:
    """Margin-1 hyperplane separating the positives from ``subset``.

    Minimizes the L1 norm of w so the answer is a bounded, deterministic
    representative of the feasible cone.  Raises if the LP is infeasible,
    which cannot happen when the hulls were certified disjoint.
    """
    d = ds.dim
    spec = ModelSpec(sense="min")
    spec.add_var("b", lb=None, ub=None)
    for j in range(d):
        spec.add_var(f"wp[{j}]", lb=0.0, obj=1.0)
        spec.add_var(f"wn[{j}]", lb=0.0, obj=1.0)

    def side(point):
        coeffs = [("b", 1.0)]
        for j in range(d):
            coeffs.append((f"wp[{j}]", float(point[j])))
            coeffs.append((f"wn[{j}]", -float(point[j])))
        return coeffs

    for i, a in enumerate(ds.positives):
        spec.add_constr(f"pos[{i}]", side(a), ">=", 1.0)
    for i in subset:
        spec.add_constr(f"neg[{i}]", side(ds.negatives[i]), "<=", -1.0)
    res = solve_lp(spec, SolveOptions(time_limit=time_limit))
    if res.status != "optimal":
        raise RuntimeError(
            f"separation LP ended with status {res.status} on a "
            "certified-disjoint subset"
        )
    w = np.array(
        [res.values[f"wp[{j}]"] - res.values[f"wn[{j}]"] for j in range(d)]
    )
    return Hyperplane(b=res.values["b"], w=w)


def grow_column(
    ds: Dataset,
    inp: GrowInput,
    lp_time_limit: float = 30.0,
    duals: DualPrices | None = None,
) -> Column:
    """Build one column from a single growth run.

    When duals are given, the column carries its reduced cost
    -sum(lambda over separated points) + mu; otherwise 0.
    """
    n = ds.num_negatives
    kept = [int(inp.start)]
    considered = 0
    limit = min(n, inp.thr)
    for counter in range(limit):
        cand = int(inp.order[counter])
        if cand == inp.start:
            continue
        trial = kept + [cand]
        res = solve_lp(
            build_lsvm(ds, trial), SolveOptions(time_limit=lp_time_limit)
        )
        if not hulls_intersect(res):
            kept = trial
        considered += 1
    h = separating_hyperplane(ds, kept, time_limit=lp_time_limit)
    h = shift_to_positives(h, ds)
    indicator = (h.values(ds.negatives) <= -1.0 + 1e-9).astype(np.int8)
    # points that drove the construction satisfy the margin by the LP
    indicator[np.array(kept, dtype=int)] = 1
    rc = 0.0
    if duals is not None:
        rc = float(-(indicator.astype(float) @ duals.lam) + duals.mu)
    return Column(indicator=indicator, hyperplane=h, reduced_cost=rc)


@dataclass
class MultistartState:
    """Carries the best previous column's indicator between iterations."""

    x_prev: np.ndarray  # all-ones before the first pricing round

    def __post_init__(self):
        self.x_prev = np.asarray(self.x_prev, dtype=np.int8)

    @classmethod
    def initial(cls, n: int) -> "MultistartState":
        return cls(x_prev=np.ones(n, dtype=np.int8))


def _draw_weights(mask: np.ndarray, lam: np.ndarray) -> np.ndarray:
    """Dual-weighted draw distribution with fallbacks for empty support."""
    w = mask.astype(float) * np.maximum(lam, 0.0)
    if w.sum() <= 0.0:
        w = np.maximum(lam, 0.0)
    if w.sum() <= 0.0:
        w = np.ones_like(lam)
    return w


def multistart_pricing(
    ds: Dataset,
    duals: DualPrices,
    state: MultistartState,
    thr: int,
    n_max: int,
    rng: np.random.Generator,
    lp_time_limit: float = 30.0,
) -> list[Column]:
    """Run up to ``n_max`` concurrent growth processes.

    The first start index is drawn among points the previous best column
    separated; later starts among those it missed (or anywhere, when it
    separated everything).  Starts are drawn without replacement, so at
    most min(n, n_max) processes launch.
    """
    n = ds.num_negatives
    lam = duals.lam
    order = dual_order(lam)

    first_w = _draw_weights(state.x_prev, lam)
    if np.any(state.x_prev == 0):
        y_prev = 1 - state.x_prev
    else:
        y_prev = np.ones(n, dtype=np.int8)
    rest_w = _draw_weights(y_prev, lam)

    starts: list[int] = []
    weights = first_w.copy()
    while len(starts) < min(n_max, n):
        if weights.sum() <= 0.0:
            break
        p = weights / weights.sum()
        start = int(rng.choice(n, p=p))
        starts.append(start)
        weights = rest_w.copy()
        weights[np.array(starts, dtype=int)] = 0.0

    def run(start: int) -> Column:
        return grow_column(
            ds, GrowInput(order=order, start=start, thr=thr), lp_time_limit, duals
        )

    if len(starts) == 1:
        return [run(starts[0])]
    with ThreadPoolExecutor(max_workers=len(starts)) as pool:
        return list(pool.map(run, starts))
