"""Builders translating a dataset into the mathematical programs.

Each builder returns a ModelSpec; extractors map solved variable values
back to hyperplanes.  Variable naming is uniform: ``b[k]`` and
``w[k][j]`` for hyperplane coefficients, ``x[i][k]`` for assignment
binaries, ``e[i]`` for error binaries, ``xi[i][k]`` for margin slacks.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from .core import Dataset, Hyperplane, WeightFunction, unit_weights
from .solver import ModelSpec, SolveResult

LSVM_INTERSECT_TOL = 1e-7  # below this the hulls are treated as intersecting


@dataclass
class BudgetParams:
    """Hyperplane budget and the model-level constants that go with it."""

    K: int
    big_m: float = 10000.0
    epsilon: float = 0.001  # used by the OV-2007 adaptation only
    weight_fn: WeightFunction = unit_weights

    def __post_init__(self):
        if self.K < 1:
            raise ValueError("budget K must be at least 1")
        if self.big_m <= 0:
            raise ValueError("big_m must be positive")
        if self.epsilon <= 0:
            raise ValueError("epsilon must be positive")


@dataclass
class DualPrices:
    """Master duals: one lambda per negative point plus the budget dual mu."""

    lam: np.ndarray
    mu: float

    def __post_init__(self):
        self.lam = np.asarray(self.lam, dtype=float)
        if not (np.isfinite(self.lam).all() and np.isfinite(self.mu)):
            raise ValueError("dual prices must be finite")


@dataclass
class Column:
    """One generated hyperplane with the negatives it separates."""

    indicator: np.ndarray  # 0/1 over the negative points
    hyperplane: Hyperplane
    reduced_cost: float

    def __post_init__(self):
        self.indicator = np.asarray(self.indicator, dtype=np.int8)


@dataclass
class ColumnPool:
    columns: list[Column] = field(default_factory=list)

    def __len__(self) -> int:
        return len(self.columns)

    def add(self, col: Column) -> None:
        self.columns.append(col)


def _neg_weights(ds: Dataset, weight_fn: WeightFunction) -> np.ndarray:
    return np.array([float(weight_fn(a)) for a in ds.negatives])


def _add_hyperplane_vars(spec: ModelSpec, k: int, d: int) -> None:
    spec.add_var(f"b[{k}]", lb=None, ub=None)
    for j in range(d):
        spec.add_var(f"w[{k}][{j}]", lb=None, ub=None)


def _side_coeffs(k: int, point: np.ndarray) -> list[tuple[str, float]]:
    coeffs = [(f"b[{k}]", 1.0)]
    coeffs += [(f"w[{k}][{j}]", float(point[j])) for j in range(point.shape[0])]
    return coeffs


def build_model_a(ds: Dataset, p: BudgetParams) -> ModelSpec:
    """Assignment model with per-hyperplane violation penalties.

    The bilinear penalty (slack times assignment) is linearized exactly
    through auxiliary variables y >= xi - M(1 - x), y >= 0.
    """
    weights = _neg_weights(ds, p.weight_fn)
    if np.any(weights < 0):
        raise ValueError("this model requires nonnegative weights")
    m, n, d, K = ds.num_positives, ds.num_negatives, ds.dim, p.K
    spec = ModelSpec(sense="min")
    for k in range(K):
        _add_hyperplane_vars(spec, k, d)
    for i in range(n):
        for k in range(K):
            spec.add_var(f"x[{i}][{k}]", lb=0.0, ub=1.0, integer=True)
            spec.add_var(f"xi[{i}][{k}]", lb=0.0)
            spec.add_var(f"y[{i}][{k}]", lb=0.0, obj=weights[i])
    for i in range(n):
        spec.add_constr(
            f"assign[{i}]",
            [(f"x[{i}][{k}]", 1.0) for k in range(K)],
            "=",
            1.0,
        )
    # unlike the counting model, an assigned point may keep a positive
    # violation (that is the penalized depth), so no indicator row on xi
    _add_margin_constraints(spec, ds, range(K), p.big_m, with_bigm=False)
    for i in range(n):
        for k in range(K):
            spec.add_constr(
                f"lin[{i}][{k}]",
                [
                    (f"y[{i}][{k}]", 1.0),
                    (f"xi[{i}][{k}]", -1.0),
                    (f"x[{i}][{k}]", -p.big_m),
                ],
                ">=",
                -p.big_m,
            )
    return spec


def _add_margin_constraints(
    spec: ModelSpec, ds: Dataset, ks: Iterable[int], big_m: float, with_bigm: bool = True
) -> None:
    for k in ks:
        for i, a in enumerate(ds.positives):
            spec.add_constr(f"pos[{i}][{k}]", _side_coeffs(k, a), ">=", 1.0)
        for i, a in enumerate(ds.negatives):
            spec.add_constr(
                f"neg[{i}][{k}]",
                _side_coeffs(k, a) + [(f"xi[{i}][{k}]", -1.0)],
                "<=",
                -1.0,
            )
            if with_bigm:
                spec.add_constr(
                    f"bigm[{i}][{k}]",
                    [(f"xi[{i}][{k}]", 1.0), (f"x[{i}][{k}]", big_m)],
                    "<=",
                    big_m,
                )


def build_model_b(ds: Dataset, p: BudgetParams) -> ModelSpec:
    """Error-counting model: one binary per misplaced negative point."""
    weights = _neg_weights(ds, p.weight_fn)
    n, d, K = ds.num_negatives, ds.dim, p.K
    spec = ModelSpec(sense="min")
    for i in range(n):
        spec.add_var(f"e[{i}]", lb=0.0, ub=1.0, integer=True, obj=weights[i])
    for i in range(n):
        for k in range(K):
            spec.add_var(f"x[{i}][{k}]", lb=0.0, ub=1.0, integer=True)
            spec.add_var(f"xi[{i}][{k}]", lb=0.0)
    for k in range(K):
        _add_hyperplane_vars(spec, k, d)
    for i in range(n):
        spec.add_constr(
            f"assign[{i}]",
            [(f"x[{i}][{k}]", 1.0) for k in range(K)] + [(f"e[{i}]", 1.0)],
            "=",
            1.0,
        )
    _add_margin_constraints(spec, ds, range(K), p.big_m)
    return spec


def build_ov2007(
    ds: Dataset, p: BudgetParams, diameter: float | None = None
) -> ModelSpec:
    """Adapted polyhedral-classification model with indicator binaries.

    ``diameter`` bounds the L-infinity extent of the data; when omitted it
    is taken from the empirical per-coordinate ranges.
    """
    m, n, d, K = ds.num_positives, ds.num_negatives, ds.dim, p.K
    allp = np.vstack([ds.positives, ds.negatives])
    if diameter is None:
        diameter = float(np.max(allp.max(axis=0) - allp.min(axis=0)))
        diameter = max(diameter, 1.0)
    Q = d * diameter
    labels = np.concatenate([np.ones(m), -np.ones(n)])
    weights = np.array([float(p.weight_fn(a)) for a in allp])
    total = m + n
    spec = ModelSpec(sense="min")
    for i in range(total):
        spec.add_var(f"e[{i}]", lb=0.0, ub=1.0, integer=True, obj=weights[i])
    for i in range(total):
        for k in range(K):
            # positives are forced onto the inside of every hyperplane
            ub = 0.0 if labels[i] > 0 else 1.0
            spec.add_var(f"dd[{i}][{k}]", lb=0.0, ub=ub, integer=True)
    for i in range(total):
        spec.add_var(f"mm[{i}]", lb=0.0, ub=1.0, integer=True)
    spec.add_var("v", lb=0.0, ub=1.0, integer=True)
    for k in range(K):
        _add_hyperplane_vars(spec, k, d)
    for i, a in enumerate(allp):
        for k in range(K):
            spec.add_constr(
                f"cls_lo[{i}][{k}]",
                _side_coeffs(k, a) + [(f"dd[{i}][{k}]", Q)],
                ">=",
                0.0,
            )
            spec.add_constr(
                f"cls_hi[{i}][{k}]",
                _side_coeffs(k, a) + [(f"dd[{i}][{k}]", Q)],
                "<=",
                Q - p.epsilon,
            )
        spec.add_constr(
            f"m_up[{i}]",
            [(f"mm[{i}]", 1.0)] + [(f"dd[{i}][{k}]", -1.0) for k in range(K)],
            "<=",
            0.0,
        )
        spec.add_constr(
            f"m_lo[{i}]",
            [(f"mm[{i}]", float(K))] + [(f"dd[{i}][{k}]", -1.0) for k in range(K)],
            ">=",
            0.0,
        )
        li = float(labels[i])
        spec.add_constr(
            f"err_up[{i}]",
            [("v", 2.0), (f"mm[{i}]", 2.0 * li), (f"e[{i}]", -2.0)],
            "<=",
            1.0 + li,
        )
        spec.add_constr(
            f"err_lo[{i}]",
            [("v", 2.0), (f"mm[{i}]", 2.0 * li), (f"e[{i}]", 2.0)],
            ">=",
            1.0 + li,
        )
    return spec


def build_pricing(ds: Dataset, duals: DualPrices, p: BudgetParams) -> ModelSpec:
    """Single-hyperplane pricing model minimizing the reduced cost."""
    n = ds.num_negatives
    if duals.lam.shape[0] != n:
        raise ValueError(
            f"expected {n} lambda entries, got {duals.lam.shape[0]}"
        )
    spec = _single_hyperplane_spec(ds, range(n), p.big_m)
    for i in range(n):
        spec.variables[_x_index(i)].obj = -float(duals.lam[i])
    spec.objective_constant = float(duals.mu)
    return spec


def build_plsm(
    ds: Dataset,
    subset: Sequence[int],
    weight_fn: WeightFunction = unit_weights,
    big_m: float = 10000.0,
) -> ModelSpec:
    """Coverage-maximizing single hyperplane over a subset of negatives."""
    subset = list(subset)
    if not subset:
        raise ValueError("subset must be nonempty")
    spec = _single_hyperplane_spec(ds, subset, big_m)
    spec.sense = "max"
    for pos, i in enumerate(subset):
        spec.variables[2 * pos].obj = float(weight_fn(ds.negatives[i]))
    return spec


def _x_index(pos: int) -> int:
    # _single_hyperplane_spec interleaves x and xi variables
    return 2 * pos


def _single_hyperplane_spec(
    ds: Dataset, subset: Iterable[int], big_m: float
) -> ModelSpec:
    spec = ModelSpec(sense="min")
    subset = list(subset)
    for i in subset:
        spec.add_var(f"x[{i}]", lb=0.0, ub=1.0, integer=True)
        spec.add_var(f"xi[{i}]", lb=0.0)
    spec.add_var("b", lb=None, ub=None)
    for j in range(ds.dim):
        spec.add_var(f"w[{j}]", lb=None, ub=None)
    bcoef = [("b", 1.0)]
    for i, a in enumerate(ds.positives):
        spec.add_constr(
            f"pos[{i}]",
            bcoef + [(f"w[{j}]", float(a[j])) for j in range(ds.dim)],
            ">=",
            1.0,
        )
    for i in subset:
        a = ds.negatives[i]
        spec.add_constr(
            f"neg[{i}]",
            bcoef
            + [(f"w[{j}]", float(a[j])) for j in range(ds.dim)]
            + [(f"xi[{i}]", -1.0)],
            "<=",
            -1.0,
        )
        spec.add_constr(
            f"bigm[{i}]",
            [(f"xi[{i}]", 1.0), (f"x[{i}]", big_m)],
            "<=",
            big_m,
        )
    return spec


def build_lsvm(ds: Dataset, subset: Sequence[int]) -> ModelSpec:
    """Hull-intersection certificate LP.

    A zero optimum means a convex combination of the positives equals one
    of the selected negatives, i.e. the two hulls intersect.
    """
    subset = list(subset)
    if not subset:
        raise ValueError("subset must be nonempty")
    m, d = ds.num_positives, ds.dim
    spec = ModelSpec(sense="min")
    for i in range(m):
        spec.add_var(f"alpha[{i}]", lb=0.0, ub=1.0)
    for i in subset:
        spec.add_var(f"beta[{i}]", lb=0.0, ub=1.0)
    for j in range(d):
        spec.add_var(f"xi[{j}]", lb=0.0, obj=1.0)
        spec.add_var(f"eta[{j}]", lb=0.0, obj=1.0)
    for j in range(d):
        coeffs = [(f"alpha[{i}]", float(ds.positives[i, j])) for i in range(m)]
        coeffs += [(f"beta[{i}]", -float(ds.negatives[i, j])) for i in subset]
        coeffs += [(f"xi[{j}]", 1.0), (f"eta[{j}]", -1.0)]
        spec.add_constr(f"match[{j}]", coeffs, "=", 0.0)
    spec.add_constr(
        "conv_pos", [(f"alpha[{i}]", 1.0) for i in range(m)], "=", 1.0
    )
    spec.add_constr(
        "conv_neg", [(f"beta[{i}]", 1.0) for i in subset], "=", 1.0
    )
    return spec


def _master_spec(
    pool: ColumnPool, ds: Dataset, p: BudgetParams, integral: bool
) -> ModelSpec:
    weights = _neg_weights(ds, p.weight_fn)
    n = ds.num_negatives
    spec = ModelSpec(sense="min")
    for i in range(n):
        spec.add_var(f"e[{i}]", lb=0.0, ub=1.0, integer=integral, obj=weights[i])
    for q, col in enumerate(pool.columns):
        spec.add_var(f"z[{q}]", lb=0.0, ub=1.0, integer=integral)
    for i in range(n):
        coeffs = [(f"e[{i}]", 1.0)]
        coeffs += [
            (f"z[{q}]", 1.0)
            for q, col in enumerate(pool.columns)
            if col.indicator[i]
        ]
        spec.add_constr(f"cover[{i}]", coeffs, ">=", 1.0)
    spec.add_constr(
        "budget",
        [(f"z[{q}]", -1.0) for q in range(len(pool.columns))],
        ">=",
        -float(p.K),
    )
    return spec


def build_rmm(pool: ColumnPool, ds: Dataset, p: BudgetParams) -> ModelSpec:
    """Continuous restricted master over the current column pool."""
    return _master_spec(pool, ds, p, integral=False)


def build_hcm(pool: ColumnPool, ds: Dataset, p: BudgetParams) -> ModelSpec:
    """Binary column-selection model: pick at most K pool columns."""
    return _master_spec(pool, ds, p, integral=True)


def master_duals(ds: Dataset, result: SolveResult) -> DualPrices:
    """Read the cover-row and budget-row duals out of a master solve."""
    if result.duals is None:
        raise ValueError("master result carries no duals")
    lam = np.array(
        [result.duals[f"cover[{i}]"] for i in range(ds.num_negatives)]
    )
    return DualPrices(lam=lam, mu=float(result.duals["budget"]))


def hyperplanes_from_values(
    values: dict[str, float], num_hyperplanes: int, dim: int
) -> list[Hyperplane]:
    """Read b[k], w[k][j] entries out of a primal value map."""
    out = []
    for k in range(num_hyperplanes):
        try:
            b = values[f"b[{k}]"]
            w = np.array([values[f"w[{k}][{j}]"] for j in range(dim)])
        except KeyError as exc:
            raise ValueError(f"missing hyperplane variable: {exc}") from exc
        out.append(Hyperplane(b=b, w=w))
    return out


def extract_hyperplanes(
    result: SolveResult, num_hyperplanes: int, dim: int
) -> list[Hyperplane]:
    """Read b[k], w[k][j] values out of a compact-model solve."""
    if result.values is None:
        raise ValueError(f"result has no primal values (status {result.status})")
    return hyperplanes_from_values(result.values, num_hyperplanes, dim)


def extract_single_hyperplane(result: SolveResult, dim: int) -> Hyperplane:
    """Read b, w[j] values out of a pricing-shaped solve."""
    if result.values is None:
        raise ValueError(f"result has no primal values (status {result.status})")
    return Hyperplane(
        b=result.values["b"],
        w=np.array([result.values[f"w[{j}]"] for j in range(dim)]),
    )


def extract_selected_columns(
    result: SolveResult, pool: ColumnPool, tol: float = 1e-6
) -> list[Column]:
    """Columns whose selection binary is 1 in a column-choice solve."""
    if result.values is None:
        raise ValueError(f"result has no primal values (status {result.status})")
    return [
        col
        for q, col in enumerate(pool.columns)
        if result.values.get(f"z[{q}]", 0.0) > 1.0 - tol
    ]


def hulls_intersect(lsvm_result: SolveResult) -> bool:
    """Interpret an intersection-certificate LP optimum."""
    if lsvm_result.objective is None:
        raise ValueError("certificate LP did not solve to optimality")
    return lsvm_result.objective < LSVM_INTERSECT_TOL
