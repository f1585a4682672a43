"""Linear and mixed-integer linear solver kernel.

LP solves are delegated to scipy's HiGHS interface, which returns the
constraint marginals we need as duals.  The MILP layer is a deterministic
branch-and-bound over LP relaxations: most-fractional branching,
best-bound node selection, lowest-index tie breaks.  Incumbents come from
integral node relaxations and from a rounding/diving heuristic run at the
root, which is also what the root-node-only mode returns.
"""

from __future__ import annotations

import heapq
import io
import time
from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np
import scipy.sparse as sp
from scipy.optimize import linprog

INT_TOL = 1e-6

Relation = str  # one of "<=", "=", ">="


class MalformedModelError(ValueError):
    """The model references unknown variables or has inconsistent bounds."""


@dataclass
class Variable:
    name: str
    lb: float | None = 0.0
    ub: float | None = None
    integer: bool = False
    obj: float = 0.0


@dataclass
class Constraint:
    name: str
    coeffs: list[tuple[str, float]]
    relation: Relation
    rhs: float


@dataclass
class ModelSpec:
    sense: str = "min"  # "min" or "max"
    variables: list[Variable] = field(default_factory=list)
    constraints: list[Constraint] = field(default_factory=list)
    objective_constant: float = 0.0

    def add_var(
        self,
        name: str,
        lb: float | None = 0.0,
        ub: float | None = None,
        integer: bool = False,
        obj: float = 0.0,
    ) -> Variable:
        v = Variable(name=name, lb=lb, ub=ub, integer=integer, obj=obj)
        self.variables.append(v)
        return v

    def add_constr(
        self,
        name: str,
        coeffs: list[tuple[str, float]],
        relation: Relation,
        rhs: float,
    ) -> Constraint:
        c = Constraint(name=name, coeffs=coeffs, relation=relation, rhs=rhs)
        self.constraints.append(c)
        return c

    @property
    def has_integers(self) -> bool:
        return any(v.integer for v in self.variables)


@dataclass
class SolveOptions:
    time_limit: float = 60.0
    root_node_only: bool = False
    mip_gap: float = 1e-9
    feas_tol: float = 1e-6
    seed: int = 0
    dive_lp_budget: int | None = None  # max LP solves in the dive; None: default cap

    def __post_init__(self):
        if self.time_limit <= 0:
            raise ValueError("time_limit must be positive")
        if self.mip_gap < 0 or self.feas_tol < 0:
            raise ValueError("tolerances must be nonnegative")


@dataclass
class SolveResult:
    status: str  # optimal | feasible-incumbent | infeasible | unbounded | time-limit
    values: dict[str, float] | None = None
    objective: float | None = None
    best_bound: float | None = None
    duals: dict[str, float] | None = None
    dual_objective: float | None = None
    nodes: int = 0

    @property
    def has_solution(self) -> bool:
        return self.values is not None

    def gap(self) -> float | None:
        if self.objective is None or self.best_bound is None:
            return None
        return abs(self.objective - self.best_bound)


# ---------------------------------------------------------------------------
# Compilation to array form


class _Compiled:
    """Array form of a ModelSpec; min sense, <= rows in A_ub, = rows in A_eq."""

    def __init__(self, spec: ModelSpec):
        if spec.sense not in ("min", "max"):
            raise MalformedModelError(f"unknown sense {spec.sense!r}")
        self.spec = spec
        self.names = [v.name for v in spec.variables]
        self.index = {n: i for i, n in enumerate(self.names)}
        if len(self.index) != len(self.names):
            raise MalformedModelError("duplicate variable names")
        n = len(self.names)
        self.lb = np.array(
            [-np.inf if v.lb is None else v.lb for v in spec.variables]
        )
        self.ub = np.array(
            [np.inf if v.ub is None else v.ub for v in spec.variables]
        )
        if np.any(self.lb > self.ub):
            raise MalformedModelError("variable with lb > ub")
        self.integer = np.array([v.integer for v in spec.variables], dtype=bool)
        sign = 1.0 if spec.sense == "min" else -1.0
        self.c = sign * np.array([v.obj for v in spec.variables])
        self.c0 = sign * spec.objective_constant
        self.obj_sign = sign

        rows_ub, rhs_ub, names_ub, flip_ub = [], [], [], []
        rows_eq, rhs_eq, names_eq = [], [], []
        data, ri, ci = [], [], []

        def append_row(rows, coeffs, scale):
            r = len(rows)
            rows.append(r)
            for var, coef in coeffs:
                if var not in self.index:
                    raise MalformedModelError(f"unknown variable {var!r}")
                data.append(scale * coef)
                ri.append(r)
                ci.append(self.index[var])

        data_eq, ri_eq, ci_eq = [], [], []
        for con in spec.constraints:
            if con.relation == "<=":
                append_row(rows_ub, con.coeffs, 1.0)
                rhs_ub.append(con.rhs)
                names_ub.append(con.name)
                flip_ub.append(1.0)
            elif con.relation == ">=":
                append_row(rows_ub, con.coeffs, -1.0)
                rhs_ub.append(-con.rhs)
                names_ub.append(con.name)
                flip_ub.append(-1.0)
            elif con.relation == "=":
                r = len(rows_eq)
                rows_eq.append(r)
                for var, coef in con.coeffs:
                    if var not in self.index:
                        raise MalformedModelError(f"unknown variable {var!r}")
                    data_eq.append(coef)
                    ri_eq.append(r)
                    ci_eq.append(self.index[var])
                rhs_eq.append(con.rhs)
                names_eq.append(con.name)
            else:
                raise MalformedModelError(f"unknown relation {con.relation!r}")

        self.A_ub = (
            sp.csr_matrix((data, (ri, ci)), shape=(len(rows_ub), n))
            if rows_ub
            else None
        )
        self.b_ub = np.array(rhs_ub)
        self.names_ub = names_ub
        self.flip_ub = np.array(flip_ub)
        self.A_eq = (
            sp.csr_matrix((data_eq, (ri_eq, ci_eq)), shape=(len(rows_eq), n))
            if rows_eq
            else None
        )
        self.b_eq = np.array(rhs_eq)
        self.names_eq = names_eq

    def lp(
        self,
        lb: np.ndarray,
        ub: np.ndarray,
        time_limit: float | None = None,
        c: np.ndarray | None = None,
    ):
        bounds = [
            (None if np.isneginf(l) else l, None if np.isposinf(u) else u)
            for l, u in zip(lb, ub)
        ]
        options = {"presolve": True}
        if time_limit is not None:
            options["time_limit"] = max(time_limit, 0.01)
        return linprog(
            c=self.c if c is None else c,
            A_ub=self.A_ub,
            b_ub=self.b_ub if self.A_ub is not None else None,
            A_eq=self.A_eq,
            b_eq=self.b_eq if self.A_eq is not None else None,
            bounds=bounds,
            method="highs",
            options=options,
        )

    def result_from_lp(self, res) -> SolveResult:
        if res.status == 2:
            return SolveResult(status="infeasible")
        if res.status == 3:
            return SolveResult(status="unbounded")
        if res.status != 0:
            return SolveResult(status="time-limit")
        values = dict(zip(self.names, (float(v) for v in res.x)))
        obj = self.obj_sign * (float(res.fun) + self.c0)
        duals: dict[str, float] = {}
        if self.A_ub is not None and res.ineqlin is not None:
            for name, flip, marg in zip(
                self.names_ub, self.flip_ub, res.ineqlin.marginals
            ):
                # report duals for the constraint as written; for a min
                # problem a >= row then has a nonnegative dual
                duals[name] = self.obj_sign * flip * float(marg)
        if self.A_eq is not None and res.eqlin is not None:
            for name, marg in zip(self.names_eq, res.eqlin.marginals):
                duals[name] = self.obj_sign * float(marg)
        # dual objective: rhs . y plus active bound contributions
        dual_obj = 0.0
        if self.A_ub is not None:
            dual_obj += float(self.b_ub @ res.ineqlin.marginals)
        if self.A_eq is not None:
            dual_obj += float(self.b_eq @ res.eqlin.marginals)
        lb = np.array([-np.inf if b[0] is None else b[0] for b in self._last_bounds])
        ub = np.array([np.inf if b[1] is None else b[1] for b in self._last_bounds])
        low = np.where(np.isfinite(lb), lb, 0.0)
        upp = np.where(np.isfinite(ub), ub, 0.0)
        dual_obj += float(low @ res.lower.marginals + upp @ res.upper.marginals)
        dual_obj = self.obj_sign * (dual_obj + self.c0)
        return SolveResult(
            status="optimal",
            values=values,
            objective=obj,
            best_bound=obj,
            duals=duals,
            dual_objective=dual_obj,
        )

    def solve_bounds(
        self, lb: np.ndarray, ub: np.ndarray, time_limit: float | None = None
    ) -> SolveResult:
        self._last_bounds = [
            (None if np.isneginf(l) else l, None if np.isposinf(u) else u)
            for l, u in zip(lb, ub)
        ]
        res = self.lp(lb, ub, time_limit)
        return self.result_from_lp(res)


def solve_lp(spec: ModelSpec, opts: SolveOptions | None = None) -> SolveResult:
    """Solve the LP described by spec; duals are reported per constraint."""
    opts = opts or SolveOptions()
    if spec.has_integers:
        raise MalformedModelError("solve_lp got a spec with integer variables")
    comp = _Compiled(spec)
    return comp.solve_bounds(comp.lb, comp.ub, time_limit=opts.time_limit)


# ---------------------------------------------------------------------------
# Branch and bound

IncumbentCallback = Callable[[float, float, dict[str, float]], None]


def _fractionality(x: np.ndarray, mask: np.ndarray) -> np.ndarray:
    frac = np.abs(x - np.round(x))
    frac[~mask] = 0.0
    return frac


def _sweep(
    comp: _Compiled, lb: np.ndarray, ub: np.ndarray, x: np.ndarray
) -> tuple[np.ndarray, float] | None:
    """Fix all remaining fractional integers in one shot and re-solve.

    Tries nearest-integer, all-down, all-up rounding in that order.
    """
    frac = _fractionality(x, comp.integer)
    idx = np.where(frac > INT_TOL)[0]
    if idx.size == 0:
        return x, float(comp.c @ x)
    for mode in ("nearest", "down", "up", "down-high", "up-low"):
        lb2, ub2 = lb.copy(), ub.copy()
        for j in idx:
            if mode == "nearest":
                val = float(np.floor(x[j] + 0.5))
            elif mode == "down":
                val = float(np.floor(x[j]))
            elif mode == "up":
                val = float(np.ceil(x[j]))
            elif mode == "down-high":
                # push the high ones down, let equality-coupled partners
                # (left free) absorb the slack
                if x[j] - np.floor(x[j]) < 0.5:
                    continue
                val = float(np.floor(x[j]))
            else:  # up-low
                if x[j] - np.floor(x[j]) >= 0.5:
                    continue
                val = float(np.ceil(x[j]))
            val = min(max(val, lb2[j]), ub2[j])
            lb2[j] = ub2[j] = val
        res = comp.lp(lb2, ub2)
        if res.status != 0:
            continue
        left = _fractionality(res.x, comp.integer)
        if left.max() <= INT_TOL:
            return res.x, float(comp.c @ res.x)
        # partial modes may leave stragglers; one nearest-fix follow-up
        for j in np.where(left > INT_TOL)[0]:
            val = float(np.floor(res.x[j] + 0.5))
            val = min(max(val, lb2[j]), ub2[j])
            lb2[j] = ub2[j] = val
        res = comp.lp(lb2, ub2)
        if res.status == 0 and _fractionality(res.x, comp.integer).max() <= INT_TOL:
            return res.x, float(comp.c @ res.x)
    return None


def _dive(
    comp: _Compiled,
    lb: np.ndarray,
    ub: np.ndarray,
    x0: np.ndarray,
    deadline: float,
    max_lp_solves: int,
    c_dive: np.ndarray | None = None,
) -> tuple[np.ndarray, float] | None:
    """Batched rounding of fractional integers with LP re-solves.

    Fractionality of an activation binary in a big-M row is its scaled
    constraint violation, so sorting by fractionality ranks variables
    from safe to doubtful.  Each round tentatively fixes the prefix of
    that order to nearest integers, halving the prefix on infeasibility;
    a single refused variable is flipped to its other neighbour.  The
    dive LPs use ``c_dive``, a perturbed copy of the objective that
    breaks the dual degeneracy of big-M roots (reported objectives stay
    exact).  When the LP budget or deadline runs out the rest is closed
    with _sweep.  Returns the integral point and its objective, or None.
    """
    lb = lb.copy()
    ub = ub.copy()
    x = x0
    solves = 0
    cost = comp.c if c_dive is None else c_dive
    if c_dive is not None:
        res = comp.lp(lb, ub, c=c_dive)
        solves += 1
        if res.status == 0:
            x = res.x
    last_accepted = None  # adaptive start size: twice the last success
    while solves < max_lp_solves and time.monotonic() < deadline:
        frac = _fractionality(x, comp.integer)
        pending = np.where(frac > INT_TOL)[0]
        if pending.size == 0:
            return x, float(comp.c @ x)
        # variables whose nearest rounding improves the objective go first;
        # within each class, the least fractional (safest) first
        nearest = np.floor(x[pending] + 0.5)
        worsens = (cost[pending] * (nearest - x[pending]) >= 0).astype(int)
        order = pending[np.lexsort((pending, frac[pending], worsens))]
        batch_size = order.size
        if last_accepted is not None:
            batch_size = min(batch_size, max(2 * last_accepted, 1))
        accepted = None
        while batch_size >= 1:
            batch = order[:batch_size]
            lb2, ub2 = lb.copy(), ub.copy()
            for j in batch:
                val = float(np.floor(x[j] + 0.5))
                val = min(max(val, lb2[j]), ub2[j])
                lb2[j] = ub2[j] = val
            res = comp.lp(lb2, ub2, c=c_dive)
            solves += 1
            if res.status == 0:
                accepted = (lb2, ub2, res)
                break
            if batch_size == 1:
                j = int(batch[0])
                val = float(np.floor(x[j] + 0.5))
                other = val - 1.0 if val > x[j] else val + 1.0
                if other < lb[j] or other > ub[j]:
                    break
                lb2, ub2 = lb.copy(), ub.copy()
                lb2[j] = ub2[j] = other
                res = comp.lp(lb2, ub2, c=c_dive)
                solves += 1
                if res.status == 0:
                    accepted = (lb2, ub2, res)
                break
            if solves >= max_lp_solves or time.monotonic() > deadline:
                break
            batch_size = (batch_size + 1) // 2
        if accepted is None:
            break
        last_accepted = len(batch)
        lb, ub, res = accepted
        x = res.x
    return _sweep(comp, lb, ub, x)


def solve_milp(
    spec: ModelSpec,
    opts: SolveOptions | None = None,
    on_incumbent: IncumbentCallback | None = None,
) -> SolveResult:
    """Branch-and-bound over LP relaxations.

    With ``root_node_only`` the LP relaxation is solved once, the diving
    heuristic is applied once, and the best point found is returned.
    Otherwise the tree is explored best-bound-first until optimality
    within ``mip_gap``, or until the time limit, returning the incumbent
    plus the proven bound.
    """
    opts = opts or SolveOptions()
    comp = _Compiled(spec)
    start = time.monotonic()
    deadline = start + opts.time_limit

    int_idx = np.where(comp.integer)[0]
    if int_idx.size == 0:
        return solve_lp(spec, opts)

    def make_result(status, inc_x, inc_obj, bound, nodes) -> SolveResult:
        if inc_x is None:
            return SolveResult(
                status=status,
                best_bound=None if bound is None else comp.obj_sign * (bound + comp.c0),
                nodes=nodes,
            )
        values = dict(zip(comp.names, (float(v) for v in inc_x)))
        return SolveResult(
            status=status,
            values=values,
            objective=comp.obj_sign * (inc_obj + comp.c0),
            best_bound=None if bound is None else comp.obj_sign * (bound + comp.c0),
            nodes=nodes,
        )

    root = comp.lp(comp.lb, comp.ub, time_limit=opts.time_limit)
    if root.status == 2:
        return SolveResult(status="infeasible")
    if root.status == 3:
        return SolveResult(status="unbounded")
    if root.status != 0:
        return SolveResult(status="time-limit")

    incumbent_x = None
    incumbent_obj = np.inf
    nodes_solved = 1

    def record_incumbent(x, obj):
        nonlocal incumbent_x, incumbent_obj
        if obj < incumbent_obj - 1e-12:
            incumbent_x = np.array(x)
            incumbent_obj = obj
            if on_incumbent is not None:
                values = dict(zip(comp.names, (float(v) for v in x)))
                on_incumbent(
                    time.monotonic() - start,
                    comp.obj_sign * (obj + comp.c0),
                    values,
                )

    root_obj = float(root.fun)
    root_frac = _fractionality(root.x, comp.integer)
    if root_frac.max() <= INT_TOL:
        record_incumbent(root.x, root_obj)
        return make_result("optimal", incumbent_x, incumbent_obj, root_obj, nodes_solved)

    max_lp = opts.dive_lp_budget if opts.dive_lp_budget is not None else 200
    dive_deadline = min(deadline, time.monotonic() + 0.7 * opts.time_limit)
    # tiny seeded objective perturbation on the integers: big-M roots are
    # dually degenerate (many optimal vertices, all uninformative), and a
    # perturbed vertex gives the dive a meaningful fractionality ranking
    rng = np.random.default_rng(opts.seed)
    scale = 1e-4 * max(1.0, float(np.abs(comp.c).max()))
    c_dive = comp.c.astype(float).copy()
    c_dive[int_idx] += scale * rng.uniform(-1.0, 1.0, int_idx.size)
    dived = _dive(comp, comp.lb, comp.ub, root.x, dive_deadline, max_lp, c_dive)
    if dived is not None:
        record_incumbent(*dived)

    if opts.root_node_only:
        if incumbent_x is None:
            return make_result("time-limit", None, None, root_obj, nodes_solved)
        status = (
            "optimal"
            if incumbent_obj - root_obj <= max(opts.mip_gap * abs(incumbent_obj), 1e-9)
            else "feasible-incumbent"
        )
        return make_result(status, incumbent_x, incumbent_obj, root_obj, nodes_solved)

    # best-bound queue of (parent bound, insertion order, bound overrides)
    heap: list[tuple[float, int, np.ndarray, np.ndarray, np.ndarray]] = []
    seq = 0
    heapq.heappush(heap, (root_obj, seq, comp.lb.copy(), comp.ub.copy(), root.x))

    def gap_closed(bound):
        return incumbent_obj - bound <= max(
            opts.mip_gap * abs(incumbent_obj), 1e-9
        )

    timed_out = False
    while heap:
        bound, _, lb, ub, x_parent = heapq.heappop(heap)
        if incumbent_x is not None and gap_closed(bound):
            # remaining nodes are at least as bad; done
            heap = []
            break
        if time.monotonic() > deadline:
            timed_out = True
            break
        frac = _fractionality(x_parent, comp.integer)
        j = int(np.argmax(frac))  # argmax takes the lowest index on ties
        lo = float(np.floor(x_parent[j]))
        for child_lb, child_ub in (
            (lb, _clip_ub(ub, j, lo)),
            (_clip_lb(lb, j, lo + 1.0), ub),
        ):
            if child_lb[j] > child_ub[j]:
                continue
            res = comp.lp(child_lb, child_ub)
            nodes_solved += 1
            if res.status != 0:
                continue
            child_obj = float(res.fun)
            if incumbent_x is not None and gap_closed(child_obj):
                continue
            if _fractionality(res.x, comp.integer).max() <= INT_TOL:
                record_incumbent(res.x, child_obj)
            else:
                seq += 1
                heapq.heappush(heap, (child_obj, seq, child_lb, child_ub, res.x))

    if heap:
        best_bound = min(min(h[0] for h in heap), incumbent_obj)
    else:
        best_bound = incumbent_obj if incumbent_x is not None else root_obj
    if incumbent_x is None:
        return make_result("time-limit", None, None, best_bound, nodes_solved)
    if timed_out or (heap and not gap_closed(best_bound)):
        status = "time-limit" if timed_out else "feasible-incumbent"
        return make_result(status, incumbent_x, incumbent_obj, best_bound, nodes_solved)
    return make_result("optimal", incumbent_x, incumbent_obj, best_bound, nodes_solved)


def _clip_ub(ub: np.ndarray, j: int, val: float) -> np.ndarray:
    out = ub.copy()
    out[j] = min(out[j], val)
    return out


def _clip_lb(lb: np.ndarray, j: int, val: float) -> np.ndarray:
    out = lb.copy()
    out[j] = max(out[j], val)
    return out


# ---------------------------------------------------------------------------
# LP text format dump


def write_lp_text(spec: ModelSpec) -> str:
    """Human-readable LP format for cross-checking with external solvers."""
    out = io.StringIO()
    out.write("Minimize\n" if spec.sense == "min" else "Maximize\n")
    terms = [
        f"{v.obj:+g} {v.name}" for v in spec.variables if v.obj != 0.0
    ]
    if spec.objective_constant:
        terms.append(f"{spec.objective_constant:+g}")
    out.write(" obj: " + (" ".join(terms) if terms else "0") + "\n")
    out.write("Subject To\n")
    rel_map = {"<=": "<=", ">=": ">=", "=": "="}
    for con in spec.constraints:
        lhs = " ".join(f"{coef:+g} {var}" for var, coef in con.coeffs)
        out.write(f" {con.name}: {lhs} {rel_map[con.relation]} {con.rhs:g}\n")
    out.write("Bounds\n")
    for v in spec.variables:
        lo = "-inf" if v.lb is None else f"{v.lb:g}"
        hi = "+inf" if v.ub is None else f"{v.ub:g}"
        out.write(f" {lo} <= {v.name} <= {hi}\n")
    generals = [v.name for v in spec.variables if v.integer]
    if generals:
        out.write("Generals\n")
        for name in generals:
            out.write(f" {name}\n")
    out.write("End\n")
    return out.getvalue()
