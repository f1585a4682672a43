"""Column-generation driver with per-iteration column selection.

Each iteration solves the restricted master LP for duals, prices new
columns (exact root-node pricing or the multistart heuristic), adds the
negatively-priced ones to the pool, and re-selects at most K columns with
the binary choice model to track the incumbent error.  Stops when no
column prices out, the error hits zero, or the time budget runs out.
"""

from __future__ import annotations

import csv
import time
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .core import Dataset, PcabSolution, separation_error
from .models import (
    BudgetParams,
    Column,
    ColumnPool,
    DualPrices,
    build_hcm,
    build_pricing,
    build_rmm,
    extract_selected_columns,
    extract_single_hyperplane,
    master_duals,
)
from .pricing import MultistartState, multistart_pricing
from .solver import SolveOptions, solve_lp, solve_milp


@dataclass
class ColgenConfig:
    pricer: str = "ahp"  # "exact-root-node" or "ahp"
    time_limit: float = 60.0
    thr: int | None = None  # candidate cap per growth run; defaults to d
    n_max: int = 8
    seed: int = 0
    warm_start_with_greedy: bool = False

    def __post_init__(self):
        if self.pricer not in ("exact-root-node", "ahp"):
            raise ValueError(f"unknown pricer {self.pricer!r}")
        if self.thr is not None and self.thr < 1:
            raise ValueError("thr must be at least 1")
        if self.n_max < 1:
            raise ValueError("n_max must be at least 1")
        if self.time_limit <= 0:
            raise ValueError("time_limit must be positive")


@dataclass
class ColgenTelemetry:
    iterations: int = 0
    columns_generated: int = 0
    last_pricing_gap: float | None = None  # exact pricer only
    pricing_seconds: float = 0.0
    master_seconds: float = 0.0
    choice_seconds: float = 0.0
    hit_time_limit: bool = False
    events: list[dict] = field(default_factory=list)
    # per-iteration duals and the columns priced under them
    audit: list[dict] = field(default_factory=list)


def reduced_cost(col_indicator: np.ndarray, duals: DualPrices) -> float:
    return float(-(np.asarray(col_indicator, dtype=float) @ duals.lam) + duals.mu)


def initialize_master(
    ds: Dataset, p: BudgetParams, cfg: ColgenConfig
) -> ColumnPool:
    """Empty pool, or greedy-produced columns when warm start is on."""
    pool = ColumnPool()
    if cfg.warm_start_with_greedy:
        from .greedy import run_greedy  # local import to avoid a cycle

        sol = run_greedy(
            ds,
            p,
            SolveOptions(
                time_limit=max(cfg.time_limit / 4.0, 1.0), seed=cfg.seed
            ),
        )
        for h in sol.hyperplanes:
            indicator = (h.values(ds.negatives) <= -1.0 + 1e-9).astype(np.int8)
            pool.add(Column(indicator=indicator, hyperplane=h, reduced_cost=0.0))
    return pool


def _exact_pricing(
    ds: Dataset, duals: DualPrices, p: BudgetParams, budget: float, tele
) -> list[Column]:
    spec = build_pricing(ds, duals, p)
    opts = SolveOptions(
        time_limit=max(budget, 0.1),
        root_node_only=True,
        dive_lp_budget=None,
    )
    res = solve_milp(spec, opts)
    tele.last_pricing_gap = res.gap()
    if not res.has_solution:
        return []
    h = extract_single_hyperplane(res, ds.dim)
    if h.is_degenerate():
        return []
    # polish: any negative at margin distance belongs to the column
    indicator = (h.values(ds.negatives) <= -1.0 + 1e-9).astype(np.int8)
    return [
        Column(
            indicator=indicator,
            hyperplane=h,
            reduced_cost=reduced_cost(indicator, duals),
        )
    ]


def run_colgen(
    ds: Dataset,
    p: BudgetParams,
    cfg: ColgenConfig,
    events_csv: str | Path | None = None,
) -> tuple[PcabSolution, ColgenTelemetry]:
    start = time.monotonic()
    deadline = start + cfg.time_limit
    thr = cfg.thr if cfg.thr is not None else ds.dim
    rng = np.random.default_rng(cfg.seed)
    tele = ColgenTelemetry()
    n = ds.num_negatives
    total_weight = sum(float(p.weight_fn(a)) for a in ds.negatives)

    pool = initialize_master(ds, p, cfg)
    state = MultistartState.initial(n)
    best_error = float("inf")
    best_selection: list[Column] = []
    trace: list[tuple[float, int]] = []

    def remaining() -> float:
        return deadline - time.monotonic()

    while True:
        if remaining() <= 0:
            tele.hit_time_limit = True
            break
        t0 = time.monotonic()
        master = solve_lp(
            build_rmm(pool, ds, p),
            SolveOptions(time_limit=max(remaining(), 0.1)),
        )
        tele.master_seconds += time.monotonic() - t0
        if master.status != "optimal":
            tele.hit_time_limit = True
            break
        duals = master_duals(ds, master)

        t0 = time.monotonic()
        if cfg.pricer == "exact-root-node":
            candidates = _exact_pricing(ds, duals, p, remaining(), tele)
        else:
            candidates = multistart_pricing(
                ds,
                duals,
                state,
                thr=thr,
                n_max=cfg.n_max,
                rng=rng,
                lp_time_limit=max(remaining(), 0.1),
            )
        tele.pricing_seconds += time.monotonic() - t0
        if not candidates:
            tele.hit_time_limit = True
            break
        tele.iterations += 1

        # the pricers store their own claimed reduced costs; keep them as-is
        # so they stay auditable against the duals of this iteration
        costs = [c.reduced_cost for c in candidates]
        tele.audit.append(
            {"lam": duals.lam.copy(), "mu": duals.mu, "columns": list(candidates)}
        )
        k_min = int(np.argmin(costs))  # argmin keeps the lowest index on ties
        min_cost = costs[k_min]
        state = MultistartState(x_prev=candidates[k_min].indicator)
        added = [c for c in candidates if c.reduced_cost < 0.0]
        for col in added:
            pool.add(col)
        tele.columns_generated += len(added)

        if pool.columns:
            slice_limit = max(0.1 * max(remaining(), 0.0), 0.5)
            t0 = time.monotonic()
            choice = solve_milp(
                build_hcm(pool, ds, p),
                SolveOptions(time_limit=slice_limit, seed=cfg.seed),
            )
            tele.choice_seconds += time.monotonic() - t0
            if choice.has_solution and choice.objective < best_error - 1e-9:
                best_error = choice.objective
                best_selection = extract_selected_columns(choice, pool)
                trace.append((time.monotonic() - start, int(round(best_error))))
        current_error = best_error if best_error < float("inf") else total_weight

        tele.events.append(
            {
                "iter": tele.iterations,
                "elapsed_s": time.monotonic() - start,
                "rmm_obj": master.objective,
                "min_reduced_cost": min_cost,
                "hcm_error": current_error,
                "columns_total": len(pool.columns),
            }
        )

        if min_cost >= 0.0 or current_error <= 0.0:
            break
        if remaining() <= 0:
            tele.hit_time_limit = True
            break

    hyperplanes = [c.hyperplane for c in best_selection]
    error = separation_error(ds, hyperplanes) if hyperplanes else n
    sol = PcabSolution(hyperplanes=hyperplanes, error=error, trace=trace)

    if events_csv is not None:
        _write_events_csv(tele.events, events_csv)
    return sol, tele


def _write_events_csv(events: list[dict], path: str | Path) -> None:
    fields = [
        "iter",
        "elapsed_s",
        "rmm_obj",
        "min_reduced_cost",
        "hcm_error",
        "columns_total",
    ]
    with Path(path).open("w", newline="") as f:
        writer = csv.DictWriter(f, fieldnames=fields)
        writer.writeheader()
        for row in events:
            writer.writerow({k: row[k] for k in fields})
