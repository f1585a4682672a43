"""Greedy matheuristic: one coverage-maximizing hyperplane at a time.

Each round solves the partial-separation model on the still-uncovered
negatives (root node only, like the other matheuristic solves), places
the hyperplane, removes what it covers, and repeats until the budget is
spent or everything is covered.  Always halts within K solves.
"""

from __future__ import annotations

import time

import numpy as np

from .core import Dataset, PcabSolution, separation_error, shift_to_positives
from .models import BudgetParams, build_plsm, extract_single_hyperplane
from .solver import SolveOptions, solve_milp


def run_greedy(
    ds: Dataset, p: BudgetParams, opts: SolveOptions | None = None
) -> PcabSolution:
    opts = opts or SolveOptions(time_limit=60.0)
    start = time.monotonic()
    deadline = start + opts.time_limit
    n = ds.num_negatives
    uncovered = list(range(n))
    hyperplanes = []
    trace: list[tuple[float, int]] = []

    for _ in range(p.K):
        if not uncovered:
            break
        budget = deadline - time.monotonic()
        if budget <= 0:
            break
        spec = build_plsm(ds, uncovered, p.weight_fn, p.big_m)
        res = solve_milp(
            spec,
            SolveOptions(
                time_limit=max(budget, 0.1),
                root_node_only=True,
                mip_gap=opts.mip_gap,
                feas_tol=opts.feas_tol,
                seed=opts.seed,
                dive_lp_budget=None,
            ),
        )
        if not res.has_solution:
            break
        h = extract_single_hyperplane(res, ds.dim)
        # a zero-gain round still consumes budget, so the loop always halts
        if not h.is_degenerate():
            # pulling the hyperplane tight against the positives can only
            # grow the covered set
            h = shift_to_positives(h, ds)
            hyperplanes.append(h)
            covered = h.values(ds.negatives[np.array(uncovered)]) <= -1.0 + 1e-9
            uncovered = [i for i, c in zip(uncovered, covered) if not c]
        err_now = separation_error(ds, hyperplanes) if hyperplanes else n
        if not trace or err_now < trace[-1][1]:
            trace.append((time.monotonic() - start, err_now))

    error = separation_error(ds, hyperplanes) if hyperplanes else n
    return PcabSolution(hyperplanes=hyperplanes, error=error, trace=trace)
