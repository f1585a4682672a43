"""Solve the compact mixed-integer models exactly on a tiny instance.

Three one-shot formulations are available:

* the counting model: one binary per negative that stays enclosed,
  assignment binaries linking each separated negative to one hyperplane
  through big-M indicator rows (this is the reference formulation);
* the depth-penalty model: same assignment structure, but the objective
  penalizes how deep each negative sits past its assigned hyperplane
  instead of counting errors;
* the classification adaptation: an older mixed-integer model for
  general polyhedral classification, restricted so the positives must
  end up inside every hyperplane.

On micro instances the in-repo branch-and-bound proves optimality; at
paper scale these models are used root-node-only as heuristics.

Run:  python3 demos/02_compact_models.py
"""

import numpy as np

from hullbudget.core import Dataset, is_valid, separation_error
from hullbudget.models import (
    BudgetParams,
    build_model_a,
    build_model_b,
    build_ov2007,
    extract_hyperplanes,
)
from hullbudget.solver import SolveOptions, solve_milp


def main() -> None:
    # triangle of positives; negatives: one right, one left, one inside
    ds = Dataset(
        positives=np.array([[0.0, 0.0], [1.0, 0.0], [0.5, 1.0]]),
        negatives=np.array([[2.0, 0.0], [-1.5, 0.0], [0.5, 0.3]]),
    )
    p = BudgetParams(K=2)
    opts = SolveOptions(time_limit=60.0)

    print("counting model, K=2 (full branch and bound):")
    res = solve_milp(build_model_b(ds, p), opts)
    print(f"  status {res.status}, optimum {res.objective:.0f} enclosed negative(s), {res.nodes} nodes")
    hs = [h for h in extract_hyperplanes(res, p.K, ds.dim) if not h.is_degenerate()]
    for h in hs:
        print(f"  hyperplane b={h.b:+.3f} w=({h.w[0]:+.3f}, {h.w[1]:+.3f}) valid={is_valid(h, ds)}")
    print(f"  geometric check: separation error {separation_error(ds, hs)}")
    print("  (the negative inside the positives' hull can never be cut)\n")

    print("depth-penalty model, K=2:")
    res_a = solve_milp(build_model_a(ds, p), opts)
    print(f"  status {res_a.status}, total penalized depth {res_a.objective:.3f}")
    print("  note: the objective is a depth, not an error count\n")

    print("classification adaptation, K=1, single separable negative:")
    ds1 = Dataset(positives=ds.positives, negatives=np.array([[3.0, 0.0]]))
    res_c = solve_milp(build_ov2007(ds1, BudgetParams(K=1)), opts)
    print(f"  status {res_c.status}, misclassified points {res_c.objective:.0f}")


if __name__ == "__main__":
    main()
