"""The evaluation harness: score several methods, then measure volumes.

`run_method` wraps every solver behind one interface and emits report
rows (method, budget, dimension, wall seconds, error percentage, and the
time at which the error last improved).  The 2-D baseline takes the exact
convex hull of the positives and greedily keeps the K facets that exclude
the most negatives — at budget >= number of hull edges it is exact.
Monte-Carlo volume estimates how much space a hyperplane set encloses
inside the [-1, 2]^d sampling box, with a binomial standard error.

Run:  python3 demos/04_benchmark_and_volume.py   (about 20 s)
"""

from hullbudget.bench import RunConfig, mc_volume, run_method
from hullbudget.datagen import GenConfig, facet_hyperplanes, generate_corner_family
from hullbudget.models import BudgetParams


def main() -> None:
    ds = generate_corner_family(GenConfig(d=2, seed=2))
    print(f"instance: d=2, {ds.num_positives} positives, {ds.num_negatives} negatives\n")
    print(f"{'method':<16}{'K':>3}{'error%':>10}{'secs':>8}{'te(s)':>8}")
    solutions = {}
    for method in ("greedy", "colgen-ahp", "hull-greedy-2d"):
        rc = RunConfig(method=method, K=4, time_limit=6.0, seed=2)
        sol, row = run_method(ds, BudgetParams(K=4), rc)
        solutions[method] = sol
        err = "NA" if row.error_pct is None else f"{row.error_pct:.2f}"
        print(f"{method:<16}{row.K:>3}{err:>10}{row.seconds:>8.2f}{row.te_seconds:>8.2f}")

    print("\nenclosed volume (smaller is tighter, unit cube has volume 1):")
    for method, sol in solutions.items():
        if not sol.hyperplanes:
            continue
        est, err = mc_volume(sol.hyperplanes, d=2, samples=100_000, seed=0)
        print(f"  {method:<16}{est:.4f} +- {err:.4f}  ({len(sol.hyperplanes)} hyperplanes)")
    est, err = mc_volume(facet_hyperplanes(2), d=2, samples=100_000, seed=0)
    print(f"  {'shifted facets':<16}{est:.4f} +- {err:.4f}  (reference certificate)")


if __name__ == "__main__":
    main()
