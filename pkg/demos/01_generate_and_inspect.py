"""Generate the two synthetic instance families and inspect their structure.

The "corners" family anchors the unit hypercube: one positive per vertex
pulled inside by a border gap, d negatives per vertex pushed just outside,
plus uniform random points that respect the gap.  By construction the 2d
hypercube facets, shifted outward by half the gap, separate every negative,
so the smallest budget with zero error is exactly 2d.

The "uniform" family keeps only random points and drops the gap, so no
budget is guaranteed to reach zero error.

Run:  python3 demos/01_generate_and_inspect.py
"""

import numpy as np

from hullbudget.core import separation_error, write_dataset_csv
from hullbudget.datagen import (
    GenConfig,
    facet_hyperplanes,
    generate_corner_family,
    generate_uniform_family,
)


def main() -> None:
    cfg = GenConfig(d=2, seed=0)
    ds = generate_corner_family(cfg)
    print(f"corners family, d={cfg.d}, gamma={cfg.gamma}")
    print(f"  positives: {ds.num_positives}  (4 anchors + {cfg.n_random_pos} random)")
    print(f"  negatives: {ds.num_negatives}  (8 anchors + {cfg.n_random_neg} random)")

    # every negative avoids the open unit cube; every positive is inside it
    inside = np.all((ds.negatives > 0.0) & (ds.negatives < 1.0), axis=1)
    print(f"  negatives strictly inside the cube: {int(inside.sum())} (expected 0)")

    # the shifted-facet certificate: 2d hyperplanes, error 0
    facets = facet_hyperplanes(cfg.d, cfg.gamma)
    err = separation_error(ds, facets)
    print(f"  separation error of the {len(facets)} shifted facets: {err} (expected 0)")

    # with a budget below 2d some negatives are necessarily left enclosed
    err3 = separation_error(ds, facets[:3])
    print(f"  error with only 3 of the facets: {err3} (> 0: budget below 2d)")

    uni = generate_uniform_family(GenConfig(d=2, seed=0, gamma=0.0))
    errU = separation_error(uni, facet_hyperplanes(2, 0.0))
    print(
        f"\nuniform family: unshifted facet error {errU} "
        "(negatives still avoid the cube, but without a gap there is no "
        "margin certificate or anchored minimum budget)"
    )

    write_dataset_csv(ds, "/tmp/demo_corners_d2.csv")
    print("\nwrote /tmp/demo_corners_d2.csv (same format the CLI consumes)")


if __name__ == "__main__":
    main()
