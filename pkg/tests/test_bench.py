"""Unit tests for the evaluation harness and the 2-D hull baseline."""

import numpy as np
import pytest

from hullbudget.bench import (
    METHODS,
    ReportRow,
    RunConfig,
    UnsupportedMethodError,
    convex_hull_2d,
    default_time_limit,
    hull_edge_hyperplanes,
    hull_greedy_2d,
    mc_volume,
    run_method,
)
from hullbudget.core import Dataset, Hyperplane, is_valid, separation_error
from hullbudget.datagen import GenConfig, generate_corner_family
from hullbudget.models import BudgetParams


@pytest.fixture
def cross_ds():
    pos = np.array([[0.0, 0.0], [1.0, 0.0], [0.0, 1.0], [1.0, 1.0]])
    neg = np.array([[2.5, 0.5], [-1.5, 0.5], [0.5, 2.5], [0.5, -1.5]])
    return Dataset(positives=pos, negatives=neg)


def test_default_time_limit_formula():
    assert default_time_limit(2) == pytest.approx(6.0)
    assert default_time_limit(4) == pytest.approx(60.0)
    assert default_time_limit(8) == pytest.approx(600.0)
    assert default_time_limit(2, massive=False) == pytest.approx(60.0)


def test_run_config_validation():
    with pytest.raises(UnsupportedMethodError):
        RunConfig(method="magic", K=1)
    with pytest.raises(ValueError):
        RunConfig(method="greedy", K=1, time_limit=0.0)


def test_report_row_csv_rendering():
    row = ReportRow(
        method="greedy", K=4, d=2, seconds=1.234, error_pct=3.5, te_seconds=0.5
    )
    assert row.as_csv() == ["greedy", "4", "2", "1.234", "3.5000", "0.500"]
    row.error_pct = None
    assert row.as_csv()[4] == "NA"


@pytest.mark.parametrize(
    "method", ["greedy", "colgen-ahp", "hull-greedy-2d", "model-b"]
)
def test_run_method_produces_consistent_row(cross_ds, method):
    rc = RunConfig(method=method, K=4, time_limit=10.0)
    sol, row = run_method(cross_ds, BudgetParams(K=4), rc)
    assert row.method == method
    assert row.K == 4 and row.d == 2
    assert row.seconds > 0
    assert row.te_seconds <= row.seconds + 1e-9
    if row.error_pct is not None:
        assert row.error_pct == pytest.approx(100.0 * sol.error / 4)
    for h in sol.hyperplanes:
        assert is_valid(h, cross_ds)


def test_run_method_rejects_hull_baseline_off_2d():
    ds = Dataset(
        positives=np.zeros((2, 3)) + [[0, 0, 0], [1, 1, 1]],
        negatives=np.array([[2.0, 2.0, 2.0]]),
    )
    rc = RunConfig(method="hull-greedy-2d", K=1)
    with pytest.raises(UnsupportedMethodError):
        run_method(ds, BudgetParams(K=1), rc)


def test_methods_tuple_complete():
    assert set(METHODS) == {
        "model-a",
        "model-b",
        "ov2007",
        "colgen-exact",
        "colgen-ahp",
        "greedy",
        "hull-greedy-2d",
    }


# ---------------------------------------------------------------------------
# Monte-Carlo volume


def test_mc_volume_empty_is_box():
    est, err = mc_volume([], d=3)
    assert est == pytest.approx(27.0)
    assert err == 0.0


def test_mc_volume_rejects_tiny_sample():
    with pytest.raises(ValueError):
        mc_volume([], d=2, samples=10)


def test_mc_volume_halfspace():
    # x >= 0 covers exactly 2/3 of the [-1, 2]^2 box: area 6 of 9
    h = Hyperplane(b=0.0, w=np.array([1.0, 0.0]))
    est, err = mc_volume([h], d=2, samples=100_000, seed=1)
    assert err > 0
    assert abs(est - 6.0) <= 4 * err + 1e-9


def test_mc_volume_unit_square():
    hs = [
        Hyperplane(b=0.0, w=np.array([1.0, 0.0])),
        Hyperplane(b=1.0, w=np.array([-1.0, 0.0])),
        Hyperplane(b=0.0, w=np.array([0.0, 1.0])),
        Hyperplane(b=1.0, w=np.array([0.0, -1.0])),
    ]
    est, err = mc_volume(hs, d=2, samples=200_000, seed=2)
    assert abs(est - 1.0) <= 4 * err


def test_mc_volume_deterministic_by_seed():
    h = Hyperplane(b=0.5, w=np.array([1.0, 1.0]))
    assert mc_volume([h], d=2, seed=7) == mc_volume([h], d=2, seed=7)


# ---------------------------------------------------------------------------
# 2-D exact hull baseline


def test_convex_hull_square_with_interior():
    pts = np.array(
        [[0.0, 0.0], [1.0, 0.0], [1.0, 1.0], [0.0, 1.0], [0.5, 0.5]]
    )
    hull = convex_hull_2d(pts)
    assert set(hull.tolist()) == {0, 1, 2, 3}
    assert len(hull) == 4
    # counterclockwise orientation: positive signed area
    poly = pts[hull]
    area = 0.5 * np.sum(
        poly[:, 0] * np.roll(poly[:, 1], -1)
        - np.roll(poly[:, 0], -1) * poly[:, 1]
    )
    assert area > 0


def test_hull_edge_hyperplanes_enclose_points():
    rng = np.random.default_rng(3)
    pts = rng.uniform(size=(30, 2))
    hs = hull_edge_hyperplanes(pts)
    for h in hs:
        assert np.all(h.values(pts) >= -1e-9)


def test_hull_edge_hyperplanes_reject_collinear():
    pts = np.array([[0.0, 0.0], [1.0, 1.0], [2.0, 2.0]])
    with pytest.raises(ValueError):
        hull_edge_hyperplanes(pts)


def test_hull_greedy_2d_exact_on_cross(cross_ds):
    sol = hull_greedy_2d(cross_ds, K=4)
    assert sol.error == 0
    assert sol.error == separation_error(cross_ds, sol.hyperplanes)
    for h in sol.hyperplanes:
        assert is_valid(h, cross_ds)


def test_hull_greedy_2d_budget_one(cross_ds):
    sol = hull_greedy_2d(cross_ds, K=1)
    assert len(sol.hyperplanes) == 1
    assert sol.error <= 3


def test_hull_greedy_2d_on_corner_instance():
    ds = generate_corner_family(GenConfig(d=2, seed=7))
    full = hull_greedy_2d(ds, K=50)  # enough budget for every facet
    # the positives' hull excludes every negative of the gapped family
    assert full.error == 0
    trace_errs = [e for _, e in full.trace]
    assert trace_errs == sorted(trace_errs, reverse=True)
