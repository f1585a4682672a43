"""Unit tests for the column-generation driver."""

import csv

import numpy as np
import pytest

from hullbudget.colgen import (
    ColgenConfig,
    initialize_master,
    reduced_cost,
    run_colgen,
)
from hullbudget.core import Dataset, is_valid, separation_error
from hullbudget.datagen import GenConfig, generate_corner_family
from hullbudget.models import BudgetParams, DualPrices


@pytest.fixture
def cross_ds():
    pos = np.array([[0.0, 0.0], [1.0, 0.0], [0.0, 1.0], [1.0, 1.0]])
    neg = np.array([[2.5, 0.5], [-1.5, 0.5], [0.5, 2.5], [0.5, -1.5]])
    return Dataset(positives=pos, negatives=neg)


def test_config_validation():
    with pytest.raises(ValueError):
        ColgenConfig(pricer="nope")
    with pytest.raises(ValueError):
        ColgenConfig(thr=0)
    with pytest.raises(ValueError):
        ColgenConfig(n_max=0)
    with pytest.raises(ValueError):
        ColgenConfig(time_limit=0.0)


def test_reduced_cost_formula():
    duals = DualPrices(lam=np.array([1.0, 2.0, 3.0]), mu=0.5)
    assert reduced_cost(np.array([1, 0, 1]), duals) == pytest.approx(-3.5)
    assert reduced_cost(np.zeros(3), duals) == pytest.approx(0.5)


def test_initialize_master_empty_by_default(cross_ds):
    pool = initialize_master(cross_ds, BudgetParams(K=2), ColgenConfig())
    assert len(pool) == 0


def test_initialize_master_warm_start(cross_ds):
    pool = initialize_master(
        cross_ds,
        BudgetParams(K=4),
        ColgenConfig(warm_start_with_greedy=True, time_limit=20.0),
    )
    assert len(pool) >= 1
    for col in pool.columns:
        assert is_valid(col.hyperplane, cross_ds)
        # indicators are geometric coverage of the stored hyperplane
        geo = (
            col.hyperplane.values(cross_ds.negatives) <= -1.0 + 1e-9
        ).astype(np.int8)
        np.testing.assert_array_equal(col.indicator, geo)


def test_colgen_ahp_solves_cross(cross_ds):
    sol, tele = run_colgen(
        cross_ds, BudgetParams(K=4), ColgenConfig(time_limit=30.0)
    )
    assert sol.error == 0
    assert len(sol.hyperplanes) <= 4
    for h in sol.hyperplanes:
        assert is_valid(h, cross_ds)
    assert sol.error == separation_error(cross_ds, sol.hyperplanes)
    assert tele.iterations >= 1
    assert tele.columns_generated >= 1


def test_colgen_exact_pricer_runs(cross_ds):
    sol, tele = run_colgen(
        cross_ds,
        BudgetParams(K=4),
        ColgenConfig(pricer="exact-root-node", time_limit=30.0),
    )
    assert tele.iterations >= 1
    assert sol.error == separation_error(cross_ds, sol.hyperplanes) or not sol.hyperplanes
    for h in sol.hyperplanes:
        assert is_valid(h, cross_ds)


def test_colgen_error_trace_monotone():
    ds = generate_corner_family(
        GenConfig(d=2, seed=3, n_random_pos=20, n_random_neg=40)
    )
    sol, tele = run_colgen(ds, BudgetParams(K=4), ColgenConfig(time_limit=20.0))
    errs = [e for _, e in sol.trace]
    assert errs == sorted(errs, reverse=True)
    hcm = [ev["hcm_error"] for ev in tele.events]
    assert all(b <= a + 1e-9 for a, b in zip(hcm, hcm[1:]))


def test_colgen_audit_matches_recomputation(cross_ds):
    _sol, tele = run_colgen(
        cross_ds, BudgetParams(K=2), ColgenConfig(time_limit=20.0)
    )
    assert tele.audit  # one entry per pricing iteration
    for entry in tele.audit:
        duals = DualPrices(lam=entry["lam"], mu=entry["mu"])
        for col in entry["columns"]:
            again = reduced_cost(col.indicator, duals)
            assert col.reduced_cost == pytest.approx(again, abs=1e-9)


def test_colgen_events_csv(tmp_path, cross_ds):
    path = tmp_path / "events.csv"
    _sol, tele = run_colgen(
        cross_ds,
        BudgetParams(K=4),
        ColgenConfig(time_limit=20.0),
        events_csv=path,
    )
    with path.open() as f:
        rows = list(csv.DictReader(f))
    assert len(rows) == len(tele.events)
    assert set(rows[0].keys()) == {
        "iter",
        "elapsed_s",
        "rmm_obj",
        "min_reduced_cost",
        "hcm_error",
        "columns_total",
    }
    assert int(rows[0]["iter"]) == 1


def test_colgen_deterministic(cross_ds):
    def run():
        return run_colgen(
            cross_ds, BudgetParams(K=4), ColgenConfig(time_limit=30.0, seed=9)
        )

    s1, _ = run()
    s2, _ = run()
    assert s1.error == s2.error
    assert len(s1.hyperplanes) == len(s2.hyperplanes)
    for h1, h2 in zip(s1.hyperplanes, s2.hyperplanes):
        assert h1.b == h2.b
        np.testing.assert_array_equal(h1.w, h2.w)


def test_colgen_time_limit_respected(cross_ds):
    import time

    start = time.monotonic()
    run_colgen(cross_ds, BudgetParams(K=4), ColgenConfig(time_limit=1.0))
    # generous slack: a single in-flight LP may overshoot slightly
    assert time.monotonic() - start < 10.0
