"""Unit tests for the growth-based heuristic pricing."""

import numpy as np
import pytest

from hullbudget.core import Dataset, is_valid
from hullbudget.models import DualPrices
from hullbudget.pricing import (
    GrowInput,
    MultistartState,
    dual_order,
    grow_column,
    multistart_pricing,
    separating_hyperplane,
)


@pytest.fixture
def ds():
    pos = np.array([[0.0, 0.0], [1.0, 0.0], [0.0, 1.0], [1.0, 1.0]])
    # three negatives to the right (mutually compatible), one to the left
    neg = np.array([[2.0, 0.2], [2.5, 0.5], [2.0, 0.8], [-1.0, 0.5]])
    return Dataset(positives=pos, negatives=neg)


def test_dual_order_stable_descending():
    lam = np.array([1.0, 3.0, 3.0, 0.5])
    order = dual_order(lam)
    np.testing.assert_array_equal(order, [1, 2, 0, 3])


def test_separating_hyperplane_margins(ds):
    h = separating_hyperplane(ds, [0, 1, 2])
    assert np.all(h.values(ds.positives) >= 1.0 - 1e-7)
    assert np.all(h.values(ds.negatives[[0, 1, 2]]) <= -1.0 + 1e-7)


def test_separating_hyperplane_raises_on_inseparable():
    inner = Dataset(
        positives=np.array([[0.0, 0.0], [1.0, 0.0], [0.5, 1.0]]),
        negatives=np.array([[0.5, 0.3]]),
    )
    with pytest.raises(RuntimeError):
        separating_hyperplane(inner, [0])


def test_grow_column_collects_compatible_points(ds):
    lam = np.array([1.0, 1.0, 1.0, 1.0])
    order = dual_order(lam)
    col = grow_column(ds, GrowInput(order=order, start=0, thr=4))
    # all three right-side negatives are jointly separable; the left one
    # is not compatible with them
    np.testing.assert_array_equal(col.indicator, [1, 1, 1, 0])
    assert is_valid(col.hyperplane, ds)
    assert col.reduced_cost == 0.0


def test_grow_column_reduced_cost_with_duals(ds):
    lam = np.array([0.5, 2.0, 1.0, 3.0])
    duals = DualPrices(lam=lam, mu=0.25)
    col = grow_column(
        ds, GrowInput(order=dual_order(lam), start=0, thr=4), duals=duals
    )
    expected = -float(col.indicator.astype(float) @ lam) + 0.25
    assert col.reduced_cost == pytest.approx(expected)


def test_grow_column_thr_caps_candidates(ds):
    # thr=1 looks only at the head of the order; starting from the left
    # point with the right points ranked first, nothing compatible is
    # found within the cap
    lam = np.array([5.0, 4.0, 3.0, 1.0])
    col = grow_column(ds, GrowInput(order=dual_order(lam), start=3, thr=1))
    np.testing.assert_array_equal(col.indicator, [0, 0, 0, 1])


def test_grow_column_shifted_tight(ds):
    col = grow_column(ds, GrowInput(order=np.arange(4), start=0, thr=4))
    vals = col.hyperplane.values(ds.positives)
    assert np.min(vals) == pytest.approx(1.0, abs=1e-7)


def test_multistart_state_initial():
    st = MultistartState.initial(5)
    np.testing.assert_array_equal(st.x_prev, np.ones(5, dtype=np.int8))


def test_multistart_returns_columns_and_respects_nmax(ds):
    duals = DualPrices(lam=np.ones(4), mu=0.0)
    rng = np.random.default_rng(0)
    cols = multistart_pricing(
        ds, duals, MultistartState.initial(4), thr=4, n_max=2, rng=rng
    )
    assert 1 <= len(cols) <= 2
    for col in cols:
        assert is_valid(col.hyperplane, ds)
        assert col.indicator.shape == (4,)
        # claimed reduced cost audits against the duals
        expected = -float(col.indicator.astype(float) @ duals.lam) + duals.mu
        assert col.reduced_cost == pytest.approx(expected)


def test_multistart_deterministic_given_rng_seed(ds):
    duals = DualPrices(lam=np.array([1.0, 2.0, 3.0, 4.0]), mu=0.5)

    def run():
        return multistart_pricing(
            ds,
            duals,
            MultistartState.initial(4),
            thr=4,
            n_max=3,
            rng=np.random.default_rng(11),
        )

    a, b = run(), run()
    assert len(a) == len(b)
    for ca, cb in zip(a, b):
        np.testing.assert_array_equal(ca.indicator, cb.indicator)
        assert ca.reduced_cost == cb.reduced_cost


def test_multistart_starts_capped_by_num_negatives():
    ds2 = Dataset(
        positives=np.array([[0.0, 0.0], [1.0, 0.0], [0.5, 1.0]]),
        negatives=np.array([[3.0, 0.0], [-3.0, 0.0]]),
    )
    duals = DualPrices(lam=np.ones(2), mu=0.0)
    cols = multistart_pricing(
        ds2,
        duals,
        MultistartState.initial(2),
        thr=2,
        n_max=10,
        rng=np.random.default_rng(0),
    )
    assert len(cols) <= 2
