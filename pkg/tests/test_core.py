"""Unit tests for the domain types and geometric predicates."""

import numpy as np
import pytest

from hullbudget.core import (
    Dataset,
    DimensionMismatchError,
    Hyperplane,
    PcabSolution,
    is_valid,
    read_dataset_csv,
    read_solution_json,
    separation_error,
    shift_to_positives,
    solution_to_dict,
    write_dataset_csv,
    write_solution_json,
)


@pytest.fixture
def square_ds():
    # unit square positives, four negatives around it
    pos = np.array([[0.0, 0.0], [1.0, 0.0], [0.0, 1.0], [1.0, 1.0]])
    neg = np.array([[2.0, 0.5], [-1.0, 0.5], [0.5, 2.0], [0.5, 0.5]])
    return Dataset(positives=pos, negatives=neg)


class TestDataset:
    def test_shapes_and_properties(self, square_ds):
        assert square_ds.dim == 2
        assert square_ds.num_positives == 4
        assert square_ds.num_negatives == 4

    def test_rejects_1d_arrays(self):
        with pytest.raises(ValueError):
            Dataset(positives=np.array([1.0, 2.0]), negatives=np.zeros((1, 2)))

    def test_rejects_empty_classes(self):
        with pytest.raises(ValueError):
            Dataset(positives=np.zeros((0, 2)), negatives=np.zeros((1, 2)))

    def test_rejects_dimension_mismatch(self):
        with pytest.raises(DimensionMismatchError):
            Dataset(positives=np.zeros((1, 2)), negatives=np.zeros((1, 3)))

    def test_rejects_nonfinite(self):
        with pytest.raises(ValueError):
            Dataset(
                positives=np.array([[np.nan, 0.0]]),
                negatives=np.zeros((1, 2)),
            )

    def test_arrays_write_protected(self, square_ds):
        with pytest.raises(ValueError):
            square_ds.positives[0, 0] = 5.0


class TestHyperplane:
    def test_values_is_affine(self):
        h = Hyperplane(b=1.0, w=np.array([2.0, -1.0]))
        pts = np.array([[0.0, 0.0], [1.0, 1.0], [3.0, 2.0]])
        np.testing.assert_allclose(h.values(pts), [1.0, 2.0, 5.0])

    def test_values_rejects_wrong_dim(self):
        h = Hyperplane(b=0.0, w=np.array([1.0, 1.0]))
        with pytest.raises(DimensionMismatchError):
            h.values(np.zeros((3, 3)))

    def test_degeneracy(self):
        assert Hyperplane(b=3.0, w=np.zeros(2)).is_degenerate()
        assert not Hyperplane(b=0.0, w=np.array([0.0, 1e-3])).is_degenerate()

    def test_rejects_matrix_w(self):
        with pytest.raises(ValueError):
            Hyperplane(b=0.0, w=np.zeros((2, 2)))


class TestSolutionContainer:
    def test_rejects_degenerate_hyperplane(self):
        with pytest.raises(ValueError):
            PcabSolution(
                hyperplanes=[Hyperplane(b=1.0, w=np.zeros(2))], error=0
            )

    def test_error_cast_to_int(self):
        sol = PcabSolution(hyperplanes=[], error=np.int64(3))
        assert sol.error == 3 and isinstance(sol.error, int)


class TestPredicates:
    def test_is_valid(self, square_ds):
        # x <= 1.5 holds on the square
        assert is_valid(Hyperplane(b=1.5, w=np.array([-1.0, 0.0])), square_ds)
        # x <= 0.5 cuts two positives off
        assert not is_valid(
            Hyperplane(b=0.5, w=np.array([-1.0, 0.0])), square_ds
        )

    def test_is_valid_tolerance(self, square_ds):
        h = Hyperplane(b=-1e-8, w=np.array([1.0, 0.0]))  # x >= 1e-8
        assert is_valid(h, square_ds)  # inside default tolerance
        assert not is_valid(h, square_ds, tol=0.0)
        with pytest.raises(ValueError):
            is_valid(h, square_ds, tol=-1.0)

    def test_separation_error_hand_oracle(self, square_ds):
        # negatives: right, left, above, center
        right = Hyperplane(b=1.5, w=np.array([-1.0, 0.0]))  # x <= 1.5
        left = Hyperplane(b=0.5, w=np.array([1.0, 0.0]))  # x >= -0.5
        assert separation_error(square_ds, []) == 4
        assert separation_error(square_ds, [right]) == 3
        assert separation_error(square_ds, [right, left]) == 2
        top = Hyperplane(b=1.5, w=np.array([0.0, -1.0]))
        # the interior negative (0.5, 0.5) can never be cut
        assert separation_error(square_ds, [right, left, top]) == 1

    def test_shift_to_positives_touches_a_positive(self, square_ds):
        h = Hyperplane(b=50.0, w=np.array([1.0, 0.0]))
        shifted = shift_to_positives(h, square_ds)
        vals = shifted.values(square_ds.positives)
        assert np.min(vals) == pytest.approx(1.0)
        np.testing.assert_array_equal(shifted.w, h.w)


class TestFileFormats:
    def test_dataset_roundtrip(self, square_ds, tmp_path):
        path = tmp_path / "ds.csv"
        write_dataset_csv(square_ds, path)
        back = read_dataset_csv(path)
        np.testing.assert_array_equal(back.positives, square_ds.positives)
        np.testing.assert_array_equal(back.negatives, square_ds.negatives)

    def test_dataset_roundtrip_exact_floats(self, tmp_path):
        pos = np.array([[0.1 + 0.2, 1.0 / 3.0]])
        neg = np.array([[np.pi, np.e]])
        ds = Dataset(positives=pos, negatives=neg)
        path = tmp_path / "ds.csv"
        write_dataset_csv(ds, path)
        back = read_dataset_csv(path)
        # repr-based serialization is bit-exact
        assert back.positives.tobytes() == pos.tobytes()
        assert back.negatives.tobytes() == neg.tobytes()

    def test_dataset_rejects_bad_header(self, tmp_path):
        path = tmp_path / "bad.csv"
        path.write_text("x1,x2,label\n1.0,2.0,+1\n")
        with pytest.raises(ValueError):
            read_dataset_csv(path)

    def test_dataset_rejects_bad_label(self, tmp_path):
        path = tmp_path / "bad.csv"
        path.write_text("label,x1\n2,1.0\n")
        with pytest.raises(ValueError):
            read_dataset_csv(path)

    def test_solution_roundtrip(self, tmp_path):
        sol = PcabSolution(
            hyperplanes=[
                Hyperplane(b=0.25, w=np.array([1.0, -2.0])),
                Hyperplane(b=-3.0, w=np.array([0.0, 1.5])),
            ],
            error=7,
            trace=[(0.5, 12), (1.25, 7)],
        )
        path = tmp_path / "sol.json"
        write_solution_json(sol, path)
        back = read_solution_json(path)
        assert back.error == 7
        assert back.trace == [(0.5, 12), (1.25, 7)]
        assert len(back.hyperplanes) == 2
        for h1, h2 in zip(back.hyperplanes, sol.hyperplanes):
            assert h1.b == h2.b
            np.testing.assert_array_equal(h1.w, h2.w)

    def test_solution_dict_is_json_plain(self):
        sol = PcabSolution(
            hyperplanes=[Hyperplane(b=1.0, w=np.array([2.0]))],
            error=np.int64(1),
            trace=[(np.float64(0.1), np.int64(3))],
        )
        d = solution_to_dict(sol)
        assert isinstance(d["error"], int)
        assert isinstance(d["trace"][0][0], float)
        assert isinstance(d["hyperplanes"][0]["w"][0], float)
