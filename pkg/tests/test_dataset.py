import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

import varform as vf
from varform import (
    ConfigurationError,
    DataError,
    Dataset,
    DegenerateResidualsError,
    ResidualSet,
    SizeError,
)


class TestDatasetConstruction:
    def test_basic_fields(self, rng):
        x = rng.standard_normal((6, 3))
        y = rng.standard_normal(6)
        ds = Dataset(y=y, x=x)
        assert ds.n == 6
        assert ds.p == 3
        np.testing.assert_array_equal(ds.y, y)

    def test_one_dimensional_x_promoted_to_column(self, rng):
        ds = Dataset(y=rng.standard_normal(5), x=rng.standard_normal(5))
        assert ds.x.shape == (5, 1)
        assert ds.p == 1

    def test_minimum_size_enforced(self, rng):
        with pytest.raises(SizeError):
            Dataset(y=np.ones(3), x=np.ones((3, 1)))
        Dataset(y=np.ones(4) + rng.standard_normal(4), x=np.ones((4, 1)))

    def test_length_mismatch_rejected(self):
        with pytest.raises(DataError):
            Dataset(y=np.ones(5), x=np.ones((4, 2)))

    @pytest.mark.parametrize("bad", [np.nan, np.inf, -np.inf])
    def test_non_finite_rejected(self, bad):
        y = np.ones(4)
        x = np.ones((4, 1))
        with pytest.raises(DataError):
            Dataset(y=np.array([1.0, 2.0, bad, 4.0]), x=x)
        with pytest.raises(DataError):
            Dataset(y=y, x=np.array([[1.0], [bad], [3.0], [4.0]]))

    def test_arrays_frozen(self, rng):
        ds = Dataset(y=rng.standard_normal(4), x=rng.standard_normal((4, 2)))
        with pytest.raises(ValueError):
            ds.y[0] = 1.0
        with pytest.raises(ValueError):
            ds.x[0, 0] = 1.0


class TestCsvRoundTrip:
    def test_round_trip_bit_exact(self, tmp_path, rng):
        ds = Dataset(y=rng.standard_normal(12), x=rng.standard_normal((12, 3)))
        path = tmp_path / "data.csv"
        vf.save_dataset(ds, path, y_column="resp", x_columns=["a", "b", "c"])
        back = vf.load_dataset(path, "resp", ["a", "b", "c"])
        np.testing.assert_array_equal(back.y, ds.y)
        np.testing.assert_array_equal(back.x, ds.x)

    def test_column_subset_and_order(self, tmp_path):
        path = tmp_path / "data.csv"
        path.write_text(
            "a,b,y\n1,10,100\n2,20,200\n3,30,300\n4,40,400\n", encoding="utf-8"
        )
        ds = vf.load_dataset(path, "y", ["b", "a"])
        np.testing.assert_array_equal(ds.y, [100, 200, 300, 400])
        np.testing.assert_array_equal(ds.x[:, 0], [10, 20, 30, 40])
        np.testing.assert_array_equal(ds.x[:, 1], [1, 2, 3, 4])

    def test_missing_column_is_configuration_error(self, tmp_path):
        path = tmp_path / "data.csv"
        path.write_text("a,y\n1,2\n", encoding="utf-8")
        with pytest.raises(ConfigurationError, match="nope"):
            vf.load_dataset(path, "y", ["nope"])

    def test_bad_cell_names_row_and_column(self, tmp_path):
        path = tmp_path / "data.csv"
        path.write_text(
            "a,y\n1,2\n3,4\nfive,6\n7,8\n9,10\n", encoding="utf-8"
        )
        with pytest.raises(DataError, match=r"row 4.*'a'"):
            vf.load_dataset(path, "y", ["a"])

    def test_non_finite_cell_rejected(self, tmp_path):
        path = tmp_path / "data.csv"
        path.write_text("a,y\n1,2\n3,nan\n5,6\n7,8\n", encoding="utf-8")
        with pytest.raises(DataError, match="row 3"):
            vf.load_dataset(path, "y", ["a"])

    def test_too_few_rows(self, tmp_path):
        path = tmp_path / "data.csv"
        path.write_text("a,y\n1,2\n3,4\n5,6\n", encoding="utf-8")
        with pytest.raises(SizeError):
            vf.load_dataset(path, "y", ["a"])

    def test_four_rows_is_minimal_legal(self, tmp_path):
        path = tmp_path / "data.csv"
        path.write_text("a,y\n1,2\n3,4\n5,6\n7,8\n", encoding="utf-8")
        assert vf.load_dataset(path, "y", ["a"]).n == 4

    def test_blank_lines_skipped(self, tmp_path):
        path = tmp_path / "data.csv"
        path.write_text("a,y\n1,2\n\n3,4\n5,6\n7,8\n\n", encoding="utf-8")
        assert vf.load_dataset(path, "y", ["a"]).n == 4

    def test_unreadable_file_is_data_error(self, tmp_path):
        with pytest.raises(DataError, match="cannot read"):
            vf.load_dataset(tmp_path / "absent.csv", "y", ["a"])


class TestStandardizeResiduals:
    def test_hand_example(self):
        out = vf.standardize_residuals(np.array([2.0, 4.0, 6.0]))
        root = math.sqrt(1.5)
        np.testing.assert_allclose(out.values, [-root, 0.0, root], atol=1e-15)
        assert out.kind == "standardized"

    def test_already_standardized_pair(self):
        out = vf.standardize_residuals(np.array([1.0, -1.0]))
        np.testing.assert_allclose(out.values, [1.0, -1.0], atol=1e-15)

    def test_uses_one_over_n_variance(self, rng):
        v = rng.standard_normal(11) * 3 + 2
        out = vf.standardize_residuals(v).values
        assert abs(out.mean()) < 1e-12
        assert abs(np.mean(out**2) - 1.0) < 1e-12

    def test_idempotent(self, rng):
        v = rng.standard_normal(9)
        once = vf.standardize_residuals(v).values
        twice = vf.standardize_residuals(once).values
        np.testing.assert_allclose(twice, once, atol=1e-12)

    def test_accepts_residual_set(self):
        rs = ResidualSet(values=np.array([1.0, 2.0, 3.0]), kind="raw-eta-hat")
        out = vf.standardize_residuals(rs)
        assert out.kind == "standardized"

    def test_constant_vector_degenerate(self):
        with pytest.raises(DegenerateResidualsError):
            vf.standardize_residuals(np.full(5, 5.0))

    @given(
        st.lists(
            st.floats(-1e6, 1e6, allow_nan=False, allow_infinity=False),
            min_size=2,
            max_size=40,
        ).filter(lambda v: max(v) - min(v) > 1e-6)
    )
    def test_property_mean_zero_unit_second_moment(self, values):
        out = vf.standardize_residuals(np.asarray(values)).values
        assert abs(out.mean()) < 1e-9
        assert abs(np.mean(out**2) - 1.0) < 1e-9


class TestResidualSet:
    def test_kinds_validated(self):
        with pytest.raises(ConfigurationError):
            ResidualSet(values=np.ones(4), kind="nonsense")

    def test_values_frozen(self):
        rs = ResidualSet(values=np.array([1.0, 2.0]), kind="raw-eta-hat")
        with pytest.raises(ValueError):
            rs.values[0] = 9.0
