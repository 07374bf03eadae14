"""Distance/contiguity/weight pipeline tests."""

import numpy as np
import pytest
from numpy.testing import assert_allclose

import reference as ref
from lisa_kit import (
    AsymmetricDistance,
    DimensionMismatch,
    DistanceMatrix,
    EmptyRow,
    Kernel,
    NonPositiveOffDiagonal,
    NonZeroDiagonal,
    Normalization,
    ValidationError,
    build_contiguity,
    normalize_global,
    normalize_row,
)


def square(entries):
    return DistanceMatrix.from_array([f"p{i}" for i in range(len(entries))], entries)


@pytest.fixture
def d3():
    """Three units with pairwise distances 1, 2, 4."""
    return square([[0, 1, 2], [1, 0, 4], [2, 4, 0]])


class TestKernel:
    def test_parse_round_trip(self):
        for text in ("inverse", "power:2", "threshold:150"):
            assert str(Kernel.parse(text)) == text

    def test_parse_rejects_garbage(self):
        for text in ("gaussian", "power", "power:x", "threshold:", "inverse:3"):
            with pytest.raises(ValueError):
                Kernel.parse(text)

    def test_nonpositive_parameters_rejected(self):
        with pytest.raises(ValueError, match="exponent"):
            Kernel.power(0)
        with pytest.raises(ValueError, match="radius"):
            Kernel.threshold(-1)

    def test_inverse_equals_power_one(self, d3):
        a = build_contiguity(d3, Kernel.inverse())
        b = build_contiguity(d3, Kernel.power(1))
        assert_allclose(a.v, b.v, rtol=0, atol=0)


class TestDistanceMatrixValidation:
    def test_unit_distance_pair(self):
        d = square([[0, 1], [1, 0]])
        assert d.n == 2
        assert d.labels == ("p0", "p1")

    def test_rejects_asymmetry(self):
        with pytest.raises(AsymmetricDistance):
            square([[0, 1, 2], [1, 0, 4], [2, 4.001, 0]])

    def test_tolerates_tiny_asymmetry(self):
        eps = 1e-12
        d = square([[0, 1, 2], [1, 0, 4], [2, 4 + eps, 0]])
        assert d.d[1, 2] == 4.0

    def test_rejects_nonzero_diagonal(self):
        with pytest.raises(NonZeroDiagonal):
            square([[0, 1], [1, 0.5]])

    def test_rejects_nonpositive_off_diagonal(self):
        with pytest.raises(NonPositiveOffDiagonal):
            square([[0, 0], [0, 0]])
        with pytest.raises(NonPositiveOffDiagonal):
            square([[0, -3], [-3, 0]])

    def test_rejects_single_unit(self):
        with pytest.raises(ValidationError):
            square([[0]])

    def test_rejects_duplicate_labels(self):
        with pytest.raises(ValidationError, match="unique"):
            DistanceMatrix.from_array(["a", "a"], [[0, 1], [1, 0]])

    def test_rejects_label_count_mismatch(self):
        with pytest.raises(DimensionMismatch):
            DistanceMatrix.from_array(["a"], [[0, 1], [1, 0]])

    def test_rejects_nan(self):
        with pytest.raises(ValidationError, match="finite"):
            square([[0, np.nan], [np.nan, 0]])

    def test_payload_is_read_only(self, d3):
        with pytest.raises(ValueError):
            d3.d[0, 1] = 99.0


class TestBuildContiguity:
    def test_power_two_hand_values(self, d3):
        """d = (1, 2, 4) under power beta=2 gives v = (1, 1/4, 1/16)."""
        v = build_contiguity(d3, Kernel.power(2))
        assert v.v[0, 1] == 1.0
        assert v.v[0, 2] == 0.25
        assert v.v[1, 2] == 0.0625
        assert v.v0 == pytest.approx(2.625, abs=0)
        assert_allclose(v.vi, [1.25, 1.0625, 0.3125])

    def test_symmetric_zero_diagonal(self, d3):
        v = build_contiguity(d3, Kernel.inverse())
        assert_allclose(v.v, v.v.T, rtol=0, atol=0)
        assert np.all(np.diag(v.v) == 0.0)

    def test_matches_naive_loops(self):
        rng = np.random.default_rng(5)
        raw = rng.uniform(1, 50, size=(6, 6))
        d = square(np.round((raw + raw.T) / 2, 6) * (1 - np.eye(6)))
        for kernel, naive in [
            (Kernel.inverse(), ref.inverse_contiguity),
            (Kernel.power(1.7), lambda m: ref.power_contiguity(m, 1.7)),
            (Kernel.threshold(25.0), lambda m: ref.threshold_contiguity(m, 25.0)),
        ]:
            got = build_contiguity(d, kernel)
            assert_allclose(got.v, naive(d.d.tolist()), rtol=1e-14, atol=0)

    def test_threshold_isolated_unit_rejected(self):
        d = square([[0, 1, 9], [1, 0, 9], [9, 9, 0]])
        with pytest.raises(EmptyRow, match="p2"):
            build_contiguity(d, Kernel.threshold(5.0))


class TestNormalization:
    def test_global_sums_to_one_and_keeps_symmetry(self, d3):
        v = build_contiguity(d3, Kernel.inverse())
        w = normalize_global(v)
        assert w.norm is Normalization.GLOBAL
        assert w.w.sum() == pytest.approx(1.0, rel=1e-12)
        assert_allclose(w.w, w.w.T, rtol=0, atol=1e-12)

    def test_global_hand_value(self, d3):
        """With v0 = 2.625 the closest pair gets weight 1/2.625."""
        w = normalize_global(build_contiguity(d3, Kernel.power(2)))
        assert w.w[0, 1] == pytest.approx(1 / 2.625, rel=1e-15)

    def test_row_sums_to_one_each_and_n_overall(self, d3):
        v = build_contiguity(d3, Kernel.power(2))
        w = normalize_row(v)
        assert w.norm is Normalization.ROW
        assert_allclose(w.w.sum(axis=1), np.ones(3), rtol=1e-12)
        assert w.w.sum() == pytest.approx(3.0, rel=1e-9)

    def test_row_loses_symmetry_here(self, d3):
        w = normalize_row(build_contiguity(d3, Kernel.power(2)))
        assert not np.allclose(w.w, w.w.T)

    def test_two_units_row_equals_double_global(self):
        """With n = 2 both rows have a single entry 1; global halves it."""
        d = square([[0, 7], [7, 0]])
        v = build_contiguity(d, Kernel.inverse())
        wg = normalize_global(v)
        wr = normalize_row(v)
        assert_allclose(wr.w, 2.0 * wg.w, rtol=0, atol=0)
        assert_allclose(wr.w, wr.w.T, rtol=0, atol=0)

    def test_matches_naive_loops(self, d3):
        v = build_contiguity(d3, Kernel.inverse())
        assert_allclose(normalize_global(v).w, ref.global_normalize(v.v.tolist()), rtol=1e-15)
        assert_allclose(normalize_row(v).w, ref.row_normalize(v.v.tolist()), rtol=1e-15)

    def test_scale_invariance_of_weights(self, d3):
        """Rescaling all distances by c leaves inverse-kernel weights unchanged."""
        scaled = DistanceMatrix.from_array(d3.labels, 3.5 * d3.d)
        for norm in (normalize_global, normalize_row):
            a = norm(build_contiguity(d3, Kernel.inverse()))
            b = norm(build_contiguity(scaled, Kernel.inverse()))
            assert_allclose(a.w, b.w, rtol=1e-12)
