import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from spatialent.regions import (
    QuadratureError,
    RegionSplit,
    bunching_probabilities,
    overlap,
    overlap_table,
    region_integral,
    region_probability,
)

P_A0_AT_1 = 0.9213503964748574346706103  # (1 + erf 1) / 2, mpmath
P_AA_01 = 0.4091549430918953357688838  # (1 + 2/pi) / 4
P_AB_01 = 0.1816901138162093284622325


class TestRegionProbability:
    def test_symmetric_split_is_half(self, sym):
        assert region_probability(3, sym) == 0.5
        assert region_probability(3, sym, use_parity=False) == pytest.approx(0.5, abs=1e-13)

    def test_whole_line(self):
        assert region_probability(0, RegionSplit(math.inf)) == 1.0
        assert region_probability(0, RegionSplit(40.0)) == pytest.approx(1.0, abs=1e-14)

    def test_error_function_value(self):
        assert region_probability(0, RegionSplit(1.0)) == pytest.approx(P_A0_AT_1, abs=1e-13)
        assert region_probability(0, RegionSplit(-1.0)) == pytest.approx(1 - P_A0_AT_1, abs=1e-13)

    @pytest.mark.parametrize("a", [-2.3, -0.4, 0.0, 0.9, 3.1])
    def test_complementary(self, a):
        split = RegionSplit(a)
        for k in range(12):
            pa = region_integral(k, k, split, "A")
            pb = region_integral(k, k, split, "B")
            assert pa + pb == pytest.approx(1.0, abs=split.quadrature_tol * 10)


class TestOverlap:
    def test_self_overlap(self, sym):
        assert overlap(2, 2, sym) == 1.0

    def test_same_parity_vanishes(self, sym):
        assert overlap(0, 2, sym) == 0.0
        assert overlap(0, 2, sym, use_parity=False) == pytest.approx(0.0, abs=1e-13)

    def test_gaussian_closed_form(self, sym):
        expected = -math.sqrt(2.0 / math.pi)
        assert overlap(0, 1, sym) == pytest.approx(expected, abs=1e-12)
        assert overlap(0, 1, sym, region="B") == pytest.approx(-expected, abs=1e-12)

    @settings(max_examples=40, deadline=None)
    @given(k=st.integers(0, 15), l=st.integers(0, 15), a=st.floats(-2.5, 2.5))
    def test_bounded_by_one(self, k, l, a):
        assert abs(overlap(k, l, RegionSplit(a))) <= 1.0 + 1e-12


class TestBunching:
    def test_distinct_modes_with_overlap(self, sym):
        p_aa, p_bb, p_ab = bunching_probabilities(0, 1, sym)
        assert p_aa == pytest.approx(P_AA_01, abs=1e-12)
        assert p_bb == pytest.approx(P_AA_01, abs=1e-12)
        assert p_ab == pytest.approx(P_AB_01, abs=1e-12)

    def test_zero_overlap_is_distinguishable(self, sym):
        assert bunching_probabilities(0, 2, sym) == pytest.approx((0.25, 0.25, 0.5))

    def test_same_mode_uses_squared_amplitudes(self, sym):
        # not the k != l formula, which would give p_AA = 1/2 here
        assert bunching_probabilities(0, 0, sym) == pytest.approx((0.25, 0.25, 0.5))

    @pytest.mark.parametrize("a", [0.0, 0.6, -1.1])
    def test_enhancement(self, a):
        split = RegionSplit(a)
        table = overlap_table(21, split)
        for k in range(21):
            for l in range(k):
                p_aa, p_bb, p_ab = bunching_probabilities(k, l, split)
                base = table.pA[k] * table.pA[l]
                assert p_aa >= base - 1e-14
                if abs(table.O[k, l]) < 1e-13:
                    assert p_aa == pytest.approx(base, abs=1e-13)
                else:
                    assert p_aa > base
                assert p_aa + p_bb + p_ab == pytest.approx(1.0, abs=1e-14)


class TestOverlapTable:
    @pytest.mark.parametrize("a", [0.0, 0.37, -1.2])
    def test_closed_form_matches_quadrature(self, a):
        split = RegionSplit(a)
        fast = overlap_table(14, split)
        slow = overlap_table(14, split, method="quadrature")
        np.testing.assert_allclose(fast.gram_a, slow.gram_a, atol=1e-12)
        np.testing.assert_allclose(fast.gram_b, slow.gram_b, atol=1e-12)

    def test_invariants_symmetric(self, sym):
        table = overlap_table(30, sym)
        np.testing.assert_array_equal(np.diag(table.O), 1.0)
        assert np.all(np.abs(table.O) <= 1.0 + 1e-12)
        np.testing.assert_array_equal(table.O, table.O.T)
        k = np.arange(30)
        same = ((k[:, None] - k[None, :]) % 2 == 0) & (k[:, None] != k[None, :])
        assert np.all(table.O[same] == 0.0)

    @pytest.mark.parametrize("a", [0.0, 0.8])
    def test_gram_positive_semidefinite(self, a):
        table = overlap_table(30, RegionSplit(a))
        G = table.O * np.sqrt(np.outer(table.pA, table.pA))
        assert np.linalg.eigvalsh(G).min() >= -1e-12

    def test_b_overlaps_mirror_a_at_symmetric_split(self, sym):
        table = overlap_table(10, sym)
        k = np.arange(10)
        sign = (-1.0) ** (k[:, None] + k[None, :])
        np.testing.assert_allclose(table.O_b, sign * table.O, atol=1e-15)

    def test_infinite_splits(self):
        whole = overlap_table(5, RegionSplit(math.inf))
        np.testing.assert_array_equal(whole.gram_a, np.eye(5))
        empty = overlap_table(5, RegionSplit(-math.inf))
        np.testing.assert_array_equal(empty.gram_b, np.eye(5))

    def test_truncated(self, sym):
        table = overlap_table(8, sym)
        small = table.truncated(3)
        assert small.K == 3
        np.testing.assert_array_equal(small.O, table.O[:3, :3])
        with pytest.raises(ValueError):
            table.truncated(9)


def test_quadrature_failure_is_reported():
    from spatialent import regions

    regions._integral.cache_clear()
    with pytest.raises(QuadratureError) as info:
        regions._integral(3, 1, -10.0, 0.3, 1e-40)
    assert info.value.estimate > 0
