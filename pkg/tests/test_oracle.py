import math

import numpy as np
import pytest

from spatialent import oracle
from spatialent.entanglement import chi_norm_squared_exact, pure_pair_entropy
from spatialent.oracle import (
    GramBasis,
    PairBasis,
    SectorBasis,
    build_rho2_matrix,
    coherence_block_eigenvalue,
    exact_negativity,
    partial_transpose,
    rank2_part_eigenvalue,
)
from spatialent.regions import RegionSplit, overlap_table
from spatialent.thermo import ThermalState, thermal_state

K1_NEGATIVITY = 0.9571067811865475244  # (1 + 2 sqrt 2) / 4


def state(n, T=1.0):
    n = np.asarray(n, dtype=float)
    return ThermalState(T, -1.0, float(n.sum()), n.size, n, 0.0)


class TestGramBasis:
    def test_full_rank_identities(self):
        rng = np.random.default_rng(1)
        X = rng.normal(size=(6, 4))
        G = X.T @ X
        b = GramBasis.from_gram(G)
        assert b.rank == 4
        np.testing.assert_allclose(b.coords.T @ b.coords, G, atol=1e-12)
        np.testing.assert_allclose(b.L.T @ G @ b.L, np.eye(4), atol=1e-12)

    def test_rank_deficient_is_canonical(self):
        v = np.array([1.0, 2.0, 0.5])
        G = np.outer(v, v)
        b = GramBasis.from_gram(G)
        assert b.rank == 1
        np.testing.assert_allclose(b.coords.T @ b.coords, G, atol=1e-12)

    def test_zero_gram(self):
        assert GramBasis.from_gram(np.zeros((3, 3))).rank == 0

    def test_rejects_indefinite(self):
        with pytest.raises(np.linalg.LinAlgError):
            GramBasis.from_gram([[1.0, 2.0], [2.0, 1.0]])


class TestSectors:
    def test_dimensions(self):
        s = SectorBasis(3)
        assert s.dims == (1, 3, 6)
        assert s.dim == 10

    def test_two_particle_norm(self):
        # <0|b_v b_u b_u^+ b_v^+|0> = |u|^2 |v|^2 + (u.v)^2
        rng = np.random.default_rng(2)
        u, v = rng.normal(size=4), rng.normal(size=4)
        out = SectorBasis(4).two_particle(u, v)
        assert out @ out == pytest.approx((u @ u) * (v @ v) + (u @ v) ** 2, rel=1e-13)

    @pytest.mark.parametrize("a", [0.0, 0.6])
    def test_pair_states_are_normalized(self, a):
        gA, gB = oracle.region_grams(RegionSplit(a), 4)
        basis = PairBasis(gA, gB)
        for k in range(4):
            for l in range(k + 1):
                psi = basis.pair_state(k, l)
                assert psi @ psi == pytest.approx(1.0, abs=1e-12)


class TestRho2:
    def test_single_mode_components(self):
        # |psi_00> = (|2,0> + |0,2>)/2 + |1,1>/sqrt 2
        rho = build_rho2_matrix(thermal_state(0.01, 10.0), K=1)
        m = rho.matrix.reshape(3, 3, 3, 3)
        assert m[2, 0, 2, 0] == pytest.approx(0.25, abs=1e-13)
        assert m[0, 2, 0, 2] == pytest.approx(0.25, abs=1e-13)
        assert m[1, 1, 1, 1] == pytest.approx(0.5, abs=1e-13)
        assert m[2, 0, 0, 2] == pytest.approx(0.25, abs=1e-13)

    @pytest.mark.parametrize("K", [1, 2, 4])
    def test_state_properties(self, K):
        rho = build_rho2_matrix(thermal_state(2.0, 5.0), K=K)
        assert np.trace(rho.matrix) == pytest.approx(1.0, abs=1e-12)
        np.testing.assert_array_equal(rho.matrix, rho.matrix.T)
        assert np.linalg.eigvalsh(rho.matrix).min() >= -1e-12

    @pytest.mark.parametrize("K", [0, 7])
    def test_truncation_limits(self, K):
        with pytest.raises(ValueError):
            build_rho2_matrix(thermal_state(1.0, 1.0), K=K)

    def test_pt_involution(self):
        rho = build_rho2_matrix(thermal_state(1.0, 3.0), K=3)
        pt = partial_transpose(rho.matrix, rho.dim_a, rho.dim_b)
        np.testing.assert_array_equal(partial_transpose(pt, rho.dim_a, rho.dim_b), rho.matrix)

    def test_product_state_has_no_negativity(self):
        # whole line in A: every pair sits in A, nothing to transpose
        rho = build_rho2_matrix(thermal_state(1.0, 3.0), RegionSplit(math.inf), K=3)
        assert exact_negativity(rho) == pytest.approx(0.0, abs=1e-14)

    def test_single_mode_negativity(self):
        rho = build_rho2_matrix(thermal_state(0.01, 10.0), K=1)
        assert exact_negativity(rho) == pytest.approx(K1_NEGATIVITY, abs=1e-12)


class TestRank2:
    def test_ground_state_quarter(self, sym):
        table = overlap_table(1, sym)
        assert rank2_part_eigenvalue(thermal_state(0.01, 10.0), table, 1) == pytest.approx(0.25, abs=1e-12)

    def test_zero_occupations(self, sym):
        assert rank2_part_eigenvalue(state([0.0, 0.0]), overlap_table(2, sym), 2) == 0.0

    def test_rejects_unknown_variant(self, sym):
        with pytest.raises(ValueError):
            rank2_part_eigenvalue(state([1.0]), overlap_table(1, sym), 1, variant="other")

    @pytest.mark.parametrize("K", [2, 3, 4])
    @pytest.mark.parametrize("T, N", [(0.5, 1.0), (3.0, 10.0), (10.0, 100.0)])
    def test_weighted_equals_pt_block_and_formula(self, sym, K, T, N):
        thermal = thermal_state(T, N, K_max=K)
        table = overlap_table(K, sym)
        rho = build_rho2_matrix(thermal, sym, K)
        weighted = rank2_part_eigenvalue(thermal, table, K)
        block = coherence_block_eigenvalue(rho)
        exact = math.sqrt(chi_norm_squared_exact(thermal.n, table)) / oracle.pair_normalization(thermal.n)
        assert weighted == pytest.approx(block, rel=1e-10)
        assert exact == pytest.approx(block, rel=1e-10)

    def test_exact_formula_off_symmetric_split(self):
        split = RegionSplit(0.45)
        thermal = thermal_state(1.5, 4.0, K_max=3)
        table = overlap_table(3, split)
        rho = build_rho2_matrix(thermal, split, 3)
        exact = math.sqrt(chi_norm_squared_exact(thermal.n, table)) / oracle.pair_normalization(thermal.n)
        assert exact == pytest.approx(coherence_block_eigenvalue(rho), rel=1e-10)

    @pytest.mark.parametrize("K", [2, 3, 4])
    @pytest.mark.parametrize("T", [0.05, 1.0, 10.0])
    def test_lower_bound(self, sym, K, T):
        thermal = thermal_state(T, 10.0, K_max=K)
        rho = build_rho2_matrix(thermal, sym, K)
        assert exact_negativity(rho) >= rank2_part_eigenvalue(thermal, overlap_table(K, sym), K) - 1e-9


@pytest.mark.parametrize("a", [0.0, 0.7, -1.3])
def test_pure_pair_entropy_matches_oracle(a):
    split = RegionSplit(a)
    grams = oracle.region_grams(split, 4)
    for k in range(4):
        for l in range(k + 1):
            assert pure_pair_entropy(k, l, split) == pytest.approx(
                oracle.pure_pair_entropy_oracle(k, l, split, grams), abs=1e-10)
