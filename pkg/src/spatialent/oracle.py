"""Brute-force reference for small truncations.

Builds the two-boson mixture as an explicit density matrix on the product
of region-A and region-B Fock spaces (at most two particles each), in a
basis obtained by orthonormalizing the region-restricted single-particle
states. Partial transposition is then an honest index swap.

Nothing here uses the bunching-probability formulas; every amplitude comes
from expanding creation operators in the orthonormal region modes.
"""
from dataclasses import dataclass
from itertools import combinations_with_replacement
import math

import numpy as np

from .regions import RegionSplit, region_integral

MAX_ORACLE_K = 6


class GramRankError(np.linalg.LinAlgError):
    pass


@dataclass(frozen=True)
class GramBasis:
    """Orthonormal basis for the span of K non-orthogonal states.

    ``coords[:, k]`` are the coordinates of state k in the new basis and
    ``L`` maps back: new vector i = sum_k L[k, i] * state k, so that
    ``L.T @ G @ L`` is the identity on the retained rank.
    """

    G: np.ndarray
    coords: np.ndarray
    L: np.ndarray
    rank_tol: float

    @property
    def K(self):
        return self.G.shape[0]

    @property
    def rank(self):
        return self.coords.shape[0]

    @classmethod
    def from_gram(cls, G, rank_tol=1e-12):
        """Symmetric (Lowdin) orthogonalization; canonical if rank deficient."""
        G = np.asarray(G, dtype=float)
        G = 0.5 * (G + G.T)
        evals, U = np.linalg.eigh(G)
        scale = max(float(evals.max()), 0.0) if evals.size else 0.0
        if evals.size and evals.min() < -max(rank_tol, 1e-10) * max(scale, 1.0):
            raise GramRankError(f"Gram matrix is not positive semidefinite (min eig {evals.min():.3e})")
        keep = evals > rank_tol * max(scale, 1.0)
        if not keep.any():
            return cls(G, np.zeros((0, G.shape[0])), np.zeros((G.shape[0], 0)), rank_tol)
        if keep.all():
            root = np.sqrt(evals)
            coords = (U * root) @ U.T
            L = (U / root) @ U.T
        else:
            root = np.sqrt(evals[keep])
            Ur = U[:, keep]
            coords = (Ur * root).T
            L = Ur / root
        return cls(G, coords, L, rank_tol)


class SectorBasis:
    """Orthonormal basis of a region's Fock space with 0, 1 or 2 particles.

    Index 0 is the vacuum, indices 1..r the one-particle states and the rest
    the symmetric two-particle states a_i^+ a_j^+ |0> (i < j) and
    (a_i^+)^2 / sqrt(2) |0>.
    """

    def __init__(self, rank):
        self.rank = rank
        self.pairs = list(combinations_with_replacement(range(rank), 2))

    @property
    def dims(self):
        return 1, self.rank, len(self.pairs)

    @property
    def dim(self):
        return 1 + self.rank + len(self.pairs)

    @property
    def one(self):
        return slice(1, 1 + self.rank)

    @property
    def two(self):
        return slice(1 + self.rank, self.dim)

    def two_particle(self, u, v):
        """Sector-2 coordinates of b_u^+ b_v^+ |0> for single-particle vectors u, v."""
        out = np.empty(len(self.pairs))
        for idx, (i, j) in enumerate(self.pairs):
            if i == j:
                out[idx] = math.sqrt(2.0) * u[i] * v[i]
            else:
                out[idx] = u[i] * v[j] + u[j] * v[i]
        return out


def region_grams(split, K):
    """Region-A and region-B Gram matrices of phi_0..phi_{K-1} by quadrature."""
    gA = np.empty((K, K))
    gB = np.empty((K, K))
    for k in range(K):
        for l in range(k + 1):
            gA[k, l] = gA[l, k] = region_integral(k, l, split, "A")
            gB[k, l] = gB[l, k] = region_integral(k, l, split, "B")
    return gA, gB


class PairBasis:
    """Region bases and the product space used for two-boson states."""

    def __init__(self, gram_a, gram_b, rank_tol=1e-12):
        self.basis_a = GramBasis.from_gram(gram_a, rank_tol)
        self.basis_b = GramBasis.from_gram(gram_b, rank_tol)
        self.sectors_a = SectorBasis(self.basis_a.rank)
        self.sectors_b = SectorBasis(self.basis_b.rank)

    @property
    def dims(self):
        return self.sectors_a.dim, self.sectors_b.dim

    def pair_state(self, k, l):
        """|psi_kl> = a_k^+ a_l^+ |0> (divided by sqrt 2 when k == l)."""
        cA, cB = self.basis_a.coords, self.basis_b.coords
        sa, sb = self.sectors_a, self.sectors_b
        psi = np.zeros(self.dims)
        if sa.rank:
            psi[sa.two, 0] = sa.two_particle(cA[:, k], cA[:, l])
        if sb.rank:
            psi[0, sb.two] = sb.two_particle(cB[:, k], cB[:, l])
        if sa.rank and sb.rank:
            psi[sa.one, sb.one] = np.outer(cA[:, k], cB[:, l]) + np.outer(cA[:, l], cB[:, k])
        if k == l:
            psi /= math.sqrt(2.0)
        return psi.ravel()


@dataclass(frozen=True)
class Rho2:
    matrix: np.ndarray
    dim_a: int
    dim_b: int
    basis: PairBasis
    K: int
    M: float


def pair_normalization(n):
    n = np.asarray(n, dtype=float)
    return 0.5 * (3.0 * float(np.sum(n * n)) + float(np.sum(n)) ** 2)


def build_rho2_matrix(thermal, split=None, K=2, grams=None, trace_tol=1e-10):
    """Explicit density matrix of the average pair restricted to modes < K.

    Weights are 2 <n_k>^2 / M on |psi_kk> and <n_k><n_l> / M on |psi_kl>
    (k > l), with M computed from the retained occupations so the trace
    is one.
    """
    if not 1 <= K <= MAX_ORACLE_K:
        raise ValueError(f"oracle truncation K must be in 1..{MAX_ORACLE_K}, got {K}")
    split = split if split is not None else RegionSplit(0.0)
    gA, gB = grams if grams is not None else region_grams(split, K)
    basis = PairBasis(np.asarray(gA)[:K, :K], np.asarray(gB)[:K, :K])
    n = thermal.occupations(K)
    M = pair_normalization(n)
    dim = basis.dims[0] * basis.dims[1]
    rho = np.zeros((dim, dim))
    for k in range(K):
        for l in range(k + 1):
            w = (2.0 * n[k] ** 2 if k == l else n[k] * n[l]) / M
            if w == 0.0:
                continue
            psi = basis.pair_state(k, l)
            norm = psi @ psi
            if abs(norm - 1.0) > 1e-8:
                raise GramRankError(f"|psi_{k}{l}> has norm^2 {norm:.12f}; Gram basis incomplete")
            rho += w * np.outer(psi, psi)
    rho = 0.5 * (rho + rho.T)
    tr = float(np.trace(rho))
    if abs(tr - 1.0) > trace_tol:
        raise ValueError(f"rho(2) trace deviates from 1 by {tr - 1.0:.3e}")
    return Rho2(rho, basis.dims[0], basis.dims[1], basis, K, M)


def partial_transpose(matrix, dim_a, dim_b):
    """Transpose the B tensor factor of a (dim_a*dim_b)-square matrix."""
    t = np.asarray(matrix).reshape(dim_a, dim_b, dim_a, dim_b)
    return t.transpose(0, 3, 2, 1).reshape(dim_a * dim_b, dim_a * dim_b)


def swap_subsystems(matrix, dim_a, dim_b):
    t = np.asarray(matrix).reshape(dim_a, dim_b, dim_a, dim_b)
    return t.transpose(1, 0, 3, 2).reshape(dim_a * dim_b, dim_a * dim_b)


def exact_negativity(rho2):
    """Sum of |negative eigenvalues| of the partial transpose over B."""
    matrix = rho2.matrix if isinstance(rho2, Rho2) else rho2[0]
    dims = (rho2.dim_a, rho2.dim_b) if isinstance(rho2, Rho2) else rho2[1:]
    evals = np.linalg.eigvalsh(partial_transpose(matrix, *dims))
    return float(-evals[evals < 0.0].sum())


def coherence_block_eigenvalue(rho2):
    """|negative eigenvalue| of the vacuum/(2A,2B) block of rho(2)^{T_B}.

    This block is cut directly out of the full partially transposed matrix,
    so it is the coherent-bunching part as it really appears there.
    """
    sa, sb = rho2.basis.sectors_a, rho2.basis.sectors_b
    pt = partial_transpose(rho2.matrix, rho2.dim_a, rho2.dim_b)
    two_a = np.arange(rho2.dim_a)[sa.two]
    two_b = np.arange(rho2.dim_b)[sb.two]
    idx = np.concatenate([[0], (two_a[:, None] * rho2.dim_b + two_b[None, :]).ravel()])
    block = pt[np.ix_(idx, idx)]
    evals = np.linalg.eigvalsh(block)
    return float(max(-evals[0], 0.0))


def rank2_part_eigenvalue(thermal, overlaps, K, variant="weighted"):
    """Negative eigenvalue magnitude of (|chi><0| + |0><chi|) / M.

    The coherence vector is assembled term by term from normalized
    |2_k>_A|2_k>_B and |1_k,1_l>_A|1_k,1_l>_B states built in the orthonormal
    region bases defined by ``overlaps``' Gram matrices.

    ``variant="weighted"`` uses the coefficients that multiply these terms in
    the partially transposed mixture: 2 <n_k>^2 p_A(k) p_B(k) and
    <n_k><n_l> sqrt(p_AA(kl) p_BB(kl)) (which reduce to <n_k>^2 / 2 and
    <n_k><n_l> p_AA(kl) for a symmetric split). ``variant="bare"`` drops the
    region probabilities: <n_k>^2 / 2 and <n_k><n_l>.
    """
    if not 1 <= K <= MAX_ORACLE_K:
        raise ValueError(f"oracle truncation K must be in 1..{MAX_ORACLE_K}, got {K}")
    if variant not in ("weighted", "bare"):
        raise ValueError(f"unknown variant {variant!r}")
    table = overlaps.truncated(K)
    basis = PairBasis(table.gram_a, table.gram_b)
    sa, sb = basis.sectors_a, basis.sectors_b
    cA, cB = basis.basis_a.coords, basis.basis_b.coords
    n = thermal.occupations(K)
    M = pair_normalization(n)
    if M == 0.0:
        return 0.0
    pA, pB = table.pA, table.pB
    chi = np.zeros((len(sa.pairs), len(sb.pairs)))
    for k in range(K):
        for l in range(k + 1):
            va = sa.two_particle(cA[:, k], cA[:, l])
            vb = sb.two_particle(cB[:, k], cB[:, l])
            na, nb = np.linalg.norm(va), np.linalg.norm(vb)
            if na == 0.0 or nb == 0.0:
                continue
            if k == l:
                coef = 2.0 * n[k] ** 2 * pA[k] * pB[k] if variant == "weighted" else 0.5 * n[k] ** 2
            else:
                if variant == "weighted":
                    # squared norms of the AA and BB components equal p_AA and p_BB
                    coef = n[k] * n[l] * na * nb
                else:
                    coef = n[k] * n[l]
            chi += coef * np.outer(va / na, vb / nb)
    chi = chi.ravel()
    dim = 1 + chi.size
    block = np.zeros((dim, dim))
    block[0, 1:] = chi / M
    block[1:, 0] = chi / M
    evals = np.linalg.eigvalsh(block)
    return float(max(-evals[0], 0.0))


def reduced_entropy(psi, dim_a, dim_b):
    """Entanglement entropy (bits) of a pure state on the A x B product space."""
    s = np.linalg.svd(np.asarray(psi).reshape(dim_a, dim_b), compute_uv=False)
    p = s * s
    p = p[p > 1e-300]
    return float(-(p * np.log2(p)).sum())


def pure_pair_entropy_oracle(k, l, split, grams=None):
    """Entropy of |psi_kl> traced over B, from the explicit oracle state."""
    K = max(k, l) + 1
    gA, gB = grams if grams is not None else region_grams(split, K)
    basis = PairBasis(np.asarray(gA)[:K, :K], np.asarray(gB)[:K, :K])
    return reduced_entropy(basis.pair_state(k, l), *basis.dims)
