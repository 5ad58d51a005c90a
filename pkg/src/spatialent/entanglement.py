"""Two-boson mixture, the coherent-bunching negativity bound and pair entropies."""
from dataclasses import dataclass, asdict
import math

import numpy as np

from . import _kernels
from .oracle import GramBasis, build_rho2_matrix, exact_negativity, pair_normalization
from .regions import RegionSplit, overlap, overlap_table, region_probability
from .thermo import thermal_state


@dataclass(frozen=True)
class TwoBosonMixture:
    """Weights of the average-pair state over |psi_kk> and |psi_kl> (k > l)."""

    K_max: int
    w_kk: np.ndarray
    w_kl: np.ndarray
    M: float

    def total_weight(self):
        return float(self.w_kk.sum() + np.tril(self.w_kl, -1).sum())


def mixture_weights(thermal, K=None):
    n = thermal.n if K is None else thermal.occupations(K)
    M = pair_normalization(n)
    w_kl = np.tril(np.outer(n, n), -1) / M
    return TwoBosonMixture(n.size, 2.0 * n * n / M, w_kl, M)


def _require_symmetric(table):
    if table.split.a != 0.0:
        raise ValueError("the printed chi-norm sum assumes the symmetric split a = 0")


def chi_norm_squared(n, table, method="matrix"):
    """Printed triple sum for M^2 <chi|chi> at the symmetric split.

    1/4 sum_{k,l} n_k^2 n_l^2 O_kl^4
      + sum_{k>l} sum_{k'>l'} n_k n_l n_k' n_l' O_kk'^2 O_ll'^2 p_AA(kl) p_AA(k'l')
      + sum_{k'>l'} sum_k n_k^2 n_k' n_l' O_kk'^2 O_kl'^2 p_AA(k'l')

    ``method="matrix"`` regroups the pair sums into dense products, O(K^3);
    ``method="direct"`` runs the quadruple loop (compiled when available).
    """
    _require_symmetric(table)
    n = np.asarray(n, dtype=float)
    K = n.size
    if K > table.K:
        raise ValueError(f"overlap table has {table.K} modes, occupations {K}")
    O = table.O[:K, :K]
    p_aa = table.p_aa()[:K, :K]
    if method == "direct":
        return float(_kernels.chi_printed_direct(n, O, p_aa))
    if method != "matrix":
        raise ValueError(f"unknown method {method!r}")
    B = O * O
    n2 = n * n
    first = 0.25 * float(n2 @ (B * B) @ n2)
    W = np.tril(np.outer(n, n) * p_aa, -1)
    second = float(np.sum((W.T @ B @ W) * B))
    third = float(np.sum(W * (B @ (n2[:, None] * B))))
    return first + second + third


def chi_norm_squared_exact(n, table):
    """Exact M^2 <chi|chi> for the coherence vector of the partial transpose.

    chi = sum_{k>=l} c_kl (a_k^+ a_l^+ |0>)_A (x) (a_k^+ a_l^+ |0>)_B with
    region-restricted (unnormalized) creation operators, c_kl = n_k n_l for
    k > l and n_k^2 / 2 on the diagonal. Inner products
    <0|a_k a_l a_k'^+ a_l'^+|0> = g_kk' g_ll' + g_kl' g_lk' are taken with the
    region Gram matrices g, so exchange terms and the signs of the B-region
    overlaps are kept. Valid for any split; O(K^3).
    """
    n = np.asarray(n, dtype=float)
    K = n.size
    A = table.gram_a[:K, :K]
    Bg = table.gram_b[:K, :K]
    H = A * Bg
    d = n * n
    u = H @ n
    P = A @ (n[:, None] * Bg)
    x1 = float(n @ (P * P.T) @ n)
    total = float(n @ u) ** 2 + x1 + 4.0 * float(d @ (u * u)) + 2.0 * float(d @ (H * H) @ d)
    return 0.5 * total


@dataclass(frozen=True)
class NegativityReport:
    T: float
    mu: float
    N_mean: float
    K_max: int
    M: float
    lambda_: float
    chi_norm_sq: float
    lambda_exact: float
    chi_norm_sq_exact: float
    tail_bound: float
    condensate_fraction: float
    truncation_error: float
    oracle_k: int | None = None
    oracle_negativity: float | None = None

    @property
    def gap(self):
        if self.oracle_negativity is None:
            return None
        return self.oracle_negativity - self.lambda_

    def as_dict(self):
        out = asdict(self)
        out["lambda"] = out.pop("lambda_")
        out["gap"] = self.gap
        return out


def lambda_from_state(thermal, table=None, method="matrix"):
    """(lambda, chi_norm_sq, lambda_exact, chi_norm_sq_exact, M) for a solved state."""
    n = thermal.n
    if table is None:
        table = overlap_table(n.size, RegionSplit(0.0))
    M = pair_normalization(n)
    chi = chi_norm_squared(n, table, method)
    chi_exact = chi_norm_squared_exact(n, table)
    if M == 0.0:
        return 0.0, chi, 0.0, chi_exact, M
    return math.sqrt(chi) / M, chi, math.sqrt(max(chi_exact, 0.0)) / M, chi_exact, M


def lambda_lower_bound(T, N_target, eps=1e-8, oracle_k=None, K_max=None, method="matrix"):
    """Coherent-bunching lower bound on the negativity of the average pair.

    Solves mu at fixed <N>, truncates where the occupation tail is below
    ``eps * N_target`` and evaluates lambda = sqrt(<chi|chi>) / M at the
    symmetric split. ``lambda_`` is the printed triple sum,
    ``lambda_exact`` the exact norm of the coherence vector. With
    ``oracle_k`` the explicit small-truncation negativity is attached.
    """
    if not (T > 0.0):
        raise ValueError("T must be positive; approach T = 0 through small T")
    thermal = thermal_state(T, N_target, eps, K_max=K_max)
    table = overlap_table(thermal.K_max, RegionSplit(0.0))
    lam, chi, lam_exact, chi_exact, M = lambda_from_state(thermal, table, method)
    # lambda is homogeneous of degree zero in the occupations; dropping a tail
    # of relative size delta moves it by at most ~4 delta
    trunc = 4.0 * thermal.tail_bound / max(thermal.retained_number, 1e-300) * lam
    oracle_neg = None
    if oracle_k is not None:
        rho = build_rho2_matrix(thermal, RegionSplit(0.0), oracle_k)
        oracle_neg = exact_negativity(rho)
    return NegativityReport(
        T=T, mu=thermal.mu, N_mean=thermal.N_mean, K_max=thermal.K_max, M=M,
        lambda_=lam, chi_norm_sq=chi, lambda_exact=lam_exact, chi_norm_sq_exact=chi_exact,
        tail_bound=thermal.tail_bound, condensate_fraction=thermal.condensate_fraction,
        truncation_error=trunc, oracle_k=oracle_k, oracle_negativity=oracle_neg,
    )


def entropy_bits(probs):
    p = np.asarray(probs, dtype=float)
    p = p[p > 1e-300]
    return float(-(p * np.log2(p)).sum())


def reduced_spectrum(k, l, split):
    """Eigenvalues of rho_A(kl), the pair state |psi_kl> traced over B.

    For k != l the one-particle block lives on the non-orthogonal states
    |1_k>_A, |1_l>_A; its spectrum is taken in a Lowdin-orthonormalized
    basis of both regions, with the B-region overlap entering the coherence.
    """
    pak = region_probability(k, split)
    pbk = 1.0 - pak
    if k == l:
        return np.array([pak * pak, pbk * pbk, 2.0 * pak * pbk])
    pal = region_probability(l, split)
    pbl = 1.0 - pal
    oa = overlap(k, l, split, "A")
    ob = overlap(k, l, split, "B")
    p_aa = pak * pal * (1.0 + oa * oa)
    p_bb = pbk * pbl * (1.0 + ob * ob)
    # rows: A-mode (k, l); columns: B-mode (k, l)
    amp = np.array([[0.0, math.sqrt(pak * pbl)], [math.sqrt(pal * pbk), 0.0]])
    ca = GramBasis.from_gram([[1.0, oa], [oa, 1.0]]).coords
    cb = GramBasis.from_gram([[1.0, ob], [ob, 1.0]]).coords
    s = np.linalg.svd(ca @ amp @ cb.T, compute_uv=False)
    return np.concatenate([[p_aa, p_bb], s * s])


def pure_pair_entropy(k, l, split):
    """Spatial entanglement entropy (bits) of the pair state |psi_kl>."""
    return entropy_bits(reduced_spectrum(k, l, split))


def split_scan_entropy(k, a_grid, quadrature_tol=1e-13):
    """Entropy of |psi_kk> for each split point; list of (a, bits)."""
    return [(float(a), pure_pair_entropy(k, k, RegionSplit(float(a), quadrature_tol))) for a in a_grid]
