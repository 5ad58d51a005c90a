"""Grand canonical occupations of the harmonic trap (kappa = 1, E_k = k)."""
from dataclasses import dataclass
import math

import numpy as np
from scipy import optimize


def _check_T(T):
    if not (T > 0.0) or not math.isfinite(T):
        raise ValueError(f"temperature must be positive and finite, got {T!r}")


def _check_mu(mu):
    if not (mu < 0.0):
        raise ValueError(f"chemical potential must be negative (below E_0 = 0), got {mu!r}")


def bose_occupation(k, T, mu):
    """Mean occupation 1 / (exp((k - mu)/T) - 1) of mode k."""
    _check_T(T)
    _check_mu(mu)
    k = np.asarray(k, dtype=float)
    with np.errstate(over="ignore"):
        out = 1.0 / np.expm1((k - mu) / T)
    return float(out) if out.ndim == 0 else out


def tail_bound(K, T, mu):
    """Upper bound on sum_{k >= K} <n_k>.

    With q_k = exp(-(k - mu)/T), <n_k> = q_k / (1 - q_k) <= q_k / (1 - q_K)
    for k >= K, and the geometric sum of q_k gives the closed form.
    """
    _check_T(T)
    _check_mu(mu)
    x = (K - mu) / T
    if x > 700.0:
        return 0.0
    q = math.exp(-x)
    return q / (-math.expm1(-1.0 / T) * -math.expm1(-x))


def _series_cutoff(T, mu, rel):
    # smallest K with q_K / (1 - e^{-1/T}) <= rel
    return max(1, int(math.ceil(mu + T * math.log(1.0 / (rel * -math.expm1(-1.0 / T))))) + 1)


def mean_number(T, mu):
    """Untruncated <N>(T, mu) = sum_k <n_k>.

    The series is summed until the remaining geometric tail bound falls below
    1e-17 of the leading occupation; that remainder is then added as a
    midpoint estimate.
    """
    _check_T(T)
    _check_mu(mu)
    n0 = 1.0 / math.expm1(-mu / T)
    K = _series_cutoff(T, mu, 1e-17 * min(1.0, n0))
    k = np.arange(K, dtype=float)
    with np.errstate(over="ignore"):
        head = 1.0 / np.expm1((k - mu) / T)
    # lower bound on the remainder is the plain geometric sum of q_k
    x = (K - mu) / T
    lower = math.exp(-x) / -math.expm1(-1.0 / T) if x < 700.0 else 0.0
    upper = tail_bound(K, T, mu)
    return float(np.sum(head[::-1])) + 0.5 * (lower + upper)


def solve_chemical_potential(T, N_target, tol=1e-12):
    """Chemical potential mu < 0 with <N>(T, mu) = N_target.

    <N>(mu) is continuous and strictly increasing from 0 to infinity on
    mu in (-inf, 0), so the bracket always holds. Brent's method combines
    bisection with secant/inverse-quadratic steps.
    """
    _check_T(T)
    if not (N_target > 0.0) or not math.isfinite(N_target):
        raise ValueError(f"N_target must be positive and finite, got {N_target!r}")
    lo = -T * math.log1p(1.0 / N_target) - 50.0 * T
    hi = -1e-16 * max(1.0, T)
    f = lambda mu: mean_number(T, mu) - N_target
    flo, fhi = f(lo), f(hi)
    while flo > 0.0:
        lo *= 2.0
        flo = f(lo)
    if fhi < 0.0:
        raise RuntimeError(
            f"cannot bracket mu for T={T}, N={N_target}: <N>(mu={hi:g}) = {fhi + N_target:g}"
        )
    mu = optimize.brentq(f, lo, hi, xtol=1e-300, rtol=4 * np.finfo(float).eps, maxiter=500)
    resid = abs(f(mu)) / N_target
    if resid > max(tol, 1e-13):
        raise RuntimeError(f"mu solve residual {resid:.3e} exceeds tolerance {tol:.1e}")
    return mu


def choose_truncation(T, mu, N_target, eps):
    """Smallest K with tail_bound(K) <= eps * N_target (at least 1)."""
    if not (0.0 < eps < 1.0):
        raise ValueError("eps must lie in (0, 1)")
    budget = eps * N_target
    # tail_bound is decreasing in K; start from the geometric estimate
    K = max(1, _series_cutoff(T, mu, budget) - 2)
    while K > 1 and tail_bound(K - 1, T, mu) <= budget:
        K -= 1
    while tail_bound(K, T, mu) > budget:
        K += 1
    return K


@dataclass(frozen=True)
class ThermalState:
    """Solved grand canonical state truncated to modes k < K_max."""

    T: float
    mu: float
    N_mean: float
    K_max: int
    n: np.ndarray
    tail_bound: float

    @property
    def condensate_fraction(self):
        return float(self.n[0] / self.N_mean)

    @property
    def retained_number(self):
        return float(np.sum(self.n))

    def occupations(self, K):
        """Occupations of modes 0..K-1, extending past K_max if needed."""
        if K <= self.K_max:
            return self.n[:K].copy()
        return bose_occupation(np.arange(K), self.T, self.mu)


def thermal_state(T, N_target, eps=1e-8, tol=1e-12, K_max=None):
    """Solve mu at fixed <N> and truncate where the tail is below eps * <N>.

    Passing ``K_max`` overrides the automatic truncation.
    """
    mu = solve_chemical_potential(T, N_target, tol)
    if K_max is None:
        K_max = choose_truncation(T, mu, N_target, eps)
    n = bose_occupation(np.arange(K_max), T, mu)
    return ThermalState(T, mu, float(N_target), int(K_max), np.atleast_1d(n), tail_bound(K_max, T, mu))


def thermal_state_from_mu(T, mu, K_max):
    """ThermalState for an explicit chemical potential (no number constraint)."""
    n = np.atleast_1d(bose_occupation(np.arange(K_max), T, mu))
    return ThermalState(T, mu, mean_number(T, mu), int(K_max), n, tail_bound(K_max, T, mu))
