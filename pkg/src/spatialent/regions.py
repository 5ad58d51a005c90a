"""Region-restricted probabilities and overlaps for a split of the line.

The line is cut at ``a`` into A = (-inf, a] and B = (a, inf). For each
eigenfunction phi_k, p_A(k) is the probability of finding the particle in A
and ``O[k, l]`` is the overlap of the normalized region-A restrictions of
phi_k and phi_l.
"""
from dataclasses import dataclass, field
from functools import lru_cache
import math
import warnings

import numpy as np
from scipy import integrate

from . import _kernels
from .hermite import _check_mode, eigenfunction_derivatives


class QuadratureError(RuntimeError):
    """Adaptive quadrature did not reach the requested tolerance."""

    def __init__(self, message, estimate):
        super().__init__(f"{message} (error estimate {estimate:.3e})")
        self.estimate = estimate


@dataclass(frozen=True)
class RegionSplit:
    a: float = 0.0
    quadrature_tol: float = 1e-13

    def __post_init__(self):
        if math.isnan(self.a):
            raise ValueError("split point must not be NaN")
        if self.quadrature_tol <= 0:
            raise ValueError("quadrature_tol must be positive")

    @property
    def symmetric(self):
        return self.a == 0.0


def _cutoff(k):
    # beyond the classical turning point sqrt(2k+1) the integrand decays like
    # exp(-(x - turning)^2); 9 units leaves < 1e-30
    return math.sqrt(2.0 * k + 1.0) + 9.0


@lru_cache(maxsize=65536)
def _integral(k, l, lo, hi, tol):
    """Adaptive Gauss-Kronrod integral of phi_k phi_l over [lo, hi]."""
    if hi <= lo:
        return 0.0
    f = _kernels.eigenfunction_value
    if k == l:
        def integrand(x):
            v = f(k, x)
            return v * v
    else:
        def integrand(x):
            return f(k, x) * f(l, x)
    limit = 200 + 4 * max(k, l)
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always", integrate.IntegrationWarning)
        value, err = integrate.quad(
            integrand, lo, hi, epsabs=0.1 * tol, epsrel=1e-14, limit=limit
        )
    if err > tol:
        raise QuadratureError(
            f"quadrature of phi_{k} phi_{l} on [{lo:g}, {hi:g}] did not converge", err
        )
    if caught and err > 0.1 * tol:
        raise QuadratureError(str(caught[0].message).splitlines()[0], err)
    return value


def region_integral(k, l, split, region="A"):
    """Unnormalized overlap integral of phi_k phi_l over region A or B."""
    k = _check_mode(k)
    l = _check_mode(l)
    k, l = max(k, l), min(k, l)
    a = float(split.a)
    X = _cutoff(k)
    whole = 1.0 if k == l else 0.0
    lo, hi = -max(X, abs(a) + 1.0), max(X, abs(a) + 1.0)
    if a == math.inf:
        inside_a = whole
    elif a == -math.inf:
        inside_a = 0.0
    elif a <= 0.0:
        inside_a = _integral(k, l, lo, a, split.quadrature_tol)
    else:
        inside_a = whole - _integral(k, l, a, hi, split.quadrature_tol)
    if region == "A":
        return inside_a
    if region == "B":
        if a == math.inf:
            return 0.0
        if a == -math.inf:
            return whole
        if a > 0.0:
            return _integral(k, l, a, hi, split.quadrature_tol)
        return whole - inside_a
    raise ValueError(f"region must be 'A' or 'B', got {region!r}")


def region_probability(k, split, region="A", use_parity=True):
    """Probability p_A(k) (or p_B(k)) of finding phi_k inside the region."""
    k = _check_mode(k)
    if use_parity and split.a == 0.0:
        return 0.5
    return region_integral(k, k, split, region)


def overlap(k, l, split, region="A", use_parity=True):
    """Signed normalized overlap of the region-restricted states of phi_k, phi_l."""
    k = _check_mode(k)
    l = _check_mode(l)
    if k == l:
        return 1.0
    if use_parity and split.a == 0.0 and (k - l) % 2 == 0:
        return 0.0
    pk = region_probability(k, split, region, use_parity)
    pl = region_probability(l, split, region, use_parity)
    if pk == 0.0 or pl == 0.0:
        return 0.0
    return region_integral(k, l, split, region) / math.sqrt(pk * pl)


def bunching_probabilities(k, l, split):
    """(p_AA, p_BB, p_AB) for the symmetrized pair state of modes k and l.

    For k != l the bunching-enhanced form p_A(k) p_A(l) (1 + O_kl^2) is used.
    For k == l both bosons occupy the same mode and the amplitudes are
    p_A(k), p_B(k), sqrt(2 p_A(k) p_B(k)), giving probabilities
    p_A^2, p_B^2, 2 p_A p_B.
    """
    pak = region_probability(k, split, "A")
    pbk = 1.0 - pak
    if k == l:
        return pak * pak, pbk * pbk, 2.0 * pak * pbk
    pal = region_probability(l, split, "A")
    pbl = 1.0 - pal
    oa = overlap(k, l, split, "A")
    ob = overlap(k, l, split, "B")
    p_aa = pak * pal * (1.0 + oa * oa)
    p_bb = pbk * pbl * (1.0 + ob * ob)
    return p_aa, p_bb, 1.0 - p_aa - p_bb


@dataclass(frozen=True)
class OverlapTable:
    """Region overlaps for modes 0..K-1.

    ``gram_a[k, l]`` is the unnormalized integral of phi_k phi_l over A and
    ``gram_b`` the same over B; ``O`` is the normalized region-A overlap.
    """

    split: RegionSplit
    pA: np.ndarray
    gram_a: np.ndarray
    gram_b: np.ndarray
    O: np.ndarray = field(init=False)

    def __post_init__(self):
        object.__setattr__(self, "O", _normalize(self.gram_a, self.pA))

    @property
    def K(self):
        return self.pA.shape[0]

    @property
    def pB(self):
        return np.diag(self.gram_b).copy()

    @property
    def O_b(self):
        return _normalize(self.gram_b, self.pB)

    def p_aa(self):
        """K x K table of p_AA(k, l) in the k != l form."""
        return np.outer(self.pA, self.pA) * (1.0 + self.O ** 2)

    def p_bb(self):
        return np.outer(self.pB, self.pB) * (1.0 + self.O_b ** 2)

    def truncated(self, K):
        if K > self.K:
            raise ValueError(f"table has only {self.K} modes, requested {K}")
        return OverlapTable(
            self.split, self.pA[:K].copy(), self.gram_a[:K, :K].copy(),
            self.gram_b[:K, :K].copy(),
        )


def _normalize(gram, p):
    norm = np.sqrt(np.outer(p, p))
    out = np.divide(gram, norm, out=np.zeros_like(gram), where=norm > 0)
    np.fill_diagonal(out, np.where(p > 0, 1.0, 0.0))
    return out


def overlap_table(K, split, method="closed_form"):
    """Build the region overlap table for modes 0..K-1.

    ``method="closed_form"`` evaluates off-diagonal integrals from the
    Wronskian identity

        int_{-inf}^a phi_k phi_l = (phi_l phi_k' - phi_k phi_l')(a) / (2 (l - k)),

    which follows from phi_k'' = (x^2 - 2k - 1) phi_k, and takes the diagonal
    from quadrature (or parity at a = 0). ``method="quadrature"`` integrates
    every entry adaptively.
    """
    if K < 1:
        raise ValueError("K must be at least 1")
    _check_mode(K - 1)
    a = float(split.a)
    if method == "quadrature":
        gram_a = np.empty((K, K))
        gram_b = np.empty((K, K))
        for k in range(K):
            for l in range(k + 1):
                gram_a[k, l] = gram_a[l, k] = region_integral(k, l, split, "A")
                gram_b[k, l] = gram_b[l, k] = region_integral(k, l, split, "B")
        return OverlapTable(split, np.diag(gram_a).copy(), gram_a, gram_b)
    if method != "closed_form":
        raise ValueError(f"unknown method {method!r}")

    eye = np.eye(K)
    if math.isinf(a):
        gram_a = eye.copy() if a > 0 else np.zeros((K, K))
        return OverlapTable(split, np.diag(gram_a).copy(), gram_a, eye - gram_a)

    vals, ders = eigenfunction_derivatives(K - 1, a)
    k = np.arange(K)
    diff = 2.0 * (k[None, :] - k[:, None]).astype(float)
    np.fill_diagonal(diff, 1.0)
    gram_a = (np.outer(ders, vals) - np.outer(vals, ders)) / diff
    if a == 0.0:
        # same-parity products are even: their half-line integral is exactly 0
        same = (k[:, None] - k[None, :]) % 2 == 0
        gram_a[same] = 0.0
        pA = np.full(K, 0.5)
    else:
        pA = np.array([region_probability(j, split, "A") for j in range(K)])
    np.fill_diagonal(gram_a, pA)
    gram_b = eye - gram_a
    return OverlapTable(split, pA, gram_a, gram_b)
