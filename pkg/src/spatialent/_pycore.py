"""Pure-Python/numpy implementations of the hot kernels.

Used when the compiled ``_core`` extension is unavailable, or when
``SPATIALENT_PURE_PYTHON=1`` is set. Signatures mirror ``_core.pyx``.
"""
import math

import numpy as np

_PI_QUARTER = math.pi ** -0.25
# rescale threshold for the running amplitudes; the Gaussian factor is kept
# as a separate log-scale so large k / large |x| neither overflow nor underflow
_BIG = 1e150
_LOG_BIG = math.log(_BIG)


def eigenfunction_value(k, x):
    """phi_k(x) for a single mode and a single point."""
    x = float(x)
    scale = -0.5 * x * x
    prev = 0.0
    cur = _PI_QUARTER
    for j in range(k):
        nxt = x * math.sqrt(2.0 / (j + 1)) * cur - math.sqrt(j / (j + 1)) * prev
        prev, cur = cur, nxt
        if abs(cur) > _BIG:
            cur /= _BIG
            prev /= _BIG
            scale += _LOG_BIG
    if cur == 0.0:
        return 0.0
    return cur * math.exp(scale)


def eigenfunction_row(kmax, x):
    """phi_0(x), ..., phi_kmax(x) at one point."""
    x = float(x)
    out = np.empty(kmax + 1)
    scale = -0.5 * x * x
    prev = 0.0
    cur = _PI_QUARTER
    out[0] = cur * math.exp(scale)
    for j in range(kmax):
        nxt = x * math.sqrt(2.0 / (j + 1)) * cur - math.sqrt(j / (j + 1)) * prev
        prev, cur = cur, nxt
        if abs(cur) > _BIG:
            cur /= _BIG
            prev /= _BIG
            scale += _LOG_BIG
        out[j + 1] = cur * math.exp(scale) if cur != 0.0 else 0.0
    return out


def eigenfunction_table(kmax, xs):
    """Array of shape (kmax + 1, len(xs)) with phi_k(xs[i])."""
    xs = np.asarray(xs, dtype=float)
    out = np.empty((kmax + 1, xs.size))
    scale = -0.5 * xs * xs
    prev = np.zeros_like(xs)
    cur = np.full_like(xs, _PI_QUARTER)
    with np.errstate(under="ignore", over="ignore"):
        out[0] = cur * np.exp(scale)
        for j in range(kmax):
            nxt = xs * math.sqrt(2.0 / (j + 1)) * cur - math.sqrt(j / (j + 1)) * prev
            prev, cur = cur, nxt
            big = np.abs(cur) > _BIG
            if big.any():
                cur[big] /= _BIG
                prev[big] /= _BIG
                scale[big] += _LOG_BIG
            out[j + 1] = cur * np.exp(scale)
    return out


def chi_printed_direct(n, O, p_aa):
    """Direct O(K^4) evaluation of the printed chi-norm triple sum.

    ``O`` holds normalized region-A overlaps, ``p_aa`` the pair bunching
    probabilities (only the k > l entries are read). Terms with a zero
    overlap factor are skipped.
    """
    n = np.asarray(n, dtype=float)
    K = n.size
    B = np.asarray(O, dtype=float)[:K, :K] ** 2
    p_aa = np.asarray(p_aa, dtype=float)[:K, :K]
    n2 = n * n

    first = 0.25 * float(n2 @ (B * B) @ n2)

    pairs = [(k, l) for k in range(K) for l in range(k) if n[k] != 0.0 and n[l] != 0.0]
    second = 0.0
    third = 0.0
    for k, l in pairs:
        wkl = n[k] * n[l] * p_aa[k, l]
        for kp, lp in pairs:
            bk = B[k, kp]
            if bk == 0.0:
                continue
            bl = B[l, lp]
            if bl == 0.0:
                continue
            second += wkl * n[kp] * n[lp] * p_aa[kp, lp] * bk * bl
    for kp, lp in pairs:
        wp = n[kp] * n[lp] * p_aa[kp, lp]
        acc = 0.0
        for k in range(K):
            b1 = B[k, kp]
            if b1 == 0.0:
                continue
            acc += n2[k] * b1 * B[k, lp]
        third += wp * acc
    return first + second + third
