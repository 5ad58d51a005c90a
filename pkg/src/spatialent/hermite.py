"""Harmonic-oscillator eigenfunctions in natural units (hbar = m = omega = 1).

Energies follow the convention E_k = k; the zero-point offset is absorbed
into the chemical potential.
"""
from dataclasses import dataclass
import math

import numpy as np

from . import _kernels

MAX_MODE = 10_000


def _check_mode(k):
    if k < 0 or int(k) != k:
        raise ValueError(f"mode index must be a non-negative integer, got {k!r}")
    if k > MAX_MODE:
        raise ValueError(f"mode index {k} above supported cap {MAX_MODE}")
    return int(k)


@dataclass(frozen=True)
class EigenMode:
    k: int

    def __post_init__(self):
        _check_mode(self.k)

    @property
    def energy(self):
        return float(self.k)

    def __call__(self, x):
        return eval_eigenfunction(self.k, x)


def eval_eigenfunction(k, x):
    """Evaluate phi_k at a scalar or array position.

    Uses the normalized three-term recurrence

        phi_{j+1} = x sqrt(2/(j+1)) phi_j - sqrt(j/(j+1)) phi_{j-1}

    started from phi_0 = pi^(-1/4) exp(-x^2/2), so H_k is never formed.
    """
    k = _check_mode(k)
    if np.ndim(x) == 0:
        x = float(x)
        if not math.isfinite(x):
            raise ValueError("position must be finite")
        return _kernels.eigenfunction_value(k, x)
    xs = np.asarray(x, dtype=float)
    if not np.all(np.isfinite(xs)):
        raise ValueError("positions must be finite")
    return _kernels.eigenfunction_table(k, xs.ravel())[k].reshape(xs.shape)


def eigenfunction_table(kmax, x):
    """phi_0 .. phi_kmax at the given points, shape ``(kmax + 1,) + x.shape``."""
    kmax = _check_mode(kmax)
    xs = np.asarray(x, dtype=float)
    table = _kernels.eigenfunction_table(kmax, xs.ravel())
    return table.reshape((kmax + 1,) + xs.shape)


def eigenfunction_derivatives(kmax, x):
    """Values and first derivatives of phi_0 .. phi_kmax at a scalar point.

    phi_k' = sqrt(k/2) phi_{k-1} - sqrt((k+1)/2) phi_{k+1}.
    """
    kmax = _check_mode(kmax)
    row = _kernels.eigenfunction_row(kmax + 1, float(x))
    k = np.arange(kmax + 1)
    deriv = -np.sqrt((k + 1) / 2.0) * row[1:]
    deriv[1:] += np.sqrt(k[1:] / 2.0) * row[: kmax]
    return row[: kmax + 1], deriv
