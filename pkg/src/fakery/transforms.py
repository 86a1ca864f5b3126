"""Orthonormal 2-D DCT-II and the periodized level-1 db2 wavelet transform."""

from __future__ import annotations

import math
from functools import lru_cache

import numpy as np


@lru_cache(maxsize=8)
def _dct_matrix(n: int) -> np.ndarray:
    """Orthonormal DCT-II basis: C[k, i] = s_k cos(pi (2i+1) k / 2n)."""
    i = np.arange(n)
    k = np.arange(n).reshape(-1, 1)
    c = np.cos(np.pi * (2 * i + 1) * k / (2 * n))
    c *= np.sqrt(2.0 / n)
    c[0] *= np.sqrt(0.5)
    return c


def dct2(grid: np.ndarray) -> np.ndarray:
    """Separable orthonormal 2-D DCT-II (rows then columns).

    Energy-preserving: sum(x**2) == sum(dct2(x)**2) up to rounding.
    """
    grid = np.asarray(grid, dtype=np.float64)
    if grid.ndim != 2 or grid.shape[0] != grid.shape[1]:
        raise ValueError(f"expected a square grid, got {grid.shape}")
    c = _dct_matrix(grid.shape[0])
    return c @ grid @ c.T


_SQRT3 = math.sqrt(3.0)
_DB2_LOW = np.array(
    [1.0 + _SQRT3, 3.0 + _SQRT3, 3.0 - _SQRT3, 1.0 - _SQRT3]
) / (4.0 * math.sqrt(2.0))
# Quadrature mirror: reversed order, alternating signs.
_DB2_HIGH = _DB2_LOW[::-1] * np.array([1.0, -1.0, 1.0, -1.0])


def db2_filters() -> tuple[np.ndarray, np.ndarray]:
    """The 4-tap Daubechies low/high analysis pair (copies)."""
    return _DB2_LOW.copy(), _DB2_HIGH.copy()


def _analyze_axis(x: np.ndarray, taps: np.ndarray, axis: int) -> np.ndarray:
    """Circular filtering along one axis, decimated to even output positions."""
    n = x.shape[axis]
    out = np.zeros(
        tuple(n // 2 if a == axis else s for a, s in enumerate(x.shape))
    )
    k = np.arange(n // 2)
    for m, t in enumerate(taps):
        idx = (2 * k + m) % n
        out += t * np.take(x, idx, axis=axis)
    return out


def dwt2(gray: np.ndarray) -> tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray]:
    """One level of the separable periodized db2 transform.

    Returns (A, LH, HL, HH), each half-size.  Periodization keeps the
    transform orthonormal, so sub-band energies sum to the input energy.
    """
    gray = np.asarray(gray, dtype=np.float64)
    if gray.ndim != 2 or gray.shape[0] % 2 or gray.shape[1] % 2:
        raise ValueError(f"expected even-sized 2-D input, got {gray.shape}")
    low, high = _DB2_LOW, _DB2_HIGH
    lo_cols = _analyze_axis(gray, low, axis=1)
    hi_cols = _analyze_axis(gray, high, axis=1)
    a = _analyze_axis(lo_cols, low, axis=0)
    lh = _analyze_axis(hi_cols, low, axis=0)
    hl = _analyze_axis(lo_cols, high, axis=0)
    hh = _analyze_axis(hi_cols, high, axis=0)
    return a, lh, hl, hh
