"""Fractional differentiation D^alpha, its inverse, and the radial derivative.

All three act diagonally on homogeneous parts: the degree-k block is
scaled by (k+1)^alpha, (k+1)^-alpha and k respectively.
"""
from __future__ import annotations

from functools import lru_cache

import numpy as np

from .series import HoloSeries


@lru_cache(maxsize=256)
def _power_factors(K: int, alpha: float) -> tuple:
    k = np.arange(K + 1, dtype=float)
    return tuple(np.exp(alpha * np.log1p(k)))


def frac_derivative(f: HoloSeries, alpha: float) -> HoloSeries:
    """D^alpha f = sum_k (k+1)^alpha f_k."""
    alpha = float(alpha)
    if alpha == 0.0:
        return f
    if alpha == 1.0:
        return f.map_degrees(range(1, f.max_degree + 2))
    return f.map_degrees(_power_factors(f.max_degree, alpha))


def frac_integral(f: HoloSeries, alpha: float) -> HoloSeries:
    """D^{-alpha} f, the inverse of :func:`frac_derivative`."""
    alpha = float(alpha)
    if alpha == 1.0:
        return f.map_degrees([1.0 / (k + 1) for k in range(f.max_degree + 1)])
    return frac_derivative(f, -alpha)


def radial_derivative(f: HoloSeries) -> HoloSeries:
    """R f = sum_k k f_k = sum_j z_j df/dz_j."""
    return f.map_degrees(range(f.max_degree + 1))


D = lambda f: frac_derivative(f, 1.0)  # noqa: E731
