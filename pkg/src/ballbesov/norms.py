"""Weighted Besov norms, the weighted Bloch seminorm and the sup norm.

The Besov norm of order p with weight omega is

    ||f||^p = int_{B^n} (1-|z|^2)^p |Df(z)|^p omega(1-|z|) (1-|z|^2)^{-(n+1)} dnu(z)

with D the first fractional derivative (D = I + R).  For p = 2 and a pure
power weight it reduces to a coefficient sum over exact monomial moments;
otherwise it is computed by slice quadrature.
"""
from __future__ import annotations

import math
from dataclasses import asdict, dataclass, field
from typing import Sequence

import numpy as np

from .fraccalc import frac_derivative
from .quadrature import (BallRule, auto_sphere_rule, ball_values, build_ball_rule,
                         product_sphere_rule, radial_chunks, radial_moment,
                         sphere_degree_blocks)
from .series import HoloSeries, order, sphere_moment
from .weights import WeightS

CONVERGENCE_TOL = 1e-6


class DivergenceError(ValueError):
    """The requested norm integral is infinite for every nonzero function."""


@dataclass
class NormResult:
    value: float
    p: float
    weight: dict
    rule: dict | None
    truncation: int
    method: str
    convergence_flag: bool | None = None
    refined_value: float | None = None
    provenance: dict = field(default_factory=dict)

    @property
    def trusted(self) -> bool:
        return self.convergence_flag is not False

    def to_dict(self) -> dict:
        return asdict(self)


def power_exponent(omega: WeightS) -> float | None:
    """e if omega(t) = t^e exactly, else None."""
    d = omega.descriptor
    if d.get("type") == "power":
        return -float(d["a"])
    if d.get("type") in ("shifted", "star") and "base" in d:
        from .weights import weight_from_dict
        inner = power_exponent(weight_from_dict(d["base"]))
        return None if inner is None else inner + float(d["exponent"])
    return None


def boundary_exponent(n: int, p: float, omega: WeightS) -> float:
    """Exponent of (1-r) in the norm integrand near r = 1."""
    return p - n - 1 + omega.growth_exponent


def check_integrable(n: int, p: float, omega: WeightS) -> None:
    e = boundary_exponent(n, p, omega)
    if not e > -1:
        raise DivergenceError(
            f"norm integral diverges: boundary exponent p - n - 1 + e_omega = {e:g} <= -1 "
            f"(n={n}, p={p:g}, weight={omega.descriptor})"
        )


def besov_norm_exact(f: HoloSeries, omega: WeightS) -> float:
    """p = 2 norm for a power weight via monomial moments."""
    e = power_exponent(omega)
    if e is None:
        raise ValueError("exact path needs a pure power weight")
    n = f.dim
    check_integrable(n, 2.0, omega)
    Df = frac_derivative(f, 1.0)
    radial: dict[int, float] = {}
    total = 0.0
    for m, b in Df.coeffs.items():
        k = order(m)
        if k not in radial:
            radial[k] = 2 * n * radial_moment(2 * n - 1 + 2 * k, 1.0 - n, e)
        total += abs(b) ** 2 * sphere_moment(m) * radial[k]
    return math.sqrt(total)


def default_norm_rule(f: HoloSeries, p: float, omega: WeightS, levels: int = 20,
                      points: int = 10, oversample: int = 2) -> BallRule:
    sphere = auto_sphere_rule(f.dim, f.partial_degrees(), oversample=oversample)
    return build_ball_rule(f.dim, p - f.dim - 1, omega, levels, points, sphere)


def _norm_by_quadrature(Df: HoloSeries, p: float, omega: WeightS, rule: BallRule) -> float:
    n = Df.dim
    g = rule.gaps
    radial = (g * (2.0 - g)) ** (p - n - 1) * omega(g)
    blocks = sphere_degree_blocks(Df, rule.sphere)
    profile = np.empty(rule.radii.size)
    for sl in radial_chunks(rule, 4_000_000):
        vals = np.abs(ball_values(Df, rule, blocks, sl)) ** p
        if not np.all(np.isfinite(vals)):
            raise FloatingPointError("non-finite integrand value")
        profile[sl] = rule.sphere.weights @ vals
    return float(np.dot(rule.jacobian_weights, profile * radial)) ** (1.0 / p)


def besov_norm(f: HoloSeries, p: float, omega: WeightS, rule: BallRule | None = None, *,
               method: str = "auto", check_convergence: bool = True) -> NormResult:
    """Weighted Besov norm of ``f``.

    ``method`` is ``"exact"`` (p = 2, power weight), ``"quadrature"`` or
    ``"auto"`` (exact when applicable and no rule is given).  With
    ``check_convergence`` the quadrature value is compared with a refined
    rule and ``convergence_flag`` records whether they agree to 1e-6.
    """
    if not p > 0:
        raise ValueError("p must be positive")
    n = f.dim
    if rule is not None and rule.dim != n:
        raise ValueError("rule dimension does not match the series")
    wdesc = omega.to_dict()
    if f.degree < 0:
        return NormResult(0.0, p, wdesc, None, f.max_degree, "trivial", True)
    check_integrable(n, p, omega)
    use_exact = method == "exact" or (
        method == "auto" and rule is None and p == 2 and power_exponent(omega) is not None)
    if use_exact:
        return NormResult(besov_norm_exact(f, omega), p, wdesc, None, f.max_degree, "exact", True)
    if rule is None:
        rule = default_norm_rule(f, p, omega)
    Df = frac_derivative(f, 1.0)
    value = _norm_by_quadrature(Df, p, omega, rule)
    flag, refined = None, None
    if check_convergence:
        refined = _norm_by_quadrature(Df, p, omega, rule.refined())
        flag = bool(abs(refined - value) <= CONVERGENCE_TOL * max(abs(refined), 1e-300))
    return NormResult(value, p, wdesc, rule.describe(), f.max_degree, "quadrature", flag, refined)


# ---------------------------------------------------------------------------
# sup-type norms on grids

@dataclass(frozen=True)
class GridSpec:
    """Radii 1 - 2^-j (j <= levels), each dyadic shell split into ``per_level``
    radii, times an equispaced angular grid on the sphere.

    Refinement doubles every count and keeps all previous grid points.
    """
    levels: int = 14
    per_level: int = 16
    phases: int = 64
    polar: int = 17

    def radii(self) -> np.ndarray:
        rs = [np.linspace(1 - 2.0 ** -j, 1 - 2.0 ** -(j + 1), self.per_level, endpoint=False)
              for j in range(self.levels)]
        return np.concatenate(rs + [np.array([1 - 2.0 ** -self.levels])])

    def sphere_nodes(self, n: int) -> np.ndarray:
        ph = np.exp(2j * np.pi * np.arange(self.phases) / self.phases)
        phase_mesh = np.stack(np.meshgrid(*([ph] * n), indexing="ij"), -1).reshape(-1, n)
        if n == 1:
            return phase_mesh
        ang = np.linspace(0.0, np.pi / 2, self.polar)
        mags = np.ones((1, n))
        for k in range(1, n):
            new = np.repeat(mags, ang.size, axis=0)
            new[:, k - 1] *= np.tile(np.cos(ang), mags.shape[0])
            new[:, k:] *= np.tile(np.sin(ang), mags.shape[0])[:, None]
            mags = new
        return (mags[:, None, :] * phase_mesh[None, :, :]).reshape(-1, n)

    def refined(self) -> "GridSpec":
        return GridSpec(self.levels, 2 * self.per_level, 2 * self.phases, 2 * self.polar - 1)


def _grid_values(f: HoloSeries, grid: GridSpec):
    nodes = grid.sphere_nodes(f.dim)
    blocks = f.degree_blocks(nodes)
    radii = grid.radii()
    vals = blocks @ (radii[None, :] ** np.arange(blocks.shape[1])[:, None])
    return radii, vals


def sup_norm(f: HoloSeries, grid: GridSpec | None = None) -> float:
    """max |f| over the grid (a lower bound for the sup over the ball)."""
    grid = grid or GridSpec()
    if f.degree < 0:
        return 0.0
    _, vals = _grid_values(f, grid)
    return float(np.max(np.abs(vals)))


def bloch_norm(f: HoloSeries, omega: WeightS, grid: GridSpec | None = None) -> float:
    """max over the grid of (1-|z|^2) |Df(z)| omega(1-|z|)."""
    grid = grid or GridSpec()
    if f.degree < 0:
        return 0.0
    radii, vals = _grid_values(frac_derivative(f, 1.0), grid)
    gaps = 1.0 - radii
    factor = (1.0 - radii ** 2) * omega(np.maximum(gaps, np.finfo(float).tiny))
    return float(np.max(np.abs(vals) * factor[None, :]))


BLOCH_DEFINITION = "sup_z (1-|z|^2) |Df(z)| omega(1-|z|)"

__all__ = [
    "BLOCH_DEFINITION", "DivergenceError", "GridSpec", "NormResult", "besov_norm",
    "besov_norm_exact", "bloch_norm", "boundary_exponent", "check_integrable",
    "default_norm_rule", "power_exponent", "sup_norm",
]
