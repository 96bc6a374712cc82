"""Integration over the unit ball B^n and the sphere S^n of C^n.

Ball integrals use the slice decomposition

    int_{B^n} F dnu = 2n int_0^1 r^{2n-1} int_{S^n} F(r zeta) dsigma(zeta) dr

with both measures normalised to total mass one.  The radial factor is
handled by composite Gauss-Legendre panels graded geometrically toward
r = 1 (ratio 1/2), the last panel carrying a Gauss-Jacobi rule for the
endpoint singularity.  Sphere integrals use either a deterministic product
rule (phases x hyperspherical magnitude angles) or Monte Carlo points.

Monomial integrals have closed forms; those are the oracles for everything
polynomial.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from functools import lru_cache
from typing import Callable, Mapping, Sequence

import numpy as np
from scipy import special

from .series import HoloSeries, order, sphere_moment

DEFAULT_LEVELS = 20
DEFAULT_POINTS = 10


def _rng(seed: int) -> np.random.Generator:
    # counter-based stream so seeds map to reproducible, independent streams
    return np.random.Generator(np.random.Philox(int(seed)))


@lru_cache(maxsize=64)
def _leggauss(q: int):
    return np.polynomial.legendre.leggauss(q)


@lru_cache(maxsize=64)
def _jacobi(q: int, a: float, b: float):
    return special.roots_jacobi(q, a, b)


# ---------------------------------------------------------------------------
# sphere rules

@dataclass(frozen=True, eq=False)
class SphereRule:
    nodes: np.ndarray  # (S, n) unit vectors
    weights: np.ndarray  # (S,), sum to one
    kind: str
    params: Mapping = field(default_factory=dict)

    @property
    def dim(self) -> int:
        return self.nodes.shape[1]

    def __len__(self) -> int:
        return self.weights.size

    def describe(self) -> dict:
        return {"kind": self.kind, "size": int(self.weights.size), **dict(self.params)}

    def refined(self) -> "SphereRule":
        if self.kind == "mc":
            return mc_sphere_rule(self.dim, 2 * self.params["N"], self.params["seed"])
        if self.kind == "product":
            phases = [1 if m == 1 else 2 * m for m in self.params["phases"]]
            return product_sphere_rule(self.dim, phases, 2 * self.params["polar"])
        raise ValueError(f"cannot refine sphere rule of kind {self.kind!r}")


def _magnitudes(n: int, q: int):
    """Nodes/weights for (|zeta_1|, ..., |zeta_n|) under uniform dsigma.

    With hyperspherical angles phi_k and u_k = cos^2(phi_k), the induced
    measure factorises into j (1 - u)^(j-1) du on [0, 1], j = n - k.
    Gauss-Jacobi in each u_k is exact for monomials |zeta^m|^2 with
    |m| <= 2q - 1.
    """
    mags = np.ones((1, n))
    wts = np.ones(1)
    for k in range(1, n):
        j = n - k
        x, w = _jacobi(q, float(j - 1), 0.0)
        u = (1.0 + x) / 2.0
        w = w * j * 0.5 ** j
        c, s = np.sqrt(u), np.sqrt(1.0 - u)
        # coordinate k-1 gets cos, the remaining ones pick up sin
        new = np.repeat(mags, q, axis=0)
        new[:, k - 1] *= np.tile(c, mags.shape[0])
        new[:, k:] *= np.tile(s, mags.shape[0])[:, None]
        mags = new
        wts = np.repeat(wts, q) * np.tile(w, wts.size)
    return mags, wts


def product_sphere_rule(n: int, phases: int | Sequence[int], polar: int = 16) -> SphereRule:
    """Deterministic product rule on S^n.

    ``phases[j]`` equispaced angles for coordinate j (exact for the phase
    part of zeta^m conj(zeta)^l whenever |m_j - l_j| < phases[j]) and
    ``polar`` Gauss-Legendre points per hyperspherical magnitude angle.
    """
    if np.isscalar(phases):
        phases = [int(phases)] * n
    phases = [int(m) for m in phases]
    if len(phases) != n or min(phases) < 1:
        raise ValueError("need one positive phase count per coordinate")
    if n == 1:
        mags, mw = np.ones((1, 1)), np.ones(1)
    else:
        mags, mw = _magnitudes(n, polar)
    grids = [np.exp(2j * np.pi * np.arange(m) / m) for m in phases]
    phase_mesh = np.stack(np.meshgrid(*grids, indexing="ij"), axis=-1).reshape(-1, n)
    pw = 1.0 / np.prod(phases)
    nodes = (mags[:, None, :] * phase_mesh[None, :, :]).reshape(-1, n)
    weights = np.repeat(mw, phase_mesh.shape[0]) * pw
    return SphereRule(nodes, weights, "product",
                      {"phases": phases, "polar": int(polar) if n > 1 else 1})


def mc_sphere_rule(n: int, N: int, seed: int = 0) -> SphereRule:
    """N uniform points on S^{2n-1} (normalised complex Gaussians), equal weights."""
    if N < 2:
        raise ValueError("Monte Carlo sphere rule needs N >= 2")
    pts = sample_sphere(n, N, seed)
    return SphereRule(pts, np.full(N, 1.0 / N), "mc", {"N": int(N), "seed": int(seed)})


def sample_sphere(n: int, N: int, seed: int = 0) -> np.ndarray:
    g = _rng(seed).standard_normal((N, 2 * n))
    z = g[:, :n] + 1j * g[:, n:]
    return z / np.linalg.norm(z, axis=1, keepdims=True)


def auto_sphere_rule(n: int, partial_degrees: Sequence[int], oversample: int = 2,
                     extra_polar: int = 12) -> SphereRule:
    """Product rule sized for |g|^p with g of the given partial degrees."""
    phases = [1 if d == 0 else oversample * (2 * d + 1) for d in partial_degrees]
    polar = oversample * (sum(partial_degrees) + 1) + extra_polar
    return product_sphere_rule(n, phases, polar)


def _alias_order(x: float, tol: float, s: float | None) -> int:
    """Smallest k with k^(s-1) x^k <= tol (x^k <= tol when s is not given)."""
    k = math.ceil(math.log(tol) / math.log(x))
    if s is not None and s > 1:
        while (s - 1) * math.log(k) + k * math.log(x) > math.log(tol):
            k += 1
    return k


def kernel_sphere_rule(n: int, zmax: Sequence[float], partial_degrees: Sequence[int],
                       tol: float = 1e-12, s: float | None = None) -> SphereRule:
    """Product rule that resolves (1 - <z, zeta>)^-s for |z_j| <= zmax[j].

    Phase counts are chosen so that the aliased kernel terms, which decay
    like k^(s-1) |z_j|^k, fall below ``tol``.
    """
    zmax = [float(x) for x in zmax]
    ztot = min(math.sqrt(sum(x * x for x in zmax)), 0.999)
    phases = []
    for x, d in zip(zmax, partial_degrees):
        k = 0 if x == 0 else _alias_order(x, tol, s) + 8
        m = d + k + 1
        phases.append(1 if m == 1 else 2 * ((m + 1) // 2))
    delta = 1.0 - ztot
    polar = (sum(partial_degrees) + 1) // 2 + math.ceil(math.log(1 / tol) / (2 * math.sqrt(2 * delta))) + 6
    return product_sphere_rule(n, phases, polar)


def sphere_rule_from_dict(n: int, data: Mapping) -> SphereRule:
    kind = data.get("kind", "product")
    if kind == "mc":
        return mc_sphere_rule(n, int(data["N"]), int(data.get("seed", 0)))
    if kind == "product":
        return product_sphere_rule(n, data.get("phases", 16), int(data.get("polar", 16)))
    raise ValueError(f"unknown sphere rule kind {kind!r}")


def monte_carlo_sphere(F: Callable[[np.ndarray], np.ndarray], N: int, seed: int = 0,
                       n: int | None = None, batch: int = 200_000):
    """Monte Carlo estimate of int_{S^n} F dsigma and its standard error.

    ``F`` maps an (N, n) array of sphere points to N values.  The dimension
    is taken from ``n`` (default 1).
    """
    if N < 2:
        raise ValueError("N must be at least 2")
    n = 1 if n is None else n
    pts = sample_sphere(n, N, seed)
    vals = np.concatenate([np.asarray(F(pts[i:i + batch]), dtype=complex).reshape(-1)
                           for i in range(0, N, batch)])
    est = vals.mean()
    var = np.var(vals.real, ddof=1) + np.var(vals.imag, ddof=1)
    est = est.real if np.all(vals.imag == 0) else est
    return est, math.sqrt(var / N)


# ---------------------------------------------------------------------------
# exact monomial integrals

def sphere_monomial_integral(m: Sequence[int], l: Sequence[int]) -> float:
    """int_{S^n} zeta^m conj(zeta)^l dsigma."""
    m, l = tuple(m), tuple(l)
    if len(m) != len(l):
        raise ValueError("dimension mismatch")
    if m != l:
        return 0.0
    return sphere_moment(m)


def radial_beta(n: int, k: int, alpha: float) -> float:
    """2n int_0^1 r^{2n-1+2k} (1-r^2)^alpha dr = n B(n+k, alpha+1)."""
    return n * special.beta(n + k, alpha + 1.0)


def ball_monomial_integral(m: Sequence[int], l: Sequence[int], alpha: float = 0.0) -> float:
    """int_{B^n} (1-|xi|^2)^alpha xi^m conj(xi)^l dnu."""
    if not alpha > -1:
        raise ValueError("alpha must exceed -1")
    m, l = tuple(m), tuple(l)
    if len(m) != len(l):
        raise ValueError("dimension mismatch")
    if m != l:
        return 0.0
    return radial_beta(len(m), order(m), alpha) * sphere_moment(m)


def radial_moment(c: float, b: float, d: float, q: int | None = None) -> float:
    """int_0^1 r^c (1 - r^2)^b (1 - r)^d dr, by Gauss-Jacobi in (1 - r).

    Written as (1 - r)^(b + d) times the smooth factor r^c (1 + r)^b.
    """
    e = b + d
    if not e > -1:
        raise ValueError("radial moment diverges at r = 1")
    if d == 0 and float(c).is_integer() and c % 2 == 1:
        # 1/2 B((c+1)/2, b+1)
        return 0.5 * special.beta((c + 1) / 2.0, b + 1.0)
    q = q or int(c / 2 + abs(b) + 40)
    t, w = _jacobi(q, e, 0.0)
    r = (1.0 + t) / 2.0
    # (1 - r) = (1 - t)/2 ; dr = dt/2
    return float(np.sum(w * r ** c * (1.0 + r) ** b) * 0.5 ** (e + 1))


def sphere_kernel_mean(x, s: float, n: int) -> np.ndarray:
    """int_{S^n} |1 - x conj(zeta_1)|^{-s} dsigma for 0 <= x < 1.

    Summing |coefficient|^2 times the monomial moments gives the Gauss
    hypergeometric function 2F1(s/2, s/2; n; x^2).
    """
    x = np.asarray(x, dtype=float)
    return special.hyp2f1(s / 2.0, s / 2.0, n, x * x)


# ---------------------------------------------------------------------------
# radial and ball rules

def graded_radial_rule(levels: int = DEFAULT_LEVELS, points: int = DEFAULT_POINTS,
                       endpoint_exponent: float = 0.0, ratio: float = 0.5):
    """Nodes and weights for int_0^1 g(r) dr.

    Panels [0, 1-ratio], ..., [1-ratio^L, 1-ratio^{L+1}] use Gauss-Legendre;
    the final panel [1-ratio^{L}, 1] uses Gauss-Jacobi with weight
    (1-r)^endpoint_exponent, divided back out so the rule applies to plain
    integrands that behave like (1-r)^endpoint_exponent there.
    """
    if not endpoint_exponent > -1:
        raise ValueError("endpoint exponent must exceed -1 for a convergent integral")
    x, w = _leggauss(points)
    # panels are described by their distance to r = 1 so 1 - r stays accurate
    gaps_edges = [1.0] + [ratio ** j for j in range(1, levels + 1)]
    gs, ws = [], []
    for ga, gb in zip(gaps_edges[:-1], gaps_edges[1:]):
        gs.append(gb + (ga - gb) * (1.0 - x) / 2.0)
        ws.append(w * (ga - gb) / 2.0)
    h = gaps_edges[-1]
    t, wj = _jacobi(points, float(endpoint_exponent), 0.0)
    g_last = h * (1.0 - t) / 2.0
    gs.append(g_last)
    ws.append(wj * (h / 2.0) ** (endpoint_exponent + 1.0) / g_last ** endpoint_exponent)
    gaps = np.concatenate(gs)
    return 1.0 - gaps, np.concatenate(ws), gaps


@dataclass(frozen=True, eq=False)
class BallRule:
    dim: int
    radii: np.ndarray
    radial_weights: np.ndarray  # weights for dr, Jacobian 2n r^{2n-1} not included
    sphere: SphereRule
    levels: int
    points: int
    endpoint_exponent: float = 0.0
    gaps: np.ndarray | None = None  # 1 - radii, computed without cancellation

    def __post_init__(self):
        if self.gaps is None:
            object.__setattr__(self, "gaps", 1.0 - self.radii)

    @property
    def jacobian_weights(self) -> np.ndarray:
        """Radial weights including the 2n r^{2n-1} slice factor."""
        return self.radial_weights * 2 * self.dim * self.radii ** (2 * self.dim - 1)

    def describe(self) -> dict:
        return {
            "n": self.dim, "levels": self.levels, "points": self.points,
            "endpoint_exponent": self.endpoint_exponent, "sphere": self.sphere.describe(),
        }

    def with_sphere(self, sphere: SphereRule) -> "BallRule":
        return replace(self, sphere=sphere)

    def refined(self, sphere: bool = True) -> "BallRule":
        """Twice the levels and twice the points per panel (and a refined sphere)."""
        r, w, g = graded_radial_rule(2 * self.levels, 2 * self.points, self.endpoint_exponent)
        sph = self.sphere.refined() if sphere else self.sphere
        return BallRule(self.dim, r, w, sph, 2 * self.levels, 2 * self.points,
                        self.endpoint_exponent, g)


def build_ball_rule(n: int, singularity_exponent: float = 0.0, omega=None,
                    levels: int = DEFAULT_LEVELS, points: int = DEFAULT_POINTS,
                    sphere: SphereRule | Mapping | None = None) -> BallRule:
    """Ball rule for integrands ~ (1-r)^s omega(1-r) near the boundary."""
    s = float(singularity_exponent)
    e = s + (omega.growth_exponent if omega is not None else 0.0)
    if not e > -1:
        raise ValueError(f"effective endpoint exponent {e} <= -1: the profile is not integrable")
    if sphere is None:
        sphere = product_sphere_rule(n, 32, 16) if n <= 2 else product_sphere_rule(n, 16, 12)
    elif isinstance(sphere, Mapping):
        sphere = sphere_rule_from_dict(n, sphere)
    if sphere.dim != n:
        raise ValueError("sphere rule dimension does not match")
    r, w, g = graded_radial_rule(levels, points, e)
    return BallRule(n, r, w, sphere, levels, points, e, g)


def integrate_ball(F: Callable[[np.ndarray], np.ndarray], rule: BallRule) -> complex:
    """Slice-decomposed ball integral of F (which maps (N, n) points to N values)."""
    zeta, sw = rule.sphere.nodes, rule.sphere.weights
    total = 0j
    profile = np.empty(rule.radii.size, dtype=complex)
    for i, r in enumerate(rule.radii):
        vals = np.asarray(F(r * zeta), dtype=complex).reshape(-1)
        if not np.all(np.isfinite(vals)):
            raise FloatingPointError(f"non-finite integrand value at radius {r}")
        profile[i] = np.dot(sw, vals)
    total = np.dot(rule.jacobian_weights, profile)
    return complex(total)


def sphere_degree_blocks(f: HoloSeries, sphere: SphereRule) -> np.ndarray:
    """Values of the homogeneous parts f_k at the sphere nodes, shape (S, K+1)."""
    return f.degree_blocks(sphere.nodes)


def ball_values(f: HoloSeries, rule: BallRule, blocks: np.ndarray | None = None,
                radial: slice = slice(None)) -> np.ndarray:
    """f(r zeta) on the rule's nodes, shape (S, R), via f(r zeta) = sum_k r^k f_k(zeta).

    ``radial`` restricts the output to a slice of the radial nodes.
    """
    if f.dim != rule.dim:
        raise ValueError("dimension mismatch between series and rule")
    B = sphere_degree_blocks(f, rule.sphere) if blocks is None else blocks
    powers = rule.radii[radial][None, :] ** np.arange(B.shape[1])[:, None]
    return B @ powers


def radial_chunks(rule: BallRule, max_nodes: int = 1_000_000):
    """Slices of radial nodes so that each chunk holds at most ``max_nodes`` points."""
    step = max(1, max_nodes // max(1, len(rule.sphere)))
    for i in range(0, rule.radii.size, step):
        yield slice(i, min(i + step, rule.radii.size))


def integrate_profile(values: np.ndarray, rule: BallRule) -> float | complex:
    """Integral of a function given by its (S, R) node values."""
    if not np.all(np.isfinite(values)):
        raise FloatingPointError("non-finite integrand value")
    radial = rule.sphere.weights @ values
    return np.dot(rule.jacobian_weights, radial)
