"""Truncated holomorphic series on the unit ball of C^n.

A series is stored as a sparse map from multi-indices to complex
coefficients, together with an explicit truncation degree.  Iteration is
always in ascending total degree and lexicographic order inside a degree,
so every floating point reduction over the terms is reproducible.
"""
from __future__ import annotations

import json
import math
from fractions import Fraction
from functools import lru_cache
from types import MappingProxyType
from typing import Iterable, Mapping, Sequence

import numpy as np

MultiIndex = tuple  # tuple[int, ...] of non-negative integers


def order(m: Sequence[int]) -> int:
    """Total degree |m| of a multi-index."""
    return sum(m)


def _check_index(m, dim: int) -> tuple:
    m = tuple(int(c) for c in m)
    if len(m) != dim:
        raise ValueError(f"multi-index {m} has length {len(m)}, expected {dim}")
    if any(c < 0 for c in m):
        raise ValueError(f"multi-index {m} has a negative component")
    return m


@lru_cache(maxsize=None)
def multi_indices(dim: int, k: int) -> tuple:
    """All multi-indices of length ``dim`` and order ``k``, lexicographically."""
    if dim == 1:
        return ((k,),)
    out = []
    for first in range(k, -1, -1):
        for rest in multi_indices(dim - 1, k - first):
            out.append((first,) + rest)
    return tuple(sorted(out))


def multinomial(m: Sequence[int]) -> int:
    """|m|! / m! as an exact integer."""
    total, result = 0, 1
    for c in m:
        total += c
        result *= math.comb(total, c)
    return result


def index_factorial(m: Sequence[int]) -> int:
    """m! = m_1! ... m_n!"""
    return math.prod(math.factorial(c) for c in m)


def as_ball_point(z, *, strict: bool = True) -> np.ndarray:
    """Validate a point of B^n and return it as a complex vector.

    With ``strict=False`` points of the closed ball (e.g. sphere points)
    are accepted.
    """
    z = np.atleast_1d(np.asarray(z, dtype=complex))
    if z.ndim != 1:
        raise ValueError("a ball point is a one-dimensional coordinate vector")
    r2 = float(np.sum(np.abs(z) ** 2))
    if strict and not r2 < 1.0:
        raise ValueError(f"|z| = {math.sqrt(r2):.6g} is not inside the unit ball")
    if not strict and r2 > 1.0 + 1e-12:
        raise ValueError(f"|z| = {math.sqrt(r2):.6g} exceeds 1")
    return z


def inner_product(z, zeta) -> complex:
    """<z, zeta> = sum z_i conj(zeta_i)."""
    z = np.atleast_1d(np.asarray(z, dtype=complex))
    zeta = np.atleast_1d(np.asarray(zeta, dtype=complex))
    if z.shape[-1] != zeta.shape[-1]:
        raise ValueError(f"dimension mismatch: {z.shape[-1]} vs {zeta.shape[-1]}")
    out = np.sum(z * np.conj(zeta), axis=-1)
    return complex(out) if np.ndim(out) == 0 else out


class HoloSeries:
    """Truncated homogeneous expansion ``f = sum_{|m| <= K} a_m z^m``.

    Instances are immutable.  ``max_degree`` is the truncation order K;
    indices beyond it are zero by definition.  Exact zero coefficients are
    not stored.
    """

    __slots__ = ("_dim", "_K", "_coeffs", "_terms")

    def __init__(self, dim: int, max_degree: int, coeffs: Mapping | None = None):
        if int(dim) < 1:
            raise ValueError("dimension must be positive")
        if int(max_degree) < 0:
            raise ValueError("max_degree must be non-negative")
        self._dim = int(dim)
        self._K = int(max_degree)
        clean = {}
        for m, a in (coeffs or {}).items():
            m = _check_index(m, self._dim)
            if order(m) > self._K:
                raise ValueError(f"index {m} exceeds max_degree {self._K}")
            a = complex(a)
            if a != 0:
                clean[m] = a
        keys = sorted(clean, key=lambda m: (order(m), m))
        self._coeffs = MappingProxyType({m: clean[m] for m in keys})
        self._terms = None

    # -- construction -------------------------------------------------
    @classmethod
    def zero(cls, dim: int, max_degree: int = 0) -> "HoloSeries":
        return cls(dim, max_degree)

    @classmethod
    def constant(cls, dim: int, c: complex = 1.0, max_degree: int = 0) -> "HoloSeries":
        return cls(dim, max_degree, {(0,) * dim: c})

    @classmethod
    def monomial(cls, m: Sequence[int], c: complex = 1.0, max_degree: int | None = None):
        m = tuple(m)
        return cls(len(m), order(m) if max_degree is None else max_degree, {m: c})

    @classmethod
    def variable(cls, dim: int, j: int, max_degree: int = 1) -> "HoloSeries":
        """The coordinate function z_{j+1} (``j`` is zero based)."""
        m = [0] * dim
        m[j] = 1
        return cls(dim, max_degree, {tuple(m): 1.0})

    # -- accessors ----------------------------------------------------
    @property
    def dim(self) -> int:
        return self._dim

    @property
    def max_degree(self) -> int:
        return self._K

    @property
    def coeffs(self) -> Mapping:
        return self._coeffs

    @property
    def degree(self) -> int:
        """Largest order among stored indices (-1 for the zero series)."""
        return max((order(m) for m in self._coeffs), default=-1)

    def partial_degrees(self) -> tuple:
        """Largest exponent of each variable among stored indices."""
        if not self._coeffs:
            return (0,) * self._dim
        return tuple(int(c) for c in np.max(np.array(list(self._coeffs)), axis=0))

    def __getitem__(self, m) -> complex:
        return self._coeffs.get(tuple(m), 0j)

    def __len__(self) -> int:
        return len(self._coeffs)

    def __iter__(self):
        return iter(self._coeffs.items())

    def __repr__(self) -> str:
        body = " + ".join(f"({a:.6g})*z^{m}" for m, a in list(self._coeffs.items())[:6])
        more = " + ..." if len(self._coeffs) > 6 else ""
        return f"HoloSeries(n={self._dim}, K={self._K}: {body or '0'}{more})"

    # -- arithmetic ---------------------------------------------------
    def _check_dim(self, other: "HoloSeries"):
        if self._dim != other._dim:
            raise ValueError(f"dimension mismatch: {self._dim} vs {other._dim}")

    def __add__(self, other: "HoloSeries") -> "HoloSeries":
        if not isinstance(other, HoloSeries):
            return NotImplemented
        self._check_dim(other)
        out = dict(self._coeffs)
        for m, a in other._coeffs.items():
            out[m] = out.get(m, 0j) + a
        return HoloSeries(self._dim, max(self._K, other._K), out)

    def __neg__(self) -> "HoloSeries":
        return self.scale(-1.0)

    def __sub__(self, other: "HoloSeries") -> "HoloSeries":
        if not isinstance(other, HoloSeries):
            return NotImplemented
        return self + (-other)

    def __mul__(self, c) -> "HoloSeries":
        if isinstance(c, HoloSeries):
            return multiply(self, c, self._K + c._K)
        return self.scale(c)

    __rmul__ = __mul__

    def scale(self, c: complex) -> "HoloSeries":
        return HoloSeries(self._dim, self._K, {m: c * a for m, a in self._coeffs.items()})

    def map_degrees(self, factors) -> "HoloSeries":
        """Scale the degree-k block by ``factors[k]``."""
        return HoloSeries(
            self._dim, self._K, {m: factors[order(m)] * a for m, a in self._coeffs.items()}
        )

    def truncate(self, K: int) -> "HoloSeries":
        return HoloSeries(self._dim, K, {m: a for m, a in self._coeffs.items() if order(m) <= K})

    def conj_coeffs(self) -> "HoloSeries":
        """Series whose coefficients are conjugated: z -> conj(f(conj z))."""
        return HoloSeries(self._dim, self._K, {m: a.conjugate() for m, a in self._coeffs.items()})

    def rotate(self, theta: float) -> "HoloSeries":
        """The series of z -> f(e^{i theta} z)."""
        return self.map_degrees([np.exp(1j * theta * k) for k in range(self._K + 1)])

    def coefficient_vector(self, indices: Iterable) -> np.ndarray:
        return np.array([self[m] for m in indices], dtype=complex)

    def distance(self, other: "HoloSeries", kind: str = "l2") -> float:
        """Coefficient-space distance (``l2`` or ``max``)."""
        self._check_dim(other)
        keys = set(self._coeffs) | set(other._coeffs)
        diff = np.array([self[m] - other[m] for m in keys], dtype=complex)
        if diff.size == 0:
            return 0.0
        if kind == "max":
            return float(np.max(np.abs(diff)))
        return float(np.sqrt(np.sum(np.abs(diff) ** 2)))

    def allclose(self, other: "HoloSeries", atol: float = 1e-12) -> bool:
        return self._dim == other._dim and self.distance(other, "max") <= atol

    # -- evaluation ---------------------------------------------------
    def _term_arrays(self):
        if self._terms is None:
            idx = list(self._coeffs)
            exps = np.array(idx, dtype=int).reshape(len(idx), self._dim)
            vals = np.array([self._coeffs[m] for m in idx], dtype=complex)
            orders = exps.sum(axis=1)
            blocks = [np.flatnonzero(orders == k) for k in range(self._K + 1)]
            object.__setattr__(self, "_terms", (exps, vals, blocks))
        return self._terms

    def monomials(self, Z: np.ndarray) -> np.ndarray:
        """Matrix of z^m for each point (rows) and stored index (columns)."""
        exps, _, _ = self._term_arrays()
        Z = np.asarray(Z, dtype=complex).reshape(-1, self._dim)
        out = np.ones((Z.shape[0], exps.shape[0]), dtype=complex)
        for j in range(self._dim):
            top = int(exps[:, j].max(initial=0))
            if top == 0:
                continue
            powers = Z[:, j:j + 1] ** np.arange(top + 1)
            out *= powers[:, exps[:, j]]
        return out

    def degree_blocks(self, Z: np.ndarray) -> np.ndarray:
        """Values of each homogeneous part f_k at the points, shape (N, K+1)."""
        _, vals, blocks = self._term_arrays()
        mono = self.monomials(Z) * vals
        out = np.zeros((mono.shape[0], self._K + 1), dtype=complex)
        for k, cols in enumerate(blocks):
            if cols.size:
                out[:, k] = mono[:, cols].sum(axis=1)
        return out

    def __call__(self, Z) -> np.ndarray | complex:
        return evaluate(self, Z)

    # -- serialisation ------------------------------------------------
    def to_dict(self) -> dict:
        return {
            "dim": self._dim,
            "max_degree": self._K,
            "terms": [
                {"m": list(m), "re": a.real, "im": a.imag} for m, a in self._coeffs.items()
            ],
        }

    @classmethod
    def from_dict(cls, data: Mapping) -> "HoloSeries":
        try:
            dim, K, terms = int(data["dim"]), int(data["max_degree"]), data["terms"]
        except (KeyError, TypeError) as exc:
            raise ValueError(f"malformed series document: {exc}") from None
        coeffs = {}
        for t in terms:
            m = _check_index(t["m"], dim)
            if m in coeffs:
                raise ValueError(f"duplicate index {list(m)} in series document")
            coeffs[m] = complex(float(t.get("re", 0.0)), float(t.get("im", 0.0)))
        return cls(dim, K, coeffs)

    def dumps(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True)

    @classmethod
    def loads(cls, text: str) -> "HoloSeries":
        return cls.from_dict(json.loads(text))


def evaluate(f: HoloSeries, Z):
    """Evaluate ``f`` at one point (shape (n,)) or many points (shape (N, n)).

    Degree blocks are summed in ascending order.
    """
    Z = np.asarray(Z, dtype=complex)
    single = Z.ndim <= 1
    if single:
        Z = np.atleast_1d(Z)[None, :]
    if Z.shape[-1] != f.dim:
        raise ValueError(f"dimension mismatch: series has n={f.dim}, point has {Z.shape[-1]}")
    blocks = f.degree_blocks(Z)
    total = np.zeros(Z.shape[0], dtype=complex)
    for k in range(blocks.shape[1]):
        total += blocks[:, k]
    return complex(total[0]) if single else total


def homogeneous_part(f: HoloSeries, k: int) -> HoloSeries:
    """The degree-k block f_k of f."""
    if not 0 <= k <= f.max_degree:
        raise ValueError(f"degree {k} outside [0, {f.max_degree}]")
    return HoloSeries(f.dim, f.max_degree, {m: a for m, a in f.coeffs.items() if order(m) == k})


def multiply(f: HoloSeries, g: HoloSeries, K: int) -> HoloSeries:
    """Coefficient convolution of f and g truncated to degree K."""
    if f.dim != g.dim:
        raise ValueError(f"dimension mismatch: {f.dim} vs {g.dim}")
    out: dict = {}
    for m, a in f.coeffs.items():
        km = order(m)
        if km > K:
            break
        for l, b in g.coeffs.items():
            if km + order(l) > K:
                break
            key = tuple(x + y for x, y in zip(m, l))
            out[key] = out.get(key, 0j) + a * b
    return HoloSeries(f.dim, K, out)


def kernel_coefficients(s: float, K: int) -> np.ndarray:
    """Taylor coefficients of (1 - w)^{-s}: Gamma(s+k) / (Gamma(s) k!)."""
    c = np.empty(K + 1)
    c[0] = 1.0
    for k in range(1, K + 1):
        c[k] = c[k - 1] * (s + k - 1) / k
    return c


def kernel_series(tau, s: float, K: int) -> HoloSeries:
    """Degree-K truncation of xi -> (1 - <xi, tau>)^{-s}."""
    if not s > 0:
        raise ValueError("kernel exponent s must be positive")
    tau = as_ball_point(tau)
    n = tau.size
    c = kernel_coefficients(s, K)
    tbar = np.conj(tau)
    active = [j for j in range(n) if tbar[j] != 0]
    coeffs = {}
    for k in range(K + 1):
        for sub in multi_indices(len(active), k) if active else ([()] if k == 0 else []):
            m = [0] * n
            for j, e in zip(active, sub):
                m[j] = e
            mono = np.prod([tbar[j] ** e for j, e in zip(active, sub)]) if active else 1.0
            coeffs[tuple(m)] = c[k] * multinomial(sub) * mono
    return HoloSeries(n, K, coeffs)


def sphere_moment(m: Sequence[int]) -> float:
    """(n-1)! m! / (n-1+|m|)!, computed in exact rational arithmetic."""
    n = len(m)
    q = Fraction(math.factorial(n - 1) * index_factorial(m), math.factorial(n - 1 + order(m)))
    return float(q)


def random_polynomial(dim: int, degree: int, rng: np.random.Generator, density: float = 1.0,
                      max_degree: int | None = None) -> HoloSeries:
    """Random polynomial with complex normal coefficients (test-data helper)."""
    coeffs = {}
    for k in range(degree + 1):
        for m in multi_indices(dim, k):
            if rng.random() <= density:
                coeffs[m] = complex(rng.normal(), rng.normal())
    return HoloSeries(dim, degree if max_degree is None else max_degree, coeffs)


def all_indices(dim: int, K: int) -> list[tuple]:
    """Every multi-index with order <= K, in canonical order."""
    return [m for k in range(K + 1) for m in multi_indices(dim, k)]


def load_series(path) -> HoloSeries:
    with open(path) as fh:
        return HoloSeries.from_dict(json.load(fh))


def save_series(f: HoloSeries, path) -> None:
    with open(path, "w") as fh:
        json.dump(f.to_dict(), fh, sort_keys=True, indent=1)
        fh.write("\n")


__all__ = [
    "HoloSeries", "MultiIndex", "as_ball_point", "all_indices", "evaluate", "homogeneous_part",
    "index_factorial", "inner_product", "kernel_coefficients", "kernel_series", "load_series",
    "multi_indices", "multinomial", "multiply", "order", "random_polynomial", "save_series",
    "sphere_moment",
]
