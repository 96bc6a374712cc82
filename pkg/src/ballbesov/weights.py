"""Regular-variation weights omega(x) = exp(int_x^1 eps(u)/u du) on (0, 1).

A weight is described by its eps-function together with the tight bounds
-alpha_w <= eps <= beta_w.  Power and piecewise-constant eps have closed
forms; anything else is evaluated by adaptive quadrature.
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Callable, Mapping, Sequence

import numpy as np
from scipy import integrate


@dataclass(frozen=True)
class WeightS:
    eps: Callable[[float], float]
    alpha_w: float
    beta_w: float
    closed_form: Callable | None = None
    # exponent e with omega(t) ~ const * t^e as t -> 0
    near_zero_exponent: float | None = None
    descriptor: Mapping = field(default_factory=dict)

    def __post_init__(self):
        if self.alpha_w < 0 or self.beta_w < 0:
            raise ValueError("alpha_w and beta_w are non-negative bounds")
        object.__setattr__(self, "_memo", lru_cache(maxsize=4096)(self._quad_eval))

    @property
    def growth_exponent(self) -> float:
        """Exponent used in integrability checks; falls back to -beta_w."""
        if self.near_zero_exponent is not None:
            return self.near_zero_exponent
        return -self.beta_w

    def _breaks(self) -> list:
        d, out = self.descriptor, []
        while d:
            out += d.get("breaks", [])
            d = d.get("base")
        return sorted(set(out))

    def _quad_eval(self, x: float) -> float:
        pts = [b for b in self._breaks() if x < b < 1.0] or None
        val, _ = integrate.quad(lambda u: self.eps(u) / u, x, 1.0, epsrel=1e-12, epsabs=0.0,
                                limit=200, points=pts)
        return math.exp(val)

    def numeric(self, x) -> np.ndarray:
        """Evaluate through quadrature of eps(u)/u, ignoring any closed form."""
        x = np.asarray(x, dtype=float)
        return np.vectorize(self._memo, otypes=[float])(x)

    def __call__(self, x) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        if self.closed_form is not None:
            return self.closed_form(x)
        return self.numeric(x)

    def shifted(self, e: float) -> "WeightS":
        """The weight t^e * omega(t), i.e. eps replaced by eps - e."""
        base = self
        closed = None if base.closed_form is None else (lambda x: np.asarray(x) ** e * base.closed_form(x))
        lo, hi = -self.alpha_w - e, self.beta_w - e
        return WeightS(
            eps=lambda u: base.eps(u) - e,
            alpha_w=max(0.0, -lo),
            beta_w=max(0.0, hi),
            closed_form=closed,
            near_zero_exponent=None if base.near_zero_exponent is None else base.near_zero_exponent + e,
            descriptor={"type": "shifted", "exponent": e, "base": dict(base.descriptor)},
        )

    def to_dict(self) -> dict:
        return dict(self.descriptor)


def eval_weight(omega: WeightS, x: float) -> float:
    """omega(x) for 0 < x < 1 (omega(1) = 1 is also accepted)."""
    x = float(x)
    if not 0.0 < x <= 1.0:
        raise ValueError(f"weight argument {x} outside (0, 1)")
    return float(omega(x))


def power_weight(a: float) -> WeightS:
    """eps = a, omega(x) = x^{-a}."""
    a = float(a)
    return WeightS(
        eps=lambda u: a,
        alpha_w=max(0.0, -a),
        beta_w=max(0.0, a),
        closed_form=lambda x: np.asarray(x, dtype=float) ** (-a),
        near_zero_exponent=-a,
        descriptor={"type": "power", "a": a},
    )


def piecewise_weight(breaks: Sequence[float], values: Sequence[float]) -> WeightS:
    """Piecewise-constant eps: values[i] on [breaks[i-1], breaks[i]).

    ``breaks`` are the interior break points in (0, 1); there is one more
    value than break.
    """
    breaks = [float(b) for b in breaks]
    values = [float(v) for v in values]
    if not values:
        raise ValueError("piecewise weight needs at least one value")
    if len(values) != len(breaks) + 1:
        raise ValueError("need len(values) == len(breaks) + 1")
    if any(not 0.0 < b < 1.0 for b in breaks):
        raise ValueError("break points must lie in (0, 1)")
    if any(b1 >= b2 for b1, b2 in zip(breaks, breaks[1:])):
        raise ValueError("break points must be strictly increasing")
    edges = np.array([0.0] + breaks + [1.0])
    vals = np.array(values)

    def eps(u):
        i = np.searchsorted(edges, u, side="right") - 1
        return float(vals[min(max(i, 0), vals.size - 1)])

    def closed(x):
        x = np.asarray(x, dtype=float)
        # exponent = sum_i values[i] * log(hi_i / max(x, lo_i)) over pieces above x
        lo = np.maximum(x[..., None], edges[:-1])
        hi = np.maximum(x[..., None], edges[1:])
        return np.exp(-np.sum(vals * (np.log(lo) - np.log(hi)), axis=-1))

    return WeightS(
        eps=eps,
        alpha_w=max(0.0, -float(vals.min())),
        beta_w=max(0.0, float(vals.max())),
        closed_form=closed,
        near_zero_exponent=-values[0],
        descriptor={"type": "piecewise", "breaks": breaks, "values": values},
    )


def weight_from_function(eps: Callable[[float], float], alpha_w: float, beta_w: float,
                         near_zero_exponent: float | None = None, label: str = "custom") -> WeightS:
    """Weight evaluated by quadrature of a user-supplied eps."""
    return WeightS(eps=eps, alpha_w=alpha_w, beta_w=beta_w,
                   near_zero_exponent=near_zero_exponent, descriptor={"type": label})


def star_exponent(alpha: float, m: float, p: float) -> float:
    """(alpha + m + 1)(1 - p), the extra power in the target weight for 0 < p < 1."""
    return (alpha + m + 1.0) * (1.0 - p)


def weight_star(omega: WeightS, alpha: float, m: float, p: float) -> WeightS:
    """omega*(t) = t^{(alpha+m+1)(1-p)} omega(t)."""
    w = omega.shifted(star_exponent(alpha, m, p))
    w.descriptor.update({"type": "star", "alpha": alpha, "m": m, "p": p})
    return w


def lemma2_threshold(n: int, p: float, beta_w: float) -> float:
    """Lower bound -n/p - beta_w/p that the integer m must exceed."""
    return -n / p - beta_w / p


def check_hypotheses(omega: WeightS, alpha: float, beta: float, n: int | None = None,
                     p: float | None = None, m: float | None = None) -> dict:
    """Evaluate the parameter conditions used by the kernel estimates.

    Returns ``alpha_condition`` (alpha + 1 - beta_w > 0),
    ``beta_condition`` (beta - alpha > alpha_w) and, if n, p and m are
    supplied, ``m_condition`` (m > -n/p - beta_w/p).
    """
    report = {
        "alpha_condition": alpha + 1.0 - omega.beta_w > 0,
        "beta_condition": beta - alpha > omega.alpha_w,
    }
    if n is not None and p is not None and m is not None:
        report["m_threshold"] = lemma2_threshold(n, p, omega.beta_w)
        report["m_condition"] = m > report["m_threshold"]
    report["all"] = all(v for k, v in report.items() if k.endswith("condition"))
    return report


def weight_from_dict(data: Mapping) -> WeightS:
    kind = data.get("type")
    if kind == "power":
        return power_weight(data["a"])
    if kind == "piecewise":
        return piecewise_weight(data["breaks"], data["values"])
    if kind == "star":
        return weight_star(weight_from_dict(data["base"]), data["alpha"], data["m"], data["p"])
    raise ValueError(f"unknown weight type {kind!r}")


def load_weight(path) -> WeightS:
    with open(path) as fh:
        return weight_from_dict(json.load(fh))
