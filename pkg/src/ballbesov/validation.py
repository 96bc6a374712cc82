"""Numerical checks of the kernel estimates, the product rule, the reproducing
formula and the operator boundedness statements.

Each checker returns a :class:`CheckReport` with per-item (lhs, rhs, ratio)
records, the criterion it was judged by, and enough provenance to rerun it.
Inequalities with unspecified constants are judged as boundedness of the
ratio, never against a particular constant unless one is derived here.
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from typing import Callable, Iterable, Mapping, Sequence

import numpy as np

from .fraccalc import frac_derivative, frac_integral, radial_derivative
from .norms import DivergenceError, besov_norm, boundary_exponent, sup_norm
from .operators import (OperatorSpec, apply, apply_T_exact, bergman_constant,
                        kernel_identity_target, reproducing_check, termwise_reproducing_error)
from .quadrature import (BallRule, auto_sphere_rule, ball_values, build_ball_rule,
                         graded_radial_rule, kernel_sphere_rule, radial_chunks,
                         sphere_degree_blocks, sphere_kernel_mean)
from .series import HoloSeries, evaluate, kernel_series, multiply, random_polynomial
from .weights import WeightS, check_hypotheses, lemma2_threshold, power_weight, weight_star

CHECK_IDS = ("lemma2", "lemma3", "lemma4", "lemma5", "repro", "thm1_identity", "thm1_bound",
             "thm1_necessity", "thm2_bound")


class HypothesisError(ValueError):
    """Parameters outside the region where the estimate is claimed."""


@dataclass
class CheckReport:
    check_id: str
    inputs: dict
    records: list = field(default_factory=list)
    sup_ratio: float | None = None
    passed: bool = False
    criterion: str = ""
    provenance: dict = field(default_factory=dict)
    notes: list = field(default_factory=list)

    def add(self, item, lhs: float, rhs: float, **extra) -> None:
        ratio = lhs / rhs if rhs > 0 else None
        self.records.append({"id": str(item), "lhs": float(lhs), "rhs": float(rhs),
                             "ratio": None if ratio is None else float(ratio), **extra})

    def ratios(self) -> list:
        return [r["ratio"] for r in self.records if r["ratio"] is not None]

    def finish(self, passed: bool) -> "CheckReport":
        rs = self.ratios()
        self.sup_ratio = max(rs) if rs else None
        self.passed = bool(passed)
        return self

    def to_dict(self) -> dict:
        return {
            "check_id": self.check_id, "inputs": self.inputs, "records": self.records,
            "sup_ratio": self.sup_ratio, "pass": self.passed, "criterion": self.criterion,
            "provenance": self.provenance, "notes": self.notes,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True, indent=1) + "\n"

    def to_text(self) -> str:
        lines = [f"check {self.check_id}: {'PASS' if self.passed else 'FAIL'}",
                 f"criterion: {self.criterion}"]
        if self.sup_ratio is not None:
            lines.append(f"sup ratio: {self.sup_ratio:.10g}")
        lines += [f"note: {n}" for n in self.notes]
        if self.records:
            width = max(len(r["id"]) for r in self.records)
            lines.append(f"{'id':<{width}}  {'lhs':>22}  {'rhs':>22}  {'ratio':>22}")
            for r in self.records:
                ratio = "-" if r["ratio"] is None else f"{r['ratio']:.15g}"
                lines.append(f"{r['id']:<{width}}  {r['lhs']:>22.15g}  {r['rhs']:>22.15g}  {ratio:>22}")
        return "\n".join(lines) + "\n"


def _zlabel(z) -> str:
    return "(" + ", ".join(f"{c.real:.6g}{c.imag:+.6g}j" for c in np.atleast_1d(z)) + ")"


# ---------------------------------------------------------------------------
# weighted |kernel| integrals

def abs_kernel_integral(G: HoloSeries | None, z: np.ndarray, s: float, alpha: float,
                        rule: BallRule, omega: WeightS | None = None) -> float:
    """int (1-|xi|^2)^alpha omega(1-|xi|) |G(xi)| |1 - <z, xi>|^{-s} dnu(xi).

    ``G=None`` means G = 1.
    """
    B = None if G is None else sphere_degree_blocks(G, rule.sphere)
    w = np.conj(rule.sphere.nodes) @ np.asarray(z, dtype=complex)
    g = rule.gaps
    radial = (g * (2.0 - g)) ** alpha * rule.jacobian_weights
    if omega is not None:
        radial = radial * omega(g)
    total = 0.0
    for sl in radial_chunks(rule):
        vals = np.abs(1.0 - np.outer(w, rule.radii[sl])) ** (-s)
        if B is not None:
            vals = vals * np.abs(ball_values(G, rule, B, sl))
        total += float(np.dot(rule.sphere.weights @ vals, radial[sl]))
    return total


# ---------------------------------------------------------------------------
# check lemma2: pointwise bound of |f| by a weighted integral of |Df|

def lemma2_constant(n: int, m: float) -> float:
    """A constant for which |f(z)| <= K C(n,m) int (...) |Df| / |1-<z,zeta>|^{n+m} holds.

    Integrating Df along the ray, |int_0^1 (1 - t w)^{-N-1} dt| is at most
    (2^N - 1)/N |1 - w|^{-N} for |w| < 1, N = n + m.
    """
    N = n + m
    return (2.0 ** N - 1.0) / N


def check_lemma2(f: HoloSeries, p: float, omega: WeightS, m: int, z_grid, rule: BallRule | None = None,
                 budget: float | None = None) -> CheckReport:
    n = f.dim
    threshold = lemma2_threshold(n, p, omega.beta_w)
    if int(m) != m or m < 1 or not m > threshold:
        raise HypothesisError(f"m={m} must be a natural number above {threshold:g}")
    budget = lemma2_constant(n, m) if budget is None else budget
    Z = np.asarray(z_grid, dtype=complex).reshape(-1, n)
    C = bergman_constant(n, m)
    Df = frac_derivative(f, 1.0)
    rep = CheckReport("lemma2", {"p": p, "m": m, "weight": omega.to_dict(), "n": n,
                                 "f_terms": len(f), "K": f.max_degree},
                      criterion=f"sup |f(z)| / rhs(z) <= {budget:.6g} = (2^(n+m)-1)/(n+m)")
    degs = [2 * d for d in Df.partial_degrees()]
    for z in Z:
        lhs = abs(evaluate(f, z))
        r = rule or build_ball_rule(n, m, None, sphere=kernel_sphere_rule(n, np.abs(z), degs, 1e-10))
        rhs = C * abs_kernel_integral(Df, z, n + m, m, r) if Df.degree >= 0 else 0.0
        rep.add(_zlabel(z), lhs, rhs, radius=float(np.linalg.norm(z)))
        rep.provenance.setdefault("rules", []).append(r.describe())
    ok = all(r["lhs"] == 0 or (r["ratio"] is not None and r["ratio"] <= budget * (1 + 1e-6))
             for r in rep.records)
    return rep.finish(ok)


# ---------------------------------------------------------------------------
# check lemma3: an L^1 - L^p comparison for 0 < p <= 1

def lemma3_sides(f: HoloSeries, p: float, omega: WeightS, rule: BallRule | None = None):
    n = f.dim
    e = omega.growth_exponent
    if not e / p - n > -1 or not p - n - 1 + e > -1:
        raise DivergenceError(f"lemma3 integrals diverge for n={n}, p={p}, weight exponent {e}")
    Df = frac_derivative(f, 1.0)
    if rule is None:
        sphere = auto_sphere_rule(n, Df.partial_degrees(), oversample=4)
        rule = build_ball_rule(n, min(-n + e / p, p - n - 1 + e), None, sphere=sphere)
    g = rule.gaps
    absD = np.abs(ball_values(Df, rule))
    lhs_int = np.dot(rule.sphere.weights @ absD, rule.jacobian_weights * omega(g) ** (1 / p) * g ** -n)
    rhs = np.dot(rule.sphere.weights @ absD ** p, rule.jacobian_weights * g ** (p - n - 1) * omega(g))
    return float(lhs_int) ** p, float(rhs), rule


def check_lemma3(f: HoloSeries, p: float, omega: WeightS, rule: BallRule | None = None,
                 tol: float = 1e-6) -> CheckReport:
    if not 0 < p <= 1:
        raise HypothesisError("p must lie in (0, 1]")
    rep = CheckReport("lemma3", {"p": p, "weight": omega.to_dict(), "n": f.dim, "K": f.max_degree},
                      criterion=f"lhs <= rhs * (1 + {tol:g})")
    lhs, rhs, used = lemma3_sides(f, p, omega, rule)
    rep.add("f", lhs, rhs)
    rep.provenance["rule"] = used.describe()
    return rep.finish(lhs <= rhs * (1 + tol))


# ---------------------------------------------------------------------------
# check lemma4: the weighted Forelli-Rudin type estimate

def lemma4_lhs(alpha: float, beta: float, omega: WeightS, n: int, r: float,
               levels: int = 30, points: int = 12) -> float:
    """int_{B^n} (1-|zeta|^2)^alpha omega(1-|zeta|) |1 - <z, zeta>|^{-(beta+n+1)} dnu at z = r e_1.

    Slice integration with the sphere average in closed form.
    """
    s = beta + n + 1.0
    rho, w, g = graded_radial_rule(levels, points, alpha + omega.growth_exponent)
    vals = rho ** (2 * n - 1) * (g * (2.0 - g)) ** alpha * omega(g) * sphere_kernel_mean(r * rho, s, n)
    return float(2 * n * np.dot(w, vals))


def lemma4_rhs(alpha: float, beta: float, omega: WeightS, r: float) -> float:
    t = 1.0 - r * r
    return float(omega(t)) / t ** (beta - alpha)


def lemma4_radii(jmax: int = 10) -> np.ndarray:
    return 1.0 - 2.0 ** -np.arange(jmax + 1, dtype=float)


def lemma4_table(alpha: float, beta: float, omega: WeightS, n: int, radii) -> list:
    rows = []
    for r in radii:
        lhs = lemma4_lhs(alpha, beta, omega, n, float(r))
        rhs = lemma4_rhs(alpha, beta, omega, float(r))
        rows.append((float(r), lhs, rhs, lhs / rhs))
    return rows


def check_lemma4(alpha: float, beta: float, omega: WeightS, n: int = 1, z_radii=None,
                 exploratory: bool = False, j_inner: int = 7, growth_tol: float = 0.10) -> CheckReport:
    hyp = check_hypotheses(omega, alpha, beta)
    if not (hyp["alpha_condition"] and hyp["beta_condition"]) and not exploratory:
        raise HypothesisError(f"hypotheses violated: {hyp}")
    radii = lemma4_radii(10) if z_radii is None else np.asarray(z_radii, dtype=float)
    inner_cut = 1.0 - 2.0 ** -j_inner
    rep = CheckReport("lemma4", {"alpha": alpha, "beta": beta, "weight": omega.to_dict(), "n": n,
                                 "radii": [float(r) for r in radii], "exploratory": exploratory,
                                 "hypotheses": hyp},
                      criterion=(f"sup ratio over all radii <= (1 + {growth_tol:g}) * "
                                 f"sup ratio over r <= 1 - 2^-{j_inner}"))
    for r, lhs, rhs, _ in lemma4_table(alpha, beta, omega, n, radii):
        rep.add(f"r={r:.12g}", lhs, rhs, radius=r)
    inner = [x["ratio"] for x in rep.records if x["radius"] <= inner_cut + 1e-15]
    outer = rep.ratios()
    ok = bool(inner) and max(outer) <= (1 + growth_tol) * max(inner)
    limit = aitken_limit(outer)
    if limit is not None:
        rep.inputs["extrapolated_ratio_limit"] = limit
    if exploratory:
        rep.notes.append("exploratory run: not a gate")
    return rep.finish(ok)


def lemma4_csv(rows: Iterable) -> str:
    lines = ["r,lhs,rhs,ratio"]
    lines += [f"{r!r},{lhs!r},{rhs!r},{ratio!r}" for r, lhs, rhs, ratio in rows]
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# check lemma5 and other algebraic identities

def product_rule_residual(f: HoloSeries, g: HoloSeries, K: int) -> float:
    """max coefficient of D(fg) - (g Df + f Dg - fg)."""
    if max(f.degree, 0) + max(g.degree, 0) > K:
        raise ValueError(f"truncation K={K} below deg f + deg g")
    Df, Dg = frac_derivative(f, 1.0), frac_derivative(g, 1.0)
    fg = multiply(f, g, K)
    lhs = frac_derivative(fg, 1.0)
    rhs = multiply(g, Df, K) + multiply(f, Dg, K) - fg
    return lhs.distance(rhs, "max")


def leibniz_residual(f: HoloSeries, g: HoloSeries, K: int) -> float:
    """max coefficient of R(fg) - (g Rf + f Rg)."""
    lhs = radial_derivative(multiply(f, g, K))
    rhs = multiply(g, radial_derivative(f), K) + multiply(f, radial_derivative(g), K)
    return lhs.distance(rhs, "max")


def d_equals_i_plus_r_residual(f: HoloSeries) -> float:
    return frac_derivative(f, 1.0).distance(f + radial_derivative(f), "max")


def inverse_residual(f: HoloSeries, alpha: float) -> float:
    return frac_integral(frac_derivative(f, alpha), alpha).distance(f, "max")


def check_lemma5(pairs: Sequence, K: int | None = None, tol: float = 1e-12) -> CheckReport:
    """Product rule D(fg) = g Df + f Dg - fg on each (f, g) pair, coefficient-exact."""
    rep = CheckReport("lemma5", {"pairs": len(pairs), "tol": tol},
                      criterion=f"max coefficient residual <= {tol:g} (relative to coefficient scale)")
    ok = True
    for i, (f, g) in enumerate(pairs):
        k = K if K is not None else max(f.degree, 0) + max(g.degree, 0)
        res = product_rule_residual(f, g, k)
        scale = max(1.0, max(abs(a) for _, a in multiply(f, g, k)) if len(multiply(f, g, k)) else 1.0)
        rel = res / scale
        rep.records.append({"id": f"pair{i}", "lhs": res, "rhs": tol * scale, "ratio": rel / tol,
                            "n": f.dim, "deg_f": f.degree, "deg_g": g.degree})
        ok &= rel <= tol
    return rep.finish(ok)


def random_pairs(count: int, dims: Sequence[int], max_degree: int, seed: int = 0) -> list:
    rng = np.random.Generator(np.random.Philox(seed))
    pairs = []
    for i in range(count):
        n = dims[i % len(dims)]
        df, dg = int(rng.integers(0, max_degree + 1)), int(rng.integers(0, max_degree + 1))
        pairs.append((random_polynomial(n, df, rng, density=0.7),
                      random_polynomial(n, dg, rng, density=0.7)))
    return pairs


# ---------------------------------------------------------------------------
# reproducing formula

def check_repro(corpus: Mapping, ms: Sequence[float], z_points: Mapping, quad_z_points: Mapping | None = None,
                exact_tol: float = 1e-8, quad_tol: float = 1e-5, termwise_K: int = 20,
                termwise_tol: float = 1e-12, kernel_tol: float = 1e-7) -> CheckReport:
    """Termwise identity, exact-path residuals, and (optionally) quadrature residuals.

    ``corpus`` maps ids to series; ``z_points``/``quad_z_points`` map a
    dimension to its evaluation points.
    """
    rep = CheckReport("repro", {"m": list(ms), "termwise_K": termwise_K, "corpus": sorted(corpus)},
                      criterion=(f"termwise relative error <= {termwise_tol:g}; exact residual <= "
                                 f"{exact_tol:g}; quadrature residual <= {quad_tol:g}"))
    ok = True
    dims = sorted({f.dim for f in corpus.values()} | {1, 2, 3})
    for n in dims:
        for m in ms:
            err = termwise_reproducing_error(n, m, termwise_K)
            rep.records.append({"id": f"termwise n={n} m={m:g}", "lhs": float(err), "rhs": termwise_tol,
                                "ratio": float(err) / termwise_tol, "path": "termwise"})
            ok &= err <= termwise_tol
    for fid, f in corpus.items():
        scale = max(1.0, sup_norm(frac_derivative(f, 1.0)))
        for m in ms:
            res = reproducing_check(f, m, z_points[f.dim], method="exact") / scale
            rep.records.append({"id": f"{fid} m={m:g}", "lhs": res, "rhs": exact_tol,
                                "ratio": res / exact_tol, "path": "exact"})
            ok &= res <= exact_tol
            if quad_z_points is not None:
                res = reproducing_check(f, m, quad_z_points[f.dim], method="quad",
                                        tol=kernel_tol) / scale
                rep.records.append({"id": f"{fid} m={m:g}", "lhs": res, "rhs": quad_tol,
                                    "ratio": res / quad_tol, "path": "quad"})
                ok &= res <= quad_tol
    rep.notes.append("residuals are relative to max(1, sup |Df|) over the grid")
    return rep.finish(ok)


# ---------------------------------------------------------------------------
# checks thm1_identity and thm1_necessity: the kernel identity and the necessity witness

def check_thm1_identity(h: HoloSeries, tau, alpha: float, K: int, tol: float = 1e-8,
                        omega: WeightS | None = None, recover_tol: float = 1e-6) -> CheckReport:
    """T applied to the truncated kernel at tau against conj(h(tau)) kernel / C(n, alpha).

    Also recovers |h(tau)| as C(n, alpha) ||T f_tau|| / ||f_tau|| in the
    p = 2 norm with a power weight and compares it with |h(tau)|.
    """
    n = h.dim
    tau = np.asarray(tau, dtype=complex)
    K_out = K - max(h.degree, 0)
    if K_out < 0:
        raise ValueError("truncation K smaller than the degree of h")
    s = n + alpha + 1.0
    f_tau = kernel_series(tau, s, K)
    out = apply_T_exact(OperatorSpec(h, alpha, K, K_out), f_tau)
    target = kernel_identity_target(h, tau, alpha, K_out)
    residual = out.distance(target)
    omega = omega or power_weight(-0.5)
    num = besov_norm(out, 2.0, omega).value
    den = besov_norm(f_tau.truncate(K_out), 2.0, omega).value
    recovered = bergman_constant(n, alpha) * num / den
    actual = abs(evaluate(h, tau))
    rep = CheckReport("thm1_identity",
                      {"h": h.to_dict(), "tau": [[c.real, c.imag] for c in tau], "alpha": alpha,
                       "K": K, "K_out": K_out, "weight": omega.to_dict()},
                      criterion=f"coefficient l2 residual <= {tol:g}; |recovered - |h(tau)|| <= {recover_tol:g}")
    rep.records.append({"id": "identity", "lhs": residual, "rhs": tol, "ratio": residual / tol})
    rep.records.append({"id": "necessity", "lhs": recovered, "rhs": actual,
                        "ratio": recovered / actual if actual > 0 else None,
                        "abs_error": abs(recovered - actual)})
    rep.notes.append("the kernel identity is checked with conj(h(tau)) and the 1/C(n, alpha) factor")
    return rep.finish(residual <= tol and abs(recovered - actual) <= recover_tol)


def check_thm1_rotation(h: HoloSeries, tau, alpha: float, K: int, thetas: Sequence[float]) -> CheckReport:
    """|h(e^{i theta} tau)| recovered from the rotated kernel, for several angles."""
    rep = CheckReport("thm1_necessity", {"h": h.to_dict(), "alpha": alpha, "K": K,
                                         "thetas": list(thetas)},
                      criterion="recovered |h| at each rotated tau matches evaluation to 1e-6")
    ok = True
    for th in thetas:
        t = np.exp(1j * th) * np.asarray(tau, dtype=complex)
        sub = check_thm1_identity(h, t, alpha, K)
        rec = sub.records[1]
        rep.records.append({"id": f"theta={th:.6g}", "lhs": rec["lhs"], "rhs": rec["rhs"],
                            "ratio": rec["ratio"], "abs_error": rec["abs_error"]})
        ok &= sub.passed
    return rep.finish(ok)


# ---------------------------------------------------------------------------
# boundedness sweeps

def norm_value(f: HoloSeries, p: float, omega: WeightS, check_convergence: bool = True):
    res = besov_norm(f, p, omega, check_convergence=check_convergence)
    return res.value, res.convergence_flag


def boundedness_sweep(op: OperatorSpec, p: float, omega: WeightS, corpus: Mapping,
                      extension: Mapping | None = None, target: WeightS | None = None,
                      growth_tol: float = 0.10, check_convergence: bool = True,
                      check_id: str | None = None) -> CheckReport:
    """Empirical ||op f||_target / ||f||_source over a corpus, with a stability test.

    The sup ratio over ``corpus`` is compared with the sup over ``corpus``
    plus ``extension``; the check passes iff it grows by less than
    ``growth_tol``.  This is evidence of boundedness, not a proof.
    """
    target = target or omega
    n = op.dim
    check_id = check_id or ("thm2_bound" if op.kind == "M" else "thm1_bound")
    rep = CheckReport(check_id, {"op": op.kind, "alpha": op.alpha, "h": op.h.to_dict(), "p": p,
                                 "source_weight": omega.to_dict(), "target_weight": target.to_dict(),
                                 "n": n, "corpus": sorted(corpus),
                                 "extension": sorted(extension or {})},
                      criterion=f"sup ratio over extended corpus <= (1 + {growth_tol:g}) * sup over base corpus")
    for label, w in (("source", omega), ("target", target)):
        e = boundary_exponent(n, p, w)
        if not e > -1:
            rep.notes.append(f"{label} norm diverges for every nonzero f: boundary exponent {e:g} <= -1")
    if rep.notes:
        return rep.finish(False)
    rep.inputs["h_sup"] = sup_norm(op.h)

    def run(items, tag):
        for fid, f in items.items():
            if op.kind == "M":
                g = apply(OperatorSpec(op.h, op.alpha, f.max_degree + op.h.max_degree,
                                       f.max_degree + op.h.max_degree, "M"), f)
            else:
                K = max(f.degree, 0)
                g = apply_T_exact(OperatorSpec(op.h, op.alpha, K, K), f)
            num, fl1 = norm_value(g, p, target, check_convergence)
            den, fl2 = norm_value(f, p, omega, check_convergence)
            rep.records.append({"id": fid, "lhs": num, "rhs": den,
                                "ratio": num / den if den > 0 else None, "set": tag,
                                "converged": None if fl1 is None else bool(fl1 and fl2)})

    run(corpus, "base")
    base = [r["ratio"] for r in rep.records if r["ratio"] is not None]
    run(extension or {}, "extension")
    allr = rep.ratios()
    rep.inputs["sup_base"] = max(base) if base else None
    rep.inputs["sup_extended"] = max(allr) if allr else None
    ok = bool(base) and max(allr) <= (1 + growth_tol) * max(base)
    if any(r.get("converged") is False for r in rep.records):
        rep.notes.append("some norms did not pass the refinement test (see 'converged')")
    return rep.finish(ok)


# ---------------------------------------------------------------------------
# corpus of record

def record_corpus(n: int, s: float, monomial_degree: int = 4, taus: Sequence[float] = (0.3, 0.6, 0.9),
                  K: int = 40) -> dict:
    """Monomials up to ``monomial_degree`` and kernel truncations at tau e_1."""
    from .series import all_indices
    corpus = {}
    for m in all_indices(n, monomial_degree):
        corpus["z^" + "".join(str(c) for c in m)] = HoloSeries.monomial(m)
    corpus.update(kernel_corpus(n, s, taus, K))
    return corpus


def kernel_corpus(n: int, s: float, taus: Sequence[float], K: int) -> dict:
    out = {}
    for t in taus:
        tau = np.zeros(n)
        tau[0] = t
        out[f"kernel tau={t:g} s={s:g} K={K}"] = kernel_series(tau, s, K)
    return out


def smallest_m(n: int, p: float, omega: WeightS, alpha: float, target_ok: Callable | None = None) -> int:
    """Smallest natural m above the threshold (and accepted by ``target_ok``)."""
    m = max(1, math.floor(lemma2_threshold(n, p, omega.beta_w)) + 1)
    while target_ok is not None and not target_ok(m):
        m += 1
    return m


def star_target(omega: WeightS, n: int, p: float, alpha: float) -> tuple:
    """(m, omega*) with the smallest admissible m giving a finite target norm."""
    m = smallest_m(n, p, omega, alpha,
                   lambda m: boundary_exponent(n, p, weight_star(omega, alpha, m, p)) > -1)
    return m, weight_star(omega, alpha, m, p)


# ---------------------------------------------------------------------------
# kernel derivative growth

def kernel_growth(s: float, order_m: float, radii: Sequence[float], tol: float = 1e-16) -> list:
    """|D^m (1 - <z, e_1>)^{-s}| / |1 - <z, e_1>|^{-s-m} at z = r e_1 (one variable)."""
    rows = []
    rmax = max(radii)
    K = int(math.ceil(math.log(tol) / math.log(rmax))) + 50
    from .series import kernel_coefficients
    c = kernel_coefficients(s, K) * np.arange(1, K + 2, dtype=float) ** order_m
    for r in radii:
        val = np.polynomial.polynomial.polyval(r, c)
        rows.append((float(r), float(val), float((1 - r) ** (-s - order_m)), float(val * (1 - r) ** (s + order_m))))
    return rows


def aitken_limit(ratios: Sequence[float]) -> float | None:
    """Aitken delta-squared estimate of the limit of the last three ratios."""
    if len(ratios) < 3:
        return None
    a, b, c = ratios[-3:]
    den = (c - b) - (b - a)
    if den == 0 or not np.isfinite(den):
        return float(c)
    return float(c - (c - b) ** 2 / den)
