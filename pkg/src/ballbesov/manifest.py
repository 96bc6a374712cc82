"""Manifest-driven validation runs.

A manifest is a JSON file ``{"version": 1, "seed": int, "checks": [entry, ...]}``
where each entry is ``{"name": str, "check": <check id>, "gate": bool,
"params": {...}}``.  Series inside ``params`` are given as

* ``{"kind": "monomial", "m": [...]}``
* ``{"kind": "kernel", "tau": [[re, im], ...], "s": s, "K": K}``
* ``{"kind": "inline", "series": <series JSON>}``
* ``{"kind": "file", "path": "..."}`` (relative to the manifest)

and points as lists of coordinate pairs ``[[re, im], ...]``.
"""
from __future__ import annotations

import json
import os
from importlib import resources
from typing import Mapping

import numpy as np

from . import validation as V
from .operators import OperatorSpec
from .series import HoloSeries, kernel_series, load_series
from .weights import weight_from_dict, weight_star

DEFAULT_MANIFEST = "manifest.json"


class ManifestError(ValueError):
    """Malformed manifest or unknown check id."""


def default_manifest_path() -> str:
    return str(resources.files("ballbesov").joinpath("data", DEFAULT_MANIFEST))


def load_manifest(path: str | None = None) -> dict:
    path = path or default_manifest_path()
    try:
        with open(path) as fh:
            data = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise ManifestError(f"cannot read manifest {path}: {exc}") from exc
    if not isinstance(data, dict) or not isinstance(data.get("checks"), list):
        raise ManifestError("manifest needs a 'checks' list")
    names = set()
    for entry in data["checks"]:
        if not isinstance(entry, dict) or "check" not in entry or "name" not in entry:
            raise ManifestError(f"bad manifest entry {entry!r}")
        if entry["check"] not in V.CHECK_IDS:
            raise ManifestError(f"unknown check id {entry['check']!r}")
        if entry["name"] in names:
            raise ManifestError(f"duplicate entry name {entry['name']!r}")
        names.add(entry["name"])
    data["_base_dir"] = os.path.dirname(os.path.abspath(path))
    return data


def points(data) -> np.ndarray:
    arr = np.asarray(data, dtype=float)
    if arr.ndim != 3 or arr.shape[-1] != 2:
        raise ManifestError("points are lists of [re, im] coordinate pairs")
    return arr[..., 0] + 1j * arr[..., 1]


def series_from_spec(spec: Mapping, n: int | None = None, base_dir: str | None = None) -> HoloSeries:
    kind = spec.get("kind")
    if kind == "monomial":
        return HoloSeries.monomial(tuple(int(a) for a in spec["m"]))
    if kind == "kernel":
        tau = points([spec["tau"]])[0]
        return kernel_series(tau, float(spec["s"]), int(spec["K"]))
    if kind == "inline":
        return HoloSeries.from_dict(spec["series"])
    if kind == "file":
        path = spec["path"]
        if base_dir and not os.path.isabs(path):
            path = os.path.join(base_dir, path)
        return load_series(path)
    raise ManifestError(f"unknown series kind {kind!r}")


def symbol(n: int, spec: Mapping) -> HoloSeries:
    """A symbol written with short indices, padded with zeros to dimension n."""
    terms = [dict(t, m=list(t["m"]) + [0] * (n - len(t["m"]))) for t in spec["terms"]]
    return HoloSeries.from_dict({"dim": n, "max_degree": spec["max_degree"], "terms": terms})


def _run_lemma2(p, base):
    f = series_from_spec(p["f"], base_dir=base)
    return V.check_lemma2(f, float(p["p"]), weight_from_dict(p["weight"]), int(p["m"]),
                          points(p["z_points"]))


def _run_lemma3(p, base):
    cases = p["cases"]
    out = V.CheckReport("lemma3", {"cases": cases}, criterion="lhs <= rhs * (1 + 1e-06) for every case")
    ok = True
    for i, case in enumerate(cases):
        f = series_from_spec(case["f"], base_dir=base)
        rep = V.check_lemma3(f, float(case["p"]), weight_from_dict(case["weight"]))
        rec = dict(rep.records[0], id=case.get("label", f"case{i}"))
        out.records.append(rec)
        ok &= rep.passed
    return out.finish(ok)


def _run_lemma4(p, base):
    radii = p.get("z_radii")
    if radii is None:
        radii = V.lemma4_radii(int(p.get("jmax", 10)))
    return V.check_lemma4(float(p["alpha"]), float(p["beta"]), weight_from_dict(p["weight"]),
                          int(p.get("n", 1)), radii, bool(p.get("exploratory", False)),
                          j_inner=int(p.get("j_inner", 7)))


def _run_lemma5(p, base, seed):
    pairs = V.random_pairs(int(p["count"]), p["dims"], int(p["max_degree"]), seed)
    rep = V.check_lemma5(pairs, tol=float(p.get("tol", 1e-12)))
    rep.provenance["seed"] = seed
    return rep


def _corpus(p) -> dict:
    corpus = {}
    for n in p["dims"]:
        s = n + float(p.get("kernel_alpha", 0.0)) + 1.0
        for k, f in V.record_corpus(n, s, int(p["monomial_degree"]), p["taus"], int(p["K"])).items():
            corpus[f"n={n} {k}"] = f
    return corpus


def _run_repro(p, base):
    corpus = _corpus(p)
    zp = {int(k): points(v) for k, v in p["z_points"].items()}
    qp = {int(k): points(v) for k, v in p["quad_z_points"].items()} if "quad_z_points" in p else None
    return V.check_repro(corpus, [float(m) for m in p["m"]], zp, qp,
                         kernel_tol=float(p.get("kernel_tol", 1e-7)))


def _thm1_grid(p, check_id: str, rotations: bool):
    rep = V.CheckReport(check_id, dict(p), criterion=(
        "identity residual <= 1e-08 and |recovered - |h(tau)|| <= 1e-06 for every case"))
    ok = True
    for n in p["dims"]:
        for hspec in p["h"]:
            h = symbol(n, hspec)
            for t in p["taus"]:
                for alpha in p["alphas"]:
                    tau = np.zeros(n, dtype=complex)
                    tau[0] = t
                    omega = weight_from_dict(p["weight"])
                    thetas = p.get("thetas", [0.0]) if rotations else [0.0]
                    for th in thetas:
                        sub = V.check_thm1_identity(h, np.exp(1j * th) * tau, float(alpha), int(p["K"]),
                                                    omega=omega)
                        label = f"n={n} h={hspec['label']} tau={t:g} alpha={alpha:g}"
                        if rotations:
                            label += f" theta={th:g}"
                        ident, nec = sub.records
                        rep.records.append({"id": label, "lhs": nec["lhs"], "rhs": nec["rhs"],
                                            "ratio": nec["ratio"], "identity_residual": ident["lhs"],
                                            "abs_error": nec["abs_error"]})
                        ok &= sub.passed
    return rep.finish(ok)


def _run_bound(p, base, check_id):
    n = int(p["n"])
    h = symbol(n, p["h"])
    alpha = float(p.get("alpha", 0.0))
    kind = "M" if check_id == "thm2_bound" else "T"
    op = OperatorSpec(h, alpha, 1, 1, kind)
    pval = float(p["p"])
    omega = weight_from_dict(p["weight"])
    target = None
    if p.get("star"):
        m, target = V.star_target(omega, n, pval, alpha)
    s = n + alpha + 1.0
    base_c = V.record_corpus(n, s, int(p["monomial_degree"]), p["taus"], int(p["K"]))
    ext = V.kernel_corpus(n, s, p["taus"], int(p["K_ext"]))
    rep = V.boundedness_sweep(op, pval, omega, base_c, ext, target=target, check_id=check_id)
    if target is not None:
        rep.inputs["star_m"] = target.descriptor["m"]
    return rep


def run_entry(entry: Mapping, seed: int = 0, base_dir: str | None = None) -> V.CheckReport:
    cid, p = entry["check"], entry.get("params", {})
    try:
        if cid == "lemma2":
            rep = _run_lemma2(p, base_dir)
        elif cid == "lemma3":
            rep = _run_lemma3(p, base_dir)
        elif cid == "lemma4":
            rep = _run_lemma4(p, base_dir)
        elif cid == "lemma5":
            rep = _run_lemma5(p, base_dir, seed)
        elif cid == "repro":
            rep = _run_repro(p, base_dir)
        elif cid == "thm1_identity":
            rep = _thm1_grid(p, cid, rotations=False)
        elif cid == "thm1_necessity":
            rep = _thm1_grid(p, cid, rotations=True)
        elif cid in ("thm1_bound", "thm2_bound"):
            rep = _run_bound(p, base_dir, cid)
        else:
            raise ManifestError(f"unknown check id {cid!r}")
    except KeyError as exc:
        raise ManifestError(f"entry {entry.get('name')!r} misses parameter {exc}") from exc
    rep.inputs = {"name": entry["name"], "gate": bool(entry.get("gate", True)), **rep.inputs}
    rep.provenance.setdefault("seed", seed)
    return rep


def select(manifest: Mapping, check: str) -> list:
    if check == "all":
        return list(manifest["checks"])
    chosen = [e for e in manifest["checks"] if e["check"] == check or e["name"] == check]
    if not chosen:
        raise ManifestError(f"no manifest entry for check {check!r}")
    return chosen


def worker_count() -> int:
    try:
        return max(1, int(os.environ.get("BALLBESOV_THREADS", "1")))
    except ValueError:
        return 1


def run_manifest(manifest: Mapping, check: str = "all", seed: int | None = None) -> list:
    """Run the selected entries; results come back in manifest order whatever the worker count."""
    entries = select(manifest, check)
    seed = int(manifest.get("seed", 0)) if seed is None else seed
    base = manifest.get("_base_dir")
    workers = worker_count()
    if workers == 1 or len(entries) == 1:
        return [run_entry(e, seed, base) for e in entries]
    from concurrent.futures import ThreadPoolExecutor
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(lambda e: run_entry(e, seed, base), entries))


def summary(reports: list) -> dict:
    rows = [{"name": r.inputs["name"], "check": r.check_id, "gate": r.inputs["gate"],
             "pass": r.passed, "sup_ratio": r.sup_ratio} for r in reports]
    return {"reports": rows,
            "gated_failures": [r["name"] for r in rows if r["gate"] and not r["pass"]]}


def summary_text(summ: Mapping) -> str:
    rows = summ["reports"]
    width = max([len(r["name"]) for r in rows] + [4])
    lines = [f"{'name':<{width}}  {'check':<15} {'gate':<5} result"]
    for r in rows:
        lines.append(f"{r['name']:<{width}}  {r['check']:<15} {'yes' if r['gate'] else 'no':<5} "
                     f"{'PASS' if r['pass'] else 'FAIL'}")
    return "\n".join(lines) + "\n"
