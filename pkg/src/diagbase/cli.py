"""Command-line front end.  Every command prints one JSON document.

Exit codes: 0 for any completed computation (a failing inequality, a
refusal or an invalid certificate is a result), 2 for usage or input
errors, 3 when a cap is exceeded without ``--exhaustive``.
"""
from __future__ import annotations

import argparse
import csv
import hashlib
import io
import json
import os
import platform
import re
import sys
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field
from math import factorial
from pathlib import Path

import numpy as np

from . import bounds as B
from .catalog import (CatalogError, aut_action, family_of, get_spec, h_exact, h_for_name,
                      list_catalog, out_bound_check, validate_entry)
from .constructions import (BaseCandidate, build_base_edge, build_base_main, build_partition,
                            k2_base, verify_all_selectors, verify_candidate)
from .diagonal import (D_point, DiagonalPoint, WElement, act, brute_base, count_regular_suborbits,
                       is_base, normalize)
from .holomorph import (Refusal, SearchFailure, SubsetWitness, count_regular_orbits,
                        find_regular_subset, setwise_stabilizer, verify_witness)
from .perm import GroupOverflowError, Permutation
from .report import SCHEMA_VERSION, BoundReport

VERSION = "0.1.0"
DEFAULT_CAP = 10**6
EXHAUSTIVE_CAP = 10**8
CERT_KINDS = ("subset_witness", "base_candidate")
UNSEALED = ("digest", "config", "meta")


class UsageError(ValueError):
    pass


@dataclass
class RunConfig:
    command: str
    group: str | None = None
    params: dict = field(default_factory=dict)
    seed: int = 0
    budget: int = 10000
    cap: int = DEFAULT_CAP
    threads: int = 1
    output: str | None = None
    fmt: str = "json"
    meta: bool = True


# ------------------------------------------------------------ helpers

def _ints(text: str | None) -> list[int]:
    if text is None or text.strip() == "":
        return []
    return [int(x) for x in re.split(r"[,\s]+", text.strip()) if x]


def _points(text: str) -> list[list[int]]:
    return [_ints(chunk) for chunk in text.split(";") if chunk.strip()]


def _out(a, selector: str | None):
    return a.parse_out(selector)


def _digest(body: dict) -> str:
    payload = json.dumps(body, sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(payload.encode()).hexdigest()


def _seal(body: dict) -> dict:
    body = dict(body)
    body["schema_version"] = SCHEMA_VERSION
    body["digest"] = _digest({k: v for k, v in body.items() if k not in UNSEALED})
    return body


def _jsonable(x):
    if isinstance(x, dict):
        return {str(k): _jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_jsonable(v) for v in x]
    if isinstance(x, np.integer):
        return int(x)
    if isinstance(x, np.bool_):
        return bool(x)
    if isinstance(x, int) and not isinstance(x, bool) and abs(x) >= 2**53:
        return str(x)
    return x


def witness_json(w: SubsetWitness) -> dict:
    return _seal({"kind": "subset_witness", "group": w.group, "subset": w.subset,
                  "stabilizer_order": w.stabilizer_order, "certificate_kind": w.certificate_kind,
                  "seed": w.seed, "detail": _jsonable(w.detail)})


def candidate_json(c: BaseCandidate) -> dict:
    return _seal({"kind": "base_candidate", "group": c.group, "k": c.k, "ell": c.ell,
                  "rows": c.rows, "provenance": c.provenance, "p_type": c.p_type,
                  "out": list(c.out) if c.out is not None else None,
                  "verdict": c.verdict, "stabilizer_order": c.stabilizer_order,
                  "witnesses": _jsonable(c.witnesses)})


def verify_certificate(path: str | Path) -> dict:
    """Re-check a certificate file from scratch; stored verdicts are ignored."""
    try:
        doc = json.loads(Path(path).read_text())
    except (OSError, json.JSONDecodeError) as exc:
        raise UsageError(f"cannot read certificate {path}: {exc}") from exc
    if doc.get("schema_version") != SCHEMA_VERSION or doc.get("kind") not in CERT_KINDS:
        raise UsageError(f"{path}: not a certificate of schema {SCHEMA_VERSION} "
                         f"(kind must be one of {CERT_KINDS})")
    intact = doc.get("digest") == _digest({k: v for k, v in doc.items() if k not in UNSEALED})
    a = aut_action(doc["group"])
    if doc["kind"] == "subset_witness":
        try:
            w = SubsetWitness(doc["group"], doc["subset"], int(doc["stabilizer_order"]),
                              doc["certificate_kind"], doc.get("seed"), doc.get("detail", {}))
            math_ok = verify_witness(a, w)
        except (ValueError, KeyError, TypeError):
            math_ok = False
    else:
        try:
            rows = doc["rows"]
            k = int(doc["k"])
            if any(len(r) != k or min(r) < 0 or max(r) >= a.order for r in rows):
                math_ok = False
            else:
                out = tuple(doc["out"]) if doc["out"] is not None else None
                pts = [D_point(k)] + [normalize(a, r) for r in rows]
                math_ok, _ = is_base(a, pts, doc["p_type"], out)
        except (ValueError, KeyError, TypeError):
            math_ok = False
    return {"kind": "verification", "certificate_kind": doc["kind"], "path": str(path),
            "digest_intact": bool(intact), "recomputed_valid": bool(math_ok),
            "valid": bool(intact and math_ok)}


def _failure_json(f: SearchFailure) -> dict:
    return {"kind": "search_failure", "reason": f.reason, "attempts": f.attempts,
            "seed": f.seed, "note": f.note}


def _refusal_json(r: Refusal) -> dict:
    return {"kind": "refusal", "reason": r.reason, "tag": r.tag}


def _stab_json(desc) -> dict:
    return {"order": desc.order, "trivial": desc.order == 1, "p_type": desc.p_type,
            "has_odd_pi": desc.has_odd_pi, "has_transposition": desc.has_transposition,
            "records": [{"alpha": r.alpha, "c": list(r.c), "pi": list(r.pi_rep),
                         "classes": r.classes, "n_total": r.n_total, "n_even": r.n_even}
                        for r in desc.records[:50]],
            "notes": desc.notes}


def _cap(cfg: RunConfig, needed: int, what: str):
    if needed > cfg.cap:
        raise GroupOverflowError(f"{what}: {needed} exceeds cap {cfg.cap}; "
                                 f"pass --exhaustive to raise it to {EXHAUSTIVE_CAP}")


# ------------------------------------------------------------ catalog

def cmd_catalog_list(args, cfg):
    rows = []
    for name in list_catalog():
        spec = get_spec(name, check=False)
        rows.append({"name": name, "order": spec.order, "out_order": spec.out_order,
                     "degree": spec.degree})
    return {"kind": "catalog_list", "groups": rows}


def cmd_catalog_check(args, cfg):
    names = [args.group] if args.group else list_catalog()
    out = []
    for name in names:
        spec = get_spec(name, check=False)
        t = validate_entry(spec, check_simple=True)
        a = aut_action(name)
        h, wit = h_exact(a)
        try:
            hf = h_for_name(name)
        except CatalogError:
            hf = None
        out.append({"name": name, "order": len(t), "aut_order": a.aut_order,
                    "out_order": a.out_order, "simple": True, "h_exact": h, "h_witness": wit,
                    "h_formula": hf, "h_agrees": hf == h,
                    "out_cubed_below_order": out_bound_check(a).holds})
    return {"kind": "catalog_check", "groups": out}


# ------------------------------------------------------------ hol

def _kmask(a, args):
    return a.k_mask(_out(a, getattr(args, "out", None)))


def cmd_hol_stab(args, cfg):
    a = aut_action(args.group)
    s = _ints(args.subset)
    elems = setwise_stabilizer(a, s, _kmask(a, args))
    return {"kind": "setwise_stabilizer", "group": a.name, "subset": sorted(s),
            "order": len(elems), "elements": [[e.g, e.alpha] for e in elems[:200]],
            "truncated": len(elems) > 200}


def cmd_hol_search(args, cfg):
    a = aut_action(args.group)
    mask = None if args.out in (None, "full") else _kmask(a, args)
    w = find_regular_subset(a, args.m, seed=cfg.seed, budget=cfg.budget, k_mask=mask)
    if isinstance(w, SearchFailure):
        return _failure_json(w)
    return witness_json(w)


def cmd_hol_orbits(args, cfg):
    a = aut_action(args.group)
    from math import comb
    kk = min(args.k, a.order - args.k)
    _cap(cfg, comb(a.order, kk), "number of subsets")
    oc = count_regular_orbits(a, args.k, _kmask(a, args), cap=cfg.cap)
    return {"kind": "orbit_count", "group": a.name, "k": args.k, "subsets": comb(a.order, args.k),
            "group_order": oc.group_order, "regular_count": oc.regular_count,
            "total_orbit_count": oc.total_orbit_count, "regular_reps": oc.regular_reps[:20]}


def cmd_hol_verify(args, cfg):
    if args.certificate:
        return verify_certificate(args.certificate)
    a = aut_action(args.group)
    s = _ints(args.subset)
    order = len(setwise_stabilizer(a, s, _kmask(a, args)))
    return {"kind": "verification", "group": a.name, "subset": sorted(s),
            "stabilizer_order": order, "valid": order == 1}


# ------------------------------------------------------------ diag

def cmd_diag_act(args, cfg):
    a = aut_action(args.group)
    p = normalize(a, _ints(args.point))
    k = p.k
    u = _ints(args.u) or [0] * k
    pi = _ints(args.pi) or list(range(k))
    if len(u) != k or sorted(pi) != list(range(k)):
        raise UsageError("--u needs k entries and --pi must be a permutation of 0..k-1")
    w = WElement(tuple(u), args.alpha, Permutation(tuple(pi)))
    img = act(a, w, p)
    return {"kind": "diagonal_action", "group": a.name, "point": list(p.coords),
            "u": u, "alpha": args.alpha, "pi": pi, "image": list(img.coords), "image_is_D": img.is_D()}


def cmd_diag_verify_base(args, cfg):
    if args.certificate:
        return verify_certificate(args.certificate)
    a = aut_action(args.group)
    rows = _points(args.points)
    if not rows:
        raise UsageError("--points needs at least one tuple")
    k = len(rows[0])
    pts = [normalize(a, r) for r in rows]
    if args.with_d:
        pts = [D_point(k)] + pts
    ok, desc = is_base(a, pts, args.top, _out(a, args.out))
    return {"kind": "base_check", "group": a.name, "k": k, "points": [list(p.coords) for p in pts],
            "top": args.top, "out": list(_out(a, args.out)), "is_base": ok,
            "stabilizer": _stab_json(desc)}


def cmd_diag_brute_base(args, cfg):
    a = aut_action(args.group)
    _cap(cfg, a.order ** (args.k - 1), "|Omega|")
    size, pts = brute_base(a, args.k, args.top, _out(a, args.out), cap=cfg.cap)
    formula = B.base_size_formula(a.order, args.k, giant=args.top != "1" or args.k == 2,
                                  contains_sk=args.top == "S",
                                  g_full=args.top == "S" and len(_out(a, args.out)) == a.out_order)
    return {"kind": "brute_base", "group": a.name, "k": args.k, "top": args.top,
            "out": list(_out(a, args.out)), "base_size": size,
            "base": [list(p.coords) for p in pts], "formula_base_size": formula}


def cmd_diag_suborbits(args, cfg):
    a = aut_action(args.group)
    if args.method != "hol":
        _cap(cfg, a.order ** (args.k - 1), "|Omega|")
    n = count_regular_suborbits(a, args.k, args.top, _out(a, args.out), method=args.method,
                                cap=cfg.cap, subset_cap=cfg.cap)
    return {"kind": "regular_suborbits", "group": a.name, "k": args.k, "top": args.top,
            "out": list(_out(a, args.out)), "method": args.method, "regular_suborbits": n}


# ------------------------------------------------------------ construct

def _verified(a, cand: BaseCandidate, args):
    out = _out(a, args.out)
    verify_candidate(a, cand, args.top, out)
    doc = candidate_json(cand)
    if args.all_selectors:
        sel = verify_all_selectors(a, cand)
        doc = dict(doc)
        doc["all_selectors"] = [{"top": pt, "out": list(sub), "stabilizer_order": o}
                                for (pt, sub), o in sorted(sel.items())]
        doc = _seal({k: v for k, v in doc.items() if k not in ("digest", "schema_version")})
    return doc


def cmd_construct_k2(args, cfg):
    a = aut_action(args.group)
    res = k2_base(a, _out(a, args.out), seed=cfg.seed)
    if isinstance(res, SearchFailure):
        return _failure_json(res)
    verify_candidate(a, res, "S", _out(a, args.out))
    return candidate_json(res)


def cmd_construct_partition(args, cfg):
    a = aut_action(args.group)
    part = build_partition(a, args.ell, args.k, seed=cfg.seed, budget=cfg.budget)
    return {"kind": "t_partition", "group": a.name, "k": part.k, "ell": part.ell,
            "regime": part.regime, "S": list(part.S), "x": part.x,
            "block_sizes": {str(t): len(b) for t, b in sorted(part.parts.items())}}


def cmd_construct_base(args, cfg):
    a = aut_action(args.group)
    part = build_partition(a, args.ell, args.k, seed=cfg.seed, budget=cfg.budget)
    cand = build_base_main(a, part)
    return _verified(a, cand, args)


def cmd_construct_edge(args, cfg):
    a = aut_action(args.group)
    res = build_base_edge(a, args.ell, args.k, args.top, _out(a, args.out),
                          seed=cfg.seed, budget=cfg.budget)
    if isinstance(res, Refusal):
        return _refusal_json(res)
    return _verified(a, res, args)


# ------------------------------------------------------------ bounds

_NAME_ALIASES = {
    "prob": "prob", "prob_ori": "prob_ori", "prob_ori_strong": "prob_ori_strong",
    "prob_u_weak": "prob_u_weak", "u=k/2": "u_half", "u_half": "u_half", "u=0": "u_zero",
    "u_zero": "u_zero", "q1": "q1q2", "q2": "q1q2", "q1q2": "q1q2", "alternating": "alternating",
    "binom": "binom", "bound_binomial_better": "binom", "bin_bound": "binom_corollary",
    "binomial_bound": "binom_corollary", "binom_corollary": "binom_corollary",
    "out": "out", "base_size": "base_size", "r1": "r1",
}


def canonical_bound_name(name: str) -> str:
    key = name.strip().lower()
    for prefix in ("e:", "l:", "c:", "p:"):
        if key.startswith(prefix):
            key = key[len(prefix):]
    if key not in _NAME_ALIASES:
        raise UsageError(f"unknown inequality {name!r}; choose from {sorted(set(_NAME_ALIASES.values()))}")
    return _NAME_ALIASES[key]


def group_parameters(args) -> dict:
    """|T|, |Out(T)| and h(T) from explicit flags, the catalog, or the A_n family."""
    if args.order is not None:
        if args.out_order is None or args.h is None:
            raise UsageError("--order needs --out-order and --h")
        return {"T": args.order, "out": args.out_order, "h": args.h, "source": "flags"}
    if not args.group:
        raise UsageError("give --group or --order/--out-order/--h")
    if args.group in list_catalog() or os.path.exists(args.group):
        spec = get_spec(args.group, check=False)
        if args.exact_h:
            h, src = h_exact(aut_action(args.group))[0], "catalog, exact h"
        else:
            h, src = h_for_name(spec.name), "catalog, closed-form h"
        return {"T": spec.order, "out": spec.out_order, "h": h, "source": src}
    fam = family_of(args.group)
    if fam[0] == "A":
        n = fam[1]
        return {"T": factorial(n) // 2, "out": 4 if n == 6 else 2, "h": factorial(n - 2),
                "source": "alternating family"}
    raise UsageError(f"{args.group} is not in the catalog; pass --order/--out-order/--h")


def _bound_reports(name: str, args, p: dict | None) -> list[BoundReport]:
    k = args.k
    prec = args.prec
    if name == "prob":
        return [B.prob_check(p["T"], p["out"], p["h"], k)]
    if name in ("prob_ori", "prob_ori_strong"):
        a = aut_action(args.group)
        if name == "prob_ori":
            return [B.prob_ori_exact(a, k)]
        return [B.qk_union_bound(a, k, args.m if args.m is not None else 2)]
    if name == "q1q2":
        return [B.q1q2(p["T"], p["out"], p["h"], k, prec)]
    hol = B.hol_order_of(p["T"], p["out"]) if p else None
    if name == "prob_u_weak":
        us = [args.u] if args.u is not None else range(k // 2 + 1)
        return [B.prob_u_weak(p["T"], hol, p["h"], k, u, prec) for u in us]
    if name == "u_half":
        return B.u_half_criterion(p["T"], hol, p["h"], k, args.k0 or k, prec)
    if name == "u_zero":
        return B.u_zero_criterion(p["T"], hol, p["h"], k, args.k0 or k, prec)
    if name == "alternating":
        return [B.alternating_check(args.n, prec)]
    if name == "binom":
        return [B.binom_sandwich(args.ell or 1, args.m, args.n, prec)]
    if name == "binom_corollary":
        return [B.binom_corollary(args.t, args.n, prec)]
    if name == "out":
        return [out_bound_check(aut_action(args.group))]
    raise UsageError(f"{name} has no report form")


_NEEDS_GROUP = ("prob", "q1q2", "prob_u_weak", "u_half", "u_zero")


def cmd_bounds_check(args, cfg):
    name = canonical_bound_name(args.name)
    if name == "base_size":
        g_full = args.top == "S" and args.out in (None, "full")
        b = B.base_size_formula(args.order or group_parameters(args)["T"], args.k,
                                giant=args.top != "1", contains_sk=args.top == "S",
                                t_tag=args.tag, g_full=g_full)
        return {"kind": "base_size_formula", "k": args.k, "top": args.top, "out": args.out,
                "base_size": b}
    if name == "r1":
        order = args.order or group_parameters(args)["T"]
        g_full = args.top == "S" and args.out in (None, "full")
        return {"kind": "unique_regular_suborbit", "k": args.k, "full_group": g_full,
                "unique": B.classify_r1(order, args.k, args.tag, g_full)}
    p = group_parameters(args) if name in _NEEDS_GROUP else None
    reports = _bound_reports(name, args, p)
    docs = [r.to_json() for r in reports]
    if p:
        for d in docs:
            d["parameters"]["parameter_source"] = p["source"]
    if len(docs) == 1:
        return docs[0]
    return {"kind": "bound_report_set", "inequality": name, "verdict": B.all_hold(reports),
            "reports": docs}


def _parse_range(text: str) -> list[int]:
    m = re.fullmatch(r"(\d+)(?::(\d+))?", text.strip())
    if not m:
        raise UsageError(f"range must look like 5:51, got {text!r}")
    lo = int(m[1])
    hi = int(m[2]) if m[2] else lo
    return list(range(lo, hi + 1))


def cmd_bounds_grid(args, cfg):
    name = canonical_bound_name(args.name)
    if name not in ("prob", "q1q2", "prob_ori", "prob_ori_strong"):
        raise UsageError("grid supports prob, q1q2, prob_ori and prob_ori_strong")
    groups = args.groups.split(",") if args.groups else [args.group]
    jobs = []
    for g in groups:
        args.group = g
        p = group_parameters(args) if name in _NEEDS_GROUP else None
        ks = _parse_range(args.k_range) if args.k_range else \
            list(range(5, B.log_range_max(p["T"] if p else aut_action(g).order) + 1))
        jobs += [(g, p, k) for k in ks]

    def one(job):
        g, p, k = job
        ns = argparse.Namespace(**{**vars(args), "group": g, "k": k})
        try:
            r = _bound_reports(name, ns, p)[0]
            return {"group": g, "k": k, "verdict": r.verdict, "lhs": r.to_json()["lhs"],
                    "rhs": r.to_json()["rhs"]}
        except B.RangeError as exc:
            return {"group": g, "k": k, "verdict": "out_of_range", "lhs": None, "rhs": str(exc)}

    with ThreadPoolExecutor(max_workers=max(1, cfg.threads)) as pool:
        rows = list(pool.map(one, jobs))
    if cfg.fmt == "csv":
        buf = io.StringIO()
        w = csv.DictWriter(buf, fieldnames=["group", "k", "verdict", "lhs", "rhs"], lineterminator="\n")
        w.writeheader()
        w.writerows(rows)
        return buf.getvalue()
    return {"kind": "bound_grid", "inequality": name, "rows": rows,
            "note": "k ranges use floor(4 log2|T|)"}


def cmd_bounds_ht(args, cfg):
    names = [args.group] if args.group else list_catalog()
    rows = []
    for name in names:
        h, wit = h_exact(aut_action(name))
        try:
            hf = h_for_name(name)
        except CatalogError:
            hf = None
        rows.append({"group": name, "h_exact": h, "h_formula": hf, "agree": h == hf, "witness": wit})
    return {"kind": "h_table", "rows": rows}


# ------------------------------------------------------------ prob

def cmd_prob_qk(args, cfg):
    a = aut_action(args.group)
    m = args.m if args.m is not None else a.order
    return B.qk_union_bound(a, args.k, m).to_json()


def cmd_prob_bridge(args, cfg):
    if args.p is not None:
        from fractions import Fraction
        bound = B.pq_bridge(Fraction(args.p), args.k)
        return {"kind": "pq_bridge", "k": args.k, "P_k_plus_1": args.p, "Q_k_upper": str(bound),
                "certifying": True}
    a = aut_action(args.group)
    if args.k < 4:
        raise UsageError("the bridge needs k >= 4")
    est = B.estimate_p(a, args.k + 1, samples=args.samples, seed=cfg.seed)
    bound = B.pq_bridge(est.value, args.k)
    return {"kind": "pq_bridge", "group": a.name, "k": args.k, "samples": est.samples,
            "hits": est.hits, "P_k_plus_1_estimate": str(est.value), "Q_k_upper": str(bound),
            "Q_k_upper_float": float(bound), "certifying": False, "note": est.note}


def cmd_verify(args, cfg):
    return verify_certificate(args.path)


# ------------------------------------------------------------ parser

def _common(p: argparse.ArgumentParser, group=True):
    if group:
        p.add_argument("--group", help="catalog name or path to a catalog file")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--budget", type=int, default=10000)
    p.add_argument("--threads", type=int, default=os.cpu_count() or 1)
    p.add_argument("--exhaustive", action="store_true", help="raise enumeration caps")
    p.add_argument("--no-meta", action="store_true", help="omit timestamps and host data")
    p.add_argument("--output", help="write the report here instead of stdout")
    p.add_argument("--format", choices=("json", "csv"), default="json")


def _selectors(p):
    p.add_argument("--top", choices=("S", "A", "1"), default="S", help="top group S_k, A_k or 1")
    p.add_argument("--out", default="full", help="Out(T) subgroup: full, 1 or coset ids like 0,1")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="diagbase", description=__doc__.splitlines()[0])
    sub = ap.add_subparsers(dest="area", required=True)

    def leaf(parent, name, fn, **kw):
        p = parent.add_parser(name, **kw)
        p.set_defaults(fn=fn)
        _common(p)
        return p

    cat = sub.add_parser("catalog").add_subparsers(dest="action", required=True)
    leaf(cat, "list", cmd_catalog_list)
    leaf(cat, "check", cmd_catalog_check)

    hol = sub.add_parser("hol").add_subparsers(dest="action", required=True)
    p = leaf(hol, "stab", cmd_hol_stab)
    p.add_argument("--subset", required=True)
    p.add_argument("--out", default="full")
    p = leaf(hol, "search", cmd_hol_search)
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--out", default="full")
    p = leaf(hol, "orbits", cmd_hol_orbits)
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--out", default="full")
    p = leaf(hol, "verify", cmd_hol_verify)
    p.add_argument("--subset")
    p.add_argument("--certificate")
    p.add_argument("--out", default="full")

    diag = sub.add_parser("diag").add_subparsers(dest="action", required=True)
    p = leaf(diag, "act", cmd_diag_act)
    p.add_argument("--point", required=True)
    p.add_argument("--u")
    p.add_argument("--alpha", type=int, default=0)
    p.add_argument("--pi")
    p = leaf(diag, "verify-base", cmd_diag_verify_base)
    p.add_argument("--points", help="tuples separated by ';', entries by ','")
    p.add_argument("--with-d", action="store_true", help="prepend the point D")
    p.add_argument("--certificate")
    _selectors(p)
    p = leaf(diag, "brute-base", cmd_diag_brute_base)
    p.add_argument("--k", type=int, required=True)
    _selectors(p)
    p = leaf(diag, "suborbits", cmd_diag_suborbits)
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--method", choices=("auto", "hol", "direct"), default="auto")
    _selectors(p)

    con = sub.add_parser("construct").add_subparsers(dest="action", required=True)
    p = leaf(con, "k2", cmd_construct_k2)
    p.add_argument("--out", default="full")
    for name, fn in (("partition", cmd_construct_partition), ("base", cmd_construct_base),
                     ("edge", cmd_construct_edge)):
        p = leaf(con, name, fn)
        p.add_argument("--k", type=int, required=True)
        p.add_argument("--ell", type=int, required=True)
        _selectors(p)
        p.add_argument("--all-selectors", action="store_true")

    bnd = sub.add_parser("bounds").add_subparsers(dest="action", required=True)
    for name, fn in (("check", cmd_bounds_check), ("grid", cmd_bounds_grid)):
        p = leaf(bnd, name, fn)
        p.add_argument("--name", required=True)
        p.add_argument("--k", type=int)
        p.add_argument("--k0", type=int)
        p.add_argument("--u", type=int)
        p.add_argument("--m", type=int)
        p.add_argument("--n", type=int)
        p.add_argument("--t", type=int)
        p.add_argument("--ell", type=int)
        p.add_argument("--order", type=int)
        p.add_argument("--out-order", type=int)
        p.add_argument("--h", type=int)
        p.add_argument("--tag", help="A5, A6 or other")
        p.add_argument("--exact-h", action="store_true")
        p.add_argument("--prec", type=int, default=B.DEFAULT_PREC)
        _selectors(p)
        if name == "grid":
            p.add_argument("--k-range")
            p.add_argument("--groups", help="comma-separated group names")
    leaf(bnd, "hT", cmd_bounds_ht)

    prob = sub.add_parser("prob").add_subparsers(dest="action", required=True)
    p = leaf(prob, "qk", cmd_prob_qk)
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--m", type=int)
    p = leaf(prob, "bridge", cmd_prob_bridge)
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--p", help="a measured or exact P_(k+1) as a fraction")
    p.add_argument("--samples", type=int, default=200)

    p = sub.add_parser("verify", help="re-verify a certificate file")
    p.set_defaults(fn=cmd_verify)
    p.add_argument("path")
    _common(p, group=False)
    return ap


def _config(args) -> RunConfig:
    skip = {"fn", "area", "action", "seed", "budget", "threads", "exhaustive", "no_meta",
            "output", "format"}
    params = {k: v for k, v in sorted(vars(args).items()) if k not in skip and k != "group"}
    return RunConfig(command=" ".join(x for x in (args.area, getattr(args, "action", None)) if x),
                     group=getattr(args, "group", None), params=params, seed=args.seed,
                     budget=args.budget, cap=EXHAUSTIVE_CAP if args.exhaustive else DEFAULT_CAP,
                     threads=args.threads, output=args.output, fmt=args.format, meta=not args.no_meta)


def _emit(text: str, cfg: RunConfig):
    if cfg.output:
        Path(cfg.output).write_text(text)
    else:
        sys.stdout.write(text)


def run(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    cfg = _config(args)
    t0 = time.perf_counter()
    try:
        result = args.fn(args, cfg)
    except (UsageError, CatalogError, B.RangeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except GroupOverflowError as exc:
        print(f"cap exceeded: {exc}", file=sys.stderr)
        return 3
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    if isinstance(result, str):
        _emit(result, cfg)
        return 0
    doc = dict(result)
    doc.setdefault("schema_version", SCHEMA_VERSION)
    doc["config"] = _jsonable(asdict(cfg) | {"threads": None, "output": None})
    if cfg.meta:
        doc["meta"] = {"timestamp": time.strftime("%Y-%m-%dT%H:%M:%S%z"),
                       "elapsed_s": round(time.perf_counter() - t0, 3),
                       "version": VERSION, "python": platform.python_version(),
                       "threads": cfg.threads}
    _emit(json.dumps(_jsonable(doc), indent=2, sort_keys=True) + "\n", cfg)
    return 0


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
