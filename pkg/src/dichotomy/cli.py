"""Command-line front end.

Subcommands: ``image``, ``verify-acp``, ``counterexamples``, ``modulus``.
Each writes a JSON report (stdout unless ``--out`` is given).

Exit codes: 0 success, 1 inconclusive/failed verdict, 2 configuration error,
3 consistency error.
"""
from __future__ import annotations

import argparse
import json
import math
import os
import sys
import time
from fractions import Fraction
from typing import Sequence

from . import __version__
from .boundary import (
    Disk,
    DiskComplement,
    FirstQuadrant,
    HalfStrip,
    PuncturedSphere,
    Viewport,
    interior_samples,
)
from .classify import ConsistencyError, ResolutionError, Status, classify_image
from .expr import ParseError
from .haagerup import (
    PrecisionError,
    agree_sig,
    as_exponent,
    check_gamma2,
    check_gamma4,
    check_gamma5,
    check_half_pi_exact,
    check_interior_acp,
    acp_grid,
    counterexample_pairterm,
    counterexample_sum100,
    gamma4_avoidance_scan,
    inequality_star,
    refute_naive_claim,
    SUM100_BOUND,
)
from .maps import DomainError, HaagerupSeries, Joukowski, QuadrantRational, parse_rational
from .modulus import HypothesisError, PremiseError, finmax_check, fta_zero_certificate, minmp_dichotomy
from .report import dumps, report_doc
from .sphere import PrecisionCtx

BITS_ENV = "DICHOTOMY_BITS"
EXIT_OK, EXIT_FAIL, EXIT_CONFIG, EXIT_CONSISTENCY = 0, 1, 2, 3


class ConfigError(ValueError):
    pass


# ------------------------------------------------------------ selectors

MAP_PRESETS = {
    "ex1": ("punctured-sphere", (-2.0, -2.0, 2.0, 2.0)),
    "joukowski": ("punctured-sphere", (-2.0, -2.0, 2.0, 2.0)),
    "ex2": ("first-quadrant", (-3.0, -3.0, 3.0, 3.0)),
    "quadrant": ("first-quadrant", (-3.0, -3.0, 3.0, 3.0)),
    "haagerup": ("half-strip", (-3.0, -4.0, 3.0, 2.0)),
    "identity": ("disk:1", None),
}


def make_map(name: str | None, expr: str | None, p, eps: float):
    if expr is not None:
        try:
            return parse_rational(expr)
        except ParseError as exc:
            raise ConfigError(f"bad expression: {exc}") from None
    if name in ("ex1", "joukowski"):
        return Joukowski()
    if name in ("ex2", "quadrant"):
        return QuadrantRational()
    if name == "haagerup":
        return HaagerupSeries(p, eps)
    if name == "identity":
        return parse_rational("z")
    if name is None:
        raise ConfigError("give --map or --expr")
    # anything else is read as an expression
    try:
        return parse_rational(name)
    except ParseError as exc:
        raise ConfigError(f"unknown map {name!r} ({exc})") from None


def make_domain(spec: str):
    head, _, arg = spec.partition(":")
    try:
        if head == "first-quadrant":
            return FirstQuadrant()
        if head == "punctured-sphere":
            return PuncturedSphere()
        if head == "half-strip":
            return HalfStrip()
        if head == "disk":
            return Disk(float(arg or 1))
        if head == "disk-complement":
            return DiskComplement(float(arg or 1))
    except ValueError as exc:
        raise ConfigError(f"bad domain {spec!r}: {exc}") from None
    raise ConfigError(f"unknown domain {spec!r}")


def _floats(text: str, n: int, what: str) -> tuple[float, ...]:
    try:
        vals = tuple(float(t) for t in str(text).split(","))
    except ValueError:
        raise ConfigError(f"{what} must be {n} comma-separated numbers") from None
    if len(vals) != n or not all(math.isfinite(v) for v in vals):
        raise ConfigError(f"{what} must be {n} comma-separated finite numbers")
    return vals


def _exponent(p) -> Fraction:
    try:
        return as_exponent(p)
    except (ValueError, ZeroDivisionError) as exc:
        raise ConfigError(str(exc)) from None


def _ctx(bits) -> PrecisionCtx:
    try:
        b = int(bits)
        return PrecisionCtx(b)
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"bad mantissa bits {bits!r}: {exc}") from None


def _default_bits() -> int:
    raw = os.environ.get(BITS_ENV)
    if raw is None:
        return 53
    try:
        return int(raw)
    except ValueError:
        raise ConfigError(f"{BITS_ENV} must be an integer, got {raw!r}") from None


# ------------------------------------------------------------ commands


def _component_doc(c):
    return {
        "id": c.id,
        "status": c.status,
        "witnesses": len(c.witness_points),
        "witness_sample": c.witness_points[:3],
        "touches_viewport_edge": c.touches_viewport_edge,
        "area_fraction": c.area_fraction,
        "cells": c.cells,
        "representative": c.representative,
        "forced_by_infinity": c.forced_by_infinity,
    }


def cmd_image(a) -> tuple[dict, str, int]:
    name = a.map
    preset = MAP_PRESETS.get(name or "", (None, None))
    domain_spec = a.domain or preset[0] or "disk:1"
    d = make_domain(domain_spec)
    p = _exponent(a.p[0] if isinstance(a.p, list) else a.p)
    f = make_map(name, a.expr, p, a.eps)
    if a.viewport:
        bounds = _floats(a.viewport, 4, "--viewport")
    elif preset[1]:
        bounds = preset[1]
    else:
        r = getattr(d, "radius", 1.5)
        bounds = (-2 * r, -2 * r, 2 * r, 2 * r)
    try:
        vp = Viewport(*bounds, a.resolution, a.resolution)
    except ValueError as exc:
        raise ConfigError(f"bad viewport: {exc}") from None
    if a.witnesses < 16:
        raise ConfigError("--witnesses must be at least 16")
    # the map must be defined on the closed domain
    for z in interior_samples(d, 64) + [pc.at(t) for pc in d.pieces() for t in (0.0, 0.5)]:
        if not f.contains(z):
            raise ConfigError(f"map {f.name} is not defined on domain {domain_spec}")
    ctx = _ctx(a.bits)
    strict = a.thick_bands == "error" if a.thick_bands else name != "haagerup"
    config = {
        "map": name, "expr": a.expr, "domain": domain_spec, "viewport": list(bounds),
        "resolution": a.resolution, "witnesses": a.witnesses, "mantissa_bits": ctx.mantissa_bits,
        "thick_bands": "error" if strict else "skip",
    }
    if isinstance(f, HaagerupSeries):
        config.update(p=p, eps=a.eps)
    rep = classify_image(f, d, vp, n_witnesses=a.witnesses, ctx=ctx, strict_bands=strict)
    results = {
        "components": [_component_doc(c) for c in rep.components],
        "curves": [
            {"piece": c.piece_id, "runs": len(c.polylines), "points": sum(len(r) for r in c.polylines),
             "low_confidence": c.low_confidence, "max_err": c.max_err}
            for c in rep.curves
        ],
        "witness_stats": rep.witnesses,
        "finite_on_closure": rep.finite_on_closure,
        "low_confidence": rep.low_confidence,
    }
    if a.svg:
        from .svg import render

        with open(a.svg, "w", encoding="utf-8") as fh:
            fh.write(render(rep, f"{f.name} on {domain_spec}"))
    ok = not rep.undetermined
    return report_doc("image", config, results, "decided" if ok else "undetermined", __version__), "", (
        EXIT_OK if ok else EXIT_FAIL
    )


def _check_doc(rep):
    return {
        "name": rep.name,
        "passed": rep.passed,
        "samples": len(rep.points),
        "violations": [(c.z, c.value, c.err) for c in rep.violations],
        "inconclusive": [(c.z, c.value, c.err) for c in rep.inconclusive],
        "min_margin": min(c.margin for c in rep.points),
        "termwise_ok": rep.termwise_ok,
    }


def cmd_verify_acp(a) -> tuple[dict, str, int]:
    ps = [_exponent(p) for p in (a.p if isinstance(a.p, list) else [a.p])]
    ctx = _ctx(a.bits)
    nx, ny = (int(v) for v in _floats(a.grid, 2, "--grid"))
    if nx < 1 or ny < 1:
        raise ConfigError("--grid sizes must be positive")
    if not a.eps > 0:
        raise ConfigError("--eps must be positive")
    config = {"p": ps, "eps": a.eps, "grid": [nx, ny], "mantissa_bits": ctx.mantissa_bits, "star_grid": a.star_grid}
    per_p = []
    all_ok = True
    for p in ps:
        acp = check_interior_acp(p, acp_grid(nx, ny), ctx, a.eps,
                                 f"{nx}x{ny}: Re linear in (0, pi/2), Im log-spaced in [1e-3, 1e3]")
        g4, g5, g2 = (fn(p, None, ctx, a.eps) for fn in (check_gamma4, check_gamma5, check_gamma2))
        half_pi = check_half_pi_exact(p, ctx, max_pairs=16 if not ctx.native else 64)
        naive = refute_naive_claim(p, None, ctx)
        s = a.star_grid
        star_pts = [pt for pt in acp_grid(s, s)]
        star = [inequality_star(p, pt.re, pt.im, a.eps, ctx) for pt in star_pts]
        acp_star = check_interior_acp(p, star_pts, ctx, a.eps)
        agree = sum(
            (st.verdict == "certified") == (q.verdict == "certified-inside") for st, q in zip(star, acp_star.points)
        )
        entry = {
            "p": p,
            "acp": {
                "grid": acp.grid,
                "certified_inside": acp.count("certified-inside"),
                "inconclusive": acp.count("inconclusive"),
                "violations": [(q.z, q.value, q.err) for q in acp.violations],
                "min_distance_over_err": min(q.distance / max(q.err, 1e-300) for q in acp.points),
                "termwise_ok": acp.termwise_ok,
            },
            "gamma4": _check_doc(g4),
            "gamma5": _check_doc(g5),
            "gamma2": _check_doc(g2),
            "half_pi_exact_zero": half_pi,
            "naive_claim_refuted": naive.passed,
            "inequality_star": {
                "points": len(star),
                "certified": sum(st.verdict == "certified" for st in star),
                "min_margin": min(st.margin for st in star),
                "agreement_with_acp": agree / len(star),
            },
        }
        ok = (
            acp.all_certified and g4.passed and g5.passed and g2.passed and half_pi and naive.passed
            and entry["inequality_star"]["certified"] == len(star) and agree == len(star)
        )
        if a.gamma4_scan:
            scan = gamma4_avoidance_scan(p)
            entry["gamma4_avoidance_conjectural"] = {
                "verdict": scan.verdict,
                "slit_bottom": scan.slit_bottom,
                "zero_locus_points": len(scan.zero_locus),
                "min_gap": scan.min_gap,
                "conjectural": True,
            }
        entry["all_certified"] = ok
        all_ok &= ok
        per_p.append(entry)
    doc = report_doc("verify-acp", config, {"per_p": per_p}, "certified" if all_ok else "not certified", __version__)
    return doc, "", EXIT_OK if all_ok else EXIT_FAIL


def cmd_counterexamples(a) -> tuple[dict, str, int]:
    bits = int(a.bits) if a.bits is not None else 212
    ctx = _ctx(bits)
    if bits < 212:
        raise ConfigError(f"counterexample needs at least 212 mantissa bits, got {bits}")
    try:
        s1 = counterexample_sum100(ctx)
        s2 = counterexample_sum100(PrecisionCtx(2 * bits))
    except PrecisionError as exc:
        raise ConfigError(str(exc)) from None
    stable = agree_sig(s1.excess, s2.excess, 3)
    meets = s1.excess - s1.excess_err >= SUM100_BOUND
    pair = [counterexample_pairterm(PrecisionCtx(b)) for b in (53, bits)]
    real_axis = counterexample_pairterm(PrecisionCtx(53), Fraction(0))
    results = {
        "sum100": {
            "z": s1.z, "p": s1.p, "pairs": 100, "value": s1.value, "arg": str(s1.arg_mp),
            "excess": s1.excess, "excess_err": s1.excess_err, "excess_doubled_bits": s2.excess,
            "stable_3_digits": stable, "bound": SUM100_BOUND, "meets_bound": meets, "outside_sector": s1.outside,
        },
        "pairterm": [
            {"z": r.z, "p": r.p, "mantissa_bits": r.mantissa_bits, "value": r.value, "arg": r.arg,
             "outside_sector": r.outside}
            for r in pair
        ],
        "pairterm_real_axis": {"z": real_axis.z, "value": real_axis.value, "arg": real_axis.arg,
                               "negative_real": real_axis.value.real < 0 and real_axis.value.imag == 0},
    }
    ok = stable and meets and s1.outside and all(r.outside for r in pair)
    config = {"mantissa_bits": bits}
    return report_doc("counterexamples", config, results, "reproduced" if ok else "not reproduced", __version__), "", (
        EXIT_OK if ok else EXIT_FAIL
    )


def cmd_modulus(a) -> tuple[dict, str, int]:
    ctx = _ctx(a.bits)
    chosen = [x for x in (a.fta, a.minmp, a.finmax) if x is not None]
    if len(chosen) != 1:
        raise ConfigError("give exactly one of --fta, --minmp, --finmax")
    if a.fta is not None:
        if a.R is None or not a.R > 0:
            raise ConfigError("--fta needs a positive --R")
        f = make_map(None, a.fta, None, 1e-9)
        if f.rational.den.degree > 0 or f.rational.num.degree < 1:
            raise ConfigError("--fta needs a nonconstant polynomial")
        config = {"fta": a.fta, "R": a.R, "mantissa_bits": ctx.mantissa_bits}
        try:
            r = fta_zero_certificate(f, a.R, ctx=ctx)
        except PremiseError as exc:
            raise ConfigError(str(exc)) from None
        results = {"R": r.R, "abs_f0": r.f0, "boundary_min": r.boundary_min, "tol": r.tol,
                   "zero_status": r.status, "viewport": [r.viewport.xmin, r.viewport.ymin, r.viewport.xmax, r.viewport.ymax]}
        ok = r.passed
        return report_doc("modulus", config, results, "pass" if ok else "fail", __version__), "", (
            EXIT_OK if ok else EXIT_FAIL
        )
    which = "minmp" if a.minmp is not None else "finmax"
    f = make_map(a.minmp or a.finmax, None, None, 1e-9)
    d = make_domain(a.domain or "disk:1")
    config = {which: a.minmp or a.finmax, "domain": a.domain or "disk:1", "samples": a.samples,
              "mantissa_bits": ctx.mantissa_bits}
    try:
        r = minmp_dichotomy(f, d, a.samples, ctx=ctx) if which == "minmp" else finmax_check(f, d, n_interior=a.samples, ctx=ctx)
    except HypothesisError as exc:
        raise ConfigError(str(exc)) from None
    ok = bool(r.passed)
    verdict = r.branch if which == "minmp" else ("pass" if ok else "fail")
    return report_doc("modulus", config, {"report": r}, verdict, __version__), "", EXIT_OK if ok else EXIT_FAIL


# ------------------------------------------------------------ parsing


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="dichotomy", description=__doc__.split("\n\n")[0])
    ap.add_argument("--version", action="version", version=f"dichotomy {__version__}")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="JSON file whose keys mirror the long options")
    common.add_argument("--bits", type=int, default=None, help=f"mantissa bits (default ${BITS_ENV} or 53)")
    common.add_argument("--out", help="write the JSON report here instead of stdout")
    common.add_argument("--timing", action="store_true", help="add wall-clock timing (breaks byte-identity)")
    sub = ap.add_subparsers(dest="command", required=True)

    im = sub.add_parser("image", parents=[common], help="trace, classify and draw f(D)")
    im.add_argument("--map", help="ex1|joukowski, ex2|quadrant, haagerup, identity, or an expression")
    im.add_argument("--expr", help="rational expression in z")
    im.add_argument("--domain", help="first-quadrant, punctured-sphere, half-strip, disk:R, disk-complement:R")
    im.add_argument("--viewport", help="xmin,ymin,xmax,ymax")
    im.add_argument("--resolution", type=int, default=256)
    im.add_argument("--witnesses", type=int, default=4000)
    im.add_argument("--p", default="1.9")
    im.add_argument("--eps", type=float, default=1e-9)
    im.add_argument("--thick-bands", choices=["error", "skip"], default=None,
                    help="witness deep in a thick curve band: fail (default) or skip (default for haagerup)")
    im.add_argument("--svg", help="SVG output path")
    im.set_defaults(func=cmd_image)

    va = sub.add_parser("verify-acp", parents=[common], help="certify the boundary and interior sector claims")
    va.add_argument("--p", action="append", default=None, help="exponent in (1,2); repeatable")
    va.add_argument("--eps", type=float, default=1e-9)
    va.add_argument("--grid", default="32,32")
    va.add_argument("--star-grid", type=int, default=16)
    va.add_argument("--gamma4-scan", action="store_true", help="add the exploratory slit-avoidance scan")
    va.set_defaults(func=cmd_verify_acp)

    ce = sub.add_parser("counterexamples", parents=[common], help="reproduce the two counterexamples")
    ce.set_defaults(func=cmd_counterexamples)

    mo = sub.add_parser("modulus", parents=[common], help="max/min modulus alternatives")
    mo.add_argument("--fta", help="polynomial expression; show 0 is attained in |z|<R")
    mo.add_argument("--R", type=float)
    mo.add_argument("--minmp", help="map for the minimum-modulus dichotomy")
    mo.add_argument("--finmax", help="map for the finite maximum-modulus check")
    mo.add_argument("--domain")
    mo.add_argument("--samples", type=int, default=2000)
    mo.set_defaults(func=cmd_modulus)
    return ap


def _apply_config(ap: argparse.ArgumentParser, argv: Sequence[str]) -> argparse.Namespace:
    args = ap.parse_args(argv)
    if not args.config:
        return args
    try:
        with open(args.config, encoding="utf-8") as fh:
            cfg = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise ConfigError(f"cannot read config {args.config}: {exc}") from None
    if not isinstance(cfg, dict):
        raise ConfigError("config file must hold a JSON object")
    known = vars(args)
    for key, value in cfg.items():
        k = key.replace("-", "_")
        if k not in known or k in ("func", "command", "config"):
            raise ConfigError(f"unknown config key {key!r}")
    sub = ap._subparsers._group_actions[0].choices[args.command]
    sub.set_defaults(**{k.replace("-", "_"): v for k, v in cfg.items()})
    # command-line flags still win over the file
    return ap.parse_args(argv)


def main(argv: Sequence[str] | None = None) -> int:
    ap = build_parser()
    argv = list(sys.argv[1:] if argv is None else argv)
    t0 = time.perf_counter()
    try:
        args = _apply_config(ap, argv)
        # counterexamples keep their own 212-bit default unless the env var is set
        if args.bits is None and (args.command != "counterexamples" or BITS_ENV in os.environ):
            args.bits = _default_bits()
        if args.command == "verify-acp" and args.p is None:
            args.p = ["1.1", "1.5", "1.9"]
        doc, _, code = args.func(args)
    except SystemExit as exc:
        return EXIT_CONFIG if exc.code not in (0, None) else 0
    except (ConfigError, DomainError) as exc:
        print(f"dichotomy: configuration error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except ConsistencyError as exc:
        print(f"dichotomy: consistency error: {exc}", file=sys.stderr)
        return EXIT_CONSISTENCY
    except ResolutionError as exc:
        print(f"dichotomy: {exc}", file=sys.stderr)
        return EXIT_FAIL
    if args.timing:
        doc["timing"] = {"wall_seconds": time.perf_counter() - t0}
    text = dumps(doc)
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return code


if __name__ == "__main__":
    sys.exit(main())
