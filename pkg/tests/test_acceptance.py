"""Acceptance criteria 1-9, one PASS/FAIL line each.

Run with ``pytest tests/test_acceptance.py -s`` (lines are printed even
without ``-s``).
"""
import math
import time
from fractions import Fraction

import numpy as np
import pytest

from dichotomy.boundary import Disk, DiskComplement, FirstQuadrant, HalfStrip, PuncturedSphere, Viewport
from dichotomy.classify import Status, classify_image, expect_outcome
from dichotomy.expr import BinOp, Neg, Num, ParseError, Pow, Var, parse, pretty
from dichotomy.haagerup import (
    SUM100_BOUND,
    acp_grid,
    agree_sig,
    check_gamma2,
    check_gamma4,
    check_gamma5,
    check_half_pi_exact,
    check_interior_acp,
    counterexample_pairterm,
    counterexample_sum100,
    default_ps,
    inequality_star,
)
from dichotomy.maps import HaagerupSeries, Joukowski, QuadrantRational, parse_rational
from dichotomy.modulus import (
    finmax_check,
    fta_zero_certificate,
    minmp_dichotomy,
    random_polynomial,
    root_radius,
)
from dichotomy.sphere import DOUBLE, PrecisionCtx

from conftest import random_rational

BITS212 = PrecisionCtx(212)
BITS424 = PrecisionCtx(424)


def _verdict(announce, n, ok, detail):
    announce(f"{'PASS' if ok else 'FAIL'} criterion {n}: {detail}")
    assert ok, detail


# ---------------------------------------------------------------- 1


def test_criterion_1_sum100(announce):
    t0 = time.perf_counter()
    lo = counterexample_sum100(BITS212)
    hi = counterexample_sum100(BITS424)
    dt = time.perf_counter() - t0
    mp = BITS212.mp
    bound = -(mp.pi * mp.mpf(19) / 20) * (1 + mp.mpf("3.5e-18"))
    ok = (
        lo.outside
        and lo.arg_mp < bound
        and lo.excess - lo.excess_err >= SUM100_BOUND
        and agree_sig(lo.excess, hi.excess, 3)
        and dt < 1.0
    )
    _verdict(
        announce, 1,
        ok,
        f"excess {lo.excess:.6e} (+-{lo.excess_err:.1e}) at 212 bits, {hi.excess:.6e} at 424 bits, {dt:.3f}s",
    )


# ---------------------------------------------------------------- 2


def test_criterion_2_pairterm(announce):
    t0 = time.perf_counter()
    a = counterexample_pairterm(DOUBLE)
    b = counterexample_pairterm(BITS212)
    dt = time.perf_counter() - t0
    ok = a.outside and b.outside and dt < 1.0
    _verdict(announce, 2, ok, f"w = {b.value:.6g}, arg {b.arg:.7f}, outside at 53 and 212 bits, {dt:.3f}s")


# ---------------------------------------------------------------- 3


def test_criterion_3_acp_grid(announce):
    t0 = time.perf_counter()
    reports = [check_interior_acp(p, eps=1e-9) for p in default_ps()]
    dt = time.perf_counter() - t0
    counts = [r.count("certified-inside") for r in reports]
    viol = sum(len(r.violations) for r in reports)
    ok = all(r.all_certified and len(r.points) == 1024 for r in reports) and viol == 0 and dt < 30
    _verdict(announce, 3, ok, f"certified {counts} of 1024 per p, {viol} violations, {dt:.2f}s")


# ---------------------------------------------------------------- 4


def test_criterion_4_boundary(announce):
    rows = []
    ok = True
    for p in default_ps():
        g4, g5, g2 = check_gamma4(p), check_gamma5(p), check_gamma2(p)
        exact = check_half_pi_exact(p) and check_half_pi_exact(p, BITS212, max_pairs=16, max_order=4)
        sizes = (len(g4.points), len(g5.points), len(g2.points)) == (64, 64, 64)
        ok &= g4.passed and g5.passed and g2.passed and exact and sizes
        rows.append(f"p={p}: G4 {g4.passed} G5 {g5.passed} G2 {g2.passed} f(pi/2)=0 {exact}")
    _verdict(announce, 4, ok, "; ".join(rows))


# ---------------------------------------------------------------- 5


def test_criterion_5_star(announce):
    total = agree = 0
    min_margin = math.inf
    for p in default_ps():
        grid = acp_grid(16, 16)
        acp = check_interior_acp(p, grid)
        for z, q in zip(grid, acp.points):
            s = inequality_star(p, float(z.re), float(z.im))
            total += 1
            min_margin = min(min_margin, s.margin)
            agree += (s.verdict == "certified") == (q.verdict == "certified-inside") and s.margin > 0
    ok = agree == total and min_margin > 0
    _verdict(announce, 5, ok, f"{agree}/{total} agree, min margin {min_margin:.3e}")


# ---------------------------------------------------------------- 6


def _statuses(rep):
    return {c.id: (c.representative, c.status) for c in rep.components}


def _invariant(f, d, vp, base):
    """Same status at every base representative under 2x resolution and 2x witnesses."""
    for other in (
        classify_image(f, d, vp.refined(2), n_witnesses=4000),
        classify_image(f, d, vp, n_witnesses=8000),
    ):
        for c in base.components:
            if other.status_at(c.representative) is not c.status:
                return False
    return True


def test_criterion_6_oracles(announce):
    cases = [
        ("ex1 [-2,2]^2", Joukowski(), PuncturedSphere(), Viewport.square(2), lambda w: Status.FILLED),
        ("ex1 [-10,10]^2", Joukowski(), PuncturedSphere(), Viewport.square(10), lambda w: Status.FILLED),
        (
            "ex2 [-3,3]^2",
            QuadrantRational(),
            FirstQuadrant(),
            Viewport.square(3),
            lambda w: Status.EXCLUDED if w.imag > 0 else Status.FILLED,
        ),
        (
            "identity on disk",
            parse_rational("z"),
            Disk(1.0),
            Viewport.square(2),
            lambda w: Status.FILLED if abs(w) < 1 else Status.EXCLUDED,
        ),
    ]
    rows, ok = [], True
    for name, f, d, vp, want in cases:
        rep = classify_image(f, d, vp)
        out = expect_outcome(rep.components, want)
        seen = {s.value for _, s in _statuses(rep).values()}
        inv = _invariant(f, d, vp, rep)
        ok &= out.passed is True and inv
        rows.append(f"{name}: {sorted(seen)} match={out.passed} invariant={inv}")
    # the two expected statuses of ex2 both occur
    rep = classify_image(QuadrantRational(), FirstQuadrant(), Viewport.square(3))
    ok &= rep.status_at(1.5j) is Status.EXCLUDED and rep.status_at(-1.5j) is Status.FILLED
    _verdict(announce, 6, ok, "; ".join(rows))


# ---------------------------------------------------------------- 7


def _dp_consistent(f, d, vp, strict=True):
    base = classify_image(f, d, vp, n_witnesses=4000, strict_bands=strict)
    more = classify_image(f, d, vp, n_witnesses=16000, strict_bands=strict)
    by_id = {c.id: c for c in more.components}
    for c in base.components:
        if c.status is Status.EXCLUDED and by_id[c.id].witness_points:
            return base, False
    return base, True


def test_criterion_7_dp_consistency(announce):
    shipped = [
        ("ex1", Joukowski(), PuncturedSphere(), Viewport.square(3), True),
        ("ex2", QuadrantRational(), FirstQuadrant(), Viewport.square(3), True),
        ("haagerup", HaagerupSeries(Fraction(19, 10)), HalfStrip(), Viewport(-3, -4, 3, 2), False),
        ("identity/disk", parse_rational("z"), Disk(1.0), Viewport.square(2), True),
        ("identity/disk-complement", parse_rational("z"), DiskComplement(1.0), Viewport.square(2), True),
    ]
    rows, ok = [], True
    for name, f, d, vp, strict in shipped:
        base, good = _dp_consistent(f, d, vp, strict)
        ok &= good
        if base.finite_on_closure:
            forced = [c for c in base.components if c.touches_viewport_edge]
            ok &= bool(forced) and all(c.forced_by_infinity and c.status is Status.EXCLUDED for c in forced)
        rows.append(f"{name} {'ok' if good else 'BROKEN'}")
    rng = np.random.default_rng(20240607)
    n_forced = 0
    for _ in range(10):
        f, _poles = random_rational(rng)
        d = Disk(1.0)
        sup = max(abs(f.evaluate(complex(math.cos(t), math.sin(t))).value.to_complex()) for t in np.linspace(0, 2 * math.pi, 512))
        vp = Viewport.square(1.5 * sup + 0.5)
        # random boundary images may overlap themselves into thick bands
        base, good = _dp_consistent(f, d, vp, strict=False)
        ok &= good and base.finite_on_closure
        edge = [c for c in base.components if c.touches_viewport_edge]
        if edge and all(c.forced_by_infinity and c.status is Status.EXCLUDED for c in edge):
            n_forced += 1
    ok &= n_forced == 10
    rows.append(f"random rational maps: 10 consistent, FinCP forced in {n_forced}/10")
    _verdict(announce, 7, ok, "; ".join(rows))


# ---------------------------------------------------------------- 8


def test_criterion_8_modulus(announce):
    rng = np.random.default_rng(8)
    fin_ok = 0
    for k in range(50):
        f, _ = random_polynomial(rng, 1 + k % 6)
        fin_ok += finmax_check(f, Disk(1.0)).passed
    ident = parse_rational("z")
    fill = minmp_dichotomy(ident, Disk(1.0))
    cont = minmp_dichotomy(ident, DiskComplement(1.0))
    fta = fta_zero_certificate(parse_rational("z^2+1"), 2.0).passed
    fta_ok = 0
    for k in range(20):
        f, coeffs = random_polynomial(rng, 1 + k % 6)
        fta_ok += fta_zero_certificate(f, root_radius(coeffs)).passed
    ok = fin_ok == 50 and fill.branch == "fill" and fill.passed and cont.branch == "containment" and fta and fta_ok == 20
    _verdict(
        announce, 8,
        ok,
        f"finmax {fin_ok}/50, minmp disk {fill.branch}, complement {cont.branch}, FTA z^2+1 {fta}, random FTA {fta_ok}/20",
    )


# ---------------------------------------------------------------- 9


def random_ast(rng, depth=0):
    r = rng.random()
    if depth >= 4 or r < 0.25:
        k = rng.integers(0, 3)
        if k == 0:
            return Var()
        value = Fraction(int(rng.integers(1, 1000)), 10 ** int(rng.integers(0, 3)))
        return Num(value, 0) if k == 1 else Num(0, value)
    if r < 0.35:
        return Neg(random_ast(rng, depth + 1))
    if r < 0.45:
        return Pow(random_ast(rng, depth + 1), int(rng.integers(-3, 4)))
    op = "+-*/"[int(rng.integers(0, 4))]
    return BinOp(op, random_ast(rng, depth + 1), random_ast(rng, depth + 1))


def loud(node):
    """Fully parenthesized rendering, independent of the pretty printer."""
    if isinstance(node, Var):
        return "z"
    if isinstance(node, Num):
        return f"{float(node.im)!r}i" if node.im else repr(float(node.re))
    if isinstance(node, Neg):
        return f"(-{loud(node.operand)})"
    if isinstance(node, Pow):
        return f"({loud(node.base)})^{node.exponent}"
    return f"({loud(node.left)} {node.op} {loud(node.right)})"


MALFORMED = [
    ("", 0),
    ("z +", 3),
    ("(z+1", 4),
    ("z^1.5", 2),
    ("z $ 2", 2),
    ("1/0", 1),
    ("0^-1", 1),
    ("z)", 1),
    ("2 z", 2),
    ("z^", 2),
    ("**z", 0),
    ("1/(2-2)", 1),
    ("sin(z)", 0),
    ("z^^2", 2),
    ("3 i", 2),
]


def test_criterion_9_parser(announce):
    rng = np.random.default_rng(9)
    good = tried = 0
    while good < 200:
        tried += 1
        ast = random_ast(rng)
        try:
            first = parse(loud(ast))
        except ParseError as exc:
            # a constant subexpression that is exactly zero under a divisor
            assert "constant zero" in exc.message
            continue
        assert first == ast
        assert parse(pretty(first)) == first
        good += 1
    rejected = 0
    for src, offset in MALFORMED:
        try:
            parse(src)
        except ParseError as exc:
            rejected += exc.offset == offset
    ok = good == 200 and rejected == len(MALFORMED)
    _verdict(announce, 9, ok, f"{good} round-trips ({tried} generated), {rejected}/{len(MALFORMED)} malformed rejected at the right offset")
