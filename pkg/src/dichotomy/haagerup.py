"""Certified checks of the argument containment for the Haagerup series.

Everything here is a strict inequality tested against the full error radius
(Euler-Maclaurin tail bound plus modeled rounding).  A check whose margin does
not clear the radius is reported ``inconclusive``, never passed.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

import numpy as np
from scipy import optimize

from .maps import HaagerupSeries
from .series import _tail_parts, choose_truncation, em_coefficients, rounding_radius
from .sphere import (
    DOUBLE,
    AngleSector,
    PrecisionCtx,
    XPoint,
    _pow_neg_parts,
    arg_of,
    in_sector,
    sector_distance,
)

__all__ = [
    "as_exponent",
    "default_ps",
    "PointCheck",
    "CheckReport",
    "AcpPoint",
    "AcpReport",
    "StarResult",
    "CounterexampleResult",
    "PrecisionError",
    "acp_grid",
    "gamma2_samples",
    "gamma4_samples",
    "gamma5_samples",
    "check_gamma2",
    "check_gamma4",
    "check_gamma5",
    "check_interior_acp",
    "check_half_pi_exact",
    "inequality_star",
    "counterexample_sum100",
    "counterexample_pairterm",
    "refute_naive_claim",
    "gamma4_avoidance_scan",
    "agree_sig",
]

CERTIFIED = "certified"
VIOLATION = "violation"
INCONCLUSIVE = "inconclusive"

DEFAULT_PS = ("1.1", "1.5", "1.9")


class PrecisionError(ValueError):
    """The requested working precision cannot resolve the claim."""


def as_exponent(p) -> Fraction:
    """Exact exponent: decimal strings and floats are read as written."""
    if isinstance(p, Fraction):
        q = p
    elif isinstance(p, float):
        q = Fraction(repr(p))
    else:
        q = Fraction(str(p))
    if not 1 < q < 2:
        raise ValueError(f"p must lie in (1, 2), got {p}")
    return q


def default_ps() -> list[Fraction]:
    return [as_exponent(p) for p in DEFAULT_PS]


def _slack(value_abs: float, ctx: PrecisionCtx) -> float:
    # rounding in the predicate itself (a few ulps of the value)
    return 8 * ctx.unit_roundoff * value_abs


@dataclass
class PointCheck:
    z: complex
    value: complex
    err: float
    margin: float
    verdict: str


@dataclass
class CheckReport:
    name: str
    p: Fraction
    mantissa_bits: int
    points: list[PointCheck]
    termwise_ok: bool | None = None
    notes: list[str] = field(default_factory=list)

    @property
    def violations(self) -> list[PointCheck]:
        return [c for c in self.points if c.verdict == VIOLATION]

    @property
    def inconclusive(self) -> list[PointCheck]:
        return [c for c in self.points if c.verdict == INCONCLUSIVE]

    @property
    def passed(self) -> bool:
        return all(c.verdict == CERTIFIED for c in self.points) and self.termwise_ok is not False


def _verdict(margin: float, err: float) -> str:
    if margin > err:
        return CERTIFIED
    if margin < -err:
        return VIOLATION
    return INCONCLUSIVE


def _evaluate(p, points, eps, ctx):
    return HaagerupSeries(p, eps).evaluate_many(points, ctx)


# ------------------------------------------------------------ sample sets


def gamma4_samples(n: int = 64) -> list[XPoint]:
    """``pi/2 + iy``: the corner ``y = 0`` and ``n - 1`` log-spaced heights."""
    ys = [0.0] + list(np.geomspace(1e-3, 1e3, n - 1))
    return [XPoint(math.pi / 2, float(y)) for y in ys]


def gamma5_samples(n: int = 64) -> list[XPoint]:
    return [XPoint((j + 1) / (n + 1) * math.pi / 2, 0.0) for j in range(n)]


def gamma2_samples(n: int = 64) -> list[XPoint]:
    return [XPoint(0.0, float(y)) for y in np.geomspace(1e-3, 1e3, n)]


def acp_grid(nx: int = 32, ny: int = 32, ylo: float = 1e-3, yhi: float = 1e3) -> list[XPoint]:
    """Linear in ``Re`` over the open interval, logarithmic in ``Im``; row-major in ``Im``."""
    xs = [(j + 1) / (nx + 1) * math.pi / 2 for j in range(nx)]
    ys = np.geomspace(ylo, yhi, ny)
    return [XPoint(x, float(y)) for y in ys for x in xs]


# ------------------------------------------------------------ boundary pieces


def check_gamma4(p, samples: Sequence[XPoint] | None = None, ctx: PrecisionCtx = DOUBLE, eps: float = 1e-9) -> CheckReport:
    """``|Re f| <= err`` and ``Im f <= err`` on the ray ``Re z = pi/2``.

    The margin reported is the smaller of ``err - |Re f|`` and ``err - Im f``
    shifted so that ``certified`` means both predicates hold.
    """
    p = as_exponent(p)
    samples = gamma4_samples() if samples is None else [XPoint.of(z) for z in samples]
    out = []
    for z, r in zip(samples, _evaluate(p, samples, eps, ctx)):
        re, im = float(r.value.re), float(r.value.im)
        ok = abs(re) <= r.err_radius and im <= r.err_radius
        margin = min(r.err_radius - abs(re), r.err_radius - im)
        out.append(PointCheck(z.to_complex(), complex(re, im), r.err_radius, margin, CERTIFIED if ok else VIOLATION))
    return CheckReport("gamma4", p, ctx.mantissa_bits, out)


def _termwise_gamma5(p, ts, ctx, kmax=10) -> bool:
    pr = ctx.real(p)
    for t in ts:
        t = ctx.real(t)
        for k in range(kmax + 1):
            a, _ = _pow_neg_parts(k * ctx.pi + t, ctx.real(0), pr, ctx)
            b, _ = _pow_neg_parts(k * ctx.pi + ctx.pi - t, ctx.real(0), pr, ctx)
            if not a - b > _slack(float(a), ctx):
                return False
    return True


def check_gamma5(p, samples: Sequence[XPoint] | None = None, ctx: PrecisionCtx = DOUBLE, eps: float = 1e-9) -> CheckReport:
    """``|Im f| <= err`` and ``Re f > err`` on ``(0, pi/2)``, plus the termwise domination."""
    p = as_exponent(p)
    samples = gamma5_samples() if samples is None else [XPoint.of(z) for z in samples]
    out = []
    for z, r in zip(samples, _evaluate(p, samples, eps, ctx)):
        re, im = float(r.value.re), float(r.value.im)
        if abs(im) > r.err_radius:
            verdict = VIOLATION
        else:
            verdict = _verdict(re - r.err_radius, r.err_radius) if re > r.err_radius else (
                VIOLATION if re < -r.err_radius else INCONCLUSIVE
            )
            verdict = CERTIFIED if re > r.err_radius else verdict
        out.append(PointCheck(z.to_complex(), complex(re, im), r.err_radius, re - r.err_radius, verdict))
    termwise = _termwise_gamma5(p, [z.re for z in samples], ctx)
    return CheckReport("gamma5", p, ctx.mantissa_bits, out, termwise)


def check_gamma2(p, samples: Sequence[XPoint] | None = None, ctx: PrecisionCtx = DOUBLE, eps: float = 1e-9) -> CheckReport:
    """``Re f < 0`` and ``Im f < Re f * tan(-pi p/2)`` on the imaginary axis.

    Together these say ``-pi p/2 < arg f < -pi/2``.  The margin is the smaller
    of the two slacks, each net of its own error propagation.
    """
    p = as_exponent(p)
    samples = gamma2_samples() if samples is None else [XPoint.of(z) for z in samples]
    t = math.tan(-math.pi * float(p) / 2)
    out = []
    for z, r in zip(samples, _evaluate(p, samples, eps, ctx)):
        re, im = float(r.value.re), float(r.value.im)
        e = r.err_radius + _slack(math.hypot(re, im), ctx)
        m1 = -re - e
        m2 = (re * t - im) - e * (1 + abs(t))
        margin = min(m1, m2)
        if margin > 0:
            verdict = CERTIFIED
        elif -re < -e or (re * t - im) < -e * (1 + abs(t)):
            verdict = VIOLATION
        else:
            verdict = INCONCLUSIVE
        out.append(PointCheck(z.to_complex(), complex(re, im), r.err_radius, margin, verdict))
    return CheckReport("gamma2", p, ctx.mantissa_bits, out)


def check_half_pi_exact(p, ctx: PrecisionCtx = DOUBLE, max_pairs: int = 64, max_order: int = 8) -> bool:
    """The raw truncated sum at ``pi/2`` is exactly zero for every ``(N, m)``."""
    from .series import haagerup_raw

    p = as_exponent(p)
    x, y = ctx.pi / 2, ctx.real(0)
    for order in (0, 1, max_order):
        coeffs = em_coefficients(p, order, ctx)
        for n in range(1, max_pairs + 1):
            re, im, _ = haagerup_raw(x, y, p, n, coeffs, ctx)
            if re != 0 or im != 0:
                return False
            # and the bare partial sum, without tails
            sre = sim = ctx.real(0)
            pr = ctx.real(p)
            for k in range(n):
                a, ai = _pow_neg_parts(k * ctx.pi + x, y, pr, ctx)
                b, bi = _pow_neg_parts(k * ctx.pi + (ctx.pi - x), -y, pr, ctx)
                sre += a - b
                sim += ai - bi
            if sre != 0 or sim != 0:
                return False
    return True


# ------------------------------------------------------------ interior


@dataclass
class AcpPoint:
    z: complex
    value: complex
    err: float
    distance: float
    verdict: str


@dataclass
class AcpReport:
    p: Fraction
    grid: str
    mantissa_bits: int
    eps: float
    points: list[AcpPoint]
    termwise_ok: bool

    def count(self, verdict: str) -> int:
        return sum(1 for q in self.points if q.verdict == verdict)

    @property
    def all_certified(self) -> bool:
        return self.termwise_ok and all(q.verdict == "certified-inside" for q in self.points)

    @property
    def violations(self) -> list[AcpPoint]:
        return [q for q in self.points if q.verdict == VIOLATION]


def _termwise_acp(p, points, ctx, kmax=10) -> bool:
    """``Im (k pi + z)^-p < 0`` and ``Im -(k pi + pi - z)^-p < 0`` for ``k <= kmax``."""
    pr = ctx.real(p)
    for z in points:
        x, y = ctx.real(z.re), ctx.real(z.im)
        for k in range(kmax + 1):
            _, a = _pow_neg_parts(k * ctx.pi + x, y, pr, ctx)
            _, b = _pow_neg_parts(k * ctx.pi + ctx.pi - x, -y, pr, ctx)
            if not (a < 0 and -b < 0):
                return False
    return True


def check_interior_acp(
    p,
    grid: Sequence[XPoint] | None = None,
    ctx: PrecisionCtx = DOUBLE,
    eps: float = 1e-9,
    grid_label: str | None = None,
) -> AcpReport:
    """Certify ``Im f < 0`` and ``f`` strictly inside the sector at every grid point."""
    p = as_exponent(p)
    if grid is None:
        grid = acp_grid()
        grid_label = grid_label or "32x32: Re linear in (0, pi/2), Im log-spaced in [1e-3, 1e3]"
    grid = [XPoint.of(z) for z in grid]
    for z in grid:
        if not (0 < z.re < math.pi / 2 and z.im > 0):
            raise ValueError(f"grid point {z!r} is not strictly inside the half-strip")
    sector = AngleSector(p)
    out = []
    for z, r in zip(grid, _evaluate(p, grid, eps, ctx)):
        e = r.err_radius + _slack(abs(r.value.to_complex()), ctx)
        d = float(sector_distance(r.value, sector, ctx))
        im = float(r.value.im)
        if d > e and im < -e:
            verdict = "certified-inside"
        elif d < -e or im > e:
            verdict = VIOLATION
        else:
            verdict = INCONCLUSIVE
        out.append(AcpPoint(z.to_complex(), r.value.to_complex(), r.err_radius, d, verdict))
    spots = grid[:: max(1, len(grid) // 64)]
    label = grid_label or f"{len(grid)} supplied points"
    return AcpReport(p, label, ctx.mantissa_bits, eps, out, _termwise_acp(p, spots, ctx))


# ------------------------------------------------------------ inequality (*)


@dataclass
class StarResult:
    p: Fraction
    x: float
    y: float
    lhs: float
    rhs: float
    margin: float
    err: float
    verdict: str


def _arccot(t, ctx):
    return ctx.atan2(ctx.real(1), t)  # values in (0, pi)


def inequality_star(p, x, y, eps: float = 1e-9, ctx: PrecisionCtx = DOUBLE) -> StarResult:
    """Both sides of the sine-weighted series inequality, with ``margin = lhs - rhs``.

    The heads are summed literally; each tail beyond ``N`` is the
    Euler-Maclaurin tail of the matching power series rotated by
    ``exp(i pi p/2)``, so each side is within ``eps/2`` of its true value
    before rounding.  ``certified`` needs ``margin > 2 eps`` and more than the
    total error.
    """
    p = as_exponent(p)
    xf, yf = float(x), float(y)
    if not (0 < xf < math.pi / 2 and yf > 0):
        raise ValueError("need 0 < x < pi/2 and y > 0")
    trunc = choose_truncation(p, eps)
    n = trunc.pairs
    pr = ctx.real(p)
    x, y = ctx.real(x), ctx.real(y)
    lhs = rhs = ctx.real(0)
    acc = 0.0
    for k in range(n):
        a = k * ctx.pi + x
        b = k * ctx.pi + ctx.pi - x
        tl = ctx.sin(pr * _arccot(y / a, ctx)) * ctx.exp(-pr / 2 * ctx.log(a * a + y * y))
        tr = ctx.sin(pr * _arccot(-y / b, ctx)) * ctx.exp(-pr / 2 * ctx.log(b * b + y * y))
        lhs += tl
        rhs += tr
        acc += float(abs(tl) + abs(tr))
    coeffs = em_coefficients(p, trunc.order, ctx)
    theta = ctx.pi * pr / 2
    s, c = ctx.sin(theta), ctx.cos(theta)
    t_re, t_im, t_acc = _tail_parts(x, y, pr, n, coeffs, ctx)
    u_re, u_im, u_acc = _tail_parts(ctx.pi - x, -y, pr, n, coeffs, ctx)
    lhs += t_re * s + t_im * c
    rhs += u_re * s + u_im * c
    acc += float(t_acc + u_acc)
    rounding = rounding_radius(acc, x, y, n, trunc.order, ctx)
    err = trunc.tail_bound + rounding
    margin = lhs - rhs
    threshold = max(2 * eps, err)
    if margin > threshold:
        verdict = CERTIFIED
    elif margin < -err:
        verdict = VIOLATION
    else:
        verdict = INCONCLUSIVE
    return StarResult(p, xf, yf, float(lhs), float(rhs), float(margin), float(err), verdict)


# ------------------------------------------------------------ counterexamples


@dataclass
class CounterexampleResult:
    name: str
    z: str
    p: Fraction
    value: complex
    arg: float
    excess: float
    excess_err: float
    outside: bool
    mantissa_bits: int
    arg_mp: object = field(default=None, repr=False)
    excess_mp: object = field(default=None, repr=False)


def _exact_point(re: Fraction, im: Fraction, ctx: PrecisionCtx):
    return ctx.real(re), ctx.real(im)


def _excess(S_re, S_im, p, ctx):
    arg = arg_of(XPoint(S_re, S_im), ctx)
    excess = arg / (-ctx.pi * ctx.real(p) / 2) - 1
    return arg, excess


SUM100_Z = (Fraction(1, 10**30), Fraction(1, 10**6))
PAIRTERM_IM = Fraction(1, 100)
COUNTEREXAMPLE_P = Fraction(19, 10)
SUM100_BOUND = 3.5e-18


def counterexample_sum100(ctx: PrecisionCtx, pairs: int = 100) -> CounterexampleResult:
    """Argument of the first ``pairs`` differences at ``z = 1e-30 + 1e-6 i``, ``p = 19/10``.

    Refuses to run below 212 bits: the decision margin sits near ``1e-18``
    relative while the leading term is about ``1e11``.
    """
    if ctx.mantissa_bits < 212:
        raise PrecisionError(f"counterexample needs at least 212 mantissa bits, got {ctx.mantissa_bits}")
    p = COUNTEREXAMPLE_P
    pr = ctx.real(p)
    x, y = _exact_point(*SUM100_Z, ctx)
    sre = sim = ctx.real(0)
    acc = 0.0
    for k in range(pairs):
        a_re, a_im = _pow_neg_parts(k * ctx.pi + x, y, pr, ctx)
        b_re, b_im = _pow_neg_parts(k * ctx.pi + ctx.pi - x, -y, pr, ctx)
        sre += a_re - b_re
        sim += a_im - b_im
        acc += float(abs(a_re) + abs(a_im) + abs(b_re) + abs(b_im))
    arg, excess = _excess(sre, sim, p, ctx)
    mod = float(ctx.hypot(sre, sim))
    # the same per-term rounding model as the full series, without tails
    rad = ctx.unit_roundoff * (16 + 4 * 72 + 2 * pairs) * acc
    arg_err = rad / mod * 1.01
    excess_err = arg_err / (math.pi * float(p) / 2)
    outside = not in_sector(XPoint(sre, sim), AngleSector(p), ctx)
    return CounterexampleResult(
        "sum100", "1e-30+1e-6i", p, complex(float(sre), float(sim)), float(arg), float(excess),
        excess_err, outside, ctx.mantissa_bits, arg, excess,
    )


def counterexample_pairterm(ctx: PrecisionCtx = DOUBLE, im: Fraction = PAIRTERM_IM) -> CounterexampleResult:
    """``w = -(pi - z)^-p + (pi + z)^-p`` at ``z = pi/4 + i*im``, ``p = 19/10``."""
    p = COUNTEREXAMPLE_P
    pr = ctx.real(p)
    x = ctx.pi / 4
    y = ctx.real(im)
    a_re, a_im = _pow_neg_parts(ctx.pi + x, y, pr, ctx)
    b_re, b_im = _pow_neg_parts(ctx.pi - x, -y, pr, ctx)
    w_re, w_im = a_re - b_re, a_im - b_im
    arg, excess = _excess(w_re, w_im, p, ctx)
    outside = not in_sector(XPoint(w_re, w_im), AngleSector(p), ctx)
    label = "pi/4" if im == 0 else f"pi/4+{float(im)!r}i"
    return CounterexampleResult(
        "pairterm", label, p, complex(float(w_re), float(w_im)), float(arg), float(excess),
        0.0, outside, ctx.mantissa_bits, arg, excess,
    )


def agree_sig(a: float, b: float, digits: int = 3) -> bool:
    """Relative agreement to ``digits`` significant digits."""
    if a == b:
        return True
    return abs(a - b) <= 0.5 * 10 ** (1 - digits) * max(abs(a), abs(b))


def naive_samples() -> list[XPoint]:
    q = math.pi / 4
    return [XPoint(q + dx, dy) for dx in (-0.05, 0.0, 0.05) for dy in (1e-3, 1e-2, 1e-1)]


def refute_naive_claim(p, samples: Sequence[XPoint] | None = None, ctx: PrecisionCtx = DOUBLE, kmax: int = 3) -> CheckReport:
    """``arg(-(k pi + pi - z)^-p)`` leaves ``[-pi p/2, 0]`` for ``z`` near ``pi/4``.

    The margin is the angular distance below ``-pi p/2`` (or above 0).
    """
    p = as_exponent(p)
    samples = naive_samples() if samples is None else [XPoint.of(z) for z in samples]
    pr = ctx.real(p)
    lo = float(-ctx.pi * pr / 2)
    out = []
    for z in samples:
        x, y = ctx.real(z.re), ctx.real(z.im)
        worst = math.inf
        val = 0j
        for k in range(kmax):
            b_re, b_im = _pow_neg_parts(k * ctx.pi + ctx.pi - x, -y, pr, ctx)
            a = float(arg_of(XPoint(-b_re, -b_im), ctx))
            m = max(lo - a, a)  # > 0 means outside the closed interval
            if m < worst:
                worst, val = m, complex(float(-b_re), float(-b_im))
        e = 16 * ctx.unit_roundoff * 8
        out.append(PointCheck(z.to_complex(), val, e, worst, _verdict(worst, e)))
    return CheckReport("naive-claim", p, ctx.mantissa_bits, out)


# ------------------------------------------------------------ exploratory


@dataclass
class Gamma4Scan:
    """Evidence about whether ``f(D)`` meets the slit ``f(Gamma_4)``.

    Conjectural by construction: a finite scan can find a crossing but
    cannot rule one out.
    """

    p: Fraction
    slit_bottom: float
    slit_bottom_at: float
    zero_locus: list[tuple[complex, float]]
    hits: list[tuple[complex, float]]
    min_gap: float
    conjectural: bool = True

    @property
    def verdict(self) -> str:
        if self.hits:
            return "f(D) meets f(Gamma4) at scanned points"
        return "no scanned point of f(D) lies on f(Gamma4)"


def gamma4_avoidance_scan(p, nx: int = 48, ny: int = 48, eps: float = 1e-9) -> Gamma4Scan:
    """Locate the zero set of ``Re f`` inside the half-strip and compare ``Im f`` there with the slit.

    On the ray ``Re z = pi/2`` the image is the segment ``[i*b, 0]`` of the
    imaginary axis.  An interior point with ``Re f = 0`` and ``b < Im f < 0``
    would put ``f(D)`` on that segment.
    """
    p = as_exponent(p)
    f = HaagerupSeries(p, eps)

    def im_on_ray(s):
        return float(f.evaluate(XPoint(math.pi / 2, 10.0**s)).value.im)

    ss = np.linspace(-3, 3, 121)
    vals = [im_on_ray(s) for s in ss]
    i = int(np.argmin(vals))
    lo, hi = ss[max(i - 1, 0)], ss[min(i + 1, len(ss) - 1)]
    res = optimize.minimize_scalar(im_on_ray, bounds=(lo, hi), method="bounded", options={"xatol": 1e-10})
    bottom = float(res.fun)

    xs = [(j + 1) / (nx + 1) * math.pi / 2 for j in range(nx)]
    locus, hits = [], []
    gap = math.inf
    for y in np.geomspace(1e-3, 1e3, ny):
        y = float(y)
        row = f.evaluate_many([XPoint(x, y) for x in xs])
        for j in range(nx - 1):
            a, b = row[j], row[j + 1]
            if not (a.value.re * b.value.re < 0 and abs(a.value.re) > a.err_radius and abs(b.value.re) > b.err_radius):
                continue
            x0 = optimize.brentq(lambda x: float(f.evaluate(XPoint(x, y)).value.re), xs[j], xs[j + 1], xtol=1e-14)
            w = f.evaluate(XPoint(x0, y))
            im = float(w.value.im)
            locus.append((complex(x0, y), im))
            # signed distance of Im f from the slit's span; negative means inside
            g = max(bottom - im, im - 0.0)
            gap = min(gap, g)
            if bottom + w.err_radius < im < -w.err_radius:
                hits.append((complex(x0, y), im))
    return Gamma4Scan(p, bottom, 10.0 ** float(res.x), locus, hits, gap)
