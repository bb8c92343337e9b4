"""Concrete holomorphic maps with certified evaluation.

Rational maps are evaluated from their reduced form ``num/den`` in midpoint-
radius (ball) arithmetic; the Haagerup series goes through
:mod:`dichotomy.series`.  Every evaluation returns an :class:`EvalResult`.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property, lru_cache

import numpy as np

from . import expr as _expr
from .expr import QI, RationalFunction
from .series import choose_truncation, haagerup_parts, haagerup_tail_bound
from .sphere import DOUBLE, INF, PrecisionCtx, XPoint

__all__ = [
    "DomainError",
    "EvalResult",
    "MapSpec",
    "RationalMap",
    "Joukowski",
    "QuadrantRational",
    "RationalExpr",
    "HaagerupSeries",
    "eval_joukowski",
    "eval_quadrant_rational",
    "eval_haagerup",
    "eval_map",
    "parse_rational",
    "haagerup_tail_bound",
]


class DomainError(ValueError):
    """Point outside the closed domain on which a map is declared."""


@dataclass(frozen=True)
class EvalResult:
    value: XPoint
    err_radius: float = 0.0

    def __post_init__(self):
        if not self.err_radius >= 0:
            raise ValueError("err_radius must be non-negative")


# ---------------------------------------------------------------- balls

_SLACK = 1 + 2.0**-50


def _as_fraction(x) -> Fraction:
    if isinstance(x, float):
        return Fraction(x)
    man, exp = x.man_exp
    return Fraction(int(man)) * Fraction(2) ** int(exp)


class _Ball:
    """Complex midpoint with a float radius; midpoint lives in ``ctx``."""

    __slots__ = ("mid", "rad", "ctx")

    def __init__(self, mid, rad: float, ctx: PrecisionCtx):
        self.mid = mid
        self.rad = rad
        self.ctx = ctx

    @classmethod
    def const(cls, c: QI, ctx: PrecisionCtx) -> "_Ball":
        re, im = ctx.real(c.re), ctx.real(c.im)
        exact = _as_fraction(re) == c.re and _as_fraction(im) == c.im
        mid = complex(re, im) if ctx.native else ctx.mp.mpc(re, im)
        rad = 0.0 if exact else 2 * ctx.unit_roundoff * abs(complex(c))
        return cls(mid, rad, ctx)

    def _exact_unit(self) -> bool:
        return self.rad == 0 and self.mid in (0, 1, -1)

    def __add__(self, o: "_Ball") -> "_Ball":
        mid = self.mid + o.mid
        rad = self.rad + o.rad
        if not (self.rad == 0 == o.rad and (self.mid == 0 or o.mid == 0)):
            rad += 2 * self.ctx.unit_roundoff * float(abs(mid))
        return _Ball(mid, rad * _SLACK, self.ctx)

    def __mul__(self, o: "_Ball") -> "_Ball":
        mid = self.mid * o.mid
        a, b = float(abs(self.mid)), float(abs(o.mid))
        rad = a * o.rad + b * self.rad + self.rad * o.rad
        if not (self._exact_unit() or o._exact_unit()):
            rad += 4 * self.ctx.unit_roundoff * float(abs(mid))
        return _Ball(mid, rad * _SLACK, self.ctx)

    def __truediv__(self, o: "_Ball") -> "_Ball | None":
        """``None`` signals that the divisor ball contains zero."""
        b = float(abs(o.mid))
        if b <= o.rad or o.mid == 0:
            return None
        mid = self.mid / o.mid
        a = float(abs(self.mid))
        rad = (self.rad * b + a * o.rad) / (b * (b - o.rad))
        if not (o.rad == 0 and o.mid in (1, -1)):
            rad += 4 * self.ctx.unit_roundoff * float(abs(mid))
        return _Ball(mid, rad * _SLACK, self.ctx)


@lru_cache(maxsize=512)
def _const_balls(coeffs: tuple, ctx: PrecisionCtx) -> tuple:
    return tuple(_Ball.const(c, ctx) for c in coeffs)


def _horner(coeffs, z: _Ball, ctx: PrecisionCtx) -> _Ball:
    acc = _Ball.const(QI(), ctx)
    for c in reversed(_const_balls(tuple(coeffs), ctx)):
        acc = acc * z + c
    return acc


def _unit_mask(mid, rad):
    return (rad == 0) & ((mid == 0) | (mid == 1) | (mid == -1))


def _horner_np(balls, z: np.ndarray, u: float):
    """Vectorized double-precision twin of :func:`_horner` for exact ``z``."""
    mid = np.zeros_like(z)
    rad = np.zeros(z.shape)
    z_unit = _unit_mask(z, np.zeros(z.shape))
    az = np.abs(z)
    for c in reversed(balls):
        # acc * z
        acc_unit = _unit_mask(mid, rad)
        m = mid * z
        r = az * rad
        r = np.where(acc_unit | z_unit, r, r + 4 * u * np.abs(m)) * _SLACK
        # + c
        mid = m + c.mid
        rad = r + c.rad
        exact = (r == 0) & (c.rad == 0) & ((m == 0) | (c.mid == 0))
        rad = np.where(exact, rad, rad + 2 * u * np.abs(mid)) * _SLACK
    return mid, rad


# ------------------------------------------------------------------ maps


class MapSpec:
    """A holomorphic map with evaluation semantics on a closed domain."""

    name = "map"
    real_coefficients = False

    def contains(self, z: XPoint) -> bool:
        return True

    def check_domain(self, z: XPoint) -> None:
        if not self.contains(z):
            raise DomainError(f"{z!r} outside the closed domain of {self.name}")

    def evaluate(self, z, ctx: PrecisionCtx = DOUBLE) -> EvalResult:
        raise NotImplementedError

    def __call__(self, z, ctx: PrecisionCtx = DOUBLE) -> EvalResult:
        return self.evaluate(z, ctx)

    def evaluate_many(self, points, ctx: PrecisionCtx = DOUBLE) -> list[EvalResult]:
        return [self.evaluate(z, ctx) for z in points]


class RationalMap(MapSpec):
    """Base for maps given by an exact rational function of ``z``."""

    @property
    def rational(self) -> RationalFunction:
        raise NotImplementedError

    @property
    def real_coefficients(self) -> bool:
        rf = self.rational
        return all(c.im == 0 for c in rf.num) and all(c.im == 0 for c in rf.den)

    def evaluate(self, z, ctx: PrecisionCtx = DOUBLE) -> EvalResult:
        z = XPoint.of(z)
        self.check_domain(z)
        rf = self.rational
        if z.infinite:
            lim = rf.value_at_infinity()
            if lim is None:
                return EvalResult(INF, 0.0)
            b = _Ball.const(lim, ctx)
            return EvalResult(XPoint(b.mid.real, b.mid.imag), b.rad)
        zc = ctx.point(z)
        mid = complex(zc.re, zc.im) if ctx.native else ctx.mp.mpc(zc.re, zc.im)
        zb = _Ball(mid, 0.0, ctx)
        num = _horner(rf.num, zb, ctx)
        den = _horner(rf.den, zb, ctx)
        if den.mid == 0 and den.rad == 0:
            return EvalResult(INF, 0.0)
        q = num / den
        if q is None:
            # divisor ball straddles zero: pole within rounding
            return EvalResult(INF, math.inf)
        return EvalResult(XPoint(q.mid.real, q.mid.imag), q.rad)

    def evaluate_many(self, points, ctx: PrecisionCtx = DOUBLE) -> list[EvalResult]:
        """Batch evaluation; double precision runs vectorized Horner."""
        points = [XPoint.of(z) for z in points]
        if not ctx.native or len(points) < 8:
            return [self.evaluate(z, ctx) for z in points]
        for z in points:
            self.check_domain(z)
        rf = self.rational
        finite = [i for i, z in enumerate(points) if not z.infinite]
        out: list[EvalResult | None] = [None] * len(points)
        for i, z in enumerate(points):
            if z.infinite:
                out[i] = self.evaluate(z, ctx)
        if not finite:
            return out
        zs = np.array([complex(float(points[i].re), float(points[i].im)) for i in finite])
        u = ctx.unit_roundoff
        nm, nr = _horner_np(_const_balls(tuple(rf.num), ctx), zs, u)
        dm, dr = _horner_np(_const_balls(tuple(rf.den), ctx), zs, u)
        db = np.abs(dm)
        for j, i in enumerate(finite):
            b, brad = float(db[j]), float(dr[j])
            if b == 0 and brad == 0:
                out[i] = EvalResult(INF, 0.0)
                continue
            if b <= brad or b == 0:
                out[i] = EvalResult(INF, math.inf)
                continue
            q = complex(nm[j]) / complex(dm[j])
            a = float(abs(nm[j]))
            rad = (float(nr[j]) * b + a * brad) / (b * (b - brad))
            if not (brad == 0 and dm[j] in (1, -1)):
                rad += 4 * u * abs(q)
            out[i] = EvalResult(XPoint(q.real, q.imag), rad * _SLACK)
        return out

    def finite_on(self, contains_closure, includes_infinity: bool) -> bool:
        """True when no pole lies in a closed set (given by a predicate)."""
        rf = self.rational
        if includes_infinity and rf.infinite_at_infinity:
            return False
        return not any(contains_closure(complex(r)) for r in rf.poles)


@dataclass(frozen=True)
class RationalExpr(RationalMap):
    ast: _expr.Expr
    name: str = "expr"

    @cached_property
    def rational(self) -> RationalFunction:
        return _expr.to_rational_function(self.ast)

    @property
    def source(self) -> str:
        return _expr.pretty(self.ast)


@dataclass(frozen=True)
class Joukowski(RationalMap):
    """``z + 1/z`` on the whole sphere, ``0 -> inf``, ``inf -> inf``."""

    name: str = "joukowski"

    @cached_property
    def rational(self) -> RationalFunction:
        return _expr.to_rational_function(_expr.parse("z + 1/z"))


@dataclass(frozen=True)
class QuadrantRational(RationalMap):
    """``2z/(z^2 - 1)`` on the closed first quadrant plus infinity."""

    name: str = "quadrant-rational"

    @cached_property
    def rational(self) -> RationalFunction:
        return _expr.to_rational_function(_expr.parse("2*z/(z^2 - 1)"))

    def contains(self, z: XPoint) -> bool:
        return z.infinite or (z.re >= 0 and z.im >= 0)


@dataclass(frozen=True)
class HaagerupSeries(MapSpec):
    """The alternating series on the closed half-strip ``0<=Re<=pi/2, Im>=0``."""

    p: object = Fraction(19, 10)
    target_eps: float = 1e-9
    name: str = field(default="haagerup", compare=False)

    def __post_init__(self):
        if not 1 < float(self.p) < 2:
            raise ValueError(f"p must lie in (1, 2), got {self.p}")
        if not self.target_eps > 0:
            raise ValueError("target_eps must be positive")

    def contains(self, z: XPoint) -> bool:
        return _in_strip(z)

    def evaluate(self, z, ctx: PrecisionCtx = DOUBLE) -> EvalResult:
        return eval_haagerup(z, self.p, self.target_eps, ctx)

    def evaluate_many(self, points, ctx: PrecisionCtx = DOUBLE) -> list[EvalResult]:
        """Batch evaluation; double precision goes through the compiled kernel."""
        points = [XPoint.of(z) for z in points]
        if not ctx.native:
            return [self.evaluate(z, ctx) for z in points]
        from .kernels import haagerup_batch
        from .series import em_coefficients, rounding_radius

        out: list[EvalResult | None] = [None] * len(points)
        idx, xs, ys = [], [], []
        for i, z in enumerate(points):
            self.check_domain(z)
            if z.infinite or (z.re == 0 and z.im == 0) or (z.re == math.pi / 2 and z.im == 0):
                out[i] = self.evaluate(z, ctx)
            else:
                idx.append(i)
                xs.append(_snap_half_pi(float(z.re), ctx))
                ys.append(float(z.im))
        if idx:
            trunc = choose_truncation(self.p, float(self.target_eps))
            coeffs = np.asarray(em_coefficients(self.p, trunc.order, ctx), dtype=float)
            xa, ya = np.asarray(xs, dtype=float), np.asarray(ys, dtype=float)
            re, im, acc = haagerup_batch(xa, ya, float(self.p), trunc.pairs, coeffs)
            for j, i in enumerate(idx):
                rnd = rounding_radius(float(acc[j]), xs[j], ys[j], trunc.pairs, trunc.order, ctx)
                out[i] = EvalResult(XPoint(float(re[j]), float(im[j])), trunc.tail_bound + rnd)
        return out


# largest admissible real part before snapping; the float nearest pi/2 lies
# below pi/2, so this admits it together with any wider-precision pi/2
_HALF_PI_CEIL = math.pi / 2 + 1e-15


def _in_strip(z: XPoint) -> bool:
    if z.infinite:
        return True
    return 0 <= z.re <= _HALF_PI_CEIL and z.im >= 0


def _snap_half_pi(x, ctx: PrecisionCtx):
    if x == math.pi / 2 or (not ctx.native and abs(x - ctx.pi / 2) <= 4 * ctx.unit_roundoff):
        return ctx.pi / 2
    if x > ctx.pi / 2:
        # float inputs just above pi/2 in the wide context
        return ctx.pi / 2
    return x


def eval_haagerup(z, p, target_eps: float, ctx: PrecisionCtx = DOUBLE) -> EvalResult:
    """Certified value of the series at ``z``.

    ``err_radius`` is the Euler-Maclaurin tail bound plus the modeled rounding.
    A real part equal to the working-precision ``pi/2`` (or to the double
    nearest ``pi/2``) is treated as exactly ``pi/2``.
    """
    z = XPoint.of(z)
    if not 1 < float(p) < 2:
        raise ValueError(f"p must lie in (1, 2), got {p}")
    if not _in_strip(z):
        raise DomainError(f"{z!r} outside the closed half-strip")
    if z.infinite:
        return EvalResult(XPoint(ctx.real(0), ctx.real(0)), 0.0)
    x = _snap_half_pi(ctx.real(z.re), ctx)
    y = ctx.real(z.im)
    if x == 0 and y == 0:
        return EvalResult(INF, 0.0)
    if x == ctx.pi / 2 and y == 0:
        # pairs cancel exactly at every truncation
        return EvalResult(XPoint(ctx.real(0), ctx.real(0)), 0.0)
    trunc = choose_truncation(p, float(target_eps))
    re, im, rounding = haagerup_parts(x, y, p, trunc, ctx)
    return EvalResult(XPoint(re, im), trunc.tail_bound + float(rounding))


def eval_joukowski(z) -> XPoint:
    return Joukowski().evaluate(z).value


def eval_quadrant_rational(z) -> XPoint:
    return QuadrantRational().evaluate(z).value


def eval_map(spec: MapSpec, z, ctx: PrecisionCtx = DOUBLE) -> EvalResult:
    return spec.evaluate(z, ctx)


def parse_rational(src: str) -> RationalExpr:
    """Parse an expression in ``z`` into a :class:`RationalExpr` map."""
    return RationalExpr(_expr.parse(src))
