"""Points of the extended complex plane, principal-branch powers and sectors.

Every numeric routine in the package takes a :class:`PrecisionCtx`.  A context
with 53 mantissa bits computes with native floats (``math``); anything wider
goes through a private :class:`mpmath.MPContext`, so no global precision state
is ever touched.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from numbers import Real
from typing import Any

import mpmath

__all__ = [
    "XPoint",
    "INF",
    "PrecisionCtx",
    "DOUBLE",
    "AngleSector",
    "arg_of",
    "principal_power_neg",
    "in_sector",
    "sector_distance",
]


class SphereError(ValueError):
    """Operation undefined at the point at infinity."""


@dataclass(frozen=True)
class XPoint:
    """A point of the Riemann sphere: finite ``re + i*im`` or infinity."""

    re: Any = 0.0
    im: Any = 0.0
    infinite: bool = False

    def __post_init__(self):
        if self.infinite:
            object.__setattr__(self, "re", None)
            object.__setattr__(self, "im", None)
            return
        for part in (self.re, self.im):
            if isinstance(part, (mpmath.mpf,)):
                if not mpmath.isfinite(part):
                    raise ValueError(f"non-finite coordinate {part!r}")
            elif not math.isfinite(part):
                raise ValueError(f"non-finite coordinate {part!r}")

    @classmethod
    def of(cls, value) -> "XPoint":
        """Coerce a number, ``complex``, ``mpc`` or XPoint."""
        if isinstance(value, XPoint):
            return value
        if isinstance(value, mpmath.mpc):
            return cls(value.real, value.imag)
        if isinstance(value, complex):
            return cls(value.real, value.imag)
        if isinstance(value, mpmath.mpf):
            return cls(value, mpmath.mpf(0))
        return cls(float(value), 0.0)

    @property
    def is_finite(self) -> bool:
        return not self.infinite

    def to_complex(self) -> complex:
        if self.infinite:
            raise SphereError("no complex value at infinity")
        return complex(float(self.re), float(self.im))

    def conj(self) -> "XPoint":
        if self.infinite:
            return self
        return XPoint(self.re, -self.im)

    def __abs__(self):
        if self.infinite:
            return math.inf
        return math.hypot(float(self.re), float(self.im))

    def __repr__(self):
        if self.infinite:
            return "XPoint(inf)"
        return f"XPoint({self.re!r}, {self.im!r})"


INF = XPoint(infinite=True)


@dataclass(frozen=True)
class PrecisionCtx:
    """Working precision for one computation.

    ``mantissa_bits == 53`` selects native double arithmetic; larger values use
    mpmath at exactly that many bits.
    """

    mantissa_bits: int = 53

    def __post_init__(self):
        if int(self.mantissa_bits) != self.mantissa_bits or self.mantissa_bits < 53:
            raise ValueError("mantissa_bits must be an integer >= 53")

    @property
    def native(self) -> bool:
        return self.mantissa_bits == 53

    @cached_property
    def mp(self) -> mpmath.ctx_mp.MPContext:
        ctx = mpmath.MPContext()
        ctx.prec = self.mantissa_bits
        return ctx

    @cached_property
    def unit_roundoff(self) -> float:
        return 2.0 ** (-self.mantissa_bits)

    @cached_property
    def pi(self):
        return math.pi if self.native else self.mp.pi * 1

    # scalar constructors and elementary functions -------------------------

    def real(self, x):
        """Round ``x`` (float, int, Fraction, str, mpf) into this context."""
        if self.native:
            if isinstance(x, str):
                return float(Fraction(x))
            return float(x)
        if isinstance(x, Fraction):
            return self.mp.mpf(x.numerator) / x.denominator
        if isinstance(x, mpmath.mpf):
            return +self.mp.mpf(x)
        return self.mp.mpf(x)

    def exp(self, x):
        return math.exp(x) if self.native else self.mp.exp(x)

    def log(self, x):
        return math.log(x) if self.native else self.mp.log(x)

    def cos(self, x):
        return math.cos(x) if self.native else self.mp.cos(x)

    def sin(self, x):
        return math.sin(x) if self.native else self.mp.sin(x)

    def tan(self, x):
        return math.tan(x) if self.native else self.mp.tan(x)

    def atan(self, x):
        return math.atan(x) if self.native else self.mp.atan(x)

    def atan2(self, y, x):
        # +0.0 folds a signed zero so that the negative real axis maps to +pi
        if self.native:
            return math.atan2(y + 0.0, x)
        return self.mp.atan2(y, x)

    def hypot(self, x, y):
        return math.hypot(x, y) if self.native else self.mp.hypot(x, y)

    def sqrt(self, x):
        return math.sqrt(x) if self.native else self.mp.sqrt(x)

    def point(self, z) -> XPoint:
        """Round a point into this context (infinity passes through)."""
        z = XPoint.of(z)
        if z.infinite:
            return z
        return XPoint(self.real(z.re), self.real(z.im))


DOUBLE = PrecisionCtx(53)


@dataclass(frozen=True)
class AngleSector:
    """The half-open sector ``{w : -pi*p/2 < arg w <= 0}``."""

    p: Real

    def __post_init__(self):
        if not 1 < float(self.p) < 2:
            raise ValueError(f"sector parameter p must lie in (1, 2), got {self.p}")

    def lower_angle(self, ctx: PrecisionCtx = DOUBLE):
        return -ctx.pi * ctx.real(self.p) / 2


def _finite_parts(w: XPoint, ctx: PrecisionCtx, what: str):
    if w.infinite:
        raise SphereError(f"{what} undefined at infinity")
    return ctx.real(w.re), ctx.real(w.im)


def arg_of(w: XPoint, ctx: PrecisionCtx = DOUBLE):
    """Principal argument in ``(-pi, pi]`` with ``arg 0 = 0``."""
    x, y = _finite_parts(XPoint.of(w), ctx, "argument")
    if y == 0:
        if x >= 0:
            return ctx.real(0)
        return ctx.pi
    return ctx.atan2(y, x)


def _pow_neg_parts(x, y, p, ctx: PrecisionCtx):
    """``(x + iy)**(-p)`` on the principal branch; inputs already in ``ctx``."""
    if y == 0 and x > 0:
        return ctx.exp(-p * ctx.log(x)), y * 0
    r = ctx.hypot(x, y)
    theta = ctx.pi if (y == 0) else ctx.atan2(y, x)
    mag = ctx.exp(-p * ctx.log(r))
    ang = -p * theta
    return mag * ctx.cos(ang), mag * ctx.sin(ang)


def principal_power_neg(z, p, ctx: PrecisionCtx = DOUBLE) -> XPoint:
    """``z**(-p)`` on the principal branch, with ``0 -> inf`` and ``inf -> 0``."""
    z = XPoint.of(z)
    if z.infinite:
        return XPoint(ctx.real(0), ctx.real(0))
    x, y = ctx.real(z.re), ctx.real(z.im)
    if x == 0 and y == 0:
        return INF
    u, v = _pow_neg_parts(x, y, ctx.real(p), ctx)
    return XPoint(u, v)


def sector_distance(w: XPoint, s: AngleSector, ctx: PrecisionCtx = DOUBLE):
    """Signed Euclidean distance from ``w`` to the boundary of the sector.

    Positive strictly inside the open sector ``-pi*p/2 < arg w < 0``, negative
    outside its closure, zero on either bounding ray.
    """
    x, y = _finite_parts(XPoint.of(w), ctx, "sector distance")
    r = ctx.hypot(x, y)
    if r == 0:
        return ctx.real(0)
    theta = arg_of(XPoint(x, y), ctx)
    lo = s.lower_angle(ctx)

    def ray_dist(phi):
        d = abs(theta - phi)
        d = min(d, 2 * ctx.pi - d)
        return r * ctx.sin(d) if d < ctx.pi / 2 else r

    dist = min(ray_dist(0), ray_dist(lo))
    return dist if lo < theta < 0 else -dist


def in_sector(w, s: AngleSector, ctx: PrecisionCtx = DOUBLE) -> bool:
    """Membership in ``{-pi*p/2 < arg w <= 0}``; the lower ray is excluded."""
    theta = arg_of(XPoint.of(w), ctx)
    return bool(s.lower_angle(ctx) < theta <= 0)
