"""Certified evaluation of the alternating Haagerup power series.

The series

    f(z) = sum_{k>=0} [ (k*pi + z)^(-p) - ((k+1)*pi - z)^(-p) ]

is summed pairwise up to ``N``; the two remainders
``sum_{k>=N} (k*pi + a)^(-p)`` with ``a = z`` and ``a = pi - z`` are each
replaced by an Euler-Maclaurin expansion of order ``m``.  Because
``Re(k*pi + a) >= k*pi`` on the closed strip, the classical remainder bound

    |R_m| <= 2 zeta(2m) / (2 pi)^(2m) * integral_N^oo |h^(2m)(x)| dx

integrates in closed form and is uniform over the strip.  The crude
term-by-term bound :func:`haagerup_tail_bound` is kept for reference and for
cross-checking, but is far too slow to reach small tolerances when ``p`` is
close to 1.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

import mpmath

from .sphere import PrecisionCtx, _pow_neg_parts

__all__ = [
    "haagerup_tail_bound",
    "em_remainder_bound",
    "choose_truncation",
    "Truncation",
    "em_coefficients",
    "haagerup_parts",
    "haagerup_raw",
    "rounding_radius",
    "ROUNDING_CONSTANT",
]

# Per-term relative error allowance, in units of the unit roundoff, on top of
# 4*|ln|base|| for the exp/log evaluation and one unit per accumulated term.
# Validated in tests by comparing 53-bit against 212-bit evaluations.
ROUNDING_CONSTANT = 16.0

_MAX_ORDER = 60


def _check_p(p) -> float:
    pf = float(p)
    if not 1 < pf < 2:
        raise ValueError(f"p must lie in (1, 2), got {p}")
    return pf


def haagerup_tail_bound(N: int, p) -> float:
    """Term-by-term bound ``2 pi^-p (N^-p + N^(1-p)/(p-1))`` on the pair tail.

    Valid uniformly on ``0 <= Re z <= pi/2, Im z >= 0`` since each pair has
    modulus at most ``2 (k pi)^-p``.
    """
    pf = _check_p(p)
    if N < 1:
        raise ValueError("N must be a positive integer")
    return 2.0 * math.pi ** (-pf) * (N ** (-pf) + N ** (1.0 - pf) / (pf - 1.0))


def _zeta_even_upper(m: int) -> float:
    if m == 1:
        return math.pi ** 2 / 6
    return 1.0 + 2.0 ** (-2 * m) + 2.0 ** (1 - 2 * m) / (2 * m - 1)


def em_remainder_bound(N: int, m: int, p) -> float:
    """Bound on the order-``m`` Euler-Maclaurin remainder of one tail.

    Covers ``sum_{k>=N} (k pi + a)^-p`` for any ``a`` with ``Re a >= 0``.
    """
    pf = float(p)
    log_rising = math.lgamma(pf + 2 * m) - math.lgamma(pf)
    log_b = (
        math.log(2 * _zeta_even_upper(m))
        + log_rising
        - 2 * m * math.log(2.0)
        - math.log(math.pi)
        - math.log(pf + 2 * m - 1)
        + (1 - pf - 2 * m) * math.log(math.pi * N)
    )
    # slack for the float evaluation of the bound itself
    return math.exp(log_b) * (1 + 1e-12)


@dataclass(frozen=True)
class Truncation:
    pairs: int
    order: int
    tail_bound: float


@lru_cache(maxsize=256)
def choose_truncation(p, eps: float) -> Truncation:
    """Cheapest ``(N, m)`` whose two-tail remainder bound is at most ``eps``."""
    _check_p(p)
    if not eps > 0:
        raise ValueError("target eps must be positive")
    N = 4
    while True:
        best = None
        for m in range(1, _MAX_ORDER + 1):
            b = 2 * em_remainder_bound(N, m, p)
            if b <= eps:
                best = Truncation(N, m, b)
                break
        if best is not None:
            return best
        N *= 2
        if N > 1 << 24:
            raise ValueError(f"tolerance {eps} unreachable")


@lru_cache(maxsize=64)
def _bernoulli_ratio(j: int) -> Fraction:
    num, den = mpmath.bernfrac(2 * j)
    return Fraction(int(num), int(den)) / math.factorial(2 * j)


def em_coefficients(p, order: int, ctx: PrecisionCtx) -> list:
    """``B_2j/(2j)! * (p)_{2j-1} * pi^(2j-1)`` for ``j = 1..order`` in ``ctx``.

    These multiply ``(N pi + a)^-(p+2j-1)`` in the tail expansion.
    """
    pr = ctx.real(p)
    out = []
    rising = ctx.real(1)
    pi_pow = ctx.real(1)
    k = 0  # rising = (p)_k, pi_pow = pi^k
    for j in range(1, order + 1):
        while k < 2 * j - 1:
            rising = rising * (pr + k)
            pi_pow = pi_pow * ctx.pi
            k += 1
        out.append(ctx.real(_bernoulli_ratio(j)) * rising * pi_pow)
    return out


def _tail_parts(x, y, pr, N, coeffs, ctx):
    """Euler-Maclaurin value of ``sum_{k>=N} (k pi + a)^-p``, ``a = x + iy``."""
    wx = N * ctx.pi + x
    re, im = _pow_neg_parts(wx, y, pr - 1, ctx)
    scale = 1 / (ctx.pi * (pr - 1))
    sre, sim = re * scale, im * scale
    acc = abs(sre) + abs(sim)
    re, im = _pow_neg_parts(wx, y, pr, ctx)
    sre += re / 2
    sim += im / 2
    acc += (abs(re) + abs(im)) / 2
    for j, c in enumerate(coeffs, start=1):
        re, im = _pow_neg_parts(wx, y, pr + 2 * j - 1, ctx)
        sre += c * re
        sim += c * im
        acc += abs(c) * (abs(re) + abs(im))
    return sre, sim, acc


def haagerup_raw(x, y, p, pairs: int, coeffs, ctx: PrecisionCtx):
    """Pairwise head plus both Euler-Maclaurin tails at ``x + iy``.

    Inputs are already rounded into ``ctx``.  Returns ``(re, im, abs_sum)``
    where ``abs_sum`` bounds the sum of moduli of every computed term.  When
    ``x`` is exactly ``pi/2`` in ``ctx`` the two halves are mirror images and
    the real part cancels to zero term by term.
    """
    pr = ctx.real(p)
    sre = ctx.real(0)
    sim = ctx.real(0)
    acc = 0.0
    mx, my = ctx.pi - x, -y
    for k in range(pairs):
        kp = k * ctx.pi
        a_re, a_im = _pow_neg_parts(kp + x, y, pr, ctx)
        b_re, b_im = _pow_neg_parts(kp + mx, my, pr, ctx)
        sre += a_re - b_re
        sim += a_im - b_im
        acc += float(abs(a_re) + abs(a_im) + abs(b_re) + abs(b_im))
    t_re, t_im, t_acc = _tail_parts(x, y, pr, pairs, coeffs, ctx)
    u_re, u_im, u_acc = _tail_parts(mx, my, pr, pairs, coeffs, ctx)
    sre += t_re - u_re
    sim += t_im - u_im
    acc += float(t_acc + u_acc)
    return sre, sim, acc


def rounding_radius(abs_sum: float, x, y, pairs: int, order: int, ctx: PrecisionCtx) -> float:
    """Modeled rounding error of :func:`haagerup_raw`.

    ``u * (c + 4 * max|ln|base|| + n_terms) * abs_sum`` with ``c`` equal to
    :data:`ROUNDING_CONSTANT`.
    """
    ax, ay = float(abs(x)), float(abs(y))
    lnmax = max(
        abs(math.log(max(ax + ay, 1e-300))),
        abs(math.log(pairs * math.pi + ax + ay)),
    )
    n_terms = 2 * pairs + 2 * (order + 2)
    return ctx.unit_roundoff * (ROUNDING_CONSTANT + 4 * lnmax + n_terms) * abs_sum


def haagerup_parts(x, y, p, trunc: Truncation, ctx: PrecisionCtx):
    """``(re, im, rounding_radius)``; the caller adds ``trunc.tail_bound``."""
    coeffs = em_coefficients(p, trunc.order, ctx)
    re, im, acc = haagerup_raw(x, y, p, trunc.pairs, coeffs, ctx)
    return re, im, rounding_radius(acc, x, y, trunc.pairs, trunc.order, ctx)
