"""Series evaluation against a Hurwitz-zeta oracle."""
import math
from fractions import Fraction

import mpmath
import pytest
from hypothesis import given, settings, strategies as st

from dichotomy.maps import DomainError, HaagerupSeries, eval_haagerup
from dichotomy.series import (
    choose_truncation,
    em_coefficients,
    em_remainder_bound,
    haagerup_raw,
    haagerup_tail_bound,
)
from dichotomy.sphere import DOUBLE, INF, PrecisionCtx

P = Fraction(19, 10)


def oracle(z: complex, p, prec: int = 200) -> complex:
    """pi^-p (zeta(p, z/pi) - zeta(p, 1 - z/pi)) at high precision."""
    with mpmath.workprec(prec):
        pm = mpmath.mpf(p.numerator) / p.denominator
        a = mpmath.mpc(z.real, z.imag) / mpmath.pi
        return complex(mpmath.pi ** (-pm) * (mpmath.zeta(pm, a) - mpmath.zeta(pm, 1 - a)))


def test_truncation_for_default_eps():
    t = choose_truncation(P, 1e-9)
    assert (t.pairs, t.order) == (4, 6)
    assert t.tail_bound <= 1e-9


@pytest.mark.parametrize("eps", [1e-3, 1e-6, 1e-9, 1e-12, 1e-15])
def test_truncation_meets_target(eps):
    for p in (Fraction(11, 10), Fraction(3, 2), P):
        t = choose_truncation(p, eps)
        assert t.tail_bound <= eps
        assert t.tail_bound == 2 * em_remainder_bound(t.pairs, t.order, p)


def test_truncation_rejects_bad_input():
    with pytest.raises(ValueError):
        choose_truncation(P, 0.0)
    with pytest.raises(ValueError):
        choose_truncation(Fraction(5, 2), 1e-9)


def test_termwise_tail_bound_decreases():
    vals = [haagerup_tail_bound(n, P) for n in (1, 2, 4, 8, 100)]
    assert vals == sorted(vals, reverse=True)
    with pytest.raises(ValueError):
        haagerup_tail_bound(0, P)


@pytest.mark.parametrize("p", [Fraction(11, 10), Fraction(3, 2), P])
@pytest.mark.parametrize("z", [0.3 + 0.01j, 0.7 + 0.3j, 1.2 + 5j, 0.05 + 100j, 1.5 + 1e-3j])
def test_matches_zeta_oracle(p, z):
    r = eval_haagerup(z, p, 1e-9)
    assert abs(r.value.to_complex() - oracle(z, p)) <= r.err_radius


@settings(max_examples=60, deadline=None)
@given(
    x=st.floats(min_value=1e-3, max_value=math.pi / 2 - 1e-3),
    y=st.floats(min_value=1e-3, max_value=1e3),
    eps=st.sampled_from([1e-6, 1e-9, 1e-12]),
)
def test_error_radius_encloses_truth(x, y, eps):
    z = complex(x, y)
    r = eval_haagerup(z, P, eps)
    assert abs(r.value.to_complex() - oracle(z, P)) <= r.err_radius


@settings(max_examples=40, deadline=None)
@given(
    x=st.floats(min_value=1e-3, max_value=math.pi / 2 - 1e-3),
    y=st.floats(min_value=1e-6, max_value=1e6),
)
def test_rounding_model_against_212_bits(x, y):
    # the double result must sit within its rounding radius of the same
    # truncation carried out at 212 bits
    from dichotomy.series import haagerup_parts

    t = choose_truncation(P, 1e-9)
    re, im, rad = haagerup_parts(x, y, P, t, DOUBLE)
    wide = PrecisionCtx(212)
    wre, wim, _ = haagerup_parts(wide.real(x), wide.real(y), P, t, wide)
    assert abs(complex(re, im) - complex(float(wre), float(wim))) <= rad


def test_half_pi_is_exact_zero():
    for ctx in (DOUBLE, PrecisionCtx(212)):
        r = eval_haagerup(complex(math.pi / 2, 0), P, 1e-9, ctx)
        assert float(r.value.re) == 0 and float(r.value.im) == 0 and r.err_radius == 0
    coeffs = em_coefficients(P, 3, DOUBLE)
    re, im, _ = haagerup_raw(math.pi / 2, 2.0, P, 5, coeffs, DOUBLE)
    assert re == 0  # the Gamma4 line is mirror-symmetric


def test_corner_values():
    assert eval_haagerup(0j, P, 1e-9).value.infinite
    r = eval_haagerup(INF, P, 1e-9)
    assert r.value.to_complex() == 0


def test_domain_enforced():
    with pytest.raises(DomainError):
        eval_haagerup(2.0 + 1j, P, 1e-9)
    with pytest.raises(DomainError):
        eval_haagerup(0.5 - 1j, P, 1e-9)
    with pytest.raises(ValueError):
        HaagerupSeries(Fraction(2))


def test_batch_equals_scalar():
    f = HaagerupSeries(P)
    pts = [complex(x, y) for x in (0.1, 0.8, 1.5) for y in (1e-3, 0.5, 40.0)] + [math.pi / 2, 0.0 + 2j]
    many = f.evaluate_many(pts)
    for z, r in zip(pts, many):
        one = f.evaluate(z)
        assert abs(one.value.to_complex() - r.value.to_complex()) <= 1e-14 * max(1, abs(one.value))
        assert r.err_radius == pytest.approx(one.err_radius, rel=1e-12)
