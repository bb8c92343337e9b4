from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from dichotomy.expr import to_rational_function
from dichotomy.maps import (
    DomainError,
    Joukowski,
    QuadrantRational,
    eval_joukowski,
    eval_quadrant_rational,
    parse_rational,
)
from dichotomy.sphere import DOUBLE, INF, PrecisionCtx, XPoint


def horner(poly, z: complex) -> tuple[Fraction, Fraction]:
    x, y = Fraction(z.real), Fraction(z.imag)
    re, im = Fraction(0), Fraction(0)
    for c in reversed(poly):
        re, im = re * x - im * y + c.re, re * y + im * x + c.im
    return re, im


def exact_value(rf, z: complex) -> complex:
    nr, ni = horner(rf.num, z)
    dr, di = horner(rf.den, z)
    n2 = dr * dr + di * di
    return complex((nr * dr + ni * di) / n2, (ni * dr - nr * di) / n2)


EXPRS = ["z + 1/z", "2*z/(z^2 - 1)", "(z^3 - 2i*z + 0.5)/(z^2 + 0.3*z + 4)", "1/(z - 0.5)^2", "z^5 - z"]
coords = st.floats(min_value=-4, max_value=4, allow_nan=False)


@settings(max_examples=80, deadline=None)
@given(st.sampled_from(EXPRS), coords, coords, st.sampled_from([53, 106]))
def test_ball_encloses_exact_value(src, x, y, bits):
    f = parse_rational(src)
    rf = to_rational_function(f.ast)
    z = complex(x, y)
    if abs(complex(*map(float, horner(rf.den, z)))) < 1e-3:
        return
    r = f.evaluate(z, PrecisionCtx(bits))
    want = exact_value(rf, z)
    assert abs(r.value.to_complex() - want) <= r.err_radius + 1e-15 * abs(want)


def test_catalog_values():
    assert eval_joukowski(1.0).to_complex() == 2
    assert eval_joukowski(1j).to_complex() == 0
    assert eval_joukowski(0.0).infinite
    assert eval_joukowski(INF).infinite
    assert eval_quadrant_rational(1j).to_complex() == pytest.approx(-1j)
    assert eval_quadrant_rational(1.0).infinite
    assert eval_quadrant_rational(INF).to_complex() == 0
    with pytest.raises(DomainError):
        eval_quadrant_rational(-1 + 1j)


def test_real_coefficients():
    assert Joukowski().real_coefficients and QuadrantRational().real_coefficients
    assert not parse_rational("z + i").real_coefficients


def test_evaluate_many_matches_scalar():
    f = parse_rational("(z^3 - 2i*z + 0.5)/(z^2 + 0.3*z + 4)")
    pts = [complex(a, b) for a in (-2, -0.3, 0, 1.1, 3) for b in (-1, 0, 0.7, 2)] + [INF]
    many = f.evaluate_many(pts, DOUBLE)
    for z, r in zip(pts, many):
        one = f.evaluate(z, DOUBLE)
        if one.value.infinite:
            assert r.value.infinite
            continue
        assert abs(r.value.to_complex() - one.value.to_complex()) <= 1e-14 * max(1.0, abs(one.value))
        assert r.err_radius == pytest.approx(one.err_radius, rel=1e-12, abs=1e-300)


def test_pole_gives_infinity():
    f = parse_rational("1/(z-1)")
    assert f.evaluate(1.0).value.infinite
    assert f.evaluate_many([XPoint(1.0, 0.0)] * 10)[0].value.infinite


def test_finite_on():
    f = parse_rational("1/(z-2)")
    assert f.finite_on(lambda w: abs(w) <= 1, False)
    assert not f.finite_on(lambda w: abs(w) <= 3, False)
    assert not parse_rational("z").finite_on(lambda w: True, True)
