import numpy as np
import pytest

from dichotomy.boundary import Disk, DiskComplement
from dichotomy.maps import parse_rational
from dichotomy.modulus import (
    HypothesisError,
    PremiseError,
    boundary_modulus,
    finmax_check,
    fta_zero_certificate,
    minmp_dichotomy,
    polynomial_expr,
    random_polynomial,
    root_radius,
)


def test_boundary_modulus_of_identity():
    b = boundary_modulus(parse_rational("z"), Disk(2.0), n=256)
    assert b.sup == pytest.approx(2.0) and b.inf == pytest.approx(2.0)
    assert b.lipschitz == pytest.approx(1.0, rel=1e-6)
    assert b.gap < 0.1


def test_finmax_refuses_poles_on_closure():
    with pytest.raises(HypothesisError):
        finmax_check(parse_rational("1/(z-0.5)"), Disk(1.0))
    rep = finmax_check(parse_rational("1/(z-2)"), Disk(1.0))
    assert rep.passed and rep.interior_max <= rep.M + rep.tol


def test_minmp_branches():
    fill = minmp_dichotomy(parse_rational("z^2 + 0.5*z"), Disk(1.0), n=800)
    assert fill.branch == "fill" and fill.passed and fill.filled_fraction == 1.0
    cont = minmp_dichotomy(parse_rational("1/z"), DiskComplement(1.0))
    # 1/z maps the outside of the unit circle into the disk, reaching 0
    assert cont.branch in ("fill", "inconclusive")
    cont = minmp_dichotomy(parse_rational("z + 3"), Disk(1.0))
    assert cont.branch == "containment" and cont.passed


def test_fta_premise():
    with pytest.raises(PremiseError):
        fta_zero_certificate(parse_rational("z^2+1"), 0.5)
    r = fta_zero_certificate(parse_rational("z - 5"), 10.0)
    assert r.passed and r.f0 == pytest.approx(5.0)
    with pytest.raises(HypothesisError):
        fta_zero_certificate(parse_rational("1/(z-1)"), 2.0)


@pytest.mark.parametrize("seed", range(5))
def test_polynomial_text_round_trip(seed):
    rng = np.random.default_rng(seed)
    f, coeffs = random_polynomial(rng, 4)
    assert abs(coeffs[-1]) >= 0.5
    for z in (0.3 + 0.1j, -1 + 2j):
        want = sum(c * z**k for k, c in enumerate(coeffs))
        assert f.evaluate(z).value.to_complex() == pytest.approx(want, rel=1e-12)
    assert polynomial_expr([0, 0]) == "0"


@pytest.mark.parametrize("seed", range(10))
def test_root_radius_encloses_roots(seed):
    rng = np.random.default_rng(100 + seed)
    _, coeffs = random_polynomial(rng, 1 + seed % 6)
    roots = np.roots(list(reversed(coeffs)))
    assert np.max(np.abs(roots)) < root_radius(coeffs) / 2
