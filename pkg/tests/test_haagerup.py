import math
from fractions import Fraction

import pytest

from dichotomy.haagerup import (
    PrecisionError,
    acp_grid,
    as_exponent,
    check_gamma2,
    check_gamma4,
    check_gamma5,
    check_interior_acp,
    counterexample_pairterm,
    counterexample_sum100,
    gamma4_avoidance_scan,
    gamma4_samples,
    inequality_star,
    refute_naive_claim,
)
from dichotomy.sphere import DOUBLE, PrecisionCtx, XPoint


def test_exponent_parsing():
    assert as_exponent("1.9") == Fraction(19, 10)
    assert as_exponent(1.5) == Fraction(3, 2)
    assert as_exponent(Fraction(11, 10)) == Fraction(11, 10)
    for bad in ("2.5", 1, "x"):
        with pytest.raises(ValueError):
            as_exponent(bad)


def test_sample_sets():
    g4 = gamma4_samples()
    assert len(g4) == 64 and g4[0].im == 0 and all(z.re == math.pi / 2 for z in g4)
    grid = acp_grid(4, 3)
    assert len(grid) == 12 and all(0 < z.re < math.pi / 2 and z.im > 0 for z in grid)


def test_wide_precision_boundary_checks():
    ctx = PrecisionCtx(106)
    few = gamma4_samples(8)
    assert check_gamma4(Fraction(3, 2), few, ctx).passed
    assert check_gamma5(Fraction(3, 2), None, ctx).passed
    assert check_gamma2(Fraction(3, 2), None, ctx).passed


def test_acp_rejects_points_off_the_open_strip():
    with pytest.raises(ValueError):
        check_interior_acp(1.5, [XPoint(0.0, 1.0)])


def test_acp_wide_precision():
    rep = check_interior_acp(Fraction(19, 10), acp_grid(6, 6), PrecisionCtx(106))
    assert rep.all_certified and rep.mantissa_bits == 106


def test_star_margin_is_rotated_imaginary_part():
    from dichotomy.maps import eval_haagerup

    p, x, y = Fraction(3, 2), 0.6, 0.8
    s = inequality_star(p, x, y)
    f = eval_haagerup(complex(x, y), p, 1e-12).value.to_complex()
    rot = (f * complex(math.cos(math.pi * 0.75), math.sin(math.pi * 0.75))).imag
    assert s.margin == pytest.approx(rot, abs=1e-8)
    with pytest.raises(ValueError):
        inequality_star(p, 0.0, 1.0)


def test_sum100_needs_212_bits():
    with pytest.raises(PrecisionError):
        counterexample_sum100(PrecisionCtx(106))
    r = counterexample_sum100(PrecisionCtx(212))
    assert r.outside and r.excess > 3.5e-18 and r.excess_err < 1e-40


def test_pairterm_real_axis():
    r = counterexample_pairterm(DOUBLE, Fraction(0))
    assert r.value.imag == 0 and r.value.real < 0
    assert r.arg == pytest.approx(math.pi)
    assert r.outside


def test_naive_claim_refuted():
    for p in ("1.1", "1.5", "1.9"):
        rep = refute_naive_claim(p)
        # every sample leaves the interval for some k: the margins are positive
        assert all(c.margin > 0 for c in rep.points)


@pytest.mark.slow
def test_gamma4_scan_finds_a_gap():
    scan = gamma4_avoidance_scan(Fraction(3, 2), nx=16, ny=16)
    assert scan.conjectural and not scan.hits
    assert scan.min_gap > 0 and scan.slit_bottom < 0
