import numpy as np
import pytest

from dichotomy.boundary import Disk, DiskComplement, FirstQuadrant, HalfStrip, Viewport
from dichotomy.classify import (
    ComponentReport,
    Raster,
    ConsistencyError,
    ResolutionError,
    Status,
    classify,
    classify_image,
    expect_outcome,
    label_components,
    map_finite_on_closure,
    rasterize_curves,
)
from dichotomy.boundary import TracedCurve
from dichotomy.maps import EvalResult, HaagerupSeries, QuadrantRational, parse_rational
from dichotomy.sphere import XPoint


def square_curve(r=1.0):
    pts = [complex(-r, -r), complex(r, -r), complex(r, r), complex(-r, r), complex(-r, -r)]
    return TracedCurve("sq", [pts], [[0, 0.25, 0.5, 0.75, 1]])


def test_labels_inside_and_outside():
    vp = Viewport.square(2, 64)
    raster, comps = label_components(rasterize_curves([square_curve()], vp))
    assert len(comps) == 2
    outer = [c for c in comps if c.touches_viewport_edge]
    inner = [c for c in comps if not c.touches_viewport_edge]
    assert len(outer) == 1 and len(inner) == 1
    assert abs(inner[0].representative) < 0.2
    assert raster.labels[vp.cell_of(0j)] == inner[0].id


def test_segments_outside_viewport_are_clipped():
    vp = Viewport.square(1, 32)
    curve = TracedCurve("far", [[complex(-5, 0.1), complex(5, 0.1)]], [[0, 1]])
    raster, comps = label_components(rasterize_curves([curve], vp))
    assert len(comps) == 2  # the line splits the window


def _witness(w):
    return XPoint(0.0, 0.0), EvalResult(XPoint.of(w), 0.0)


def test_status_rules():
    vp = Viewport.square(2, 64)
    raster, comps = label_components(rasterize_curves([square_curve()], vp))
    inside = [_witness(complex(0.1 * k / 50, 0.1)) for k in range(50)]
    reports, stats = classify(raster, comps, inside)
    by_edge = {c.touches_viewport_edge: c for c in reports}
    assert by_edge[False].status is Status.FILLED
    assert by_edge[True].status is Status.EXCLUDED  # 50 placed x 0.75 area >= 3
    assert stats.placed == 50
    few = inside[:2]
    reports, _ = classify(raster, comps, few)
    assert {c.touches_viewport_edge: c for c in reports}[True].status is Status.UNDETERMINED


def test_fincp_forces_and_detects():
    vp = Viewport.square(2, 64)
    raster, comps = label_components(rasterize_curves([square_curve()], vp))
    reports, _ = classify(raster, comps, [_witness(0.1j)], map_finite_on_closure=True)
    outer = [c for c in reports if c.touches_viewport_edge][0]
    assert outer.forced_by_infinity and outer.status is Status.EXCLUDED
    with pytest.raises(ConsistencyError):
        classify(raster, comps, [_witness(1.8 + 1.8j)], map_finite_on_closure=True)


def test_uncertain_and_outside_witnesses():
    vp = Viewport.square(2, 64)
    raster, comps = label_components(rasterize_curves([square_curve()], vp))
    wits = [
        (XPoint(0.0, 0.0), EvalResult(XPoint(0.0, 0.0), 1.0)),
        _witness(10 + 10j),
        (XPoint(0.0, 0.0), EvalResult(XPoint(infinite=True), 0.0)),
    ]
    _, stats = classify(raster, comps, wits)
    assert stats.too_uncertain == 1 and stats.outside == 2 and stats.placed == 0


def test_thick_band_modes():
    vp = Viewport.square(2, 32)
    curve = np.zeros((32, 32), dtype=np.uint8)
    curve[8:24, 8:24] = 1  # a solid block, 16 cells thick
    raster, comps = label_components(Raster(vp, curve))
    with pytest.raises(ResolutionError):
        classify(raster, comps, [_witness(0j)])
    _, stats = classify(raster, comps, [_witness(0j)], strict_bands=False)
    assert stats.deep_band == 1
    # a witness on the thin rim of a band is simply dropped
    _, stats = classify(raster, comps, [_witness(complex(-0.95, 0))])
    assert stats.in_band == 1


def test_component_report_invariants():
    with pytest.raises(ValueError):
        ComponentReport(1, Status.FILLED, [], False, 0.1, 0j, 10)
    with pytest.raises(ValueError):
        ComponentReport(1, Status.EXCLUDED, [0j], False, 0.1, 0j, 10)


def test_expect_outcome():
    rs = [ComponentReport(1, Status.FILLED, [0j], False, 0.2, 0j, 9), ComponentReport(2, Status.EXCLUDED, [], True, 0.8, 3 + 0j, 90)]
    assert expect_outcome(rs, lambda w: Status.FILLED if abs(w) < 1 else Status.EXCLUDED).passed is True
    bad = expect_outcome(rs, lambda w: Status.FILLED)
    assert bad.passed is False and bad.diffs[0][0] == 2
    rs.append(ComponentReport(3, Status.UNDETERMINED, [], False, 0.0, 5j, 2))
    assert expect_outcome(rs, lambda w: None).passed is None


def test_finiteness_rules():
    assert map_finite_on_closure(parse_rational("z"), Disk(1.0))
    assert not map_finite_on_closure(parse_rational("z"), DiskComplement(1.0))
    assert not map_finite_on_closure(QuadrantRational(), FirstQuadrant())
    assert not map_finite_on_closure(HaagerupSeries(), HalfStrip())
    with pytest.raises(TypeError):
        map_finite_on_closure(object(), Disk(1.0))


def test_annulus_like_image():
    # z^2 on the unit disk covers the disk twice
    rep = classify_image(parse_rational("z^2"), Disk(1.0), Viewport.square(1.6, 128))
    assert rep.status_at(0.3 + 0.2j) is Status.FILLED
    assert rep.status_at(1.4 + 1.4j) is Status.EXCLUDED
    assert not rep.undetermined


def test_haagerup_image_cusp():
    vp = Viewport(-3, -4, 3, 2, 128, 128)
    with pytest.raises(ResolutionError):
        classify_image(HaagerupSeries(), HalfStrip(), vp)
    rep = classify_image(HaagerupSeries(), HalfStrip(), vp, strict_bands=False)
    assert rep.low_confidence
    assert rep.status_at(-1 - 3j) is Status.FILLED
    assert rep.status_at(1.5j) is Status.EXCLUDED
