"""Raster classification of ``f(D)`` against the components of the complement
of the traced boundary image.

A component that receives an interior image sample (a witness) is filled by
``f(D)``; one that stays witness-free under adequate sampling density is
excluded from ``f(closure D)``.  Nothing in between is claimed.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from typing import Callable, Iterable, Sequence

import numpy as np
from scipy import ndimage

from . import kernels
from .boundary import DomainSpec, TracedCurve, Viewport, boundary_pieces, interior_samples, trace_image
from .maps import EvalResult, HaagerupSeries, MapSpec, RationalMap
from .sphere import DOUBLE, PrecisionCtx, XPoint

__all__ = [
    "Status",
    "Raster",
    "Component",
    "ComponentReport",
    "ResolutionError",
    "ConsistencyError",
    "Outcome",
    "ImageReport",
    "rasterize_curves",
    "label_components",
    "classify",
    "expect_outcome",
    "map_finite_on_closure",
    "classify_image",
]


class Status(str, enum.Enum):
    FILLED = "Filled"
    EXCLUDED = "Excluded"
    UNDETERMINED = "Undetermined"


class ResolutionError(RuntimeError):
    """A witness landed deep inside a thick curve band."""


class ConsistencyError(RuntimeError):
    """Sampled evidence contradicts a principle that must hold."""


@dataclass
class Raster:
    """Curve mask plus, once labeled, the component label of every cell.

    ``curve[r, c]`` is nonzero for Curve cells; ``labels`` is 0 on Curve cells
    and ``1..count`` elsewhere.  Row 0 is the bottom edge of the viewport.
    """

    viewport: Viewport
    curve: np.ndarray
    labels: np.ndarray | None = None
    count: int = 0

    @property
    def labeled(self) -> bool:
        return self.labels is not None


@dataclass(frozen=True)
class Component:
    id: int
    cells: int
    touches_viewport_edge: bool
    representative: complex


@dataclass
class ComponentReport:
    id: int
    status: Status
    witness_points: list[complex]
    touches_viewport_edge: bool
    area_fraction: float
    representative: complex
    cells: int
    forced_by_infinity: bool = False

    def __post_init__(self):
        if self.status is Status.FILLED and not self.witness_points:
            raise ValueError("a Filled component needs a witness")
        if self.status is Status.EXCLUDED and self.witness_points:
            raise ValueError("an Excluded component cannot hold witnesses")


# ------------------------------------------------------------ rasterizing


def _clip(x0, y0, x1, y1, vp: Viewport):
    """Liang-Barsky clip of one segment to the viewport; None if disjoint."""
    dx, dy = x1 - x0, y1 - y0
    t0, t1 = 0.0, 1.0
    for p, q in ((-dx, x0 - vp.xmin), (dx, vp.xmax - x0), (-dy, y0 - vp.ymin), (dy, vp.ymax - y0)):
        if p == 0:
            if q < 0:
                return None
            continue
        r = q / p
        if p < 0:
            if r > t1:
                return None
            t0 = max(t0, r)
        else:
            if r < t0:
                return None
            t1 = min(t1, r)
    return x0 + t0 * dx, y0 + t0 * dy, x0 + t1 * dx, y0 + t1 * dy


def rasterize_curves(curves: Iterable[TracedCurve], vp: Viewport) -> Raster:
    """Mark cells crossed by any traced segment, thickened by one cell."""
    rows = []
    for curve in curves:
        for a, b in curve.segments():
            clipped = _clip(a.real, a.imag, b.real, b.imag, vp)
            if clipped is not None:
                rows.append(clipped)
    segs = np.asarray(rows, dtype=float).reshape(-1, 4)
    grid = kernels.rasterize(np.ascontiguousarray(segs), vp.xmin, vp.ymin, vp.xmax, vp.ymax, vp.nx, vp.ny)
    return Raster(vp, np.asarray(grid, dtype=np.uint8))


def label_components(r: Raster) -> tuple[Raster, list[Component]]:
    """4-connected flood fill of the non-Curve cells."""
    labels, count = kernels.label4(np.ascontiguousarray(r.curve, dtype=np.uint8))
    labels = np.asarray(labels)
    out = Raster(r.viewport, r.curve, labels, int(count))
    if count == 0:
        return out, []
    sizes = np.bincount(labels.ravel(), minlength=count + 1)
    edge = np.zeros(count + 1, dtype=bool)
    for border in (labels[0, :], labels[-1, :], labels[:, 0], labels[:, -1]):
        edge[border] = True
    # deepest cell of each component: farthest from the curve and the frame
    free = np.pad(labels > 0, 1, constant_values=False)
    depth = ndimage.distance_transform_cdt(free, metric="taxicab")[1:-1, 1:-1]
    ids = np.arange(1, count + 1)
    where = ndimage.maximum_position(depth, labels, ids)
    comps = []
    for i, (row, col) in zip(ids, where):
        comps.append(Component(int(i), int(sizes[i]), bool(edge[i]), r.viewport.cell_center(int(row), int(col))))
    return out, comps


# ------------------------------------------------------------ classifying


def _band_depth(curve: np.ndarray) -> np.ndarray:
    return ndimage.distance_transform_cdt(curve > 0, metric="chessboard")


@dataclass
class WitnessStats:
    total: int = 0
    placed: int = 0
    outside: int = 0
    in_band: int = 0
    deep_band: int = 0
    too_uncertain: int = 0


def classify(
    raster: Raster,
    components: Sequence[Component],
    image_witnesses: Iterable[tuple[XPoint, EvalResult]],
    map_finite_on_closure: bool = False,
    density_threshold: float = 3.0,
    min_cells: int = 4,
    max_band: int = 3,
    strict_bands: bool = True,
) -> tuple[list[ComponentReport], WitnessStats]:
    """Assign Filled / Excluded / Undetermined to every component.

    A component with a witness is Filled.  A witness-free component is
    Excluded only if the number of placed witnesses times its area fraction is
    at least ``density_threshold`` and it spans at least ``min_cells`` cells.
    For maps finite on the closed domain the component of infinity is Excluded
    outright (a witness there raises :class:`ConsistencyError`); it is known
    only when the viewport frame is free of curve cells.

    A witness deep inside a band thicker than ``max_band`` cells raises
    :class:`ResolutionError`; with ``strict_bands=False`` it is counted in
    ``deep_band`` and dropped instead (for images with cusps, where two curves
    meet tangentially and no finite raster separates them).
    """
    if not raster.labeled:
        raise ValueError("raster must be labeled first")
    vp = raster.viewport
    labels = raster.labels
    total_cells = vp.nx * vp.ny
    cell = vp.cell
    found: dict[int, list[complex]] = {c.id: [] for c in components}
    stats = WitnessStats()
    depth = None
    for _, res in image_witnesses:
        stats.total += 1
        if res.value.infinite:
            stats.outside += 1
            continue
        if not res.err_radius < cell:
            stats.too_uncertain += 1
            continue
        w = res.value.to_complex()
        rc = vp.cell_of(w)
        if rc is None:
            stats.outside += 1
            continue
        lab = int(labels[rc])
        if lab == 0:
            if depth is None:
                depth = _band_depth(raster.curve)
            if 2 * int(depth[rc]) - 1 > max_band:
                if not strict_bands:
                    stats.deep_band += 1
                    continue
                raise ResolutionError(f"raster too coarse: witness {w} inside a curve band thicker than {max_band} cells")
            stats.in_band += 1
            continue
        stats.placed += 1
        found[lab].append(w)

    frame_clear = not (
        raster.curve[0, :].any() or raster.curve[-1, :].any() or raster.curve[:, 0].any() or raster.curve[:, -1].any()
    )
    reports = []
    for comp in components:
        ws = found[comp.id]
        frac = comp.cells / total_cells
        forced = map_finite_on_closure and frame_clear and comp.touches_viewport_edge
        if forced:
            if ws:
                raise ConsistencyError(
                    f"map is finite on the closed domain, yet component {comp.id} of infinity holds witness {ws[0]}"
                )
            status = Status.EXCLUDED
        elif ws:
            status = Status.FILLED
        elif comp.cells < min_cells:
            status = Status.UNDETERMINED
        elif stats.placed * frac >= density_threshold:
            status = Status.EXCLUDED
        else:
            status = Status.UNDETERMINED
        reports.append(
            ComponentReport(
                comp.id, status, ws, comp.touches_viewport_edge, frac, comp.representative, comp.cells, forced
            )
        )
    return reports, stats


@dataclass
class Outcome:
    """``passed`` is None when the run is inconclusive."""

    passed: bool | None
    diffs: list[tuple[int, complex, Status, Status]] = field(default_factory=list)
    undetermined: list[int] = field(default_factory=list)


def expect_outcome(reports: Sequence[ComponentReport], expectation: Callable[[complex], Status | None]) -> Outcome:
    """Compare statuses with ``expectation`` at each representative point.

    The expectation may return None for "no opinion".
    """
    diffs = []
    undetermined = []
    for rep in reports:
        if rep.status is Status.UNDETERMINED:
            undetermined.append(rep.id)
            continue
        want = expectation(rep.representative)
        if want is not None and Status(want) is not rep.status:
            diffs.append((rep.id, rep.representative, Status(want), rep.status))
    if undetermined:
        return Outcome(None, diffs, undetermined)
    return Outcome(not diffs, diffs)


def map_finite_on_closure(f: MapSpec, d: DomainSpec) -> bool:
    if isinstance(f, RationalMap):
        return f.finite_on(d.closure_contains, d.infinity_in_closure)
    if isinstance(f, HaagerupSeries):
        return False  # value infinity at the corner 0
    raise TypeError(f"cannot decide finiteness for {type(f).__name__}")


@dataclass
class ImageReport:
    map: MapSpec
    domain: DomainSpec
    viewport: Viewport
    curves: list[TracedCurve]
    raster: Raster
    components: list[ComponentReport]
    witnesses: WitnessStats
    finite_on_closure: bool
    samples: list[XPoint] = field(repr=False, default_factory=list)
    images: list[EvalResult] = field(repr=False, default_factory=list)

    @property
    def low_confidence(self) -> bool:
        return self.witnesses.deep_band > 0 or any(c.low_confidence for c in self.curves)

    @property
    def undetermined(self) -> list[int]:
        return [c.id for c in self.components if c.status is Status.UNDETERMINED]

    def component_at(self, w: complex) -> ComponentReport | None:
        rc = self.viewport.cell_of(w)
        if rc is None:
            return None
        lab = int(self.raster.labels[rc])
        for c in self.components:
            if c.id == lab:
                return c
        return None

    def status_at(self, w: complex) -> Status | None:
        c = self.component_at(w)
        return None if c is None else c.status


def classify_image(
    f: MapSpec,
    d: DomainSpec,
    viewport: Viewport,
    n_witnesses: int = 4000,
    ctx: PrecisionCtx = DOUBLE,
    tol: float | None = None,
    density_threshold: float = 3.0,
    finite_on_closure: bool | None = None,
    strict_bands: bool = True,
) -> ImageReport:
    """Trace, rasterize, label, sample and classify in one go."""
    curves = [trace_image(f, piece, viewport, tol, ctx) for piece in boundary_pieces(d)]
    raster = rasterize_curves(curves, viewport)
    raster, comps = label_components(raster)
    samples = interior_samples(d, n_witnesses)
    images = f.evaluate_many(samples, ctx)
    if finite_on_closure is None:
        finite_on_closure = map_finite_on_closure(f, d)
    reports, stats = classify(
        raster, comps, zip(samples, images), finite_on_closure, density_threshold, strict_bands=strict_bands
    )
    return ImageReport(f, d, viewport, curves, raster, reports, stats, finite_on_closure, samples, images)
