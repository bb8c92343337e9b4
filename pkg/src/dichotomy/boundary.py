"""Domains, their boundary pieces, and adaptive tracing of boundary images."""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np
from scipy.stats import qmc

from .maps import MapSpec
from .sphere import DOUBLE, INF, PrecisionCtx, XPoint

__all__ = [
    "Viewport",
    "PointGeom",
    "Segment",
    "Ray",
    "Circle",
    "BoundaryPiece",
    "DomainSpec",
    "PuncturedSphere",
    "FirstQuadrant",
    "HalfStrip",
    "Disk",
    "DiskComplement",
    "Rectangle",
    "TracedCurve",
    "boundary_pieces",
    "trace_image",
    "interior_samples",
]

HALF_PI = math.pi / 2


@dataclass(frozen=True)
class Viewport:
    """Axis-aligned window ``[xmin, xmax] x [ymin, ymax]`` of the w-plane."""

    xmin: float
    ymin: float
    xmax: float
    ymax: float
    nx: int = 256
    ny: int = 256

    def __post_init__(self):
        if not (self.xmax > self.xmin and self.ymax > self.ymin):
            raise ValueError("viewport must have positive area")
        if self.nx < 16 or self.ny < 16:
            raise ValueError("viewport resolution must be at least 16 per axis")

    @classmethod
    def square(cls, half: float, n: int = 256, center: complex = 0j) -> "Viewport":
        return cls(center.real - half, center.imag - half, center.real + half, center.imag + half, n, n)

    @property
    def center(self) -> complex:
        return complex((self.xmin + self.xmax) / 2, (self.ymin + self.ymax) / 2)

    @property
    def circumradius(self) -> float:
        return math.hypot(self.xmax - self.xmin, self.ymax - self.ymin) / 2

    @property
    def cell(self) -> float:
        """Larger of the two cell side lengths."""
        return max((self.xmax - self.xmin) / self.nx, (self.ymax - self.ymin) / self.ny)

    def contains(self, w: complex, pad: float = 0.0) -> bool:
        return (
            self.xmin - pad <= w.real <= self.xmax + pad
            and self.ymin - pad <= w.imag <= self.ymax + pad
        )

    def cell_of(self, w: complex) -> tuple[int, int] | None:
        """``(row, col)`` of the cell holding ``w``; row 0 is the bottom edge."""
        if not self.contains(w):
            return None
        c = int((w.real - self.xmin) / (self.xmax - self.xmin) * self.nx)
        r = int((w.imag - self.ymin) / (self.ymax - self.ymin) * self.ny)
        return min(r, self.ny - 1), min(c, self.nx - 1)

    def cell_center(self, row: int, col: int) -> complex:
        dx = (self.xmax - self.xmin) / self.nx
        dy = (self.ymax - self.ymin) / self.ny
        return complex(self.xmin + (col + 0.5) * dx, self.ymin + (row + 0.5) * dy)

    def refined(self, factor: int = 2) -> "Viewport":
        return Viewport(self.xmin, self.ymin, self.xmax, self.ymax, self.nx * factor, self.ny * factor)


# ------------------------------------------------------------- geometries


@dataclass(frozen=True)
class PointGeom:
    z: XPoint

    def at(self, t: float) -> XPoint:
        return self.z

    def distance(self, z: complex) -> float:
        return math.inf if self.z.infinite else abs(z - self.z.to_complex())


@dataclass(frozen=True)
class Segment:
    """Straight segment ``a -> b``; ``at`` covers the closed segment."""

    a: complex
    b: complex

    def at(self, t: float) -> XPoint:
        return XPoint.of(self.a + (self.b - self.a) * t)

    def distance(self, z: complex) -> float:
        d = self.b - self.a
        s = ((z - self.a) * d.conjugate()).real / abs(d) ** 2
        return abs(z - (self.a + d * min(max(s, 0.0), 1.0)))


@dataclass(frozen=True)
class Ray:
    """``origin + direction * t/(1-t)``; ``t = 1`` gives the point at infinity."""

    origin: complex
    direction: complex

    def at(self, t: float) -> XPoint:
        if t >= 1:
            return INF
        s = t / (1 - t)
        o, d = self.origin, self.direction
        # componentwise so that a real or imaginary part stays exact
        return XPoint(o.real + d.real * s, o.imag + d.imag * s)

    def distance(self, z: complex) -> float:
        d = self.direction / abs(self.direction)
        s = max(((z - self.origin) * d.conjugate()).real, 0.0)
        return abs(z - (self.origin + d * s))


@dataclass(frozen=True)
class Circle:
    center: complex
    radius: float

    def at(self, t: float) -> XPoint:
        return XPoint.of(self.center + self.radius * cmath.exp(2j * math.pi * t))

    def distance(self, z: complex) -> float:
        return abs(abs(z - self.center) - self.radius)


@dataclass(frozen=True)
class BoundaryPiece:
    id: str
    geometry: PointGeom | Segment | Ray | Circle

    @property
    def is_point(self) -> bool:
        return isinstance(self.geometry, PointGeom)

    def at(self, t: float) -> XPoint:
        return self.geometry.at(t)


# ----------------------------------------------------------------- domains


def _halton(n: int, skip: int = 1) -> np.ndarray:
    h = qmc.Halton(d=2, scramble=False)
    if skip:
        h.fast_forward(skip)
    return h.random(n)


def _golden(k: int) -> float:
    return (k * 0.6180339887498949) % 1.0


def _log_radius(u: float, span: float) -> float:
    # cubic concentrates samples around |z| = 1 while reaching exp(+-span)
    return math.exp(span * (2 * u - 1) ** 3)


class DomainSpec:
    """An open subset ``D`` of the sphere with its boundary decomposition."""

    includes_infinity = False
    infinity_in_closure = False

    def contains(self, z: XPoint) -> bool:
        raise NotImplementedError

    def closure_contains(self, z: complex, tol: float = 1e-9) -> bool:
        raise NotImplementedError

    def pieces(self) -> list[BoundaryPiece]:
        raise NotImplementedError

    def bulk(self, n: int) -> list[XPoint]:
        raise NotImplementedError

    def approach(self, n: int) -> list[XPoint]:
        raise NotImplementedError


@dataclass(frozen=True)
class PuncturedSphere(DomainSpec):
    """The sphere minus ``{0, inf}``."""

    infinity_in_closure = True
    span: float = math.log(1e4)

    def contains(self, z):
        return not z.infinite and (z.re != 0 or z.im != 0)

    def closure_contains(self, z, tol=1e-9):
        return True

    def pieces(self):
        return [BoundaryPiece("{0}", PointGeom(XPoint(0.0, 0.0))), BoundaryPiece("{inf}", PointGeom(INF))]

    def bulk(self, n):
        out = []
        for u, v in _halton(n):
            out.append(XPoint.of(cmath.rect(_log_radius(u, self.span), 2 * math.pi * v)))
        return out

    def approach(self, n):
        out = []
        for k in range(n):
            e = 4 + (k // 2) % 8
            r = 10.0 ** (e if k % 2 else -e)
            out.append(XPoint.of(cmath.rect(r, 2 * math.pi * _golden(k + 1))))
        return out


@dataclass(frozen=True)
class FirstQuadrant(DomainSpec):
    """``Re z > 0, Im z > 0``; boundary ``{inf}``, ``[0, inf)`` and ``i(0, inf)``."""

    infinity_in_closure = True
    span: float = math.log(1e4)

    def contains(self, z):
        return not z.infinite and z.re > 0 and z.im > 0

    def closure_contains(self, z, tol=1e-9):
        return z.real >= -tol and z.imag >= -tol

    def pieces(self):
        return [
            BoundaryPiece("{inf}", PointGeom(INF)),
            BoundaryPiece("Γ1", Ray(0j, 1 + 0j)),
            BoundaryPiece("Γ2", Ray(0j, 1j)),
        ]

    def bulk(self, n):
        out = []
        for u, v in _halton(n):
            out.append(XPoint.of(cmath.rect(_log_radius(u, self.span), HALF_PI * v)))
        return out

    def approach(self, n):
        out = []
        for k in range(n):
            which = k % 4
            depth = 2.0 ** -(1 + (k // 4) % 30)
            phase = _golden(k + 1)
            if which == 0:  # towards the real axis
                z = cmath.rect(_log_radius(phase, self.span), HALF_PI * depth)
            elif which == 1:  # towards the imaginary axis
                z = cmath.rect(_log_radius(phase, self.span), HALF_PI * (1 - depth))
            elif which == 2:  # towards infinity
                z = cmath.rect(1 / depth ** 0.5, HALF_PI * (0.05 + 0.9 * phase))
            else:  # towards the corner 0
                z = cmath.rect(depth ** 0.5, HALF_PI * (0.05 + 0.9 * phase))
            out.append(XPoint.of(z))
        return out


@dataclass(frozen=True)
class HalfStrip(DomainSpec):
    """``0 < Re z < pi/2, Im z > 0`` with boundary pieces Γ1..Γ5."""

    infinity_in_closure = True
    span: float = math.log(1e4)

    def contains(self, z):
        return not z.infinite and 0 < z.re < HALF_PI and z.im > 0

    def closure_contains(self, z, tol=1e-9):
        return -tol <= z.real <= HALF_PI + tol and z.imag >= -tol

    def pieces(self):
        return [
            BoundaryPiece("Γ1", PointGeom(XPoint(0.0, 0.0))),
            BoundaryPiece("Γ2", Ray(0j, 1j)),
            BoundaryPiece("Γ3", PointGeom(INF)),
            BoundaryPiece("Γ4", Ray(complex(HALF_PI, 0), 1j)),
            BoundaryPiece("Γ5", Segment(0j, complex(HALF_PI, 0))),
        ]

    def bulk(self, n):
        return [XPoint(HALF_PI * u, _log_radius(v, self.span)) for u, v in _halton(n)]

    def approach(self, n):
        out = []
        for k in range(n):
            which = k % 5
            depth = 2.0 ** -(1 + (k // 5) % 30)
            phase = _golden(k + 1)
            y = _log_radius(phase, self.span)
            if which == 0:  # Γ2
                z = XPoint(HALF_PI * depth, y)
            elif which == 1:  # Γ4
                z = XPoint(HALF_PI * (1 - depth), y)
            elif which == 2:  # Γ5
                z = XPoint(HALF_PI * (0.02 + 0.96 * phase), depth)
            elif which == 3:  # Γ3 = inf
                z = XPoint(HALF_PI * (0.02 + 0.96 * phase), 1 / depth)
            else:  # Γ1 = 0
                z = XPoint(HALF_PI * depth * (0.1 + 0.9 * phase), depth)
            out.append(z)
        return out


@dataclass(frozen=True)
class Disk(DomainSpec):
    radius: float = 1.0

    def __post_init__(self):
        if not self.radius > 0:
            raise ValueError("radius must be positive")

    def contains(self, z):
        return not z.infinite and abs(z) < self.radius

    def closure_contains(self, z, tol=1e-9):
        return abs(z) <= self.radius + tol

    def pieces(self):
        return [BoundaryPiece("circle", Circle(0j, self.radius))]

    def bulk(self, n):
        pts = _halton(n, skip=0)  # first Halton point is the center
        return [XPoint.of(cmath.rect(self.radius * math.sqrt(u), 2 * math.pi * v)) for u, v in pts]

    def approach(self, n):
        return [
            XPoint.of(cmath.rect(self.radius * (1 - 2.0 ** -(1 + k % 30)), 2 * math.pi * _golden(k + 1)))
            for k in range(n)
        ]


@dataclass(frozen=True)
class DiskComplement(DomainSpec):
    """``|z| > r`` together with the point at infinity."""

    radius: float = 1.0
    includes_infinity = True
    infinity_in_closure = True

    def __post_init__(self):
        if not self.radius > 0:
            raise ValueError("radius must be positive")

    def contains(self, z):
        return z.infinite or abs(z) > self.radius

    def closure_contains(self, z, tol=1e-9):
        return abs(z) >= self.radius - tol

    def pieces(self):
        return [BoundaryPiece("circle", Circle(0j, self.radius))]

    def bulk(self, n):
        out = []
        for u, v in _halton(n, skip=0):
            out.append(INF if u == 0 else XPoint.of(cmath.rect(self.radius / math.sqrt(u), 2 * math.pi * v)))
        return out

    def approach(self, n):
        return [
            XPoint.of(cmath.rect(self.radius * (1 + 2.0 ** -(1 + k % 30)), 2 * math.pi * _golden(k + 1)))
            for k in range(n)
        ]


@dataclass(frozen=True)
class Rectangle(DomainSpec):
    """Open axis-aligned rectangle with opposite corners ``lo`` and ``hi``."""

    lo: complex = 0j
    hi: complex = 1 + 1j

    def __post_init__(self):
        if not (self.hi.real > self.lo.real and self.hi.imag > self.lo.imag):
            raise ValueError("rectangle corners must satisfy lo < hi componentwise")

    def contains(self, z):
        return (not z.infinite) and self.lo.real < z.re < self.hi.real and self.lo.imag < z.im < self.hi.imag

    def closure_contains(self, z, tol=1e-9):
        return (
            self.lo.real - tol <= z.real <= self.hi.real + tol
            and self.lo.imag - tol <= z.imag <= self.hi.imag + tol
        )

    def pieces(self):
        a, c = self.lo, self.hi
        b, d = complex(c.real, a.imag), complex(a.real, c.imag)
        return [
            BoundaryPiece("bottom", Segment(a, b)),
            BoundaryPiece("right", Segment(b, c)),
            BoundaryPiece("top", Segment(c, d)),
            BoundaryPiece("left", Segment(d, a)),
        ]

    def _affine(self, u, v) -> XPoint:
        return XPoint(self.lo.real + u * (self.hi.real - self.lo.real), self.lo.imag + v * (self.hi.imag - self.lo.imag))

    def bulk(self, n):
        return [self._affine(u, v) for u, v in _halton(n)]

    def approach(self, n):
        out = []
        for k in range(n):
            depth = 2.0 ** -(2 + (k // 4) % 30)
            phase = _golden(k + 1)
            u, v = [(phase, depth), (1 - depth, phase), (phase, 1 - depth), (depth, phase)][k % 4]
            out.append(self._affine(u, v))
        return out


def boundary_pieces(d: DomainSpec) -> list[BoundaryPiece]:
    """Pairwise disjoint pieces whose union is the boundary of ``d``."""
    return d.pieces()


def interior_samples(d: DomainSpec, n: int, approach_fraction: float = 0.25) -> list[XPoint]:
    """``n`` deterministic points of ``d``: quasi-uniform bulk plus sequences
    running towards every boundary piece (and towards infinity)."""
    if n < 1:
        raise ValueError("n must be positive")
    n_edge = int(n * approach_fraction) if n >= 4 else 0
    pts = d.bulk(n - n_edge) + d.approach(n_edge)
    return [z for z in pts if d.contains(z)]


# ------------------------------------------------------------------ traces


@dataclass
class TracedCurve:
    """Image of one boundary piece clipped to what matters for a viewport.

    ``polylines`` are runs of image points (complex), broken wherever the image
    escapes (reaches infinity or leaves four times the viewport circumradius);
    ``params`` hold the matching parameter values.
    """

    piece_id: str
    polylines: list[list[complex]] = field(default_factory=list)
    params: list[list[float]] = field(default_factory=list)
    escapes: list[tuple[float, float]] = field(default_factory=list)
    low_confidence: bool = False
    max_err: float = 0.0

    def segments(self) -> list[tuple[complex, complex]]:
        segs = []
        for line in self.polylines:
            if len(line) == 1:
                segs.append((line[0], line[0]))
            segs.extend(zip(line[:-1], line[1:]))
        return segs


def trace_image(
    f: MapSpec,
    piece: BoundaryPiece,
    viewport: Viewport,
    tol: float | None = None,
    ctx: PrecisionCtx = DOUBLE,
    max_depth: int = 24,
    initial: int = 64,
) -> TracedCurve:
    """Adaptive bisection of ``piece``'s parameter until neighbouring image
    points inside the viewport are within ``tol``."""
    if tol is None:
        tol = viewport.cell / 2
    if not tol > 0:
        raise ValueError("tol must be positive")
    center, far = viewport.center, 4 * viewport.circumradius
    curve = TracedCurve(piece.id)

    def image(t: float):
        r = f.evaluate(piece.at(t), ctx)
        if r.value.infinite or not math.isfinite(r.err_radius):
            return None
        w = r.value.to_complex()
        if abs(w - center) > far:
            return None
        curve.max_err = max(curve.max_err, r.err_radius)
        return w

    if piece.is_point:
        w = image(0.0)
        if w is None:
            curve.escapes.append((0.0, 1.0))
        elif viewport.contains(w):
            curve.polylines.append([w])
            curve.params.append([0.0])
        return curve

    samples: list[tuple[float, complex | None]] = []
    pad = tol

    def needs_split(wa, wb) -> bool:
        if wa is None and wb is None:
            return False
        if wa is None or wb is None:
            w = wa if wb is None else wb
            return abs(w - center) <= viewport.circumradius + pad
        if abs(wb - wa) <= tol:
            return False
        lo_x, hi_x = min(wa.real, wb.real), max(wa.real, wb.real)
        lo_y, hi_y = min(wa.imag, wb.imag), max(wa.imag, wb.imag)
        return not (
            hi_x < viewport.xmin - pad
            or lo_x > viewport.xmax + pad
            or hi_y < viewport.ymin - pad
            or lo_y > viewport.ymax + pad
        )

    ts = [i / initial for i in range(initial + 1)]
    ws = [image(t) for t in ts]
    samples.append((ts[0], ws[0]))
    for i in range(initial):
        # explicit stack keeps the output in parameter order
        stack = [(ts[i], ws[i], ts[i + 1], ws[i + 1], 0)]
        while stack:
            a, wa, b, wb, depth = stack.pop()
            if needs_split(wa, wb):
                if depth >= max_depth:
                    curve.low_confidence = True
                else:
                    m = (a + b) / 2
                    wm = image(m)
                    stack.append((m, wm, b, wb, depth + 1))
                    stack.append((a, wa, m, wm, depth + 1))
                    continue
            samples.append((b, wb))

    run_w: list[complex] = []
    run_t: list[float] = []
    esc_start = None
    for t, w in samples:
        if w is None:
            if run_w:
                curve.polylines.append(run_w)
                curve.params.append(run_t)
                run_w, run_t = [], []
            if esc_start is None:
                esc_start = t
            esc_end = t
        else:
            if esc_start is not None:
                curve.escapes.append((esc_start, esc_end))
                esc_start = None
            run_w.append(w)
            run_t.append(t)
    if run_w:
        curve.polylines.append(run_w)
        curve.params.append(run_t)
    if esc_start is not None:
        curve.escapes.append((esc_start, esc_end))
    return curve
