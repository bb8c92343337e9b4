"""Maximum and minimum modulus alternatives, checked on samples.

Boundary suprema and infima come from dense sampling; the gap between samples
is covered by ``L*h`` where ``h`` is the sample spacing and ``L`` a Lipschitz
estimate of ``f`` along the boundary from finite differences at four times the
density.
"""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .boundary import Disk, DomainSpec, Viewport, boundary_pieces, interior_samples
from .classify import ConsistencyError, Status, classify_image, map_finite_on_closure
from .maps import MapSpec, RationalExpr, RationalMap, parse_rational
from .sphere import DOUBLE, PrecisionCtx, XPoint

__all__ = [
    "HypothesisError",
    "PremiseError",
    "ModulusReport",
    "BoundaryStats",
    "boundary_modulus",
    "finmax_check",
    "minmp_dichotomy",
    "fta_zero_certificate",
    "FtaResult",
    "random_polynomial",
    "polynomial_expr",
    "root_radius",
]


class HypothesisError(ValueError):
    """The map is not finite on the closed domain."""


class PremiseError(ValueError):
    """The FTA radius does not separate ``|f(0)|`` from the boundary modulus."""


@dataclass
class BoundaryStats:
    sup: float
    inf: float
    lipschitz: float
    spacing: float
    err: float
    n: int

    @property
    def gap(self) -> float:
        return self.lipschitz * self.spacing


def _piece_points(piece, n: int) -> list[XPoint]:
    if piece.is_point:
        return [piece.at(0.0)]
    return [piece.at(j / n) for j in range(n + 1)]


def _modulus_along(f: MapSpec, pts: list[XPoint], ctx: PrecisionCtx):
    vals = f.evaluate_many(pts, ctx)
    mods, errs = [], []
    for r in vals:
        if r.value.infinite:
            mods.append(math.inf)
            errs.append(0.0)
        else:
            mods.append(float(abs(r.value.to_complex())))
            errs.append(r.err_radius)
    return vals, mods, errs


def boundary_modulus(f: MapSpec, d: DomainSpec, n: int = 1024, ctx: PrecisionCtx = DOUBLE) -> BoundaryStats:
    """``sup`` and ``inf`` of ``|f|`` over ``n`` samples per boundary piece."""
    sup, inf, L, h, err = 0.0, math.inf, 0.0, 0.0, 0.0
    for piece in boundary_pieces(d):
        pts = _piece_points(piece, n)
        _, mods, errs = _modulus_along(f, pts, ctx)
        sup = max(sup, max(mods))
        inf = min(inf, min(mods))
        err = max(err, max(errs))
        if piece.is_point:
            continue
        zs = [p.to_complex() for p in pts if not p.infinite]
        if len(zs) > 1:
            h = max(h, max(abs(b - a) for a, b in zip(zs, zs[1:])))
        # Lipschitz estimate at 4x density
        fine = _piece_points(piece, 4 * n)
        vals = f.evaluate_many(fine, ctx)
        for (za, ra), (zb, rb) in zip(zip(fine, vals), zip(fine[1:], vals[1:])):
            if za.infinite or zb.infinite or ra.value.infinite or rb.value.infinite:
                continue
            dz = abs(zb.to_complex() - za.to_complex())
            if dz > 0:
                L = max(L, abs(rb.value.to_complex() - ra.value.to_complex()) / dz)
    return BoundaryStats(sup, inf, L, h, err, n)


@dataclass
class ModulusReport:
    M: float
    m: float
    interior_max: float
    interior_min: float
    branch: str
    tol: float
    passed: bool | None = None
    notes: list[str] = field(default_factory=list)
    filled_fraction: float | None = None


def _interior_moduli(f, d, n, ctx):
    pts = interior_samples(d, n)
    _, mods, errs = _modulus_along(f, pts, ctx)
    return pts, mods, errs


def finmax_check(
    f: MapSpec, d: DomainSpec, n_boundary: int = 1024, n_interior: int = 2000, ctx: PrecisionCtx = DOUBLE
) -> ModulusReport:
    """``max |f|`` over interior samples never exceeds the boundary ``sup`` plus tolerance."""
    try:
        finite = map_finite_on_closure(f, d)
    except TypeError:
        finite = True
    if not finite:
        raise HypothesisError(f"{f.name} takes the value infinity on the closure of the domain")
    b = boundary_modulus(f, d, n_boundary, ctx)
    _, mods, errs = _interior_moduli(f, d, n_interior, ctx)
    if math.isinf(b.sup) or any(math.isinf(m) for m in mods):
        raise HypothesisError(f"{f.name} reached infinity on sampled points of the closure")
    tol = b.gap + b.err + max(errs, default=0.0)
    imax = max(mods)
    return ModulusReport(b.sup, b.inf, imax, min(mods), "n/a", tol, imax <= b.sup + tol)


def _disk_points(radius: float, n: int) -> list[complex]:
    from scipy.stats import qmc

    pts = qmc.Halton(d=2, scramble=False).random(n + 1)[1:]
    return [cmath.rect(radius * math.sqrt(u), 2 * math.pi * v) for u, v in pts]


def minmp_dichotomy(
    f: MapSpec,
    d: DomainSpec,
    n: int = 2000,
    n_boundary: int = 1024,
    ctx: PrecisionCtx = DOUBLE,
    n_probe: int = 64,
    resolution: int = 256,
) -> ModulusReport:
    """Decide which minimum-modulus alternative the samples support.

    ``containment`` when every interior sample has ``|f| >= m - tol``.
    ``fill`` when some sample goes below ``m - tol`` and the classifier puts
    probe points of the disk ``|w| < m`` in Filled components.  Anything else
    is ``inconclusive``.
    """
    b = boundary_modulus(f, d, n_boundary, ctx)
    _, mods, errs = _interior_moduli(f, d, n, ctx)
    tol = b.gap + b.err + max(errs, default=0.0)
    m, M = b.inf, b.sup
    imin = min(mods)
    imax = max(mods)
    if imin >= m - tol:
        return ModulusReport(M, m, imax, imin, "containment", tol, True)
    if not math.isfinite(m) or m <= 0:
        return ModulusReport(M, m, imax, imin, "inconclusive", tol, None, ["boundary infimum is zero"])
    half = 1.25 * m
    vp = Viewport(-half, -half, half, half, resolution, resolution)
    try:
        rep = classify_image(f, d, vp, n_witnesses=max(n, 4000), ctx=ctx)
    except ConsistencyError as exc:
        return ModulusReport(M, m, imax, imin, "inconclusive", tol, False, [str(exc)])
    statuses = []
    for w in _disk_points(m, n_probe):
        c = rep.component_at(w)
        if c is not None:
            statuses.append(c.status)
    notes = []
    if not statuses or any(s is Status.UNDETERMINED for s in statuses):
        notes.append("classifier left probe points undetermined")
        return ModulusReport(M, m, imax, imin, "inconclusive", tol, None, notes)
    ok = all(s is Status.FILLED for s in statuses)
    if not ok:
        notes.append("probe points of the disk fell in Excluded components")
    return ModulusReport(M, m, imax, imin, "fill", tol, ok, notes, statuses.count(Status.FILLED) / len(statuses))


# ------------------------------------------------------------ FTA


@dataclass
class FtaResult:
    R: float
    f0: float
    boundary_min: float
    tol: float
    status: Status | None
    passed: bool
    viewport: Viewport


def fta_zero_certificate(
    poly: MapSpec, R: float, n_boundary: int = 4096, n_witnesses: int = 4000, ctx: PrecisionCtx = DOUBLE
) -> FtaResult:
    """Show ``0`` lies in a Filled component of the image of ``|z| < R``.

    The premise ``min_{|z|=R} |f| >= |f(0)|`` is refuted only when the
    sampled minimum plus the sampling-gap allowance stays below ``|f(0)|``;
    then a :class:`PremiseError` asks for a larger ``R``.  Equality is enough:
    a nonconstant polynomial cannot attain its minimum modulus over the closed
    disk at the center unless that minimum is 0.  The curve must also stay
    clear of ``0`` so that ``0`` has a component at all.
    """
    if isinstance(poly, RationalMap) and poly.rational.den.degree > 0:
        raise HypothesisError(f"{poly.name} is not a polynomial")
    d = Disk(float(R))
    b = boundary_modulus(poly, d, n_boundary, ctx)
    r0 = poly.evaluate(XPoint(0.0, 0.0), ctx)
    if r0.value.infinite or math.isinf(b.sup):
        raise HypothesisError("polynomial expected; got a pole on the closed disk")
    f0 = float(abs(r0.value.to_complex()))
    tol = b.gap + b.err + r0.err_radius
    if b.inf + tol < f0 or not b.inf - tol > 0:
        raise PremiseError(
            f"choose larger R: boundary minimum {b.inf:.6g} (allowance {tol:.3g}) is below |f(0)| = {f0:.6g}"
        )
    sep = b.inf - tol
    # whole image when 0 sits well clear of the curve at this scale; else zoom in on 0
    half = 1.1 * b.sup
    if sep < 8 * (2 * half / 256):
        half = 32 * sep
    vp = Viewport(-half, -half, half, half, 256, 256)
    # coils of a high-degree image may overlap into thick bands away from 0;
    # only the component of 0 matters here
    rep = classify_image(poly, d, vp, n_witnesses=n_witnesses, ctx=ctx, strict_bands=False)
    st = rep.status_at(0j)
    return FtaResult(float(R), f0, b.inf, tol, st, st is Status.FILLED, vp)


def _dec(x: float, digits: int = 6) -> str:
    return f"{abs(x):.{digits}f}"


def polynomial_expr(coeffs: Sequence[complex], digits: int = 6) -> str:
    """Expression text for ``sum c_k z^k`` with decimal coefficients."""
    parts = []
    for k, c in enumerate(coeffs):
        re, im = round(c.real, digits), round(c.imag, digits)
        if re == 0 and im == 0:
            continue
        lit = []
        if re:
            lit.append(("-" if re < 0 else "+") + _dec(re, digits))
        if im:
            lit.append(("-" if im < 0 else "+") + _dec(im, digits) + "i")
        c_txt = "".join(lit).lstrip("+")
        mono = "" if k == 0 else ("z" if k == 1 else f"z^{k}")
        parts.append(f"({c_txt})" + ("*" + mono if mono else ""))
    return " + ".join(parts) if parts else "0"


def random_polynomial(rng: np.random.Generator, degree: int, lead_min: float = 0.5) -> tuple[RationalExpr, list[complex]]:
    """Coefficients uniform in ``[-1,1]^2``; the leading one has modulus at least ``lead_min``."""
    coeffs = [complex(*rng.uniform(-1, 1, 2)) for _ in range(degree + 1)]
    while abs(coeffs[-1]) < lead_min:
        coeffs[-1] = complex(*rng.uniform(-1, 1, 2))
    coeffs = [complex(round(c.real, 6), round(c.imag, 6)) for c in coeffs]
    return parse_rational(polynomial_expr(coeffs)), coeffs


def root_radius(coeffs: Sequence[complex]) -> float:
    """``2 (1 + sum_{k<n} |c_k / c_n|)``, a safe radius enclosing every root."""
    lead = abs(coeffs[-1])
    return 2 * (1 + sum(abs(c) for c in coeffs[:-1]) / lead)
