"""Filling/containment dichotomy for images of holomorphic maps.

Rational maps and the Haagerup power series are evaluated with certified error
radii; boundary images are traced and rasterized, and each component of their
complement is classified as Filled or Excluded from interior witnesses.
"""
__version__ = "0.1.0"

from .sphere import DOUBLE, INF, AngleSector, PrecisionCtx, XPoint, arg_of, in_sector, principal_power_neg
from .maps import EvalResult, HaagerupSeries, Joukowski, QuadrantRational, RationalExpr, parse_rational
from .boundary import Disk, DiskComplement, FirstQuadrant, HalfStrip, PuncturedSphere, Rectangle, Viewport
from .classify import ConsistencyError, ResolutionError, Status, classify_image, expect_outcome

__all__ = [
    "__version__",
    "DOUBLE",
    "INF",
    "AngleSector",
    "PrecisionCtx",
    "XPoint",
    "arg_of",
    "in_sector",
    "principal_power_neg",
    "EvalResult",
    "HaagerupSeries",
    "Joukowski",
    "QuadrantRational",
    "RationalExpr",
    "parse_rational",
    "Disk",
    "DiskComplement",
    "FirstQuadrant",
    "HalfStrip",
    "PuncturedSphere",
    "Rectangle",
    "Viewport",
    "ConsistencyError",
    "ResolutionError",
    "Status",
    "classify_image",
    "expect_outcome",
]
