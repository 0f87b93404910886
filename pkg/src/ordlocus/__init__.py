"""Holonomy extension loci of knot exteriors and orderable Dehn fillings."""

from .alexander import AlexanderPoint, alexander_points, alexander_polynomial
from .locus import Arc, BuildOptions, Locus, build_locus, dinfty_reduce, validate_locus
from .orderability import (
    OrderableReport,
    SlopeHit,
    alexander_arc_check,
    el_line_hits,
    line_hits,
    orderable_slopes,
)
from .presentations import Presentation, PresentationError, parse_presentation, two_bridge

__version__ = "0.1.0"

__all__ = [
    "AlexanderPoint",
    "Arc",
    "BuildOptions",
    "Locus",
    "OrderableReport",
    "Presentation",
    "PresentationError",
    "SlopeHit",
    "alexander_arc_check",
    "alexander_points",
    "alexander_polynomial",
    "build_locus",
    "dinfty_reduce",
    "el_line_hits",
    "line_hits",
    "orderable_slopes",
    "parse_presentation",
    "two_bridge",
    "validate_locus",
]
