"""Shapes of Vasicek forward and yield curves."""

from ._core import (
    InadmissibleShape,
    NumericalInconsistency,
    NumericalInfeasibility,
    RhoOutOfRange,
    admissible_shapes,
    classify,
    construct,
    curves,
    head_subsequence,
    interpolate,
    reduce,
    shape_of,
    sign_scan,
    simulate,
    subsequence,
    sweep,
    tail_subsequence,
)

__all__ = [
    "InadmissibleShape",
    "NumericalInconsistency",
    "NumericalInfeasibility",
    "RhoOutOfRange",
    "admissible_shapes",
    "classify",
    "construct",
    "curves",
    "head_subsequence",
    "interpolate",
    "reduce",
    "shape_of",
    "sign_scan",
    "simulate",
    "subsequence",
    "sweep",
    "tail_subsequence",
]
