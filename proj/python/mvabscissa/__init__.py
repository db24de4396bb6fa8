"""Mean value abscissae: solve, classify, trace and scan F(b, c) = 0."""

from ._core import (
    Error,
    abscissae,
    classify,
    evaluate,
    fixed_point,
    guaranteed,
    normalize_expression,
    scan,
    taylor,
    trace,
)

__all__ = [
    "Error",
    "abscissae",
    "classify",
    "evaluate",
    "fixed_point",
    "guaranteed",
    "normalize_expression",
    "scan",
    "taylor",
    "trace",
]
