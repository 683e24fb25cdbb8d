"""LLT Catalanimals: raising-operator expressions for omega nabla^m of LLT polynomials."""

from .catalanimal import (
    Catalanimal,
    CapExceeded,
    CubTranscript,
    CuddlyReport,
    GLCharPoly,
    build_llt,
    build_llt_mn,
    check_cuddly,
    expected_cub,
    h_pol,
    join,
    principal_spec,
    render,
    restrict,
    verify_cub,
    wheel_check,
)
from .llt import coproduct_statistic, llt, super_llt
from .macnabla import DegreeCapExceeded, modified_macdonald, nabla_pow
from .qtcoeff import QtPoly, QtRational, parse_qt
from .shapes import SkewShape, SkewTuple, StretchSpec, lower_ideals, reading_order, stats, stretch
from .symfunc import SymFunc, omega, plethys

__all__ = [
    "Catalanimal", "CapExceeded", "CubTranscript", "CuddlyReport", "GLCharPoly", "build_llt",
    "build_llt_mn", "check_cuddly", "expected_cub", "h_pol", "join", "principal_spec", "render",
    "restrict", "verify_cub", "wheel_check", "coproduct_statistic", "llt", "super_llt",
    "DegreeCapExceeded", "modified_macdonald", "nabla_pow", "QtPoly", "QtRational", "parse_qt",
    "SkewShape", "SkewTuple", "StretchSpec", "lower_ideals", "reading_order", "stats", "stretch",
    "SymFunc", "omega", "plethys",
]
