"""Dual complexes of SNC divisors and the finitely generated shadows of
negative K-theory.

The layers, bottom up: exact integer linear algebra (``intmat``), finitely
generated abelian groups (``abgroup``), chain complexes and spectral pages
(``chaincx``), divisor combinatorics with blowups (``snc``), the KH report
assembly (``khasm``), the NK correction (``nk``), and a JSON CLI (``cli``).
"""

from .abgroup import (
    FgAbGroup,
    Hom,
    HomAnalysis,
    compose,
    direct_sum,
    group_from_presentation,
    hom_analyze,
    presentation,
    presentation_matrix,
    subquotient,
)
from .chaincx import (
    ChainComplex,
    NonComplexError,
    SpectralPage,
    SupportViolationError,
    TaggedGroup,
    cohomology,
    e2_page,
    e3_top_corner,
    euler_characteristic,
    homology,
    validate_complex,
)
from .intmat import IntMatrix, SmithForm, smith_diagonal, smith_normal_form
from .khasm import (
    KhReport,
    PicardInput,
    PicardLevel,
    TorusDescriptor,
    kh_report,
    kh_top,
    ns_analysis,
    one_motive_descriptor,
    torus_descriptor,
)
from .nk import DuBoisTable, KReport, k_report, nk_descriptor
from .snc import (
    BlowupRecord,
    DualComplex,
    SncDivisor,
    Stratum,
    alt_chain_complex,
    blowup_point_on_double_curve,
    blowup_stratum_component,
    build_dual_complex,
    find_bad_intersections,
    resolve_to_simplicial,
    validate_snc,
)

__version__ = "0.1.0"

__all__ = [
    "BlowupRecord",
    "ChainComplex",
    "DuBoisTable",
    "DualComplex",
    "FgAbGroup",
    "Hom",
    "HomAnalysis",
    "IntMatrix",
    "KReport",
    "KhReport",
    "NonComplexError",
    "PicardInput",
    "PicardLevel",
    "SmithForm",
    "SncDivisor",
    "SpectralPage",
    "Stratum",
    "SupportViolationError",
    "TaggedGroup",
    "TorusDescriptor",
    "alt_chain_complex",
    "blowup_point_on_double_curve",
    "blowup_stratum_component",
    "build_dual_complex",
    "cohomology",
    "compose",
    "direct_sum",
    "e2_page",
    "e3_top_corner",
    "euler_characteristic",
    "find_bad_intersections",
    "group_from_presentation",
    "hom_analyze",
    "homology",
    "k_report",
    "kh_report",
    "kh_top",
    "nk_descriptor",
    "ns_analysis",
    "one_motive_descriptor",
    "presentation",
    "presentation_matrix",
    "resolve_to_simplicial",
    "smith_diagonal",
    "smith_normal_form",
    "subquotient",
    "torus_descriptor",
    "validate_complex",
    "validate_snc",
]
