"""Exact meet/join matrix factorizations and eigenvalue bounds on finite posets."""

from .bounds import (
    Disk,
    Inapplicable,
    fibonacci_bound,
    gcd_lcm_bound,
    gerschgorin_disks,
    global_bounds,
    kn_constants,
    pencil_constants,
)
from .errors import (
    CycleError,
    HypothesisError,
    LatspecError,
    MissingMeetError,
    OrderingError,
    ParseError,
    PosetError,
)
from .factory import FactorizationBundle, WeightedSubset, factorize, join_matrix, meet_matrix
from .poset import FinitePoset, PointFunction, from_covers, from_relation
from .report import AnalysisRequest, ReportDocument, emit_disks_svg, parse_poset_file, run
from .spectral import Spectrum, inertia_prediction, solve

__version__ = "0.1.0"

__all__ = [
    "AnalysisRequest",
    "CycleError",
    "Disk",
    "FactorizationBundle",
    "FinitePoset",
    "HypothesisError",
    "Inapplicable",
    "LatspecError",
    "MissingMeetError",
    "OrderingError",
    "ParseError",
    "PointFunction",
    "PosetError",
    "ReportDocument",
    "Spectrum",
    "WeightedSubset",
    "emit_disks_svg",
    "factorize",
    "fibonacci_bound",
    "from_covers",
    "from_relation",
    "gcd_lcm_bound",
    "gerschgorin_disks",
    "global_bounds",
    "inertia_prediction",
    "join_matrix",
    "kn_constants",
    "meet_matrix",
    "parse_poset_file",
    "pencil_constants",
    "run",
    "solve",
]
