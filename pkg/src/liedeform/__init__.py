"""Exact computations with Lie algebras written as codifferentials.

A Lie bracket on ``V`` is a degree-one coderivation ``d`` of the exterior
coalgebra with ``[d, d] = 0``.  The package computes its adjoint cohomology,
classifies the 3-dimensional case with explicit basis changes, and builds
miniversal deformations together with the relations on their base.
"""

__version__ = "0.1.0"

from .classify3 import (  # noqa: E402
    ZERO_PRODUCT,
    CanonicalClass,
    Witness,
    canonical,
    classify,
    family_invariant,
    induced_q,
    transport,
    verify_equiv,
)
from .coder import (  # noqa: E402
    Codifferential,
    Coderivation,
    b_vector3,
    bracket,
    compose,
    extend_apply,
    jacobi_residual,
)
from .cohomology import coboundary, coboundary_matrix, cohomology_report, splitting  # noqa: E402
from .deform import (  # noqa: E402
    Branch,
    DeformedCodifferential,
    MiniversalResult,
    analyze_branch,
    bracket_decompose,
    infinitesimal,
    miniversal,
    moduli_graph,
)
from .errors import *  # noqa: E402,F401,F403
from .exterior import ordinal_of, s_index, unshuffles  # noqa: E402
from .scalars import MultiPoly, ParamName, PolyRing, RatFun, param  # noqa: E402

__all__ = [
    "Branch",
    "CanonicalClass",
    "Codifferential",
    "Coderivation",
    "DeformedCodifferential",
    "MiniversalResult",
    "MultiPoly",
    "ParamName",
    "PolyRing",
    "RatFun",
    "Witness",
    "ZERO_PRODUCT",
    "analyze_branch",
    "b_vector3",
    "bracket",
    "bracket_decompose",
    "canonical",
    "classify",
    "coboundary",
    "coboundary_matrix",
    "cohomology_report",
    "compose",
    "extend_apply",
    "family_invariant",
    "induced_q",
    "infinitesimal",
    "jacobi_residual",
    "miniversal",
    "moduli_graph",
    "ordinal_of",
    "param",
    "s_index",
    "splitting",
    "transport",
    "unshuffles",
    "verify_equiv",
]
