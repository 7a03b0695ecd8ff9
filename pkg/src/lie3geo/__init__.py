"""Left-invariant Riemannian geometry of three-dimensional Lie groups.

The package computes, for a 3D Lie algebra with an inner product: the
Levi-Civita connection and curvature of the corresponding left-invariant
metric, the Bianchi classification (types I through IX), and the left-
invariant conformal foliations by geodesics whose existence characterizes
which groups admit harmonic morphisms onto surfaces (every type except IV
and VI does, for a suitable metric).
"""

from .algebra import (
    DIM,
    JACOBI_TOL,
    CatalogEntry,
    MetricSpec,
    NotLieAlgebraError,
    StructureConstants,
    ad_matrix,
    bracket,
    catalog,
    catalog_info,
    catalog_names,
    change_basis,
    constants_from_brackets,
    jacobi_residual,
    killing_form,
    orthonormal_frame,
    orthonormalize,
    trace_form,
)
from .bianchi import (
    BianchiType,
    MilnorDecomposition,
    classify,
    milnor_decompose,
    same_type,
)
from .geometry import (
    ConnectionCoefficients,
    CurvatureReport,
    connection,
    curvature,
    sectional,
)
from .foliation import (
    AdaptedBracketParams,
    FoliationCandidate,
    FoliationFamily,
    FoliationReport,
    adapt_basis,
    adapted_constants,
    admits_harmonic_morphism,
    classify_family,
    enumerate_families,
    jacobi_constraints,
    random_metrics,
    residuals,
    search_directions,
)

__version__ = "0.1.0"

__all__ = [
    "DIM",
    "JACOBI_TOL",
    "CatalogEntry",
    "MetricSpec",
    "NotLieAlgebraError",
    "StructureConstants",
    "ad_matrix",
    "bracket",
    "catalog",
    "catalog_info",
    "catalog_names",
    "change_basis",
    "constants_from_brackets",
    "jacobi_residual",
    "killing_form",
    "orthonormal_frame",
    "orthonormalize",
    "trace_form",
    "BianchiType",
    "MilnorDecomposition",
    "classify",
    "milnor_decompose",
    "same_type",
    "ConnectionCoefficients",
    "CurvatureReport",
    "connection",
    "curvature",
    "sectional",
    "AdaptedBracketParams",
    "FoliationCandidate",
    "FoliationFamily",
    "FoliationReport",
    "adapt_basis",
    "adapted_constants",
    "admits_harmonic_morphism",
    "classify_family",
    "enumerate_families",
    "jacobi_constraints",
    "random_metrics",
    "residuals",
    "search_directions",
    "__version__",
]
