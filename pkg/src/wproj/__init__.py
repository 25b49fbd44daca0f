"""Exact point counts on hypersurfaces of weighted projective spaces over GF(q)."""

__version__ = "0.1.0"

from .errors import (  # noqa: E402
    BudgetError,
    EmptyDegreeError,
    ExtensionDegreeError,
    FieldSizeError,
    HomogeneityError,
    NotPrimeError,
    ParseError,
    UsageError,
    ZeroPolynomialError,
)
from .gf import Field, field_create, field_from_q, primitive_element, subgroup_data  # noqa: E402
from .wps import (  # noqa: E402
    CanonicalPoint,
    WeightSystem,
    canonicalize,
    distinguished_point,
    enumerate_points,
    pn,
    point_set,
    representatives,
)
from .wpoly import (  # noqa: E402
    WeightedPolynomial,
    evaluate,
    is_homogeneous,
    monomial_basis,
    parse_poly,
    product_of_forms,
    pullback,
    saturating_poly,
    twist,
)
from .counting import (  # noqa: E402
    audit_antecedent,
    audit_identities,
    audit_lesZi,
    audit_mondo,
    audit_preimage,
    bounds,
    count_zeros,
    partition_counts,
    preimage_count,
    unscrew,
)
from .search import eq_exhaustive, eq_random  # noqa: E402
