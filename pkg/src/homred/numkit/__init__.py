"""Numerical substrate: jets, small linear algebra, tolerances and sampling."""

from .jets import (
    Jet,
    JetDomainError,
    as_jet,
    concatenate,
    cos,
    einsum,
    exp,
    field_along,
    inv,
    jacobian_at,
    jet_lift,
    log,
    matmul,
    outer,
    power,
    reciprocal,
    sin,
    sqrt,
    stack,
    value_of,
)
from .linalg import (
    NotPositiveDefiniteError,
    RankDeficiencyError,
    frame_norm,
    gram_schmidt,
    nullspace,
    orthonormal_frame,
    solve_spd,
)
from .sampling import SampleSpec, Tolerance

__all__ = [
    "Jet",
    "JetDomainError",
    "NotPositiveDefiniteError",
    "RankDeficiencyError",
    "SampleSpec",
    "Tolerance",
    "as_jet",
    "concatenate",
    "cos",
    "einsum",
    "exp",
    "field_along",
    "frame_norm",
    "gram_schmidt",
    "inv",
    "jacobian_at",
    "jet_lift",
    "log",
    "matmul",
    "nullspace",
    "orthonormal_frame",
    "outer",
    "power",
    "reciprocal",
    "sin",
    "solve_spd",
    "sqrt",
    "stack",
    "value_of",
]
