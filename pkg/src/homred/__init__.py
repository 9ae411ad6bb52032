"""Homogeneous Riemannian structure tensors and their reduction along principal bundles."""

__version__ = "0.1.0"

from .bundle import (
    AlphaForm,
    PrincipalBundleChart,
    check_nabla_omega,
    fibre_geometry,
    horizontal_lift,
    reduce_tensor,
    reduced_metric_at,
    reduced_structure,
)
from .catalog import get_example, list_examples
from .contact import AlmostContactMetric, sasakian_check, sasakian_lift, validate_acms
from .homstruct import HomogeneousStructure, as_residuals, classify, tv_project
from .manifold import Chart, LocalGeometry, TensorField

__all__ = [
    "AlmostContactMetric",
    "AlphaForm",
    "Chart",
    "HomogeneousStructure",
    "LocalGeometry",
    "PrincipalBundleChart",
    "TensorField",
    "__version__",
    "as_residuals",
    "check_nabla_omega",
    "classify",
    "fibre_geometry",
    "get_example",
    "horizontal_lift",
    "list_examples",
    "reduce_tensor",
    "reduced_metric_at",
    "reduced_structure",
    "sasakian_check",
    "sasakian_lift",
    "tv_project",
    "validate_acms",
]
