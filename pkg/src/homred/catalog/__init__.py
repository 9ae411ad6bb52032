"""Registry of fully wired examples with expected values."""

from __future__ import annotations

from typing import Mapping

from .algebras import ALGEBRA_FAMILIES, AlgebraFamily
from .examples import BUILDERS, ExampleSpec, Expectation, to_table_coordinates
from .tables import CoefficientTable

# parameters that change the manifold itself rather than the tensor
STRUCTURAL_PARAMS = {"rhn-solvable": ("n",)}


class UnknownExampleError(KeyError):
    """Raised for names missing from the registry."""


def list_examples() -> list[str]:
    """Registered example names, sorted."""
    return sorted(BUILDERS)


def get_example(name: str, params: Mapping[str, float] | None = None) -> ExampleSpec:
    """Build the example ``name``.

    Structural parameters (``n`` for ``rhn-solvable``) are consumed here;
    the returned spec still validates the remaining ones.

    Raises:
        UnknownExampleError: for an unregistered name.
    """
    if name not in BUILDERS:
        raise UnknownExampleError(f"unknown example {name!r}; known: {', '.join(list_examples())}")
    params = dict(params or {})
    structural = {k: params[k] for k in STRUCTURAL_PARAMS.get(name, ()) if k in params}
    return BUILDERS[name](**structural)


__all__ = [
    "ALGEBRA_FAMILIES",
    "AlgebraFamily",
    "CoefficientTable",
    "ExampleSpec",
    "Expectation",
    "UnknownExampleError",
    "get_example",
    "list_examples",
    "to_table_coordinates",
]
