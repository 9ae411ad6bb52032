"""Tolerance policy and deterministic sampling."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True)
class Tolerance:
    """Absolute and relative tolerances; both must be positive."""

    abs_tol: float = 1e-9
    rel_tol: float = 1e-7

    def __post_init__(self) -> None:
        if not (self.abs_tol > 0 and self.rel_tol > 0):
            raise ValueError("tolerances must be strictly positive")

    def allows(self, residual: float, scale: float = 0.0) -> bool:
        return residual <= self.abs_tol + self.rel_tol * scale


@dataclass(frozen=True)
class SampleSpec:
    """Which points to sample.

    Attributes:
        seed: Master seed.
        count: Number of points (at least 1).
        margin: Fraction in (0, 1] of each chart's safe sampling region to use.
    """

    seed: int = 0
    count: int = 20
    margin: float = 1.0

    def __post_init__(self) -> None:
        if self.count < 1:
            raise ValueError("sample count must be at least 1")
        if not 0 < self.margin <= 1:
            raise ValueError("margin must lie in (0, 1]")

    def rng(self, index: int) -> np.random.Generator:
        """Generator for point ``index``; independent of evaluation order."""
        return np.random.default_rng(np.random.SeedSequence([self.seed, index]))
