"""Reference coefficient tables.

A table lists terms ``coef * dx^a (x) dx^b ^ dx^c`` (see
:func:`homred.homstruct.wedge_table`).  Sphere tables are written in the
ambient coordinates ``x^1..x^N`` at ``(1, 0, ..., 0)``; half-space tables use
``y^0..y^{n-1}`` and are global (coefficients scaled by ``1/(y^0)^3``);
projective tables use the affine coordinates ``t^1..t^6`` at ``t = 0``.

``origin`` is ``"published"`` for tables transcribed from the reference
source and ``"derived"`` for values fixed by an independent computation.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Mapping, Sequence

import numpy as np

from ..homstruct import wedge_table

Terms = Sequence[tuple[float, int, int, int]]


@dataclass(frozen=True)
class CoefficientTable:
    """A parametrized coefficient table.

    Attributes:
        dim: Number of coordinates.
        terms: ``params -> [(coef, a, b, c), ...]``.
        one_based: Whether indices start at 1.
        origin: ``"published"``, ``"derived"`` or ``"trivial"``.
        note: Short description.
    """

    dim: int
    terms: Callable[[Mapping[str, float]], Terms]
    one_based: bool
    origin: str
    note: str = ""

    def tensor(self, params: Mapping[str, float] | None = None) -> np.ndarray:
        return wedge_table(self.dim, self.terms(params or {}), self.one_based)


def _p(params, key):
    return float(params.get(key, 0.0))


RH4_FAMILY = CoefficientTable(
    4,
    lambda q: [(1, 1, 1, 0), (1, 2, 2, 0), (1, 3, 3, 0), (-_p(q, "lambda0"), 0, 2, 3), (-_p(q, "lambda1"), 1, 2, 3)],
    False,
    "published",
    "RH(4) family times (y0)^3",
)

RH3_REDUCED = CoefficientTable(
    3,
    lambda q: [(1, 1, 1, 0), (1, 2, 2, 0), (-_p(q, "lambda0"), 0, 1, 2)],
    False,
    "published",
    "reduced RH(3) family times (y0)^3",
)

S3_U2 = CoefficientTable(
    4,
    lambda q: [(_p(q, "lambda") - 1, 2, 3, 4), (1, 3, 2, 4), (-1, 4, 2, 3)],
    True,
    "published",
    "u(2) family on S3 at (1,0,0,0)",
)

S3_SASAKIAN = CoefficientTable(
    4,
    lambda q: [(1 - _p(q, "lambda"), 2, 3, 4), (-1, 3, 2, 4), (1, 4, 2, 3)],
    True,
    "published",
    "Sasakian family on S3 at (1,0,0,0)",
)

S7_U4 = CoefficientTable(
    8,
    lambda q: [(1, 3, 2, 4), (-1, 4, 2, 3), (1, 5, 2, 6), (-1, 6, 2, 5), (1, 7, 2, 8), (-1, 8, 2, 7)],
    True,
    "published",
    "u(4) tensor on S7 at (1,0,...,0)",
)

S7_SASAKIAN = CoefficientTable(
    8,
    lambda q: [(-1, 3, 2, 4), (1, 4, 2, 3), (-1, 5, 2, 6), (1, 6, 2, 5), (-1, 7, 2, 8), (1, 8, 2, 7)],
    True,
    "published",
    "Sasakian tensor on S7 at (1,0,...,0)",
)


def _sp2u1_terms(q):
    lam = _p(q, "lambda")
    return [
        (1, 5, 2, 6), (1, 5, 3, 7), (1, 5, 4, 8),
        (-lam, 2, 5, 6), (1 + 2 * lam, 2, 3, 4), (lam, 2, 7, 8),
        (1, 6, 5, 2), (1, 6, 3, 8), (-1, 6, 4, 7),
        (1, 3, 2, 4), (1, 4, 2, 3),
        (-1, 7, 3, 5), (-1, 7, 2, 8), (1, 7, 4, 6),
        (-1, 8, 4, 5), (1, 8, 2, 7), (-1, 8, 3, 6),
    ]  # fmt: skip


S7_SP2U1 = CoefficientTable(8, _sp2u1_terms, True, "published", "sp(2)+u(1) family on S7 at (1,0,...,0)")

CP3_REDUCED = CoefficientTable(
    6,
    lambda q: [
        (1, 3, 1, 5), (1, 3, 2, 6),
        (1, 4, 1, 6), (-1, 4, 2, 5),
        (1, 5, 2, 4), (-1, 5, 1, 3),
        (-1, 6, 2, 3), (-1, 6, 1, 4),
    ],  # fmt: skip
    True,
    "published",
    "reduced tensor on CP3 at t = 0",
)
