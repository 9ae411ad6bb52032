"""Matrix Lie algebras acting on the catalog spaces, with their reductive splits.

Each builder returns an :class:`~homred.liered.AlgebraExample` whose ``mu``
columns are the images of the ``m`` basis at the base point, written in the
ambient (or half-space) coordinates, and a function mapping the family
parameters to the equivariant map ``phi`` as a (dk, dm) matrix.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Mapping

import numpy as np

from ..liered import AlgebraExample, LieAlgebraSC, ReductiveSplit, metric_form
from .quaternion import ONE, QI, QJ, QK, ZERO, complex_to_real, quaternion_matrix, right_matrix


@dataclass(frozen=True)
class AlgebraFamily:
    """An algebra example plus the parametrization of its equivariant maps."""

    example: AlgebraExample
    phi: Callable[[Mapping[str, float]], np.ndarray]
    base_point: np.ndarray

    def tensor(self, params: Mapping[str, float]) -> np.ndarray:
        return self.example.tensor(self.phi(params))


def _build(name, mats, dm, point, metric, action_rows=None, notes=None) -> AlgebraExample:
    alg = LieAlgebraSC.from_matrices(mats)
    rows = slice(None) if action_rows is None else action_rows
    mu = np.array([(m @ point)[rows] for m in mats[:dm]]).T
    dim = len(mats)
    split = ReductiveSplit.from_indices(dim, range(dm), range(dm, dim), metric_form(mu, metric))
    return AlgebraExample(name, alg, split, mu, dict(notes or {}))


def _no_phi(dk: int, dm: int):
    return lambda params: np.zeros((dk, dm))


def u2_family() -> AlgebraFamily:
    """``u(2)`` on ``S^3`` with isotropy ``diag(0, i)`` at ``(1, 0, 0, 0)``."""
    mats = [
        complex_to_real([[0, 1], [-1, 0]]),
        complex_to_real([[0, 1j], [1j, 0]]),
        complex_to_real([[1j, 0], [0, -1j]]),
        complex_to_real([[0, 0], [0, 1j]]),
    ]
    point = np.eye(4)[0]
    ex = _build("u(2)", mats, 3, point, np.eye(4))

    def phi(params):
        out = np.zeros((1, 3))
        out[0, 2] = params.get("lambda", 0.0)
        return out

    return AlgebraFamily(ex, phi, point)


def _affine(i: int, j: int) -> np.ndarray:
    m = np.zeros((5, 5))
    m[i, j] = 1.0
    return m


def rh4_family() -> AlgebraFamily:
    """``so(2) + a + n`` acting on the half-space ``RH(4)`` by affine maps.

    The rotation generator is ``y3 d/dy2 - y2 d/dy3``; with this orientation
    ``phi(a) = lambda0 r``, ``phi(n1) = lambda1 r`` reproduces the printed
    family with its signs.
    """
    mats = [np.diag([1.0, 1.0, 1.0, 1.0, 0.0]), _affine(1, 4), _affine(2, 4), _affine(3, 4), _affine(2, 3) - _affine(3, 2)]
    point = np.array([1.0, 0.0, 0.0, 0.0, 1.0])
    ex = _build("so(2)+a+n", mats, 4, point, np.eye(4), action_rows=slice(0, 4))

    def phi(params):
        out = np.zeros((1, 4))
        out[0, 0] = params.get("lambda0", 0.0)
        out[0, 1] = params.get("lambda1", 0.0)
        return out

    return AlgebraFamily(ex, phi, point[:4])


def _delta(i: int, j: int) -> np.ndarray:
    m = np.zeros((4, 4), complex)
    m[i, j] = 1.0
    return m


def u4_family() -> AlgebraFamily:
    """``u(4)`` on ``S^7`` with isotropy ``u(3)`` at ``(1, 0, ..., 0)``."""
    m_mats = [complex_to_real(1j * _delta(0, 0))]
    m_mats += [complex_to_real(_delta(0, j) - _delta(j, 0)) for j in (1, 2, 3)]
    m_mats += [complex_to_real(1j * (_delta(0, j) + _delta(j, 0))) for j in (1, 2, 3)]
    k_mats = []
    for s in range(1, 4):
        for t in range(s, 4):
            if s == t:
                k_mats.append(complex_to_real(1j * _delta(s, s)))
            else:
                k_mats.append(complex_to_real(_delta(s, t) - _delta(t, s)))
                k_mats.append(complex_to_real(1j * (_delta(s, t) + _delta(t, s))))
    point = np.eye(8)[0]
    ex = _build("u(4)", m_mats + k_mats, 7, point, np.eye(8))
    return AlgebraFamily(ex, _no_phi(9, 7), point)


def sp2u1_family() -> AlgebraFamily:
    """``sp(2) + u(1)`` on ``S^7`` with ``(A, z) q = A q conj(z)``.

    Quaternion matrices act on columns by left multiplication; the ``u(1)``
    generator acts as ``q -> -q i``.
    """
    m_mats = [
        quaternion_matrix([[ZERO, ONE], [-ONE, ZERO]]),
        quaternion_matrix([[QI, ZERO], [ZERO, ZERO]]),
        quaternion_matrix([[ZERO, QI], [QI, ZERO]]),
        quaternion_matrix([[QJ, ZERO], [ZERO, ZERO]]),
        quaternion_matrix([[ZERO, QJ], [QJ, ZERO]]),
        quaternion_matrix([[QK, ZERO], [ZERO, ZERO]]),
        quaternion_matrix([[ZERO, QK], [QK, ZERO]]),
    ]
    u1 = -np.kron(np.eye(2), right_matrix(QI))
    k_mats = [
        quaternion_matrix([[QI, ZERO], [ZERO, ZERO]]) + u1,
        quaternion_matrix([[ZERO, ZERO], [ZERO, QI]]),
        quaternion_matrix([[ZERO, ZERO], [ZERO, QJ]]),
        quaternion_matrix([[ZERO, ZERO], [ZERO, QK]]),
    ]
    point = np.eye(8)[0]
    ex = _build("sp(2)+u(1)", m_mats + k_mats, 7, point, np.eye(8))

    def phi(params):
        out = np.zeros((4, 7))
        out[0, 1] = params.get("lambda", 0.0)
        return out

    return AlgebraFamily(ex, phi, point)


ALGEBRA_FAMILIES: dict[str, Callable[[], AlgebraFamily]] = {
    "u2": u2_family,
    "rh4": rh4_family,
    "u4": u4_family,
    "sp2u1": sp2u1_family,
}
