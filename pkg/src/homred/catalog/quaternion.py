"""Quaternion arithmetic on 4-vectors ``(re, i, j, k)``, usable with jets and arrays."""

from __future__ import annotations

import numpy as np

from ..numkit import Jet, stack

_UNIT = np.eye(4)
ONE, QI, QJ, QK = _UNIT
ZERO = np.zeros(4)


def qmul(p, q):
    """Hamilton product; accepts arrays or jets of shape (4,)."""
    a1, b1, c1, d1 = (p[i] for i in range(4))
    a2, b2, c2, d2 = (q[i] for i in range(4))
    parts = [
        a1 * a2 - b1 * b2 - c1 * c2 - d1 * d2,
        a1 * b2 + b1 * a2 + c1 * d2 - d1 * c2,
        a1 * c2 - b1 * d2 + c1 * a2 + d1 * b2,
        a1 * d2 + b1 * c2 - c1 * b2 + d1 * a2,
    ]
    if any(isinstance(x, Jet) for x in parts):
        return stack(parts)
    return np.array(parts, dtype=float)


def qconj(q):
    if isinstance(q, Jet):
        return stack([q[0], -q[1], -q[2], -q[3]])
    q = np.asarray(q, float)
    return q * np.array([1.0, -1.0, -1.0, -1.0])


def left_matrix(p) -> np.ndarray:
    """Real 4x4 matrix of ``q -> p q``."""
    return np.array([qmul(p, _UNIT[k]) for k in range(4)]).T


def right_matrix(p) -> np.ndarray:
    """Real 4x4 matrix of ``q -> q p``."""
    return np.array([qmul(_UNIT[k], p) for k in range(4)]).T


def quaternion_matrix(blocks) -> np.ndarray:
    """Real matrix of a quaternion matrix acting on columns by left multiplication."""
    rows = len(blocks)
    cols = len(blocks[0])
    out = np.zeros((4 * rows, 4 * cols))
    for s in range(rows):
        for t in range(cols):
            out[4 * s : 4 * s + 4, 4 * t : 4 * t + 4] = left_matrix(blocks[s][t])
    return out


def complex_to_real(m) -> np.ndarray:
    """Real form of a complex matrix in interleaved ``(Re, Im)`` coordinates."""
    m = np.asarray(m, complex)
    n = m.shape[0]
    out = np.zeros((2 * n, 2 * m.shape[1]))
    for a in range(n):
        for b in range(m.shape[1]):
            p, q = m[a, b].real, m[a, b].imag
            out[2 * a : 2 * a + 2, 2 * b : 2 * b + 2] = [[p, -q], [q, p]]
    return out
