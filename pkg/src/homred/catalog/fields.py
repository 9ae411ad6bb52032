"""Global fields on the catalog charts.

Sphere tensors are extended from the base point by a section ``x -> A(x)``
of the acting group with ``A(x) xbar = x``: the value at ``x`` is the
base-point tensor pulled back by ``A(x)^{-1}``.  This is the unique
invariant extension whenever the base-point tensor is isotropy invariant.
"""

from __future__ import annotations

from typing import Callable

import numpy as np

from ..manifold import JetFn, stereographic_embedding
from ..numkit import Jet, as_jet, einsum, inv, jacobian_at, sqrt, stack
from .quaternion import qconj, qmul

# -- ambient <-> stereographic chart -------------------------------------------


def stereographic_chart_point(x: np.ndarray) -> np.ndarray:
    """Inverse of :func:`stereographic_embedding` for plain arrays."""
    x = np.asarray(x, float)
    return x[1:] / (1.0 + x[0])


def stereographic_inverse(x: Jet) -> Jet:
    return stack([x[k] / (1.0 + x[0]) for k in range(1, x.shape[0])])


def ambient_tensor_to_chart(u: Jet, t_amb: Jet, kinds: str) -> Jet:
    """Express an ambient tensor along ``emb(u)`` in stereographic coordinates.

    Covariant slots are contracted with ``D emb``; contravariant slots use
    ``g^{-1} D emb^T`` (exact for tangent vectors).
    """
    de = jacobian_at(stereographic_embedding, u)  # [i, a] = d_i x_a
    g = einsum("ia,ja->ij", de, de)
    up = einsum("ij,ja->ia", inv(g), de)
    out = as_jet(t_amb)
    for s, k in enumerate(kinds):
        m = de if k == "d" else up
        out = _contract_slot(out, m, s)
    return out


def _contract_slot(t: Jet, m: Jet, slot: int) -> Jet:
    letters = "abcdef"[: t.ndim]
    new = letters.replace(letters[slot], "z")
    return einsum(f"{letters},z{letters[slot]}->{new}", t, m)


def chart_field_from_ambient(fn_amb: Callable[[Jet], Jet], kinds: str) -> JetFn:
    """Stereographic-chart coefficients of an ambient field ``x -> T(x)``."""

    def fn(u):
        x = stereographic_embedding(u)
        return ambient_tensor_to_chart(u, fn_amb(x), kinds)

    return fn


def transported_structure(s0: np.ndarray, section: Callable[[Jet], Jet]) -> JetFn:
    """Lowered stereographic field ``S_x = S0(A^T ., A^T ., A^T .)`` with ``A = section(x)``."""
    s0 = np.asarray(s0, float)

    def amb(x):
        a = section(x)
        return einsum("abc,ia,jb,kc->ijk", Jet.constant(s0, nvars=x.nvars), a, a, a)

    return chart_field_from_ambient(amb, "ddd")


# -- group sections --------------------------------------------------------------


def su2_section(x: Jet) -> Jet:
    """``SU(2)`` element (acting on ``C^2`` in interleaved coordinates) taking ``e1`` to ``x``."""
    x0, x1, x2, x3 = (x[k] for k in range(4))
    rows = [
        [x0, -x1, -x2, -x3],
        [x1, x0, x3, -x2],
        [x2, -x3, x0, x1],
        [x3, x2, -x1, x0],
    ]
    return stack([stack(r) for r in rows])


def _left_matrix(p: Jet) -> Jet:
    cols = [qmul(p, np.eye(4)[k]) for k in range(4)]
    return stack(cols, axis=1)


def _right_matrix(p: Jet) -> Jet:
    cols = [qmul(np.eye(4)[k], p) for k in range(4)]
    return stack(cols, axis=1)


def _assemble(blocks) -> Jet:
    """8x8 jet from a 2x2 nested list of 4x4 jets."""
    rows = []
    for bi in range(2):
        for i in range(4):
            rows.append(stack([blocks[bi][bj][i, j] for bj in range(2) for j in range(4)]))
    return stack(rows)


def _quaternion_halves(x: Jet) -> tuple[Jet, Jet, Jet]:
    q1 = stack([x[k] for k in range(4)])
    q2 = stack([x[k] for k in range(4, 8)])
    return q1, q2, sqrt((q1 * q1).sum())


def u4_section(x: Jet) -> Jet:
    """Element of ``U(4)`` (right quaternionic, commuting with left ``i``) taking ``e1`` to ``x``.

    Needs ``|q1| > 0``.
    """
    q1, q2, r = _quaternion_halves(x)
    m21 = -qmul(qconj(q2), q1) / r
    m22 = stack([r, 0.0 * r, 0.0 * r, 0.0 * r])
    # (y1, y2) -> (y1 m11 + y2 m21, y1 m12 + y2 m22)
    return _assemble([[_right_matrix(q1), _right_matrix(m21)], [_right_matrix(q2), _right_matrix(m22)]])


def sp2_section(x: Jet) -> Jet:
    """Element of ``Sp(2)`` (left quaternionic) taking ``e1`` to ``x``.  Needs ``|q1| > 0``."""
    q1, q2, r = _quaternion_halves(x)
    a = -qmul(q1, qconj(q2)) / r
    b = stack([r, 0.0 * r, 0.0 * r, 0.0 * r])
    return _assemble([[_left_matrix(q1), _left_matrix(a)], [_left_matrix(q2), _left_matrix(b)]])


# -- Hopf data -------------------------------------------------------------------


def left_i(x: Jet) -> Jet:
    """Multiplication by ``i`` in interleaved complex coordinates."""
    parts = []
    for k in range(0, x.shape[0], 2):
        parts += [-x[k + 1], x[k]]
    return stack(parts)


def right_minus_i(x: Jet) -> Jet:
    """``q -> -q i`` on each quaternion block."""
    parts = []
    for k in range(0, x.shape[0], 4):
        a, b, c, d = x[k], x[k + 1], x[k + 2], x[k + 3]
        parts += [b, -a, -d, c]
    return stack(parts)


def _apply(mat: np.ndarray, x):
    return einsum("ab,b->a", mat, x) if isinstance(x, Jet) else mat @ np.asarray(x, float)


def rotate_left(x, angle: float):
    """``x -> e^{i angle} x`` (left complex structure); arrays or jets."""
    c, s = np.cos(angle), np.sin(angle)
    block = np.array([[c, -s], [s, c]])
    return _apply(np.kron(np.eye(x.shape[0] // 2), block), x)


def rotate_right(x, angle: float):
    """``q -> q e^{-i angle}`` on each quaternion block (the fibre action with generator ``-R_i``)."""
    z = np.array([np.cos(angle), -np.sin(angle), 0.0, 0.0])
    block = np.array([qmul(np.eye(4)[k], z) for k in range(4)]).T
    return _apply(np.kron(np.eye(x.shape[0] // 4), block), x)


def hopf_projection_left(x: Jet) -> Jet:
    """Affine chart of the left-``i`` quotient: ``w = (z2, ..., zm) / z1``, ``t = (Re w, Im w)``."""
    a, b = x[0], x[1]
    den = a * a + b * b
    parts = []
    for k in range(2, x.shape[0], 2):
        c, d = x[k], x[k + 1]
        parts += [(c * a + d * b) / den, (d * a - c * b) / den]
    return stack(parts)


def hopf_projection_right(x: Jet) -> Jet:
    """Affine chart of the right-``i`` quotient of ``S^7``.

    Complex coordinates for the right action are ``(x1 + i x2, x3 - i x4,
    x5 + i x6, x7 - i x8)``; the chart reports ``(Re, -Im, Re, Im, Re, -Im)``
    of the affine coordinates so that ``t = (x3, ..., x8) / x1`` to first order.
    """
    conj = stack([x[0], x[1], x[2], -x[3], x[4], x[5], x[6], -x[7]])
    t = hopf_projection_left(conj)
    return stack([t[0], -t[1], t[2], t[3], t[4], -t[5]])


def affine_section(t: Jet) -> Jet:
    """Ambient point ``(1, 0, t) / sqrt(1 + |t|^2)`` over the affine point ``t``."""
    nrm = sqrt(1.0 + (t * t).sum())
    zero = 0.0 * t[0]
    return stack([1.0 + zero, zero] + [t[k] for k in range(t.shape[0])]) / nrm
