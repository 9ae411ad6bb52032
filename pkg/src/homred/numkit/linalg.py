"""Small dense linear algebra used throughout (n <= 16)."""

from __future__ import annotations

import numpy as np


class NotPositiveDefiniteError(np.linalg.LinAlgError):
    """The matrix is not symmetric positive definite (typically a bad chart point)."""


class RankDeficiencyError(np.linalg.LinAlgError):
    """Input vectors are linearly dependent."""


def _cholesky(a: np.ndarray, abs_tol: float) -> np.ndarray:
    a = np.asarray(a, dtype=float)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {a.shape}")
    asym = np.max(np.abs(a - a.T)) if a.size else 0.0
    if asym > abs_tol * max(1.0, np.max(np.abs(a))):
        raise NotPositiveDefiniteError(f"metric not positive definite: asymmetry {asym:.3e}")
    try:
        return np.linalg.cholesky(0.5 * (a + a.T))
    except np.linalg.LinAlgError as exc:
        raise NotPositiveDefiniteError("metric not positive definite") from exc


def solve_spd(a: np.ndarray, b: np.ndarray, abs_tol: float = 1e-9) -> np.ndarray:
    """Solve ``a x = b`` for symmetric positive definite ``a``.

    Raises:
        NotPositiveDefiniteError: if ``a`` is not symmetric or not positive definite.
    """
    low = _cholesky(a, abs_tol)
    y = np.linalg.solve(low, b)
    return np.linalg.solve(low.T, y)


def orthonormal_frame(g: np.ndarray, abs_tol: float = 1e-9) -> np.ndarray:
    """Columns form a ``g``-orthonormal basis: ``E.T @ g @ E = I``."""
    low = _cholesky(g, abs_tol)
    return np.linalg.inv(low).T


def gram_schmidt(vectors, inner: np.ndarray | None = None, abs_tol: float = 1e-9) -> np.ndarray:
    """Orthonormalise ``vectors`` (rows) in input order w.r.t. the form ``inner``.

    Args:
        vectors: Sequence of coordinate vectors.
        inner: Symmetric positive definite Gram matrix of the coordinate basis;
            Euclidean when omitted.
        abs_tol: Squared-norm threshold below which a vector counts as dependent.

    Returns:
        Array whose rows are the orthonormal frame, same span as the input.

    Raises:
        RankDeficiencyError: naming the first vector in the span of its predecessors.
    """
    vs = np.atleast_2d(np.asarray(vectors, dtype=float))
    g = np.eye(vs.shape[1]) if inner is None else np.asarray(inner, dtype=float)
    out: list[np.ndarray] = []
    for k, v in enumerate(vs):
        w = v.copy()
        for _ in range(2):  # second pass keeps orthogonality at round-off level
            for e in out:
                w = w - (e @ g @ w) * e
        nrm2 = w @ g @ w
        if nrm2 <= abs_tol:
            raise RankDeficiencyError(f"vector {k} is linearly dependent on vectors 0..{k - 1}")
        out.append(w / np.sqrt(nrm2))
    return np.array(out)


def frame_norm(t: np.ndarray, frame: np.ndarray, covariant: int | None = None) -> float:
    """Frobenius norm of a covariant tensor after contracting every slot with ``frame``.

    ``frame`` has orthonormal columns, so the result is frame independent.
    ``covariant`` limits contraction to the trailing slots (default: all).
    """
    t = np.asarray(t, dtype=float)
    k = t.ndim if covariant is None else covariant
    out = t
    for axis in range(t.ndim - k, t.ndim):
        out = np.moveaxis(np.tensordot(out, frame, axes=([axis], [0])), -1, axis)
    return float(np.linalg.norm(out))


def nullspace(m: np.ndarray, cutoff: float = 1e-10) -> np.ndarray:
    """Orthonormal basis (rows) of the null space of ``m`` by SVD."""
    m = np.atleast_2d(np.asarray(m, dtype=float))
    _, s, vt = np.linalg.svd(m)
    rank = int(np.sum(s > cutoff))
    return vt[rank:]
