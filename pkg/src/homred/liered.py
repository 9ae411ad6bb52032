"""Lie-algebra side: structure constants, reductive splits and the tensors they induce.

Everything is infinitesimal.  A split of an algebra ``g = m + k`` is given by
row vectors (coordinates in the algebra basis) spanning ``m`` and ``k``;
``k`` is the isotropy algebra and ``m`` is identified with the tangent space
at the base point through the infinitesimal action ``mu``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path
from typing import Sequence

import numpy as np

from .numkit import nullspace


class JacobiError(ValueError):
    """Structure constants violate antisymmetry or the Jacobi identity."""


class EquivarianceError(ValueError):
    """A linear map is not ad(k)-equivariant."""


@dataclass(frozen=True)
class LieAlgebraSC:
    """Lie algebra by structure constants ``[e_i, e_j] = sum_k c[k, i, j] e_k``."""

    c: np.ndarray
    names: tuple[str, ...] = ()

    def __post_init__(self) -> None:
        c = np.asarray(self.c, dtype=float)
        object.__setattr__(self, "c", c)
        if c.ndim != 3 or len(set(c.shape)) != 1:
            raise ValueError(f"structure constants must have shape (d, d, d), got {c.shape}")
        if np.max(np.abs(c + c.transpose(0, 2, 1)), initial=0.0) > 1e-12:
            raise JacobiError("structure constants are not antisymmetric")
        resid = self.jacobi_residual()
        if resid > 1e-10 * max(1.0, np.max(np.abs(c), initial=0.0) ** 2):
            raise JacobiError(f"Jacobi identity fails (residual {resid:.3e})")

    @property
    def dim(self) -> int:
        return self.c.shape[0]

    def bracket(self, x, y) -> np.ndarray:
        return np.einsum("kij,i,j->k", self.c, np.asarray(x, float), np.asarray(y, float))

    def ad(self, x) -> np.ndarray:
        """Matrix of ``ad_x`` in the algebra basis."""
        return np.einsum("kij,i->kj", self.c, np.asarray(x, float))

    def jacobi_residual(self) -> float:
        c = self.c
        # [[e_i, e_j], e_l] + cyclic
        t = np.einsum("mij,kml->kijl", c, c)
        cyc = t + t.transpose(0, 2, 3, 1) + t.transpose(0, 3, 1, 2)
        return float(np.max(np.abs(cyc), initial=0.0))

    @classmethod
    def from_matrices(cls, mats: Sequence[np.ndarray], names: Sequence[str] = ()) -> "LieAlgebraSC":
        """Structure constants of a matrix Lie algebra from commutators.

        Raises:
            ValueError: if the matrices are dependent or not closed under brackets.
        """
        basis = np.array([np.asarray(m, float).ravel() for m in mats]).T
        if np.linalg.matrix_rank(basis) != len(mats):
            raise ValueError("matrices are linearly dependent")
        d = len(mats)
        c = np.zeros((d, d, d))
        for i in range(d):
            for j in range(i + 1, d):
                comm = (mats[i] @ mats[j] - mats[j] @ mats[i]).ravel()
                coef, *_ = np.linalg.lstsq(basis, comm, rcond=None)
                if np.linalg.norm(basis @ coef - comm) > 1e-10 * max(1.0, np.linalg.norm(comm)):
                    raise ValueError(f"bracket of generators {i} and {j} leaves the span")
                c[:, i, j] = coef
                c[:, j, i] = -coef
        c[np.abs(c) < 1e-14] = 0.0
        return cls(c, tuple(names))

    @classmethod
    def from_file(cls, path: str | Path) -> "LieAlgebraSC":
        """Read structure constants from a plain-text file.

        Format: ``#`` starts a comment; the first data line holds the
        dimension ``d``; each further line is ``i j k value`` (0-based)
        meaning ``c[k, i, j] = value``.  The antisymmetric partner
        ``c[k, j, i]`` is filled in; if it is listed too it must agree.
        """
        rows = []
        for raw in Path(path).read_text().splitlines():
            line = raw.split("#", 1)[0].strip()
            if line:
                rows.append(line.split())
        if not rows or len(rows[0]) != 1:
            raise ValueError("structure-constant file must start with the dimension")
        d = int(rows[0][0])
        c = np.zeros((d, d, d))
        seen = np.zeros((d, d, d), dtype=bool)
        for r in rows[1:]:
            if len(r) != 4:
                raise ValueError(f"expected 'i j k value', got {' '.join(r)!r}")
            i, j, k, v = int(r[0]), int(r[1]), int(r[2]), float(r[3])
            for a, b, s in ((i, j, 1.0), (j, i, -1.0)):
                if seen[k, a, b] and abs(c[k, a, b] - s * v) > 1e-12:
                    raise JacobiError(f"inconsistent entries for c[{k},{i},{j}]")
                c[k, a, b] = s * v
                seen[k, a, b] = True
        return cls(c)

    def to_text(self) -> str:
        lines = [str(self.dim)]
        for i in range(self.dim):
            for j in range(i + 1, self.dim):
                for k in range(self.dim):
                    if self.c[k, i, j] != 0.0:
                        lines.append(f"{i} {j} {k} {float(self.c[k, i, j])!r}")
        return "\n".join(lines) + "\n"


@dataclass(frozen=True)
class ReductiveSplit:
    """A decomposition ``g = m + k`` with the form ``B`` on ``m``.

    Attributes:
        m_basis: Rows spanning ``m`` (algebra coordinates).
        k_basis: Rows spanning ``k``.
        B: Symmetric positive definite form on ``m`` in the ``m_basis``.
        h_index: Positions in ``m_basis`` of the vertical subalgebra ``h``.
    """

    m_basis: np.ndarray
    k_basis: np.ndarray
    B: np.ndarray
    h_index: tuple[int, ...] = ()

    def __post_init__(self) -> None:
        m = np.atleast_2d(np.asarray(self.m_basis, float))
        k = np.asarray(self.k_basis, float).reshape(-1, m.shape[1])
        object.__setattr__(self, "m_basis", m)
        object.__setattr__(self, "k_basis", k)
        object.__setattr__(self, "B", np.asarray(self.B, float))
        full = np.vstack([m, k])
        if full.shape[0] != full.shape[1] or abs(np.linalg.det(full)) < 1e-12:
            raise ValueError("m and k bases do not partition the algebra")
        if self.B.shape != (m.shape[0],) * 2:
            raise ValueError("B must be a square form on m")

    @classmethod
    def from_indices(cls, dim: int, m_index, k_index, B, h_index=()) -> "ReductiveSplit":
        eye = np.eye(dim)
        return cls(eye[list(m_index)], eye[list(k_index)], B, tuple(h_index))

    @property
    def dm(self) -> int:
        return self.m_basis.shape[0]

    @property
    def dk(self) -> int:
        return self.k_basis.shape[0]

    def coords(self, v) -> tuple[np.ndarray, np.ndarray]:
        """Components of an algebra vector in the ``m`` and ``k`` bases."""
        full = np.vstack([self.m_basis, self.k_basis]).T
        x = np.linalg.solve(full, np.asarray(v, float))
        return x[: self.dm], x[self.dm:]

    def graph(self, phi: np.ndarray) -> "ReductiveSplit":
        """The complement ``{X + phi(X)}`` for ``phi`` given as a (dk, dm) matrix."""
        phi = np.asarray(phi, float)
        m = self.m_basis + phi.T @ self.k_basis
        return ReductiveSplit(m, self.k_basis, self.B, self.h_index)


def metric_form(mu: np.ndarray, g: np.ndarray) -> np.ndarray:
    """``B = mu^T g mu`` for the infinitesimal action ``mu`` (columns = images of m)."""
    return mu.T @ g @ mu


def check_reductive(alg: LieAlgebraSC, split: ReductiveSplit) -> float:
    """Largest ``k``-component norm of ``[kappa, xi]`` over basis vectors."""
    worst = 0.0
    for kap in split.k_basis:
        for xi in split.m_basis:
            _, kpart = split.coords(alg.bracket(kap, xi))
            worst = max(worst, float(np.linalg.norm(kpart)))
    return worst


def _ad_blocks(alg: LieAlgebraSC, split: ReductiveSplit, kap, dom: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Matrices of ``ad_kappa`` on the domain rows and on ``k``."""
    a = np.zeros((dom.shape[0], dom.shape[0]))
    for j, x in enumerate(dom):
        v = alg.bracket(kap, x)
        coef, *_ = np.linalg.lstsq(dom.T, v, rcond=None)
        if np.linalg.norm(dom.T @ coef - v) > 1e-10 * max(1.0, np.linalg.norm(v)):
            raise ValueError("domain is not ad(k)-invariant")
        a[:, j] = coef
    c = np.zeros((split.dk, split.dk))
    for j, x in enumerate(split.k_basis):
        _, c[:, j] = split.coords(alg.bracket(kap, x))
    return a, c


def _domain_rows(split: ReductiveSplit, domain: str) -> np.ndarray:
    if domain == "m":
        return split.m_basis
    if domain == "h":
        if not split.h_index:
            raise ValueError("split has no vertical subalgebra h")
        return split.m_basis[list(split.h_index)]
    raise ValueError(f"domain must be 'm' or 'h', got {domain!r}")


def _canonical_sign(v: np.ndarray) -> np.ndarray:
    k = int(np.argmax(np.abs(v) > 1e-9 * np.max(np.abs(v))))
    return v if v[k] > 0 else -v


@dataclass(frozen=True)
class EquivariantMap:
    """Linear map from the domain (``m`` or ``h``) to ``k`` as a (dk, d_dom) matrix."""

    matrix: np.ndarray
    domain: str = "m"

    def extended(self, split: ReductiveSplit) -> np.ndarray:
        """Extension by zero to all of ``m`` (a (dk, dm) matrix)."""
        if self.domain == "m":
            return np.asarray(self.matrix, float)
        full = np.zeros((split.dk, split.dm))
        full[:, list(split.h_index)] = self.matrix
        return full


def equivariance_residual(alg: LieAlgebraSC, split: ReductiveSplit, phi: EquivariantMap) -> float:
    dom = _domain_rows(split, phi.domain)
    worst = 0.0
    for kap in split.k_basis:
        a, c = _ad_blocks(alg, split, kap, dom)
        worst = max(worst, float(np.max(np.abs(phi.matrix @ a - c @ phi.matrix), initial=0.0)))
    return worst


def enumerate_equivariant(
    alg: LieAlgebraSC, split: ReductiveSplit, domain: str = "m", cutoff: float = 1e-10
) -> list[EquivariantMap]:
    """Orthonormal basis of the ad(k)-equivariant maps ``domain -> k``.

    Solves ``phi ad_kappa - ad_kappa phi = 0`` for every ``kappa`` in the
    ``k`` basis; the basis is deterministic (SVD, sign fixed so the first
    significant entry is positive).
    """
    dom = _domain_rows(split, domain)
    dd, dk = dom.shape[0], split.dk
    blocks = []
    for kap in split.k_basis:
        a, c = _ad_blocks(alg, split, kap, dom)
        # row-major vec: vec(phi a) = (I kron a^T) vec(phi), vec(c phi) = (c kron I) vec(phi)
        blocks.append(np.kron(np.eye(dk), a.T) - np.kron(c, np.eye(dd)))
    if not blocks:
        return [EquivariantMap(row.reshape(dk, dd), domain) for row in np.eye(dk * dd)]
    null = nullspace(np.vstack(blocks), cutoff)
    return [EquivariantMap(_canonical_sign(v).reshape(dk, dd), domain) for v in null]


def _projected_bracket(alg: LieAlgebraSC, split: ReductiveSplit, x, y) -> np.ndarray:
    return split.coords(alg.bracket(x, y))[0]


def tensor_from_split(alg: LieAlgebraSC, split: ReductiveSplit) -> np.ndarray:
    """The (0,3) tensor on ``m`` attached to a reductive split.

    ``S(xi, eta, zeta) = 1/2 (B([xi,eta]_m, zeta) - B([eta,zeta]_m, xi) + B([zeta,xi]_m, eta))``
    in the ``m`` basis.
    """
    m, b = split.m_basis, split.B
    dm = split.dm
    br = np.array([[_projected_bracket(alg, split, m[i], m[j]) for j in range(dm)] for i in range(dm)])
    low = np.einsum("ijm,mk->ijk", br, b)  # B([e_i, e_j]_m, e_k)
    s = 0.5 * (low - np.transpose(low, (2, 0, 1)) + np.transpose(low, (1, 2, 0)))
    if np.max(np.abs(s + s.transpose(0, 2, 1)), initial=0.0) > 1e-10 * max(1.0, np.max(np.abs(s), initial=0.0)):
        raise ArithmeticError("tensor from split is not skew in its last two slots")
    return s


def pphi_tensor(alg: LieAlgebraSC, split: ReductiveSplit, phi: EquivariantMap, check: bool = True) -> np.ndarray:
    """The correction ``P^phi`` (in the ``m`` basis) for an equivariant ``phi``.

    ``P(xi,eta,zeta) = 1/2 (B(D(xi,eta), zeta) - B(D(eta,zeta), xi) + B(D(zeta,xi), eta))``
    with ``D(x, y) = ([x, phi y] + [phi x, y])_m``.

    Raises:
        EquivarianceError: if ``check`` and ``phi`` is not equivariant.
    """
    if check:
        resid = equivariance_residual(alg, split, phi)
        if resid > 1e-10:
            raise EquivarianceError(f"map is not equivariant (residual {resid:.3e})")
    full = phi.extended(split)
    m, k, b = split.m_basis, split.k_basis, split.B
    dm = split.dm
    phim = full.T @ k  # images phi(e_i) as algebra vectors
    d = np.array(
        [
            [_projected_bracket(alg, split, m[i], phim[j]) + _projected_bracket(alg, split, phim[i], m[j]) for j in range(dm)]
            for i in range(dm)
        ]
    )
    low = np.einsum("ijm,mk->ijk", d, b)
    return 0.5 * (low - np.transpose(low, (2, 0, 1)) + np.transpose(low, (1, 2, 0)))


def to_tangent(s_m: np.ndarray, mu: np.ndarray) -> np.ndarray:
    """Transfer a (0,3) tensor on ``m`` to tangent coordinates via ``mu`` (n x dm).

    When ``mu`` is not square (e.g. an ambient embedding of the tangent space)
    the pseudo-inverse is used, which gives zero on the normal directions.
    """
    w = np.linalg.pinv(mu)  # (dm, n)
    return np.einsum("abc,ai,bj,ck->ijk", s_m, w, w, w)


@dataclass(frozen=True)
class AlgebraExample:
    """An algebra with a split and the infinitesimal action at the base point."""

    name: str
    algebra: LieAlgebraSC
    split: ReductiveSplit
    mu: np.ndarray  # columns: images of the m basis in (ambient) tangent coordinates
    notes: dict = field(default_factory=dict)

    def tensor(self, phi: np.ndarray | None = None) -> np.ndarray:
        """Tangent-coordinate tensor for the graph complement of ``phi`` (or ``m`` itself)."""
        split = self.split if phi is None else self.split.graph(phi)
        return to_tangent(tensor_from_split(self.algebra, split), self.mu)
