"""Homogeneous structure tensors: Ambrose-Singer residuals and classification.

A structure tensor ``S`` is stored either lowered (``"ddd"``, entries
``S[i, j, k] = g(S_{d_i} d_j, d_k)``) or as a (1,2) tensor (``"udd"``,
entries ``S[k, i, j]`` = ``d_k`` component of ``S_{d_i} d_j``).  The
canonical connection is ``nabla~ = nabla - S``, i.e. its coefficients are
``gamma - S_up``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Mapping, Sequence

import numpy as np

from .manifold import Chart, LocalGeometry, TensorField, connection_action
from .numkit import Jet, einsum, frame_norm

LABELS = ("zero", "S1", "S2", "S3", "S1⊕S2", "S1⊕S3", "S2⊕S3", "generic")
_BY_PARTS = {
    frozenset(): "zero",
    frozenset({1}): "S1",
    frozenset({2}): "S2",
    frozenset({3}): "S3",
    frozenset({1, 2}): "S1⊕S2",
    frozenset({1, 3}): "S1⊕S3",
    frozenset({2, 3}): "S2⊕S3",
    frozenset({1, 2, 3}): "generic",
}
_PARTS = {v: k for k, v in _BY_PARTS.items()}


class StructuralError(ValueError):
    """A tensor violates a structural precondition (e.g. skewness)."""


class NotClassifiableError(ValueError):
    """Pointwise classes disagree across samples."""


@dataclass(frozen=True)
class HomogeneousStructure:
    """A candidate homogeneous structure tensor field.

    Attributes:
        field: Coefficient field, kinds ``"ddd"`` (lowered) or ``"udd"``.
        name: Label for reports.
        parameters: Named real parameters of the family member.
    """

    field: TensorField
    name: str = "S"
    parameters: Mapping[str, float] = field(default_factory=dict)

    def __post_init__(self) -> None:
        if self.field.kinds not in ("ddd", "udd"):
            raise ValueError(f"structure tensor kinds must be 'ddd' or 'udd', got {self.field.kinds!r}")

    def lowered_jet(self, chart: Chart, p, order: int = 1, metric: Jet | None = None) -> Jet:
        s = self.field.jet(p, order)
        if self.field.kinds == "ddd":
            return s
        g = chart.metric_jet(p, order) if metric is None else metric.truncate(order)
        return einsum("kl,kij->ijl", g, s)

    def lowered(self, chart: Chart, p) -> np.ndarray:
        return self.lowered_jet(chart, p, 0).v

    def upper(self, chart: Chart, p, g: np.ndarray | None = None) -> np.ndarray:
        if self.field.kinds == "udd":
            return self.field.at(p)
        g = chart.metric_jet(p, 0).v if g is None else g
        return raise_first(self.field.at(p), g)


def zero_structure(dim: int, name: str = "zero") -> HomogeneousStructure:
    return HomogeneousStructure(TensorField(lambda x: Jet.constant(np.zeros((dim,) * 3), nvars=x.nvars), "ddd"), name)


def raise_first(s_low: np.ndarray, g: np.ndarray) -> np.ndarray:
    """(0,3) -> (1,2): ``S_up[k, i, j] = g^{kl} S_low[i, j, l]``."""
    return np.einsum("kl,ijl->kij", np.linalg.inv(g), s_low)


def lower_first(s_up: np.ndarray, g: np.ndarray) -> np.ndarray:
    return np.einsum("kl,kij->ijl", g, s_up)


def canonical_gamma(gamma: np.ndarray, s_up: np.ndarray) -> np.ndarray:
    """Coefficients of ``nabla~ = nabla - S``."""
    return gamma - s_up


def tilde_covariant(chart: Chart, s: HomogeneousStructure, tfield: TensorField, p, direction=None) -> np.ndarray:
    """Covariant derivative of ``tfield`` with respect to ``nabla - S``."""
    geo = LocalGeometry(chart, p, order=1)
    gt = canonical_gamma(geo.gamma, s.upper(chart, p, geo.g))
    t = tfield.jet(p, 1)
    out = t.grad + connection_action(gt, t.v, tfield.kinds)
    if direction is None:
        return out
    return np.tensordot(np.asarray(direction, float), out, axes=(0, 0))


@dataclass(frozen=True)
class ASResidual:
    """Sup-norm residuals of the Ambrose-Singer equations over samples."""

    r_g: float
    r_R: float
    r_S: float

    @property
    def worst(self) -> float:
        return max(self.r_g, self.r_R, self.r_S)

    def as_dict(self) -> dict:
        return {"nabla_g": self.r_g, "nabla_R": self.r_R, "nabla_S": self.r_S}


def as_residuals_at(chart: Chart, s: HomogeneousStructure, p) -> ASResidual:
    """Ambrose-Singer residuals at one point (orthonormal-frame norms)."""
    geo = LocalGeometry(chart, p, order=3)
    g = geo.metric_jet
    s_low = s.lowered_jet(chart, p, 1, metric=g)
    s_up = raise_first(s_low.v, geo.g)
    gt = canonical_gamma(geo.gamma, s_up)
    e = geo.frame
    ng = g.grad + connection_action(gt, geo.g, "dd")
    rj = geo.riemann_jet
    nr = rj.grad + connection_action(gt, rj.v, "dddd")
    ns = s_low.grad + connection_action(gt, s_low.v, "ddd")
    return ASResidual(frame_norm(ng, e), frame_norm(nr, e), frame_norm(ns, e))


def as_residuals(chart: Chart, s: HomogeneousStructure, samples: Iterable) -> ASResidual:
    """Sup over ``samples`` of the residuals of ``nabla~ g``, ``nabla~ R``, ``nabla~ S``.

    Evaluation errors are re-raised with the failing sample attached.
    """
    rg = rr = rs = 0.0
    for p in samples:
        try:
            r = as_residuals_at(chart, s, p)
        except (ArithmeticError, ValueError) as exc:
            raise type(exc)(f"{exc} [sample {np.asarray(p).tolist()}]") from exc
        rg, rr, rs = max(rg, r.r_g), max(rr, r.r_R), max(rs, r.r_S)
    return ASResidual(rg, rr, rs)


# -- Tricerri-Vanhecke decomposition ------------------------------------------


def c12_trace(t: np.ndarray, g: np.ndarray, frame: np.ndarray | None = None) -> np.ndarray:
    """The 1-form ``Z -> sum_i T(e_i, e_i, Z)`` over a ``g``-orthonormal frame."""
    from .numkit import orthonormal_frame

    e = orthonormal_frame(g) if frame is None else frame
    return np.einsum("ijk,ia,ja->k", t, e, e)


def cyclic_sum(t: np.ndarray) -> np.ndarray:
    """``T_XYZ + T_YZX + T_ZXY``."""
    return t + np.transpose(t, (2, 0, 1)) + np.transpose(t, (1, 2, 0))


def s1_tensor(g: np.ndarray, theta: np.ndarray) -> np.ndarray:
    """``g(X,Y) theta(Z) - g(X,Z) theta(Y)``."""
    return np.einsum("ij,k->ijk", g, theta) - np.einsum("ik,j->ijk", g, theta)


@dataclass(frozen=True)
class TVComponents:
    """Orthogonal decomposition ``T = p1 + p2 + p3``."""

    p1: np.ndarray
    p2: np.ndarray
    p3: np.ndarray
    theta: np.ndarray
    norms: tuple[float, float, float]
    total_norm: float


def tv_project(t: np.ndarray, g: np.ndarray, skew_tol: float = 1e-9) -> TVComponents:
    """Project a lowered structure tensor onto the three basic classes.

    Raises:
        StructuralError: if ``t`` is not skew in its last two slots.
    """
    t = np.asarray(t, dtype=float)
    n = t.shape[0]
    skew = np.max(np.abs(t + t.transpose(0, 2, 1))) if t.size else 0.0
    if skew > skew_tol * max(1.0, np.max(np.abs(t))):
        raise StructuralError(f"tensor not skew in last two slots (residual {skew:.3e})")
    from .numkit import orthonormal_frame

    e = orthonormal_frame(g)
    p3 = cyclic_sum(t) / 3.0
    theta = c12_trace(t, g, e) / (n - 1)
    p1 = s1_tensor(g, theta)
    p2 = t - p1 - p3
    norms = (frame_norm(p1, e), frame_norm(p2, e), frame_norm(p3, e))
    return TVComponents(p1, p2, p3, theta, norms, frame_norm(t, e))


@dataclass(frozen=True)
class TVClass:
    """Classification result with the largest component norms seen."""

    label: str
    norms: tuple[float, float, float]
    total_norm: float
    tol: float

    def __str__(self) -> str:
        return self.label


def label_from_components(comp: TVComponents, tol: float = 1e-7) -> str:
    thresh = tol * (comp.total_norm + 1.0)
    parts = frozenset(k + 1 for k, v in enumerate(comp.norms) if v > thresh)
    return _BY_PARTS[parts]


def classify_tensor(t: np.ndarray, g: np.ndarray, tol: float = 1e-7) -> TVClass:
    comp = tv_project(t, g)
    return TVClass(label_from_components(comp, tol), comp.norms, comp.total_norm, tol)


def classify(chart: Chart, s: HomogeneousStructure, samples: Iterable, tol: float = 1e-7) -> TVClass:
    """Class label, required to be the same at every sample.

    Raises:
        NotClassifiableError: if the pointwise class changes between samples.
    """
    label = None
    best = np.zeros(3)
    total = 0.0
    for p in samples:
        g = chart.metric_jet(p, 0).v
        res = classify_tensor(s.lowered(chart, p), g, tol)
        if label is not None and res.label != label:
            raise NotClassifiableError(f"class {res.label} at {np.asarray(p).tolist()} differs from {label}")
        label = res.label
        best = np.maximum(best, res.norms)
        total = max(total, res.total_norm)
    if label is None:
        raise ValueError("classify needs at least one sample")
    return TVClass(label, tuple(float(x) for x in best), total, tol)


def class_parts(label: str) -> frozenset:
    return _PARTS[label]


def is_subclass(label: str, of: str) -> bool:
    """Whether class ``label`` is contained in class ``of``."""
    return class_parts(label) <= class_parts(of)


def wedge_table(n: int, entries: Sequence[tuple[float, int, int, int]], one_based: bool = True) -> np.ndarray:
    """Lowered tensor from terms ``coef * dx^a (x) dx^b ^ dx^c``.

    With ``a ^ b = a (x) b - b (x) a`` a term sets ``T[a,b,c] += coef`` and
    ``T[a,c,b] -= coef``.
    """
    t = np.zeros((n, n, n))
    off = 1 if one_based else 0
    for coef, a, b, c in entries:
        t[a - off, b - off, c - off] += coef
        t[a - off, c - off, b - off] -= coef
    return t


def wedge_terms(t: np.ndarray, tol: float = 1e-12, one_based: bool = True) -> list[tuple[float, int, int, int]]:
    """Inverse of :func:`wedge_table` for a tensor skew in its last two slots."""
    n = t.shape[0]
    off = 1 if one_based else 0
    out = []
    for a in range(n):
        for b in range(n):
            for c in range(b + 1, n):
                if abs(t[a, b, c]) > tol:
                    out.append((float(t[a, b, c]), a + off, b + off, c + off))
    return out
