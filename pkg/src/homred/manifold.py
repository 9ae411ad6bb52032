"""Chart-based Riemannian manifolds.

Conventions (used everywhere in the package):

* ``gamma[k, i, j]`` is the Christoffel symbol of ``nabla_{d_i} d_j`` along ``d_k``.
* ``R^l_{ijk}`` is the ``d_l`` component of ``R(d_i, d_j) d_k`` with
  ``R(X, Y) = [nabla_X, nabla_Y] - nabla_[X,Y]``; the lowered tensor is
  ``R_{ijkw} = g(R(d_i, d_j) d_k, d_w)``.  With this convention
  ``R_{XYYX}`` is the sectional curvature numerator, so the unit sphere gives
  ``+1`` and real hyperbolic space ``-1``.
* Tensor values are plain arrays with one axis per slot; ``kinds`` strings
  describe the slots (``"u"`` contravariant, ``"d"`` covariant), e.g. ``"udd"``
  for a (1,2) tensor with the upper index first.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from typing import Callable, Optional

import numpy as np

from .numkit import Jet, SampleSpec, einsum, inv, jet_lift, orthonormal_frame, stack
from .numkit.linalg import NotPositiveDefiniteError

JetFn = Callable[[Jet], Jet]


class ChartDomainError(ValueError):
    """A point lies outside the chart domain."""


class TangencyError(ValueError):
    """An ambient vector is not tangent to the embedded chart image."""


@dataclass(frozen=True)
class TensorField:
    """A tensor field given by a jet-evaluable coefficient map.

    Attributes:
        fn: Maps a coordinate jet to the jet of the coefficient array.
        kinds: Slot types, one character per axis (``"u"`` or ``"d"``).
    """

    fn: JetFn
    kinds: str

    def jet(self, p, order: int = 1) -> Jet:
        return jet_lift(self.fn, p, order)

    def at(self, p) -> np.ndarray:
        return self.jet(p, 0).v


def vector_field(fn: JetFn) -> TensorField:
    return TensorField(fn, "u")


@dataclass(frozen=True)
class Chart:
    """A single-chart Riemannian manifold.

    Attributes:
        name: Label used in reports.
        dim: Number of coordinates.
        metric_fn: Coordinate jet -> jet of the symmetric metric matrix.
        domain: Predicate on plain coordinate vectors.
        sampler: ``(rng, margin) -> point`` drawing from a safe region.
        embedding: Optional coordinate jet -> ambient position jet.
        base_point: Distinguished point used by the examples.
    """

    name: str
    dim: int
    metric_fn: JetFn
    domain: Callable[[np.ndarray], bool]
    sampler: Callable[[np.random.Generator, float], np.ndarray]
    embedding: Optional[JetFn] = None
    base_point: Optional[np.ndarray] = field(default=None, compare=False)

    def check_point(self, p) -> np.ndarray:
        p = np.asarray(p, dtype=float)
        if p.shape != (self.dim,):
            raise ChartDomainError(f"{self.name}: expected {self.dim} coordinates, got shape {p.shape}")
        if not self.domain(p):
            raise ChartDomainError(f"{self.name}: point {p.tolist()} outside chart domain")
        return p

    def metric_jet(self, p, order: int = 3) -> Jet:
        return jet_lift(self.metric_fn, self.check_point(p), order)

    def sample(self, spec: SampleSpec) -> list[np.ndarray]:
        return [self.sampler(spec.rng(i), spec.margin) for i in range(spec.count)]


def metric_at(chart: Chart, p, order: int = 3) -> Jet:
    """Metric matrix jet at ``p``; raises if it is not positive definite."""
    g = chart.metric_jet(p, order)
    try:
        np.linalg.cholesky(0.5 * (g.v + g.v.T))
    except np.linalg.LinAlgError as exc:
        raise NotPositiveDefiniteError(f"{chart.name}: metric not positive definite at {list(p)}") from exc
    return g


def christoffel_from_metric(g: Jet) -> Jet:
    """Christoffel symbols (one order below ``g``) from a metric jet."""
    dg = g.partials()  # [l, i, j] = d_l g_ij
    ginv = inv(g.truncate(dg.order))
    lower = 0.5 * (dg + dg.transpose(1, 0, 2) - dg.transpose(1, 2, 0))  # [i, j, l]
    return einsum("kl,ijl->kij", ginv, lower)


def riemann_from_christoffel(gamma: Jet) -> Jet:
    """``R^l_{ijk}`` as array ``[l, i, j, k]`` (one order below ``gamma``)."""
    dgam = gamma.partials()  # [m, k, i, j]
    gam = gamma.truncate(dgam.order)
    quad = einsum("lim,mjk->lijk", gam, gam)
    deriv = dgam.transpose(1, 0, 2, 3)  # [l, i, j, k] = d_i Gamma^l_jk
    return deriv - deriv.transpose(0, 2, 1, 3) + quad - quad.transpose(0, 2, 1, 3)


class LocalGeometry:
    """Metric, connection and curvature of a chart at one point (lazily computed)."""

    def __init__(self, chart: Chart, p, order: int = 3):
        self.chart = chart
        self.p = chart.check_point(p)
        self._g = metric_at(chart, self.p, order)

    @property
    def n(self) -> int:
        return self.chart.dim

    @property
    def metric_jet(self) -> Jet:
        return self._g

    @cached_property
    def g(self) -> np.ndarray:
        return self._g.v

    @cached_property
    def ginv(self) -> np.ndarray:
        return np.linalg.inv(self.g)

    @cached_property
    def frame(self) -> np.ndarray:
        """Orthonormal frame (columns)."""
        return orthonormal_frame(self.g)

    @cached_property
    def gamma_jet(self) -> Jet:
        return christoffel_from_metric(self._g)

    @cached_property
    def gamma(self) -> np.ndarray:
        return self.gamma_jet.v

    @cached_property
    def riemann_up_jet(self) -> Jet:
        return riemann_from_christoffel(self.gamma_jet)

    @cached_property
    def riemann_jet(self) -> Jet:
        """Lowered curvature ``R_{ijkw}`` jet."""
        rup = self.riemann_up_jet
        return einsum("wl,lijk->ijkw", self._g.truncate(rup.order), rup)

    @cached_property
    def riemann(self) -> np.ndarray:
        return self.riemann_jet.v

    def sectional(self, x, y) -> float:
        x, y = np.asarray(x, float), np.asarray(y, float)
        num = np.einsum("ijkw,i,j,k,w->", self.riemann, x, y, y, x)
        den = (x @ self.g @ x) * (y @ self.g @ y) - (x @ self.g @ y) ** 2
        return float(num / den)


def christoffel_at(chart: Chart, p) -> Jet:
    """Christoffel symbols at ``p`` as an order-2 jet (so ``dGamma`` is available)."""
    return LocalGeometry(chart, p).gamma_jet


def curvature_at(chart: Chart, p) -> Jet:
    """Lowered curvature tensor at ``p`` as an order-1 jet."""
    return LocalGeometry(chart, p).riemann_jet


def connection_action(gamma: np.ndarray, t: np.ndarray, kinds: str) -> np.ndarray:
    """Connection terms ``nabla_k T - d_k T`` for coefficients ``gamma[m, k, a]``.

    Returns an array with the direction index first.
    """
    out = np.zeros((gamma.shape[1],) + t.shape)
    for s, kind in enumerate(kinds):
        if kind == "d":
            term = np.tensordot(gamma, t, axes=([0], [s]))  # [k, a, rest...]
            out -= np.moveaxis(term, 1, 1 + s)
        elif kind == "u":
            term = np.tensordot(gamma, t, axes=([2], [s]))  # [a, k, rest...]
            out += np.moveaxis(term.swapaxes(0, 1), 1, 1 + s)
        elif kind != "x":  # "x" marks a non-tangent slot, e.g. a Lie algebra index
            raise ValueError(f"unknown slot kind {kind!r}")
    return out


def covariant_derivative_of_jet(t: Jet, gamma: np.ndarray, kinds: str) -> np.ndarray:
    """``nabla T`` at a point, direction index first, from an order-1 jet of ``T``."""
    return t.grad + connection_action(gamma, t.v, kinds)


def covariant_derivative(chart: Chart, tfield: TensorField, p, direction=None) -> np.ndarray:
    """Levi-Civita covariant derivative of a tensor field at ``p``.

    Args:
        chart: The manifold.
        tfield: Field to differentiate.
        p: Coordinates of the point.
        direction: Optional tangent vector; when omitted the full
            ``nabla T`` (direction index first) is returned.
    """
    geo = LocalGeometry(chart, p, order=1)
    out = covariant_derivative_of_jet(tfield.jet(p, 1), geo.gamma, tfield.kinds)
    if direction is None:
        return out
    return np.tensordot(np.asarray(direction, float), out, axes=(0, 0))


def metric_field(chart: Chart) -> TensorField:
    return TensorField(chart.metric_fn, "dd")


def embedding_jacobian(chart: Chart, p) -> np.ndarray:
    """``D emb`` at ``p`` with shape (N, n)."""
    if chart.embedding is None:
        raise ValueError(f"{chart.name} has no embedding")
    return jet_lift(chart.embedding, chart.check_point(p), 1).grad.T


def embed_pullback(chart: Chart, p, ambient: np.ndarray, kind: str = "u", tol: float = 1e-9) -> np.ndarray:
    """Express an ambient tensor value at ``emb(p)`` in chart coordinates.

    ``kind`` is a slot string.  Contravariant slots are solved on the tangent
    frame (least squares; a residual above ``tol`` means the ambient value is
    not tangent).  Covariant slots are contracted with ``D emb``.

    Raises:
        TangencyError: with the residual when a contravariant slot is not tangent.
    """
    de = embedding_jacobian(chart, p)
    pinv = np.linalg.pinv(de)
    out = np.asarray(ambient, dtype=float)
    for s, k in enumerate(kind):
        if k == "u":
            moved = np.moveaxis(out, s, 0)
            sol = np.tensordot(pinv, moved, axes=(1, 0))
            resid = np.linalg.norm(np.tensordot(de, sol, axes=(1, 0)) - moved)
            if resid > tol * max(1.0, np.linalg.norm(moved)):
                raise TangencyError(f"ambient value not tangent at {list(p)}: residual {resid:.3e}")
            out = np.moveaxis(sol, 0, s)
        else:
            out = np.moveaxis(np.tensordot(de.T, np.moveaxis(out, s, 0), axes=(1, 0)), 0, s)
    return out


def pullback_metric(chart: Chart, p) -> np.ndarray:
    de = embedding_jacobian(chart, p)
    return de.T @ de


# -- standard charts ---------------------------------------------------------


def _box_sampler(lo, hi):
    lo, hi = np.asarray(lo, float), np.asarray(hi, float)

    def sample(rng, margin):
        mid = 0.5 * (lo + hi)
        half = 0.5 * (hi - lo) * margin
        return mid + half * rng.uniform(-1.0, 1.0, size=lo.shape)

    return sample


def _ball_sampler(dim: int, radius: float):
    def sample(rng, margin):
        v = rng.normal(size=dim)
        v /= np.linalg.norm(v)
        return v * radius * margin * rng.uniform() ** (1.0 / dim)

    return sample


def euclidean(n: int, half_width: float = 2.0) -> Chart:
    return Chart(
        name=f"R{n}",
        dim=n,
        metric_fn=lambda x: Jet.constant(np.eye(n), nvars=n),
        domain=lambda p: True,
        sampler=_box_sampler(-half_width * np.ones(n), half_width * np.ones(n)),
        embedding=lambda x: x,
        base_point=np.zeros(n),
    )


def half_space(n: int, scale: float = 1.0) -> Chart:
    """Upper half-space model ``scale^2 / y0^2 * sum dy_j^2`` (curvature ``-1/scale^2``)."""
    lo = np.r_[0.5, -2.0 * np.ones(n - 1)]
    hi = np.r_[4.0, 2.0 * np.ones(n - 1)]

    def metric(y):
        return np.eye(n) * (scale**2) / y[0] ** 2

    def sampler(rng, margin):
        # log-uniform height keeps the hyperbolic spread even
        y0 = np.exp(rng.uniform(np.log(lo[0]), np.log(hi[0])) * margin)
        rest = margin * rng.uniform(lo[1:], hi[1:])
        return np.r_[y0, rest]

    return Chart(
        name=f"RH{n}" if scale == 1.0 else f"RH{n}(scale={scale:g})",
        dim=n,
        metric_fn=metric,
        domain=lambda p: p[0] > 0,
        sampler=sampler,
        base_point=np.r_[1.0, np.zeros(n - 1)],
    )


def stereographic_embedding(u: Jet) -> Jet:
    """Inverse stereographic projection from the south pole; ``u = 0`` maps to ``e_1``."""
    r2 = (u * u).sum()
    denom = 1.0 + r2
    return stack([(1.0 - r2) / denom] + [2.0 * u[i] / denom for i in range(u.shape[0])])


def sphere(n: int, radius: float = 2.0) -> Chart:
    """Unit sphere ``S^n`` in the stereographic chart (metric ``4/(1+|u|^2)^2``)."""

    def metric(u):
        return np.eye(n) * (4.0 / (1.0 + (u * u).sum()) ** 2)

    return Chart(
        name=f"S{n}",
        dim=n,
        metric_fn=metric,
        domain=lambda p: np.all(np.isfinite(p)),
        sampler=_ball_sampler(n, radius),
        embedding=stereographic_embedding,
        base_point=np.zeros(n),
    )


def complex_j(m: int) -> np.ndarray:
    """Multiplication by ``i`` on ``C^m`` written in interleaved real coordinates."""
    j = np.zeros((2 * m, 2 * m))
    for k in range(m):
        j[2 * k + 1, 2 * k] = 1.0
        j[2 * k, 2 * k + 1] = -1.0
    return j


def projective_space(m: int, signs=None, radius: float = 2.0) -> Chart:
    """Fubini-Study metric on ``CP^m`` in an affine chart.

    Coordinates ``t`` relate to the affine complex coordinates ``w`` through
    ``Re/Im(w) = signs * t`` (interleaved real and imaginary parts), which
    lets a chart match the orientation of a given projection.  Holomorphic
    sectional curvature is 4; ``CP^1`` is the round sphere of radius 1/2.
    """
    n = 2 * m
    s = np.ones(n) if signs is None else np.asarray(signs, float)
    jm = complex_j(m)

    def metric(t):
        w = t * s
        big = 1.0 + (w * w).sum()
        jw = einsum("ab,b->a", jm, w)
        g = (np.eye(n) * big - einsum("a,b->ab", w, w) - einsum("a,b->ab", jw, jw)) / (big * big)
        return g * np.outer(s, s)

    return Chart(
        name=f"CP{m}",
        dim=n,
        metric_fn=metric,
        domain=lambda p: np.all(np.isfinite(p)),
        sampler=_ball_sampler(n, radius),
        base_point=np.zeros(n),
    )
