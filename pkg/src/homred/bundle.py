"""Reduction of homogeneous structures along a Riemannian principal bundle.

All total-space quantities are built as jets in the total coordinates at a
point ``pbar``.  Quantities on the base are obtained by composing those jets
with a section, so reduced metrics and tensors are ordinary jet-evaluable
fields on the base chart.

Index conventions: ``n`` total dimension, ``m`` base dimension, ``r`` fibre
dimension.  The vertical frame is an (r, n) array whose rows are the
fundamental fields of a fixed basis of the structure algebra; the
connection form ``omega`` is (r, n) with ``omega(V_j) = e_j``; horizontal
lifts are the columns of an (n, m) matrix.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import Callable, Iterable, Optional, Union

import numpy as np

from .homstruct import HomogeneousStructure, c12_trace, raise_first
from .manifold import Chart, ChartDomainError, JetFn, TensorField, christoffel_from_metric, connection_action
from .numkit import Jet, as_jet, concatenate, einsum, frame_norm, inv, jet_lift, orthonormal_frame


class DegenerateFrameError(ValueError):
    """The vertical frame is linearly dependent at a point."""


class DescentError(ValueError):
    """A quantity built on the total space differs between points of one fibre."""


class MetricDescentError(DescentError):
    """The reduced metric depends on the fibre point (fibre action not isometric)."""


class TensorDescentError(DescentError):
    """The reduced tensor depends on the fibre point (tensor not invariant)."""


@dataclass(frozen=True)
class PrincipalBundleChart:
    """A principal bundle given by charts, a projection and a vertical frame.

    Attributes:
        name: Label for reports.
        total: Chart of the total space (dimension ``n``).
        base: Chart of the base (dimension ``n - r``).
        proj: Jet-evaluable projection, total coordinates to base coordinates.
        vertical_frame: Jet-evaluable map to the (r, n) array of fundamental fields.
        h_dim: Fibre dimension ``r``.
        section: Optional jet-evaluable map from base to total coordinates.
        fibre_motion: Optional map sending a total point to another point of
            its fibre; used for the two-point descent checks.
    """

    name: str
    total: Chart
    base: Chart
    proj: JetFn
    vertical_frame: JetFn
    h_dim: int
    section: Optional[JetFn] = None
    fibre_motion: Optional[Callable[[np.ndarray], np.ndarray]] = None

    def project(self, pbar) -> np.ndarray:
        return jet_lift(self.proj, self.total.check_point(pbar), 0).v

    def vertical_at(self, pbar) -> np.ndarray:
        return jet_lift(self.vertical_frame, self.total.check_point(pbar), 0).v.reshape(self.h_dim, self.total.dim)

    def point_over(self, x, tol: float = 1e-9) -> np.ndarray:
        """A total-space point over ``x`` given by the section."""
        if self.section is None:
            raise ValueError(f"{self.name}: no section available")
        x = self.base.check_point(x)
        pbar = jet_lift(self.section, x, 0).v
        back = self.project(pbar)
        if np.max(np.abs(back - x)) > tol * max(1.0, np.max(np.abs(x))):
            raise ValueError(f"{self.name}: section does not lie over {x.tolist()}")
        return pbar

    def validate(self, samples: Iterable, tol: float = 1e-9) -> dict:
        """Residuals of the bundle invariants at total-space samples.

        Returns a dict with the largest ``|proj_* V_j|``, the smallest singular
        value of the vertical frame, and the count of projected points that
        fall outside the base domain.
        """
        worst_proj, smallest, outside = 0.0, np.inf, 0
        for p in samples:
            dpi = jet_lift(self.proj, self.total.check_point(p), 1).grad.T
            v = self.vertical_at(p)
            worst_proj = max(worst_proj, float(np.max(np.abs(dpi @ v.T))))
            smallest = min(smallest, float(np.linalg.svd(v, compute_uv=False)[-1]))
            try:
                self.base.check_point(self.project(p))
            except ChartDomainError:
                outside += 1
        return {"proj_of_vertical": worst_proj, "min_singular_value": smallest, "outside_base": outside}


class BundleJets:
    """Jets, at a total-space point, of the data every reduction uses.

    Args:
        bundle: The bundle.
        pbar: Total-space point.
        order: Derivative order of the jets (the projection is evaluated one
            order higher to get its differential).
    """

    def __init__(self, bundle: PrincipalBundleChart, pbar, order: int = 1):
        self.bundle = bundle
        self.pbar = bundle.total.check_point(pbar)
        self.order = order
        self.vars = Jet.variables(self.pbar, order)

    @cached_property
    def metric(self) -> Jet:
        return as_jet(self.bundle.total.metric_fn(self.vars))

    @cached_property
    def vertical(self) -> Jet:
        b = self.bundle
        return as_jet(b.vertical_frame(self.vars)).reshape(b.h_dim, b.total.dim)

    @cached_property
    def dproj(self) -> Jet:
        """Differential of the projection as an (m, n) jet."""
        return jet_lift(self.bundle.proj, self.pbar, self.order + 1).partials().transpose(1, 0)

    @cached_property
    def fibre_metric(self) -> Jet:
        """Gram matrix of the vertical frame."""
        f = einsum("ai,ij,bj->ab", self.vertical, self.metric, self.vertical)
        s = np.linalg.svd(f.v, compute_uv=False)
        if s[-1] <= 1e-12 * max(1.0, s[0]):
            raise DegenerateFrameError(f"{self.bundle.name}: vertical frame degenerate at {self.pbar.tolist()}")
        return f

    @cached_property
    def omega(self) -> Jet:
        return einsum("ab,bi,ij->aj", inv(self.fibre_metric), self.vertical, self.metric)

    @cached_property
    def lift(self) -> Jet:
        """Horizontal lifts of the base coordinate vectors as an (n, m) jet."""
        mdim = self.bundle.base.dim
        system = concatenate([self.dproj, self.omega], axis=0)
        if abs(np.linalg.det(system.v)) < 1e-14:
            raise np.linalg.LinAlgError(f"{self.bundle.name}: lift system singular at {self.pbar.tolist()}")
        return inv(system)[:, :mdim]

    @cached_property
    def hor_proj(self) -> np.ndarray:
        return np.eye(self.bundle.total.dim) - self.vertical.v.T @ self.omega.v

    @cached_property
    def gamma(self) -> np.ndarray:
        """Levi-Civita coefficients of the total metric (value only)."""
        return christoffel_from_metric(as_jet(self.bundle.total.metric_fn(Jet.variables(self.pbar, 1)))).v

    def structure_lowered(self, sbar: HomogeneousStructure) -> Jet:
        s = as_jet(sbar.field.fn(self.vars))
        if sbar.field.kinds == "ddd":
            return s
        return einsum("kl,kij->ijl", self.metric, s)

    def reduced_metric(self) -> Jet:
        return einsum("ai,ab,bj->ij", self.lift, self.metric, self.lift)

    def reduced_lowered(self, sbar: HomogeneousStructure) -> Jet:
        return einsum("abc,ai,bj,ck->ijk", self.structure_lowered(sbar), self.lift, self.lift, self.lift)


def _along_section(bundle: PrincipalBundleChart, build: Callable[[BundleJets], Jet], xj: Jet) -> Jet:
    """Evaluate a total-space construction along the section as a base jet."""
    if bundle.section is None:
        raise ValueError(f"{bundle.name}: no section available")
    u = as_jet(bundle.section(xj))
    return build(BundleJets(bundle, u.v, xj.order)).compose(u)


@dataclass(frozen=True)
class MechanicalConnectionAt:
    """The mechanical connection at a point.

    Attributes:
        omega: (r, n) connection form in the vertical frame.
        hor_proj: (n, n) projector onto the horizontal space.
        vertical: (r, n) vertical frame.
        fibre_metric: (r, r) Gram matrix of the vertical frame.
    """

    omega: np.ndarray
    hor_proj: np.ndarray
    vertical: np.ndarray
    fibre_metric: np.ndarray


def mech_connection_at(bundle: PrincipalBundleChart, pbar) -> MechanicalConnectionAt:
    """Connection whose horizontal space is the metric complement of the fibre.

    Raises:
        DegenerateFrameError: if the vertical frame is dependent at ``pbar``.
    """
    bj = BundleJets(bundle, pbar, 0)
    return MechanicalConnectionAt(bj.omega.v, bj.hor_proj, bj.vertical.v, bj.fibre_metric.v)


def horizontal_lift(bundle: PrincipalBundleChart, vec, pbar, x=None, tol: float = 1e-9) -> np.ndarray:
    """The horizontal vector at ``pbar`` projecting to ``vec``.

    Raises:
        ValueError: if ``x`` is given and ``pbar`` does not lie over it.
    """
    if x is not None:
        back = bundle.project(pbar)
        if np.max(np.abs(back - np.asarray(x, float))) > tol * max(1.0, np.max(np.abs(back))):
            raise ValueError(f"{bundle.name}: point {np.asarray(pbar).tolist()} is not over {np.asarray(x).tolist()}")
    return BundleJets(bundle, pbar, 0).lift.v @ np.asarray(vec, float)


def _descent_gap(a: np.ndarray, b: np.ndarray) -> float:
    return float(np.max(np.abs(a - b), initial=0.0)) / max(1.0, float(np.max(np.abs(a), initial=0.0)))


def reduced_metric_at(bundle: PrincipalBundleChart, x, tol: float = 1e-9) -> np.ndarray:
    """``g(X, Y) = gbar(X^H, Y^H)`` at ``x``.

    Raises:
        MetricDescentError: if a second fibre point gives a different value.
    """
    pbar = bundle.point_over(x)
    g = BundleJets(bundle, pbar, 0).reduced_metric().v
    if bundle.fibre_motion is not None:
        other = BundleJets(bundle, bundle.fibre_motion(pbar), 0).reduced_metric().v
        gap = _descent_gap(g, other)
        if gap > tol:
            raise MetricDescentError(f"{bundle.name}: metric does not descend at {np.asarray(x).tolist()} (gap {gap:.3e})")
    return g


def reduced_metric_field(bundle: PrincipalBundleChart) -> TensorField:
    """The reduced metric as a jet-evaluable field on the base."""
    return TensorField(lambda xj: _along_section(bundle, BundleJets.reduced_metric, xj), "dd")


def reduced_metric_residual(bundle: PrincipalBundleChart, samples: Iterable) -> float:
    """Largest gap between the reduced metric and the base chart metric."""
    worst = 0.0
    for x in samples:
        g = reduced_metric_at(bundle, x)
        worst = max(worst, _descent_gap(bundle.base.metric_jet(x, 0).v, g))
    return worst


def _reduced_gamma(bundle: PrincipalBundleChart, x) -> np.ndarray:
    g = reduced_metric_field(bundle).jet(x, 1)
    return christoffel_from_metric(g).v


def _lifted_derivative(bj: BundleJets) -> np.ndarray:
    """``nabla-bar_{X_i^H} X_j^H`` as an (n, m, m) array ``[a, i, j]``."""
    lift = bj.lift
    deriv = np.einsum("li,laj->aij", lift.v, lift.grad)
    return deriv + np.einsum("alm,li,mj->aij", bj.gamma, lift.v, lift.v)


def reduced_levi_civita_check(bundle: PrincipalBundleChart, samples: Iterable) -> float:
    """Sup of ``|nabla_X Y - pi_*(nabla-bar_{X^H} Y^H)|`` over coordinate fields.

    ``nabla`` is the Levi-Civita connection of the reduced metric; norms use
    a reduced-orthonormal frame on the lower slots.
    """
    worst = 0.0
    for x in samples:
        bj = BundleJets(bundle, bundle.point_over(x), 1)
        projected = np.einsum("ka,aij->kij", bj.dproj.v, _lifted_derivative(bj))
        gam = _reduced_gamma(bundle, x)
        g = bj.reduced_metric().v
        e = orthonormal_frame(g)
        diff = np.einsum("kl,lij->kij", np.linalg.cholesky(g).T, gam - projected)
        worst = max(worst, frame_norm(diff, e, covariant=2))
    return worst


def reduce_tensor(bundle: PrincipalBundleChart, sbar: HomogeneousStructure, x, tol: float = 1e-9) -> np.ndarray:
    """``S_X Y = pi_*(Sbar_{X^H} Y^H)`` at ``x`` as a (1,2) array ``[k, i, j]``.

    Raises:
        TensorDescentError: if a second fibre point gives a different value.
    """

    def at(pbar):
        bj = BundleJets(bundle, pbar, 0)
        s_up = raise_first(bj.structure_lowered(sbar).v, bj.metric.v)
        lift = bj.lift.v
        return np.einsum("ka,abc,bi,cj->kij", bj.dproj.v, s_up, lift, lift)

    pbar = bundle.point_over(x)
    s = at(pbar)
    if bundle.fibre_motion is not None:
        gap = _descent_gap(s, at(bundle.fibre_motion(pbar)))
        if gap > tol:
            raise TensorDescentError(f"{bundle.name}: tensor does not descend at {np.asarray(x).tolist()} (gap {gap:.3e})")
    return s


def reduced_structure(bundle: PrincipalBundleChart, sbar: HomogeneousStructure) -> HomogeneousStructure:
    """The reduced tensor as a lowered field on the base (for AS checks and classes)."""

    def fn(xj):
        return _along_section(bundle, lambda bj: bj.reduced_lowered(sbar), xj)

    return HomogeneousStructure(TensorField(fn, "ddd"), f"reduced {sbar.name}", dict(sbar.parameters))


@dataclass(frozen=True)
class AlphaForm:
    """An ``End(h)``-valued 1-form: ``fn(p)`` gives an (n, r, r) array ``alpha(d_k)``."""

    fn: Callable

    def at(self, pbar) -> np.ndarray:
        return as_jet(self.fn(Jet.variables(np.asarray(pbar, float), 0))).v


@dataclass(frozen=True)
class NablaOmegaResult:
    """Outcome of the ``nabla~ omega = alpha . omega`` test.

    Attributes:
        residual: Sup over samples of the full residual.
        horizontal_residual: Sup of the residual restricted to horizontal arguments.
        alpha: Fitted (or given) ``alpha`` at each sample, shape (n, r, r).
    """

    residual: float
    horizontal_residual: float
    alpha: tuple

    @property
    def worst(self) -> float:
        return max(self.residual, self.horizontal_residual)


def nabla_omega_at(bundle: PrincipalBundleChart, sbar: HomogeneousStructure, pbar) -> tuple[np.ndarray, BundleJets]:
    """``(nabla~_k omega)_a(d_m)`` as ``[k, a, m]`` with ``nabla~ = nabla-bar - Sbar``."""
    bj = BundleJets(bundle, pbar, 1)
    s_up = raise_first(bj.structure_lowered(sbar).v, bj.metric.v)
    gt = bj.gamma - s_up
    om = bj.omega
    return om.grad + connection_action(gt, om.v, "xd"), bj


def check_nabla_omega(
    bundle: PrincipalBundleChart,
    sbar: HomogeneousStructure,
    alpha: Union[AlphaForm, str],
    samples: Iterable,
) -> NablaOmegaResult:
    """Residual of ``nabla~ omega - alpha . omega`` at total-space samples.

    With ``alpha="solve"`` the form is fitted pointwise on the vertical block,
    ``alpha(d_k) = (nabla~_k omega)(V)``, so the remaining residual is the
    horizontal block.  Norms use a ``gbar``-orthonormal frame on the two
    tangent slots.
    """
    worst = worst_h = 0.0
    fits = []
    for p in samples:
        nab, bj = nabla_omega_at(bundle, sbar, p)
        if isinstance(alpha, str):
            if alpha != "solve":
                raise ValueError(f"alpha must be an AlphaForm or 'solve', got {alpha!r}")
            a = np.einsum("kam,bm->kab", nab, bj.vertical.v)
        else:
            a = alpha.at(p)
        fits.append(a)
        resid = nab - np.einsum("kab,bm->kam", a, bj.omega.v)
        e = orthonormal_frame(bj.metric.v)
        full = np.einsum("kam,ki,mj->aij", resid, e, e)
        hor = np.einsum("kam,ml,ki,lj->aij", nab, bj.hor_proj, e, e)
        worst = max(worst, float(np.linalg.norm(full)))
        worst_h = max(worst_h, float(np.linalg.norm(hor)))
    return NablaOmegaResult(worst, worst_h, tuple(fits))


@dataclass(frozen=True)
class FibreGeometry:
    """Second fundamental form and mean curvature of the fibre through a point.

    Attributes:
        second_fundamental: (r, r, n) array, ``[i, j]`` is ``B(V_i, V_j)``.
        mean_curvature: Horizontal vector ``H``.
        fibre_metric_form: (r, r) Gram matrix of the vertical frame.
        mean_curvature_norm: ``|H|`` in the total metric.
    """

    second_fundamental: np.ndarray
    mean_curvature: np.ndarray
    fibre_metric_form: np.ndarray
    mean_curvature_norm: float


def fibre_geometry(bundle: PrincipalBundleChart, pbar) -> FibreGeometry:
    """``B(V_i, V_j)`` = horizontal part of ``nabla-bar_{V_i} V_j``, ``H`` its trace."""
    bj = BundleJets(bundle, pbar, 1)
    v = bj.vertical
    nab = np.einsum("il,lja->ija", v.v, v.grad) + np.einsum("alm,il,jm->ija", bj.gamma, v.v, v.v)
    b = np.einsum("ab,ijb->ija", bj.hor_proj, nab)
    fib = bj.fibre_metric.v
    h = np.einsum("ij,ija->a", np.linalg.inv(fib), b)
    norm = float(np.sqrt(max(h @ bj.metric.v @ h, 0.0)))
    return FibreGeometry(b, h, fib, norm)


def c12_reduction_check(bundle: PrincipalBundleChart, sbar: HomogeneousStructure, samples: Iterable) -> float:
    """Sup of ``|c12(S)(X) - c12(Sbar)(X^H) + gbar(H, X^H)|`` over base samples."""
    worst = 0.0
    for x in samples:
        pbar = bundle.point_over(x)
        bj = BundleJets(bundle, pbar, 0)
        g_red = bj.reduced_metric().v
        e = orthonormal_frame(g_red)
        lhs = c12_trace(bj.reduced_lowered(sbar).v, g_red, e)
        lift = bj.lift.v
        h = fibre_geometry(bundle, pbar).mean_curvature
        rhs = c12_trace(bj.structure_lowered(sbar).v, bj.metric.v) @ lift - (bj.metric.v @ h) @ lift
        worst = max(worst, float(np.linalg.norm((lhs - rhs) @ e)))
    return worst


def curvature_form_check(bundle: PrincipalBundleChart, sbar: HomogeneousStructure, samples: Iterable) -> float:
    """Sup of ``|Omega(X^H, Y^H) - omega(Sbar_{Y^H} X^H - Sbar_{X^H} Y^H)|``.

    ``Omega(X^H, Y^H) = -omega([X^H, Y^H])`` with the bracket taken from the
    jets of the lifted fields.  The fibre-valued norm uses the Gram matrix of
    the vertical frame; base slots use a reduced-orthonormal frame.
    """
    worst = 0.0
    for x in samples:
        bj = BundleJets(bundle, bundle.point_over(x), 1)
        lift = bj.lift
        d = np.einsum("li,laj->aij", lift.v, lift.grad)
        bracket = d - d.transpose(0, 2, 1)
        om = bj.omega.v
        curv = -np.einsum("ra,aij->rij", om, bracket)
        s_up = raise_first(bj.structure_lowered(sbar).v, bj.metric.v)
        s_xy = np.einsum("abc,bi,cj->aij", s_up, lift.v, lift.v)  # Sbar_{X_i} X_j
        torsion = s_xy.transpose(0, 2, 1) - s_xy
        diff = curv - np.einsum("ra,aij->rij", om, torsion)
        e = orthonormal_frame(bj.reduced_metric().v)
        diff = np.einsum("rij,ia,jb->rab", diff, e, e)
        chol = np.linalg.cholesky(bj.fibre_metric.v).T
        worst = max(worst, float(np.linalg.norm(np.einsum("sr,rab->sab", chol, diff))))
    return worst


def horizontal_lift_identity_check(bundle: PrincipalBundleChart, sbar: HomogeneousStructure, samples: Iterable) -> float:
    """Sup of ``|(nabla~_X Y)^H - nabla~-bar_{X^H} Y^H|`` over base samples."""
    red = reduced_structure(bundle, sbar)
    worst = 0.0
    for x in samples:
        bj = BundleJets(bundle, bundle.point_over(x), 1)
        g_red = bj.reduced_metric().v
        s_red_up = raise_first(red.lowered_jet(bundle.base, x, 0).v, g_red)
        lhs = np.einsum("ak,kij->aij", bj.lift.v, _reduced_gamma(bundle, x) - s_red_up)
        s_up = raise_first(bj.structure_lowered(sbar).v, bj.metric.v)
        rhs = _lifted_derivative(bj) - np.einsum("abc,bi,cj->aij", s_up, bj.lift.v, bj.lift.v)
        e_tot = np.linalg.cholesky(bj.metric.v).T
        e = orthonormal_frame(g_red)
        diff = np.einsum("ba,aij,ik,jl->bkl", e_tot, lhs - rhs, e, e)
        worst = max(worst, float(np.linalg.norm(diff)))
    return worst
