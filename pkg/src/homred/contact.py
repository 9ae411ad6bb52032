"""Almost contact metric structures and their reduction to almost Hermitian data.

Conventions: ``phi`` is stored as a (1,1) array ``[a, b]`` = ``d_a`` component
of ``phi(d_b)``.  The fundamental 2-form is ``Phi(X, Y) = g(X, phi Y)`` and
``d eta(X, Y) = X eta(Y) - Y eta(X) - eta([X, Y])`` (no factor 1/2), so the
standard Sasakian spheres satisfy ``d eta = 2 Phi``.  The other ordering
``g(phi X, Y)`` is available for comparison.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable

import numpy as np

from .bundle import (
    BundleJets,
    PrincipalBundleChart,
    _along_section,
    _reduced_gamma,
    reduced_metric_field,
    reduced_structure,
)
from .homstruct import HomogeneousStructure, raise_first
from .manifold import Chart, LocalGeometry, TensorField, connection_action
from .numkit import Jet, as_jet, einsum, inv, orthonormal_frame


class BundleMismatchError(ValueError):
    """The contact form is not the mechanical connection form of the bundle."""


class PreconditionError(ValueError):
    """A structure tensor does not parallelize the contact structure."""


class NotSasakianError(ValueError):
    """The almost contact metric structure is not Sasakian."""


@dataclass(frozen=True)
class AlmostContactMetric:
    """Fields ``(phi, xi, eta)`` on a chart; the metric is the chart metric."""

    phi: TensorField
    xi: TensorField
    eta: TensorField
    name: str = "acms"

    def __post_init__(self) -> None:
        if (self.phi.kinds, self.xi.kinds, self.eta.kinds) != ("ud", "u", "d"):
            raise ValueError("expected kinds 'ud', 'u' and 'd' for phi, xi and eta")

    def at(self, p) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        return self.phi.at(p), self.xi.at(p), self.eta.at(p)


def _norm(a: np.ndarray, e: np.ndarray, kinds: str) -> float:
    """Frame norm for mixed slots: ``e`` converts covariant slots, ``e^{-1}`` contravariant ones."""
    einv = np.linalg.inv(e)
    out = np.asarray(a, float)
    for s, k in enumerate(kinds):
        m = e if k == "d" else einv.T
        out = np.moveaxis(np.tensordot(out, m, axes=([s], [0])), -1, s)
    return float(np.linalg.norm(out))


def validate_acms(chart: Chart, acms: AlmostContactMetric, samples: Iterable) -> dict:
    """Sup residuals of the defining identities (orthonormal-frame norms).

    ``metric_compat`` uses ``g(phi X, phi Y) = g(X, Y) - eta(X) eta(Y)``;
    ``metric_compat_plus`` reports the variant with a plus sign.
    """
    keys = ("phi_xi", "eta_phi", "eta_xi", "phi_squared", "metric_dual", "metric_compat", "metric_compat_plus")
    out = dict.fromkeys(keys, 0.0)
    for p in samples:
        g = chart.metric_jet(p, 0).v
        e = orthonormal_frame(g)
        phi, xi, eta = acms.at(p)
        n = g.shape[0]
        compat = phi.T @ g @ phi - g
        vals = {
            "phi_xi": _norm(phi @ xi, e, "u"),
            "eta_phi": _norm(eta @ phi, e, "d"),
            "eta_xi": abs(float(eta @ xi) - 1.0),
            "phi_squared": _norm(phi @ phi + np.eye(n) - np.outer(xi, eta), e, "ud"),
            "metric_dual": _norm(g @ xi - eta, e, "d"),
            "metric_compat": _norm(compat + np.outer(eta, eta), e, "dd"),
            "metric_compat_plus": _norm(compat - np.outer(eta, eta), e, "dd"),
        }
        for k, v in vals.items():
            out[k] = max(out[k], v)
    return out


def fundamental_two_form(chart: Chart, acms: AlmostContactMetric, p, ordering: str = "g(X,phiY)") -> np.ndarray:
    """``Phi[i, j]`` for the chosen ordering (``"g(X,phiY)"`` or ``"g(phiX,Y)"``)."""
    g = chart.metric_jet(p, 0).v
    phi = acms.phi.at(p)
    if ordering == "g(X,phiY)":
        return g @ phi
    if ordering == "g(phiX,Y)":
        return phi.T @ g
    raise ValueError(f"unknown ordering {ordering!r}")


@dataclass(frozen=True)
class SasakianResidual:
    """Residuals of ``d eta = 2 Phi`` (both orderings of ``Phi``) and of the ``nabla phi`` identity."""

    contact: float
    contact_other_ordering: float
    nabla_phi: float

    @property
    def pair(self) -> tuple[float, float]:
        return self.contact, self.nabla_phi


def sasakian_check(chart: Chart, acms: AlmostContactMetric, samples: Iterable) -> SasakianResidual:
    """Residuals of ``d eta - 2 Phi`` and ``(nabla_X phi) Y - g(X, Y) xi + eta(Y) X``."""
    r1 = r1b = r2 = 0.0
    for p in samples:
        geo = LocalGeometry(chart, p, order=1)
        g, e = geo.g, geo.frame
        eta = acms.eta.jet(p, 1)
        deta = eta.grad - eta.grad.T
        phi = acms.phi.jet(p, 1)
        xi = acms.xi.at(p)
        r1 = max(r1, _norm(deta - 2.0 * g @ phi.v, e, "dd"))
        r1b = max(r1b, _norm(deta - 2.0 * phi.v.T @ g, e, "dd"))
        nab = phi.grad + connection_action(geo.gamma, phi.v, "ud")  # [k, a, b]
        n = g.shape[0]
        target = np.einsum("kb,a->kab", g, xi) - np.einsum("b,ak->kab", eta.v, np.eye(n))
        r2 = max(r2, _norm(nab - target, e, "dud"))
    return SasakianResidual(r1, r1b, r2)


def _check_mechanical(bundle: PrincipalBundleChart, acms: AlmostContactMetric, pbar, tol: float) -> BundleJets:
    if bundle.h_dim != 1:
        raise BundleMismatchError("contact reduction needs a one-dimensional fibre")
    bj = BundleJets(bundle, pbar, 0)
    gap = float(np.max(np.abs(acms.eta.at(pbar) - bj.omega.v[0])))
    if gap > tol:
        raise BundleMismatchError(f"{bundle.name}: eta is not the mechanical connection form (gap {gap:.3e})")
    return bj


def reduce_complex(bundle: PrincipalBundleChart, acms: AlmostContactMetric, x, tol: float = 1e-9) -> np.ndarray:
    """``J X = pi_*(phi X^H)`` at ``x`` as an (m, m) matrix.

    Raises:
        BundleMismatchError: if ``eta`` is not the mechanical connection form.
    """
    pbar = bundle.point_over(x)
    bj = _check_mechanical(bundle, acms, pbar, tol)
    return bj.dproj.v @ acms.phi.at(pbar) @ bj.lift.v


def reduced_complex_field(bundle: PrincipalBundleChart, acms: AlmostContactMetric) -> TensorField:
    """The reduced almost complex structure as a jet-evaluable (1,1) field on the base."""

    def build(bj: BundleJets) -> Jet:
        return einsum("ka,ab,bj->kj", bj.dproj, as_jet(acms.phi.fn(bj.vars)), bj.lift)

    return TensorField(lambda xj: _along_section(bundle, build, xj), "ud")


def complex_structure_residuals(bundle: PrincipalBundleChart, acms: AlmostContactMetric, samples: Iterable) -> dict:
    """Sup over base samples of ``|J^2 + id|`` and ``|g(J., J.) - g|`` for the reduced metric."""
    sq = herm = 0.0
    for x in samples:
        j = reduce_complex(bundle, acms, x)
        bj = BundleJets(bundle, bundle.point_over(x), 0)
        g = bj.reduced_metric().v
        e = orthonormal_frame(g)
        sq = max(sq, _norm(j @ j + np.eye(len(j)), e, "ud"))
        herm = max(herm, _norm(j.T @ g @ j - g, e, "dd"))
    return {"J_squared": sq, "hermitian": herm}


def tilde_nabla_phi(chart: Chart, acms: AlmostContactMetric, sbar: HomogeneousStructure, p) -> float:
    """Frame norm of ``(nabla-bar - Sbar) phi`` at ``p``."""
    geo = LocalGeometry(chart, p, order=1)
    s_up = sbar.upper(chart, p, geo.g)
    phi = acms.phi.jet(p, 1)
    nab = phi.grad + connection_action(geo.gamma - s_up, phi.v, "ud")
    return _norm(nab, geo.frame, "dud")


@dataclass(frozen=True)
class KahlerCheck:
    """Results of the almost Hermitian / Kahler homogeneity check on the base.

    Attributes:
        precondition: Sup of ``|nabla~-bar phi|`` on the total space.
        nabla_J: Sup of ``|nabla~ J|`` with ``nabla~ = nabla - S``.
        kahler_form_closed: Sup of ``|d(g(J., .))|``.
    """

    precondition: float
    nabla_J: float
    kahler_form_closed: float


def kahler_homogeneity_check(
    bundle: PrincipalBundleChart,
    acms: AlmostContactMetric,
    sbar: HomogeneousStructure,
    samples: Iterable,
    tol: float = 1e-8,
) -> KahlerCheck:
    """Check ``nabla~ J = 0`` on the base for ``S`` reduced from ``Sbar``.

    Raises:
        PreconditionError: if ``Sbar`` does not parallelize ``phi``.
    """
    samples = list(samples)
    pre = max(tilde_nabla_phi(bundle.total, acms, sbar, bundle.point_over(x)) for x in samples)
    if pre > tol:
        raise PreconditionError(f"{bundle.name}: nabla~ phi = {pre:.3e} exceeds {tol:g}")
    red = reduced_structure(bundle, sbar)
    jfield = reduced_complex_field(bundle, acms)
    gfield = reduced_metric_field(bundle)
    worst_j = worst_k = 0.0
    for x in samples:
        g = gfield.jet(x, 1)
        e = orthonormal_frame(g.v)
        s_up = raise_first(red.lowered_jet(bundle.base, x, 0).v, g.v)
        jj = jfield.jet(x, 1)
        nab = jj.grad + connection_action(_reduced_gamma(bundle, x) - s_up, jj.v, "ud")
        worst_j = max(worst_j, _norm(nab, e, "dud"))
        kform = einsum("ia,aj->ij", g, jj)
        dk = kform.grad  # [l, i, j] = d_l K_ij
        closed = dk + dk.transpose(1, 2, 0) + dk.transpose(2, 0, 1)
        worst_k = max(worst_k, _norm(closed, e, "ddd"))
    return KahlerCheck(pre, worst_j, worst_k)


def sasakian_lift(
    bundle: PrincipalBundleChart,
    s_base: HomogeneousStructure,
    acms: AlmostContactMetric,
    check_points: Iterable = (),
    tol: float = 1e-8,
) -> HomogeneousStructure:
    """Lift a base Kahler structure tensor to the Sasakian total space.

    ``Sbar_{X^H} Y^H = (S_X Y)^H - g(X^H, phi Y^H) xi``,
    ``Sbar_{X^H} xi = Sbar_xi X^H = -phi X^H`` and ``Sbar_xi xi = 0``.

    Raises:
        NotSasakianError: if the structure fails the Sasakian identities at
            any of ``check_points``.
    """
    pts = list(check_points)
    if pts:
        res = sasakian_check(bundle.total, acms, pts)
        if max(res.pair) > tol:
            raise NotSasakianError(f"{acms.name}: Sasakian residuals {res.pair} exceed {tol:g}")

    def fn(y):
        bj = BundleJets(bundle, y.v, y.order)
        base_pt = bundle.proj(bj.vars)
        s = as_jet(s_base.field.fn(base_pt))
        if s_base.field.kinds == "ddd":
            gb = as_jet(bundle.base.metric_fn(base_pt))
            s = einsum("kl,ijl->kij", inv(gb), s)
        phi = as_jet(acms.phi.fn(bj.vars))
        xi = as_jet(acms.xi.fn(bj.vars))
        eta = as_jet(acms.eta.fn(bj.vars))
        dpi = bj.dproj
        horiz = einsum("ak,kpq,pi,qj->aij", bj.lift, s, dpi, dpi)
        gphi = einsum("ia,aj->ij", bj.metric, phi)
        out = horiz - einsum("ij,a->aij", gphi, xi) - einsum("j,ai->aij", eta, phi) - einsum("i,aj->aij", eta, phi)
        return out.compose(y)

    return HomogeneousStructure(TensorField(fn, "udd"), f"lift of {s_base.name}", dict(s_base.parameters))
