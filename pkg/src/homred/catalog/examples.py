"""Builders for the catalog examples."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any, Callable, Mapping, Optional

import numpy as np

from ..bundle import AlphaForm, PrincipalBundleChart
from ..contact import AlmostContactMetric
from ..homstruct import HomogeneousStructure, zero_structure
from ..manifold import (
    Chart,
    TensorField,
    complex_j,
    euclidean,
    half_space,
    projective_space,
    sphere,
    stereographic_embedding,
)
from ..numkit import Jet, as_jet, einsum, jet_lift, stack
from . import fields as F
from .algebras import AlgebraFamily, rh4_family, sp2u1_family, u2_family, u4_family
from .tables import (
    CP3_REDUCED,
    RH3_REDUCED,
    RH4_FAMILY,
    S3_SASAKIAN,
    S3_U2,
    S7_SASAKIAN,
    S7_SP2U1,
    S7_U4,
    CoefficientTable,
)

# Hopf total spaces are sampled in |u| <= 0.8 so that the first complex
# (or quaternionic) coordinate stays away from zero.
HOPF_RADIUS = 0.8


@dataclass(frozen=True)
class Expectation:
    """An expected value with the kind of source it comes from.

    Attributes:
        value: A constant or a callable of the parameter dict.
        origin: ``"published"``, ``"derived"`` or ``"trivial"``.
        note: Short description.
    """

    value: Any
    origin: str
    note: str = ""

    def resolve(self, params: Mapping[str, float]) -> Any:
        return self.value(params) if callable(self.value) else self.value


@dataclass(frozen=True)
class ExampleSpec:
    """A fully wired catalog example.

    Attributes:
        name: Registry key.
        summary: One-line description.
        chart: Chart carrying the structure tensor.
        family: ``params -> HomogeneousStructure``.
        defaults: Parameter names and default values.
        bundle: Optional principal bundle with ``chart`` as total space.
        acms: Optional almost contact metric structure on ``chart``.
        alpha: Optional ``End(h)``-valued form for the parallel-connection test.
        table: Optional base-point coefficient table of the tensor.
        reduced_table: Optional coefficient table of the reduced tensor.
        reduced_point: Base point at which ``reduced_table`` applies.
        algebra: Optional algebra family producing the base-point tensor.
        homogeneous: Whether every family member solves the AS equations.
        reduced_index_base: First index of the base coordinates in printed tables.
        expected: Further expectations by key.
    """

    name: str
    summary: str
    chart: Chart
    family: Callable[[Mapping[str, float]], HomogeneousStructure]
    defaults: Mapping[str, float] = field(default_factory=dict)
    bundle: Optional[PrincipalBundleChart] = None
    acms: Optional[AlmostContactMetric] = None
    alpha: Optional[AlphaForm] = None
    table: Optional[CoefficientTable] = None
    reduced_table: Optional[CoefficientTable] = None
    reduced_point: Optional[np.ndarray] = None
    algebra: Optional[Callable[[], AlgebraFamily]] = None
    homogeneous: bool = True
    reduced_index_base: int = 1
    expected: Mapping[str, Expectation] = field(default_factory=dict)

    def params(self, given: Mapping[str, float] | None = None) -> dict:
        """Defaults overridden by ``given``.

        Raises:
            ValueError: for parameter names the example does not take.
        """
        given = dict(given or {})
        unknown = sorted(set(given) - set(self.defaults))
        if unknown:
            allowed = ", ".join(sorted(self.defaults)) or "none"
            raise ValueError(f"{self.name}: unknown parameter(s) {', '.join(unknown)} (allowed: {allowed})")
        out = dict(self.defaults)
        out.update({k: float(v) for k, v in given.items()})
        return out

    def structure(self, given: Mapping[str, float] | None = None) -> HomogeneousStructure:
        return self.family(self.params(given))

    @property
    def base_point(self) -> np.ndarray:
        return self.chart.base_point

    def table_coefficients(self, given: Mapping[str, float] | None = None, p=None) -> np.ndarray:
        """Lowered tensor at ``p`` (default: base point) in the table's coordinates."""
        p = self.base_point if p is None else p
        low = self.structure(given).lowered(self.chart, p)
        return to_table_coordinates(self.chart, low, p)


def to_table_coordinates(chart: Chart, low: np.ndarray, p) -> np.ndarray:
    """Rewrite a lowered chart tensor in ambient coordinates when the chart is embedded."""
    if chart.embedding is None:
        return low
    de = jet_lift(chart.embedding, p, 1).grad  # [i, a]
    pinv = np.linalg.pinv(de)  # [a, i]
    return np.einsum("ijk,ai,bj,ck->abc", low, pinv, pinv, pinv)


def jet_motion(fn: Callable[[Jet], Jet]) -> Callable:
    """Wrap a jet map so it also takes and returns plain arrays."""

    def out(p):
        if isinstance(p, Jet):
            return fn(p)
        return jet_lift(fn, np.asarray(p, float), 0).v

    return out


def _constant(value: np.ndarray, n: int) -> Jet:
    return Jet.constant(np.asarray(value, float), nvars=n)


# -- half-space examples -----------------------------------------------------------


def _drop_coordinate(n: int, k: int = 1):
    def proj(y):
        return stack([y[i] for i in range(n) if i != k])

    def vertical(y):
        v = np.zeros((1, n))
        v[0, k] = 1.0
        return _constant(v, y.nvars)

    def section(x):
        parts = [x[i] for i in range(n - 1)]
        parts.insert(k, 0.0 * x[0])
        return stack(parts)

    shift = 0.7 * np.eye(n)[k]

    def motion(p):
        return p + shift

    return proj, vertical, section, jet_motion(motion)


def rh_bundle(n: int) -> PrincipalBundleChart:
    """``RH(n) -> RH(n-1)`` forgetting ``y^1``."""
    proj, vertical, section, motion = _drop_coordinate(n)
    return PrincipalBundleChart(f"RH{n}->RH{n - 1}", half_space(n), half_space(n - 1), proj, vertical, 1, section, motion)


def solvable_structure(n: int, scale: float = 1.0) -> HomogeneousStructure:
    """``g(X,Y) theta(Z) - g(X,Z) theta(Y)`` with ``theta = dy^0 / y^0`` on the half-space."""

    def fn(y):
        g = _constant(np.eye(n) * scale**2, y.nvars) / (y[0] * y[0])
        theta = stack([1.0 / y[0]] + [0.0 * y[0]] * (n - 1))
        return einsum("ij,k->ijk", g, theta) - einsum("ik,j->ijk", g, theta)

    return HomogeneousStructure(TensorField(fn, "ddd"), f"solvable RH{n}")


def _half_space_table_field(table: CoefficientTable, params) -> TensorField:
    t = table.tensor(params)
    return TensorField(lambda y: _constant(t, y.nvars) / (y[0] * y[0] * y[0]), "ddd")


def _rh_alpha(n: int) -> AlphaForm:
    return AlphaForm(lambda y: stack([1.0 / y[0]] + [0.0 * y[0]] * (n - 1)).reshape(n, 1, 1))


def rhn_solvable(n: int = 3) -> ExampleSpec:
    """Solvable structure on ``RH(n)``; ``n`` is a structural parameter."""
    n = int(n)
    if n < 3:
        raise ValueError("rhn-solvable needs n >= 3")
    return ExampleSpec(
        name="rhn-solvable",
        summary="Solvable S1 structure on RH(n), reduced to RH(n-1)",
        chart=half_space(n),
        family=lambda q: solvable_structure(n),
        defaults={"n": float(n)},
        bundle=rh_bundle(n),
        reduced_index_base=0,
        alpha=_rh_alpha(n),
        expected={
            "class": Expectation("S1", "published"),
            "reduced_class": Expectation("S1", "published"),
            "reduced": Expectation(("structure", solvable_structure(n - 1)), "published"),
            "mean_curvature_norm": Expectation(1.0, "derived"),
        },
    )


def rh4_family_example() -> ExampleSpec:
    def family(q):
        return HomogeneousStructure(_half_space_table_field(RH4_FAMILY, q), "RH4 family", q)

    def reduced(q):
        return ("structure", HomogeneousStructure(_half_space_table_field(RH3_REDUCED, q), "RH3 family", q))

    def expected_class(q):
        return "generic" if q["lambda0"] != 0.0 or q["lambda1"] != 0.0 else "S1"

    def reduced_class(q):
        return "generic" if q["lambda0"] != 0.0 else "S1"

    return ExampleSpec(
        name="rh4-family",
        summary="Two-parameter family on RH(4) from SO(2)AN, reduced to RH(3)",
        chart=half_space(4),
        family=family,
        defaults={"lambda0": 0.0, "lambda1": 0.0},
        bundle=rh_bundle(4),
        reduced_index_base=0,
        alpha=_rh_alpha(4),
        table=RH4_FAMILY,
        algebra=rh4_family,
        expected={
            "class": Expectation(expected_class, "published"),
            "reduced_class": Expectation(reduced_class, "published"),
            "reduced": Expectation(reduced, "published"),
            "equivariant_dim": Expectation(2, "published"),
            "mean_curvature_norm": Expectation(1.0, "derived"),
        },
    )


# -- Hopf examples ---------------------------------------------------------------


def hopf_bundle(m: int, right: bool = False, name: str | None = None) -> PrincipalBundleChart:
    """Hopf fibration ``S^{2m+1} -> CP^m`` in stereographic and affine charts.

    ``right=True`` uses the right-``i`` action on ``S^7`` (quaternionic
    coordinates); the base chart then carries the matching sign pattern.
    """
    n = 2 * m + 1
    total = sphere(n, radius=HOPF_RADIUS)
    if right:
        base = projective_space(m, signs=(1, -1, 1, 1, 1, -1))
        projection, generator, rotate = F.hopf_projection_right, F.right_minus_i, F.rotate_right
    else:
        base = projective_space(m)
        projection, generator, rotate = F.hopf_projection_left, F.left_i, F.rotate_left

    def proj(u):
        return projection(stereographic_embedding(u))

    vertical_fn = F.chart_field_from_ambient(generator, "u")

    def vertical(u):
        return vertical_fn(u).reshape(1, n)

    def section(t):
        return F.stereographic_inverse(F.affine_section(t))

    def motion(u):
        return F.stereographic_inverse(rotate(stereographic_embedding(u), 0.9))

    label = name or f"S{n}->CP{m}" + (" (right)" if right else "")
    return PrincipalBundleChart(label, total, base, proj, vertical, 1, section, jet_motion(motion))


def standard_acms(m: int) -> AlmostContactMetric:
    """Standard Sasakian structure on ``S^{2m+1}``: ``xi = i x``, ``eta = g(xi, .)``, ``phi = -tan(i)``."""
    n = 2 * m + 1
    j = complex_j(m + 1)

    def phi_amb(x):
        return _constant(-j, x.nvars)

    return AlmostContactMetric(
        phi=TensorField(F.chart_field_from_ambient(phi_amb, "ud"), "ud"),
        xi=TensorField(F.chart_field_from_ambient(F.left_i, "u"), "u"),
        eta=TensorField(F.chart_field_from_ambient(F.left_i, "d"), "d"),
        name=f"standard S{n}",
    )


def _transported(fam: AlgebraFamily, section, name: str):
    def family(q):
        s0 = fam.tensor(q)
        return HomogeneousStructure(TensorField(F.transported_structure(s0, section), "ddd"), name, dict(q))

    return family


def hopf_s3_u2() -> ExampleSpec:
    return ExampleSpec(
        name="hopf-s3-u2",
        summary="U(2) family on S3 reduced along the Hopf fibration to S2",
        chart=sphere(3, radius=HOPF_RADIUS),
        family=_transported(u2_family(), F.su2_section, "u(2) family"),
        defaults={"lambda": 0.0},
        bundle=hopf_bundle(1),
        acms=standard_acms(1),
        table=S3_U2,
        algebra=u2_family,
        expected={
            "reduced": Expectation(("zero", None), "published"),
            "reduced_curvature": Expectation(4.0, "derived"),
            "lift_of_zero": Expectation({"lambda": 2.0}, "derived", "Sasakian lift of the zero tensor on S2"),
            "equivariant_dim": Expectation(1, "published"),
            "mean_curvature_norm": Expectation(0.0, "published"),
        },
    )


def hopf_s7_u4() -> ExampleSpec:
    return ExampleSpec(
        name="hopf-s7-u4",
        summary="U(4) tensor on S7 reduced along the Hopf fibration to CP3",
        chart=sphere(7, radius=HOPF_RADIUS),
        family=_transported(u4_family(), F.u4_section, "u(4) tensor"),
        bundle=hopf_bundle(3),
        acms=standard_acms(3),
        table=S7_U4,
        algebra=u4_family,
        expected={
            "class": Expectation("S2⊕S3", "published"),
            "reduced": Expectation(("zero", None), "published"),
            "equivariant_dim": Expectation(0, "published", "the decomposition is stated to be unique"),
            "mean_curvature_norm": Expectation(0.0, "published"),
        },
    )


def hopf_s7_sp2u1() -> ExampleSpec:
    return ExampleSpec(
        name="hopf-s7-sp2u1",
        summary="Sp(2)U(1) family on S7 reduced along the right Hopf fibration to CP3",
        chart=sphere(7, radius=HOPF_RADIUS),
        family=_transported(sp2u1_family(), F.sp2_section, "sp(2)+u(1) family"),
        defaults={"lambda": 0.0},
        bundle=hopf_bundle(3, right=True),
        table=S7_SP2U1,
        reduced_table=CP3_REDUCED,
        reduced_point=np.zeros(6),
        algebra=sp2u1_family,
        expected={
            "class": Expectation("S2⊕S3", "published"),
            "reduced_class": Expectation("S2⊕S3", "published"),
            "equivariant_dim": Expectation(1, "published"),
            "mean_curvature_norm": Expectation(0.0, "published"),
        },
    )


# -- Sasakian examples -------------------------------------------------------------


def _negate_chart_field(fn, slots: int):
    """Pull back a chart field by the isometry ``u -> -u`` of the stereographic chart."""
    sign = (-1.0) ** slots

    def out(u):
        return as_jet(fn(-u)) * sign

    return out


def negated_acms(acms: AlmostContactMetric) -> AlmostContactMetric:
    return AlmostContactMetric(
        phi=TensorField(_negate_chart_field(acms.phi.fn, 2), "ud"),
        xi=TensorField(_negate_chart_field(acms.xi.fn, 1), "u"),
        eta=TensorField(_negate_chart_field(acms.eta.fn, 1), "d"),
        name=f"{acms.name} (reflected)",
    )


def negated_bundle(b: PrincipalBundleChart) -> PrincipalBundleChart:
    motion = b.fibre_motion
    return PrincipalBundleChart(
        name=f"{b.name} (reflected)",
        total=b.total,
        base=b.base,
        proj=lambda u: b.proj(-u),
        vertical_frame=lambda u: as_jet(b.vertical_frame(-u)) * -1.0,
        h_dim=b.h_dim,
        section=lambda x: as_jet(b.section(x)) * -1.0,
        fibre_motion=None if motion is None else jet_motion(lambda p: -motion(-p)),
    )


def _negated_family(family, name: str):
    def out(q):
        s = family(q)
        return HomogeneousStructure(TensorField(_negate_chart_field(s.field.fn, 3), "ddd"), name, dict(q))

    return out


def sasakian_s3() -> ExampleSpec:
    base = hopf_s3_u2()
    return ExampleSpec(
        name="sasakian-s3",
        summary="Sasakian homogeneous family on S3 (reflected u(2) family) reduced to S2",
        chart=base.chart,
        family=_negated_family(base.family, "Sasakian S3 family"),
        defaults={"lambda": 0.0},
        bundle=negated_bundle(base.bundle),
        acms=negated_acms(base.acms),
        table=S3_SASAKIAN,
        expected={
            "reduced": Expectation(("zero", None), "published"),
            "lift_of_zero": Expectation({"lambda": 2.0}, "derived", "Sasakian lift of the zero tensor on S2"),
        },
    )


def sasakian_s7() -> ExampleSpec:
    base = hopf_s7_u4()
    return ExampleSpec(
        name="sasakian-s7",
        summary="Sasakian homogeneous tensor on S7 (reflected u(4) tensor) reduced to CP3",
        chart=base.chart,
        family=_negated_family(base.family, "Sasakian S7 tensor"),
        bundle=negated_bundle(base.bundle),
        acms=negated_acms(base.acms),
        table=S7_SASAKIAN,
        expected={
            "reduced": Expectation(("zero", None), "published"),
        },
    )


# -- CH(1) Sasakian line bundle ------------------------------------------------------


def _ch1_eta(y):
    zero = 0.0 * y[0]
    return stack([zero, -0.5 / y[0], 1.0 + zero])


def ch1_total() -> Chart:
    """``(y0, y1, t)`` with ``gbar = g + eta (x) eta`` over the curvature ``-4`` half-plane."""
    base = half_space(2, 0.5)

    def metric(y):
        g = as_jet(base.metric_fn(stack([y[0], y[1]])))
        zero = 0.0 * y[0]
        g3 = stack([stack([g[0, 0], g[0, 1], zero]), stack([g[1, 0], g[1, 1], zero]), stack([zero, zero, zero])])
        eta = _ch1_eta(y)
        return g3 + einsum("i,j->ij", eta, eta)

    def sampler(rng, margin):
        y = base.sampler(rng, margin)
        return np.r_[y, margin * rng.uniform(-2.0, 2.0)]

    return Chart("CH1 line bundle", 3, metric, lambda p: p[0] > 0, sampler, base_point=np.array([1.0, 0.0, 0.0]))


def ch1_bundle() -> PrincipalBundleChart:
    base = half_space(2, 0.5)
    proj, vertical, section, motion = _drop_coordinate(3, 2)
    return PrincipalBundleChart("CH1 line bundle -> CH(1)", ch1_total(), base, proj, vertical, 1, section, motion)


def ch1_acms() -> AlmostContactMetric:
    """``xi = d/dt``, ``eta = dt - dy1/(2 y0)``, ``phi`` = minus the lifted rotation ``J d0 = d1``."""

    def phi(y):
        zero = 0.0 * y[0]
        # phi(d0) = -(d1)^H, phi(d1) = (d0)^H = d0, phi(d_t) = 0
        return stack([stack([zero, 1.0 + zero, zero]), stack([-1.0 + zero, zero, zero]), stack([-0.5 / y[0], zero, zero])])

    return AlmostContactMetric(
        phi=TensorField(phi, "ud"),
        xi=TensorField(lambda y: _constant([0.0, 0.0, 1.0], y.nvars), "u"),
        eta=TensorField(_ch1_eta, "d"),
        name="CH1 Sasakian",
    )


def ch1_sasakian() -> ExampleSpec:
    from ..contact import sasakian_lift

    bundle = ch1_bundle()
    acms = ch1_acms()
    base_tensor = solvable_structure(2, scale=0.5)

    def family(q):
        return sasakian_lift(bundle, base_tensor, acms)

    return ExampleSpec(
        name="ch1-sasakian",
        summary="Sasakian line bundle over CH(1) with the lifted S1 Kahler structure",
        chart=bundle.total,
        family=family,
        bundle=bundle,
        acms=acms,
        reduced_index_base=0,
        expected={
            "reduced": Expectation(("structure", base_tensor), "derived", "round trip of the lift"),
        },
    )


# -- trivial examples ------------------------------------------------------------------


def round_s2() -> ExampleSpec:
    return ExampleSpec(
        name="round-s2",
        summary="Round S2 with the zero structure (symmetric space)",
        chart=sphere(2),
        family=lambda q: zero_structure(2),
        expected={"class": Expectation("zero", "trivial")},
    )


def product_flat() -> ExampleSpec:
    proj, vertical, section, motion = _drop_coordinate(3, 2)
    bundle = PrincipalBundleChart("R3->R2", euclidean(3), euclidean(2), proj, vertical, 1, section, motion)
    return ExampleSpec(
        name="product-flat",
        summary="Flat product R2 x R with the zero structure",
        chart=bundle.total,
        family=lambda q: zero_structure(3),
        bundle=bundle,
        alpha=AlphaForm(lambda y: _constant(np.zeros((3, 1, 1)), y.nvars)),
        expected={
            "class": Expectation("zero", "trivial"),
            "reduced": Expectation(("zero", None), "trivial"),
            "mean_curvature_norm": Expectation(0.0, "trivial"),
        },
    )


BUILDERS: dict[str, Callable[[], ExampleSpec]] = {
    "ch1-sasakian": ch1_sasakian,
    "hopf-s3-u2": hopf_s3_u2,
    "hopf-s7-sp2u1": hopf_s7_sp2u1,
    "hopf-s7-u4": hopf_s7_u4,
    "product-flat": product_flat,
    "rh4-family": rh4_family_example,
    "rhn-solvable": rhn_solvable,
    "round-s2": round_s2,
    "sasakian-s3": sasakian_s3,
    "sasakian-s7": sasakian_s7,
}
