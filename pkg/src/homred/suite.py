"""Check runners shared by the command line and the acceptance tests.

Every check becomes a :class:`CheckResult`.  Residual checks pass when the
residual is at most the tolerance; discrete checks compare an observed
value (class label, integer dimension) with the expected one.  Exceptions
raised while evaluating a check are caught and reported as failed entries.
"""

from __future__ import annotations

import traceback
from dataclasses import dataclass
from typing import Any, Callable, Iterable, Mapping, Optional

import numpy as np

from . import bundle as B
from . import contact as C
from .catalog import get_example, list_examples
from .catalog.examples import ExampleSpec, to_table_coordinates
from .homstruct import HomogeneousStructure, as_residuals, classify, lower_first, tv_project, zero_structure
from .liered import enumerate_equivariant
from .manifold import Chart, LocalGeometry
from .numkit import SampleSpec, frame_norm, jet_lift, orthonormal_frame

DEFAULT_POINTS = 20
DEFAULT_SEED = 0
DEFAULT_TOL = 1e-8


@dataclass(frozen=True)
class CheckResult:
    """One entry of a report.

    Attributes:
        name: Check identifier.
        passed: Outcome.
        origin: Where the expected value comes from (published, derived, trivial).
        residual: Measured residual for tolerance checks.
        tolerance: Bound applied to ``residual``.
        expected: Expected value for discrete checks.
        observed: Observed value for discrete checks.
        detail: Free-form context, e.g. an error message.
        criterion: Acceptance criterion number, when run from the matrix.
    """

    name: str
    passed: bool
    origin: str
    residual: Optional[float] = None
    tolerance: Optional[float] = None
    expected: Any = None
    observed: Any = None
    detail: str = ""
    criterion: Optional[int] = None

    def as_dict(self) -> dict:
        out = {"name": self.name, "passed": self.passed, "origin": self.origin}
        for key in ("criterion", "residual", "tolerance", "expected", "observed"):
            val = getattr(self, key)
            if val is not None:
                out[key] = val
        if self.detail:
            out["detail"] = self.detail
        return out


@dataclass(frozen=True)
class RunConfig:
    """Sampling and tolerance settings.

    Attributes:
        points: Samples per check.
        seed: Master seed.
        tol: Residual tolerance for example checks; ``None`` keeps the
            per-criterion tolerances of the acceptance matrix.
    """

    points: int = DEFAULT_POINTS
    seed: int = DEFAULT_SEED
    tol: Optional[float] = None

    def samples(self, chart: Chart, salt: int = 0, count: Optional[int] = None) -> list[np.ndarray]:
        return chart.sample(SampleSpec(seed=self.seed + 7919 * salt, count=count or self.points))

    def bound(self, pinned: float) -> float:
        return pinned if self.tol is None else self.tol


def residual_check(name: str, fn: Callable[[], float], tol: float, origin: str, **kw) -> CheckResult:
    try:
        r = float(fn())
    except Exception as exc:  # reported, never raised
        return CheckResult(name, False, origin, tolerance=tol, detail=_error_text(exc), **kw)
    return CheckResult(name, bool(np.isfinite(r) and r <= tol), origin, residual=r, tolerance=tol, **kw)


def equality_check(name: str, fn: Callable[[], Any], expected: Any, origin: str, **kw) -> CheckResult:
    try:
        got = fn()
    except Exception as exc:
        return CheckResult(name, False, origin, expected=expected, detail=_error_text(exc), **kw)
    return CheckResult(name, got == expected, origin, expected=expected, observed=got, **kw)


def _error_text(exc: BaseException) -> str:
    last = traceback.extract_tb(exc.__traceback__)[-1] if exc.__traceback__ else None
    where = f" ({last.name})" if last else ""
    return f"{type(exc).__name__}: {exc}{where}"


# -- measurements ----------------------------------------------------------------


def table_error(spec: ExampleSpec, params: Mapping[str, float]) -> float:
    """Largest coefficient difference to the stored base-point table."""
    return float(np.max(np.abs(spec.table_coefficients(params) - spec.table.tensor(params))))


def reduced_table_error(spec: ExampleSpec, params: Mapping[str, float]) -> float:
    b = spec.bundle
    x = spec.reduced_point
    low = lower_first(B.reduce_tensor(b, spec.structure(params), x), b.base.metric_jet(x, 0).v)
    return float(np.max(np.abs(to_table_coordinates(b.base, low, x) - spec.reduced_table.tensor(params))))


def reduced_error(spec: ExampleSpec, params: Mapping[str, float], xs: Iterable) -> float:
    """Largest frame-norm gap between the reduced tensor and the expected one."""
    b = spec.bundle
    kind, ref = spec.expected["reduced"].resolve(spec.params(params))
    red = B.reduced_structure(b, spec.structure(params))
    ref = zero_structure(b.base.dim) if kind == "zero" else ref
    worst = 0.0
    for x in xs:
        e = orthonormal_frame(b.base.metric_jet(x, 0).v)
        worst = max(worst, frame_norm(red.lowered(b.base, x) - ref.lowered(b.base, x), e))
    return worst


def fibre_invariance(spec: ExampleSpec, s: HomogeneousStructure, pts: Iterable) -> float:
    """Sup of ``|motion^* S - S|`` with the motion differentiated as a jet."""
    b = spec.bundle
    chart = b.total
    worst = 0.0
    for p in pts:
        m = jet_lift(b.fibre_motion, p, 1)
        d = m.grad  # [i, a] = d_i motion^a
        moved = np.einsum("abc,ia,jb,kc->ijk", s.lowered(chart, m.v), d, d, d)
        e = orthonormal_frame(chart.metric_jet(p, 0).v)
        worst = max(worst, frame_norm(moved - s.lowered(chart, p), e))
    return worst


def mean_curvature_sup(b: B.PrincipalBundleChart, pts: Iterable) -> float:
    return max(B.fibre_geometry(b, p).mean_curvature_norm for p in pts)


def mean_curvature_gap(b: B.PrincipalBundleChart, pts: Iterable, target: float) -> float:
    return max(abs(B.fibre_geometry(b, p).mean_curvature_norm - target) for p in pts)


def second_fundamental_sup(b: B.PrincipalBundleChart, pts: Iterable) -> float:
    worst = 0.0
    for p in pts:
        fg = B.fibre_geometry(b, p)
        chol = np.linalg.cholesky(b.total.metric_jet(p, 0).v).T
        worst = max(worst, float(np.linalg.norm(np.einsum("ija,ba->ijb", fg.second_fundamental, chol))))
    return worst


def reduced_metric_chart(b: B.PrincipalBundleChart) -> Chart:
    """Base chart carrying the reduced metric computed through the bundle."""
    base = b.base
    return Chart(f"reduced {base.name}", base.dim, B.reduced_metric_field(b).fn, base.domain, base.sampler)


def reduced_curvature_gap(b: B.PrincipalBundleChart, xs: Iterable, target: float) -> float:
    chart = reduced_metric_chart(b)
    worst = 0.0
    for x in xs:
        lg = LocalGeometry(chart, x, 2)
        e = lg.frame
        for i in range(chart.dim):
            for j in range(i + 1, chart.dim):
                worst = max(worst, abs(lg.sectional(e[:, i], e[:, j]) - target))
    return worst


def strict_classes(chart: Chart, s: HomogeneousStructure, pts: Iterable, wanted: tuple[int, ...]) -> float:
    """Zero when the absent components vanish (rel. 1e-7) and present ones exceed 1e-3.

    The return value is the worst violation ratio, so ``<= 1`` means strict.
    """
    worst = 0.0
    for p in pts:
        comp = tv_project(s.lowered(chart, p), chart.metric_jet(p, 0).v)
        for k, v in enumerate(comp.norms, start=1):
            ratio = 1e-3 / max(v, 1e-300) if k in wanted else v / (1e-7 * comp.total_norm)
            worst = max(worst, ratio)
    return worst


def lift_round_trip(b: B.PrincipalBundleChart, acms: C.AlmostContactMetric, base: HomogeneousStructure, xs) -> float:
    lift = C.sasakian_lift(b, base, acms)
    worst = 0.0
    for x in xs:
        e = orthonormal_frame(b.base.metric_jet(x, 0).v)
        red = lower_first(B.reduce_tensor(b, lift, x), b.base.metric_jet(x, 0).v)
        worst = max(worst, frame_norm(red - base.lowered(b.base, x), e))
    return worst


# -- per-example checks ------------------------------------------------------------


def check_example(spec: ExampleSpec, params: Mapping[str, float], config: RunConfig) -> list[CheckResult]:
    """All checks that apply to one example."""
    q = spec.params(params)
    tol = config.bound(DEFAULT_TOL)
    out: list[CheckResult] = []
    try:
        s = spec.structure(q)
    except Exception as exc:
        return [CheckResult("build", False, "trivial", detail=_error_text(exc))]
    pts = config.samples(spec.chart, 0)
    exp = spec.expected

    if spec.homogeneous:
        out.append(residual_check("as_residuals", lambda: as_residuals(spec.chart, s, pts).worst, tol, "derived"))
    if spec.table is not None:
        out.append(residual_check("base_point_table", lambda: table_error(spec, q), tol, spec.table.origin))
    if "class" in exp:
        out.append(equality_check("class", lambda: classify(spec.chart, s, pts[:3]).label, exp["class"].resolve(q), exp["class"].origin))
    b = spec.bundle
    if b is not None:
        xs = config.samples(b.base, 1)
        if b.fibre_motion is not None:
            out.append(residual_check("fibre_invariance", lambda: fibre_invariance(spec, s, pts), tol, "derived"))
        out.append(residual_check("metric_descent", lambda: B.reduced_metric_residual(b, xs), tol, "derived"))
        out.append(residual_check("c12_identity", lambda: B.c12_reduction_check(b, s, xs), tol, "derived"))
        out.append(residual_check("curvature_form", lambda: B.curvature_form_check(b, s, xs), tol, "derived"))
        if "reduced" in exp:
            out.append(residual_check("reduced_tensor", lambda: reduced_error(spec, q, xs), tol, exp["reduced"].origin))
        if spec.reduced_table is not None:
            out.append(residual_check("reduced_table", lambda: reduced_table_error(spec, q), tol, spec.reduced_table.origin))
        if "reduced_class" in exp:
            red = B.reduced_structure(b, s)
            e = exp["reduced_class"]
            out.append(equality_check("reduced_class", lambda: classify(b.base, red, xs[:3]).label, e.resolve(q), e.origin))
        if spec.alpha is not None:
            out.append(residual_check("nabla_omega", lambda: B.check_nabla_omega(b, s, spec.alpha, pts).worst, tol, "published"))
        if "mean_curvature_norm" in exp:
            e = exp["mean_curvature_norm"]
            target = e.resolve(q)
            out.append(residual_check("mean_curvature", lambda: mean_curvature_gap(b, pts, target), tol, e.origin))
    if spec.acms is not None:
        out.append(residual_check("acms_identities", lambda: _acms_worst(spec, pts), tol, "derived"))
        out.append(residual_check("sasakian", lambda: _sasakian_worst(spec.chart, spec.acms, pts), tol, "published"))
        if b is not None:
            xs = config.samples(b.base, 1)
            out.append(residual_check("reduced_complex", lambda: max(C.complex_structure_residuals(b, spec.acms, xs).values()), tol, "published"))
    if spec.algebra is not None and "equivariant_dim" in exp:
        e = exp["equivariant_dim"]
        out.append(equality_check("equivariant_dim", lambda: equivariant_dimension(spec.algebra), e.resolve(q), e.origin))
    return out


def _acms_worst(spec: ExampleSpec, pts) -> float:
    res = C.validate_acms(spec.chart, spec.acms, pts)
    return max(v for k, v in res.items() if k != "metric_compat_plus")


def equivariant_dimension(builder) -> int:
    ex = builder().example
    return len(enumerate_equivariant(ex.algebra, ex.split))


# -- acceptance matrix ---------------------------------------------------------------


def _tag(results: list[CheckResult], criterion: int) -> list[CheckResult]:
    return [CheckResult(**{**r.__dict__, "criterion": criterion}) for r in results]


def criterion_1(cfg: RunConfig) -> list[CheckResult]:
    out = []
    for n in (3, 4):
        spec = get_example("rhn-solvable", {"n": n})
        s = spec.structure()
        pts = cfg.samples(spec.chart, n)
        xs = cfg.samples(spec.bundle.base, 10 + n)
        out.append(residual_check(f"RH{n} AS residual", lambda: as_residuals(spec.chart, s, pts).worst, cfg.bound(1e-8), "derived"))
        out.append(equality_check(f"RH{n} class", lambda: classify(spec.chart, s, pts[:3]).label, "S1", "published"))
        out.append(residual_check(f"RH{n} reduces to solvable RH{n - 1}", lambda: reduced_error(spec, {}, xs), cfg.bound(1e-9), "published"))
    return out


RH4_PARAMS = ((0.0, 0.0), (1.0, 0.0), (0.0, 1.0), (2.0, 3.0))


def criterion_2(cfg: RunConfig) -> list[CheckResult]:
    spec = get_example("rh4-family")
    out = []
    for l0, l1 in RH4_PARAMS:
        q = {"lambda0": l0, "lambda1": l1}
        s = spec.structure(q)
        tag = f"({l0:g},{l1:g})"
        pts = cfg.samples(spec.chart, 20)
        xs = cfg.samples(spec.bundle.base, 21)
        out.append(residual_check(f"RH4{tag} AS residual", lambda: as_residuals(spec.chart, s, pts).worst, cfg.bound(1e-8), "derived"))
        out.append(residual_check(f"RH4{tag} nabla omega, alpha = dy0/y0", lambda: B.check_nabla_omega(spec.bundle, s, spec.alpha, pts).worst, cfg.bound(1e-8), "published"))
        out.append(residual_check(f"RH4{tag} reduced tensor", lambda: reduced_error(spec, q, xs), cfg.bound(1e-9), "published"))
        want = spec.expected["class"].resolve(spec.params(q))
        out.append(equality_check(f"RH4{tag} class", lambda: classify(spec.chart, s, pts[:3]).label, want, "published"))
        red = B.reduced_structure(spec.bundle, s)
        want_red = spec.expected["reduced_class"].resolve(spec.params(q))
        out.append(equality_check(f"RH4{tag} reduced class", lambda: classify(spec.bundle.base, red, xs[:3]).label, want_red, "published"))
    return out


def criterion_3(cfg: RunConfig) -> list[CheckResult]:
    spec = get_example("hopf-s3-u2")
    b = spec.bundle
    out = []
    for lam in (0.0, 1.0, -2.0):
        q = {"lambda": lam}
        xs = cfg.samples(b.base, 30)
        out.append(residual_check(f"S3 lambda={lam:g} base-point table", lambda: table_error(spec, q), cfg.bound(1e-10), "published"))
        out.append(residual_check(f"S3 lambda={lam:g} reduces to zero", lambda: reduced_error(spec, q, xs), cfg.bound(1e-9), "published"))
    xs = cfg.samples(b.base, 31, count=min(cfg.points, 5))
    out.append(residual_check("S2 reduced metric curvature 4", lambda: reduced_curvature_gap(b, xs, 4.0), cfg.bound(1e-7), "derived"))
    return out


def criterion_4(cfg: RunConfig) -> list[CheckResult]:
    spec = get_example("hopf-s7-u4")
    s = spec.structure()
    pts = cfg.samples(spec.chart, 40)
    xs = cfg.samples(spec.bundle.base, 41)
    return [
        residual_check("S7 u(4) base-point table", lambda: table_error(spec, {}), cfg.bound(1e-10), "published"),
        equality_check("S7 u(4) class", lambda: classify(spec.chart, s, pts[:3]).label, "S2⊕S3", "published"),
        residual_check("S7 u(4) reduces to zero", lambda: reduced_error(spec, {}, xs), cfg.bound(1e-9), "published"),
    ]


def criterion_5(cfg: RunConfig) -> list[CheckResult]:
    spec = get_example("hopf-s7-sp2u1")
    b = spec.bundle
    out = []
    for lam in (0.0, 1.0):
        q = {"lambda": lam}
        s = spec.structure(q)
        pts = cfg.samples(spec.chart, 50, count=min(cfg.points, 5))
        xs = cfg.samples(b.base, 51, count=min(cfg.points, 5))
        red = B.reduced_structure(b, s)
        out.append(residual_check(f"S7 sp(2)u(1) lambda={lam:g} base-point table", lambda: table_error(spec, q), cfg.bound(1e-10), "published"))
        out.append(residual_check(f"S7 sp(2)u(1) lambda={lam:g} reduced CP3 table", lambda: reduced_table_error(spec, q), cfg.bound(1e-8), "published"))
        out.append(residual_check(f"S7 sp(2)u(1) lambda={lam:g} strict S2+S3", lambda: strict_classes(spec.chart, s, pts, (2, 3)), 1.0, "published"))
        out.append(residual_check(f"CP3 reduced lambda={lam:g} strict S2+S3", lambda: strict_classes(b.base, red, xs, (2, 3)), 1.0, "published"))
    return out


HOPF_EXAMPLES = ("hopf-s3-u2", "hopf-s7-u4", "hopf-s7-sp2u1")


def criterion_6(cfg: RunConfig) -> list[CheckResult]:
    out = []
    for name in HOPF_EXAMPLES:
        b = get_example(name).bundle
        pts = cfg.samples(b.total, 60)
        out.append(residual_check(f"{name} second fundamental form", lambda: second_fundamental_sup(b, pts), cfg.bound(1e-9), "published"))
        out.append(residual_check(f"{name} mean curvature", lambda: mean_curvature_sup(b, pts), cfg.bound(1e-9), "published"))
    rh = get_example("rh4-family").bundle
    pts = cfg.samples(rh.total, 61)
    out.append(residual_check("RH4->RH3 |H| = 1", lambda: mean_curvature_gap(rh, pts, 1.0), cfg.bound(1e-7), "derived"))
    for name in list_examples():
        spec = get_example(name)
        if spec.bundle is None:
            continue
        s = spec.structure({"lambda0": 2.0, "lambda1": 3.0} if name == "rh4-family" else {})
        xs = cfg.samples(spec.bundle.base, 62, count=min(cfg.points, 5))
        out.append(residual_check(f"{name} c12 identity", lambda: B.c12_reduction_check(spec.bundle, s, xs), cfg.bound(1e-8), "published"))
    return out


def criterion_7(cfg: RunConfig) -> list[CheckResult]:
    from .catalog.algebras import rh4_family, u2_family, u4_family

    return [
        equality_check("u(2) equivariant maps", lambda: equivariant_dimension(u2_family), 1, "published"),
        equality_check("so(1,4) case equivariant maps", lambda: equivariant_dimension(rh4_family), 2, "published"),
        equality_check("u(4) equivariant maps", lambda: equivariant_dimension(u4_family), 0, "published"),
    ]


def criterion_8(cfg: RunConfig) -> list[CheckResult]:
    out = []
    for name, sas in (("hopf-s3-u2", "sasakian-s3"), ("hopf-s7-u4", "sasakian-s7")):
        spec = get_example(name)
        pts = cfg.samples(spec.chart, 80)
        xs = cfg.samples(spec.bundle.base, 81, count=min(cfg.points, 5))
        out.append(residual_check(f"{spec.chart.name} acms identities", lambda: _acms_worst(spec, pts), cfg.bound(1e-8), "published"))
        out.append(residual_check(f"{spec.chart.name} Sasakian identities", lambda: _sasakian_worst(spec.chart, spec.acms, pts), cfg.bound(1e-8), "published"))
        out.append(residual_check(f"{spec.bundle.base.name} reduced J", lambda: max(C.complex_structure_residuals(spec.bundle, spec.acms, xs).values()), cfg.bound(1e-8), "published"))
        sspec = get_example(sas)
        s = sspec.structure()
        out.append(residual_check(f"{spec.bundle.base.name} nabla~ J", lambda: C.kahler_homogeneity_check(sspec.bundle, sspec.acms, s, xs, 1e-8).nabla_J, cfg.bound(1e-8), "published"))
    hopf = get_example("hopf-s3-u2")
    xs = cfg.samples(hopf.bundle.base, 82, count=min(cfg.points, 5))
    out.append(residual_check("S3 reduce(lift(0)) = 0", lambda: lift_round_trip(hopf.bundle, hopf.acms, zero_structure(2), xs), cfg.bound(1e-8), "derived"))
    ch = get_example("ch1-sasakian")
    base = ch.expected["reduced"].resolve({})[1]
    xs = cfg.samples(ch.bundle.base, 83, count=min(cfg.points, 5))
    pts = cfg.samples(ch.chart, 84)
    out.append(residual_check("CH(1) Sasakian identities", lambda: _sasakian_worst(ch.chart, ch.acms, pts), cfg.bound(1e-8), "derived"))
    out.append(residual_check("CH(1) reduce(lift(S)) = S", lambda: lift_round_trip(ch.bundle, ch.acms, base, xs), cfg.bound(1e-8), "derived"))
    return out


def _sasakian_worst(chart, acms, pts) -> float:
    res = C.sasakian_check(chart, acms, pts)
    return max(res.contact, res.nabla_phi)


def random_skew_tensors(count: int, seed: int) -> list[np.ndarray]:
    """``count`` random tensors skew in the last two slots, sizes cycling through 3..8."""
    rng = np.random.default_rng(seed)
    out = []
    for k in range(count):
        n = 3 + k % 6
        t = rng.normal(size=(n, n, n))
        out.append(t - t.transpose(0, 2, 1))
    return out


def tv_projection_defect(t: np.ndarray, g: np.ndarray | None = None) -> float:
    """Worst of reconstruction, idempotence and orthogonality defects."""
    n = t.shape[0]
    g = np.eye(n) if g is None else g
    comp = tv_project(t, g)
    parts = (comp.p1, comp.p2, comp.p3)
    e = orthonormal_frame(g)
    defects = [frame_norm(sum(parts) - t, e)]
    for k, p in enumerate(parts):
        again = tv_project(p, g)
        proj = (again.p1, again.p2, again.p3)
        defects.append(frame_norm(proj[k] - p, e))
        defects += [frame_norm(proj[j], e) for j in range(3) if j != k]
    return max(defects) / max(1.0, comp.total_norm)


def levi_civita_defect(chart: Chart, p) -> float:
    """Torsion and metric-compatibility defect of the computed Christoffel symbols."""
    lg = LocalGeometry(chart, p, 1)
    gamma = lg.gamma
    dg = lg.metric_jet.grad  # [k, i, j]
    torsion = np.max(np.abs(gamma - gamma.transpose(0, 2, 1)))
    compat = dg - np.einsum("lki,lj->kij", gamma, lg.g) - np.einsum("lkj,il->kij", gamma, lg.g)
    return float(max(torsion, np.max(np.abs(compat))))


def jet_fd_defect(chart: Chart, p, h: float = 1e-5) -> float:
    """Relative gap between the metric jet gradient and central differences."""
    jet = chart.metric_jet(p, 1)
    worst = 0.0
    for i in range(chart.dim):
        step = np.zeros(chart.dim)
        step[i] = h
        fd = (chart.metric_jet(p + step, 0).v - chart.metric_jet(p - step, 0).v) / (2 * h)
        scale = max(1.0, float(np.max(np.abs(jet.grad[i]))))
        worst = max(worst, float(np.max(np.abs(fd - jet.grad[i]))) / scale)
    return worst


def catalog_charts() -> list[Chart]:
    seen: dict[str, Chart] = {}
    for name in list_examples():
        spec = get_example(name)
        seen.setdefault(spec.chart.name, spec.chart)
        if spec.bundle is not None:
            seen.setdefault(spec.bundle.base.name, spec.bundle.base)
    return [seen[k] for k in sorted(seen)]


def criterion_9(cfg: RunConfig) -> list[CheckResult]:
    tensors = random_skew_tensors(100, cfg.seed)
    out = [residual_check("TV projections on 100 random tensors", lambda: max(tv_projection_defect(t) for t in tensors), cfg.bound(1e-10), "trivial")]
    for chart in catalog_charts():
        pts = cfg.samples(chart, 90, count=min(cfg.points, 5))
        out.append(residual_check(f"{chart.name} Levi-Civita", lambda: max(levi_civita_defect(chart, p) for p in pts), cfg.bound(1e-10), "trivial"))
        out.append(residual_check(f"{chart.name} jet vs finite differences", lambda: max(jet_fd_defect(chart, p) for p in pts), 1e-5, "trivial"))
    return out


CRITERIA: dict[int, Callable[[RunConfig], list[CheckResult]]] = {
    1: criterion_1,
    2: criterion_2,
    3: criterion_3,
    4: criterion_4,
    5: criterion_5,
    6: criterion_6,
    7: criterion_7,
    8: criterion_8,
    9: criterion_9,
}


def run_criterion(k: int, cfg: RunConfig) -> list[CheckResult]:
    try:
        results = CRITERIA[k](cfg)
    except Exception as exc:
        results = [CheckResult(f"criterion {k} setup", False, "trivial", detail=_error_text(exc))]
    return _tag(results, k)


def acceptance_suite(cfg: RunConfig, criteria: Iterable[int] = tuple(CRITERIA)) -> list[CheckResult]:
    """The full acceptance matrix, in criterion order."""
    out: list[CheckResult] = []
    for k in criteria:
        out += run_criterion(k, cfg)
    return out
