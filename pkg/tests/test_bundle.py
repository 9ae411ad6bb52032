"""Principal bundles: mechanical connection, descent and reduction."""

import numpy as np
import pytest

from homred.bundle import (
    AlphaForm,
    DegenerateFrameError,
    MetricDescentError,
    PrincipalBundleChart,
    TensorDescentError,
    c12_reduction_check,
    check_nabla_omega,
    curvature_form_check,
    fibre_geometry,
    horizontal_lift,
    horizontal_lift_identity_check,
    mech_connection_at,
    reduce_tensor,
    reduced_levi_civita_check,
    reduced_metric_at,
    reduced_metric_residual,
    reduced_structure,
)
from homred.catalog import get_example
from homred.catalog.examples import jet_motion, rh_bundle, solvable_structure
from homred.homstruct import HomogeneousStructure, zero_structure
from homred.manifold import Chart, TensorField, euclidean, half_space
from homred.numkit import Jet, SampleSpec, stack

RH4 = rh_bundle(4)


def _pts(chart, count=4, seed=3):
    return chart.sample(SampleSpec(seed=seed, count=count))


def test_mechanical_connection_properties():
    p = np.array([1.4, 0.3, -0.2, 0.5])
    mc = mech_connection_at(RH4, p)
    np.testing.assert_allclose(mc.omega @ mc.vertical.T, np.eye(1), atol=1e-14)
    np.testing.assert_allclose(mc.hor_proj @ mc.hor_proj, mc.hor_proj, atol=1e-14)
    g = RH4.total.metric_jet(p, 0).v
    # horizontal space is the metric complement of the fibre
    np.testing.assert_allclose(mc.vertical @ g @ mc.hor_proj, 0.0, atol=1e-14)


def test_horizontal_lift_projects_back():
    p = np.array([1.4, 0.3, -0.2, 0.5])
    x = RH4.project(p)
    v = np.array([0.3, -1.0, 2.0])
    lifted = horizontal_lift(RH4, v, p, x)
    dpi = np.delete(np.eye(4), 1, axis=0)
    np.testing.assert_allclose(dpi @ lifted, v)
    with pytest.raises(ValueError, match="not over"):
        horizontal_lift(RH4, v, p, x + 1.0)


def test_validate_reports_clean_bundle():
    out = RH4.validate(_pts(RH4.total))
    assert out["proj_of_vertical"] == 0.0
    assert out["min_singular_value"] == pytest.approx(1.0)
    assert out["outside_base"] == 0


def test_reduced_metric_is_base_metric():
    xs = _pts(RH4.base)
    assert reduced_metric_residual(RH4, xs) <= 1e-12
    assert reduced_levi_civita_check(RH4, xs) <= 1e-10


def test_solvable_reduces_to_solvable():
    xs = _pts(RH4.base)
    red = reduced_structure(RH4, solvable_structure(4))
    for x in xs:
        np.testing.assert_allclose(red.lowered(RH4.base, x), solvable_structure(3).lowered(RH4.base, x), atol=1e-12)


def test_nabla_omega_needs_the_right_alpha():
    s = solvable_structure(4)
    pts = _pts(RH4.total)
    alpha = AlphaForm(lambda y: stack([1.0 / y[0]] + [0.0 * y[0]] * 3).reshape(4, 1, 1))
    assert check_nabla_omega(RH4, s, alpha, pts).worst <= 1e-12
    zero = AlphaForm(lambda y: Jet.constant(np.zeros((4, 1, 1)), nvars=4))
    assert check_nabla_omega(RH4, s, zero, pts).worst > 0.1
    fit = check_nabla_omega(RH4, s, "solve", pts)
    assert fit.horizontal_residual <= 1e-12
    for p, a in zip(pts, fit.alpha):
        np.testing.assert_allclose(a[:, 0, 0], [1.0 / p[0], 0, 0, 0], atol=1e-12)
    with pytest.raises(ValueError):
        check_nabla_omega(RH4, s, "guess", pts)


def test_half_space_fibres_have_unit_mean_curvature():
    for p in _pts(RH4.total):
        assert fibre_geometry(RH4, p).mean_curvature_norm == pytest.approx(1.0, abs=1e-12)


def test_identities_hold_on_rh4_family():
    spec = get_example("rh4-family")
    s = spec.structure({"lambda0": 2.0, "lambda1": 3.0})
    xs = _pts(RH4.base)
    assert c12_reduction_check(RH4, s, xs) <= 1e-10
    assert curvature_form_check(RH4, s, xs) <= 1e-10
    assert horizontal_lift_identity_check(RH4, s, xs) <= 1e-10


def _tilted_bundle(metric_fn):
    """R^3 -> R^2 forgetting the last coordinate, with a custom total metric."""
    total = Chart("tilted", 3, metric_fn, lambda p: True, euclidean(3).sampler, base_point=np.zeros(3))
    proj = lambda y: stack([y[0], y[1]])  # noqa: E731
    vertical = lambda y: Jet.constant(np.array([[0.0, 0.0, 1.0]]), nvars=y.nvars)  # noqa: E731
    section = lambda x: stack([x[0], x[1], 0.0 * x[0]])  # noqa: E731
    motion = jet_motion(lambda y: y + np.array([0.0, 0.0, 0.5]))
    return PrincipalBundleChart("tilted", total, euclidean(2), proj, vertical, 1, section, motion)


def test_metric_descent_failure_is_reported():
    def metric(y):
        return np.eye(3) * (1.0 + 0.0 * y[0]) + np.diag([1.0, 0.0, 0.0]) * (y[2] * y[2])

    with pytest.raises(MetricDescentError):
        reduced_metric_at(_tilted_bundle(metric), np.array([0.1, 0.2]))


def test_tensor_descent_failure_is_reported():
    b = _tilted_bundle(lambda y: Jet.constant(np.eye(3), nvars=y.nvars))

    def fn(y):
        return Jet.constant(zero_structure(3).lowered(euclidean(3), np.zeros(3)) + _e123(), nvars=3) * y[2]

    with pytest.raises(TensorDescentError):
        reduce_tensor(b, HomogeneousStructure(TensorField(fn, "ddd")), np.array([0.1, 0.2]))


def _e123():
    t = np.zeros((3, 3, 3))
    t[0, 0, 1], t[0, 1, 0] = 1.0, -1.0
    return t


def test_degenerate_vertical_frame():
    b = PrincipalBundleChart(
        "flat",
        euclidean(3),
        euclidean(2),
        lambda y: stack([y[0], y[1]]),
        lambda y: Jet.constant(np.zeros((1, 3)), nvars=y.nvars),
        1,
        lambda x: stack([x[0], x[1], 0.0 * x[0]]),
    )
    with pytest.raises(DegenerateFrameError):
        mech_connection_at(b, np.zeros(3))


def test_hopf_fibres_are_totally_geodesic():
    b = get_example("hopf-s3-u2").bundle
    for p in _pts(b.total):
        fg = fibre_geometry(b, p)
        assert np.max(np.abs(fg.second_fundamental)) <= 1e-12
        assert fg.fibre_metric_form[0, 0] == pytest.approx(1.0)


def test_half_space_base_point():
    assert np.array_equal(half_space(3).base_point, [1.0, 0.0, 0.0])
