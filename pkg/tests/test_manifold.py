"""Charts, Levi-Civita connection and curvature."""

import itertools

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from homred.manifold import (
    ChartDomainError,
    LocalGeometry,
    TangencyError,
    TensorField,
    connection_action,
    covariant_derivative,
    embed_pullback,
    euclidean,
    half_space,
    metric_field,
    projective_space,
    pullback_metric,
    sphere,
)
from homred.numkit import SampleSpec, jet_lift
from homred.suite import catalog_charts, jet_fd_defect, levi_civita_defect

CHARTS = [euclidean(3), half_space(3), half_space(2, 0.5), sphere(2), sphere(3), projective_space(1), projective_space(2)]


def _fd_christoffel(chart, p, h=1e-5):
    """Christoffel symbols from central differences of plain metric values."""
    n = chart.dim
    dg = np.zeros((n, n, n))
    for k in range(n):
        e = np.zeros(n)
        e[k] = h
        dg[k] = (chart.metric_jet(p + e, 0).v - chart.metric_jet(p - e, 0).v) / (2 * h)
    ginv = np.linalg.inv(chart.metric_jet(p, 0).v)
    low = 0.5 * (dg + dg.transpose(1, 0, 2) - dg.transpose(1, 2, 0))  # [i, j, l]: d_i g_jl + d_j g_il - d_l g_ij
    return np.einsum("kl,ijl->kij", ginv, low)


@pytest.mark.parametrize("chart", CHARTS, ids=lambda c: c.name)
def test_christoffel_matches_finite_difference_oracle(chart):
    p = chart.sample(SampleSpec(seed=1, count=1))[0]
    np.testing.assert_allclose(LocalGeometry(chart, p).gamma, _fd_christoffel(chart, p), atol=1e-8)


@pytest.mark.parametrize(
    "chart, curvature",
    [(sphere(2), 1.0), (sphere(3), 1.0), (half_space(3), -1.0), (half_space(2, 0.5), -4.0), (euclidean(2), 0.0), (projective_space(1), 4.0)],
    ids=lambda v: getattr(v, "name", str(v)),
)
def test_constant_sectional_curvature(chart, curvature):
    for p in chart.sample(SampleSpec(seed=2, count=3)):
        geo = LocalGeometry(chart, p)
        e = geo.frame
        for i, j in itertools.combinations(range(chart.dim), 2):
            assert geo.sectional(e[:, i], e[:, j]) == pytest.approx(curvature, abs=1e-9)


def test_projective_space_holomorphic_curvature_four():
    chart = projective_space(2)
    p = np.array([0.2, -0.1, 0.3, 0.05])
    geo = LocalGeometry(chart, p)
    x = np.array([1.0, 0.3, -0.2, 0.5])
    # J in the affine chart is the constant complex structure
    jx = np.array([-x[1], x[0], -x[3], x[2]])
    assert geo.sectional(x, jx) == pytest.approx(4.0, abs=1e-9)
    e = geo.frame
    vals = [geo.sectional(e[:, i], e[:, j]) for i, j in itertools.combinations(range(4), 2)]
    assert min(vals) >= 1.0 - 1e-9 and max(vals) <= 4.0 + 1e-9


def test_riemann_symmetries():
    geo = LocalGeometry(projective_space(2), np.array([0.1, 0.2, -0.3, 0.4]))
    r = geo.riemann
    np.testing.assert_allclose(r, -r.transpose(1, 0, 2, 3), atol=1e-12)
    np.testing.assert_allclose(r, -r.transpose(0, 1, 3, 2), atol=1e-12)
    np.testing.assert_allclose(r, r.transpose(2, 3, 0, 1), atol=1e-12)
    bianchi = r + r.transpose(1, 2, 0, 3) + r.transpose(2, 0, 1, 3)
    np.testing.assert_allclose(bianchi, 0.0, atol=1e-12)


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 10_000), st.sampled_from(range(len(CHARTS))))
def test_levi_civita_torsion_free_and_metric_compatible(seed, k):
    chart = CHARTS[k]
    p = chart.sample(SampleSpec(seed=seed, count=1))[0]
    assert levi_civita_defect(chart, p) <= 1e-10


@pytest.mark.parametrize("chart", catalog_charts(), ids=lambda c: c.name)
def test_catalog_charts_levi_civita_and_jets(chart):
    for p in chart.sample(SampleSpec(seed=5, count=3)):
        assert levi_civita_defect(chart, p) <= 1e-10
        assert jet_fd_defect(chart, p) <= 1e-5


def test_metric_is_parallel():
    chart = sphere(3)
    nab = covariant_derivative(chart, metric_field(chart), np.array([0.1, 0.4, -0.2]))
    np.testing.assert_allclose(nab, 0.0, atol=1e-12)


def test_connection_action_rejects_unknown_kind():
    with pytest.raises(ValueError, match="unknown slot kind"):
        connection_action(np.zeros((2, 2, 2)), np.zeros(2), "q")


def test_chart_domain_errors():
    with pytest.raises(ChartDomainError):
        half_space(3).metric_jet(np.array([-1.0, 0.0, 0.0]))
    with pytest.raises(ChartDomainError):
        sphere(2).metric_jet(np.zeros(3))


def test_sphere_embedding_pullback():
    chart = sphere(2)
    p = np.array([0.3, -0.5])
    np.testing.assert_allclose(pullback_metric(chart, p), chart.metric_jet(p, 0).v, atol=1e-14)
    x = jet_lift(chart.embedding, p, 0).v
    normal = embed_pullback(chart, p, np.eye(3), "dd")
    np.testing.assert_allclose(normal, chart.metric_jet(p, 0).v, atol=1e-14)
    with pytest.raises(TangencyError):
        embed_pullback(chart, p, x, "u")


def test_vector_field_divergence_free_rotation():
    chart = euclidean(2)
    rot = TensorField(lambda x: np.array([[0.0, -1.0], [1.0, 0.0]]) @ x, "u")
    nab = covariant_derivative(chart, rot, np.array([0.5, 0.2]))
    assert np.trace(nab) == pytest.approx(0.0)
