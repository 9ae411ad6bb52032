"""Jets, small linear algebra and sampling."""

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from homred.numkit import (
    Jet,
    JetDomainError,
    NotPositiveDefiniteError,
    RankDeficiencyError,
    SampleSpec,
    Tolerance,
    cos,
    einsum,
    exp,
    frame_norm,
    gram_schmidt,
    inv,
    jacobian_at,
    jet_lift,
    log,
    nullspace,
    orthonormal_frame,
    sin,
    solve_spd,
    sqrt,
    stack,
)


def _fd_grad(f, p, h=1e-5):
    p = np.asarray(p, float)
    cols = []
    for i in range(p.size):
        e = np.zeros_like(p)
        e[i] = h
        cols.append((f(p + e) - f(p - e)) / (2 * h))
    return np.array(cols)


def _plain(f):
    return lambda p: jet_lift(f, p, 0).v


def sample_fn(x):
    return stack([sin(x[0]) * exp(x[1]), x[0] * x[0] / (1.0 + x[1] * x[1]), sqrt(2.0 + cos(x[0] * x[1])), log(3.0 + x[0])])


def test_variables_are_identity():
    x = Jet.variables(np.array([1.0, 2.0, 3.0]), 2)
    np.testing.assert_array_equal(x.v, [1.0, 2.0, 3.0])
    np.testing.assert_array_equal(x.grad, np.eye(3))
    assert np.all(x.hess == 0)


def test_product_rule_and_hessian():
    j = jet_lift(lambda x: x[0] * x[0] * x[1], np.array([2.0, 3.0]), 3)
    assert j.v == pytest.approx(12.0)
    np.testing.assert_allclose(j.grad, [12.0, 4.0])
    np.testing.assert_allclose(j.hess, [[6.0, 4.0], [4.0, 0.0]])
    assert j.third[0, 0, 1] == pytest.approx(2.0)


def test_gradient_matches_finite_differences():
    p = np.array([0.3, -0.4])
    j = jet_lift(sample_fn, p, 1)
    np.testing.assert_allclose(j.grad, _fd_grad(_plain(sample_fn), p), rtol=1e-7, atol=1e-9)


def test_hessian_matches_finite_differences_of_gradient():
    p = np.array([0.3, -0.4])
    j = jet_lift(sample_fn, p, 2)
    np.testing.assert_allclose(j.hess, _fd_grad(lambda q: jet_lift(sample_fn, q, 1).grad, p), rtol=1e-6, atol=1e-8)


def test_third_derivative_matches_finite_differences_of_hessian():
    p = np.array([0.2, 0.5])
    j = jet_lift(sample_fn, p, 3)
    np.testing.assert_allclose(j.third, _fd_grad(lambda q: jet_lift(sample_fn, q, 2).hess, p), rtol=1e-5, atol=1e-7)


@settings(max_examples=40, deadline=None)
@given(st.lists(st.floats(-1.0, 1.0), min_size=2, max_size=2))
def test_jet_vs_finite_difference_property(pt):
    p = np.array(pt)
    j = jet_lift(sample_fn, p, 1)
    fd = _fd_grad(_plain(sample_fn), p)
    assert np.max(np.abs(j.grad - fd)) <= 1e-5 * max(1.0, np.max(np.abs(fd)))


def test_matrix_inverse_jet():
    def mat(x):
        return stack([stack([2.0 + x[0], x[1]]), stack([x[1], 3.0 + x[0] * x[1]])])

    p = np.array([0.1, 0.2])
    j = jet_lift(lambda x: inv(mat(x)), p, 2)
    np.testing.assert_allclose(j.v, np.linalg.inv(jet_lift(mat, p, 0).v))
    fd = _fd_grad(lambda q: np.linalg.inv(jet_lift(mat, q, 0).v), p)
    np.testing.assert_allclose(j.grad, fd, rtol=1e-7, atol=1e-9)


def test_composition_chain_rule():
    inner = jet_lift(lambda x: stack([x[0] * x[1], x[0] + x[1]]), np.array([0.5, 0.7]), 2)
    outer = jet_lift(sample_fn, inner.v, 2)
    comp = outer.compose(inner)
    direct = jet_lift(lambda x: sample_fn(stack([x[0] * x[1], x[0] + x[1]])), np.array([0.5, 0.7]), 2)
    np.testing.assert_allclose(comp.grad, direct.grad, atol=1e-12)
    np.testing.assert_allclose(comp.hess, direct.hess, atol=1e-12)


def test_jacobian_at_leads_with_derivative_axis():
    inner = Jet.variables(np.array([0.2, 0.3]), 1)
    jac = jacobian_at(sample_fn, inner)
    assert jac.shape == (2, 4)
    np.testing.assert_allclose(jac.v, jet_lift(sample_fn, inner.v, 1).grad)


def test_einsum_matches_numpy():
    a = Jet.variables(np.array([1.0, 2.0]), 1)
    m = np.array([[1.0, 2.0], [3.0, 4.0]])
    out = einsum("ab,b->a", m, a)
    np.testing.assert_allclose(out.v, m @ a.v)
    np.testing.assert_allclose(out.grad, m.T)


@pytest.mark.parametrize("fn", [lambda x: sqrt(x[0] - 5.0), lambda x: log(x[0] - 5.0), lambda x: 1.0 / (x[0] - 1.0)])
def test_domain_errors_name_the_point(fn):
    with pytest.raises(JetDomainError, match="point"):
        jet_lift(fn, np.array([1.0]), 1)


def test_orthonormal_frame_and_frame_norm():
    g = np.array([[4.0, 1.0], [1.0, 3.0]])
    e = orthonormal_frame(g)
    np.testing.assert_allclose(e.T @ g @ e, np.eye(2), atol=1e-14)
    t = np.random.default_rng(0).normal(size=(2, 2))
    assert frame_norm(t, e) == pytest.approx(np.linalg.norm(np.einsum("ij,ia,jb->ab", t, e, e)))


def test_spd_errors():
    with pytest.raises(NotPositiveDefiniteError):
        orthonormal_frame(np.array([[1.0, 0.0], [0.0, -1.0]]))
    with pytest.raises(NotPositiveDefiniteError):
        solve_spd(np.array([[1.0, 2.0], [0.0, 1.0]]), np.ones(2))
    np.testing.assert_allclose(solve_spd(np.diag([2.0, 4.0]), np.array([2.0, 2.0])), [1.0, 0.5])


def test_gram_schmidt_and_rank_deficiency():
    g = np.diag([1.0, 4.0])
    rows = gram_schmidt([[1.0, 1.0], [0.0, 1.0]], g)
    np.testing.assert_allclose(rows @ g @ rows.T, np.eye(2), atol=1e-14)
    with pytest.raises(RankDeficiencyError):
        gram_schmidt([[1.0, 1.0], [2.0, 2.0]])


def test_nullspace():
    m = np.array([[1.0, 1.0, 0.0], [0.0, 0.0, 1.0]])
    ns = nullspace(m)
    assert ns.shape[0] == 1
    np.testing.assert_allclose(m @ ns[0], 0.0, atol=1e-14)


def test_sampling_is_deterministic_per_index():
    spec = SampleSpec(seed=3, count=4)
    a = [spec.rng(i).normal() for i in range(4)]
    b = [spec.rng(i).normal() for i in reversed(range(4))][::-1]
    assert a == b
    with pytest.raises(ValueError):
        SampleSpec(count=0)
    with pytest.raises(ValueError):
        Tolerance(abs_tol=0.0)
    assert Tolerance(1e-9, 1e-7).allows(1e-8, scale=1.0)
