"""Structure tensors: Ambrose-Singer residuals and the three basic classes."""

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from homred.catalog.examples import solvable_structure
from homred.homstruct import (
    LABELS,
    HomogeneousStructure,
    NotClassifiableError,
    StructuralError,
    as_residuals,
    c12_trace,
    classify,
    classify_tensor,
    is_subclass,
    lower_first,
    raise_first,
    s1_tensor,
    tv_project,
    wedge_table,
    wedge_terms,
    zero_structure,
)
from homred.manifold import TensorField, euclidean, half_space, sphere
from homred.numkit import Jet, SampleSpec
from homred.suite import random_skew_tensors, tv_projection_defect


def _skew(t):
    return t - t.transpose(0, 2, 1)


@settings(max_examples=60, deadline=None)
@given(st.integers(3, 8).flatmap(lambda n: arrays(np.float64, (n, n, n), elements=st.floats(-3, 3))))
def test_tv_projection_properties(t):
    assert tv_projection_defect(_skew(t)) <= 1e-10


def test_tv_projection_on_100_random_tensors():
    tensors = random_skew_tensors(100, seed=0)
    assert {t.shape[0] for t in tensors} == set(range(3, 9))
    assert max(tv_projection_defect(t) for t in tensors) <= 1e-10


def test_components_satisfy_class_identities():
    """Each component meets its defining identities, checked without the projector."""
    rng = np.random.default_rng(4)
    n = 5
    a = rng.normal(size=(n, n))
    g = a @ a.T + n * np.eye(n)
    comp = tv_project(_skew(rng.normal(size=(n, n, n))), g)
    # S3: totally skew
    np.testing.assert_allclose(comp.p3, -comp.p3.transpose(1, 0, 2), atol=1e-12)
    # S2: cyclic sum and trace vanish
    cyc = comp.p2 + comp.p2.transpose(1, 2, 0) + comp.p2.transpose(2, 0, 1)
    np.testing.assert_allclose(cyc, 0.0, atol=1e-12)
    np.testing.assert_allclose(c12_trace(comp.p2, g), 0.0, atol=1e-12)
    # S1: determined by a one-form
    np.testing.assert_allclose(comp.p1, s1_tensor(g, comp.theta), atol=1e-12)


@pytest.mark.parametrize(
    "tensor, label",
    [
        (np.zeros((3, 3, 3)), "zero"),
        (s1_tensor(np.eye(3), np.array([1.0, 0.0, 0.0])), "S1"),
        (wedge_table(3, [(1, 1, 2, 3), (1, 2, 3, 1), (1, 3, 1, 2)]), "S3"),
    ],
)
def test_classify_tensor_labels(tensor, label):
    assert classify_tensor(tensor, np.eye(3)).label == label


def test_s2_example():
    # T = e1 (x) e2^e3 - e2 (x) e3^e1: cyclic sum and trace both vanish
    t = wedge_table(3, [(1, 1, 2, 3), (-1, 2, 3, 1)])
    assert classify_tensor(t, np.eye(3)).label == "S2"


def test_wedge_table_round_trip():
    terms = [(2.0, 1, 2, 3), (-1.5, 3, 1, 2)]
    t = wedge_table(3, terms)
    assert t[0, 2, 1] == -2.0
    assert sorted(wedge_terms(t)) == sorted([(2.0, 1, 2, 3), (-1.5, 3, 1, 2)])


def test_raise_lower_inverse():
    rng = np.random.default_rng(0)
    g = np.diag([1.0, 2.0, 3.0])
    t = rng.normal(size=(3, 3, 3))
    np.testing.assert_allclose(lower_first(raise_first(t, g), g), t)


def test_non_skew_tensor_rejected():
    with pytest.raises(StructuralError):
        tv_project(np.ones((3, 3, 3)), np.eye(3))


def test_subclass_lattice():
    assert is_subclass("S1", "generic")
    assert is_subclass("zero", "S2")
    assert not is_subclass("S2⊕S3", "S1⊕S3")
    assert len(LABELS) == 8


@pytest.mark.parametrize("n", [3, 4, 5])
def test_solvable_half_space_structure_is_homogeneous(n):
    chart = half_space(n)
    s = solvable_structure(n)
    pts = chart.sample(SampleSpec(seed=1, count=4))
    assert as_residuals(chart, s, pts).worst <= 1e-8
    assert classify(chart, s, pts).label == "S1"


def test_zero_structure_on_symmetric_space():
    chart = sphere(3)
    pts = chart.sample(SampleSpec(seed=1, count=3))
    assert as_residuals(chart, zero_structure(3), pts).worst <= 1e-10


def test_perturbed_structure_fails_as_equations():
    chart = half_space(3)

    def fn(y):
        return solvable_structure(3).field.fn(y) * (1.0 + 0.1 * y[1])

    pts = chart.sample(SampleSpec(seed=1, count=3))
    assert as_residuals(chart, HomogeneousStructure(TensorField(fn, "ddd")), pts).worst > 1e-3


def test_udd_and_ddd_forms_agree():
    chart = half_space(3)
    low = solvable_structure(3)
    p = np.array([1.3, 0.2, -0.4])
    s_up = raise_first(low.lowered(chart, p), chart.metric_jet(p, 0).v)
    udd = HomogeneousStructure(TensorField(lambda y: Jet.constant(s_up, nvars=3) + 0.0 * y[0], "udd"))
    np.testing.assert_allclose(udd.lowered(chart, p), low.lowered(chart, p), atol=1e-14)


def test_classify_rejects_changing_class():
    chart = euclidean(3)

    def fn(x):
        return Jet.constant(s1_tensor(np.eye(3), np.array([1.0, 0.0, 0.0])), nvars=3) * x[0]

    with pytest.raises(NotClassifiableError):
        classify(chart, HomogeneousStructure(TensorField(fn, "ddd")), [np.array([1.0, 0, 0]), np.array([0.0, 0, 0])])


def test_bad_kinds_rejected():
    with pytest.raises(ValueError):
        HomogeneousStructure(TensorField(lambda x: x, "ud"))
