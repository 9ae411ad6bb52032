"""Almost contact metric structures, Sasakian checks and the Kahler reduction."""

import numpy as np
import pytest

from homred.catalog import get_example
from homred.catalog.examples import round_s2, solvable_structure
from homred.contact import (
    AlmostContactMetric,
    BundleMismatchError,
    NotSasakianError,
    PreconditionError,
    complex_structure_residuals,
    fundamental_two_form,
    kahler_homogeneity_check,
    reduce_complex,
    sasakian_check,
    sasakian_lift,
    tilde_nabla_phi,
    validate_acms,
)
from homred.homstruct import zero_structure
from homred.manifold import TensorField
from homred.numkit import SampleSpec, Jet
from homred.suite import lift_round_trip

S3 = get_example("sasakian-s3")
CH1 = get_example("ch1-sasakian")


def _pts(chart, count=4, seed=5):
    return chart.sample(SampleSpec(seed=seed, count=count))


@pytest.mark.parametrize("spec", [S3, get_example("sasakian-s7"), CH1], ids=lambda s: s.name)
def test_catalog_acms_satisfy_identities(spec):
    res = validate_acms(spec.chart, spec.acms, _pts(spec.chart))
    for key, val in res.items():
        if key != "metric_compat_plus":
            assert val <= 1e-10, key
    assert res["metric_compat_plus"] > 0.1
    assert max(sasakian_check(spec.chart, spec.acms, _pts(spec.chart)).pair) <= 1e-10


def test_two_form_orderings_differ_by_sign():
    p = _pts(S3.chart, 1)[0]
    a = fundamental_two_form(S3.chart, S3.acms, p, "g(X,phiY)")
    b = fundamental_two_form(S3.chart, S3.acms, p, "g(phiX,Y)")
    np.testing.assert_allclose(a, -b, atol=1e-12)
    np.testing.assert_allclose(a, -a.T, atol=1e-12)
    with pytest.raises(ValueError):
        fundamental_two_form(S3.chart, S3.acms, p, "phi(X,Y)")


def test_contact_condition_picks_one_ordering():
    res = sasakian_check(S3.chart, S3.acms, _pts(S3.chart))
    assert res.contact <= 1e-10
    assert res.contact_other_ordering > 0.1


def test_acms_kind_validation():
    phi = S3.acms.phi
    with pytest.raises(ValueError, match="kinds"):
        AlmostContactMetric(phi, S3.acms.eta, S3.acms.xi)


def test_family_parallelizes_phi():
    for lam in (0.0, 1.0, 2.5):
        s = S3.structure({"lambda": lam})
        for p in _pts(S3.chart, 3):
            assert tilde_nabla_phi(S3.chart, S3.acms, s, p) <= 1e-10


def test_reduced_complex_structure_on_cp1():
    b = S3.bundle
    xs = _pts(b.base)
    assert max(complex_structure_residuals(b, S3.acms, xs).values()) <= 1e-10
    j = reduce_complex(b, S3.acms, xs[0])
    np.testing.assert_allclose(j @ j, -np.eye(2), atol=1e-10)


def test_kahler_check_passes_on_family():
    s = S3.structure({"lambda": 1.3})
    res = kahler_homogeneity_check(S3.bundle, S3.acms, s, _pts(S3.bundle.base, 3))
    assert res.nabla_J <= 1e-9
    assert res.kahler_form_closed <= 1e-9


def test_kahler_check_precondition():
    bad = zero_structure(S3.chart.dim)
    with pytest.raises(PreconditionError):
        kahler_homogeneity_check(S3.bundle, S3.acms, bad, _pts(S3.bundle.base, 2))


def test_lift_of_zero_is_family_member():
    lift = sasakian_lift(S3.bundle, zero_structure(2), S3.acms)
    member = S3.structure({"lambda": 2.0})
    for p in _pts(S3.chart):
        np.testing.assert_allclose(lift.lowered(S3.chart, p), member.lowered(S3.chart, p), atol=1e-10)


def test_lift_round_trip_on_ch1():
    base = solvable_structure(2, 0.5)
    assert lift_round_trip(CH1.bundle, CH1.acms, base, _pts(CH1.bundle.base)) <= 1e-10


def test_lift_rejects_non_sasakian():
    phi = S3.acms.phi
    scaled = AlmostContactMetric(
        TensorField(lambda y: phi.fn(y) * 2.0, "ud"), S3.acms.xi, S3.acms.eta, "scaled"
    )
    with pytest.raises(NotSasakianError):
        sasakian_lift(S3.bundle, zero_structure(2), scaled, check_points=_pts(S3.chart, 2))


def test_bundle_mismatch_is_reported():
    eta = S3.acms.eta
    shifted = AlmostContactMetric(S3.acms.phi, S3.acms.xi, TensorField(lambda y: eta.fn(y) * 3.0, "d"), "shifted")
    with pytest.raises(BundleMismatchError):
        reduce_complex(S3.bundle, shifted, _pts(S3.bundle.base, 1)[0])


def test_round_sphere_example_is_flat_reference():
    spec = round_s2()
    assert spec.bundle is None
    assert isinstance(spec.structure().field.fn(Jet.variables(spec.chart.base_point, 1)), Jet)
