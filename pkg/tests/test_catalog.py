"""Example registry, published tables and per-example invariants."""

import numpy as np
import pytest

from homred.catalog import UnknownExampleError, get_example, list_examples
from homred.catalog.tables import S3_SASAKIAN, S3_U2, S7_SASAKIAN, S7_U4
from homred.homstruct import as_residuals, wedge_table
from homred.numkit import SampleSpec
from homred.suite import fibre_invariance, table_error

HOMOGENEOUS = [n for n in list_examples() if get_example(n).homogeneous]


def _pts(chart, count=4, seed=11):
    return chart.sample(SampleSpec(seed=seed, count=count))


def test_listing_is_sorted_and_complete():
    names = list_examples()
    assert names == sorted(names)
    for required in ("rh4-family", "rhn-solvable", "hopf-s3-u2", "hopf-s7-u4", "hopf-s7-sp2u1", "sasakian-s3"):
        assert required in names


def test_unknown_example():
    with pytest.raises(UnknownExampleError, match="no-such"):
        get_example("no-such")
    with pytest.raises(KeyError):
        get_example("no-such")


def test_parameter_validation():
    spec = get_example("rh4-family")
    assert spec.params({"lambda0": 2}) == {"lambda0": 2.0, "lambda1": 0.0}
    with pytest.raises(ValueError, match="allowed: lambda0, lambda1"):
        spec.params({"mu": 1.0})
    with pytest.raises(ValueError, match="none"):
        get_example("hopf-s7-u4").params({"lambda": 1.0})


def test_structural_dimension():
    assert get_example("rhn-solvable", {"n": 5}).chart.dim == 5


def test_origins_are_labelled():
    allowed = {"published", "derived", "trivial"}
    for name in list_examples():
        spec = get_example(name)
        for exp in spec.expected.values():
            assert exp.origin in allowed
        if spec.table is not None:
            assert spec.table.origin in allowed


def test_rh4_table_coefficient():
    spec = get_example("rh4-family")
    c = spec.table_coefficients({"lambda0": 1.0, "lambda1": 0.0})
    assert c[0, 2, 3] == pytest.approx(-1.0, abs=1e-12)
    assert c[0, 3, 2] == pytest.approx(1.0, abs=1e-12)
    assert c[1, 1, 0] == pytest.approx(1.0, abs=1e-12)


@pytest.mark.parametrize("lam", [0.0, 1.0, -0.7])
def test_s3_tables_match(lam):
    u2 = get_example("hopf-s3-u2").table_coefficients({"lambda": lam})
    np.testing.assert_allclose(u2, S3_U2.tensor({"lambda": lam}), atol=1e-12)
    sas = get_example("sasakian-s3").table_coefficients({"lambda": lam})
    np.testing.assert_allclose(sas, S3_SASAKIAN.tensor({"lambda": lam}), atol=1e-12)


def test_s3_u2_entries_at_one():
    t = S3_U2.tensor({"lambda": 1.0})
    assert t[1, 2, 3] == 0.0
    assert t[2, 1, 3] == 1.0
    assert t[3, 1, 2] == -1.0


def test_s7_tables_match():
    np.testing.assert_allclose(get_example("hopf-s7-u4").table_coefficients(), S7_U4.tensor(), atol=1e-12)
    np.testing.assert_allclose(get_example("sasakian-s7").table_coefficients(), S7_SASAKIAN.tensor(), atol=1e-12)


def test_wedge_table_is_skew_in_last_pair():
    t = wedge_table(3, [(2.0, 0, 1, 2)], one_based=False)
    assert t[0, 1, 2] == 2.0 and t[0, 2, 1] == -2.0
    assert np.count_nonzero(t) == 2


@pytest.mark.parametrize("name", HOMOGENEOUS)
def test_homogeneous_examples(name):
    spec = get_example(name)
    q = {k: 0.6 for k in spec.defaults if k != "n"}
    s = spec.structure(q)
    pts = _pts(spec.chart)
    assert as_residuals(spec.chart, s, pts).worst <= 1e-8
    if spec.bundle is not None and spec.bundle.fibre_motion is not None:
        assert fibre_invariance(spec, s, pts) <= 1e-9


@pytest.mark.parametrize("name", ["rh4-family", "hopf-s3-u2", "hopf-s7-u4", "sasakian-s3", "sasakian-s7"])
def test_published_tables_reproduced(name):
    spec = get_example(name)
    assert table_error(spec, spec.params({k: 0.4 for k in spec.defaults})) <= 1e-10
