"""Lie algebras, reductive splits and equivariant maps."""

import numpy as np
import pytest

from homred.catalog.algebras import ALGEBRA_FAMILIES, rh4_family, sp2u1_family, u2_family, u4_family
from homred.catalog.tables import RH4_FAMILY, S3_U2, S7_U4
from homred.liered import (
    EquivarianceError,
    EquivariantMap,
    JacobiError,
    LieAlgebraSC,
    ReductiveSplit,
    check_reductive,
    enumerate_equivariant,
    equivariance_residual,
    pphi_tensor,
    tensor_from_split,
    to_tangent,
)


def so3():
    def e(i, j):
        m = np.zeros((3, 3))
        m[i, j], m[j, i] = -1.0, 1.0
        return m

    return LieAlgebraSC.from_matrices([e(1, 2), e(2, 0), e(0, 1)])


def test_so3_structure_constants():
    alg = so3()
    # [L1, L2] = L3
    np.testing.assert_allclose(alg.bracket(np.eye(3)[0], np.eye(3)[1]), np.eye(3)[2])
    assert alg.jacobi_residual() == 0.0


def test_from_matrices_rejects_dependent_or_open_sets():
    a = np.array([[0.0, 1.0], [0.0, 0.0]])
    with pytest.raises(ValueError, match="dependent"):
        LieAlgebraSC.from_matrices([a, 2 * a])
    with pytest.raises(ValueError, match="span"):
        LieAlgebraSC.from_matrices([a, a.T])


def test_text_round_trip(tmp_path):
    alg = so3()
    path = tmp_path / "so3.txt"
    path.write_text("# so(3)\n" + alg.to_text())
    back = LieAlgebraSC.from_file(path)
    np.testing.assert_array_equal(back.c, alg.c)


def test_file_errors(tmp_path):
    bad = tmp_path / "bad.txt"
    bad.write_text("3\n0 1 2 1.0\n1 0 2 1.0\n")
    with pytest.raises(JacobiError):
        LieAlgebraSC.from_file(bad)
    bad.write_text("0 1 2 1.0\n")
    with pytest.raises(ValueError):
        LieAlgebraSC.from_file(bad)


def test_symmetric_split_gives_zero_tensor():
    alg = so3()
    split = ReductiveSplit.from_indices(3, [0, 1], [2], np.eye(2))
    assert check_reductive(alg, split) == pytest.approx(0.0)
    np.testing.assert_allclose(tensor_from_split(alg, split), 0.0, atol=1e-14)


def test_split_validation():
    with pytest.raises(ValueError):
        ReductiveSplit(np.eye(3)[:2], np.eye(3)[:1], np.eye(2))
    with pytest.raises(ValueError):
        ReductiveSplit(np.eye(3)[:2], np.eye(3)[2:], np.eye(3))


@pytest.mark.parametrize("builder, dim", [(u2_family, 1), (rh4_family, 2), (sp2u1_family, 1)])
def test_equivariant_dimensions(builder, dim):
    ex = builder().example
    maps = enumerate_equivariant(ex.algebra, ex.split)
    assert len(maps) == dim
    for m in maps:
        assert equivariance_residual(ex.algebra, ex.split, m) <= 1e-10


def test_u4_equivariant_dimension_is_one():
    """The u(4) split admits the map sending the centre direction to the centre."""
    ex = u4_family().example
    assert len(enumerate_equivariant(ex.algebra, ex.split)) == 1


def test_non_equivariant_map_rejected():
    ex = u2_family().example
    bad = EquivariantMap(np.array([[1.0, 0.0, 0.0]]))
    assert equivariance_residual(ex.algebra, ex.split, bad) > 1e-3
    with pytest.raises(EquivarianceError):
        pphi_tensor(ex.algebra, ex.split, bad)


@pytest.mark.parametrize("key", sorted(ALGEBRA_FAMILIES))
def test_graph_split_equals_correction(key):
    """The tensor of the graph split equals the base tensor plus the correction."""
    fam = ALGEBRA_FAMILIES[key]()
    ex = fam.example
    for phi in enumerate_equivariant(ex.algebra, ex.split):
        direct = tensor_from_split(ex.algebra, ex.split.graph(phi.matrix))
        corrected = tensor_from_split(ex.algebra, ex.split) + pphi_tensor(ex.algebra, ex.split, phi)
        np.testing.assert_allclose(direct, corrected, atol=1e-12)


@pytest.mark.parametrize(
    "builder, table, params",
    [
        (u2_family, S3_U2, {"lambda": 0.7}),
        (u4_family, S7_U4, {}),
    ],
)
def test_algebra_tensor_matches_published_sphere_tables(builder, table, params):
    np.testing.assert_allclose(builder().tensor(params), table.tensor(params), atol=1e-12)


def test_rh4_algebra_tensor_matches_published_table():
    fam = rh4_family()
    q = {"lambda0": 1.5, "lambda1": -0.5}
    np.testing.assert_allclose(fam.tensor(q), RH4_FAMILY.tensor(q), atol=1e-12)


def test_to_tangent_with_square_action():
    s = np.random.default_rng(0).normal(size=(2, 2, 2))
    mu = np.array([[2.0, 0.0], [0.0, 1.0]])
    out = to_tangent(s, mu)
    assert out[0, 0, 0] == pytest.approx(s[0, 0, 0] / 8.0)
