import math

import numpy as np
import pytest

from conftest import S2, e, random_cases, span
from ritzmaj.exceptions import DimensionError, NotAcuteError
from ritzmaj.harness.generators import gen_subspace, gen_unitary, trial_rng
from ritzmaj.numeric import svd_decreasing
from ritzmaj.subspaces import (
    AngleVector,
    Subspace,
    join,
    load_subspace,
    principal_angles,
    project_onto,
    projector_product_singvals,
)
from ritzmaj.numeric import write_matrix


def test_angle_examples():
    np.testing.assert_allclose(principal_angles(e(2, 0), e(2, 1)).theta, [math.pi / 2])
    X = e(4, 0, 2)
    np.testing.assert_allclose(principal_angles(X, X).theta, [0, 0], atol=1e-15)
    th = principal_angles(e(2, 0), span([S2, S2]))
    np.testing.assert_allclose(th.theta, [math.pi / 4], rtol=1e-15)


def test_angles_ambient_mismatch():
    with pytest.raises(DimensionError):
        principal_angles(e(2, 0), e(3, 0))


def test_small_angles_are_accurate():
    # arccos would lose about half the digits here
    t = 1e-9
    th = principal_angles(e(2, 0), span([math.cos(t), math.sin(t)]))
    assert th.theta[0] == pytest.approx(t, rel=1e-6)


def test_angle_properties():
    for A, X, Y in random_cases(40):
        th = principal_angles(X, Y)
        np.testing.assert_allclose(th.theta, principal_angles(Y, X).theta, atol=1e-12)
        np.testing.assert_allclose(th.cos() ** 2 + th.sin() ** 2, 1, atol=1e-12)
        assert np.all(np.diff(th.theta) <= 0)
        # sines are singular values of (I - P_Y) X
        sines = svd_decreasing(X.basis - project_onto(Y, X.basis))
        np.testing.assert_allclose(sines, th.sin(), atol=1e-10)


def test_unequal_dimensions():
    th = principal_angles(e(3, 0), e(3, 0, 1))
    np.testing.assert_allclose(th.theta, [0], atol=1e-15)
    assert len(th) == 1


def test_angle_vector_views():
    av = AngleVector(np.array([math.pi / 2, 0.0]))
    assert not av.is_acute()
    with pytest.raises(NotAcuteError, match="subspaces not acute"):
        av.tan()
    av = AngleVector(np.array([0.5, 0.1]))
    assert av.max == 0.5 and av.min == 0.1
    np.testing.assert_allclose(av.tan(), np.tan([0.5, 0.1]))


def test_join_examples():
    J = join(e(3, 0), e(3, 1))
    assert J.p == 2
    np.testing.assert_allclose(J.projector(), np.diag([1, 1, 0]), atol=1e-15)
    X = e(3, 0, 2)
    np.testing.assert_allclose(join(X, X).projector(), X.projector(), atol=1e-14)
    J = join(e(3, 0), span([S2, S2, 0]))
    assert J.p == 2
    np.testing.assert_allclose(J.projector(), np.diag([1, 1, 0]), atol=1e-14)


def test_project_onto_examples():
    np.testing.assert_allclose(project_onto(e(2, 0), [0, 1]), [0, 0])
    S = span([1, 1, 0], [0, 1, 1])
    np.testing.assert_allclose(project_onto(S, S.basis), S.basis, atol=1e-15)
    np.testing.assert_allclose(project_onto(e(2, 0), [1, 1]), [1, 0])
    with pytest.raises(DimensionError):
        project_onto(e(2, 0), np.ones(3))


def test_projector_product_examples():
    X = e(3, 1)
    np.testing.assert_allclose(projector_product_singvals(X, X), 0, atol=1e-15)
    np.testing.assert_allclose(projector_product_singvals(e(2, 0), e(2, 1)), 0, atol=1e-15)
    s = projector_product_singvals(e(2, 0), span([S2, S2]))
    # direct 2x2 product oracle
    P = np.diag([1.0, 0.0])
    Q = np.full((2, 2), 0.5)
    M = (np.eye(2) - P) @ Q @ P
    np.testing.assert_allclose(s, np.linalg.svd(M, compute_uv=False), atol=1e-15)
    assert s[0] == pytest.approx(0.5)


def test_projector_product_matches_angles():
    for t in range(30):
        r = trial_rng(99, t)
        n = int(r.integers(2, 9))
        k, l = int(r.integers(1, n + 1)), int(r.integers(1, n + 1))
        P, Q = gen_subspace(r, n, k, "complex"), gen_subspace(r, n, l, "complex")
        th = principal_angles(P, Q)
        s = projector_product_singvals(P, Q)
        sc = np.sort(np.sin(th.theta) * np.cos(th.theta))[::-1]
        big = s[s > 1e-10]
        np.testing.assert_allclose(big, sc[sc > 1e-10], atol=1e-10)


def test_subspace_validation():
    with pytest.raises(DimensionError):
        Subspace(np.array([[1.0, 1.0], [0.0, 1.0]]))
    with pytest.raises(DimensionError):
        Subspace(np.ones((2, 3)) / 2)
    S = e(3, 0)
    with pytest.raises(ValueError):
        S.basis[0, 0] = 2
    assert S.complement().p == 2
    with pytest.raises(DimensionError):
        e(2, 0, 1).complement()
    assert "n=3" in repr(S)


def test_unitary_invariance():
    r = trial_rng(5, 0)
    X, Y = gen_subspace(r, 6, 2, "complex"), gen_subspace(r, 6, 2, "complex")
    U = gen_unitary(r, 6, "complex")
    a = principal_angles(X, Y).theta
    b = principal_angles(Subspace(U @ X.basis), Subspace(U @ Y.basis)).theta
    np.testing.assert_allclose(a, b, atol=1e-12)


def test_load_subspace(tmp_path):
    path = tmp_path / "x.mat"
    write_matrix(path, np.array([[2.0], [0.0]]))
    with pytest.warns(UserWarning, match="orthonormalized"):
        S = load_subspace(path)
    np.testing.assert_allclose(np.abs(S.basis), [[1], [0]])
    write_matrix(path, np.array([[1.0], [0.0]]))
    assert load_subspace(path).p == 1
