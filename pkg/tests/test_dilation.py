import math

import numpy as np
import pytest

from ritzmaj.dilation import (
    coordinate_projector,
    dilation_angles,
    dilation_cosines,
    dilation_factor,
    dilation_projector,
    dilation_residual_singvals,
    dilation_subspace,
    eval_additive_bound,
    eval_weyl_additive,
    normalize_pair,
)
from ritzmaj.exceptions import DimensionError, NotAcuteError, SpectrumError
from ritzmaj.harness.generators import gen_unitary, trial_rng
from ritzmaj.rayleigh_ritz import ritz
from ritzmaj.subspaces import Subspace, projector_product_singvals


def random_unit_spectrum(t, n=None):
    r = trial_rng(77, t)
    n = n or int(r.integers(1, 7))
    U = gen_unitary(r, n, "complex" if t % 2 else "real")
    return (U * r.uniform(0, 1, n)) @ U.conj().T


def test_normalize_examples():
    p = normalize_pair(np.diag([0.0, 1.0]), np.diag([0.0, 1.0]))
    assert (p.shift, p.scale) == (0.0, 1.0)
    np.testing.assert_allclose(p.F, np.diag([0, 1]))
    p = normalize_pair(np.diag([2.0, 4.0]), np.diag([2.0, 6.0]))
    assert (p.shift, p.scale) == (2.0, 4.0)
    np.testing.assert_allclose(p.F, np.diag([0, 0.5]))
    np.testing.assert_allclose(p.G, np.diag([0, 1]))
    p = normalize_pair(3 * np.eye(2), 3 * np.eye(2))
    assert p.scale == 1.0
    np.testing.assert_allclose(p.F, 0)
    with pytest.raises(DimensionError):
        normalize_pair(np.eye(2), np.eye(3))


def test_projector_examples():
    np.testing.assert_allclose(dilation_projector(np.diag([1.0, 0.0])), np.diag([1, 0, 0, 1]))
    np.testing.assert_allclose(dilation_projector(np.array([[0.5]])), np.full((2, 2), 0.5))
    with pytest.raises(SpectrumError):
        dilation_projector(np.array([[1.5]]))
    # rounding just outside [0, 1] is clamped
    dilation_projector(np.array([[1.0 + 1e-14]]))


def test_factor_oracle():
    for t in range(20):
        F = random_unit_spectrum(t)
        B = dilation_factor(F)
        P = dilation_projector(F)
        np.testing.assert_allclose(P @ B, B, atol=1e-12)
        np.testing.assert_allclose(B @ B.conj().T, P, atol=1e-12)


def test_residual_examples():
    np.testing.assert_allclose(dilation_residual_singvals(np.diag([1.0, 0.0, 1.0])), 0, atol=1e-15)
    np.testing.assert_allclose(dilation_residual_singvals(np.array([[0.5]])), [0.5])
    np.testing.assert_allclose(dilation_residual_singvals(np.diag([0.9, 0.1])), [0.3, 0.3])


def test_angle_examples():
    F = random_unit_spectrum(3, 3)
    np.testing.assert_allclose(dilation_angles(F, F).theta, 0, atol=1e-7)
    np.testing.assert_allclose(dilation_cosines(F, F), 1, atol=1e-12)
    th = dilation_angles(np.array([[1.0]]), np.array([[0.0]]))
    np.testing.assert_allclose(th.theta, [math.pi / 2])
    th = dilation_angles(np.array([[1.0]]), np.array([[0.5]]))
    np.testing.assert_allclose(th.theta, [math.pi / 4])


def test_angles_match_cosine_formula():
    for t in range(20):
        F, G = random_unit_spectrum(t, 4), random_unit_spectrum(t + 100, 4)
        th = dilation_angles(F, G)
        np.testing.assert_allclose(np.sort(th.cos()), np.sort(dilation_cosines(F, G)), atol=1e-10)


def test_additive_examples():
    F = np.diag([0.3, 0.8])
    rep = eval_additive_bound(F, F)
    np.testing.assert_allclose(rep.lhs, 0)
    np.testing.assert_allclose(rep.rhs, 0, atol=1e-7)
    P = np.diag([1.0, 0.0])
    rep = eval_additive_bound(P, P.copy())
    np.testing.assert_allclose(rep.lhs, 0)
    assert rep.conjectural
    with pytest.raises(NotAcuteError, match="tangent infinite"):
        eval_additive_bound(np.array([[1.0]]), np.array([[0.0]]))


def test_additive_rhs_sqrt_eps():
    a = 0.6
    u, v = np.array([1.0, 0.0]), np.array([math.cos(a), math.sin(a)])
    E = np.array([[0.3, 0.5], [0.5, -0.2]])
    E /= np.linalg.norm(E, 2)
    eps = np.geomspace(1e-8, 1e-4, 5)
    rhs = [eval_additive_bound(np.outer(u, u) + x * E, np.outer(v, v) - x * E).rhs[0] for x in eps]
    assert np.polyfit(np.log(eps), np.log(rhs), 1)[0] == pytest.approx(0.5, abs=0.05)


def test_weyl_additive_examples():
    rep = eval_weyl_additive(np.diag([1.0, 0.0]), np.diag([0.9, 0.0]))
    np.testing.assert_allclose(rep.lhs, [0.1, 0])
    np.testing.assert_allclose(rep.rhs, [0.1, 0])
    assert rep.holds
    rep = eval_weyl_additive(np.eye(2), np.eye(2))
    np.testing.assert_allclose(rep.rhs, 0)
    a = 0.5
    u, v = np.array([1.0, 0.0]), np.array([math.cos(a), math.sin(a)])
    rep = eval_weyl_additive(np.outer(u, u), np.outer(v, v))
    assert rep.rhs[0] == pytest.approx(math.sin(a))
    with pytest.raises(DimensionError):
        eval_weyl_additive(np.eye(2), np.eye(3))


def test_dilation_identities_small():
    for t in range(30):
        F = random_unit_spectrum(t)
        n = F.shape[0]
        P = dilation_projector(F)
        np.testing.assert_allclose(P @ P, P, atol=1e-10)
        assert np.linalg.matrix_rank(P, tol=1e-8) == n
        Z = Subspace(np.eye(2 * n, n, dtype=complex))
        geo = projector_product_singvals(dilation_subspace(F), Z)
        closed = dilation_residual_singvals(F)
        np.testing.assert_allclose(np.sort(geo)[::-1][:n], closed, atol=1e-10)
        lam = ritz(coordinate_projector(n), dilation_subspace(F)).ritz_values
        np.testing.assert_allclose(lam, np.sort(np.linalg.eigvalsh(F))[::-1], atol=1e-10)
