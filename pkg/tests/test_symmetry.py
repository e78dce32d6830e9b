import cmath
import math

import numpy as np
import pytest

from conftest import PARAMS
from twistlap import symmetry as Y
from twistlap.errors import DimensionMismatch, NotUnitary
from twistlap.function_space import Envelope, ExpPoly, Polynomial
from twistlap.integrate import inner_product
from twistlap.operators import eigencheck, laplacian
from twistlap.spectra import HermiteIndex, hermite_rodrigues


def test_motion_validation():
    with pytest.raises(NotUnitary):
        Y.Motion([[2.0]], [0])
    with pytest.raises(DimensionMismatch):
        Y.Motion(np.eye(2), [0])
    g = Y.Motion.from_json({"A": [["0+1j"]], "b": [[1, -2]]})
    assert g.A[0, 0] == 1j and g.b[0] == 1 - 2j
    assert Y.Motion.from_json(g.to_json()).b[0] == g.b[0]


def test_motion_group_operations(rng):
    g = Y.random_motion(2, rng)
    h = Y.random_motion(2, rng)
    z = rng.normal(size=2) + 1j * rng.normal(size=2)
    assert np.allclose(Y.act(Y.Motion.translation([1, 1j]), z), z + np.array([1, 1j]))
    assert np.allclose(Y.act(Y.motion_inverse(g), Y.act(g, z)), z)
    assert np.allclose(Y.act(Y.motion_inverse(g), [0, 0]), -g.A.conj().T @ g.b)
    assert np.allclose(Y.act(Y.motion_compose(g, h), z), Y.act(g, Y.act(h, z)))
    u = Y.random_unitary(3, rng)
    assert np.allclose(u @ u.conj().T, np.eye(3))


def test_phase_examples():
    g = Y.Motion.translation([1])
    assert Y.phase(g, [1j], 0, 1) == pytest.approx(-1)
    assert Y.phase(Y.Motion.identity(2), [1, 1j], 0.5, 1) == 0


@pytest.mark.parametrize("nu,mu", PARAMS)
def test_phase_polynomial_matches_phase(nu, mu, rng):
    g = Y.random_motion(2, rng)
    z = rng.normal(size=2) + 1j * rng.normal(size=2)
    p = Y.phase_polynomial(g, nu, mu)
    assert p.is_real_valued()
    assert p.at(z) == pytest.approx(Y.phase(g, z, nu, mu))
    assert abs(Y.autfactor(g, z, nu, mu)) == pytest.approx(1)
    assert Y.autfactor(Y.Motion.identity(2), z, nu, mu) == 1


@pytest.mark.parametrize("nu,mu", PARAMS)
def test_chain_rule_up_to_constant_phase(nu, mu):
    for g, h, z in Y.seeded_triples(2, 20, 5):
        assert Y.projective_chain_rule_holds(g, h, z, nu, mu)
        defect = Y.chain_rule_defect(g, h, z, nu, mu)
        assert defect == pytest.approx(Y.autfactor(g, h.b, nu, mu).conjugate(), abs=1e-12)


def test_chain_rule_holds_when_correction_vanishes():
    # rotations fix the origin, so j(g, h.0) = 1 when h is a rotation about 0
    g = Y.Motion.translation([0.7 - 0.2j])
    h = Y.Motion.rotation([[cmath.exp(0.4j)]])
    assert Y.chain_rule_holds(g, h, [0.3 + 0.1j], 1.0, 1.0)


def test_chain_rule_fails_for_generic_translations():
    g = Y.Motion.translation([1.0])
    h = Y.Motion.translation([1j])
    assert not Y.chain_rule_holds(g, h, [0.2], 0.0, 1.0)


@pytest.mark.parametrize("nu,mu", PARAMS)
def test_t_apply_pointwise(nu, mu, rng):
    g = Y.random_motion(2, rng)
    f = ExpPoly(Polynomial(2, {(1, 0, 0, 2): 1.0, (0, 0, 0, 0): 0.5j}),
                Envelope(-(mu + 1j * nu) / 2, [0.1, 0], [0, 0.2j]))
    z = rng.normal(size=2) + 1j * rng.normal(size=2)
    got = Y.t_apply(g, f, nu, mu)(z)
    assert got == pytest.approx(Y.autfactor(g, z, nu, mu) * f(Y.act(g, z)), rel=1e-11)
    assert Y.t_apply(Y.Motion.identity(2), f, nu, mu).isclose(f)


@pytest.mark.parametrize("nu,mu", PARAMS)
def test_t_apply_composition_multiplier(nu, mu, rng):
    g, h = Y.random_motion(1, rng), Y.random_motion(1, rng)
    f = ExpPoly(Polynomial.z(1, 0) + 1.0, Envelope.gaussian(1, -mu / 2))
    lhs = Y.t_apply(g, Y.t_apply(h, f, nu, mu), nu, mu)
    rhs = Y.t_apply(Y.motion_compose(h, g), f, nu, mu)
    c = Y.action_multiplier(g, h, nu, mu)
    z = [0.4 - 0.9j]
    assert lhs(z) == pytest.approx(c * rhs(z), rel=1e-11)


@pytest.mark.parametrize("nu,mu", PARAMS)
def test_t_apply_is_isometric(nu, mu, rng):
    f = hermite_rodrigues(HermiteIndex((1, 0), (0, 1)), nu, mu)
    q = ExpPoly(Polynomial.z(2, 0) + 1.0, Envelope.gaussian(2, -mu / 2))
    for _ in range(3):
        g = Y.random_motion(2, rng)
        before = inner_product(f, q).value
        after = inner_product(Y.t_apply(g, f, nu, mu), Y.t_apply(g, q, nu, mu)).value
        assert abs(after - before) <= 1e-10 * max(1, abs(before))


@pytest.mark.parametrize("nu,mu", PARAMS)
def test_intertwining(nu, mu, rng):
    assert Y.intertwine_check(Y.Motion.translation([0.8 - 0.3j]), nu, mu, 1)
    assert Y.intertwine_check(Y.Motion.rotation(np.diag([cmath.exp(0.7j), cmath.exp(-2j)])), nu, mu, 2, 3)
    assert Y.intertwine_check(Y.random_motion(2, rng), nu, mu, 2, 2)


@pytest.mark.parametrize("nu,mu", PARAMS)
def test_plain_pullback_does_not_intertwine(nu, mu):
    g = Y.Motion.translation([1.0])
    assert not Y.intertwine_check(g, nu, mu, 1, 1, with_factor=False)
    # pure rotations need no correction
    assert Y.intertwine_check(Y.Motion.rotation([[1j]]), nu, mu, 1, 2, with_factor=False)


@pytest.mark.parametrize("nu,mu", PARAMS)
def test_eigenspaces_are_invariant(nu, mu, rng):
    h = hermite_rodrigues(HermiteIndex((2,), (1,)), nu, mu)
    lam = eigencheck(laplacian(nu, mu, 1), Y.t_apply(Y.random_motion(1, rng), h, nu, mu))
    assert lam == pytest.approx(-2 * mu * 5, rel=1e-10)


@pytest.mark.parametrize("nu,mu", PARAMS)
def test_pullback_of_potential(nu, mu, rng):
    assert Y.pullback(Y.theta(nu, mu, 2), Y.Motion.identity(2)).isclose(Y.theta(nu, mu, 2))
    assert Y.pullback_theta_check(Y.Motion.translation([0.3 + 1.1j]), nu, mu)
    rot = Y.Motion.rotation(Y.random_unitary(2, rng))
    assert Y.pullback(Y.theta(nu, mu, 2), rot).isclose(Y.theta(nu, mu, 2))
    for _ in range(3):
        assert Y.pullback_theta_check(Y.random_motion(2, rng), nu, mu)


def test_magnetic_translations_commute_up_to_flux():
    mu = 1.3
    a, b = 0.7, 0.4j
    g, h = Y.Motion.translation([a]), Y.Motion.translation([b])
    c = Y.translation_commutation_scalar(g, h, 0.0, mu)
    assert abs(c) == pytest.approx(1)
    # the phase is twice the symplectic area μ Im(a conj(b))
    assert cmath.phase(c) == pytest.approx(-2 * mu * (a * np.conj(b)).imag)
    assert Y.translation_commutation_scalar(g, Y.Motion.translation([2 * a]), 0.0, mu) == pytest.approx(1)


def test_seeded_triples_reproducible():
    a = list(Y.seeded_triples(1, 3, 11))
    b = list(Y.seeded_triples(1, 3, 11))
    assert all(np.allclose(x[2], y[2]) and np.allclose(x[0].b, y[0].b) for x, y in zip(a, b))
    assert math.isfinite(float(a[0][2][0].real))
