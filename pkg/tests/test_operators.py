import json

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from conftest import PARAMS
from twistlap.errors import IndexOutOfRange, InvalidParameter, ZeroFunction
from twistlap.function_space import Envelope, ExpPoly, Polynomial
from twistlap.operators import (DiffOp, MagneticPotential, annihilation, conjugate_by_gaussian,
                                creation, eigencheck, euler, euler_bar, laplacian,
                                laplacian_tilde, magnetic_schrodinger, wirtinger_laplacian)
from twistlap.polynomial import monomials_up_to


def random_op(rng, n, order=2, deg=2, terms=5):
    mults = list(monomials_up_to(2 * n, deg))
    derivs = list(monomials_up_to(2 * n, order))
    out = {}
    for _ in range(terms):
        m = mults[rng.integers(len(mults))]
        d = derivs[rng.integers(len(derivs))]
        out[(m, d)] = complex(*rng.normal(size=2))
    return DiffOp(n, out)


def random_fn(rng, n):
    keys = list(monomials_up_to(2 * n, 3))
    coefs = {keys[rng.integers(len(keys))]: complex(*rng.normal(size=2)) for _ in range(5)}
    return ExpPoly(Polynomial(n, coefs), Envelope(-0.8 + 0.3j, [0.2j] * n, [0.1] * n))


@pytest.mark.parametrize("seed", range(5))
def test_compose_agrees_with_successive_application(seed):
    rng = np.random.default_rng(seed)
    n = 1 + seed % 2
    a, b, f = random_op(rng, n), random_op(rng, n), random_fn(rng, n)
    assert (a @ b).apply(f).isclose(a.apply(b.apply(f)), rtol=1e-11)


@pytest.mark.parametrize("seed", range(5))
def test_jacobi_identity(seed):
    rng = np.random.default_rng(100 + seed)
    a, b, c = (random_op(rng, 1) for _ in range(3))
    total = (a.commutator(b.commutator(c)) + b.commutator(c.commutator(a))
             + c.commutator(a.commutator(b)))
    assert total.max_abs() <= 1e-10 * max(a.max_abs(), b.max_abs(), c.max_abs()) ** 3


def test_basic_commutators():
    n = 2
    z = DiffOp.multiplication(Polynomial.z(n, 0))
    assert DiffOp.d_z(n, 0).commutator(z).isclose(DiffOp.identity(n))
    assert DiffOp.d_zbar(n, 0).commutator(z).is_zero()
    assert DiffOp.d_z(n, 1).commutator(z).is_zero()


def test_euler_counts_degree():
    f = ExpPoly(Polynomial(1, {(3, 1): 1.0}))
    assert eigencheck(euler(1), f) == pytest.approx(3)
    assert eigencheck(euler_bar(1), f) == pytest.approx(1)


def test_wirtinger_laplacian_is_real_laplacian():
    # 4 d/dz d/dzbar (x² + y²) = 4
    f = ExpPoly(Polynomial.abs2(1))
    assert wirtinger_laplacian(1).apply(f).poly == Polynomial.one(1).scale(4)


@pytest.mark.parametrize("nu,mu", PARAMS)
@pytest.mark.parametrize("n", [1, 2, 3])
def test_ladder_relations(nu, mu, n):
    t = laplacian_tilde(nu, mu, n)
    for j in range(n):
        ap, am = creation(j, nu, mu, n), annihilation(j, nu, mu, n)
        assert t.commutator(ap).isclose(ap.scale(mu))
        assert t.commutator(am).isclose(am.scale(-mu))
        for k in range(n):
            expect = DiffOp.identity(n, mu if j == k else 0.0)
            assert annihilation(j, nu, mu, n).commutator(creation(k, nu, mu, n)).isclose(
                expect, atol=1e-12)
            assert creation(j, nu, mu, n).commutator(creation(k, nu, mu, n)).is_zero()


@pytest.mark.parametrize("nu,mu", PARAMS)
@pytest.mark.parametrize("n", [1, 2])
def test_both_factorisations(nu, mu, n):
    t = laplacian_tilde(nu, mu, n)
    pm = DiffOp(n)
    mp = DiffOp(n)
    for j in range(n):
        pm = pm + creation(j, nu, mu, n) @ annihilation(j, nu, mu, n)
        mp = mp + annihilation(j, nu, mu, n) @ creation(j, nu, mu, n)
    assert pm.isclose(t - DiffOp.identity(n, n * mu / 2))
    assert mp.isclose(t + DiffOp.identity(n, n * mu / 2))


@pytest.mark.parametrize("nu,mu", PARAMS)
def test_laplacian_tilde_scaling(nu, mu):
    assert laplacian_tilde(nu, mu, 2).isclose(laplacian(nu, mu, 2).scale(-0.25))


@pytest.mark.parametrize("nu,mu", PARAMS)
@pytest.mark.parametrize("n", [1, 2])
def test_magnetic_schrodinger_structure(nu, mu, n):
    h = magnetic_schrodinger(nu, mu, n)
    pot = MagneticPotential(nu, mu, n)
    assert pot.theta_is_imaginary()
    assert pot.is_real()
    # potential term: multiplication by (ν²+μ²)|z|²
    zero_order = h.filter(lambda m, d: not any(d))
    expect = DiffOp.multiplication(Polynomial.abs2(n, nu ** 2 + mu ** 2)) + DiffOp.identity(n, -2j * nu * n)
    assert zero_order.isclose(expect, atol=1e-12)
    assert h.isclose(-laplacian(nu, mu, n))


@pytest.mark.parametrize("nu,mu", PARAMS)
def test_gauge_conjugation(nu, mu):
    for n in (1, 2):
        assert laplacian(nu, mu, n).isclose(conjugate_by_gaussian(laplacian(0.0, mu, n), 0.5j * nu))


def test_ground_state_eigenvalue():
    for nu, mu in PARAMS:
        for n in (1, 2):
            f = ExpPoly.gaussian(n, -(mu + 1j * nu) / 2)
            assert eigencheck(laplacian(nu, mu, n), f) == pytest.approx(-2 * mu * n, rel=1e-12)


def test_eigencheck_rejects():
    with pytest.raises(ZeroFunction):
        eigencheck(laplacian(0, 1, 1), ExpPoly(Polynomial(1)))
    assert eigencheck(laplacian(0, 1, 1), ExpPoly(Polynomial.z(1, 0))) is None


def test_parameter_errors():
    with pytest.raises(InvalidParameter):
        laplacian(0, 0, 1)
    with pytest.raises(IndexOutOfRange):
        creation(2, 0, 1, 2)


def test_diffop_json_roundtrip():
    op = laplacian(1.0, 0.7, 2)
    back = DiffOp.from_json(json.loads(op.dumps()))
    assert back.isclose(op, rtol=0)
    assert back.dumps() == op.dumps()


@given(st.floats(-3, 3), st.floats(0.1, 3))
def test_factorisation_property(nu, mu):
    lap = laplacian(nu, mu, 1)
    ladder = creation(0, nu, mu, 1) @ annihilation(0, nu, mu, 1)
    assert lap.isclose(ladder.scale(-4.0) - DiffOp.identity(1, 2 * mu), rtol=1e-12)
