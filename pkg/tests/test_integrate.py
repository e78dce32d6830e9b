import math

import numpy as np
import pytest
from scipy import integrate as quad

from conftest import PARAMS
from oracles import gh_integrate_c
from twistlap import integrate as I
from twistlap import spectra as S
from twistlap.errors import DimensionMismatch, NonIntegrable
from twistlap.function_space import Envelope, ExpPoly, Polynomial


def moment_cases(count=50, seed=0):
    rng = np.random.default_rng(seed)
    for _ in range(count):
        alpha = complex(rng.uniform(-2, -0.5), rng.uniform(-0.5, 0.5))
        beta = complex(*rng.uniform(-0.5, 0.5, 2))
        gamma = complex(*rng.uniform(-0.5, 0.5, 2))
        yield int(rng.integers(0, 5)), int(rng.integers(0, 5)), alpha, beta, gamma


def quadrature_moment(a, b, alpha, beta, gamma):
    return gh_integrate_c(lambda z: z ** a * np.conj(z) ** b
                          * np.exp(alpha * abs(z) ** 2 + beta * z + gamma * np.conj(z)),
                          -alpha.real)


@pytest.mark.parametrize("case", list(moment_cases()))
def test_moments_against_quadrature(case):
    a, b, alpha, beta, gamma = case
    got = I.gaussian_moment(a, b, alpha, beta, gamma)
    ref = quadrature_moment(a, b, alpha, beta, gamma)
    assert abs(got - ref) <= 1e-8 * max(abs(ref), 1e-300) or abs(got - ref) <= 1e-12


def test_moment_examples():
    assert I.gaussian_moment(0, 0, -1) == pytest.approx(math.pi)
    assert I.gaussian_moment(1, 0, -1) == 0
    mu = 0.8
    polar, _ = quad.quad(lambda r: r ** 2 * math.exp(-mu * r * r) * 2 * math.pi * r, 0, np.inf)
    assert I.gaussian_moment(1, 1, -mu) == pytest.approx(polar, rel=1e-10)
    assert I.gaussian_moment(1, 1, -mu) == pytest.approx(math.pi / mu ** 2)
    assert I.gaussian_moment_nd((1, 0), (1, 0), -1.0) == pytest.approx(math.pi ** 2)


def test_moment_errors():
    with pytest.raises(NonIntegrable):
        I.gaussian_moment(0, 0, 0.1)
    with pytest.raises(NonIntegrable):
        I.gaussian_moment(0, 0, 1j)
    with pytest.raises(ValueError):
        I.gaussian_moment(-1, 0, -1)


def random_fn(rng, n, alpha):
    p = Polynomial(n, {tuple(int(v) for v in rng.integers(0, 3, 2 * n)): complex(*rng.normal(size=2))
                       for _ in range(4)})
    return ExpPoly(p, Envelope(alpha, rng.uniform(-0.3, 0.3, n) * 1j, rng.uniform(-0.3, 0.3, n)))


@pytest.mark.parametrize("seed", range(5))
def test_inner_product_against_quadrature(seed):
    rng = np.random.default_rng(seed)
    f = random_fn(rng, 1, -0.6 + 0.2j)
    g = random_fn(rng, 1, -0.5 - 0.1j)
    rep = I.inner_product(f, g)
    ref = gh_integrate_c(lambda z: _vec(f, z) * np.conj(_vec(g, z)), 1.1)
    assert abs(rep.value - ref) <= 1e-9 * max(1, abs(ref))
    assert rep.absolute_error_estimate < 1e-9 * max(1, abs(ref))
    back = I.inner_product(g, f).value
    assert back == pytest.approx(rep.value.conjugate(), rel=1e-13)


def _vec(f, z):
    return np.vectorize(lambda w: f([w]))(z)


def test_norms_and_dimension_check():
    for nu, mu in PARAMS:
        h = S.hermite_rodrigues(((0,), (0,)), nu, mu)
        assert I.norm2(h) == pytest.approx(math.pi / mu)
        assert abs(I.inner_product(S.hermite_rodrigues(((1,), (0,)), nu, mu),
                                   S.hermite_rodrigues(((0,), (1,)), nu, mu)).value) < 1e-14
    with pytest.raises(DimensionMismatch):
        I.inner_product(ExpPoly.gaussian(1, -1), ExpPoly.gaussian(2, -1))
    with pytest.raises(NonIntegrable):
        I.norm2(ExpPoly.gaussian(1, 0.0))


@pytest.mark.parametrize("nu,mu", PARAMS)
def test_hermite_norms(nu, mu):
    # ‖h_{r,s}‖² = π r! s! μ^{r−s−1} for n = 1
    for idx in S.hermite_indices(1, 3, 3):
        r, s = idx.r[0], idx.s[0]
        expect = math.pi * math.factorial(r) * math.factorial(s) * mu ** (r - s - 1)
        assert I.norm2(S.hermite_rodrigues(idx, nu, mu)) == pytest.approx(expect, rel=1e-12)


# projections ---------------------------------------------------------------

@pytest.mark.parametrize("nu,mu", PARAMS)
def test_projection_is_idempotent(nu, mu, rng):
    f = random_fn(rng, 1, -0.7 + 0.1j)
    for l in range(3):
        p = I.project_level(f, l, nu, mu)
        pp = I.project_level(p, l, nu, mu)
        assert pp.isclose(p, 1e-9)


@pytest.mark.parametrize("nu,mu", PARAMS)
def test_projection_matches_numeric_integral(nu, mu):
    f = ExpPoly(Polynomial(1, {(1, 0): 1.0, (0, 2): 0.5j}), Envelope(-0.6, [0.2], [0.1j]))
    z = [0.3 - 0.5j]
    for l in range(3):
        k = S.kernel_in_w(l, nu, mu, 1, z)
        sigma = mu / 2 + 0.6
        ref = gh_integrate_c(lambda w: _vec(k, w) * _vec(f, w), sigma, nodes=120)
        got = I.project_level(f, l, nu, mu)(z)
        assert abs(got - ref) <= 1e-9 * max(1, abs(ref))


@pytest.mark.parametrize("nu,mu", PARAMS)
def test_parseval(nu, mu):
    idxs = S.hermite_indices(1, 3, 1)
    rng = np.random.default_rng(1)
    coeffs = rng.normal(size=len(idxs)) + 1j * rng.normal(size=len(idxs))
    f = None
    for c, idx in zip(coeffs, idxs):
        h = S.hermite_rodrigues(idx, nu, mu)
        term = ExpPoly(h.poly.scale(c), h.env)
        f = term if f is None else f + term
    dec = I.decompose(f, 4, nu, mu)
    assert sum(dec.norms2) == pytest.approx(dec.total_norm2, rel=1e-10)
    assert dec.residual_norm < 1e-8 * math.sqrt(dec.total_norm2)


def test_decompose_examples():
    h10 = S.hermite_rodrigues(((1,), (0,)), 0, 1)
    dec = I.decompose(h10, 3, 0, 1)
    assert dec.norms2[1] == pytest.approx(dec.total_norm2)
    assert dec.norms2[0] < 1e-20 and dec.norms2[2] < 1e-20
    mix = S.hermite_rodrigues(((0,), (0,)), 0, 1) + S.hermite_rodrigues(((2,), (0,)), 0, 1)
    dec = I.decompose(mix, 4, 0, 1)
    assert dec.residual_norm < 1e-10
    assert dec.norms2[0] > 0 and dec.norms2[2] > 0 and dec.norms2[1] < 1e-20
    out = dec.to_json()
    assert [e["level"] for e in out["levels"]] == [0, 1, 2, 3]
    with pytest.raises(NonIntegrable):
        I.decompose(ExpPoly.gaussian(1, 0.5), 2, 0, 1)
