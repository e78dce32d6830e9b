import cmath
import json
import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from oracles import wirtinger_fd
from twistlap.errors import DimensionMismatch, EnvelopeMismatch, IndexOutOfRange
from twistlap.function_space import Envelope, ExpPoly, Polynomial, add, derive, evaluate, mul_poly
from twistlap.polynomial import Poly, monomials_up_to

coef = st.complex_numbers(max_magnitude=3, allow_nan=False, allow_infinity=False)


def poly_strategy(n=1, max_deg=3):
    keys = list(monomials_up_to(2 * n, max_deg))
    return st.dictionaries(st.sampled_from(keys), coef, max_size=6).map(
        lambda d: Polynomial(n, d))


def env_strategy(n=1):
    alpha = st.builds(complex, st.floats(-2, -0.2), st.floats(-1, 1))
    small = st.builds(complex, st.floats(-0.5, 0.5), st.floats(-0.5, 0.5))
    return st.builds(lambda a, b, g: Envelope(a, b, g), alpha,
                     st.lists(small, min_size=n, max_size=n),
                     st.lists(small, min_size=n, max_size=n))


# Poly ----------------------------------------------------------------------

def test_poly_rejects_bad_keys():
    with pytest.raises(DimensionMismatch):
        Poly(2, {(1,): 1})
    with pytest.raises(ValueError):
        Poly(1, {(-1,): 1})


def test_poly_prunes_rounding_noise():
    p = Poly(1, {(0,): 1.0, (1,): 1e-15})
    assert len(p) == 1
    assert (Poly.variable(1, 0) - Poly.variable(1, 0)).is_zero()


def test_poly_pow_and_substitute():
    x = Poly.variable(2, 0)
    y = Poly.variable(2, 1)
    p = (x + y) ** 3
    assert p.coefficient((2, 1)) == 3
    q = p.substitute([y, x])
    assert q == p
    assert p.evaluate([1.0, 2.0]) == 27


def test_poly_embed():
    p = Poly(2, {(1, 2): 3.0}).embed(4, [3, 1])
    assert p.terms == {(0, 2, 0, 1): 3.0}


@given(poly_strategy(), poly_strategy(), poly_strategy())
def test_ring_axioms(p, q, r):
    assert ((p * q) * r).isclose(p * (q * r), rtol=1e-12, atol=1e-12)
    assert (p * (q + r)).isclose(p * q + p * r, rtol=1e-12, atol=1e-12)
    assert (p + q).isclose(q + p)


@given(poly_strategy(max_deg=4), poly_strategy(max_deg=4))
def test_leibniz_rule(p, q):
    for i in range(2):
        lhs = (p * q).deriv(i)
        rhs = p.deriv(i) * q + p * q.deriv(i)
        assert lhs.isclose(rhs, rtol=1e-12, atol=1e-12)


# Polynomial ----------------------------------------------------------------

def test_polynomial_constructors():
    n = 2
    assert Polynomial.abs2(n).at([1 + 1j, 2]) == pytest.approx(6)
    assert Polynomial.z(n, 1).at([0, 2j]) == 2j
    assert Polynomial.zbar(n, 1).at([0, 2j]) == -2j
    with pytest.raises(IndexOutOfRange):
        Polynomial.z(n, 2)
    assert Polynomial.linear([1, 0], [0, 1j]).at([2, 3]) == pytest.approx(2 + 3j)


@given(poly_strategy(n=2))
def test_polynomial_conjugate_is_pointwise(p):
    z = [0.3 - 0.7j, -1.1 + 0.2j]
    assert p.conjugate().at(z) == pytest.approx(p.at(z).conjugate(), abs=1e-9)
    assert (p.real_part() + p.imag_part().scale(1j)).isclose(p, atol=1e-12)
    assert p.real_part().is_real_valued()


# add / mul_poly ------------------------------------------------------------

def g1():
    return ExpPoly.gaussian(1, -1.0)


def test_add_examples():
    f = ExpPoly(Polynomial.zbar(1, 0), g1().env)
    zero = ExpPoly(Polynomial(1), g1().env)
    assert add(f, zero).isclose(f)
    assert add(f, -f).is_zero()
    merged = add(g1(), ExpPoly(Polynomial.abs2(1), g1().env))
    assert merged.poly == Polynomial.one(1) + Polynomial.abs2(1)


def test_add_rejects_other_envelope():
    with pytest.raises(EnvelopeMismatch):
        g1() + ExpPoly.gaussian(1, -0.5)


def test_add_absorbs_delta():
    f = ExpPoly(Polynomial.one(1), Envelope(-1, [0], [0], math.log(2)))
    s = f + g1()
    assert s(np.array([0.4j])) == pytest.approx(3 * math.exp(-0.16))


def test_mul_poly_examples():
    assert mul_poly(g1(), Polynomial.one(1)).isclose(g1())
    zf = mul_poly(g1(), Polynomial.z(1, 0))
    assert zf.poly == Polynomial.z(1, 0)
    assert mul_poly(zf, Polynomial.zbar(1, 0)).poly == Polynomial.abs2(1)
    with pytest.raises(DimensionMismatch):
        mul_poly(g1(), Polynomial.one(2))


# derive ---------------------------------------------------------------------

def test_derive_examples():
    alpha = -0.7 + 0.2j
    f = ExpPoly.gaussian(1, alpha)
    assert derive(f, 0, "z").poly == Polynomial.zbar(1, 0, alpha)
    assert derive(ExpPoly(Polynomial.z(1, 0)), 0, "z").poly == Polynomial.one(1)
    mu = 1.3
    f = ExpPoly(Polynomial.z(1, 0), Envelope.gaussian(1, -mu))
    d = derive(f, 0, "zbar")
    assert d.poly.isclose(Polynomial(1, {(2, 0): -mu}))
    p = np.array([0.4 - 0.3j])
    assert d(p) == pytest.approx(wirtinger_fd(f, p, 0, "zbar"), rel=1e-8)
    with pytest.raises(IndexOutOfRange):
        derive(f, 1, "z")
    with pytest.raises(ValueError):
        derive(f, 0, "x")


@given(poly_strategy(n=2, max_deg=3), env_strategy(n=2), st.sampled_from([0, 1]),
       st.sampled_from(["z", "zbar"]))
def test_derive_matches_finite_differences(p, env, j, kind):
    f = ExpPoly(p, env)
    point = np.array([0.35 - 0.2j, -0.15 + 0.4j])
    exact = f.derive(j, kind)(point)
    approx = wirtinger_fd(f, point, j, kind)
    scale = max(1.0, max(abs(f(point + d)) for d in (0.01, 0.01j, -0.01)))
    assert abs(exact - approx) <= 1e-6 * scale * max(1, p.max_abs())


@given(poly_strategy(n=2, max_deg=3), env_strategy(n=2))
def test_mixed_partials_commute(p, env):
    f = ExpPoly(p, env)
    for j in range(2):
        for k in range(2):
            a = f.derive(j, "z").derive(k, "zbar")
            b = f.derive(k, "zbar").derive(j, "z")
            assert a.isclose(b, rtol=1e-12, atol=1e-12)


# evaluate & serialisation ---------------------------------------------------

def test_evaluate_examples():
    assert evaluate(g1(), [0]) == 1
    assert evaluate(ExpPoly(Polynomial.z(1, 0)), [2 + 1j]) == 2 + 1j
    assert evaluate(g1(), [1]) == pytest.approx(math.exp(-1), rel=1e-12)
    with pytest.raises(DimensionMismatch):
        evaluate(g1(), [1, 2])


def test_envelope_integrability_flag():
    assert Envelope.gaussian(1, -0.1).integrable
    assert not Envelope.gaussian(1, 0.0).integrable


@given(poly_strategy(n=2), env_strategy(n=2))
def test_json_roundtrip(p, env):
    f = ExpPoly(p, env)
    g = ExpPoly.loads(f.dumps())
    assert g.isclose(f, rtol=0)
    assert g.dumps() == f.dumps()


def test_json_schema_and_order():
    f = ExpPoly(Polynomial(1, {(1, 1): 2.0, (0, 0): -1.0, (0, 1): 1j}), Envelope(-0.5, [0], [0]))
    d = json.loads(f.dumps())
    assert set(d) == {"n", "envelope", "terms"}
    assert set(d["envelope"]) == {"alpha", "beta", "gamma", "delta"}
    assert [(t["a"], t["b"]) for t in d["terms"]] == [([0], [0]), ([0], [1]), ([1], [1])]
    assert d["terms"][1]["c"] == [0.0, 1.0]


def test_csv_output():
    f = ExpPoly(Polynomial(2, {(1, 0, 0, 2): 0.5 - 1j}))
    lines = f.to_csv().splitlines()
    assert lines[0] == "a1,a2,b1,b2,re,im"
    assert lines[1] == "1,0,0,2,0.5,-1.0"


def test_exp_poly_product_and_conjugate():
    f = ExpPoly(Polynomial.z(1, 0), Envelope(-0.5 + 0.1j, [0.2], [0.1j]))
    g = ExpPoly(Polynomial.zbar(1, 0, 2), Envelope(-0.3, [0], [0.4]))
    z = [0.3 + 0.8j]
    assert (f * g)(z) == pytest.approx(f(z) * g(z))
    assert f.conjugate()(z) == pytest.approx(f(z).conjugate())
    assert f.rebase(1.0)(z) == pytest.approx(f(z))
    assert cmath.isclose(f.normalized()(z), f(z))
