"""Normal-ordered differential operators with polynomial coefficients.

A term ``c * x^m * ∂^d`` is keyed by the pair ``(m, d)`` of exponent tuples;
multiplications always sit to the left of derivatives.  :class:`NormalOp`
works in any number of independent variables; :class:`DiffOp` specialises it
to the Wirtinger variables ``(z_1..z_n, z̄_1..z̄_n)`` of C^n and acts on
:class:`~twistlap.function_space.ExpPoly`.
"""
from __future__ import annotations

import itertools
import json
from math import comb, perm
from types import MappingProxyType
from typing import Mapping

from .errors import (DimensionMismatch, IndexOutOfRange, ZeroFunction,
                     require_positive_mu)
from .function_space import ExpPoly, Polynomial
from .polynomial import ZERO_TOL, Poly, grlex_key

OP_RTOL = 1e-12


class NormalOp:
    """Finite sum of ``c x^m ∂^d`` in normal order."""

    __slots__ = ("nvars", "_terms")

    def __init__(self, nvars: int, terms: Mapping[tuple, complex] | None = None,
                 *, _scale: float | None = None):
        self.nvars = int(nvars)
        clean: dict = {}
        for (m, d), c in (terms or {}).items():
            m, d = tuple(m), tuple(d)
            if len(m) != self.nvars or len(d) != self.nvars:
                raise DimensionMismatch("exponent length differs from nvars")
            clean[(m, d)] = clean.get((m, d), 0) + complex(c)
        if clean:
            scale = _scale if _scale is not None else max(map(abs, clean.values()))
            cut = ZERO_TOL * scale
            clean = {k: c for k, c in clean.items() if c != 0 and abs(c) > cut}
        self._terms = clean

    def _new(self, terms, scale=None):
        return NormalOp(self.nvars, terms, _scale=scale)

    # constructors -----------------------------------------------------
    @classmethod
    def identity(cls, nvars, c=1.0):
        z = (0,) * nvars
        return NormalOp(nvars, {(z, z): c})

    @classmethod
    def multiplication(cls, p: Poly):
        z = (0,) * p.nvars
        return NormalOp(p.nvars, {(k, z): c for k, c in p.terms.items()})

    @classmethod
    def partial(cls, nvars, i, c=1.0):
        if not 0 <= i < nvars:
            raise IndexOutOfRange(f"variable {i} outside 0..{nvars - 1}")
        d = [0] * nvars
        d[i] = 1
        return NormalOp(nvars, {((0,) * nvars, tuple(d)): c})

    # queries ----------------------------------------------------------
    @property
    def terms(self):
        return MappingProxyType(self._terms)

    def __len__(self):
        return len(self._terms)

    def is_zero(self):
        return not self._terms

    def order(self) -> int:
        return max((sum(d) for _, d in self._terms), default=-1)

    def max_abs(self) -> float:
        return max((abs(c) for c in self._terms.values()), default=0.0)

    def sorted_items(self):
        return sorted(self._terms.items(),
                      key=lambda kv: (sum(kv[0][1]), grlex_key(kv[0][1]),
                                      grlex_key(kv[0][0])))

    def filter(self, predicate):
        """Sub-operator of terms whose ``(m, d)`` key satisfies predicate."""
        return self._new({k: c for k, c in self._terms.items() if predicate(*k)})

    def coefficient_poly(self, d: tuple) -> Poly:
        """Polynomial multiplying ∂^d."""
        d = tuple(d)
        return Poly(self.nvars, {m: c for (m, dd), c in self._terms.items()
                                 if dd == d})

    def __repr__(self):
        body = " + ".join(f"({c:.6g})*x^{m}∂^{d}" for (m, d), c in self.sorted_items())
        return f"{type(self).__name__}({body or '0'})"

    # linear structure -------------------------------------------------
    def _check(self, other):
        if self.nvars != other.nvars:
            raise DimensionMismatch(f"{self.nvars} vs {other.nvars} variables")

    def _coerce(self, other):
        if isinstance(other, NormalOp):
            self._check(other)
            return other
        return self.identity_like(other)

    def identity_like(self, c=1.0):
        z = (0,) * self.nvars
        return self._new({(z, z): c})

    def __add__(self, other):
        other = self._coerce(other)
        out = dict(self._terms)
        for k, c in other._terms.items():
            out[k] = out.get(k, 0) + c
        return self._new(out, max(self.max_abs(), other.max_abs()))

    __radd__ = __add__

    def __neg__(self):
        return self._new({k: -c for k, c in self._terms.items()})

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return (-self) + other

    def scale(self, c):
        c = complex(c)
        return self._new({k: c * v for k, v in self._terms.items()} if c else {})

    def __mul__(self, c):
        if isinstance(c, NormalOp):
            return self.compose(c)
        return self.scale(c)

    def __rmul__(self, c):
        return self.scale(c)

    # algebra ----------------------------------------------------------
    def compose(self, other: "NormalOp") -> "NormalOp":
        """Normal-ordered product ``self ∘ other`` (generalised Leibniz)."""
        self._check(other)
        out: dict = {}
        nv = self.nvars
        for (ma, da), ca in self._terms.items():
            for (mb, db), cb in other._terms.items():
                ranges = [range(min(da[i], mb[i]) + 1) for i in range(nv)]
                for ks in itertools.product(*ranges):
                    w = ca * cb
                    for i, k in enumerate(ks):
                        if k:
                            w *= comb(da[i], k) * perm(mb[i], k)
                    m = tuple(ma[i] + mb[i] - ks[i] for i in range(nv))
                    d = tuple(da[i] - ks[i] + db[i] for i in range(nv))
                    out[(m, d)] = out.get((m, d), 0) + w
        return self._new(out)

    __matmul__ = compose

    def __pow__(self, p: int):
        result = self.identity_like()
        for _ in range(p):
            result = result.compose(self)
        return result

    def commutator(self, other: "NormalOp") -> "NormalOp":
        return self.compose(other) - other.compose(self)

    def isclose(self, other, rtol=OP_RTOL, atol=0.0) -> bool:
        other = self._coerce(other)
        ref = max(self.max_abs(), other.max_abs())
        lim = rtol * ref + atol
        keys = set(self._terms) | set(other._terms)
        return all(abs(self._terms.get(k, 0) - other._terms.get(k, 0)) <= lim
                   for k in keys)

    def max_deviation(self, other) -> float:
        """Largest term difference relative to the larger operand."""
        other = self._coerce(other)
        ref = max(self.max_abs(), other.max_abs()) or 1.0
        keys = set(self._terms) | set(other._terms)
        return max((abs(self._terms.get(k, 0) - other._terms.get(k, 0)) for k in keys),
                   default=0.0) / ref

    def apply_poly(self, f: Poly) -> Poly:
        if f.nvars != self.nvars:
            raise DimensionMismatch("operator and polynomial dimensions differ")
        cache: dict = {}
        acc: dict = {}
        for (m, d), c in self._terms.items():
            if d not in cache:
                g = f
                for i, e in enumerate(d):
                    if e:
                        g = g.deriv(i, e)
                cache[d] = g
            for k, v in cache[d].terms.items():
                nk = tuple(a + b for a, b in zip(k, m))
                acc[nk] = acc.get(nk, 0) + c * v
        return f._new(acc)

    def substitute_derivatives(self, values: Mapping[int, complex]) -> "NormalOp":
        """Replace ∂_i by the scalar ``values[i]`` (a Fourier multiplier)."""
        out: dict = {}
        for (m, d), c in self._terms.items():
            nd = list(d)
            w = c
            for i, v in values.items():
                if nd[i]:
                    w *= complex(v) ** nd[i]
                    nd[i] = 0
            key = (m, tuple(nd))
            out[key] = out.get(key, 0) + w
        return self._new(out, self.max_abs())

    def drop_variables(self, keep: list[int]) -> "NormalOp":
        """Project onto the variables in ``keep``; the dropped ones must not
        occur in any term."""
        out: dict = {}
        for (m, d), c in self._terms.items():
            for i in range(self.nvars):
                if i not in keep and (m[i] or d[i]):
                    raise ValueError(f"variable {i} still occurs in the operator")
            key = (tuple(m[i] for i in keep), tuple(d[i] for i in keep))
            out[key] = out.get(key, 0) + c
        return NormalOp(len(keep), out)


class DiffOp(NormalOp):
    """Operator on C^n in Wirtinger variables: keys ``(a+b, p+q)`` represent
    ``c z^a z̄^b ∂_z^p ∂_z̄^q``."""

    __slots__ = ()

    def __init__(self, n: int, terms=None, *, _scale=None):
        super().__init__(2 * n, terms, _scale=_scale)

    def _new(self, terms, scale=None):
        return DiffOp(self.n, terms, _scale=scale)

    @property
    def n(self):
        return self.nvars // 2

    @classmethod
    def from_normal(cls, op: NormalOp) -> "DiffOp":
        if op.nvars % 2:
            raise DimensionMismatch("Wirtinger operators need an even variable count")
        return cls(op.nvars // 2, dict(op.terms))

    @classmethod
    def identity(cls, n, c=1.0):
        z = (0,) * (2 * n)
        return cls(n, {(z, z): c})

    @classmethod
    def multiplication(cls, p: Polynomial):
        z = (0,) * p.nvars
        return cls(p.n, {(k, z): c for k, c in p.terms.items()})

    @classmethod
    def d_z(cls, n, j, c=1.0):
        _check_j(n, j)
        d = [0] * (2 * n)
        d[j] = 1
        return cls(n, {((0,) * (2 * n), tuple(d)): c})

    @classmethod
    def d_zbar(cls, n, j, c=1.0):
        _check_j(n, j)
        d = [0] * (2 * n)
        d[n + j] = 1
        return cls(n, {((0,) * (2 * n), tuple(d)): c})

    def terms_list(self):
        """``(coef, zpow, zbarpow, dz, dzbar)`` tuples in canonical order."""
        n = self.n
        return [(c, m[:n], m[n:], d[:n], d[n:]) for (m, d), c in self.sorted_items()]

    def apply(self, f: ExpPoly) -> ExpPoly:
        if not isinstance(f, ExpPoly):
            return self.apply_poly(f)
        if f.n != self.n:
            raise DimensionMismatch("operator and function dimensions differ")
        n = self.n
        cache: dict = {}

        def deriv(d):
            if d not in cache:
                if not any(d):
                    cache[d] = f
                else:
                    i = next(i for i, e in enumerate(d) if e)
                    lower = list(d)
                    lower[i] -= 1
                    g = deriv(tuple(lower))
                    cache[d] = g.derive(i % n, "z" if i < n else "zbar")
            return cache[d]

        acc: dict = {}
        for (m, d), c in self._terms.items():
            for k, v in deriv(d).poly.terms.items():
                nk = tuple(a + b for a, b in zip(k, m))
                acc[nk] = acc.get(nk, 0) + c * v
        return ExpPoly(Polynomial(n, acc), f.env)

    __call__ = apply

    def to_json(self) -> dict:
        return {"n": self.n,
                "terms": [{"a": list(a), "b": list(b), "dz": list(p),
                           "dzbar": list(q), "c": [c.real, c.imag]}
                          for c, a, b, p, q in self.terms_list()]}

    @classmethod
    def from_json(cls, d) -> "DiffOp":
        terms = {}
        for t in d["terms"]:
            key = (tuple(t["a"]) + tuple(t["b"]), tuple(t["dz"]) + tuple(t["dzbar"]))
            terms[key] = terms.get(key, 0) + complex(*t["c"])
        return cls(int(d["n"]), terms)

    def dumps(self) -> str:
        return json.dumps(self.to_json())


def _check_j(n, j):
    if not 0 <= j < n:
        raise IndexOutOfRange(f"index {j} outside 0..{n - 1}")


# functional API --------------------------------------------------------

def apply(op: DiffOp, f: ExpPoly) -> ExpPoly:
    return op.apply(f)


def compose(a: NormalOp, b: NormalOp) -> NormalOp:
    return a.compose(b)


def commutator(a: NormalOp, b: NormalOp) -> NormalOp:
    return a.commutator(b)


# named operators -------------------------------------------------------

def identity(n: int) -> DiffOp:
    return DiffOp.identity(n)


def euler(n: int) -> DiffOp:
    """E = sum z_j ∂/∂z_j."""
    out = DiffOp(n)
    for j in range(n):
        out = out + DiffOp.multiplication(Polynomial.z(n, j)) @ DiffOp.d_z(n, j)
    return out


def euler_bar(n: int) -> DiffOp:
    """Ē = sum z̄_j ∂/∂z̄_j."""
    out = DiffOp(n)
    for j in range(n):
        out = out + DiffOp.multiplication(Polynomial.zbar(n, j)) @ DiffOp.d_zbar(n, j)
    return out


def wirtinger_laplacian(n: int) -> DiffOp:
    """4 sum ∂²/∂z_j∂z̄_j (the Euclidean Laplacian of R^{2n})."""
    out = DiffOp(n)
    for j in range(n):
        out = out + DiffOp.d_z(n, j, 4.0) @ DiffOp.d_zbar(n, j)
    return out


def laplacian(nu: float, mu: float, n: int) -> DiffOp:
    """The twisted Laplacian

    4 Σ ∂∂̄ + 2(μ+iν)E − 2(μ−iν)Ē − (ν²+μ²)|z|² + 2iνn.
    """
    require_positive_mu(mu)
    return _laplacian(nu, mu, n)


def _laplacian(nu, mu, n):
    return (wirtinger_laplacian(n)
            + euler(n).scale(2 * (mu + 1j * nu))
            - euler_bar(n).scale(2 * (mu - 1j * nu))
            - DiffOp.multiplication(Polynomial.abs2(n, nu ** 2 + mu ** 2))
            + DiffOp.identity(n, 2j * nu * n))


def laplacian_tilde(nu: float, mu: float, n: int) -> DiffOp:
    """Δ̃ = −Δ/4, whose spectrum is μ(n/2 + l)."""
    return laplacian(nu, mu, n).scale(-0.25)


def creation(j: int, nu: float, mu: float, n: int) -> DiffOp:
    """a⁺_j = −∂/∂z_j + ((μ−iν)/2) z̄_j."""
    require_positive_mu(mu)
    return (DiffOp.d_z(n, j, -1.0)
            + DiffOp.multiplication(Polynomial.zbar(n, j, (mu - 1j * nu) / 2)))


def annihilation(j: int, nu: float, mu: float, n: int) -> DiffOp:
    """a⁻_j = ∂/∂z̄_j + ((μ+iν)/2) z_j."""
    require_positive_mu(mu)
    return (DiffOp.d_zbar(n, j)
            + DiffOp.multiplication(Polynomial.z(n, j, (mu + 1j * nu) / 2)))


def conjugate_by_gaussian(op: DiffOp, kappa: complex) -> DiffOp:
    """e^{−κ|z|²} ∘ op ∘ e^{κ|z|²}.

    Each ∂_{z_j} becomes ∂_{z_j} + κ z̄_j and each ∂_{z̄_j} becomes
    ∂_{z̄_j} + κ z_j.
    """
    n = op.n
    shifted = ([DiffOp.d_z(n, j) + DiffOp.multiplication(Polynomial.zbar(n, j, kappa))
                for j in range(n)]
               + [DiffOp.d_zbar(n, j) + DiffOp.multiplication(Polynomial.z(n, j, kappa))
                  for j in range(n)])
    powers: dict = {}

    def power(i, e):
        if (i, e) not in powers:
            powers[(i, e)] = shifted[i] ** e
        return powers[(i, e)]

    out = DiffOp(n)
    for (m, d), c in op.terms.items():
        term = DiffOp.multiplication(Polynomial(n, {m: c}))
        for i, e in enumerate(d):
            if e:
                term = term @ power(i, e)
        out = out + term
    return out


# real coordinates ------------------------------------------------------
#
# x_j = (z_j + z̄_j)/2, y_j = (z_j − z̄_j)/(2i),
# ∂_{x_j} = ∂_{z_j} + ∂_{z̄_j}, ∂_{y_j} = i(∂_{z_j} − ∂_{z̄_j}).

def x_coord(n, j) -> Polynomial:
    return (Polynomial.z(n, j) + Polynomial.zbar(n, j)).scale(0.5)


def y_coord(n, j) -> Polynomial:
    return (Polynomial.z(n, j) - Polynomial.zbar(n, j)).scale(-0.5j)


def d_x(n, j) -> DiffOp:
    return DiffOp.d_z(n, j) + DiffOp.d_zbar(n, j)


def d_y(n, j) -> DiffOp:
    return DiffOp.d_z(n, j, 1j) - DiffOp.d_zbar(n, j, 1j)


def real_to_complex(op: NormalOp) -> DiffOp:
    """Rewrite an operator in real coordinates (x_1, y_1, …, x_n, y_n) as a
    Wirtinger :class:`DiffOp`."""
    if op.nvars % 2:
        raise DimensionMismatch("real operators on C^n need 2n variables")
    n = op.nvars // 2
    coords = []
    for j in range(n):
        coords += [x_coord(n, j), y_coord(n, j)]
    partials = []
    for j in range(n):
        partials += [d_x(n, j), d_y(n, j)]
    dpow: dict = {}

    def dpower(i, e):
        if (i, e) not in dpow:
            dpow[(i, e)] = partials[i] ** e
        return dpow[(i, e)]

    out = DiffOp(n)
    for d in sorted({d for _, d in op.terms}):
        coef = op.coefficient_poly(d).substitute(coords)
        deriv = DiffOp.identity(n)
        for i, e in enumerate(d):
            if e:
                deriv = deriv @ dpower(i, e)
        out = out + DiffOp.multiplication(coef) @ deriv
    return out


class MagneticPotential:
    """The 1-form θ = −((μ−iν)/2) Σ z̄_j dz_j + ((μ+iν)/2) Σ z_j dz̄_j and its
    real vector potential A with θ = i A.

    ``theta_dz[j]`` and ``theta_dzbar[j]`` are the (dz_j, dz̄_j) components;
    ``a_x[j]`` and ``a_y[j]`` are the dx_j, dy_j components of A, written
    as real-valued polynomials in (z, z̄).
    """

    def __init__(self, nu: float, mu: float, n: int):
        require_positive_mu(mu)
        self.nu, self.mu, self.n = float(nu), float(mu), int(n)
        self.theta_dz = [Polynomial.zbar(n, j, -(mu - 1j * nu) / 2) for j in range(n)]
        self.theta_dzbar = [Polynomial.z(n, j, (mu + 1j * nu) / 2) for j in range(n)]
        # dz = dx + i dy, dz̄ = dx − i dy
        theta_x = [p + q for p, q in zip(self.theta_dz, self.theta_dzbar)]
        theta_y = [(p - q).scale(1j) for p, q in zip(self.theta_dz, self.theta_dzbar)]
        self.a_x = [t.scale(-1j) for t in theta_x]
        self.a_y = [t.scale(-1j) for t in theta_y]

    def theta_is_imaginary(self, tol=1e-12) -> bool:
        """θ + conj(θ) = 0 component-wise (conj swaps dz and dz̄)."""
        return all(
            (p + q.conjugate()).isclose(Polynomial(self.n), atol=tol)
            and (q + p.conjugate()).isclose(Polynomial(self.n), atol=tol)
            for p, q in zip(self.theta_dz, self.theta_dzbar))

    def is_real(self, tol=1e-12) -> bool:
        return all(a.is_real_valued(tol) for a in self.a_x + self.a_y)

    def components(self):
        """A in real-coordinate order (A_{x_1}, A_{y_1}, …)."""
        out = []
        for ax, ay in zip(self.a_x, self.a_y):
            out += [ax, ay]
        return out


def magnetic_schrodinger(nu: float, mu: float, n: int) -> DiffOp:
    """H = Σ_k (−i ∂_k + A_k)² over the 2n real coordinates, assembled from
    the real-coordinate primitives and the vector potential of θ."""
    pot = MagneticPotential(nu, mu, n)
    partials = []
    for j in range(n):
        partials += [d_x(n, j), d_y(n, j)]
    out = DiffOp(n)
    for dk, ak in zip(partials, pot.components()):
        cov = dk.scale(-1j) + DiffOp.multiplication(ak)
        out = out + cov @ cov
    return out


def eigencheck(op: DiffOp, f: ExpPoly, rtol: float = 1e-10):
    """Return λ if ``op f == λ f`` coefficient-wise, else ``None``."""
    if f.is_zero():
        raise ZeroFunction("eigencheck needs a non-zero function")
    g = op.apply(f)
    key, ref = max(f.poly.terms.items(), key=lambda kv: abs(kv[1]))
    lam = g.poly.coefficient(key) / ref
    if g.poly.isclose(f.poly.scale(lam), rtol=rtol,
                      atol=rtol * max(1.0, abs(lam)) * f.poly.max_abs()):
        return lam
    return None
