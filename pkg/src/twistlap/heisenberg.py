"""The group N_ω = C ×_ω C^n, the Heisenberg group H_{2n+1} and their sub-Laplacians.

Real coordinates on N_ω are ordered (s, t, x_1, y_1, …, x_n, y_n) with
z_0 = s + it and z_j = x_j + i y_j.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from .errors import DimensionMismatch, InvalidParameter
from .function_space import Polynomial
from .operators import (DiffOp, NormalOp, euler, euler_bar, real_to_complex,
                        wirtinger_laplacian)
from .polynomial import Poly, monomials_up_to

S_INDEX, T_INDEX = 0, 1
TOL = 1e-12


def _cvec(z) -> tuple:
    return tuple(complex(v) for v in z)


def omega(z: Sequence[complex], w: Sequence[complex]) -> complex:
    """Standard Hermitian form Σ z_j conj(w_j)."""
    if len(z) != len(w):
        raise DimensionMismatch(f"lengths {len(z)} and {len(w)} differ")
    return sum(complex(a) * complex(b).conjugate() for a, b in zip(z, w))


@dataclass(frozen=True)
class NOmegaElement:
    z0: complex
    z: tuple

    def __post_init__(self):
        object.__setattr__(self, "z0", complex(self.z0))
        object.__setattr__(self, "z", _cvec(self.z))

    @property
    def n(self) -> int:
        return len(self.z)

    @classmethod
    def identity(cls, n: int) -> "NOmegaElement":
        return cls(0, (0,) * n)

    def coordinates(self) -> list[float]:
        out = [self.z0.real, self.z0.imag]
        for v in self.z:
            out += [v.real, v.imag]
        return out

    def isclose(self, other: "NOmegaElement", tol=TOL) -> bool:
        a, b = np.array(self.coordinates()), np.array(other.coordinates())
        return a.shape == b.shape and bool(
            np.max(np.abs(a - b), initial=0.0) <= tol * max(1.0, np.max(np.abs(a))))


@dataclass(frozen=True)
class HeisenbergElement:
    t: float
    z: tuple

    def __post_init__(self):
        object.__setattr__(self, "t", float(self.t))
        object.__setattr__(self, "z", _cvec(self.z))

    @property
    def n(self) -> int:
        return len(self.z)

    def isclose(self, other: "HeisenbergElement", tol=TOL) -> bool:
        return (self.n == other.n and abs(self.t - other.t) <= tol * max(1, abs(self.t))
                and all(abs(a - b) <= tol * max(1, abs(a)) for a, b in zip(self.z, other.z)))


def _same_n(a, b):
    if a.n != b.n:
        raise DimensionMismatch(f"dimensions {a.n} and {b.n} differ")


def group_mul(a: NOmegaElement, b: NOmegaElement) -> NOmegaElement:
    """(z_0; z)·(w_0; w) = (z_0 + w_0 + ⟨z, w⟩; z + w)."""
    _same_n(a, b)
    return NOmegaElement(a.z0 + b.z0 + omega(a.z, b.z),
                         tuple(x + y for x, y in zip(a.z, b.z)))


def group_inv(a: NOmegaElement) -> NOmegaElement:
    """(−z_0 + ⟨z, z⟩; −z), the two-sided inverse under the ω-law."""
    return NOmegaElement(-a.z0 + omega(a.z, a.z), tuple(-v for v in a.z))


def group_inv_printed(a: NOmegaElement) -> NOmegaElement:
    """(−z_0 − ⟨z, z⟩; −z); multiplying by it leaves (−2|z|²; 0), not the identity."""
    return NOmegaElement(-a.z0 - omega(a.z, a.z), tuple(-v for v in a.z))


def project_q(a: NOmegaElement) -> HeisenbergElement:
    """q(s, t; z) = (t; z)."""
    return HeisenbergElement(a.z0.imag, a.z)


def heis_mul(a: HeisenbergElement, b: HeisenbergElement) -> HeisenbergElement:
    _same_n(a, b)
    return HeisenbergElement(a.t + b.t + omega(a.z, b.z).imag,
                             tuple(x + y for x, y in zip(a.z, b.z)))


def cocycle_check(x, y, z, psi: Callable | None = None, tol: float = TOL) -> bool:
    """ψ(x,y) + ψ(x+y,z) == ψ(x,y+z) + ψ(y,z); ψ defaults to ω."""
    if not len(x) == len(y) == len(z):
        raise DimensionMismatch("vectors of different lengths")
    psi = psi or omega
    x, y, z = (np.asarray(v, dtype=complex) for v in (x, y, z))
    lhs = psi(x, y) + psi(x + y, z)
    rhs = psi(x, y + z) + psi(y, z)
    scale = max(1.0, abs(psi(x, y)), abs(psi(x + y, z)), abs(psi(y, z)))
    return abs(lhs - rhs) <= tol * scale


def random_element(n: int, rng: np.random.Generator, box: float = 2.0) -> NOmegaElement:
    c = rng.uniform(-box, box, size=2 * n + 2)
    return NOmegaElement(complex(c[0], c[1]),
                         tuple(complex(c[2 + 2 * j], c[3 + 2 * j]) for j in range(n)))


# left translations and vector fields ------------------------------------

def _nvars(n: int) -> int:
    if n < 1:
        raise InvalidParameter(f"n must be >= 1, got {n}")
    return 2 * n + 2


def x_index(j: int) -> int:
    return 2 + 2 * j


def y_index(j: int) -> int:
    return 3 + 2 * j


def left_translation_map(g: NOmegaElement, primed: bool = False) -> list[Poly]:
    """Coordinate images of p ↦ g·p as polynomials in the coordinates of p.

    With ``primed=True`` g is symbolic too: the map lives in 2(2n+2)
    variables, the first block for g and the second for p.
    """
    n = g.n
    nv = _nvars(n)
    if primed:
        gv = [Poly.variable(2 * nv, i) for i in range(nv)]
        pv = [Poly.variable(2 * nv, nv + i) for i in range(nv)]
    else:
        gv = [Poly.constant(nv, c) for c in g.coordinates()]
        pv = [Poly.variable(nv, i) for i in range(nv)]
    s = gv[0] + pv[0]
    t = gv[1] + pv[1]
    for j in range(n):
        a, b = gv[x_index(j)], gv[y_index(j)]
        x, y = pv[x_index(j)], pv[y_index(j)]
        # ⟨a+ib, x+iy⟩ = (ax + by) + i(bx − ay)
        s = s + a * x + b * y
        t = t + b * x - a * y
    images = [s, t]
    for j in range(n):
        images += [gv[x_index(j)] + pv[x_index(j)], gv[y_index(j)] + pv[y_index(j)]]
    return images


def jacobian_matrix(n: int) -> list[list[Poly]]:
    """J_{ik} = ∂(g·p)_i/∂p_k at p = 0, as polynomials in the coordinates of g."""
    nv = _nvars(n)
    images = left_translation_map(NOmegaElement.identity(n), primed=True)
    zero_p = [Poly.variable(nv, i) for i in range(nv)] + [Poly(nv)] * nv
    return [[images[i].deriv(nv + k).substitute(zero_p) for k in range(nv)]
            for i in range(nv)]


class VectorField:
    """First-order operator Σ_i c_i ∂/∂x^i with polynomial coefficients."""

    __slots__ = ("nvars", "coefficients", "name")

    def __init__(self, coefficients: Sequence[Poly], name: str = ""):
        self.coefficients = tuple(coefficients)
        self.nvars = len(self.coefficients)
        for c in self.coefficients:
            if c.nvars != self.nvars:
                raise DimensionMismatch("coefficient variable count differs")
        self.name = name

    @property
    def n(self) -> int:
        return (self.nvars - 2) // 2

    @classmethod
    def coordinate(cls, nvars: int, i: int, name: str = "") -> "VectorField":
        return cls([Poly.constant(nvars, 1.0) if k == i else Poly(nvars)
                    for k in range(nvars)], name)

    def __repr__(self):
        return f"VectorField({self.name or self.coefficients!r})"

    def __call__(self, f: Poly) -> Poly:
        if f.nvars != self.nvars:
            raise DimensionMismatch("field and function dimensions differ")
        out = Poly(self.nvars)
        for i, c in enumerate(self.coefficients):
            if not c.is_zero():
                out = out + c * f.deriv(i)
        return out

    def _check(self, other):
        if self.nvars != other.nvars:
            raise DimensionMismatch("fields live on different spaces")

    def __add__(self, other):
        self._check(other)
        return VectorField([a + b for a, b in zip(self.coefficients, other.coefficients)])

    def __sub__(self, other):
        self._check(other)
        return VectorField([a - b for a, b in zip(self.coefficients, other.coefficients)])

    def scale(self, c) -> "VectorField":
        return VectorField([a.scale(c) for a in self.coefficients])

    def is_zero(self) -> bool:
        return all(c.is_zero() for c in self.coefficients)

    def __eq__(self, other):
        if not isinstance(other, VectorField):
            return NotImplemented
        return self.nvars == other.nvars and all(
            a == b for a, b in zip(self.coefficients, other.coefficients))

    __hash__ = None

    def to_op(self) -> NormalOp:
        out = NormalOp(self.nvars)
        for i, c in enumerate(self.coefficients):
            if not c.is_zero():
                out = out + NormalOp.multiplication(c) @ NormalOp.partial(self.nvars, i)
        return out


def bracket(X: VectorField, Y: VectorField) -> VectorField:
    """[X, Y] with coefficients X(Y^i) − Y(X^i)."""
    X._check(Y)
    return VectorField([X(b) - Y(a) for a, b in zip(X.coefficients, Y.coefficients)])


@dataclass(frozen=True)
class LeftInvariantBasis:
    S: VectorField
    T: VectorField
    X: tuple
    Y: tuple

    @property
    def n(self) -> int:
        return len(self.X)

    def fields(self) -> list[VectorField]:
        out = [self.S, self.T]
        for x, y in zip(self.X, self.Y):
            out += [x, y]
        return out


def left_invariant_basis(n: int) -> LeftInvariantBasis:
    """Columns of the Jacobian of left translation at the identity.

    Column k of J read as the field Σ_i J_{ik} ∂/∂x^i gives, in order,
    S, T, X_1, Y_1, …, X_n, Y_n.
    """
    J = jacobian_matrix(n)
    nv = _nvars(n)
    cols = [VectorField([J[i][k] for i in range(nv)]) for k in range(nv)]
    names = ["S", "T"] + [f"{p}{j + 1}" for j in range(n) for p in "XY"]
    for c, name in zip(cols, names):
        c.name = name
    return LeftInvariantBasis(cols[0], cols[1], tuple(cols[2::2]), tuple(cols[3::2]))


def explicit_fields(n: int) -> LeftInvariantBasis:
    """S, T, X_j = x_j∂_s + y_j∂_t + ∂_{x_j}, Y_j = y_j∂_s − x_j∂_t + ∂_{y_j}."""
    nv = _nvars(n)
    var = lambda i: Poly.variable(nv, i)
    zero, one = Poly(nv), Poly.constant(nv, 1.0)
    X, Y = [], []
    for j in range(n):
        cx = [zero] * nv
        cx[S_INDEX], cx[T_INDEX], cx[x_index(j)] = var(x_index(j)), var(y_index(j)), one
        cy = [zero] * nv
        cy[S_INDEX], cy[T_INDEX], cy[y_index(j)] = var(y_index(j)), -var(x_index(j)), one
        X.append(VectorField(cx, f"X{j + 1}"))
        Y.append(VectorField(cy, f"Y{j + 1}"))
    return LeftInvariantBasis(VectorField.coordinate(nv, S_INDEX, "S"),
                              VectorField.coordinate(nv, T_INDEX, "T"), tuple(X), tuple(Y))


def generator_fields(n: int, convention: str = "printed") -> tuple[tuple, tuple]:
    """Generators of the Heisenberg algebra on (t, x, y), embedded in N_ω coordinates.

    ``"printed"``: X̃_j = −y_j∂_t + ∂_{x_j}, Ỹ_j = x_j∂_t + ∂_{y_j}, whose
    bracket is +2T.  ``"projected"``: the ∂_s-free parts of X_j and Y_j,
    y_j∂_t + ∂_{x_j} and −x_j∂_t + ∂_{y_j}, whose bracket is −2T.
    """
    if convention not in ("printed", "projected"):
        raise InvalidParameter(f"unknown convention {convention!r}")
    nv = _nvars(n)
    var = lambda i: Poly.variable(nv, i)
    zero, one = Poly(nv), Poly.constant(nv, 1.0)
    sign = -1.0 if convention == "printed" else 1.0
    X, Y = [], []
    for j in range(n):
        cx = [zero] * nv
        cx[T_INDEX], cx[x_index(j)] = var(y_index(j)).scale(sign), one
        cy = [zero] * nv
        cy[T_INDEX], cy[y_index(j)] = var(x_index(j)).scale(-sign), one
        X.append(VectorField(cx, f"X~{j + 1}"))
        Y.append(VectorField(cy, f"Y~{j + 1}"))
    return tuple(X), tuple(Y)


def commutator_table(basis: LeftInvariantBasis) -> dict[tuple[str, str], VectorField]:
    fields = basis.fields()
    return {(a.name, b.name): bracket(a, b) for a, b in itertools.combinations(fields, 2)}


def expected_commutator(basis: LeftInvariantBasis, a: str, b: str) -> VectorField:
    """The Heisenberg-type relations: only [X_j, Y_j] = −2T is nonzero."""
    nv = 2 * basis.n + 2
    if a[0] == "X" and b[0] == "Y" and a[1:] == b[1:]:
        return basis.T.scale(-2.0)
    if a[0] == "Y" and b[0] == "X" and a[1:] == b[1:]:
        return basis.T.scale(2.0)
    return VectorField([Poly(nv)] * nv)


class _Composer:
    """Caches f∘ℓ_g for monomials f, built up one factor at a time."""

    def __init__(self, g: NOmegaElement):
        self.images = left_translation_map(g)
        self.nvars = len(self.images)
        self.cache = {(0,) * self.nvars: Poly.constant(self.nvars, 1.0)}

    def __call__(self, exps: tuple) -> Poly:
        if exps not in self.cache:
            i = next(k for k, e in enumerate(exps) if e)
            lower = exps[:i] + (exps[i] - 1,) + exps[i + 1:]
            self.cache[exps] = self(lower) * self.images[i]
        return self.cache[exps]


def left_invariance_check(X: VectorField, g: NOmegaElement, degree: int = 3,
                          _composer: _Composer | None = None) -> bool:
    """X(f∘ℓ_g) == (Xf)∘ℓ_g for every monomial f of degree ≤ ``degree``."""
    if X.nvars != 2 * g.n + 2:
        raise DimensionMismatch("field and group element dimensions differ")
    comp = _composer or _Composer(g)
    moved_coefs = [c.substitute(comp.images) for c in X.coefficients]
    for exps in monomials_up_to(X.nvars, degree):
        lhs = X(comp(exps))
        rhs = Poly(X.nvars)
        for i, e in enumerate(exps):
            if e and not X.coefficients[i].is_zero():
                lower = exps[:i] + (e - 1,) + exps[i + 1:]
                rhs = rhs + (moved_coefs[i] * comp(lower)).scale(e)
        if not lhs.isclose(rhs, rtol=TOL, atol=TOL):
            return False
    return True


def basis_left_invariant(basis: LeftInvariantBasis, g: NOmegaElement, degree: int = 3) -> dict:
    """:func:`left_invariance_check` for every basis field, sharing one composition cache."""
    comp = _Composer(g)
    return {f.name: left_invariance_check(f, g, degree, comp) for f in basis.fields()}


# sub-Laplacians ----------------------------------------------------------

def sub_laplacian(n: int) -> NormalOp:
    """Σ X_j² + Y_j² on (s, t, x, y)."""
    b = left_invariant_basis(n)
    out = NormalOp(_nvars(n))
    for f in b.X + b.Y:
        op = f.to_op()
        out = out + op @ op
    return out


def sub_laplacian_explicit(n: int) -> NormalOp:
    """Δ_{R^{2n}} + 2(E_{x,y} + n)∂_s − 2F_{x,y}∂_t + (|x|²+|y|²)(∂_s² + ∂_t²)."""
    nv = _nvars(n)
    d = lambda i: NormalOp.partial(nv, i)
    m = lambda i: NormalOp.multiplication(Poly.variable(nv, i))
    lap = NormalOp(nv)
    e_xy = NormalOp(nv)
    f_xy = NormalOp(nv)
    r2 = NormalOp(nv)
    for j in range(n):
        xi, yi = x_index(j), y_index(j)
        lap = lap + d(xi) @ d(xi) + d(yi) @ d(yi)
        e_xy = e_xy + m(xi) @ d(xi) + m(yi) @ d(yi)
        f_xy = f_xy + m(xi) @ d(yi) - m(yi) @ d(xi)
        r2 = r2 + m(xi) @ m(xi) + m(yi) @ m(yi)
    ds, dt = d(S_INDEX), d(T_INDEX)
    return (lap + (e_xy + NormalOp.identity(nv, n)).scale(2.0) @ ds
            - f_xy.scale(2.0) @ dt + r2 @ (ds @ ds + dt @ dt))


def _complex_with_st(n: int):
    """Embedding of Wirtinger operators on C^n next to the variables (s, t).

    Variable order is (s, t, z_1..z_n, z̄_1..z̄_n); returns the embedding
    function and the derivations ∂_s, ∂_t.
    """
    nv = 2 * n + 2

    def embed(op: DiffOp) -> NormalOp:
        out = {}
        for (m, d), c in op.terms.items():
            out[((0, 0) + m, (0, 0) + d)] = c
        return NormalOp(nv, out)

    return embed, NormalOp.partial(nv, 0), NormalOp.partial(nv, 1)


def sub_laplacian_complex(n: int) -> NormalOp:
    """4Σ∂∂̄ + 2(E+Ē+n)∂_s − 2i(E−Ē)∂_t + |z|²(∂_s²+∂_t²) in (s, t, z, z̄)."""
    if n < 1:
        raise InvalidParameter("n must be >= 1")
    embed, ds, dt = _complex_with_st(n)
    E, Eb = embed(euler(n)), embed(euler_bar(n))
    r2 = embed(DiffOp.multiplication(Polynomial.abs2(n)))
    ident = NormalOp.identity(2 * n + 2)
    return (embed(wirtinger_laplacian(n)) + (E + Eb + ident.scale(n)).scale(2.0) @ ds
            - (E - Eb).scale(2j) @ dt + r2 @ (ds @ ds + dt @ dt))


def sub_laplacian_real_to_complex(n: int) -> NormalOp:
    """:func:`sub_laplacian` with its (x, y) part rewritten in (z, z̄)."""
    op = sub_laplacian(n)
    nv = _nvars(n)
    embed, _, _ = _complex_with_st(n)
    out = NormalOp(nv)
    for ds in range(3):
        for dt in range(3 - ds):
            part = op.filter(lambda m, d: d[0] == ds and d[1] == dt)
            if part.is_zero():
                continue
            for m, d in part.terms:
                if m[0] or m[1]:
                    raise ValueError("coefficients depend on s or t")
            xy = part.substitute_derivatives({0: 1.0, 1: 1.0}).drop_variables(
                list(range(2, nv)))
            d_st = NormalOp.partial(nv, 0) ** ds @ NormalOp.partial(nv, 1) ** dt
            out = out + embed(real_to_complex(xy)) @ d_st
    return out


def sub_laplacian_reduced(nu: float, mu: float, n: int) -> DiffOp:
    """Fourier reduction ∂_s → iν, ∂_t → iμ of the sub-Laplacian, as a DiffOp on C^n.

    Any real (ν, μ) is accepted; the reduction is purely algebraic.
    """
    op = sub_laplacian(n).substitute_derivatives({S_INDEX: 1j * nu, T_INDEX: 1j * mu})
    xy = op.drop_variables(list(range(2, _nvars(n))))
    return real_to_complex(xy)


def heisenberg_sub_laplacian(n: int) -> NormalOp:
    """4Σ∂∂̄ − 2i(E−Ē)∂_t + |z|²∂_t² in the variables (t, z, z̄)."""
    return restrict_s_independent(sub_laplacian_complex(n))


def restrict_s_independent(op: NormalOp) -> NormalOp:
    """Action on functions with ∂_s f = 0, in the remaining variables."""
    return op.filter(lambda m, d: d[0] == 0).drop_variables(list(range(1, op.nvars)))
