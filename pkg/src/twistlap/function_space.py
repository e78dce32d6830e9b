"""Polynomials in (z, z̄) and polynomial-times-Gaussian functions on C^n.

An :class:`ExpPoly` is ``P(z, z̄) * exp(alpha |z|^2 + beta.z + gamma.z̄ + delta)``.
This class is closed under ∂/∂z_j, ∂/∂z̄_j, multiplication by polynomials and
by other members, so every operator used in this package acts on it exactly.

Indices ``j`` are zero-based throughout the library API.
"""
from __future__ import annotations

import cmath
import json
from dataclasses import dataclass
from typing import Mapping, Sequence

from .errors import DimensionMismatch, EnvelopeMismatch, IndexOutOfRange
from .polynomial import Poly

ENV_TOL = 1e-12


class Polynomial(Poly):
    """Polynomial in z_1..z_n, z̄_1..z̄_n.

    Exponent keys are flat tuples ``a + b`` of length 2n, ``a`` for the
    holomorphic and ``b`` for the antiholomorphic variables.
    """

    __slots__ = ()

    def __init__(self, n: int, terms=None, *, _scale=None):
        if n < 1:
            raise DimensionMismatch(f"dimension must be >= 1, got {n}")
        super().__init__(2 * n, terms, _scale=_scale)

    @property
    def n(self) -> int:
        return self.nvars // 2

    @classmethod
    def from_ab(cls, n: int, terms: Mapping[tuple, complex]):
        return cls(n, {tuple(a) + tuple(b): c for (a, b), c in terms.items()})

    @classmethod
    def one(cls, n: int, c=1.0):
        return cls(n, {(0,) * (2 * n): c})

    @classmethod
    def z(cls, n: int, j: int, c=1.0):
        _check_index(n, j)
        e = [0] * (2 * n)
        e[j] = 1
        return cls(n, {tuple(e): c})

    @classmethod
    def zbar(cls, n: int, j: int, c=1.0):
        _check_index(n, j)
        e = [0] * (2 * n)
        e[n + j] = 1
        return cls(n, {tuple(e): c})

    @classmethod
    def abs2(cls, n: int, c=1.0):
        """c * |z|^2."""
        terms = {}
        for j in range(n):
            e = [0] * (2 * n)
            e[j] = e[n + j] = 1
            terms[tuple(e)] = c
        return cls(n, terms)

    @classmethod
    def linear(cls, beta: Sequence[complex], gamma: Sequence[complex]):
        """sum_j beta_j z_j + gamma_j z̄_j."""
        n = len(beta)
        out = cls(n)
        for j in range(n):
            out = out + cls.z(n, j, beta[j]) + cls.zbar(n, j, gamma[j])
        return out

    def items_ab(self):
        n = self.n
        for k, c in self.sorted_items():
            yield k[:n], k[n:], c

    def deriv_z(self, j: int):
        _check_index(self.n, j)
        return self.deriv(j)

    def deriv_zbar(self, j: int):
        _check_index(self.n, j)
        return self.deriv(self.n + j)

    def conjugate(self):
        """Pointwise complex conjugate."""
        n = self.n
        return Polynomial(n, {k[n:] + k[:n]: c.conjugate()
                              for k, c in self._terms.items()})

    def is_real_valued(self, tol=1e-12) -> bool:
        return self.isclose(self.conjugate(), rtol=tol)

    def real_part(self):
        return (self + self.conjugate()).scale(0.5)

    def imag_part(self):
        return (self - self.conjugate()).scale(-0.5j)

    def at(self, z: Sequence[complex]) -> complex:
        z = list(z)
        if len(z) != self.n:
            raise DimensionMismatch(f"point of length {len(z)}, expected {self.n}")
        return self.evaluate(z + [w.conjugate() for w in map(complex, z)])


def _check_index(n, j):
    if not 0 <= j < n:
        raise IndexOutOfRange(f"index {j} outside 0..{n - 1}")


def _c(x) -> complex:
    return complex(x)


@dataclass(frozen=True)
class Envelope:
    """exp(alpha |z|^2 + sum beta_j z_j + sum gamma_j z̄_j + delta)."""

    alpha: complex
    beta: tuple
    gamma: tuple
    delta: complex = 0j

    def __post_init__(self):
        object.__setattr__(self, "alpha", _c(self.alpha))
        object.__setattr__(self, "beta", tuple(_c(b) for b in self.beta))
        object.__setattr__(self, "gamma", tuple(_c(g) for g in self.gamma))
        object.__setattr__(self, "delta", _c(self.delta))
        if len(self.beta) != len(self.gamma):
            raise DimensionMismatch("beta and gamma lengths differ")

    @classmethod
    def gaussian(cls, n: int, alpha=0.0, delta=0.0):
        return cls(alpha, (0j,) * n, (0j,) * n, delta)

    @property
    def n(self) -> int:
        return len(self.beta)

    @property
    def integrable(self) -> bool:
        return self.alpha.real < 0

    def shape_close(self, other: "Envelope", tol=ENV_TOL) -> bool:
        """Equality of alpha, beta, gamma; delta is a constant factor."""
        if self.n != other.n:
            return False
        pairs = [(self.alpha, other.alpha), *zip(self.beta, other.beta),
                 *zip(self.gamma, other.gamma)]
        return all(abs(a - b) <= tol for a, b in pairs)

    def close(self, other: "Envelope", tol=ENV_TOL) -> bool:
        return self.shape_close(other, tol) and abs(self.delta - other.delta) <= tol

    def __mul__(self, other: "Envelope") -> "Envelope":
        if self.n != other.n:
            raise DimensionMismatch("envelope dimensions differ")
        return Envelope(self.alpha + other.alpha,
                        tuple(a + b for a, b in zip(self.beta, other.beta)),
                        tuple(a + b for a, b in zip(self.gamma, other.gamma)),
                        self.delta + other.delta)

    def conjugate(self) -> "Envelope":
        return Envelope(self.alpha.conjugate(),
                        tuple(g.conjugate() for g in self.gamma),
                        tuple(b.conjugate() for b in self.beta),
                        self.delta.conjugate())

    def exponent(self, z: Sequence[complex]) -> complex:
        z = [complex(v) for v in z]
        return (self.alpha * sum(abs(v) ** 2 for v in z)
                + sum(b * v for b, v in zip(self.beta, z))
                + sum(g * v.conjugate() for g, v in zip(self.gamma, z))
                + self.delta)

    def to_json(self):
        return {"alpha": _pair(self.alpha),
                "beta": [_pair(b) for b in self.beta],
                "gamma": [_pair(g) for g in self.gamma],
                "delta": _pair(self.delta)}

    @classmethod
    def from_json(cls, d):
        return cls(_unpair(d["alpha"]), [_unpair(b) for b in d["beta"]],
                   [_unpair(g) for g in d["gamma"]], _unpair(d.get("delta", [0, 0])))


def _pair(c: complex):
    return [c.real, c.imag]


def _unpair(p) -> complex:
    return complex(p[0], p[1])


class ExpPoly:
    """P(z, z̄) * exp(Q) for a :class:`Polynomial` P and :class:`Envelope` Q."""

    __slots__ = ("poly", "env")

    def __init__(self, poly: Polynomial, env: Envelope | None = None):
        if env is None:
            env = Envelope.gaussian(poly.n)
        if poly.n != env.n:
            raise DimensionMismatch(
                f"polynomial in {poly.n} variables, envelope in {env.n}")
        self.poly = poly
        self.env = env

    @classmethod
    def gaussian(cls, n, alpha, c=1.0):
        return cls(Polynomial.one(n, c), Envelope.gaussian(n, alpha))

    @property
    def n(self):
        return self.poly.n

    def __repr__(self):
        return f"ExpPoly({self.poly!r}, {self.env!r})"

    def is_zero(self) -> bool:
        return self.poly.is_zero()

    def rebase(self, delta: complex) -> "ExpPoly":
        """Same function with envelope constant ``delta``; the difference is
        absorbed into the coefficients."""
        shift = self.env.delta - delta
        env = Envelope(self.env.alpha, self.env.beta, self.env.gamma, delta)
        return ExpPoly(self.poly.scale(cmath.exp(shift)), env)

    def normalized(self) -> "ExpPoly":
        return self.rebase(0j)

    def _aligned(self, other: "ExpPoly"):
        if self.n != other.n:
            raise DimensionMismatch("dimensions differ")
        if not self.env.shape_close(other.env):
            raise EnvelopeMismatch(f"{self.env} vs {other.env}")
        if self.env.delta == other.env.delta:
            return other
        return other.rebase(self.env.delta)

    def __add__(self, other: "ExpPoly") -> "ExpPoly":
        other = self._aligned(other)
        return ExpPoly(self.poly + other.poly, self.env)

    def __neg__(self):
        return ExpPoly(-self.poly, self.env)

    def __sub__(self, other):
        return self + (-other)

    def scale(self, c) -> "ExpPoly":
        return ExpPoly(self.poly.scale(c), self.env)

    def mul_poly(self, p: Polynomial) -> "ExpPoly":
        if p.n != self.n:
            raise DimensionMismatch("dimensions differ")
        return ExpPoly(self.poly * p, self.env)

    def __mul__(self, other):
        if isinstance(other, ExpPoly):
            return ExpPoly(self.poly * other.poly, self.env * other.env)
        if isinstance(other, Polynomial):
            return self.mul_poly(other)
        return self.scale(other)

    __rmul__ = __mul__

    def conjugate(self) -> "ExpPoly":
        return ExpPoly(self.poly.conjugate(), self.env.conjugate())

    def derive(self, j: int, kind: str = "z") -> "ExpPoly":
        n = self.n
        _check_index(n, j)
        alpha = self.env.alpha
        if kind == "z":
            dp = self.poly.deriv(j)
            factor = Polynomial.zbar(n, j, alpha) + self.env.beta[j]
        elif kind == "zbar":
            dp = self.poly.deriv(n + j)
            factor = Polynomial.z(n, j, alpha) + self.env.gamma[j]
        else:
            raise ValueError(f"kind must be 'z' or 'zbar', got {kind!r}")
        return ExpPoly(dp + self.poly * factor, self.env)

    def evaluate(self, z: Sequence[complex]) -> complex:
        if len(z) != self.n:
            raise DimensionMismatch(f"point of length {len(z)}, expected {self.n}")
        return self.poly.at(z) * cmath.exp(self.env.exponent(z))

    __call__ = evaluate

    def isclose(self, other: "ExpPoly", rtol=1e-12, atol=0.0) -> bool:
        """Equality as functions: envelopes must agree in shape and the
        coefficients (after absorbing delta) within ``rtol``."""
        if self.n != other.n or not self.env.shape_close(other.env):
            return False
        a, b = self.normalized().poly, other.normalized().poly
        return a.isclose(b, rtol=rtol, atol=atol)

    # serialization ----------------------------------------------------
    def to_json(self) -> dict:
        return {"n": self.n,
                "envelope": self.env.to_json(),
                "terms": [{"a": list(a), "b": list(b), "c": _pair(c)}
                          for a, b, c in self.poly.items_ab()]}

    def dumps(self) -> str:
        return json.dumps(self.to_json())

    @classmethod
    def from_json(cls, d) -> "ExpPoly":
        n = int(d["n"])
        terms = {}
        for t in d["terms"]:
            if len(t["a"]) != n or len(t["b"]) != n:
                raise DimensionMismatch("term exponent length differs from n")
            key = tuple(t["a"]) + tuple(t["b"])
            terms[key] = terms.get(key, 0) + _unpair(t["c"])
        env = Envelope.from_json(d["envelope"])
        return cls(Polynomial(n, terms), env)

    @classmethod
    def loads(cls, s: str) -> "ExpPoly":
        return cls.from_json(json.loads(s))

    def to_csv(self) -> str:
        n = self.n
        header = ([f"a{j + 1}" for j in range(n)] + [f"b{j + 1}" for j in range(n)]
                  + ["re", "im"])
        lines = [",".join(header)]
        for a, b, c in self.poly.items_ab():
            lines.append(",".join([*map(str, a), *map(str, b), repr(c.real), repr(c.imag)]))
        return "\n".join(lines) + "\n"


# functional API ---------------------------------------------------------

def add(f: ExpPoly, g: ExpPoly) -> ExpPoly:
    return f + g


def mul_poly(f: ExpPoly, p: Polynomial) -> ExpPoly:
    return f.mul_poly(p)


def derive(f: ExpPoly, j: int, kind: str = "z") -> ExpPoly:
    return f.derive(j, kind)


def evaluate(f: ExpPoly, z: Sequence[complex]) -> complex:
    return f.evaluate(z)
