"""Sparse multivariate polynomials with complex floating-point coefficients.

A :class:`Poly` in ``nvars`` variables stores a mapping from exponent tuples
to coefficients.  Values are immutable; every operation returns a new object
and prunes rounding noise below ``ZERO_TOL`` times the largest coefficient
involved.
"""
from __future__ import annotations

import itertools
from types import MappingProxyType
from typing import Iterable, Mapping, Sequence

from .errors import DimensionMismatch, IndexOutOfRange

ZERO_TOL = 1e-13

Key = tuple


def grlex_key(exps: Key):
    """Graded-lexicographic sort key: lower total degree first, then larger
    leading exponents first."""
    return (sum(exps), tuple(-e for e in exps))


def _prune(terms: dict, scale: float | None = None) -> dict:
    if not terms:
        return terms
    if scale is None:
        scale = max(abs(c) for c in terms.values())
    cut = ZERO_TOL * scale
    return {k: c for k, c in terms.items() if c != 0 and abs(c) > cut}


class Poly:
    """Polynomial in ``nvars`` commuting variables."""

    __slots__ = ("nvars", "_terms")

    def __init__(self, nvars: int, terms: Mapping[Key, complex] | None = None,
                 *, _scale: float | None = None):
        self.nvars = int(nvars)
        clean = {}
        for k, c in (terms or {}).items():
            k = tuple(int(e) for e in k)
            if len(k) != self.nvars:
                raise DimensionMismatch(
                    f"exponent {k} has length {len(k)}, expected {self.nvars}")
            if any(e < 0 for e in k):
                raise ValueError(f"negative exponent in {k}")
            clean[k] = clean.get(k, 0) + complex(c)
        self._terms = _prune(clean, _scale)

    # construction -----------------------------------------------------
    def _new(self, terms, scale=None):
        # internal fast path: keys are already valid exponent tuples
        obj = object.__new__(type(self))
        obj.nvars = self.nvars
        obj._terms = _prune({k: complex(c) for k, c in terms.items()}, scale)
        return obj

    @classmethod
    def constant(cls, nvars, c=1.0):
        return Poly(nvars, {(0,) * nvars: c})

    @classmethod
    def variable(cls, nvars, i, c=1.0):
        if not 0 <= i < nvars:
            raise IndexOutOfRange(f"variable {i} outside 0..{nvars - 1}")
        e = [0] * nvars
        e[i] = 1
        return Poly(nvars, {tuple(e): c})

    # basic queries ----------------------------------------------------
    @property
    def terms(self) -> Mapping[Key, complex]:
        return MappingProxyType(self._terms)

    def __len__(self):
        return len(self._terms)

    def is_zero(self) -> bool:
        return not self._terms

    def max_abs(self) -> float:
        return max((abs(c) for c in self._terms.values()), default=0.0)

    def degree(self) -> int:
        return max((sum(k) for k in self._terms), default=-1)

    def coefficient(self, exps) -> complex:
        return self._terms.get(tuple(exps), 0j)

    def sorted_items(self):
        return sorted(self._terms.items(), key=lambda kv: grlex_key(kv[0]))

    def __repr__(self):
        body = " + ".join(f"({c:.6g})*{k}" for k, c in self.sorted_items())
        return f"{type(self).__name__}({body or '0'})"

    # arithmetic -------------------------------------------------------
    def _check(self, other):
        if other.nvars != self.nvars:
            raise DimensionMismatch(
                f"{self.nvars} variables vs {other.nvars} variables")

    def _coerce(self, other):
        if isinstance(other, Poly):
            self._check(other)
            return other
        return self._new({(0,) * self.nvars: other})

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
        if c == 0:
            return self._new({})
        return self._new({k: c * v for k, v in self._terms.items()})

    def __mul__(self, other):
        if not isinstance(other, Poly):
            return self.scale(other)
        self._check(other)
        out: dict = {}
        for k1, c1 in self._terms.items():
            for k2, c2 in other._terms.items():
                k = tuple(a + b for a, b in zip(k1, k2))
                out[k] = out.get(k, 0) + c1 * c2
        return self._new(out)

    def __rmul__(self, other):
        return self.scale(other)

    def __pow__(self, p: int):
        if p < 0:
            raise ValueError("negative power")
        result = self._new({(0,) * self.nvars: 1.0})
        base = self
        while p:
            if p & 1:
                result = result * base
            base = base * base
            p >>= 1
        return result

    def __eq__(self, other):
        if not isinstance(other, Poly):
            return NotImplemented
        return self.nvars == other.nvars and self._terms == other._terms

    __hash__ = None

    def isclose(self, other, rtol=1e-12, atol=0.0) -> bool:
        """Coefficient-wise comparison relative to the larger operand."""
        other = self._coerce(other)
        ref = max(self.max_abs(), other.max_abs())
        keys = set(self._terms) | set(other._terms)
        lim = rtol * ref + atol
        return all(abs(self._terms.get(k, 0) - other._terms.get(k, 0)) <= lim
                   for k in keys)

    def conj_coeffs(self):
        return self._new({k: c.conjugate() for k, c in self._terms.items()})

    # calculus ---------------------------------------------------------
    def deriv(self, i: int, order: int = 1):
        if not 0 <= i < self.nvars:
            raise IndexOutOfRange(f"variable {i} outside 0..{self.nvars - 1}")
        out = {}
        for k, c in self._terms.items():
            e = k[i]
            if e < order:
                continue
            f = 1
            for m in range(order):
                f *= e - m
            nk = k[:i] + (e - order,) + k[i + 1:]
            out[nk] = out.get(nk, 0) + c * f
        return self._new(out)

    def evaluate(self, point: Sequence[complex]) -> complex:
        if len(point) != self.nvars:
            raise DimensionMismatch(
                f"point of length {len(point)}, expected {self.nvars}")
        total = 0j
        for k, c in self._terms.items():
            v = c
            for x, e in zip(point, k):
                if e:
                    v *= x ** e
            total += v
        return total

    def substitute(self, images: Sequence["Poly"]):
        """Compose with a polynomial map: variable ``i`` becomes ``images[i]``.

        All images must share one target variable count; the result lives in
        that target space.
        """
        if len(images) != self.nvars:
            raise DimensionMismatch("one image per variable required")
        target = images[0]
        cache: dict = {}

        def power(i, e):
            key = (i, e)
            if key not in cache:
                cache[key] = images[i] ** e
            return cache[key]

        acc: dict = {}
        for k, c in self._terms.items():
            term = target._new({(0,) * target.nvars: c})
            for i, e in enumerate(k):
                if e:
                    term = term * power(i, e)
            for tk, tc in term._terms.items():
                acc[tk] = acc.get(tk, 0) + tc
        return target._new(acc)

    def embed(self, nvars: int, positions: Sequence[int]):
        """Reinterpret in a larger variable space; variable ``i`` maps to
        ``positions[i]``."""
        out = {}
        for k, c in self._terms.items():
            nk = [0] * nvars
            for i, e in enumerate(k):
                nk[positions[i]] += e
            out[tuple(nk)] = c
        return Poly(nvars, out)


def monomials_up_to(nvars: int, degree: int) -> Iterable[Key]:
    for total in range(degree + 1):
        for combo in itertools.combinations_with_replacement(range(nvars), total):
            e = [0] * nvars
            for i in combo:
                e[i] += 1
            yield tuple(e)
