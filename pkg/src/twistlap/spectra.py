"""Eigenfunctions, eigenvalues and projection kernels of the twisted Laplacian.

The complex Hermite functions h_{r,s} are built three ways (Rodrigues
formula, ladder operators, explicit double sum); Rodrigues is canonical.
"""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Sequence

import numpy as np
from scipy import special

from . import kernels
from .errors import (DimensionMismatch, DomainTooSmall, InvalidParameter,
                     NonConvergence, PoleAtC, require_positive_mu)
from .function_space import Envelope, ExpPoly, Polynomial
from .operators import creation
from .polynomial import Poly

SERIES_RTOL = 1e-16
SERIES_MAX_TERMS = 500

ROUTES = ("rodrigues", "ladder", "explicit", "paper-verbatim")


# confluent hypergeometric function ------------------------------------

def _nonpositive_integer(v) -> int | None:
    v = complex(v)
    if v.imag == 0 and v.real <= 0 and v.real == math.floor(v.real):
        return int(v.real)
    return None


def hyp1f1_poly_coeffs(l: int, c) -> list[complex]:
    """Coefficients of the degree-l polynomial ₁F₁(−l; c; x)."""
    coeffs = [1 + 0j]
    term = 1 + 0j
    for k in range(l):
        term *= (-l + k) / ((c + k) * (k + 1))
        coeffs.append(term)
    return coeffs


def hyp1f1(a, c, x) -> complex:
    """Kummer's function ₁F₁(a; c; x) by its power series.

    Exact finite sum when ``a`` is a non-positive integer; otherwise the
    series is summed until a term drops below 1e−16 of the partial sum.
    """
    if _nonpositive_integer(c) is not None:
        raise PoleAtC(f"c = {c} is a non-positive integer")
    a, c, x = complex(a), complex(c), complex(x)
    m = _nonpositive_integer(a)
    if m is not None:
        total = 0j
        for coef in reversed(hyp1f1_poly_coeffs(-m, c)):
            total = total * x + coef
        return total
    value, used = kernels.hyp1f1_series(a, c, x, SERIES_RTOL, SERIES_MAX_TERMS)
    if used < 0:
        raise NonConvergence(f"1F1({a}; {c}; {x}) did not converge in "
                             f"{SERIES_MAX_TERMS} terms")
    return value


def _asymptotic_sum(p, q, step, terms):
    """Σ_s (p)_s (q)_s / s! · step^s, truncated before the terms grow."""
    total = 1 + 0j
    term = 1 + 0j
    last = math.inf
    for s in range(1, terms if terms is not None else 200):
        term = term * (p + s - 1) * (q + s - 1) / s * step
        size = abs(term)
        if size >= last:
            break
        total += term
        last = size
        if size < 1e-17 * abs(total):
            break
    return total


def hyp1f1_asymptotic(a, c, x: float, x_min: float = 30.0,
                      terms: int | None = None) -> complex:
    """Large-x form Γ(c){(−x)^{−a}/Γ(c−a) + e^x x^{a−c}/Γ(a)} of ₁F₁(a; c; x).

    Each bracketed term carries its asymptotic correction series; ``terms``
    caps how many series terms are used (``terms=1`` gives the bare leading
    form), otherwise the series is cut at its smallest term.  For real a and
    c the positive axis is a Stokes line; the two branches e^{±iπa} of
    (−x)^{−a} are averaged, which makes the result real.  Accuracy is then
    limited by the size of the subdominant x^{−a} term.
    """
    if x < x_min:
        raise DomainTooSmall(f"x = {x} is below x_min = {x_min}")
    a, c = complex(a), complex(c)
    x = float(x)
    log_mx = complex(math.log(x), math.pi)
    alg = (complex(special.rgamma(c - a)) * cmath.exp(-a * log_mx)
           * _asymptotic_sum(a, a - c + 1, -1.0 / x, terms))
    ra = complex(special.rgamma(a))
    expo = 0j
    if ra != 0:
        expo = (ra * cmath.exp(x + (a - c) * math.log(x))
                * _asymptotic_sum(c - a, 1 - a, 1.0 / x, terms))
    out = complex(special.gamma(c)) * (alg + expo)
    if a.imag == 0 and c.imag == 0:
        out = complex(out.real)
    return out


# radial eigenfunctions -------------------------------------------------

def _radial_alpha(nu, mu, envelope):
    if envelope == "verified":
        return -(mu + 1j * nu) / 2
    if envelope == "printed":
        return -(mu - 1j * nu) / 2
    raise ValueError(f"envelope must be 'verified' or 'printed', got {envelope!r}")


@dataclass(frozen=True)
class RadialFunction:
    """Evaluator for e^{alpha|z|²} ₁F₁(−λ; n; μ|z|²) at non-integer λ."""

    lam: complex
    alpha: complex
    mu: float
    n: int

    def __call__(self, z: Sequence[complex]) -> complex:
        if len(z) != self.n:
            raise DimensionMismatch(f"point of length {len(z)}, expected {self.n}")
        r2 = sum(abs(complex(v)) ** 2 for v in z)
        return cmath.exp(self.alpha * r2) * hyp1f1(-self.lam, self.n, self.mu * r2)


def radial_eigenfunction(lam, nu: float, mu: float, n: int,
                         envelope: str = "verified"):
    """Radial solution e^{−(μ+iν)|z|²/2} ₁F₁(−λ; n; μ|z|²).

    Returns an :class:`ExpPoly` for λ ∈ Z₊ and a :class:`RadialFunction`
    otherwise.  ``envelope="printed"`` swaps in the e^{−(μ−iν)|z|²/2} factor,
    which is an eigenfunction only when ν = 0.
    """
    require_positive_mu(mu)
    alpha = _radial_alpha(nu, mu, envelope)
    m = _nonpositive_integer(-complex(lam))
    if m is None:
        return RadialFunction(complex(lam), alpha, mu, n)
    l = -m
    x = Polynomial.abs2(n, mu)
    poly = Polynomial(n)
    for k, coef in enumerate(hyp1f1_poly_coeffs(l, n)):
        poly = poly + (x ** k).scale(coef)
    return ExpPoly(poly, Envelope.gaussian(n, alpha))


def radial_log_magnitude(lam, mu: float, n: int, x: float) -> float:
    """log |φ_λ| at μ|z|² = x from the asymptotic form of ₁F₁ (|e^{iν…}| = 1)."""
    return -x / 2 + math.log(abs(hyp1f1_asymptotic(-complex(lam), n, x)))


def radial_is_bounded(lam, mu: float, n: int) -> bool:
    """Whether φ_λ stays bounded as |z| → ∞.

    When 1/Γ(−λ) ≠ 0 the e^{x} branch of ₁F₁ dominates and |φ_λ| grows like
    e^{x/2}; otherwise only polynomial growth survives against e^{−x/2}.
    The two sample radii sit beyond the turning point of x^l e^{−x/2}.
    """
    require_positive_mu(mu)
    x1 = max(100.0, 8.0 * abs(complex(lam)) + 4.0 * n)
    if x1 > 300:
        raise InvalidParameter(f"|lambda| = {abs(lam)} too large to classify")
    return radial_log_magnitude(lam, mu, n, 2 * x1) <= radial_log_magnitude(lam, mu, n, x1)


# spectrum -------------------------------------------------------------

@dataclass(frozen=True)
class SpectrumLevel:
    l: int
    eigenvalue_full: float
    eigenvalue_tilde: float

    def to_json(self):
        return {"l": self.l, "eigenvalue": self.eigenvalue_full,
                "eigenvalue_full": self.eigenvalue_full,
                "eigenvalue_tilde": self.eigenvalue_tilde,
                "degeneracy": "infinite"}


def eigenvalue(l: int, mu: float, n: int) -> SpectrumLevel:
    """Level l: −2μ(2l+n) for Δ and μ(n/2+l) for Δ̃ = −Δ/4.  ν plays no role."""
    require_positive_mu(mu)
    if l < 0:
        raise InvalidParameter("level must be >= 0")
    return SpectrumLevel(l, -2.0 * mu * (2 * l + n), mu * (n / 2 + l))


# Hermite functions ----------------------------------------------------

@dataclass(frozen=True)
class HermiteIndex:
    r: tuple
    s: tuple

    def __post_init__(self):
        object.__setattr__(self, "r", tuple(int(v) for v in self.r))
        object.__setattr__(self, "s", tuple(int(v) for v in self.s))
        if len(self.r) != len(self.s):
            raise DimensionMismatch("r and s have different lengths")
        if any(v < 0 for v in self.r + self.s):
            raise InvalidParameter("indices must be non-negative")

    @property
    def n(self) -> int:
        return len(self.r)

    @property
    def level(self) -> int:
        return sum(self.r)


def _as_index(idx) -> HermiteIndex:
    if isinstance(idx, HermiteIndex):
        return idx
    r, s = idx
    return HermiteIndex(tuple(r), tuple(s))


def _ground_alpha(nu, mu):
    return -(mu + 1j * nu) / 2


@lru_cache(maxsize=4096)
def _gaussian_derivative(r: tuple, s: tuple, mu: float) -> ExpPoly:
    """D_z^r D_z̄^s e^{−μ|z|²}."""
    n = len(r)
    for j in range(n):
        if s[j]:
            lower = s[:j] + (s[j] - 1,) + s[j + 1:]
            return _gaussian_derivative(r, lower, mu).derive(j, "zbar")
    for j in range(n):
        if r[j]:
            lower = r[:j] + (r[j] - 1,) + r[j + 1:]
            return _gaussian_derivative(lower, s, mu).derive(j, "z")
    return ExpPoly.gaussian(n, -mu)


@lru_cache(maxsize=4096)
def _rodrigues(r, s, nu, mu) -> ExpPoly:
    n = len(r)
    d = _gaussian_derivative(r, s, mu)
    sign = (-1) ** (sum(r) + sum(s))
    poly = d.poly.scale(sign * mu ** (-sum(s)))
    return ExpPoly(poly, d.env * Envelope.gaussian(n, (mu - 1j * nu) / 2))


def hermite_rodrigues(idx, nu: float, mu: float) -> ExpPoly:
    """(−1)^{|r|+|s|} μ^{−|s|} e^{(μ−iν)|z|²/2} D_z^r D_z̄^s e^{−μ|z|²}."""
    require_positive_mu(mu)
    idx = _as_index(idx)
    return _rodrigues(idx.r, idx.s, float(nu), float(mu))


def ground_state(s, nu: float, mu: float) -> ExpPoly:
    """z^s e^{−(μ+iν)|z|²/2}, annihilated by every a⁻_j."""
    n = len(s)
    poly = Polynomial(n, {tuple(s) + (0,) * n: 1.0})
    return ExpPoly(poly, Envelope.gaussian(n, _ground_alpha(nu, mu)))


def hermite_ladder(idx, nu: float, mu: float) -> ExpPoly:
    """(a⁺_1)^{r_1} ⋯ (a⁺_n)^{r_n} applied to the ground state z^s e^{…}."""
    require_positive_mu(mu)
    idx = _as_index(idx)
    f = ground_state(idx.s, nu, mu)
    for j in reversed(range(idx.n)):
        a_plus = creation(j, nu, mu, idx.n)
        for _ in range(idx.r[j]):
            f = a_plus.apply(f)
    return f


def _multi_factorial(m):
    return math.prod(math.factorial(v) for v in m)


def _explicit_terms(idx: HermiteIndex, weight):
    n = idx.n
    terms = {}
    ranges = [range(min(a, b) + 1) for a, b in zip(idx.r, idx.s)]
    for k in np.ndindex(*[len(rg) for rg in ranges]):
        k = tuple(int(v) for v in k)
        comb = (_multi_factorial(idx.r) * _multi_factorial(idx.s)
                / (_multi_factorial(k)
                   * _multi_factorial([a - b for a, b in zip(idx.r, k)])
                   * _multi_factorial([a - b for a, b in zip(idx.s, k)])))
        key = (tuple(a - b for a, b in zip(idx.s, k))
               + tuple(a - b for a, b in zip(idx.r, k)))
        terms[key] = terms.get(key, 0) + weight(k) * comb
    return Polynomial(n, terms)


def hermite_explicit(idx, nu: float, mu: float, verbatim: bool = False) -> ExpPoly:
    """Finite double sum for h_{r,s}.

    The default uses the coefficients obtained by expanding the Rodrigues
    form, (−1)^{|k|} μ^{|r|−|k|} r!s!/(k!(r−k)!(s−k)!) z^{s−k} z̄^{r−k}.
    ``verbatim=True`` uses μ^{−|s|}(√μ)^{|r|+|s|−2|k|}(−1)^{Σ|r_j−s_j|}
    instead, which disagrees already at r=(1,), s=(0,).
    """
    require_positive_mu(mu)
    idx = _as_index(idx)
    rr, ss = sum(idx.r), sum(idx.s)
    if verbatim:
        sign = (-1) ** sum(abs(a - b) for a, b in zip(idx.r, idx.s))
        poly = _explicit_terms(
            idx, lambda k: mu ** (-ss) * math.sqrt(mu) ** (rr + ss - 2 * sum(k)) * sign)
    else:
        poly = _explicit_terms(idx, lambda k: (-1) ** sum(k) * mu ** (rr - sum(k)))
    return ExpPoly(poly, Envelope.gaussian(idx.n, _ground_alpha(nu, mu)))


def hermite(idx, nu: float, mu: float, route: str = "rodrigues") -> ExpPoly:
    if route == "rodrigues":
        return hermite_rodrigues(idx, nu, mu)
    if route == "ladder":
        return hermite_ladder(idx, nu, mu)
    if route == "explicit":
        return hermite_explicit(idx, nu, mu)
    if route == "paper-verbatim":
        return hermite_explicit(idx, nu, mu, verbatim=True)
    raise InvalidParameter(f"unknown route {route!r}; choose from {ROUTES}")


def hermite_indices(n: int, max_r: int, max_s: int, per_entry: bool = False):
    """All (r, s) with |r| ≤ max_r and |s| ≤ max_s (or every entry bounded
    when ``per_entry``)."""
    def vectors(bound):
        for v in np.ndindex(*([bound + 1] * n)):
            v = tuple(int(e) for e in v)
            if per_entry or sum(v) <= bound:
                yield v
    return [HermiteIndex(r, s) for r in vectors(max_r) for s in vectors(max_s)]


# projection kernels ---------------------------------------------------

def _omega(z, w) -> complex:
    return sum(complex(a) * complex(b).conjugate() for a, b in zip(z, w))


def jfactor(z, w, nu: float, mu: float) -> complex:
    """exp(−(iν/2)(|z|²−|w|²) + (μ/2)(⟨z,w⟩ − conj⟨z,w⟩))."""
    if len(z) != len(w):
        raise DimensionMismatch("z and w have different lengths")
    zw = _omega(z, w)
    return cmath.exp(-0.5j * nu * (_omega(z, z).real - _omega(w, w).real)
                     + 0.5 * mu * (zw - zw.conjugate()))


def kernel_prefactor(l: int, mu: float, n: int) -> float:
    """(μ/π)^n (n−1+l)!/((n−1)! l!), computed in log space."""
    return math.exp(n * math.log(mu / math.pi) + math.lgamma(n + l)
                    - math.lgamma(n) - math.lgamma(l + 1))


def kernel_eval(l: int, nu: float, mu: float, n: int, z, w) -> complex:
    """Projection kernel P_l(z, w) onto the level-l eigenspace."""
    require_positive_mu(mu)
    if len(z) != n or len(w) != n:
        raise DimensionMismatch("points must have length n")
    d2 = sum(abs(complex(a) - complex(b)) ** 2 for a, b in zip(z, w))
    return (kernel_prefactor(l, mu, n) * jfactor(z, w, nu, mu)
            * math.exp(-mu * d2 / 2) * hyp1f1(-l, n, mu * d2))


def kernel_conjugated_eval(l: int, nu: float, mu: float, n: int, z, w) -> complex:
    """e^{−iν|z|²/2} P_l^{0,μ}(z, w) e^{iν|w|²/2}: the kernel transported from
    ν = 0 by the gauge factor e^{−iν|z|²/2}."""
    z2 = sum(abs(complex(v)) ** 2 for v in z)
    w2 = sum(abs(complex(v)) ** 2 for v in w)
    return (cmath.exp(-0.5j * nu * z2) * kernel_eval(l, 0.0, mu, n, z, w)
            * cmath.exp(0.5j * nu * w2))


def _distance_poly(n: int, nvars: int, zpos, zbpos, wpos, wbpos) -> Poly:
    out = Poly(nvars)
    for j in range(n):
        d = Poly.variable(nvars, zpos[j]) - Poly.variable(nvars, wpos[j])
        db = Poly.variable(nvars, zbpos[j]) - Poly.variable(nvars, wbpos[j])
        out = out + d * db
    return out


@lru_cache(maxsize=256)
def kernel_zw_polynomial(l: int, mu: float, n: int) -> Poly:
    """Prefactor times ₁F₁(−l; n; μ|z−w|²) as a polynomial in the 4n
    variables (z, z̄, w, w̄)."""
    nv = 4 * n
    r = range(n)
    d2 = _distance_poly(n, nv, list(r), [n + j for j in r],
                        [2 * n + j for j in r], [3 * n + j for j in r])
    out = Poly(nv)
    for k, coef in enumerate(hyp1f1_poly_coeffs(l, n)):
        out = out + (d2 ** k).scale(coef * mu ** k)
    return out.scale(kernel_prefactor(l, mu, n))


def kernel_in_w(l: int, nu: float, mu: float, n: int, z) -> ExpPoly:
    """w ↦ P_l(z, w) for fixed z, as an ExpPoly in w.

    The Gaussian part of the kernel collapses to
    e^{−(μ+iν)|z|²/2} e^{−(μ−iν)|w|²/2} e^{μ⟨z,w⟩}.
    """
    require_positive_mu(mu)
    if len(z) != n:
        raise DimensionMismatch("z must have length n")
    z = [complex(v) for v in z]
    base = kernel_zw_polynomial(l, float(mu), n)
    images = ([Polynomial.one(n, v) for v in z]
              + [Polynomial.one(n, v.conjugate()) for v in z]
              + [Polynomial.z(n, j) for j in range(n)]
              + [Polynomial.zbar(n, j) for j in range(n)])
    poly = base.substitute(images)
    env = Envelope(-(mu - 1j * nu) / 2, (0j,) * n, tuple(mu * v for v in z),
                   -(mu + 1j * nu) / 2 * sum(abs(v) ** 2 for v in z))
    return ExpPoly(poly, env)
