"""Closed-form Gaussian integrals over C^n: moments, L² inner products and
the level projections z ↦ ∫ P_l(z, w) f(w) dm(w)."""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

from . import kernels
from .errors import DimensionMismatch, NonIntegrable, require_positive_mu
from .function_space import Envelope, ExpPoly, Polynomial
from .spectra import kernel_zw_polynomial

EPS = 2.220446049250313e-16


def _require_integrable(alpha: complex):
    if complex(alpha).real >= 0:
        raise NonIntegrable(f"Re(alpha) = {complex(alpha).real} >= 0")


def gaussian_moment(a: int, b: int, alpha: complex, beta: complex = 0j,
                    gamma: complex = 0j) -> complex:
    """∫_C z^a z̄^b e^{α|z|² + βz + γz̄} dm(z)."""
    _require_integrable(alpha)
    if a < 0 or b < 0:
        raise ValueError("exponents must be non-negative")
    return kernels.gaussian_moment_1d(int(a), int(b), complex(alpha),
                                      complex(beta), complex(gamma))


def gaussian_moment_nd(a, b, alpha, beta=None, gamma=None) -> complex:
    """Product of one-dimensional moments over the coordinates of C^n."""
    n = len(a)
    beta = beta if beta is not None else [0j] * n
    gamma = gamma if gamma is not None else [0j] * n
    return math.prod(gaussian_moment(a[j], b[j], alpha, beta[j], gamma[j])
                     for j in range(n))


@dataclass(frozen=True)
class InnerProductReport:
    value: complex
    absolute_error_estimate: float


def inner_product(f: ExpPoly, g: ExpPoly) -> InnerProductReport:
    """⟨f, g⟩ = ∫ f conj(g) dm.

    The error estimate is a rounding bound proportional to the sum of the
    absolute values of the individual moment contributions.
    """
    if f.n != g.n:
        raise DimensionMismatch("functions on different spaces")
    env = f.env * g.env.conjugate()
    _require_integrable(env.alpha)
    ef, cf = zip(*f.poly.terms.items()) if len(f.poly) else ((), ())
    eg, cg = zip(*g.poly.terms.items()) if len(g.poly) else ((), ())
    value, mag = kernels.pair_moment_sum(list(ef), list(cf), list(eg), list(cg),
                                         env.alpha, list(env.beta), list(env.gamma))
    scale = cmath.exp(env.delta)
    terms = max(1, len(ef) * len(eg))
    err = 64 * EPS * mag * abs(scale) * (1 + math.log2(terms))
    return InnerProductReport(complex(value * scale), float(err))


def norm2(f: ExpPoly) -> float:
    return inner_product(f, f).value.real


def _moment_poly(c: int, d: int, K: complex, beta: complex, gamma0: complex,
                 slope: complex, n: int, j: int) -> Polynomial:
    """Σ_k C(d,k) c!/(c−k)! K^{c+d−k} β^{d−k} (γ₀ + slope·z_j)^{c−k}.

    This is the w_j-moment of w^c w̄^d without its πK e^{Kβγ} factor, with a
    z-dependent γ = γ₀ + slope·z_j.
    """
    g = Polynomial.z(n, j, slope) + gamma0
    out = Polynomial(n)
    for k in range(min(c, d) + 1):
        w = math.comb(d, k) * math.perm(c, k) * K ** (c + d - k) * beta ** (d - k)
        out = out + (g ** (c - k)).scale(w)
    return out


def project_level(f: ExpPoly, l: int, nu: float, mu: float, n: int | None = None) -> ExpPoly:
    """z ↦ ∫ P_l(z, w) f(w) dm(w), exactly.

    The kernel contributes e^{−(μ−iν)|w|²/2 + μ⟨z, w⟩}, so in w the
    integrand has α = α_f − (μ−iν)/2, β = β_f and γ_j = γ_{f,j} + μ z_j.
    Integrating leaves e^{−(μ+iν)|z|²/2} times e^{K Σ β_j(γ_{f,j} + μ z_j)}
    with K = −1/α, times a polynomial in (z, z̄).
    """
    require_positive_mu(mu)
    n = f.n if n is None else n
    if f.n != n:
        raise DimensionMismatch("function dimension differs from n")
    alpha_w = f.env.alpha - (mu - 1j * nu) / 2
    _require_integrable(alpha_w)
    K = -1.0 / alpha_w
    beta = f.env.beta
    gamma0 = f.env.gamma

    kernel = kernel_zw_polynomial(int(l), float(mu), n)
    f_in_w = f.poly.embed(4 * n, [2 * n + j for j in range(2 * n)])
    integrand = kernel * f_in_w

    cache: dict = {}

    def moment(j, c, d):
        key = (j, c, d)
        if key not in cache:
            cache[key] = _moment_poly(c, d, K, beta[j], gamma0[j], mu, n, j)
        return cache[key]

    acc: dict = {}
    for exps, coef in integrand.terms.items():
        zpart = exps[:2 * n]
        term = Polynomial(n, {zpart: coef})
        for j in range(n):
            term = term * moment(j, exps[2 * n + j], exps[3 * n + j])
        for k, v in term.terms.items():
            acc[k] = acc.get(k, 0) + v
    poly = Polynomial(n, acc).scale((math.pi * K) ** n)
    env = Envelope(-(mu + 1j * nu) / 2,
                   tuple(K * mu * b for b in beta), (0j,) * n,
                   f.env.delta + K * sum(b * g for b, g in zip(beta, gamma0)))
    return ExpPoly(poly, env)


@dataclass(frozen=True)
class Decomposition:
    levels: tuple
    projections: tuple
    norms2: tuple
    residual_norm: float
    total_norm2: float

    def to_json(self) -> dict:
        return {"levels": [{"level": l, "norm2": v} for l, v in zip(self.levels, self.norms2)],
                "total_norm2": self.total_norm2,
                "residual": self.residual_norm}


def residual(f: ExpPoly, parts) -> ExpPoly:
    out = f
    for p in parts:
        out = out - p
    return out


def decompose(f: ExpPoly, levels: int, nu: float, mu: float) -> Decomposition:
    """Projections of f onto levels 0..levels−1, their squared norms and
    ‖f − Σ projections‖."""
    projections = tuple(project_level(f, l, nu, mu) for l in range(levels))
    norms = tuple(norm2(p) for p in projections)
    total = norm2(f)
    try:
        res = residual(f, projections)
        res_norm = math.sqrt(max(norm2(res), 0.0))
    except ValueError:
        # envelopes differ in shape: expand ‖f − S‖² with S = Σ projections
        s = projections[0]
        for p in projections[1:]:
            s = s + p
        r2 = total - 2 * inner_product(f, s).value.real + norm2(s)
        res_norm = math.sqrt(max(r2, 0.0))
    return Decomposition(tuple(range(levels)), projections, norms, res_norm, total)
