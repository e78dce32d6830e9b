"""Rigid motions g.z = Az + b of C^n and the twisted action T_g f = j(g, ·) f(g·).

The automorphic factor is j(g, z) = exp(iφ(g, z)) with phase
φ(g, z) = −ν Re⟨z, g⁻¹.0⟩ + μ Im⟨z, g⁻¹.0⟩ and g⁻¹.0 = −A*b.
"""
from __future__ import annotations

import cmath
import json
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import DimensionMismatch, NotUnitary, require_positive_mu
from .function_space import Envelope, ExpPoly, Polynomial
from .operators import MagneticPotential, laplacian
from .polynomial import monomials_up_to

UNITARY_TOL = 1e-12


@dataclass(frozen=True, eq=False)
class Motion:
    """g = [A, b] ∈ U(n) ⋉ C^n."""

    A: np.ndarray
    b: np.ndarray

    def __post_init__(self):
        A = np.array(self.A, dtype=complex)
        b = np.array(self.b, dtype=complex).reshape(-1)
        if A.ndim != 2 or A.shape != (len(b), len(b)):
            raise DimensionMismatch(f"A has shape {A.shape}, b has length {len(b)}")
        dev = np.max(np.abs(A @ A.conj().T - np.eye(len(b))), initial=0.0)
        if dev > UNITARY_TOL:
            raise NotUnitary(f"|AA* - I| = {dev:.3g}")
        A.setflags(write=False)
        b.setflags(write=False)
        object.__setattr__(self, "A", A)
        object.__setattr__(self, "b", b)

    @property
    def n(self) -> int:
        return len(self.b)

    @classmethod
    def identity(cls, n: int) -> "Motion":
        return cls(np.eye(n), np.zeros(n))

    @classmethod
    def translation(cls, b: Sequence[complex]) -> "Motion":
        return cls(np.eye(len(b)), b)

    @classmethod
    def rotation(cls, A) -> "Motion":
        A = np.asarray(A, dtype=complex)
        return cls(A, np.zeros(A.shape[0]))

    @classmethod
    def from_json(cls, data) -> "Motion":
        if isinstance(data, str):
            data = json.loads(data)
        return cls(_parse_cmatrix(data["A"]), _parse_cvector(data["b"]))

    def to_json(self) -> dict:
        return {"A": [[[v.real, v.imag] for v in row] for row in self.A],
                "b": [[v.real, v.imag] for v in self.b]}

    def inverse_origin(self) -> np.ndarray:
        """g⁻¹.0 = −A*b."""
        return -self.A.conj().T @ self.b


def _parse_complex(v) -> complex:
    if isinstance(v, (list, tuple)):
        return complex(v[0], v[1])
    if isinstance(v, str):
        return complex(v.replace(" ", ""))
    return complex(v)


def _parse_cvector(v):
    return np.array([_parse_complex(x) for x in v], dtype=complex)


def _parse_cmatrix(m):
    return np.array([[_parse_complex(x) for x in row] for row in m], dtype=complex)


def _point(g: Motion, z) -> np.ndarray:
    z = np.asarray(z, dtype=complex).reshape(-1)
    if len(z) != g.n:
        raise DimensionMismatch(f"point of length {len(z)}, motion on C^{g.n}")
    return z


def act(g: Motion, z) -> np.ndarray:
    return g.A @ _point(g, z) + g.b


def motion_compose(g: Motion, h: Motion) -> Motion:
    """g∘h, so that act(g∘h, z) = act(g, act(h, z))."""
    if g.n != h.n:
        raise DimensionMismatch("motions on different spaces")
    return Motion(g.A @ h.A, g.A @ h.b + g.b)


def motion_inverse(g: Motion) -> Motion:
    Ainv = g.A.conj().T
    return Motion(Ainv, -Ainv @ g.b)


def random_unitary(n: int, rng: np.random.Generator) -> np.ndarray:
    """Haar-distributed unitary from the QR factorization of a Ginibre matrix."""
    m = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
    q, r = np.linalg.qr(m)
    d = np.diag(r)
    return q * (d / np.abs(d))


def random_motion(n: int, rng: np.random.Generator, box: float = 2.0,
                  rotate: bool = True) -> Motion:
    A = random_unitary(n, rng) if rotate else np.eye(n)
    b = rng.uniform(-box, box, n) + 1j * rng.uniform(-box, box, n)
    return Motion(A, b)


# phase and automorphic factor -------------------------------------------

def _phase_constant(nu, mu) -> complex:
    # φ = Re(K⟨z, c⟩) with K = −(ν + iμ)
    return -(nu + 1j * mu)


def phase(g: Motion, z, nu: float, mu: float) -> float:
    """−ν Re⟨z, g⁻¹.0⟩ + μ Im⟨z, g⁻¹.0⟩."""
    zc = np.vdot(g.inverse_origin(), _point(g, z))
    return float(-nu * zc.real + mu * zc.imag)


def phase_polynomial(g: Motion, nu: float, mu: float) -> Polynomial:
    """φ(g, ·) as a real-valued degree-1 polynomial in z, z̄."""
    c = g.inverse_origin()
    K = _phase_constant(nu, mu)
    return Polynomial.linear([K * v.conjugate() / 2 for v in c],
                             [K.conjugate() * v / 2 for v in c])


def autfactor(g: Motion, z, nu: float, mu: float) -> complex:
    return cmath.exp(1j * phase(g, z, nu, mu))


def chain_rule_defect(g: Motion, h: Motion, z, nu: float, mu: float) -> complex:
    """j(gh, z) / (j(g, hz) j(h, z)).

    This equals conj(j(g, h.0)), a unit constant independent of z that is 1
    only when Re((ν+iμ)⟨A b_h, b_g⟩) vanishes mod 2π.
    """
    return (autfactor(motion_compose(g, h), z, nu, mu)
            / (autfactor(g, act(h, z), nu, mu) * autfactor(h, z, nu, mu)))


def chain_rule_holds(g: Motion, h: Motion, z, nu: float, mu: float,
                     tol: float = 1e-12) -> bool:
    """The plain chain rule j(gh, z) == j(g, hz) j(h, z)."""
    lhs = autfactor(motion_compose(g, h), z, nu, mu)
    rhs = autfactor(g, act(h, z), nu, mu) * autfactor(h, z, nu, mu)
    return abs(lhs - rhs) <= tol


def projective_chain_rule_holds(g: Motion, h: Motion, z, nu: float, mu: float,
                                tol: float = 1e-12) -> bool:
    """j(gh, z) == j(g, hz) j(h, z) conj(j(g, h.0))."""
    lhs = autfactor(motion_compose(g, h), z, nu, mu)
    rhs = (autfactor(g, act(h, z), nu, mu) * autfactor(h, z, nu, mu)
           * autfactor(g, h.b, nu, mu).conjugate())
    return abs(lhs - rhs) <= tol


def action_multiplier(g: Motion, h: Motion, nu: float, mu: float) -> complex:
    """The scalar c with T_g T_h = c · T_{h∘g}; c = j(h, g.0)."""
    return autfactor(h, g.b, nu, mu)


# T_g on ExpPoly -----------------------------------------------------------

def compose_affine(g: Motion, f: ExpPoly) -> ExpPoly:
    """z ↦ f(Az + b) as an ExpPoly (the plain pullback g*f)."""
    if f.n != g.n:
        raise DimensionMismatch("function and motion dimensions differ")
    n, A, b = g.n, g.A, g.b
    images = []
    for j in range(n):
        images.append(Polynomial.linear(list(A[j]), [0] * n) + complex(b[j]))
    for j in range(n):
        images.append(Polynomial.linear([0] * n, list(A[j].conj()))
                      + complex(b[j]).conjugate())
    poly = f.poly.substitute(images)
    e = f.env
    alpha = e.alpha
    beta = np.asarray(e.beta, dtype=complex)
    gamma = np.asarray(e.gamma, dtype=complex)
    # α|Az+b|² = α|z|² + α(Aᵀb̄)·z + α(A*b)·z̄ + α|b|²
    new_beta = alpha * (A.T @ b.conj()) + A.T @ beta
    new_gamma = alpha * (A.conj().T @ b) + A.conj().T @ gamma
    new_delta = (e.delta + alpha * np.vdot(b, b).real + beta @ b + gamma @ b.conj())
    env = Envelope(alpha, tuple(new_beta), tuple(new_gamma), complex(new_delta))
    return ExpPoly(Polynomial(n, poly.terms), env)


def t_apply(g: Motion, f: ExpPoly, nu: float, mu: float) -> ExpPoly:
    """[T_g f](z) = j(g, z) f(g.z), exactly."""
    pulled = compose_affine(g, f)
    c = g.inverse_origin()
    K = _phase_constant(nu, mu)
    e = pulled.env
    env = Envelope(e.alpha,
                   tuple(bb + 0.5j * K * cc.conjugate() for bb, cc in zip(e.beta, c)),
                   tuple(gg + 0.5j * K.conjugate() * cc for gg, cc in zip(e.gamma, c)),
                   e.delta)
    return ExpPoly(pulled.poly, env)


def standard_envelopes(nu: float, mu: float, n: int) -> list[Envelope]:
    """The Hermite envelope e^{−(μ+iν)|z|²/2} and the real Gaussian e^{−μ|z|²/2}."""
    return [Envelope.gaussian(n, -(mu + 1j * nu) / 2), Envelope.gaussian(n, -mu / 2)]


def test_functions(nu: float, mu: float, n: int, degree_cap: int):
    """Monomials z^a z̄^b of total degree ≤ ``degree_cap`` on each standard envelope."""
    for env in standard_envelopes(nu, mu, n):
        for exps in monomials_up_to(2 * n, degree_cap):
            yield ExpPoly(Polynomial(n, {exps: 1.0}), env)


def intertwine_check(g: Motion, nu: float, mu: float, n: int, degree_cap: int = 4,
                     with_factor: bool = True, rtol: float = 1e-10) -> bool:
    """Δ T_g f == T_g Δ f over :func:`test_functions`.

    ``with_factor=False`` replaces T_g by the plain pullback f ↦ f∘g.
    """
    require_positive_mu(mu)
    if g.n != n:
        raise DimensionMismatch("motion and dimension differ")
    lap = laplacian(nu, mu, n)
    move = (lambda f: t_apply(g, f, nu, mu)) if with_factor else (lambda f: compose_affine(g, f))
    for f in test_functions(nu, mu, n, degree_cap):
        lhs = lap.apply(move(f))
        rhs = move(lap.apply(f))
        scale = max(lhs.normalized().poly.max_abs(), rhs.normalized().poly.max_abs(), 1.0)
        if not lhs.isclose(rhs, rtol=rtol, atol=rtol * scale):
            return False
    return True


# the potential 1-form ----------------------------------------------------

@dataclass(frozen=True)
class OneForm:
    """Σ_j p_j dz_j + q_j dz̄_j with polynomial components."""

    dz: tuple
    dzbar: tuple

    def isclose(self, other: "OneForm", rtol=1e-12, atol=1e-12) -> bool:
        return all(a.isclose(b, rtol=rtol, atol=atol)
                   for a, b in zip(self.dz + self.dzbar, other.dz + other.dzbar))

    def __add__(self, other: "OneForm") -> "OneForm":
        return OneForm(tuple(a + b for a, b in zip(self.dz, other.dz)),
                       tuple(a + b for a, b in zip(self.dzbar, other.dzbar)))


def theta(nu: float, mu: float, n: int) -> OneForm:
    """−(μ−iν)/2 Σ z̄_j dz_j + (μ+iν)/2 Σ z_j dz̄_j."""
    pot = MagneticPotential(nu, mu, n)
    return OneForm(tuple(pot.theta_dz), tuple(pot.theta_dzbar))


def pullback(form: OneForm, g: Motion) -> OneForm:
    """g*(form) under z ↦ Az + b, in the (dz, dz̄) basis."""
    n, A, b = g.n, g.A, g.b
    images = [Polynomial.linear(list(A[j]), [0] * n) + complex(b[j]) for j in range(n)]
    images += [Polynomial.linear([0] * n, list(A[j].conj())) + complex(b[j]).conjugate()
               for j in range(n)]
    moved_dz = [p.substitute(images) for p in form.dz]
    moved_dzbar = [p.substitute(images) for p in form.dzbar]
    # d(Az+b)_j = Σ_k A_jk dz_k and its conjugate
    dz = tuple(sum((moved_dz[j].scale(A[j, k]) for j in range(n)), Polynomial(n))
               for k in range(n))
    dzbar = tuple(sum((moved_dzbar[j].scale(A[j, k].conjugate()) for j in range(n)),
                      Polynomial(n)) for k in range(n))
    return OneForm(dz, dzbar)


def differential(p: Polynomial) -> OneForm:
    n = p.n
    return OneForm(tuple(p.deriv_z(j) for j in range(n)),
                   tuple(p.deriv_zbar(j) for j in range(n)))


def pullback_theta_check(g: Motion, nu: float, mu: float) -> bool:
    """g*θ == θ + i dφ(g, ·) component by component."""
    n = g.n
    th = theta(nu, mu, n)
    dphi = differential(phase_polynomial(g, nu, mu))
    rhs = th + OneForm(tuple(p.scale(1j) for p in dphi.dz),
                       tuple(p.scale(1j) for p in dphi.dzbar))
    return pullback(th, g).isclose(rhs)


def translation_commutation_scalar(g: Motion, h: Motion, nu: float, mu: float) -> complex:
    """c with T_g T_h = c T_h T_g, for commuting motions (e.g. translations)."""
    return action_multiplier(g, h, nu, mu) / action_multiplier(h, g, nu, mu)


def seeded_triples(n: int, count: int, seed: int):
    rng = np.random.default_rng(seed)
    for _ in range(count):
        g = random_motion(n, rng)
        h = random_motion(n, rng)
        z = rng.uniform(-2, 2, n) + 1j * rng.uniform(-2, 2, n)
        yield g, h, z

