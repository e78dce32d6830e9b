"""Property suites behind ``twistlap verify``.

Each suite returns a :class:`VerificationReport`.  Known disagreements
between printed formulas and the verified ones are emitted as discrepancy
records; they document rather than fail.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from . import heisenberg as H
from . import integrate as I
from . import spectra as S
from . import symmetry as Y
from .function_space import Envelope, ExpPoly, Polynomial
from .operators import (DiffOp, annihilation, conjugate_by_gaussian, creation,
                        eigencheck, laplacian, magnetic_schrodinger)

SUITES = ("group", "fields", "operators", "ladder", "orthogonality", "kernel",
          "symmetry")


@dataclass
class VerificationReport:
    suite: str
    cases: dict = field(default_factory=dict)
    discrepancies: list = field(default_factory=list)

    @property
    def cases_run(self) -> int:
        return len(self.cases)

    @property
    def cases_passed(self) -> int:
        return sum(self.cases.values())

    @property
    def passed(self) -> bool:
        return self.cases_passed == self.cases_run

    def check(self, key: str, ok) -> bool:
        self.cases[key] = bool(ok)
        return bool(ok)

    def discrepancy(self, identity, location, observed, expected):
        self.discrepancies.append({"identity": identity, "paper_location": location,
                                   "observed": observed, "expected": expected})

    def merge(self, other: "VerificationReport"):
        for k, v in other.cases.items():
            self.cases[f"{other.suite}/{k}"] = v
        self.discrepancies.extend(other.discrepancies)

    def to_json(self) -> dict:
        return {"suite": self.suite,
                "cases_run": self.cases_run,
                "cases_passed": self.cases_passed,
                "failed": sorted(k for k, v in self.cases.items() if not v),
                "discrepancies": sorted(self.discrepancies,
                                        key=lambda d: (d["identity"], d["observed"]))}


def _c(z: complex) -> str:
    return f"{z.real:.12g}{z.imag:+.12g}i"


# group and vector fields -------------------------------------------------

def verify_group(n: int = 1, seed: int = 0, **_) -> VerificationReport:
    rep = VerificationReport("group")
    rng = np.random.default_rng(seed)
    for k in range(10):
        a, b, c = (H.random_element(n, rng) for _ in range(3))
        lhs = H.group_mul(H.group_mul(a, b), c)
        rep.check(f"associativity/{k}", lhs.isclose(H.group_mul(a, H.group_mul(b, c))))
        rep.check(f"inverse/{k}", H.group_mul(a, H.group_inv(a)).isclose(H.NOmegaElement.identity(n)))
        rep.check(f"homomorphism/{k}", H.project_q(H.group_mul(a, b)).isclose(
            H.heis_mul(H.project_q(a), H.project_q(b))))
        central = H.NOmegaElement(rng.uniform(-2, 2), (0,) * n)
        rep.check(f"centrality/{k}", H.group_mul(central, a).isclose(H.group_mul(a, central)))
        rep.check(f"cocycle/{k}", H.cocycle_check(a.z, b.z, c.z))
    a = H.NOmegaElement(1j, (1.0,) + (0,) * (n - 1))
    printed = H.group_mul(a, H.group_inv_printed(a))
    if not printed.isclose(H.NOmegaElement.identity(n)):
        rep.discrepancy("inverse (-z0 - <z,z>; -z) of (z0; z)",
                        "inverse element of the omega-law",
                        f"(i;1)*inverse = ({_c(printed.z0)}; 0)", "(0; 0)")
    basis = H.left_invariant_basis(n)
    for (p, q), br in sorted(H.commutator_table(basis).items()):
        rep.check(f"commutator/[{p},{q}]", br == H.expected_commutator(basis, p, q))
    return rep


def verify_fields(n: int = 1, seed: int = 0, **_) -> VerificationReport:
    rep = VerificationReport("fields")
    rng = np.random.default_rng(seed)
    basis = H.left_invariant_basis(n)
    explicit = H.explicit_fields(n)
    for f, e in zip(basis.fields(), explicit.fields()):
        rep.check(f"jacobian_column/{e.name}", f == e)
    for k in range(10):
        g = H.random_element(n, rng)
        for f in basis.fields():
            rep.check(f"left_invariance/{f.name}/{k}", H.left_invariance_check(f, g))
    g = H.NOmegaElement(0, (1.0,) + (0,) * (n - 1))
    bare = H.VectorField.coordinate(2 * n + 2, H.x_index(0))
    rep.check("left_invariance/bare_dx1_rejected", not H.left_invariance_check(bare, g))
    rep.check("sub_laplacian/explicit", H.sub_laplacian(n).isclose(H.sub_laplacian_explicit(n)))
    rep.check("sub_laplacian/complex",
              H.sub_laplacian_real_to_complex(n).isclose(H.sub_laplacian_complex(n)))
    rep.check("sub_laplacian/heisenberg_restriction",
              H.restrict_s_independent(H.sub_laplacian_real_to_complex(n)).isclose(
                  H.heisenberg_sub_laplacian(n)))
    X, Y_ = H.generator_fields(n, "projected")
    T = basis.T
    rep.check("heisenberg_generators/projected", H.bracket(X[0], Y_[0]) == T.scale(-2.0))
    X, Y_ = H.generator_fields(n, "printed")
    br = H.bracket(X[0], Y_[0])
    if br != T.scale(-2.0):
        coef = br.coefficients[H.T_INDEX].coefficient((0,) * (2 * n + 2))
        rep.discrepancy("[X~_j, Y~_j] for X~ = -y dt + dx, Y~ = x dt + dy",
                        "generators of the Heisenberg algebra",
                        f"{coef.real:g} T", "-2 T")
    return rep


# operators --------------------------------------------------------------

def verify_operators(n: int = 1, nu: float = 0.0, mu: float = 1.0, **_) -> VerificationReport:
    rep = VerificationReport("operators")
    lap = laplacian(nu, mu, n)
    ladder = DiffOp(n)
    for j in range(n):
        ladder = ladder + creation(j, nu, mu, n) @ annihilation(j, nu, mu, n)
    rep.check("factorization", lap.isclose(ladder.scale(-4.0) - DiffOp.identity(n, 2 * mu * n)))
    rep.check("magnetic_schrodinger", lap.isclose(-magnetic_schrodinger(nu, mu, n)))
    rep.check("fourier_reduction", lap.isclose(H.sub_laplacian_reduced(nu, mu, n)))
    rep.check("gauge_conjugation",
              lap.isclose(conjugate_by_gaussian(laplacian(0.0, mu, n), 0.5j * nu)))
    for j in range(n):
        for k in range(n):
            comm = annihilation(j, nu, mu, n).commutator(creation(k, nu, mu, n))
            expected = DiffOp.identity(n, mu if j == k else 0.0)
            rep.check(f"ladder_commutator/{j}{k}", comm.isclose(expected, atol=1e-12))
    if n > 1:
        rep.discrepancy("[a-_j, a+_j]", "ladder operator commutation relation",
                        f"{mu:g} Id", f"{n * mu:g} Id")
    return rep


# ladder and eigenfunctions ----------------------------------------------

def verify_ladder(n: int = 1, nu: float = 0.0, mu: float = 1.0, max_degree: int = 3,
                  **_) -> VerificationReport:
    rep = VerificationReport("ladder")
    lap = laplacian(nu, mu, n)
    for idx in S.hermite_indices(n, max_degree, max_degree):
        key = f"{idx.r}{idx.s}"
        h = S.hermite_rodrigues(idx, nu, mu)
        lam = eigencheck(lap, h)
        expected = S.eigenvalue(idx.level, mu, n).eigenvalue_full
        rep.check(f"eigenvalue/{key}", lam is not None and abs(lam - expected) <= 1e-10 * abs(expected))
        rep.check(f"route/ladder/{key}", h.isclose(S.hermite_ladder(idx, nu, mu), 1e-10))
        rep.check(f"route/explicit/{key}", h.isclose(S.hermite_explicit(idx, nu, mu), 1e-10))
        for j in range(n):
            down = annihilation(j, nu, mu, n).apply(h)
            if idx.r[j] == 0:
                rep.check(f"annihilates_ground/{key}/{j}", down.is_zero())
            else:
                lam_down = eigencheck(lap, down)
                rep.check(f"lowering_shift/{key}/{j}",
                          lam_down is not None and abs(lam_down - (expected + 4 * mu)) <= 1e-10 * abs(expected))
            up = creation(j, nu, mu, n).apply(h)
            lam_up = eigencheck(lap, up)
            rep.check(f"raising_shift/{key}/{j}",
                      lam_up is not None and abs(lam_up - (expected - 4 * mu)) <= 1e-10 * abs(expected))
    idx = S.HermiteIndex((1,) + (0,) * (n - 1), (0,) * n)
    verbatim = S.hermite_explicit(idx, nu, mu, verbatim=True)
    canon = S.hermite_rodrigues(idx, nu, mu)
    if not verbatim.isclose(canon, 1e-10):
        key = (0,) * n + (1,) + (0,) * (n - 1)
        rep.discrepancy("explicit double sum for h_{r,s} at r=(1), s=(0)",
                        "explicit form of the complex Hermite functions",
                        f"{_c(verbatim.poly.coefficient(key))} zbar_1",
                        f"{_c(canon.poly.coefficient(key))} zbar_1")
    for lam in range(3):
        f = S.radial_eigenfunction(lam, nu, mu, n)
        got = eigencheck(lap, f)
        rep.check(f"radial/{lam}", got is not None and abs(got + 2 * mu * (2 * lam + n)) <= 1e-10 * abs(got))
    if nu != 0:
        f = S.radial_eigenfunction(1, nu, mu, n, envelope="printed")
        if eigencheck(lap, f) is None:
            rep.discrepancy("radial eigenfunction envelope",
                            "radial solutions via the confluent hypergeometric function",
                            "exp(-(mu-i nu)|z|^2/2) is not an eigenfunction",
                            "exp(-(mu+i nu)|z|^2/2) is")
    for lam in (0, 1, 2, 0.5, 1.5, -0.3):
        bounded = S.radial_is_bounded(lam, mu, n)
        rep.check(f"radial_bounded/{lam}", bounded == (float(lam).is_integer() and lam >= 0))
    return rep


# integration ------------------------------------------------------------

def verify_orthogonality(n: int = 1, nu: float = 0.0, mu: float = 1.0, **_) -> VerificationReport:
    rep = VerificationReport("orthogonality")
    bound = 2 if n == 1 else 1
    idxs = S.hermite_indices(n, bound, bound, per_entry=True)
    hs = [S.hermite_rodrigues(i, nu, mu) for i in idxs]
    norms = [math.sqrt(I.norm2(h)) for h in hs]
    for a in range(len(hs)):
        for b in range(a + 1, len(hs)):
            v = I.inner_product(hs[a], hs[b]).value
            rep.check(f"orthogonal/{idxs[a].r}{idxs[a].s}/{idxs[b].r}{idxs[b].s}",
                      abs(v) < 1e-10 * norms[a] * norms[b])
        back = I.inner_product(hs[a], hs[(a + 1) % len(hs)]).value
        fwd = I.inner_product(hs[(a + 1) % len(hs)], hs[a]).value
        rep.check(f"conjugate_symmetry/{a}", abs(back - fwd.conjugate()) <= 1e-12 * max(1, abs(back)))
    rep.check("ground_norm", abs(norms[0] ** 2 - (math.pi / mu) ** n) <= 1e-12 * (math.pi / mu) ** n)
    return rep


def verify_kernel(n: int = 1, nu: float = 0.0, mu: float = 1.0, l: int | None = None,
                  seed: int = 0, **_) -> VerificationReport:
    rep = VerificationReport("kernel")
    levels = range(l + 1) if l is not None else range(4)
    bound = 2 if n == 1 else 1
    for idx in S.hermite_indices(n, bound, bound):
        h = S.hermite_rodrigues(idx, nu, mu)
        scale = h.normalized().poly.max_abs()
        for lv in levels:
            p = I.project_level(h, lv, nu, mu)
            key = f"project/{idx.r}{idx.s}/l={lv}"
            if lv == idx.level:
                rep.check(key, p.isclose(h, 1e-8))
            else:
                rep.check(key, p.normalized().poly.max_abs() <= 1e-8 * scale)
    rng = np.random.default_rng(seed)
    for lv in levels:
        z = rng.uniform(-1, 1, n) + 1j * rng.uniform(-1, 1, n)
        w = rng.uniform(-1, 1, n) + 1j * rng.uniform(-1, 1, n)
        diag = S.kernel_eval(lv, nu, mu, n, z, z)
        pref = S.kernel_prefactor(lv, mu, n)
        rep.check(f"diagonal/l={lv}", abs(diag - pref) <= 1e-12 * pref)
        direct = S.kernel_eval(lv, nu, mu, n, z, w)
        rep.check(f"kernel_in_w/l={lv}",
                  abs(S.kernel_in_w(lv, nu, mu, n, z)(w) - direct) <= 1e-12 * max(1, abs(direct)))
        rep.check(f"gauge_conjugated/l={lv}",
                  abs(S.kernel_conjugated_eval(lv, nu, mu, n, z, w) - direct) <= 1e-12 * max(1, abs(direct)))
    return rep


# symmetry ---------------------------------------------------------------

def verify_symmetry(n: int = 1, nu: float = 0.0, mu: float = 1.0, seed: int = 0,
                    max_degree: int = 3, **_) -> VerificationReport:
    rep = VerificationReport("symmetry")
    rng = np.random.default_rng(seed)
    plain_failures = 0
    worst = 0.0
    triples = list(Y.seeded_triples(n, 100, seed))
    for k, (g, h, z) in enumerate(triples):
        rep.check(f"projective_chain_rule/{k}", Y.projective_chain_rule_holds(g, h, z, nu, mu))
        if not Y.chain_rule_holds(g, h, z, nu, mu):
            plain_failures += 1
            worst = max(worst, abs(Y.chain_rule_defect(g, h, z, nu, mu) - 1))
    if plain_failures:
        rep.discrepancy("j(gg',z) = j(g,g'z) j(g',z)",
                        "chain rule for the automorphic factor",
                        f"fails on {plain_failures}/{len(triples)} triples, "
                        f"max |ratio-1| = {worst:.3g}; ratio = conj(j(g, g'.0))",
                        "holds for all triples")
    for k in range(5):
        g = Y.random_motion(n, rng)
        rep.check(f"pullback_theta/{k}", Y.pullback_theta_check(g, nu, mu))
        rep.check(f"intertwine/{k}", Y.intertwine_check(g, nu, mu, n, max_degree))
        f = S.hermite_rodrigues(S.HermiteIndex((1,) + (0,) * (n - 1), (0,) * n), nu, mu)
        q = ExpPoly(Polynomial.z(n, 0) + 1.0, Envelope.gaussian(n, -mu / 2))
        before = I.inner_product(f, q).value
        after = I.inner_product(Y.t_apply(g, f, nu, mu), Y.t_apply(g, q, nu, mu)).value
        rep.check(f"isometry/{k}", abs(before - after) <= 1e-10 * max(1, abs(before)))
        lam = eigencheck(laplacian(nu, mu, n), Y.t_apply(g, f, nu, mu))
        rep.check(f"eigenspace_invariance/{k}",
                  lam is not None and abs(lam + 2 * mu * (2 + n)) <= 1e-10 * abs(lam))
    g = Y.Motion.translation([1.0] + [0.0] * (n - 1))
    rep.check("plain_pullback_rejected", not Y.intertwine_check(g, nu, mu, n, 1, with_factor=False))
    return rep


RUNNERS = {"group": verify_group, "fields": verify_fields, "operators": verify_operators,
           "ladder": verify_ladder, "orthogonality": verify_orthogonality,
           "kernel": verify_kernel, "symmetry": verify_symmetry}


def run(suite: str, **params) -> VerificationReport:
    if suite == "all":
        rep = VerificationReport("all")
        for name in SUITES:
            rep.merge(RUNNERS[name](**params))
        return rep
    if suite not in RUNNERS:
        raise ValueError(f"unknown suite {suite!r}")
    return RUNNERS[suite](**params)

