"""Pure-Python versions of the numeric kernels in ``_kernels.pyx``.

Both modules expose the same functions with the same signatures; see
:mod:`twistlap.kernels` for backend selection.
"""
import cmath
import math


def gaussian_moment_1d(a, b, alpha, beta, gamma):
    """∫_C z^a z̄^b exp(alpha|z|² + beta z + gamma z̄) dm(z), Re(alpha) < 0.

    Differentiating π/(−α)·exp(−βγ/α) a times in β and b times in γ gives
    πK e^{Kβγ} Σ_k C(b,k) a!/(a−k)! K^{a+b−k} γ^{a−k} β^{b−k} with K = −1/α.
    """
    k_ = -1.0 / alpha
    total = 0j
    for k in range(min(a, b) + 1):
        w = math.comb(b, k) * math.perm(a, k)
        total += w * k_ ** (a + b - k) * _ipow(gamma, a - k) * _ipow(beta, b - k)
    return math.pi * k_ * cmath.exp(k_ * beta * gamma) * total


def _ipow(x, e):
    # 0**0 == 1 without relying on complex pow conventions
    r = 1 + 0j
    for _ in range(e):
        r *= x
    return r


def moment_table(amax, bmax, alpha, beta, gamma):
    return [[gaussian_moment_1d(a, b, alpha, beta, gamma) for b in range(bmax + 1)]
            for a in range(amax + 1)]


def pair_moment_sum(exps_f, coefs_f, exps_g, coefs_g, alpha, beta, gamma):
    """Σ_{s,t} c_s conj(d_t) Π_j M_j(a_sj + b'_tj, b_sj + a'_tj).

    ``exps_*`` rows are flat (a_1..a_n, b_1..b_n) exponent tuples; this is the
    integral of f·conj(g) without its exp(delta) factor.  Returns the value
    and the sum of absolute contributions (used for error estimates).
    """
    n = len(beta)
    if not len(exps_f) or not len(exps_g):
        return 0j, 0.0
    tables = []
    for j in range(n):
        amax = max(r[j] for r in exps_f) + max(r[n + j] for r in exps_g)
        bmax = max(r[n + j] for r in exps_f) + max(r[j] for r in exps_g)
        tables.append(moment_table(amax, bmax, alpha, beta[j], gamma[j]))
    value = 0j
    mag = 0.0
    for ef, cf in zip(exps_f, coefs_f):
        for eg, cg in zip(exps_g, coefs_g):
            p = cf * cg.conjugate()
            for j in range(n):
                p *= tables[j][ef[j] + eg[n + j]][ef[n + j] + eg[j]]
            value += p
            mag += abs(p)
    return value, mag


def hyp1f1_series(a, c, x, rtol, max_terms):
    """Partial sums of Σ (a)_k/(c)_k x^k/k!.

    Returns ``(value, terms_used)``; ``terms_used`` is −1 when the
    tolerance was not met within ``max_terms`` or the sum overflowed.
    """
    term = 1 + 0j
    total = 1 + 0j
    for k in range(max_terms):
        term *= (a + k) / (c + k) * x / (k + 1)
        total += term
        if not cmath.isfinite(total):
            return total, -1
        if term == 0 or abs(term) < rtol * abs(total):
            return total, k + 2
    return total, -1
