"""Independent numerical oracles used by the tests."""
import numpy as np


def gh_grid(nodes=80):
    """Tensor Gauss-Hermite nodes for ∫_{R²} g(x, y) e^{-(x²+y²)} dx dy."""
    t, w = np.polynomial.hermite.hermgauss(nodes)
    X, Y = np.meshgrid(t, t, indexing="ij")
    return X, Y, np.outer(w, w)


def gh_integrate_c(func, sigma, nodes=80):
    """∫_C func(z) dm(z) for func decaying like e^{-sigma|z|²}; func is vectorised."""
    X, Y, W = gh_grid(nodes)
    s = np.sqrt(sigma)
    Z = (X + 1j * Y) / s
    return np.sum(W * func(Z) * np.exp(np.abs(Z) ** 2 * sigma)) / sigma


def wirtinger_fd(f, z, j, kind, h=1e-5):
    """Central-difference Wirtinger derivative of a scalar function on C^n."""
    z = np.array(z, dtype=complex)
    e = np.zeros_like(z)
    e[j] = 1
    dx = (f(z + h * e) - f(z - h * e)) / (2 * h)
    dy = (f(z + 1j * h * e) - f(z - 1j * h * e)) / (2 * h)
    return (dx - 1j * dy) / 2 if kind == "z" else (dx + 1j * dy) / 2
