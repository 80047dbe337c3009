"""Second-order finite differences on (possibly non-uniform) 1D grids."""

import numpy as np


def _fornberg(x0, xs, order):
    # Weights for d^order/dx^order at x0 from nodes xs (Fornberg 1988).
    n = len(xs)
    c = np.zeros((n, order + 1))
    c1, c4 = 1.0, xs[0] - x0
    c[0, 0] = 1.0
    for i in range(1, n):
        mn = min(i, order)
        c2, c5, c4 = 1.0, c4, xs[i] - x0
        for j in range(i):
            c3 = xs[i] - xs[j]
            c2 *= c3
            if j == i - 1:
                for k in range(mn, 0, -1):
                    c[i, k] = c1 * (k * c[i - 1, k - 1] - c5 * c[i - 1, k]) / c2
                c[i, 0] = -c1 * c5 * c[i - 1, 0] / c2
            for k in range(mn, 0, -1):
                c[j, k] = (c4 * c[j, k] - k * c[j, k - 1]) / c3
            c[j, 0] = c4 * c[j, 0] / c3
        c1 = c2
    return c[:, order]


def d1(f, x):
    """Centered first derivative, one-sided second order at the ends."""
    return np.gradient(np.asarray(f, dtype=float), x, edge_order=2)


def d2(f, x):
    """Second derivative; three-point interior, four-point one-sided ends."""
    f = np.asarray(f, dtype=float)
    x = np.asarray(x, dtype=float)
    out = np.empty_like(f)
    hm = x[1:-1] - x[:-2]
    hp = x[2:] - x[1:-1]
    out[1:-1] = 2.0 * (f[:-2] / (hm * (hm + hp)) - f[1:-1] / (hm * hp)
                       + f[2:] / (hp * (hm + hp)))
    out[0] = _fornberg(x[0], x[:4], 2) @ f[:4]
    out[-1] = _fornberg(x[-1], x[-4:], 2) @ f[-4:]
    return out


def richardson_order(errors, refinement=2.0):
    """Observed convergence orders from errors on successively refined grids."""
    e = np.abs(np.asarray(errors, dtype=float))
    return np.log(e[:-1] / e[1:]) / np.log(refinement)
