"""Axisymmetric functions on the 2-sphere sampled on a polar-angle grid.

Nodes are ``theta_j = j pi / (n - 1)`` including both poles. Smooth
axisymmetric quantities are even (cosine series) or odd (sine series) in
``theta`` after reflection through the poles, so derivatives are taken
spectrally with DCT-I / DST-I.
"""

from dataclasses import dataclass
from functools import cached_property

import numpy as np
from scipy.fft import dct, dst
from scipy.special import eval_legendre


@dataclass(frozen=True)
class ThetaGrid:
    count: int = 512

    def __post_init__(self):
        if self.count < 8:
            raise ValueError("theta grid needs at least 8 nodes")

    @cached_property
    def nodes(self):
        return np.linspace(0.0, np.pi, self.count)

    @property
    def spacing(self):
        return np.pi / (self.count - 1)

    @cached_property
    def _wavenumbers(self):
        return np.arange(self.count, dtype=float)

    def d_even(self, f):
        """Derivative of an even function (returns an odd one, zero at the poles)."""
        n1 = self.count - 1
        a = dct(np.asarray(f, dtype=float), type=1) / (2.0 * n1)
        k = self._wavenumbers
        # f = a_0 + a_N (-1)^j + 2 sum a_k cos(k theta); the last mode has zero slope on nodes
        b = -2.0 * k[1:-1] * a[1:-1]
        out = np.zeros(self.count)
        out[1:-1] = dst(b, type=1) / 2.0
        return out

    def d_odd(self, f):
        """Derivative of an odd function (pole values ignored; returns an even one)."""
        n1 = self.count - 1
        b = dst(np.asarray(f, dtype=float)[1:-1], type=1) / n1
        k = self._wavenumbers[1:-1]
        a = np.zeros(self.count)
        a[1:-1] = 0.5 * k * b
        return dct(a, type=1)

    def integrate_odd(self, f):
        """Antiderivative of an odd function, vanishing at theta = 0."""
        n1 = self.count - 1
        b = dst(np.asarray(f, dtype=float)[1:-1], type=1) / n1
        k = self._wavenumbers[1:-1]
        # int sin(k t) = (1 - cos(k t)) / k
        a = np.zeros(self.count)
        a[1:-1] = -0.5 * b / k
        return dct(a, type=1) + np.sum(b / k)

    def integrate(self, f):
        """Integral over [0, pi] of an odd function (a density times the area element).

        Sine-series quadrature; pole values are ignored.
        """
        n1 = self.count - 1
        b = dst(np.asarray(f, dtype=float)[1:-1], type=1) / n1
        k = self._wavenumbers[1:-1]
        return float(np.sum(b[::2] * 2.0 / k[::2]))

    def legendre(self, degree):
        return eval_legendre(degree, np.cos(self.nodes))

    def legendre_series(self, coeffs, start=1):
        """``sum_l c_l P_l(cos theta)`` for l = start, start + 1, ..."""
        out = np.zeros(self.count)
        for i, c in enumerate(coeffs):
            out += c * self.legendre(start + i)
        return out
