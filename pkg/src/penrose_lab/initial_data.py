"""Spherically symmetric initial data sets on a radial grid.

The metric is ``g = a(r) dr^2 + rho(r)^2 dOmega^2`` and the second fundamental
form ``k = k_rr dr^2 + k_t rho^2 dOmega^2``, so ``k_rr / a`` and ``k_t`` are
the radial and tangential eigenvalues of ``k`` with respect to ``g``.
Derivatives are second-order finite differences; values between nodes come
from cubic splines of the nodal data.
"""

from dataclasses import dataclass
from functools import cached_property

import numpy as np
from scipy.interpolate import CubicSpline

from . import fd
from .config import Tolerances
from .errors import DegenerateInputError, GridRangeError
from .verdict import VerdictReport

FOUR_PI = 4.0 * np.pi


@dataclass(frozen=True, eq=False)
class RadialGrid:
    nodes: np.ndarray

    def __post_init__(self):
        nodes = np.asarray(self.nodes, dtype=float)
        object.__setattr__(self, "nodes", nodes)
        if nodes.ndim != 1 or nodes.size < 16:
            raise ValueError("a radial grid needs at least 16 nodes")
        if not np.all(np.diff(nodes) > 0):
            raise ValueError("grid nodes must be strictly increasing")
        if nodes[0] < 0:
            raise ValueError("r_min must be non-negative")

    @classmethod
    def uniform(cls, r_min, r_max, count):
        return cls(np.linspace(r_min, r_max, int(count)))

    @property
    def r_min(self):
        return float(self.nodes[0])

    @property
    def r_max(self):
        return float(self.nodes[-1])

    @property
    def count(self):
        return int(self.nodes.size)

    @property
    def spacing(self):
        """Largest node spacing; the ``dr`` in discretization tolerances."""
        return float(np.max(np.diff(self.nodes)))

    def contains(self, r):
        return self.r_min - 1e-14 <= r <= self.r_max + 1e-14


def _fill_center(values, mask, nodes):
    # Regular limit at rho = 0 by quadratic extrapolation from the next nodes.
    if not mask.any():
        return values
    out = values.copy()
    for i in np.flatnonzero(mask):
        j = np.arange(i + 1, i + 4)
        out[i] = np.polyval(np.polyfit(nodes[j], values[j], 2), nodes[i])
    return out


@dataclass(frozen=True, eq=False)
class RadialMetric:
    """``a(x) dx^2 + rho(x)^2 dOmega^2`` sampled on a grid.

    Used for the physical metric, Jang graph metrics, glued metrics and their
    conformal deformations alike.
    """

    grid: RadialGrid
    a: np.ndarray
    rho: np.ndarray

    def __post_init__(self):
        a = np.asarray(self.a, dtype=float)
        rho = np.asarray(self.rho, dtype=float)
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "rho", rho)
        if a.shape != self.grid.nodes.shape or rho.shape != a.shape:
            raise ValueError("metric arrays must match the grid")
        if not (np.all(np.isfinite(a)) and np.all(np.isfinite(rho))):
            raise DegenerateInputError("metric components must be finite")
        if np.any(a <= 0):
            raise ValueError("a = g_rr must be positive")
        center = rho <= 0
        if np.any(center):
            # rho may vanish only at a regular center r = 0
            if not (center.sum() == 1 and center[0] and self.grid.nodes[0] == 0):
                raise ValueError("rho must be positive away from r = 0")

    @property
    def nodes(self):
        return self.grid.nodes

    @cached_property
    def center_mask(self):
        return self.rho <= 0

    @cached_property
    def drho(self):
        return fd.d1(self.rho, self.nodes)

    @cached_property
    def d2rho(self):
        return fd.d2(self.rho, self.nodes)

    @cached_property
    def da(self):
        return fd.d1(self.a, self.nodes)

    @cached_property
    def sqrt_a(self):
        return np.sqrt(self.a)

    @cached_property
    def area(self):
        return FOUR_PI * self.rho ** 2

    @cached_property
    def mean_curvature(self):
        """Outward mean curvature ``2 rho' / (rho sqrt a)`` of centered spheres."""
        with np.errstate(divide="ignore", invalid="ignore"):
            H = 2.0 * self.drho / (self.rho * self.sqrt_a)
        H[self.center_mask] = np.inf
        return H

    @cached_property
    def proper_length(self):
        """Radial geodesic distance from the inner end, by composite Simpson."""
        from scipy.integrate import cumulative_simpson
        return cumulative_simpson(self.sqrt_a, x=self.nodes, initial=0.0)

    @cached_property
    def volume_density(self):
        """``dV / dr = 4 pi rho^2 sqrt(a)``."""
        return FOUR_PI * self.rho ** 2 * self.sqrt_a

    def spline(self, name):
        return self._splines[name]

    @cached_property
    def _splines(self):
        return {
            "rho": CubicSpline(self.nodes, self.rho),
            "drho": CubicSpline(self.nodes, self.drho),
            "a": CubicSpline(self.nodes, self.a),
        }

    def _check(self, r):
        if not self.grid.contains(r):
            raise GridRangeError(
                f"r={r} outside [{self.grid.r_min}, {self.grid.r_max}]")

    def rho_at(self, r):
        self._check(r)
        return float(self._splines["rho"](r))

    def area_at(self, r):
        return FOUR_PI * self.rho_at(r) ** 2

    def H_at(self, r):
        self._check(r)
        rho = float(self._splines["rho"](r))
        drho = float(self._splines["drho"](r))
        a = float(self._splines["a"](r))
        return 2.0 * drho / (rho * np.sqrt(a))

    def hawking_mass_profile(self):
        """Hawking mass of every centered coordinate sphere."""
        A = self.area
        H = self.mean_curvature
        with np.errstate(invalid="ignore"):
            m = np.sqrt(A / (16 * np.pi)) * (1.0 - H * H * A / (16 * np.pi))
        m[self.center_mask] = 0.0
        return m


@dataclass(frozen=True, eq=False)
class SphericalInitialData:
    grid: RadialGrid
    a: np.ndarray
    rho: np.ndarray
    k_rr: np.ndarray
    k_t: np.ndarray
    name: str = ""
    smoothness_bound: float = 1e6

    def __post_init__(self):
        for field_name in ("a", "rho", "k_rr", "k_t"):
            arr = np.asarray(getattr(self, field_name), dtype=float)
            if arr.shape != self.grid.nodes.shape:
                raise ValueError(f"{field_name} must have one value per node")
            if not np.all(np.isfinite(arr)):
                raise DegenerateInputError(f"{field_name} has non-finite values")
            object.__setattr__(self, field_name, arr)
        m = self.metric  # validates a, rho
        worst = max(np.max(np.abs(m.d2rho)), np.max(np.abs(fd.d2(self.a, self.grid.nodes))))
        if worst > self.smoothness_bound:
            raise ValueError(
                f"second differences {worst:.3g} exceed smoothness bound "
                f"{self.smoothness_bound:.3g}")

    @cached_property
    def metric(self):
        return RadialMetric(self.grid, self.a, self.rho)

    @property
    def nodes(self):
        return self.grid.nodes

    @cached_property
    def k_radial(self):
        """Radial eigenvalue ``k^r_r = k_rr / a``."""
        return self.k_rr / self.a

    @cached_property
    def trace_k(self):
        return self.k_radial + 2.0 * self.k_t

    @cached_property
    def norm_k_sq(self):
        return self.k_radial ** 2 + 2.0 * self.k_t ** 2

    @cached_property
    def k_t_spline(self):
        return CubicSpline(self.nodes, self.k_t)

    @property
    def is_time_symmetric(self):
        return not (np.any(self.k_rr) or np.any(self.k_t))

    def restrict(self, start, stop=None):
        """Data on the node range ``[start, stop)``."""
        sl = slice(start, stop)
        return SphericalInitialData(RadialGrid(self.nodes[sl]), self.a[sl], self.rho[sl],
                                    self.k_rr[sl], self.k_t[sl], self.name,
                                    self.smoothness_bound)

    def with_k(self, k_rr, k_t, name=None):
        return SphericalInitialData(self.grid, self.a, self.rho, k_rr, k_t,
                                    name if name is not None else self.name,
                                    self.smoothness_bound)


@dataclass(frozen=True, eq=False)
class EnergyMomentum:
    mu: np.ndarray
    J_r: np.ndarray
    # |J|_g = |J_r| / sqrt(a)
    J_norm: np.ndarray
    # size of the individual terms entering mu and |J|, for error scaling
    scale: np.ndarray = None


@dataclass(frozen=True, eq=False)
class CurvatureProfile:
    R: np.ndarray
    K_rad: np.ndarray
    K_tan: np.ndarray


@dataclass(frozen=True)
class SphereGeometry:
    r: float
    area: float
    H: float
    tr_k: float

    @property
    def theta_plus(self):
        return self.H - self.tr_k

    @property
    def theta_minus(self):
        return self.H + self.tr_k


def curvature_profile(metric):
    """Sectional and scalar curvature of ``a dr^2 + rho^2 dOmega^2``."""
    a, rho = metric.a, metric.rho
    d1r, d2r, da = metric.drho, metric.d2rho, metric.da
    center = metric.center_mask
    with np.errstate(divide="ignore", invalid="ignore"):
        K_tan = (1.0 - d1r ** 2 / a) / rho ** 2
        K_rad = -(d2r / a - d1r * da / (2.0 * a * a)) / rho
    K_tan = _fill_center(K_tan, center, metric.nodes)
    K_rad = _fill_center(K_rad, center, metric.nodes)
    if not (np.all(np.isfinite(K_tan)) and np.all(np.isfinite(K_rad))):
        raise DegenerateInputError("non-finite curvature; grid too coarse or metric degenerate")
    return CurvatureProfile(R=2.0 * (2.0 * K_rad + K_tan), K_rad=K_rad, K_tan=K_tan)


def compute_constraints(data):
    """Energy and momentum densities from the constraint equations."""
    metric = data.metric
    curv = curvature_profile(metric)
    mu = (curv.R + data.trace_k ** 2 - data.norm_k_sq) / (16 * np.pi)
    dk_t = fd.d1(data.k_t, data.nodes)
    with np.errstate(divide="ignore", invalid="ignore"):
        div = -2.0 * dk_t + 2.0 * metric.drho / metric.rho * (data.k_radial - data.k_t)
    div = _fill_center(div, metric.center_mask, data.nodes)
    J_r = div / (8 * np.pi)
    if not (np.all(np.isfinite(mu)) and np.all(np.isfinite(J_r))):
        raise DegenerateInputError("non-finite constraint quantities")
    with np.errstate(divide="ignore", invalid="ignore"):
        j_terms = 2.0 * np.abs(dk_t) + 2.0 * np.abs(metric.drho / metric.rho
                                                  * (data.k_radial - data.k_t))
    j_terms = _fill_center(j_terms, metric.center_mask, data.nodes)
    scale = ((2.0 * np.abs(curv.K_rad) * 2.0 + 2.0 * np.abs(curv.K_tan)
              + data.trace_k ** 2 + data.norm_k_sq) / (16 * np.pi)
             + j_terms / (8 * np.pi * metric.sqrt_a))
    return EnergyMomentum(mu=mu, J_r=J_r, J_norm=np.abs(J_r) / metric.sqrt_a, scale=scale)


def dec_tolerance(em, data, tol=None):
    """Per-node DEC tolerance: ``tol_dec`` plus the discretization allowance.

    The allowance is ``disc_factor * (dr / L)^2`` times the size of the terms
    that make up mu and |J|, with L the smaller of rho and ``a / |a'|``, so
    exact vacuum data sampled on a grid passes while genuine violations of
    order one do not.
    """
    tol = Tolerances() if tol is None else tol
    if data is None or em.scale is None:
        return np.full_like(em.mu, tol.tol_dec)
    # the shorter of rho and the variation length a / |a'| sets the truncation error
    with np.errstate(divide="ignore"):
        a_len = np.abs(data.a / data.metric.da)
    length = np.maximum(np.minimum(data.rho, a_len), data.grid.spacing)
    return tol.tol_dec + tol.discretization(data.grid.spacing) * em.scale / length ** 2


def check_dec(em, data=None, tol=None):
    """Dominant energy condition ``mu >= |J|_g`` at every node."""
    allow = dec_tolerance(em, data, tol)
    slack = em.mu - em.J_norm
    i = int(np.argmin(slack + allow))
    return VerdictReport(
        "dominant_energy_condition", bool(np.all(slack >= -allow)),
        lhs=float(em.mu[i]), rhs=float(em.J_norm[i]), tolerance=float(allow[i]),
        details={"min_slack": float(np.min(slack)),
                 "at_r": float(data.nodes[i]) if data is not None else i})


def sphere_geometry(data, r):
    """Area, mean curvature and ``Tr_Sigma k`` of the centered sphere at r."""
    metric = data.metric
    metric._check(r)
    tr = 2.0 * float(data.k_t_spline(r))
    return SphereGeometry(r=float(r), area=metric.area_at(r), H=metric.H_at(r), tr_k=tr)


def expansions(data):
    """Nodal null expansions ``theta_pm = H -/+ Tr_Sigma k`` of centered spheres."""
    H = data.metric.mean_curvature
    P = 2.0 * data.k_t
    return H - P, H + P


def check_admissible_boundary(data, tol=None, em=None):
    """Untrapped boundary (H > |Tr k| at r_max) and the dominant energy condition."""
    tol = Tolerances() if tol is None else tol
    geo = sphere_geometry(data, data.grid.r_max)
    # strict inequality must survive the O(dr^2) error of H and Tr k
    slack = tol.discretization(data.grid.spacing) * max(abs(geo.H), abs(geo.tr_k))
    untrapped = VerdictReport("untrapped_boundary", bool(geo.H - abs(geo.tr_k) > slack),
                              geo.H, abs(geo.tr_k), slack, ">", {"r_b": geo.r})
    em = compute_constraints(data) if em is None else em
    dec = check_dec(em, data, tol)
    return VerdictReport(
        "admissible_boundary", untrapped.holds and dec.holds,
        lhs=geo.H, rhs=abs(geo.tr_k), tolerance=slack, relation=">",
        details={"untrapped_margin": untrapped.margin,
                 "dec_min_slack": dec.details["min_slack"],
                 "untrapped": untrapped.holds, "dec": dec.holds})
