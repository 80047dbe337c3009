"""Hawking, Liu-Yau and Wang-Yau quasi-local masses of axisymmetric 2-spheres.

A boundary 2-sphere carries the metric ``E(theta) dtheta^2 + phi(theta)^2
dvarphi^2``, its mean curvature ``H`` inside the slice and ``P = Tr_Sigma k``.
The mean curvature vector is spacelike when ``H^2 > P^2``, with length
``sqrt(H^2 - P^2)``. The reference mean curvature ``H_0`` comes from embedding
the metric in R^3 as a surface of revolution.
"""

import hashlib
from dataclasses import dataclass, field
from functools import cached_property

import numpy as np
from scipy.interpolate import CubicSpline

from .config import QuasiLocalConfig, Tolerances
from .errors import (EmbeddingQualityError, NoAdmissibleObserverError,
                     NonConvexProfileError, PreconditionError)
from .initial_data import sphere_geometry
from .theta import ThetaGrid
from .verdict import VerdictReport


def _token(*arrays):
    h = hashlib.sha256()
    for a in arrays:
        if isinstance(a, str):
            h.update(a.encode())
        else:
            h.update(np.ascontiguousarray(np.round(np.asarray(a, dtype=float), 12)).tobytes())
    return h.hexdigest()[:16]


@dataclass(frozen=True)
class MassValue:
    value: float
    kind: str
    inputs_hash: str = ""
    details: dict = field(default_factory=dict)

    def __post_init__(self):
        if not np.isfinite(self.value):
            raise ValueError(f"{self.kind} mass is not finite")

    def __float__(self):
        return float(self.value)


def _profile(grid, v):
    v = np.asarray(v, dtype=float)
    return np.full(grid.count, float(v)) if v.ndim == 0 else v


@dataclass(frozen=True, eq=False)
class BoundarySurface:
    """Axisymmetric boundary 2-sphere with its extrinsic data.

    ``rho_b`` is set for round spheres, where every profile is constant and
    ``H_0 = 2 / rho_b`` is used in closed form.
    """

    grid: ThetaGrid
    E: np.ndarray
    phi: np.ndarray
    H: np.ndarray
    P: np.ndarray
    alpha: np.ndarray
    rho_b: float | None = None

    @classmethod
    def round(cls, rho_b, H, P=0.0, count=None):
        grid = ThetaGrid(count or QuasiLocalConfig.theta_nodes)
        t = grid.nodes
        return cls(grid, np.full(t.size, rho_b ** 2), rho_b * np.sin(t),
                   _profile(grid, H), _profile(grid, P), np.zeros(t.size), float(rho_b))

    @classmethod
    def axisymmetric(cls, grid, E, phi, H, P=0.0, alpha=None):
        alpha = np.zeros(grid.count) if alpha is None else np.asarray(alpha, dtype=float)
        return cls(grid, np.asarray(E, dtype=float), np.asarray(phi, dtype=float),
                   _profile(grid, H), _profile(grid, P), alpha)

    @property
    def is_round(self):
        return self.rho_b is not None

    @cached_property
    def area_element(self):
        """``dA / dtheta = 2 pi phi sqrt(E)``."""
        return 2.0 * np.pi * self.phi * np.sqrt(self.E)

    @cached_property
    def area(self):
        if self.is_round:
            return 4.0 * np.pi * self.rho_b ** 2
        return self.grid.integrate(self.area_element)

    def integrate(self, values):
        values = _profile(self.grid, values)
        if self.is_round and np.ptp(values) == 0.0:
            return float(values[0]) * self.area
        return self.grid.integrate(values * self.area_element)

    @cached_property
    def spacelike(self):
        return bool(np.all(self.H ** 2 > self.P ** 2))

    @cached_property
    def H_norm(self):
        """``|H vec| = sqrt(H^2 - P^2)``."""
        return np.sqrt(np.maximum(self.H ** 2 - self.P ** 2, 0.0))

    @cached_property
    def gauss_curvature(self):
        return intrinsic_gauss_curvature(self.grid, self.E, self.phi)

    def token(self):
        return _token(self.E, self.phi, self.H, self.P, self.alpha)


def boundary_from_data(data, r=None, count=None):
    """Round boundary sphere of the data at ``r`` (default r_max)."""
    geo = sphere_geometry(data, data.grid.r_max if r is None else r)
    return BoundarySurface.round(np.sqrt(geo.area / (4.0 * np.pi)), geo.H, geo.tr_k, count)


def intrinsic_gauss_curvature(grid, E, phi):
    """``K = -(phi_s)_s / phi`` for ``E dtheta^2 + phi^2 dvarphi^2``."""
    sE = np.sqrt(E)
    num = -grid.d_even(grid.d_odd(phi) / sE) / sE
    with np.errstate(divide="ignore", invalid="ignore"):
        K = num / phi
    # num and phi are odd about each pole: take the ratio of slopes
    dn, dp = grid.d_odd(num), grid.d_odd(phi)
    K[0], K[-1] = dn[0] / dp[0], dn[-1] / dp[-1]
    return K


def golden_section(fun, lo, hi, tol):
    """Minimize ``fun`` on [lo, hi] by golden-section search; returns (x, f(x))."""
    inv = (np.sqrt(5.0) - 1.0) / 2.0
    a, b = lo, hi
    c, d = b - inv * (b - a), a + inv * (b - a)
    fc, fd = fun(c), fun(d)
    while b - a > tol:
        if fc <= fd:
            b, d, fd = d, c, fc
            c = b - inv * (b - a)
            fc = fun(c)
        else:
            a, c, fc = c, d, fd
            d = a + inv * (b - a)
            fd = fun(d)
    return (c, fc) if fc <= fd else (d, fd)


def hawking_mass(area, H_profile, surface=None):
    """``sqrt(A/16pi) (1 - (1/16pi) int H^2 dA)``; a scalar H means constant H."""
    if area <= 0:
        raise PreconditionError("area must be positive")
    H = np.asarray(H_profile, dtype=float)
    if H.ndim == 0:
        willmore = float(H) ** 2 * area
    else:
        if surface is None:
            raise ValueError("a profile of H needs the surface it lives on")
        willmore = surface.integrate(H ** 2)
    value = np.sqrt(area / (16.0 * np.pi)) * (1.0 - willmore / (16.0 * np.pi))
    return MassValue(float(value), "hawking", _token([area], np.atleast_1d(H)),
                     {"area": float(area), "willmore": float(willmore)})


@dataclass(frozen=True, eq=False)
class EmbeddingResult:
    grid: ThetaGrid
    s: np.ndarray
    z: np.ndarray
    H0: np.ndarray
    kappa1: np.ndarray
    kappa2: np.ndarray
    gauss_defect: float
    metric_residual: float

    @property
    def K(self):
        return self.kappa1 * self.kappa2


def embed_surface_of_revolution(grid, E, phi, tol=None, check=True):
    """Realize ``E dtheta^2 + phi^2 dvarphi^2`` as a surface of revolution in R^3.

    The profile is ``s = phi``, ``z' = sqrt(E - phi'^2)``. The metric residual
    re-differentiates the constructed ``z`` with a cubic spline, independent of
    the spectral derivatives used to build it.
    """
    tol = Tolerances().tol_embed if tol is None else tol
    E = np.asarray(E, dtype=float)
    phi = np.asarray(phi, dtype=float)
    ds = grid.d_odd(phi)
    rad = E - ds * ds
    scale = np.max(E)
    # spectral derivatives lose about count^2 ulps near the poles
    if np.min(rad) < -10.0 * grid.count ** 2 * np.finfo(float).eps * scale:
        i = int(np.argmin(rad))
        raise NonConvexProfileError(
            f"E - phi'^2 = {rad[i]:.3g} < 0 at theta={grid.nodes[i]:.4f}; "
            "not embeddable as a surface of revolution")
    dz = np.sqrt(np.maximum(rad, 0.0))
    z = grid.integrate_odd(dz)
    d2s = grid.d_even(ds)
    d2z = grid.d_odd(dz)
    k1 = (ds * d2z - dz * d2s) / E ** 1.5
    with np.errstate(divide="ignore", invalid="ignore"):
        k2 = dz / (phi * np.sqrt(E))
    # poles are umbilic
    k2[0], k2[-1] = k1[0], k1[-1]
    dA = 2.0 * np.pi * phi * np.sqrt(E)
    gauss_defect = abs(grid.integrate(k1 * k2 * dA) - 4.0 * np.pi)
    dz_check = CubicSpline(grid.nodes, z)(grid.nodes, 1)
    metric_residual = float(np.max(np.abs(ds * ds + dz_check ** 2 - E)) / scale)
    result = EmbeddingResult(grid, phi.copy(), z, k1 + k2, k1, k2, float(gauss_defect),
                             metric_residual)
    if check and (gauss_defect > tol or metric_residual > tol):
        raise EmbeddingQualityError(
            f"embedding defects: Gauss-Bonnet {gauss_defect:.3g}, metric {metric_residual:.3g}")
    return result


def _reference_H0(surface, tol=None):
    if surface.is_round:
        return np.full(surface.grid.count, 2.0 / surface.rho_b), None
    emb = embed_surface_of_revolution(surface.grid, surface.E, surface.phi, tol)
    return emb.H0, emb


def liu_yau_mass(surface, tol=None):
    """``(1/8pi) int (H_0 - |H vec|) dA``."""
    if not surface.spacelike:
        raise PreconditionError("mean curvature vector is not spacelike (H^2 <= (Tr k)^2)")
    if np.any(surface.gauss_curvature <= 0):
        raise PreconditionError("boundary Gauss curvature must be positive")
    H0, emb = _reference_H0(surface, tol)
    value = surface.integrate(H0 - surface.H_norm) / (8.0 * np.pi)
    details = {"H_norm_mean": float(np.mean(surface.H_norm)), "area": float(surface.area)}
    if emb is not None:
        details.update(gauss_defect=emb.gauss_defect, metric_residual=emb.metric_residual)
    return MassValue(float(value), "liu_yau", surface.token(), details)


@dataclass(frozen=True, eq=False)
class ObserverFields:
    """Pointwise ingredients of the Wang-Yau energy for one time function."""

    tau: np.ndarray
    grad_sq: np.ndarray
    laplacian: np.ndarray
    boost: np.ndarray
    h_data: np.ndarray
    E_hat: np.ndarray
    K_hat: np.ndarray
    K_combined: np.ndarray


def _gradient_sq(surface, tau):
    dt = surface.grid.d_even(tau)
    return dt, dt * dt / surface.E


def _laplacian(surface, dt):
    g = surface.grid
    sE = np.sqrt(surface.E)
    # phi and tau' are both odd, so the flux is even
    flux = surface.phi * dt / sE
    with np.errstate(divide="ignore", invalid="ignore"):
        lap = g.d_even(flux) / (surface.phi * sE)
    lap[0] = 2.0 * g.d_odd(dt)[0] / surface.E[0]
    lap[-1] = 2.0 * g.d_odd(dt)[-1] / surface.E[-1]
    return lap


def _hessian_det(surface, tau, dt):
    g = surface.grid
    E, phi = surface.E, surface.phi
    h_tt = (g.d_odd(dt) - g.d_even(E) * dt / (2.0 * E)) / E
    with np.errstate(divide="ignore", invalid="ignore"):
        h_pp = g.d_odd(phi) * dt / (E * phi)
    # poles: the Hessian is isotropic there
    h_pp[0], h_pp[-1] = h_tt[0], h_tt[-1]
    return h_tt * h_pp


def observer_fields(surface, tau):
    """Boost, generalized mean curvature and curvature checks for ``tau``."""
    tau = _profile(surface.grid, tau)
    dt, grad_sq = _gradient_sq(surface, tau)
    lap = _laplacian(surface, dt)
    root = np.sqrt(1.0 + grad_sq)
    Hn = surface.H_norm
    boost = np.arcsinh(-lap / (Hn * root))
    dboost = surface.grid.d_even(boost)
    # alpha of the mean-curvature frame: data alpha minus d(atanh(-P/H))
    gamma = np.arctanh(-surface.P / surface.H)
    alpha_H = surface.alpha - surface.grid.d_even(gamma)
    h = root * Hn * np.cosh(boost) - dt * dboost / surface.E - alpha_H * dt / surface.E
    E_hat = surface.E + dt * dt
    K_hat = intrinsic_gauss_curvature(surface.grid, E_hat, surface.phi)
    K_comb = surface.gauss_curvature + _hessian_det(surface, tau, dt) / (1.0 + grad_sq)
    return ObserverFields(tau, grad_sq, lap, boost, h, E_hat, K_hat, K_comb)


def wang_yau_energy(surface, tau, tol=None):
    """Quasi-local energy for the observer ``tau`` (a theta profile or constant)."""
    if not surface.spacelike:
        raise PreconditionError("mean curvature vector is not spacelike")
    tau = _profile(surface.grid, tau)
    obs = observer_fields(surface, tau)
    if np.all(obs.grad_sq == 0.0):
        H0, emb = _reference_H0(surface, tol)
        h0 = H0
    else:
        emb = embed_surface_of_revolution(surface.grid, obs.E_hat, surface.phi, tol)
        h0 = np.sqrt(1.0 + obs.grad_sq) * emb.H0
    value = surface.integrate(h0 - obs.h_data) / (8.0 * np.pi)
    details = {"max_boost": float(np.max(np.abs(obs.boost)))}
    if emb is not None:
        details.update(gauss_defect=emb.gauss_defect, metric_residual=emb.metric_residual)
    return MassValue(float(value), "wang_yau_energy", _token(surface.token(), tau), details)


def check_tau_admissible(surface, tau):
    """Convexity of ``sigma + dtau^2``, an untrapped boundary and ``h > 0``."""
    tau = _profile(surface.grid, tau)
    obs = observer_fields(surface, tau)
    lhs = (1.0 + obs.grad_sq) * obs.K_hat
    convex = bool(np.all(lhs > 0) and np.all(obs.K_combined > 0))
    untrapped = bool(np.all(surface.H > np.abs(surface.P)))
    h_positive = bool(np.all(obs.h_data > 0))
    i = int(np.argmin(lhs))
    return VerdictReport(
        "tau_admissible", convex and untrapped and h_positive,
        lhs=float(lhs[i]), rhs=0.0, relation=">",
        details={"convex": convex, "untrapped": untrapped, "h_positive": h_positive,
                 "min_convexity": float(np.min(lhs)),
                 "min_convexity_combined": float(np.min(obs.K_combined)),
                 "convexity_crosscheck": float(np.max(np.abs(lhs - obs.K_combined))),
                 "min_h": float(np.min(obs.h_data)),
                 "frame": "boosted data frame with <H, e4> = -Lap tau / sqrt(1+|grad tau|^2)"})


def wang_yau_mass_over_family(surface, config=None, degree=None, box=None):
    """Minimum of the Wang-Yau energy over ``tau = sum_{l=1}^{L} c_l P_l(cos theta)``.

    Coordinate descent with bounded golden-section line searches, starting at
    ``tau = 0``; inadmissible observers score +inf. The result is an upper
    bound for the infimum over all observers.
    """
    cfg = QuasiLocalConfig() if config is None else config
    L = cfg.family_degree if degree is None else degree
    half_width = (cfg.family_box if box is None else box) * np.sqrt(surface.area / (4 * np.pi))
    grid = surface.grid
    basis = [grid.legendre(l) for l in range(1, L + 1)]
    trace = []

    def energy(c):
        tau = sum((ci * b for ci, b in zip(c, basis)), np.zeros(grid.count))
        try:
            if not check_tau_admissible(surface, tau).holds:
                return np.inf
            value = wang_yau_energy(surface, tau).value
        except (NonConvexProfileError, EmbeddingQualityError, PreconditionError):
            return np.inf
        trace.append((tuple(float(x) for x in c), value))
        return value

    c = np.zeros(L)
    best = energy(c)
    if not np.isfinite(best):
        raise NoAdmissibleObserverError("tau = 0 is not admissible on this boundary")
    for _ in range(cfg.sweeps):
        improved = False
        for i in range(L):
            def line(x, i=i):
                trial = c.copy()
                trial[i] = x
                return energy(trial)

            x, fx = golden_section(line, -half_width, half_width,
                                   cfg.golden_tol * max(half_width, 1.0))
            if np.isfinite(fx) and fx < best - 1e-14:
                c[i], best = x, float(fx)
                improved = True
        if not improved:
            break
    return MassValue(float(best), "wang_yau_family_min", surface.token(),
                     {"coefficients": [float(x) for x in c], "degree": L,
                      "box": float(half_width), "evaluations": len(trace),
                      "trace": trace, "upper_bound": True})
