"""Jang's equation over spherically symmetric data, and the Jang graph.

With ``s`` the proper radial length and ``psi = f_s / sqrt(1 + f_s^2)`` the
radial reduction reads

    (1/rho^2) (rho^2 psi)_s = (k_rr/a) (1 - psi^2) + 2 k_t + eps f,

where ``eps f`` is the capillarity regularization removed by continuation.
The left side is discretized in conservation form (fluxes ``rho^2 psi`` at
half nodes), which keeps the scheme stable when the graph turns vertical
over a trapped region and the fluxes saturate at ``+-rho^2``.
"""

from dataclasses import dataclass, field
from functools import cached_property

import numpy as np
from scipy.integrate import simpson
from scipy.linalg import solve_banded

from . import fd
from .config import FLAT_SOBOLEV, AdmissibilityConfig, JangConfig, Tolerances
from .errors import DomainError, PreconditionError, SolverFailure
from .initial_data import (RadialMetric, _fill_center, check_admissible_boundary,
                           curvature_profile)

INNER_KINDS = ("center", "neumann", "dirichlet")


@dataclass(frozen=True)
class BlowupRecord:
    radius: float
    # +1: f_s -> +inf across the front (future MOTS, theta_plus = 0)
    sign: int
    max_gradient: float
    half_index: int

    @property
    def kind(self):
        return "future" if self.sign > 0 else "past"


@dataclass(frozen=True, eq=False)
class JangSolution:
    data: object
    f: np.ndarray
    tau_b: float
    eps_final: float
    inner: str
    residual: float
    residual_unregularized: float
    blowup: BlowupRecord | None = None
    # one (eps, newton iterations, residual, sup|f - f_previous|) row per stage
    trace: list = field(default_factory=list)

    @property
    def nodes(self):
        return self.data.nodes

    @cached_property
    def consistency_residual(self):
        """Pointwise Jang operator on ``f`` with centered differences (eps = 0).

        Independent of the conservative scheme used to solve, so it measures
        the truncation error and shrinks like ``dr^2`` for smooth solutions.
        """
        return jang_operator(self.data, self.f)


def _half(v):
    return 0.5 * (v[1:] + v[:-1])


class _Scheme:
    """Conservative discretization of the radial Jang operator."""

    def __init__(self, data, inner, tau_b, inner_value):
        r = data.nodes
        self.n = r.size
        self.h = np.diff(r)
        sa = np.sqrt(data.a)
        self.c = 1.0 / (self.h * _half(sa))
        self.R2 = _half(data.rho) ** 2
        width = np.empty(self.n)
        width[1:-1] = 0.5 * (r[2:] - r[:-2])
        width[0] = 0.5 * self.h[0]
        width[-1] = 0.5 * self.h[-1]
        self.V = data.rho ** 2 * sa * width
        if inner == "center":
            # exact volume of the small ball around the center
            self.V[0] = self.R2[0] * _half(sa)[0] * (0.5 * self.h[0]) / 3.0
        self.kr = data.k_radial
        self.kt = data.k_t
        self.inner = inner
        self.tau_b = tau_b
        self.inner_value = inner_value
        # rounding of f propagates through q = df / (h sqrt a) and the flux difference
        self.amplification = float(np.max(self.R2[1:] / self.V[1:-1]) * np.max(self.c))

    def psi(self, f):
        q = np.diff(f) * self.c
        s = np.sqrt(1.0 + q * q)
        return q, q / s, self.c / s ** 3

    def residual(self, f, eps):
        _, psi, _ = self.psi(f)
        flux = self.R2 * psi
        F = np.empty(self.n)
        P = np.empty(self.n)
        P[1:-1] = 0.5 * (psi[1:] ** 2 + psi[:-1] ** 2)
        P[0] = psi[0] ** 2
        F[1:-1] = (flux[1:] - flux[:-1]) / self.V[1:-1]
        F[0] = flux[0] / self.V[0]
        F[:-1] -= self.kr[:-1] * (1.0 - P[:-1]) + 2.0 * self.kt[:-1] + eps * f[:-1]
        if self.inner == "dirichlet":
            F[0] = f[0] - self.inner_value
        F[-1] = f[-1] - self.tau_b
        return F

    def jacobian(self, f, eps):
        # banded storage for solve_banded((1, 1), ...)
        _, psi, D = self.psi(f)
        n = self.n
        ab = np.zeros((3, n))
        i = np.arange(1, n - 1)
        up = D[i] * (self.R2[i] / self.V[i] + self.kr[i] * psi[i])
        lo = D[i - 1] * (self.R2[i - 1] / self.V[i] - self.kr[i] * psi[i - 1])
        ab[1, i] = (-D[i] * self.R2[i] / self.V[i] - D[i - 1] * self.R2[i - 1] / self.V[i]
                    + self.kr[i] * (psi[i - 1] * D[i - 1] - psi[i] * D[i]) - eps)
        ab[0, i + 1] = up
        ab[2, i - 1] = lo
        if self.inner == "dirichlet":
            ab[1, 0] = 1.0
        else:
            g0 = D[0] * (self.R2[0] / self.V[0] + 2.0 * self.kr[0] * psi[0])
            ab[1, 0] = -g0 - eps
            ab[0, 1] = g0
        ab[1, -1] = 1.0
        return ab


def _newton(scheme, f, eps, cfg):
    def tolerance(f):
        floor = 8.0 * np.finfo(float).eps * scheme.amplification * np.max(np.abs(f))
        return max(cfg.newton_tol, floor)

    tol = tolerance(f)
    F = scheme.residual(f, eps)
    norm = np.max(np.abs(F))
    its = 0
    while norm > tol and its < cfg.max_newton:
        its += 1
        step = solve_banded((1, 1), scheme.jacobian(f, eps), -F)
        if not np.all(np.isfinite(step)):
            return f, norm, its, False
        merit = np.sum(F * F)
        lam = 1.0
        for _ in range(cfg.max_halvings + 1):
            trial = f + lam * step
            Ft = scheme.residual(trial, eps)
            if np.sum(Ft * Ft) <= (1.0 - 1e-4 * lam) * merit:
                break
            lam *= 0.5
        else:
            return f, norm, its, False
        f, F = trial, Ft
        tol = tolerance(f)
        new_norm = np.max(np.abs(F))
        if lam * np.max(np.abs(step)) <= 1e-15 * max(1.0, np.max(np.abs(f))):
            norm = new_norm
            break
        norm = new_norm
    return f, norm, its, norm <= tol


def _detect_blowup(data, f, cfg):
    # the graph turns vertical over the whole trapped region; the cylinder
    # sits at its outer edge, i.e. the outermost cell above the threshold
    q = np.diff(f) / (np.diff(data.nodes) * _half(np.sqrt(data.a)))
    steep = np.flatnonzero(np.abs(q) > cfg.blowup_threshold)
    if steep.size == 0:
        return None
    j = int(steep[-1])
    # on a cylinder the area radius stops changing along the graph
    drho = np.diff(data.rho)[j] / np.diff(data.nodes)[j]
    a_half = 0.5 * (data.a[j] + data.a[j + 1])
    slope = abs(drho) / np.sqrt(a_half * (1.0 + q[j] ** 2))
    if slope > cfg.plateau_slope:
        return None
    r = 0.5 * (data.nodes[j] + data.nodes[j + 1])
    return BlowupRecord(float(r), int(np.sign(q[j])), float(np.max(np.abs(q))), j)


def solve_jang_dirichlet(data, tau_b=0.0, config=None, inner="auto", inner_value=0.0,
                         polish=None, check_boundary=True, tolerances=None):
    """Solve the Dirichlet problem ``f(r_max) = tau_b`` by eps-continuation.

    ``inner`` selects the condition at r_min: ``center`` (regular origin,
    needs rho(0) = 0), ``neumann`` (zero radial flux, for truncated balls)
    or ``dirichlet`` (annuli, value ``inner_value``). ``polish`` adds a final
    eps = 0 solve; by default it is done whenever both ends are Dirichlet.
    """
    cfg = JangConfig() if config is None else config
    if inner == "auto":
        inner = "center" if data.metric.center_mask[0] else "dirichlet"
    if inner not in INNER_KINDS:
        raise ValueError(f"inner must be one of {INNER_KINDS}")
    if inner == "center" and not data.metric.center_mask[0]:
        raise ValueError("a regular center needs rho(r_min) = 0")
    if check_boundary:
        verdict = check_admissible_boundary(data, tolerances)
        if not verdict.details["untrapped"]:
            raise PreconditionError(
                f"boundary is not untrapped: H={verdict.lhs:.6g}, |Tr k|={verdict.rhs:.6g}")
    schedule = cfg.schedule()
    if np.any(np.diff(schedule) >= 0):
        raise ValueError("eps schedule must be strictly decreasing")
    polish = (inner == "dirichlet") if polish is None else polish

    scheme = _Scheme(data, inner, float(tau_b), float(inner_value))
    f = np.full(data.grid.count, float(tau_b))
    if inner == "dirichlet":
        f = np.interp(data.nodes, [data.nodes[0], data.nodes[-1]], [inner_value, tau_b])
    trace = []
    eps_final = schedule[0]
    stages = list(schedule) + ([0.0] if polish else [])
    for eps in stages:
        f_new, norm, its, ok = _newton(scheme, f, eps, cfg)
        if not ok:
            if _detect_blowup(data, f_new, cfg) is not None or eps == 0.0:
                # a saturated front or an ill-posed eps = 0 step: keep the last stage
                if eps == 0.0:
                    break
                trace.append((eps, its, norm, float(np.max(np.abs(f_new - f)))))
                f = f_new
                eps_final = eps
                break
            raise SolverFailure(f"Newton failed at eps={eps:.3g} (residual {norm:.3g})")
        trace.append((eps, its, norm, float(np.max(np.abs(f_new - f)))))
        f = f_new
        eps_final = eps

    F = scheme.residual(f, eps_final)
    F0 = scheme.residual(f, 0.0)
    blowup = _detect_blowup(data, f, cfg)
    return JangSolution(data=data, f=f, tau_b=float(tau_b), eps_final=eps_final, inner=inner,
                        residual=float(np.max(np.abs(F))),
                        residual_unregularized=float(np.max(np.abs(F0))),
                        blowup=blowup, trace=trace)


def jang_operator(data, f, eps=0.0):
    """Pointwise residual of the radial Jang equation, second-order differences.

    Uses the expanded form ``psi_s + 2 rho_s psi / rho`` so that only first
    and second differences of the data enter (no nested one-sided stencils).
    """
    metric = data.metric
    r = data.nodes
    df = fd.d1(f, r)
    fs = df / metric.sqrt_a
    fss = (fd.d2(f, r) - metric.da * df / (2.0 * data.a)) / data.a
    root = np.sqrt(1.0 + fs * fs)
    psi = fs / root
    with np.errstate(divide="ignore", invalid="ignore"):
        lhs = fss / root ** 3 + 2.0 * metric.drho * psi / (metric.rho * metric.sqrt_a)
    lhs = _fill_center(lhs, metric.center_mask, r)
    return lhs - data.k_radial * (1.0 - psi * psi) - 2.0 * data.k_t - eps * f


@dataclass(frozen=True, eq=False)
class JangGraph:
    """Fields of the Jang graph ``gbar = g + df^2`` on the (sub)grid."""

    data: object
    f: np.ndarray
    df: np.ndarray
    gbar_rr: np.ndarray
    h_rr: np.ndarray
    h_t: np.ndarray
    w_r: np.ndarray
    X_r: np.ndarray
    Rbar: np.ndarray
    divX: np.ndarray
    X_norm_sq: np.ndarray
    kbar_norm_sq: np.ndarray
    X_nu_boundary: float

    @property
    def nodes(self):
        return self.data.nodes

    @cached_property
    def metric(self):
        return RadialMetric(self.data.grid, self.gbar_rr, self.data.rho)

    @cached_property
    def X_nu(self):
        """``X(nu_bar) = X_r / sqrt(gbar_rr)`` at every node."""
        return self.X_r / np.sqrt(self.gbar_rr)

    @cached_property
    def scalar_bound_defect(self):
        """``Rbar - 2|X|^2 + 2 div X``; nonnegative up to ``16 pi (mu - |J|)``-type terms."""
        return self.Rbar - 2.0 * self.X_norm_sq + 2.0 * self.divX

    @cached_property
    def vacuum_identity(self):
        """``Rbar - 2|X|^2 + 2 div X - |h - k|^2``; vanishes for vacuum data."""
        return self.scalar_bound_defect - self.kbar_norm_sq

    @cached_property
    def volume_density(self):
        return 4.0 * np.pi * self.data.rho ** 2 * np.sqrt(self.gbar_rr)


def _fix_ends(values, r, width=2):
    # nested one-sided stencils leave O(dr) errors in the first nodes of
    # third-derivative quantities; extrapolate them from the interior
    out = values.copy()
    for ends, base in ((np.arange(width), np.arange(width, width + 3)),
                       (np.arange(-width, 0), np.arange(-width - 3, -width))):
        if np.all(np.isfinite(values[base])):
            out[ends] = np.polyval(np.polyfit(r[base], values[base], 2), r[ends])
    return out


def assemble_jang_graph(data, sol, r_max=None):
    """Graph quantities from a Jang solution.

    ``r_max`` restricts nothing; the whole grid is used, and a blow-up inside
    it is a domain error. Truncate the data first to work outside a cylinder.
    """
    if sol.blowup is not None and data.grid.contains(sol.blowup.radius):
        raise DomainError(f"Jang graph blows up at r={sol.blowup.radius:.6g} inside the domain")
    metric = data.metric
    r = data.nodes
    f = sol.f
    df = fd.d1(f, r)
    d2f = fd.d2(f, r)
    a = data.a
    v = np.sqrt(1.0 + df * df / a)
    gbar = a + df * df
    h_rr = (d2f - metric.da * df / (2.0 * a)) / v
    with np.errstate(divide="ignore", invalid="ignore"):
        h_t = metric.drho * df / (a * metric.rho * v)
    h_t = _fill_center(h_t, metric.center_mask, r)
    w_r = df / v
    X_r = df / (a * v) * (h_rr - data.k_rr)
    sg = np.sqrt(gbar)
    X_norm_sq = X_r ** 2 / gbar
    with np.errstate(divide="ignore", invalid="ignore"):
        divX = fd.d1(data.rho ** 2 * X_r / sg, r) / (data.rho ** 2 * sg)
    divX = _fill_center(divX, metric.center_mask, r)
    Rbar = curvature_profile(RadialMetric(data.grid, gbar, data.rho)).R
    divX, Rbar = _fix_ends(divX, r), _fix_ends(Rbar, r)
    kbar = ((h_rr - data.k_rr) / gbar) ** 2 + 2.0 * (h_t - data.k_t) ** 2
    return JangGraph(data=data, f=f, df=df, gbar_rr=gbar, h_rr=h_rr, h_t=h_t, w_r=w_r,
                     X_r=X_r, Rbar=Rbar, divX=divX, X_norm_sq=X_norm_sq, kbar_norm_sq=kbar,
                     X_nu_boundary=float(X_r[-1] / sg[-1]))


def truncate_outside_blowup(sol, offset=2):
    """The part of a blown-up solution outside the cylinder.

    The new inner end is ``offset`` nodes beyond the steep cell, so the
    retained graph is a finite piece of the cylinder plus the regular part.
    """
    if sol.blowup is None:
        return sol
    start = sol.blowup.half_index + 1 + offset
    if start > sol.data.grid.count - 16:
        raise DomainError("blow-up too close to the outer boundary to truncate")
    data = sol.data.restrict(start)
    return JangSolution(data=data, f=sol.f[start:], tau_b=sol.tau_b, eps_final=sol.eps_final,
                        inner="truncated", residual=sol.residual,
                        residual_unregularized=sol.residual_unregularized,
                        blowup=None, trace=sol.trace)


@dataclass(frozen=True)
class AdmissibilityReport:
    L1: float
    L32: float
    L65: float
    x_nu_positive: bool
    X_nu_boundary: float
    d1: float
    d2: float
    d3: float
    smallness_ok: bool
    flux_ok: bool
    norms_ok: bool
    sobolev_constant: float
    smallness_lhs: float
    smallness_rhs: float
    flux_lhs: float
    flux_rhs: float
    C1: float
    delta: float

    @property
    def admissible(self):
        return self.x_nu_positive and self.norms_ok and self.smallness_ok and self.flux_ok

    def to_dict(self):
        return {k: (bool(v) if isinstance(v, (bool, np.bool_)) else float(v))
                for k, v in self.__dict__.items()}


def _norm(values, dV, r, p):
    return float(simpson(np.abs(values) ** p * dV, x=r) ** (1.0 / p))


def audit_admissible_X(graph, config=None):
    """Norm bounds on ``(div X)_+`` and the two smallness inequalities for X.

    Each d_i left unset takes the measured norm, the tightest value for
    which the corresponding norm bound holds.
    """
    cfg = AdmissibilityConfig() if config is None else config
    r = graph.nodes
    dV = graph.volume_density
    pos = np.maximum(graph.divX, 0.0)
    L1 = _norm(pos, dV, r, 1.0)
    L32 = _norm(pos, dV, r, 1.5)
    L65 = _norm(pos, dV, r, 1.2)
    d1 = L1 if cfg.d1 is None else cfg.d1
    d2 = L32 if cfg.d2 is None else cfg.d2
    d3 = L65 if cfg.d3 is None else cfg.d3
    norms_ok = L1 <= d1 and L32 <= d2 and L65 <= d3
    scale = np.sqrt(np.max(graph.gbar_rr)) if cfg.sobolev_scale is None else cfg.sobolev_scale
    C_sob = FLAT_SOBOLEV * scale
    delta, C1 = cfg.delta, cfg.C1
    area = 4.0 * np.pi * graph.data.rho[-1] ** 2
    smallness_lhs = C1 * delta ** (1.0 / 3.0) * area ** (2.0 / 3.0) + d2
    smallness_rhs = 2.0 / (3.0 * C_sob)
    # the bound on 32 pi A_delta must not exceed twice the boundary flux of X
    flux_lhs = ((C1 * delta ** 0.5 * area ** (5.0 / 6.0) + 2.0 * d3)
              * np.sqrt(3.0 * C_sob ** 2 * C1 ** 2 * delta * area ** (5.0 / 3.0)
                        + 3.0 * C_sob ** 2 * d3 ** 2) / 8.0
              + C1 * delta ** (2.0 / 3.0) * area + 2.0 * d1)
    flux_rhs = 2.0 * graph.X_nu_boundary * area
    smallness_ok = smallness_lhs <= smallness_rhs
    flux_ok = bool(flux_lhs <= flux_rhs)
    return AdmissibilityReport(
        L1=L1, L32=L32, L65=L65, x_nu_positive=bool(graph.X_nu_boundary > 0),
        X_nu_boundary=graph.X_nu_boundary, d1=d1, d2=d2, d3=d3, smallness_ok=bool(smallness_ok),
        flux_ok=flux_ok, norms_ok=bool(norms_ok), sobolev_constant=C_sob,
        smallness_lhs=smallness_lhs, smallness_rhs=smallness_rhs, flux_lhs=flux_lhs, flux_rhs=flux_rhs, C1=C1, delta=delta)
