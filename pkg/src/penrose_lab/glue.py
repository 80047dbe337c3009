"""Round Shi-Tam extensions, corner smoothing and the conformal correction.

Everything is written along the proper radial length ``t`` of the glued
manifold, with the corner at ``t = 0``: the Jang graph occupies ``t < 0`` and
the extension ``t > 0``. In these coordinates the metric is
``dt^2 + rho(t)^2 dOmega^2`` and

    R = 2 (1 - rho_t^2) / rho^2 - 4 rho_tt / rho,
    div X = X_t' + 2 rho_t X_t / rho     for X = X_t dt.
"""

from dataclasses import dataclass, field, replace
from functools import cached_property

import numpy as np
from numpy.polynomial import Polynomial
from scipy.integrate import solve_ivp, trapezoid
from scipy.interpolate import CubicSpline
from scipy.linalg import solve_banded

from .config import FLAT_SOBOLEV, GlueConfig, Tolerances
from .errors import (ConsistencyError, IncompletePipelineError, PreconditionError,
                     SolverFailure)
from .initial_data import RadialGrid, RadialMetric
from .verdict import VerdictReport, compare

FOUR_PI = 4.0 * np.pi


def _scalar(rho, rho_t, rho_tt):
    return 2.0 * (1.0 - rho_t ** 2) / rho ** 2 - 4.0 * rho_tt / rho


# ---------------------------------------------------------------- extension

@dataclass(frozen=True, eq=False)
class RoundExtension:
    """Schwarzschild exterior of mass ``m_ext`` attached to a round sphere."""

    A: float
    Hbar: float
    m_ext: float
    rho_b: float
    t_far: float
    shi_tam: VerdictReport
    _ode: object = field(repr=False, default=None)

    def profile(self, t):
        """``(rho, rho_t, rho_tt)`` at proper distances ``t >= 0`` from the boundary."""
        t = np.asarray(t, dtype=float)
        y = self._ode.sol(t)
        rho = y[0]
        return rho, y[1], self.m_ext / rho ** 2

    def samples(self, count=256):
        t = np.linspace(0.0, self.t_far, count)
        rho, rho_t, rho_tt = self.profile(t)
        return t, rho, _scalar(rho, rho_t, rho_tt)

    @property
    def boundary_H(self):
        rho, rho_t, _ = self.profile(0.0)
        return float(2.0 * rho_t / rho)


def shi_tam_round_extension(A, Hbar, far_factor=100.0):
    """Scalar-flat exterior with boundary area ``A`` and mean curvature ``Hbar``.

    For a round boundary this is a Schwarzschild exterior with
    ``Hbar = (2 / rho_b) sqrt(1 - 2 m / rho_b)``. Also evaluates both sides of
    the Shi-Tam inequality ``(1/8pi) int (H0 - Hbar) dA >= m`` with the
    round reference curvature ``H0 = 2 / rho_b``.
    """
    if not A > 0:
        raise PreconditionError("boundary area must be positive")
    if not Hbar > 0:
        raise PreconditionError("boundary mean curvature must be positive")
    rho_b = np.sqrt(A / FOUR_PI)
    slope = 0.5 * Hbar * rho_b
    m = 0.5 * rho_b * (1.0 - slope ** 2)

    def rhs(t, y):
        return [y[1], m / y[0] ** 2]

    def reach(t, y):
        return y[0] - far_factor * rho_b
    reach.terminal = True

    # rho_t stays above min(slope, 1): it decreases towards 1 when m < 0
    span = 4.0 * far_factor * rho_b / max(min(slope, 1.0), 1e-3)
    ode = solve_ivp(rhs, (0.0, span), [rho_b, slope], method="DOP853", rtol=1e-13,
                    atol=1e-13 * rho_b, dense_output=True, events=reach)
    if ode.status != 1:
        raise SolverFailure("extension profile did not reach the far radius")
    lhs = (A / (8.0 * np.pi)) * (2.0 / rho_b - Hbar)
    check = compare("shi_tam_extension", lhs, m, relation=">=",
                    H0=2.0 / rho_b, Hbar=float(Hbar), rho_b=float(rho_b))
    return RoundExtension(float(A), float(Hbar), float(m), float(rho_b),
                          float(ode.t_events[0][0]), check, ode)


# ---------------------------------------------------------------- smoothing

def _smoothstep(x):
    """C^2 step 0 -> 1 on [0, 1] and its first two derivatives."""
    x = np.clip(x, 0.0, 1.0)
    s = x ** 3 * (10.0 - 15.0 * x + 6.0 * x * x)
    ds = 30.0 * x * x * (1.0 - x) ** 2
    d2s = 60.0 * x * (1.0 - x) * (1.0 - 2.0 * x)
    return s, ds, d2s


def cutoff(t, delta):
    """The cutoff applied to ``X_t``: 1 for ``t <= -delta/2``, 0 for ``t >= -delta^2/200``.

    Returns the values and the first derivative (non-positive).
    """
    lo, hi = -0.5 * delta, -delta * delta / 200.0
    s, ds, _ = _smoothstep((np.asarray(t) - lo) / (hi - lo))
    return 1.0 - s, -ds / (hi - lo)


# quartic bump (15/16)(1 - x^2)^2 on [-1, 1] and its moment antiderivatives
_BUMP = Polynomial([15 / 16, 0, -30 / 16, 0, 15 / 16])
_MOMENTS = [(Polynomial.basis(k) * _BUMP).integ(lbnd=-1) for k in range(3)]


def _mollified_kink(t, eps):
    """``q * phi_eps`` for ``q = t_+^2 / 2`` and its first two derivatives."""
    y = np.asarray(t, dtype=float) / eps
    yc = np.clip(y, -1.0, 1.0)
    P0, P1, P2 = (P(yc) for P in _MOMENTS)
    # q * phi (t) = 1/2 int_{-1}^{y} (t - eps x)^2 phi(x) dx
    v = 0.5 * eps ** 2 * (y * y * P0 - 2.0 * y * P1 + P2)
    dv = eps * (y * P0 - P1)
    d2v = P0
    return v, dv, d2v


@dataclass(frozen=True, eq=False)
class GluedData:
    t: np.ndarray
    rho: np.ndarray
    rho_t: np.ndarray
    rho_tt: np.ndarray
    Rbar: np.ndarray
    X_t: np.ndarray
    divX: np.ndarray
    X_norm_sq: np.ndarray
    kbar_norm_sq: np.ndarray
    K: np.ndarray
    K_minus: np.ndarray
    cutoff: np.ndarray
    tube: np.ndarray
    region: np.ndarray  # -1 graph, 0 tube, +1 extension
    delta: float
    ext: RoundExtension
    graph: object
    corner_jump: float
    noise_floor: np.ndarray
    config: GlueConfig

    @cached_property
    def kappa(self):
        return self.K_minus + 2.0 * np.maximum(self.divX, 0.0)

    @property
    def div_sup_tube(self):
        return float(np.max(np.abs(self.divX[self.tube])))

    @property
    def div_scaled(self):
        """``sup_tube |div X| delta^(1/3)``, bounded in delta if the cutoff obeys its slope bound."""
        return self.div_sup_tube * self.delta ** (1.0 / 3.0)

    @property
    def K_minus_sup_tube(self):
        return float(np.max(self.K_minus[self.tube]))

    @property
    def C1_measured(self):
        """Smallest C1 with ``|div X|, K_- <= C1 delta^(-1/3)`` on the tube."""
        return max(self.div_sup_tube, self.K_minus_sup_tube) * self.delta ** (1.0 / 3.0)

    @property
    def K_minus_outside(self):
        out = ~self.tube
        return float(np.max(self.K_minus[out])) if out.any() else 0.0

    @property
    def support_confined(self):
        return self.K_minus_outside == 0.0

    @property
    def boundary_area(self):
        return self.ext.A

    @property
    def X_flux(self):
        """``int X(nu) dA`` over the corner sphere."""
        return float(self.graph.X_nu_boundary * self.ext.A)

    @cached_property
    def metric(self):
        """Glued metric on the shifted coordinate ``x = t - t_min``."""
        return RadialMetric(RadialGrid(self.t - self.t[0]), np.ones_like(self.t), self.rho)

    def refined(self):
        cfg = replace(self.config, tube_nodes=2 * self.config.tube_nodes,
                      grading=1.0 + 0.5 * (self.config.grading - 1.0))
        return smooth_corner(self.graph, self.ext, self.delta, cfg)


def _graded(start, h0, h_max, direction, length, q, stop_at_max=False):
    # points start + direction * (h0 + h0 q + ...), spacing capped at h_max
    pts, h, x = [], h0, 0.0
    while x + h < length and not (stop_at_max and h >= h_max):
        x += h
        pts.append(start + direction * x)
        h = min(h * q, h_max)
    return np.array(pts)


def smooth_corner(graph, ext, delta, config=None, tolerances=None):
    """Glue a Jang graph to a round extension and smooth the corner in a delta-tube.

    The metric is mollified only through its singular part: the profile is
    C^1 across the corner with a jump ``J`` in ``rho_tt``, and
    ``rho + chi (q * phi - q)`` with ``q = J t_+^2 / 2`` replaces the kink by
    its quartic-bump mollification near ``t = 0``. ``chi`` equals 1 on
    ``|t| <= delta/4`` and vanishes for ``|t| >= delta/2``. The radial
    component of X is multiplied by the cutoff; the graph second fundamental
    form is cut off the same way.
    """
    cfg = GlueConfig() if config is None else config
    tol = Tolerances() if tolerances is None else tolerances
    metric = graph.metric
    rho_n = metric.rho
    sg = metric.sqrt_a
    s = metric.proper_length
    tg = s - s[-1]
    if -tg[0] <= delta:
        raise PreconditionError("graph is shorter than the smoothing tube")
    rho_t_n = metric.drho / sg
    # d/ds (rho_r / sqrt(a)) without re-differencing rho_t (one order lost at the ends)
    rho_tt_n = metric.d2rho / metric.a - metric.drho * metric.da / (2.0 * metric.a ** 2)
    H_graph = 2.0 * rho_t_n[-1] / rho_n[-1]
    if abs(H_graph - ext.boundary_H) > 1e-8 or abs(FOUR_PI * rho_n[-1] ** 2 - ext.A) > 1e-8 * ext.A:
        raise PreconditionError(
            f"corner mismatch: H graph {H_graph:.12g} vs extension {ext.boundary_H:.12g}")

    spl = {name: CubicSpline(tg, v) for name, v in
           (("rho", rho_n), ("rho_t", rho_t_n), ("rho_tt", rho_tt_n), ("X", graph.X_nu),
            ("kbar", graph.kbar_norm_sq))}
    dX = spl["X"].derivative()

    # grid: graph nodes | graded | uniform tube | graded | extension
    h_tube = delta / cfg.tube_nodes
    tube = np.linspace(-0.5 * delta, 0.5 * delta, cfg.tube_nodes + 1)
    h_graph = float(tg[-1] - tg[-2])
    inner = _graded(-0.5 * delta, h_tube, h_graph, -1.0, -tg[0] - 0.5 * delta, cfg.grading,
                    stop_at_max=True)
    edge = inner[-1] if inner.size else -0.5 * delta
    keep = tg < edge - 0.5 * h_graph
    outer = _graded(0.5 * delta, h_tube, cfg.far_spacing * ext.rho_b, 1.0,
                    ext.t_far - 0.5 * delta, cfg.grading)
    t = np.concatenate([tg[keep], inner[::-1], tube, outer, [ext.t_far]])
    if t[-2] >= t[-1] - 1e-9 * ext.t_far:
        t = np.delete(t, -2)
    region = np.where(t < -0.5 * delta, -1, np.where(t > 0.5 * delta, 1, 0))
    in_tube = region == 0
    n_graph = int(keep.sum())

    # base (unsmoothed) profile
    rho = np.empty_like(t)
    rho_t = np.empty_like(t)
    rho_tt = np.empty_like(t)
    left = t < 0
    rho[:n_graph], rho_t[:n_graph], rho_tt[:n_graph] = (rho_n[keep], rho_t_n[keep],
                                                        rho_tt_n[keep])
    sel = left & (np.arange(t.size) >= n_graph)
    rho[sel], rho_t[sel], rho_tt[sel] = spl["rho"](t[sel]), spl["rho_t"](t[sel]), spl["rho_tt"](t[sel])
    rho[~left], rho_t[~left], rho_tt[~left] = ext.profile(t[~left])

    # mollify the rho_tt jump inside the tube
    J = ext.m_ext / ext.rho_b ** 2 - float(rho_tt_n[-1])
    tt = t[in_tube]
    chi, dchi, d2chi = _smoothstep((0.5 * delta - np.abs(tt)) / (0.25 * delta))
    dchi = -np.sign(tt) * dchi / (0.25 * delta)
    d2chi = -d2chi / (0.25 * delta) ** 2
    tp = np.maximum(tt, 0.0)
    v, dv, d2v = _mollified_kink(tt, 0.25 * delta)
    D, dD, d2D = J * (v - 0.5 * tp ** 2), J * (dv - tp), J * (d2v - (tt > 0))
    rho[in_tube] += chi * D
    rho_t[in_tube] += dchi * D + chi * dD
    rho_tt[in_tube] += d2chi * D + 2.0 * dchi * dD + chi * d2D

    # fields
    sig, dsig = cutoff(t, delta)
    sig = np.where(t < 0, sig, 0.0)
    dsig = np.where(t < 0, dsig, 0.0)
    R = np.zeros_like(t)
    X = np.zeros_like(t)
    divX = np.zeros_like(t)
    kbar = np.zeros_like(t)
    R[:n_graph] = graph.Rbar[keep]
    X[:n_graph] = graph.X_nu[keep]
    divX[:n_graph] = graph.divX[keep]
    kbar[:n_graph] = graph.kbar_norm_sq[keep]
    sel = left & (np.arange(t.size) >= n_graph)
    X_raw = spl["X"](t[sel])
    X[sel] = sig[sel] * X_raw
    divX[sel] = (dsig[sel] * X_raw + sig[sel] * dX(t[sel])
                 + 2.0 * sig[sel] * X_raw * rho_t[sel] / rho[sel])
    kbar[sel] = sig[sel] ** 2 * spl["kbar"](t[sel])
    R[sel] = _scalar(rho[sel], rho_t[sel], rho_tt[sel])
    R[in_tube] = _scalar(rho[in_tube], rho_t[in_tube], rho_tt[in_tube])
    # the extension is scalar flat with X = 0, k = 0 (exactly, not up to rounding)
    K = R - 2.0 * X ** 2 + 2.0 * divX - kbar
    K[region == 1] = 0.0
    R[region == 1] = 0.0

    # discretization allowance on the graph and tube nodes, sized by the terms entering K
    noise = np.zeros_like(t)
    with np.errstate(divide="ignore", invalid="ignore"):
        terms = (2.0 * (1.0 + rho_t ** 2) / rho ** 2 + 4.0 * np.abs(rho_tt / rho)
                 + 2.0 * X ** 2 + 2.0 * np.abs(divX) + kbar)
    # a regular center: take the allowance of the neighbouring node
    bad = ~np.isfinite(terms)
    if bad.any():
        terms[bad] = np.interp(t[bad], t[~bad], terms[~bad])
    # the tube inherits the graph's error through the measured corner jump
    on_graph = region <= 0
    noise[on_graph] = cfg.tol_K + tol.discretization(graph.data.grid.spacing) * terms[on_graph]
    K_minus = np.where(-K > noise, -K, 0.0)
    return GluedData(t=t, rho=rho, rho_t=rho_t, rho_tt=rho_tt, Rbar=R, X_t=X, divX=divX,
                     X_norm_sq=X ** 2, kbar_norm_sq=kbar, K=K, K_minus=K_minus, cutoff=sig,
                     tube=in_tube, region=region, delta=float(delta), ext=ext, graph=graph,
                     corner_jump=float(J), noise_floor=noise, config=cfg)


# ---------------------------------------------------------------- conformal

@dataclass(frozen=True, eq=False)
class ConformalSolution:
    glued: GluedData
    start: int
    w: np.ndarray
    A_tail: float
    A_volume: float
    L6_norm_w: float
    L6_bound: float
    R_hat: np.ndarray
    R_floor: np.ndarray
    m_adm_hat: float
    sobolev_constant: float
    details: dict = field(default_factory=dict)

    @property
    def t(self):
        return self.glued.t[self.start:]

    @property
    def u(self):
        return 1.0 + self.w

    @property
    def kappa(self):
        return self.glued.kappa[self.start:]

    @property
    def A_delta(self):
        return self.A_tail

    @cached_property
    def metric(self):
        """``u^4`` times the glued metric on ``[t_F, t_far]``."""
        t = self.t
        u = self.u
        return RadialMetric(RadialGrid(t - t[0]), u ** 4, u * u * self.glued.rho[self.start:])

    @property
    def R_hat_min(self):
        return float(np.min(self.R_hat))

    def scalar_check(self, tol=1e-8):
        """``R(u^4 g) >= -tol`` at every node, allowing for the rounding floor."""
        slack = self.R_hat + self.R_floor + tol
        i = int(np.argmin(slack))
        return VerdictReport("conformal_scalar_curvature", bool(slack[i] >= 0), float(self.R_hat[i]),
                             -tol, float(self.R_floor[i]), ">=",
                             {"R_hat_min": self.R_hat_min, "t": float(self.t[i])})

    def mass_identity(self):
        """``m_ADM(u^4 g) = m_ADM(g_+) + 2 A``, with the tail-fitted ADM mass."""
        m_ext = self.glued.ext.m_ext
        rhs = m_ext + 2.0 * self.A_tail
        return compare("conformal_mass_identity", self.m_adm_hat, rhs,
                       tolerance=self.glued.config.tol_A * max(1.0, abs(rhs)), relation="==",
                       m_ext=m_ext, A=self.A_tail)


def _harmonic_profile(rho, m):
    """Decaying radial harmonic function of Schwarzschild, normalized ~ 1/rho."""
    if m == 0.0:
        return 1.0 / rho
    return (1.0 - np.sqrt(1.0 - 2.0 * m / rho)) / m


def _fv_system(t, rho, kappa, robin):
    """Tridiagonal FV form of ``rho^-2 (rho^2 w')' + kappa w / 8 = -kappa / 8``.

    Zero flux at the first node, ``w' = -robin * w`` at the last.
    """
    n = t.size
    h = np.diff(t)
    rho_f = 0.5 * (rho[:-1] + rho[1:])
    c = rho_f ** 2 / h
    # cell integrals of rho^2 by the trapezoid rule on each half cell
    half = 0.25 * h * (rho_f ** 2)
    vol = np.zeros(n)
    vol[:-1] += half + 0.25 * h * rho[:-1] ** 2
    vol[1:] += half + 0.25 * h * rho[1:] ** 2
    ab = np.zeros((3, n))
    diag = np.zeros(n)
    diag[:-1] -= c
    diag[1:] -= c
    diag[-1] -= rho[-1] ** 2 * robin
    diag += kappa * vol / 8.0
    ab[1] = diag
    ab[0, 1:] = c
    ab[2, :-1] = c
    return ab, -kappa * vol / 8.0, vol, c


def _tail_fit(x, y, basis):
    M = np.column_stack(basis)
    coef, *_ = np.linalg.lstsq(M, y, rcond=None)
    return coef


def solve_conformal(glued, F_inner_radius=None, max_refinements=3):
    """Solve the conformal equation outside ``F`` and extract the mass shift.

    ``F_inner_radius`` is a radius of the graph's own coordinate; the
    Neumann boundary sits at the first glued node at or beyond it (default:
    the inner end of the graph).
    """
    cfg = glued.config
    graph = glued.graph
    if F_inner_radius is None:
        t_F = glued.t[0]
    else:
        r = graph.nodes
        if not (r[0] <= F_inner_radius < r[-1]):
            raise PreconditionError("F must lie strictly inside the graph domain")
        s = graph.metric.proper_length
        t_F = float(np.interp(F_inner_radius, r, s - s[-1]))
        if t_F >= -0.5 * glued.delta:
            raise PreconditionError("F reaches into the smoothing tube")
    start = int(np.searchsorted(glued.t, t_F - 1e-12))
    t = glued.t[start:]
    rho = glued.rho[start:]
    kappa = glued.kappa[start:]
    m = glued.ext.m_ext
    g_far = _harmonic_profile(rho[-1], m)
    robin = 1.0 / (rho[-1] ** 2 * g_far)
    ab, b, vol, c = _fv_system(t, rho, kappa, robin)
    # sign condition of the discrete maximum principle
    bad = ab[1] >= 0
    if bad.any():
        if max_refinements > 0:
            return solve_conformal(glued.refined(), F_inner_radius, max_refinements - 1)
        raise SolverFailure("discrete operator lost diagonal dominance")
    w = solve_banded((1, 1), ab, b)
    if not np.all(np.isfinite(w)):
        raise SolverFailure("conformal solve produced non-finite values")

    ext_mask = glued.region[start:] == 1
    lo, hi = cfg.tail_window
    win = ext_mask & (rho >= lo * glued.ext.rho_b) & (rho <= hi * glued.ext.rho_b)
    gp = _harmonic_profile(rho[win], m)
    A_tail = float(_tail_fit(rho[win], w[win], [gp, gp ** 2])[0])
    dV = FOUR_PI * rho ** 2
    A_vol = float(trapezoid(kappa * (w + 1.0) * dV, t) / (32.0 * np.pi))
    scale = max(abs(A_tail), abs(A_vol))
    if scale > 1e-14 and abs(A_tail - A_vol) > cfg.tol_A * scale:
        raise ConsistencyError(f"A_delta tail fit {A_tail:.10g} vs volume integral {A_vol:.10g}")

    # scalar curvature of u^4 g from the discrete Laplacian of u
    flux = c * np.diff(w)
    lap = np.empty_like(w)
    lap[0] = flux[0]
    lap[1:-1] = flux[1:] - flux[:-1]
    lap[-1] = -rho[-1] ** 2 * robin * w[-1] - flux[-1]
    lap /= vol
    u = 1.0 + w
    R_hat = u ** -5 * (glued.Rbar[start:] * u - 8.0 * lap)
    # the flux differences cancel to a few ulps of the face coefficients
    cf = np.zeros_like(w)
    cf[:-1] += c
    cf[1:] += c
    R_floor = 32.0 * np.finfo(float).eps * u ** -5 * cf * (np.abs(w) + 1.0) / vol
    # K values inside the discretization allowance were not corrected for
    R_floor += u ** -4 * glued.noise_floor[start:]

    # L6 norm against its bound, with the measured C1 and norms of (div X)_+
    L6 = float(trapezoid(np.abs(w) ** 6 * dV, t) ** (1.0 / 6.0))
    pos = np.maximum(glued.divX[start:], 0.0) * (glued.region[start:] < 1)
    d3 = float(trapezoid(pos ** 1.2 * dV, t) ** (1.0 / 1.2))
    C_sob = FLAT_SOBOLEV * max(1.0, float(np.sqrt(np.max(graph.gbar_rr))))
    C1 = glued.C1_measured
    area = glued.boundary_area
    L6_bound = float(np.sqrt(3.0 / 64.0 * C_sob ** 2 * C1 ** 2 * glued.delta * area ** (5.0 / 3.0)
                             + 3.0 / 64.0 * C_sob ** 2 * d3 ** 2))

    # ADM mass of u^4 g: Hawking masses of the far spheres fitted in 1/rho
    hat = RadialMetric(RadialGrid(t - t[0]), u ** 4, u * u * rho)
    mH = hat.hawking_mass_profile()
    rh = hat.rho[win]
    m_adm = float(_tail_fit(rh, mH[win], [np.ones_like(rh), 1.0 / rh, rh ** -2.0])[0])
    return ConformalSolution(glued, start, w, A_tail, A_vol, L6, L6_bound, R_hat, R_floor, m_adm, C_sob,
                             details={"d3": d3, "C1": C1, "t_F": float(t[0]),
                                      "w_min": float(w.min()), "nodes": int(t.size)})


# ---------------------------------------------------------------- mass chain

def verify_mass_chain(artifacts, tol=1e-4):
    """Assemble the chain of mass inequalities from pipeline artifacts.

    ``artifacts`` is a mapping with keys ``conformal`` (ConformalSolution),
    ``m_hull`` (Hawking mass of the hull boundary, from the flow start on the
    conformal metric), ``m_LY`` and optionally ``m_WY``.
    """
    missing = [k for k in ("conformal", "m_hull", "m_LY") if artifacts.get(k) is None]
    if missing:
        raise IncompletePipelineError(f"missing artifacts: {', '.join(missing)}")
    sol = artifacts["conformal"]
    glued = sol.glued
    m_hull = float(artifacts["m_hull"])
    m_ly = float(artifacts["m_LY"])
    m_ext = glued.ext.m_ext
    flux = glued.X_flux / (8.0 * np.pi)
    checks = {
        "adm_vs_hull": compare("adm_vs_hull", sol.m_adm_hat, m_hull, tol),
        "adm_upper_bound": compare("adm_upper_bound", sol.m_adm_hat, m_ext + flux, tol, relation="<="),
        "liu_yau_vs_hull": compare("liu_yau_vs_hull", m_ly, m_hull, tol),
    }
    if artifacts.get("m_WY") is not None:
        checks["wang_yau_vs_hull"] = compare("wang_yau_vs_hull", artifacts["m_WY"], m_hull, tol)
    holds = all(c.holds for c in checks.values())
    return VerdictReport(
        "mass_chain", holds, lhs=m_ly, rhs=m_hull, tolerance=tol, relation=">=",
        details={"m_adm_hat": sol.m_adm_hat, "m_ext": m_ext, "X_flux_term": flux,
                 "A_delta": sol.A_tail,
                 "checks": {k: c.to_dict() for k, c in checks.items()}})
