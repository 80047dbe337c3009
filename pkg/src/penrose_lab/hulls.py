"""Minimizing hulls, MOTS and minimal-sphere finders, and Rad of a radial domain.

Competitors for the hull problems are the centered spheres only; in
spherical symmetry a symmetric rearrangement argument reduces the perimeter
problem to the area function ``A(r) = 4 pi rho(r)^2``.
"""

from dataclasses import dataclass

import numpy as np
from scipy.optimize import brentq, minimize_scalar

from .config import Tolerances
from .errors import UnsupportedGeometryError
from .initial_data import expansions

COMPETITORS = "centered spheres"


@dataclass(frozen=True)
class HullResult:
    r_inner: float
    r_hull: float
    jumped: bool
    area_inner: float
    area_hull: float


@dataclass(frozen=True)
class MotsRecord:
    radius: float
    kind: str
    # expansion (H -+ Tr k, or H) evaluated at the root
    theta_plus_residual: float
    area: float = float("nan")


def area_tolerance(metric, r, tol=None):
    tol = Tolerances() if tol is None else tol
    return tol.discretization(metric.grid.spacing) * metric.area_at(r)


def _area_at(metric, r):
    # exact node value when r is a node, so ties are decided on the sampled data
    i = np.searchsorted(metric.nodes, r)
    if i < metric.nodes.size and metric.nodes[i] == r:
        return float(metric.area[i])
    return metric.area_at(r)


def is_outward_minimizing(metric, r, tol=None):
    """True iff ``A(s) >= A(r) - tol_area`` for all nodes ``s >= r``."""
    metric._check(r)
    A_r = _area_at(metric, r)
    after = metric.nodes >= r
    return bool(np.all(metric.area[after] >= A_r - area_tolerance(metric, r, tol)))


def outward_minimizing_mask(metric, tol=None):
    """Nodal version of :func:`is_outward_minimizing` in one backward sweep."""
    A = metric.area
    suffix_min = np.minimum.accumulate(A[::-1])[::-1]
    tol = Tolerances() if tol is None else tol
    return A <= suffix_min + tol.discretization(metric.grid.spacing) * A


def strictly_minimizing_hull(metric, r):
    """Outermost centered sphere of least area among ``s >= r``."""
    metric._check(r)
    nodes, A = metric.nodes, metric.area
    A_r = _area_at(metric, r)
    after = np.flatnonzero(nodes > r)
    if after.size == 0 or A_r < A[after].min():
        return HullResult(float(r), float(r), False, A_r, A_r)
    Am = A[after].min()
    j = int(after[np.flatnonzero(A[after] == Am)[-1]])
    r_hull, A_hull = float(nodes[j]), float(Am)
    if 0 < j < nodes.size - 1 and A[j - 1] > Am and A[j + 1] > Am:
        # the true minimum lies within one cell of the best node
        spline = metric.spline("rho")
        lo = max(nodes[j - 1], r)
        res = minimize_scalar(lambda s: float(spline(s)) ** 2, bounds=(lo, nodes[j + 1]),
                              method="bounded", options={"xatol": 1e-12})
        A_res = 4.0 * np.pi * float(res.fun)
        if A_res < A_hull:
            r_hull, A_hull = float(res.x), A_res
    return HullResult(float(r), r_hull, r_hull > r, A_r, A_hull)


def _roots(nodes, values, fun, rtol):
    """Sign-change brackets of nodal values refined by brentq on ``fun``."""
    roots = []
    s = np.sign(values)
    for i in np.flatnonzero(s[:-1] * s[1:] < 0):
        a, b = nodes[i], nodes[i + 1]
        if np.sign(fun(a)) == np.sign(fun(b)):
            roots.append(0.5 * (a + b))
            continue
        roots.append(brentq(fun, a, b, rtol=rtol, xtol=1e-14))
    for i in np.flatnonzero(values == 0.0):
        roots.append(float(nodes[i]))
    return roots


def find_outermost_mots(data, tol=None):
    """Outermost zero of ``theta_plus = H - Tr k`` (future) or ``H + Tr k`` (past).

    With ``k = 0`` both expansions reduce to H and the record is tagged
    ``minimal``. An endpoint where the expansion is within ``tol_minimal_H``
    of zero counts as a root (a horizon placed on the inner boundary).
    """
    tol = Tolerances() if tol is None else tol
    metric = data.metric
    nodes = data.nodes
    th_plus, th_minus = expansions(data)
    ok = ~metric.center_mask
    if data.is_time_symmetric:
        candidates = {"minimal": (th_plus, 1.0)}
    else:
        candidates = {"future": (th_plus, 1.0), "past": (th_minus, -1.0)}
    best = None
    for kind, (theta, sign) in candidates.items():
        def fun(r, sign=sign):
            return metric.H_at(r) - sign * 2.0 * float(data.k_t_spline(r))

        roots = _roots(nodes[ok], theta[ok], fun, tol.root_rtol)
        for end in (0, -1):
            if ok[end] and abs(theta[end]) < tol.tol_minimal_H:
                roots.append(float(nodes[end]))
        if roots:
            r = max(roots)
            if best is None or r > best.radius:
                best = MotsRecord(float(r), kind, float(fun(r)), metric.area_at(r))
    return best


def find_outermost_minimal(metric, tol=None):
    """Outermost outward-minimizing sphere with ``H = 0``.

    Candidates are sign changes of H, endpoints with ``|H| < tol_minimal_H``
    and local minima of ``|H|`` below that tolerance (the neck of a long
    cylinder, where H only approaches zero).
    """
    tol = Tolerances() if tol is None else tol
    nodes = metric.nodes
    ok = ~metric.center_mask
    H = metric.mean_curvature
    cands = _roots(nodes[ok], H[ok], metric.H_at, tol.root_rtol)
    absH = np.abs(H)
    for i in np.flatnonzero(ok):
        lo, hi = max(i - 1, 0), min(i + 1, nodes.size - 1)
        if absH[i] < tol.tol_minimal_H and absH[i] <= absH[lo] and absH[i] <= absH[hi]:
            cands.append(float(nodes[i]))
    for r in sorted(set(cands), reverse=True):
        if is_outward_minimizing(metric, r, tol):
            return MotsRecord(float(r), "minimal", float(metric.H_at(r)), metric.area_at(r))
    return None


@dataclass(frozen=True)
class RadResult:
    value: float
    kind: str
    plateau_radius: float = float("nan")
    plateau_length: float = float("nan")
    length: float = float("nan")


def rad(metric, plateau_slope=1e-3):
    """Rad of a radial domain for the model geometries.

    ``ball``: rho increasing, Rad is half the geodesic radial length.
    ``cylinder``: rho constant, ``S^2_R x (-L, L)`` with Rad = min(pi R / 2, L).
    ``capped``: a plateau of proper length L at radius R, then increasing;
    Rad = min(pi R / 2, L).
    """
    s = metric.proper_length
    slope = metric.drho / metric.sqrt_a
    flat = np.abs(slope) < plateau_slope
    flat[metric.center_mask] = False
    if np.any(slope[~flat] < 0):
        raise UnsupportedGeometryError("rho decreases somewhere (a neck); Rad is not modelled")
    total = float(s[-1])
    if flat.all():
        R = float(np.mean(metric.rho))
        L = 0.5 * total
        return RadResult(min(np.pi * R / 2.0, L), "cylinder", R, L, total)
    if not flat.any():
        return RadResult(0.5 * total, "ball", length=total)
    idx = np.flatnonzero(flat)
    if idx[0] != 0 or np.any(np.diff(idx) != 1):
        raise UnsupportedGeometryError("plateau of rho away from the inner end")
    end = int(idx[-1])
    if end == 0:
        # a single flat node (e.g. a horizon on the inner boundary) is no plateau
        return RadResult(0.5 * total, "ball", length=total)
    R = float(np.mean(metric.rho[: end + 1]))
    L = float(s[end])
    return RadResult(min(np.pi * R / 2.0, L), "capped", R, L, total)

