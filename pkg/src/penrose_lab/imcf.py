"""Weak inverse mean curvature flow of centered spheres.

In spherical symmetry the weak flow is the family of outward-minimizing
spheres with area ``A_0 e^t``. Writing ``m(r) = min_{s >= r} A(s)`` for the
outward-minimizing envelope of the area function, the flow surface at time t
is where ``m`` first reaches ``A_0 e^t``; plateaus of ``m`` are crossed in one
jump, at constant area, to the strictly minimizing hull.
"""

from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import brentq

from .hulls import strictly_minimizing_hull
from .verdict import VerdictReport


@dataclass(frozen=True, eq=False)
class FlowTrace:
    t: np.ndarray
    r: np.ndarray
    area: np.ndarray
    H: np.ndarray
    m_H: np.ndarray
    # (t, r_before, r_after, m_H before, m_H after)
    jumps: list = field(default_factory=list)
    truncated: bool = False
    dt: float = 1e-3
    area0: float = float("nan")

    @property
    def samples(self):
        return list(zip(self.t.tolist(), self.r.tolist(), self.area.tolist(),
                        self.H.tolist(), self.m_H.tolist()))

    def mass_sequence(self):
        """Hawking masses in flow order, with both sides of every jump."""
        events = [(t, 0, m) for t, m in zip(self.t, self.m_H)]
        for t, _, _, m_before, m_after in self.jumps:
            events += [(t, -1, m_before), (t, 1, m_after)]
        events.sort(key=lambda e: (e[0], e[1]))
        return np.array([e[0] for e in events]), np.array([e[2] for e in events])


def _hawking(A, H):
    return np.sqrt(A / (16.0 * np.pi)) * (1.0 - H * H * A / (16.0 * np.pi))


def run_weak_imcf(metric, r0, t_max, dt=1e-3):
    """Flow from the strictly minimizing hull of the sphere at ``r0``."""
    start = strictly_minimizing_hull(metric, r0)
    nodes, A = metric.nodes, metric.area
    rho = metric.spline("rho")

    def area(r):
        return 4.0 * np.pi * float(rho(r)) ** 2

    A0 = start.area_hull
    i0 = int(np.searchsorted(nodes, start.r_hull, side="right"))
    envelope = np.minimum.accumulate(A[::-1])[::-1]
    minimizing = A <= envelope

    def radius_for(target):
        k = i0 + int(np.searchsorted(envelope[i0:], target, side="left"))
        if k >= nodes.size:
            return None
        lo = start.r_hull if k == i0 else nodes[k - 1]
        if area(nodes[k]) == target:
            return float(nodes[k])
        if area(lo) >= target:
            return float(lo)
        return brentq(lambda s: area(s) - target, lo, nodes[k], xtol=1e-14, rtol=1e-14)

    # jumps: runs of non-minimizing nodes beyond the start
    jumps = []
    idx = np.flatnonzero(~minimizing[i0:]) + i0
    if idx.size:
        runs = np.split(idx, np.flatnonzero(np.diff(idx) != 1) + 1)
        for run in runs:
            level = envelope[run[0]]
            t_j = np.log(level / A0)
            r_before = radius_for(level)
            hull = strictly_minimizing_hull(metric, float(nodes[run[-1]]))
            r_after = max(hull.r_hull, float(nodes[run[-1] + 1]) if hull.area_hull > level else hull.r_hull)
            H_b, H_a = metric.H_at(r_before), metric.H_at(r_after)
            jumps.append((float(t_j), float(r_before), float(r_after),
                          float(_hawking(level, H_b)), float(_hawking(area(r_after), H_a))))

    ts, rs = [], []
    t = 0.0
    n = int(np.floor(t_max / dt + 1e-9))
    truncated = False
    for i in range(n + 1):
        t = i * dt
        target = A0 * np.exp(t)
        r = start.r_hull if i == 0 else radius_for(target)
        if r is None:
            truncated = True
            break
        ts.append(t)
        rs.append(r)
    rs = np.array(rs)
    areas = np.array([area(r) for r in rs])
    H = np.array([metric.H_at(r) for r in rs])
    jumps = [j for j in jumps if j[0] <= (ts[-1] if ts else 0.0)]
    return FlowTrace(np.array(ts), rs, areas, H, _hawking(areas, H), jumps, truncated, dt, A0)


def check_geroch(trace, scalar_floor=0.0, tol_mono=None):
    """Hawking mass non-decreasing along the flow, jumps included."""
    _, m = trace.mass_sequence()
    scale = max(1.0, float(np.max(np.abs(m)))) if m.size else 1.0
    if tol_mono is None:
        tol_mono = 10.0 * trace.dt * scale * (1.0 + abs(min(scalar_floor, 0.0)))
    drops = np.diff(m)
    bad = np.flatnonzero(drops < -tol_mono)
    worst = float(drops.min()) if drops.size else 0.0
    t_seq, _ = trace.mass_sequence()
    return VerdictReport(
        "geroch_monotonicity", bool(bad.size == 0), lhs=worst, rhs=-tol_mono,
        tolerance=0.0, relation=">=",
        details={"violations": [(float(t_seq[i]), float(t_seq[i + 1])) for i in bad],
                 "scalar_floor": float(scalar_floor), "tol_mono": float(tol_mono),
                 "jumps": len(trace.jumps), "truncated": trace.truncated})


def area_law_error(trace):
    """Largest relative deviation from ``A_0 e^t`` over the samples."""
    expected = trace.area0 * np.exp(trace.t)
    return float(np.max(np.abs(trace.area - expected) / expected))
