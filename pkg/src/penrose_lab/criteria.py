"""Quasi-local horizon detection: Shi-Tam type masses and the existence criteria.

Subdomains are the centered balls (or, on an annulus, the shells
``[r_min, r_i]``), identified by their outer radius. Hulls are the centered
spheres, as in :mod:`penrose_lab.hulls`.
"""

from dataclasses import dataclass, field

import numpy as np
from scipy.special import sici

from .config import CriteriaConfig
from .hulls import find_outermost_minimal, find_outermost_mots, rad
from .initial_data import check_admissible_boundary, compute_constraints, curvature_profile
from .quasilocal import MassValue, _token, boundary_from_data, liu_yau_mass

CONCLUSIONS = ("exists", "not_exists", "inconclusive")


@dataclass(frozen=True)
class MeeksYauConstant:
    C_absolute: float
    K_bound: float
    r_eff: float
    integral: float
    denominator: float
    alpha: float

    @classmethod
    def compute(cls, C_absolute, K_bound, r_eff, denominator):
        """``alpha^2 = min(1, C K^-2 int_0^r sin(K s)^2 / s ds / denominator)``."""
        x = 2.0 * K_bound * r_eff
        # int_0^r sin(K s)^2 / s ds = (gamma + log(2 K r) - Ci(2 K r)) / 2
        integral = 0.5 * (np.euler_gamma + np.log(x) - sici(x)[1]) if x > 0 else 0.0
        a2 = min(1.0, C_absolute * integral / (K_bound ** 2 * denominator))
        return cls(float(C_absolute), float(K_bound), float(r_eff), float(integral),
                   float(denominator), float(np.sqrt(max(a2, 0.0))))


@dataclass(frozen=True)
class CriterionVerdict:
    criterion: str
    holds: bool
    lhs: float
    rhs: float
    conclusion: str
    details: dict = field(default_factory=dict)
    branches: tuple = ()

    def __post_init__(self):
        if self.conclusion not in CONCLUSIONS:
            raise ValueError(f"unknown conclusion {self.conclusion!r}")

    def to_dict(self):
        return {"criterion": self.criterion, "holds": bool(self.holds), "lhs": float(self.lhs),
                "rhs": float(self.rhs), "conclusion": self.conclusion, "details": self.details,
                "branches": [b.to_dict() for b in self.branches]}


def default_pairs(metric, fractions=(0.25, 0.5, 0.75, 1.0)):
    """Nested radius pairs ``r1 < r2`` at fixed fractions of the radial extent."""
    lo, hi = metric.grid.r_min, metric.grid.r_max
    radii = [lo + f * (hi - lo) for f in fractions]
    return [(a, b) for i, a in enumerate(radii) for b in radii[i + 1:]]


def _sectional_bound(metric, mask, tiny):
    """Largest sectional curvature over the masked nodes, zero below ``tiny``."""
    cp = curvature_profile(metric)
    k = float(np.max(np.maximum(cp.K_rad[mask], cp.K_tan[mask])))
    return k if k > tiny else 0.0


def _pair_mass(metric, r1, r2, C, tiny, extra=1.0, global_min=False):
    nodes, A = metric.nodes, metric.area
    inside2 = nodes <= r2 + 1e-12
    # centered spheres S_r, r <= r1, minimizing among spheres of Omega_2
    suffix = np.minimum.accumulate(A[inside2][::-1])[::-1]
    ok = (A[inside2] <= suffix) & (nodes[inside2] <= r1 + 1e-12) & ~metric.center_mask[inside2]
    if global_min:
        whole = np.minimum.accumulate(A[::-1])[::-1]
        ok &= A[inside2] <= whole[inside2]
    mH = metric.hawking_mass_profile()[inside2]
    best = float(np.max(mH[ok])) if ok.any() else 0.0
    best_r = float(nodes[inside2][ok][np.argmax(mH[ok])]) if ok.any() else float("nan")
    K = max(_sectional_bound(metric, inside2, tiny), tiny)
    s = metric.proper_length
    d = float(np.interp(r2, nodes, s) - np.interp(r1, nodes, s))
    r_eff = min(np.pi / np.sqrt(K), 0.5 * d)
    my = MeeksYauConstant.compute(C, K, r_eff, metric.area_at(r1) * extra)
    return max(best, 0.0), best_r, my


def shi_tam_mass(metric, subdomain_pairs=None, config=None):
    """``sup over pairs of alpha * m(Omega_1; Omega_2)``, floored at zero."""
    cfg = CriteriaConfig() if config is None else config
    pairs = default_pairs(metric) if subdomain_pairs is None else subdomain_pairs
    rows, best = [], 0.0
    for r1, r2 in pairs:
        if not r1 < r2:
            raise ValueError("subdomain pairs need r1 < r2")
        m, r_best, my = _pair_mass(metric, r1, r2, cfg.C_absolute, cfg.tiny_curvature)
        rows.append({"r1": r1, "r2": r2, "m": m, "hull_radius": r_best, "alpha": my.alpha,
                     "K_bound": my.K_bound, "r_eff": my.r_eff})
        best = max(best, my.alpha * m)
    return MassValue(best, "shi_tam", _token(metric.rho, metric.a),
                     {"pairs": rows, "C_absolute": cfg.C_absolute})


def rad_ratio(data, graph):
    """``beta = Rad(graph) / Rad(data)``."""
    rg, rd = rad(graph.metric), rad(data.metric)
    return rg.value / rd.value, rg, rd


def m_star(data, graph, subdomain_pairs=None, config=None):
    """As :func:`shi_tam_mass` on the graph, with hulls whose sphere is also
    outward minimizing in the whole graph and the Meeks-Yau denominator
    scaled by ``beta``.

    The competitor family is a subset of the Shi-Tam one, so the computed
    value never exceeds ``shi_tam_mass`` with the same pairs and beta = 1.
    """
    cfg = CriteriaConfig() if config is None else config
    metric = graph.metric
    pairs = default_pairs(metric) if subdomain_pairs is None else subdomain_pairs
    beta, rg, rd = rad_ratio(data, graph)
    rows, best = [], 0.0
    for r1, r2 in pairs:
        m, r_best, my = _pair_mass(metric, r1, r2, cfg.C_absolute, cfg.tiny_curvature,
                                   extra=beta, global_min=True)
        rows.append({"r1": r1, "r2": r2, "m": m, "hull_radius": r_best, "alpha": my.alpha})
        best = max(best, my.alpha * m)
    return MassValue(best, "m_star", _token(metric.rho, metric.a, data.k_rr, data.k_t),
                     {"pairs": rows, "beta": beta, "rad_graph": rg.value, "rad_data": rd.value,
                      "rad_kind_graph": rg.kind, "C_absolute": cfg.C_absolute})


def _m_ly(data, m_ly):
    return float(liu_yau_mass(boundary_from_data(data)).value) if m_ly is None else float(m_ly)


def _round_diameter(data):
    return 2.0 * float(data.rho[-1])


def _preconditions(data, admissible):
    """Admissibility as supplied, else the checkable part: untrapped boundary and DEC.

    Round boundaries have positive Gauss curvature.
    """
    if admissible is not None:
        return bool(admissible)
    return bool(check_admissible_boundary(data).holds)


def _combine(name, branches, ground_truth, pre):
    holds = any(b.holds for b in branches)
    lead = next((b for b in branches if b.holds), branches[0])
    conclusion = "exists" if (holds and pre) else "inconclusive"
    agreement = (ground_truth is not None) if conclusion == "exists" else None
    return CriterionVerdict(name if not holds else lead.criterion, holds, lead.lhs, lead.rhs,
                            conclusion, {"ground_truth_found": ground_truth is not None,
                                         "agreement": agreement, "preconditions": pre},
                            tuple(branches))


def evaluate_hoop(data, graph, m_ly=None, config=None, mstar=None, admissible=None):
    """``m* > m_LY`` or ``m* >= diam / 4`` implies a MOTS in the domain.

    Without admissibility the branches are still evaluated but the
    conclusion stays inconclusive.
    """
    pre = _preconditions(data, admissible)
    m_ly = _m_ly(data, m_ly)
    ms = m_star(data, graph, config=config) if mstar is None else mstar
    diam = _round_diameter(data)
    v = float(ms.value)
    branches = [
        CriterionVerdict("hoop_mass", v > m_ly, v, m_ly, "exists" if v > m_ly else "inconclusive"),
        CriterionVerdict("hoop_diameter", v >= 0.25 * diam, v, 0.25 * diam,
                         "exists" if v >= 0.25 * diam else "inconclusive"),
    ]
    mots = find_outermost_mots(data)
    out = _combine("hoop_mass", branches, mots, pre)
    out.details.update({"m_star": v, "m_LY": m_ly, "diam": diam,
                        "mots_radius": None if mots is None else mots.radius})
    return out


def isoperimetric_scan(metric):
    """Centered sphere of least isoperimetric ratio ``A^(3/2) / (6 sqrt(pi) V)``."""
    nodes = metric.nodes
    vol = np.concatenate([[0.0], np.cumsum(0.5 * np.diff(nodes)
                                           * (metric.volume_density[:-1] + metric.volume_density[1:]))])
    with np.errstate(divide="ignore", invalid="ignore"):
        ratio = metric.area ** 1.5 / (6.0 * np.sqrt(np.pi) * vol)
    ratio[vol <= 0] = np.inf
    i = int(np.argmin(ratio))
    return float(nodes[i]), float(ratio[i])


def evaluate_minimal_sphere(data, graph, isoperimetric_radius=None, m_ly=None, config=None,
                            mst=None, admissible=None):
    """Minimal-sphere detection from an isoperimetric sphere or from m_ST of the graph."""
    pre = _preconditions(data, admissible)
    m_ly = _m_ly(data, m_ly)
    metric = graph.metric
    if isoperimetric_radius is None:
        isoperimetric_radius, _ = isoperimetric_scan(metric)
    i = int(np.argmin(np.abs(metric.nodes - isoperimetric_radius)))
    mH_V = float(metric.hawking_mass_profile()[i])
    cfg = CriteriaConfig() if config is None else config
    mst = shi_tam_mass(metric, config=cfg) if mst is None else mst
    v = float(mst.value)
    diam = _round_diameter(data)
    # a tie at rounding level (flat data: 0 >= 0) is not evidence of a minimal sphere
    margin = cfg.tie_margin * max(1.0, abs(m_ly))
    iso_ok = bool(mH_V >= m_ly + margin)
    branches = [
        CriterionVerdict("isoperimetric", iso_ok, mH_V, m_ly, "exists" if iso_ok else "inconclusive",
                         {"isoperimetric_radius": float(metric.nodes[i]), "margin": margin}),
        CriterionVerdict("shi_tam_mass", v > m_ly, v, m_ly, "exists" if v > m_ly else "inconclusive"),
        CriterionVerdict("shi_tam_diameter", v >= 0.25 * diam, v, 0.25 * diam,
                         "exists" if v >= 0.25 * diam else "inconclusive"),
    ]
    minimal = find_outermost_minimal(metric)
    out = _combine("isoperimetric", branches, minimal, pre)
    out.details.update({"m_ST": v, "m_LY": m_ly,
                        "minimal_radius": None if minimal is None else minimal.radius})
    return out


def evaluate_curvature_bound(data, graph, m_ly=None, mass_kind="liu_yau", config=None,
                             admissible=None):
    """Curvature bound ``C^2`` on the graph with ``m < 1 / (2C)`` rules out a MOTS."""
    pre = _preconditions(data, admissible)
    cfg = CriteriaConfig() if config is None else config
    m = _m_ly(data, m_ly)
    metric = graph.metric
    C2 = _sectional_bound(metric, np.ones(metric.nodes.size, bool), cfg.tiny_curvature)
    C = np.sqrt(C2)
    threshold = np.inf if C == 0 else 1.0 / (2.0 * C)
    holds = bool(m < threshold)
    mots = find_outermost_mots(data)
    minimal = find_outermost_minimal(graph.metric)
    details = {"C": float(C), "C2": C2, "mass_kind": mass_kind, "m": m,
               "mots_found": mots is not None, "minimal_found": minimal is not None,
               "preconditions": pre}
    if minimal is not None:
        area = minimal.area
        details.update({"minimal_area": area, "gauss_bonnet_ok": bool(4 * np.pi <= area * C2 * (1 + 1e-9)),
                        "penrose_ok": bool(m >= np.sqrt(area / (16 * np.pi)) - 1e-4)})
    conclusion = "not_exists" if (holds and pre) else "inconclusive"
    details["consistent"] = not (conclusion == "not_exists" and mots is not None)
    return CriterionVerdict("curvature_bound", holds, m, float(threshold), conclusion, details)


def schoen_yau_criterion(data, tolerances=None):
    """``mu - |J| >= Lambda > 0`` and ``Rad >= sqrt(3/2) pi / sqrt(Lambda)`` imply a MOTS.

    Lambda uses the normalization in which ``mu = (R - |k|^2 + (tr k)^2) / 2``,
    i.e. ``8 pi`` times the energy density of :func:`compute_constraints`.
    """
    em = compute_constraints(data)
    lam = float(8.0 * np.pi * np.min(em.mu - em.J_norm))
    r = rad(data.metric)
    untrapped = bool(check_admissible_boundary(data, tolerances).details["untrapped"])
    if lam > 0:
        need = np.sqrt(1.5) * np.pi / np.sqrt(lam)
        holds = r.value >= need
    else:
        need, holds = np.inf, False
    conclusion = "exists" if (holds and untrapped) else "inconclusive"
    return CriterionVerdict("schoen_yau", bool(holds), float(r.value), float(need), conclusion,
                            {"Lambda": lam, "rad_kind": r.kind, "untrapped_boundary": untrapped})
