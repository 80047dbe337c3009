"""The acceptance suite: ten numbered checks at their stated tolerances.

Each check returns a :class:`CheckResult`; none of them is relaxed when it
fails. Pipeline runs of the built-in scenarios are shared between checks.
"""

import time
from dataclasses import dataclass, field

import numpy as np

from . import families
from .criteria import evaluate_curvature_bound
from .fd import richardson_order
from .glue import smooth_corner, shi_tam_round_extension
from .hulls import find_outermost_mots
from .imcf import check_geroch as geroch_verdict, run_weak_imcf
from .jang import assemble_jang_graph, solve_jang_dirichlet
from .pipeline import run_pipeline
from .quasilocal import (BoundarySurface, boundary_from_data, embed_surface_of_revolution,
                         liu_yau_mass, observer_fields, wang_yau_energy,
                         wang_yau_mass_over_family)
from .scenarios import BUILTIN, load_scenario
from .theta import ThetaGrid


@dataclass
class CheckResult:
    number: int
    title: str
    passed: bool
    summary: str
    seconds: float = 0.0
    details: dict = field(default_factory=dict)

    def line(self):
        mark = "PASS" if self.passed else "FAIL"
        return f"[{mark}] {self.number:2d}. {self.title}: {self.summary} ({self.seconds:.2f} s)"


_REPORTS = {}


def builtin_reports():
    """Pipeline reports of every built-in scenario (computed once per process)."""
    if not _REPORTS:
        for name in sorted(BUILTIN):
            t0 = time.perf_counter()
            _REPORTS[name] = (run_pipeline(load_scenario(name)), time.perf_counter() - t0)
    return {k: v[0] for k, v in _REPORTS.items()}


def _timed(fun):
    def wrapper():
        t0 = time.perf_counter()
        res = fun()
        res.seconds = time.perf_counter() - t0
        return res
    wrapper.__name__ = fun.__name__
    wrapper.__doc__ = fun.__doc__
    return wrapper


@_timed
def check_hawking_constancy():
    """Schwarzschild m_H(S_r) = m on [2m, 4m]: 1e-6 at N = 8192, order >= 1.9."""
    t0 = time.perf_counter()
    counts = (1024, 2048, 4096, 8192)
    errs = []
    for n in counts:
        d = families.schwarzschild_isotropic(1.0, 4.0, n)
        errs.append(float(np.max(np.abs(d.metric.hawking_mass_profile() - 1.0))))
    elapsed = time.perf_counter() - t0
    orders = richardson_order(errs)
    ok = errs[-1] < 1e-6 and np.all(orders >= 1.9) and elapsed < 1.0
    return CheckResult(1, "Schwarzschild Hawking mass", bool(ok),
                       f"error {errs[-1]:.2e} at N=8192, orders {np.round(orders, 3).tolist()}, "
                       f"{elapsed:.2f} s", details={"errors": errs, "orders": orders.tolist()})


@_timed
def check_penrose_pg():
    """PG m=1, r_b=4: m_LY = 1.171573, sqrt(A/16 pi) = 1, margin >= 0.17, < 10 s."""
    t0 = time.perf_counter()
    spec = load_scenario("pg_m1_rb4")
    data = spec.build_data()
    sol = solve_jang_dirichlet(data, inner=spec.jang["inner"])
    mots = find_outermost_mots(data)
    m_ly = liu_yau_mass(boundary_from_data(data)).value
    elapsed = time.perf_counter() - t0
    exact = 4.0 * (1.0 - np.sqrt(0.5))
    bound = np.sqrt(mots.area / (16 * np.pi)) if mots is not None else float("nan")
    margin = m_ly - bound
    ok = (abs(m_ly - exact) <= 1e-4 and abs(bound - 1.0) <= 1e-4 and margin >= 0.17
          and elapsed < 10.0 and sol.blowup is not None)
    return CheckResult(2, "quasi-local Penrose inequality (PG)", bool(ok),
                       f"m_LY {m_ly:.6f}, sqrt(A/16pi) {bound:.6f}, margin {margin:.4f}, {elapsed:.2f} s",
                       details={"m_LY": m_ly, "bound": bound, "margin": margin})


def _applies(v):
    return bool(v.get("details", {}).get("applies", True))


@_timed
def check_hull_chain():
    """m_LY >= m_H(hull) - 1e-4 over all graph hulls, every admissible built-in, < 60 s."""
    t0 = time.perf_counter()
    reports = builtin_reports()
    elapsed = sum(v[1] for v in _REPORTS.values()) if _REPORTS else time.perf_counter() - t0
    used, bad = [], []
    for name, r in reports.items():
        try:
            v = r.verdict("hull_chain")
        except KeyError:
            continue
        if _applies(v):
            used.append(name)
            if not v["holds"]:
                bad.append(name)
    ok = not bad and used and elapsed < 60.0
    return CheckResult(3, "hull mass chain", bool(ok),
                       f"{len(used)} admissible scenarios {used}, violations {bad}, "
                       f"pipeline {elapsed:.1f} s", details={"scenarios": used, "violations": bad})


@_timed
def check_geroch():
    """Geroch monotonicity on every flow whose conformal metric has R >= -1e-8;
    Schwarzschild trace constant to 1e-6."""
    reports = builtin_reports()
    used, bad = [], []
    for name, r in reports.items():
        try:
            v = r.verdict("geroch_monotonicity")
        except KeyError:
            continue
        if _applies(v):
            used.append(name)
            if not v["holds"]:
                bad.append(name)
    d = families.schwarzschild_isotropic(1.0, 4.0, 8192)
    trace = run_weak_imcf(d.metric, d.nodes[0], np.log(4.0))
    drift = float(np.max(np.abs(trace.m_H - 1.0)))
    ger = geroch_verdict(trace)
    ok = not bad and used and drift < 1e-6 and ger.holds
    return CheckResult(4, "Geroch monotonicity", bool(ok),
                       f"{len(used)} flows checked, violations {bad}, Schwarzschild drift {drift:.2e}",
                       details={"scenarios": used, "violations": bad, "drift": drift})


@_timed
def check_conformal_bookkeeping():
    """A_delta tail vs volume to 1e-4 relative, mass identity to 1e-4, upper bound everywhere."""
    reports = builtin_reports()
    rows, bad = {}, []
    for name, r in reports.items():
        if r.stages["glue"].status != "ok":
            continue
        agree = r.verdict("A_delta_agreement")["holds"]
        ident = r.verdict("conformal_mass_identity")["holds"]
        chain = r.verdict("mass_chain")["details"]["checks"]["adm_upper_bound"]
        rows[name] = {"A_agree": agree, "identity": ident, "upper_bound": chain["holds"],
                      "m_adm_hat": chain["lhs"], "m_ext_plus_flux": chain["rhs"]}
        if not (agree and ident and chain["holds"]):
            bad.append(name)
    ok = not bad and rows
    detail = ", ".join(f"{n}: {v['m_adm_hat']:.4g} vs {v['m_ext_plus_flux']:.4g}"
                       for n, v in rows.items() if not v["upper_bound"])
    return CheckResult(5, "conformal mass bookkeeping", bool(ok),
                       f"{len(rows)} glued scenarios, failing {bad}" + (f" (upper bound: {detail})" if detail else ""),
                       details=rows)


@_timed
def check_smoothing_scaling():
    """PG annulus: sup_tube |div X| delta^(1/3) within 2x over three deltas; K- in the tube."""
    spec = load_scenario("pg_annulus")
    data = spec.build_data()
    sol = solve_jang_dirichlet(data, inner="dirichlet")
    graph = assemble_jang_graph(data, sol)
    gm = graph.metric
    ext = shi_tam_round_extension(float(gm.area[-1]), float(gm.mean_curvature[-1]))
    scaled, confined = [], []
    for delta in (1e-2, 1e-3, 1e-4):
        g = smooth_corner(graph, ext, delta)
        scaled.append(g.div_scaled)
        confined.append(g.support_confined)
    ratio = max(scaled) / min(scaled)
    ok = ratio <= 2.0 and all(confined)
    return CheckResult(6, "smoothing scaling", bool(ok),
                       f"div*delta^(1/3) = {np.round(scaled, 3).tolist()} (ratio {ratio:.1f}), "
                       f"confined {confined}", details={"scaled": scaled, "ratio": ratio})


@_timed
def check_jang():
    """f = 0 for time-symmetric data; PG blow-up at 2 +- 1e-2; annulus residual and order."""
    d = families.schwarzschild_isotropic(1.0, 4.0, 1024)
    s = solve_jang_dirichlet(d)
    ts_ok = bool(np.max(np.abs(s.f)) == 0.0 and s.residual < 1e-12)
    spec = load_scenario("pg_m1_rb4")
    ball = solve_jang_dirichlet(spec.build_data(), inner=spec.jang["inner"])
    r_bu = ball.blowup.radius if ball.blowup is not None else float("nan")
    fs, res = [], []
    for n in (257, 513, 1025, 2049):
        ann = solve_jang_dirichlet(families.painleve_gullstrand(1.0, 4.0, n, r_min=3.0),
                                   inner="dirichlet")
        fs.append(ann.f)
        res.append(ann.residual)
    diffs = [float(np.max(np.abs(fs[i + 1][::2] - fs[i]))) for i in range(len(fs) - 1)]
    orders = richardson_order(diffs)
    ok = ts_ok and abs(r_bu - 2.0) <= 1e-2 and max(res) < 1e-8 and np.all(orders >= 1.9)
    return CheckResult(7, "Jang solver", bool(ok),
                       f"time-symmetric f=0 {ts_ok}, blow-up at {r_bu:.5f}, annulus residual "
                       f"{max(res):.1e}, orders {np.round(orders, 3).tolist()}",
                       details={"blowup": r_bu, "residuals": res, "orders": orders.tolist()})


@_timed
def check_criteria_consistency():
    """No curvature-bound nonexistence next to a found MOTS; flat C = 0; weak-field annulus."""
    reports = builtin_reports()
    bad = [n for n, r in reports.items()
           if any(v["name"] == "criteria_consistency" and not v["holds"] for v in r.verdicts)]
    flat = families.flat(4.0, 1024)
    fv = evaluate_curvature_bound(flat, assemble_jang_graph(flat, solve_jang_dirichlet(flat)))
    weak = families.schwarzschild(0.01, 4.0, 1024, r_min=3.0)
    wv = evaluate_curvature_bound(weak, assemble_jang_graph(weak, solve_jang_dirichlet(weak)))
    ok = (not bad and fv.conclusion == "not_exists" and fv.details["C"] == 0.0
          and wv.conclusion == "not_exists")
    return CheckResult(8, "MOTS finder vs criteria", bool(ok),
                       f"inconsistent {bad}, flat {fv.conclusion} (C={fv.details['C']}), "
                       f"annulus m=0.01 {wv.conclusion}", details={"inconsistent": bad})


def _embedding_cases(grid):
    t = grid.nodes
    cases = {}
    for name, r in builtin_reports().items():
        rho_b = r.artifact("constraints", "rho_b")
        if rho_b:
            cases[f"{name}.boundary"] = (np.full(t.size, rho_b ** 2), rho_b * np.sin(t))
    # observer-deformed metrics sigma + dtau^2 of the Wang-Yau family on the unit sphere
    unit = BoundarySurface.round(1.0, 2.0, 0.5, grid.count)
    for l in (1, 2):
        for c in (0.1, 0.3):
            obs = observer_fields(unit, c * grid.legendre(l))
            cases[f"tau=c P{l}, c={c}"] = (obs.E_hat, unit.phi)
    # an oblate spheroid
    a, b = 1.0, 0.6
    cases["spheroid"] = (a * a * np.cos(t) ** 2 + b * b * np.sin(t) ** 2, a * np.sin(t))
    return cases


@_timed
def check_embeddings():
    """Metric residual < 1e-6 and Gauss-Bonnet defect < 1e-6 at 512 nodes."""
    grid = ThetaGrid(512)
    worst = {"metric": 0.0, "gauss": 0.0}
    bad = []
    for name, (E, phi) in _embedding_cases(grid).items():
        emb = embed_surface_of_revolution(grid, E, phi, check=False)
        worst["metric"] = max(worst["metric"], emb.metric_residual)
        worst["gauss"] = max(worst["gauss"], emb.gauss_defect)
        if emb.metric_residual >= 1e-6 or emb.gauss_defect >= 1e-6:
            bad.append(name)
    return CheckResult(9, "embedding quality", not bad,
                       f"worst metric residual {worst['metric']:.1e}, Gauss-Bonnet {worst['gauss']:.1e}, "
                       f"failing {bad}", details=worst)


@_timed
def check_wang_yau_reduction():
    """E(tau = 0) = m_LY to 1e-10 wherever both exist; family minimum <= E(0)."""
    bad = []
    n = 0
    for name, r in builtin_reports().items():
        if r.stages["masses"].status != "ok":
            continue
        n += 1
        red = r.verdict("wang_yau_reduction")
        fam = [v for v in r.verdicts if v["name"] == "wang_yau_family_min"]
        if not red["holds"] or any(not v["holds"] for v in fam):
            bad.append(name)
    # a non-round boundary: the oblate spheroid with a boost profile
    grid = ThetaGrid(512)
    t = grid.nodes
    surf = BoundarySurface.axisymmetric(grid, np.cos(t) ** 2 + 0.36 * np.sin(t) ** 2, np.sin(t),
                                        2.5 + 0.2 * np.cos(t) ** 2, 0.3 * np.cos(t) ** 2)
    e0 = wang_yau_energy(surf, 0.0).value
    ly = liu_yau_mass(surf).value
    fam = wang_yau_mass_over_family(surf).value
    extra_ok = abs(e0 - ly) <= 1e-10 and fam <= e0
    return CheckResult(10, "Wang-Yau reduction", bool(not bad and extra_ok),
                       f"{n} scenarios, failing {bad}; spheroid |E(0) - m_LY| {abs(e0 - ly):.1e}, "
                       f"family {fam:.6f} <= {e0:.6f}", details={"failing": bad})


CHECKS = (check_hawking_constancy, check_penrose_pg, check_hull_chain, check_geroch,
          check_conformal_bookkeeping, check_smoothing_scaling, check_jang,
          check_criteria_consistency, check_embeddings, check_wang_yau_reduction)


def run_all(echo=print):
    results = []
    for check in CHECKS:
        res = check()
        results.append(res)
        if echo is not None:
            echo(res.line())
    return results
