"""End-to-end runs: constraints, Jang graph, masses, hulls, glue, flow, criteria.

Every stage records its artifacts and verdicts. A stage that raises one of
the library errors is marked ``failed`` and the stages that depend on it
are ``skipped``; criteria that fail individually are recorded without
failing their stage.
"""

import os
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, replace

import numpy as np

from . import __version__, criteria
from .config import AdmissibilityConfig, GlueConfig, JangConfig, PipelineConfig, Tolerances
from .errors import PenroseLabError
from .fd import richardson_order
from .glue import shi_tam_round_extension, smooth_corner, solve_conformal, verify_mass_chain
from .hulls import (find_outermost_minimal, find_outermost_mots, outward_minimizing_mask,
                    strictly_minimizing_hull)
from .imcf import area_law_error, check_geroch, run_weak_imcf
from .initial_data import check_admissible_boundary, check_dec, compute_constraints
from .jang import (assemble_jang_graph, audit_admissible_X, solve_jang_dirichlet,
                   truncate_outside_blowup)
from .quasilocal import (boundary_from_data, check_tau_admissible, liu_yau_mass,
                         wang_yau_energy, wang_yau_mass_over_family)
from .verdict import VerdictReport, compare

SCHEMA_VERSION = "1.0"
STAGES = ("constraints", "jang", "masses", "hulls", "glue", "imcf", "criteria")
DEPENDS = {"jang": ("constraints",), "masses": ("constraints",), "hulls": ("jang",),
           "glue": ("jang", "hulls"), "imcf": ("jang",), "criteria": ("jang",)}
TOGGLED = {"jang": "jang", "glue": "glue", "imcf": "imcf", "criteria": "criteria"}
RECOVERABLE = (PenroseLabError, ValueError, ArithmeticError, np.linalg.LinAlgError)
# tolerance of the hull chain and the Penrose checks
CHAIN_TOL = 1e-4


@dataclass
class StageResult:
    status: str = "pending"
    artifacts: dict = field(default_factory=dict)
    error: str = ""
    seconds: float = 0.0

    def to_dict(self, timing=False):
        out = {"status": self.status, "artifacts": self.artifacts}
        if self.error:
            out["error"] = self.error
        if timing:
            out["seconds"] = self.seconds
        return out


@dataclass(frozen=True, eq=False)
class RunReport:
    scenario: dict
    stages: dict
    verdicts: list
    series: dict
    timing: dict
    version: str = __version__
    schema_version: str = SCHEMA_VERSION

    @property
    def hard_failure(self):
        return any(s.status == "failed" for s in self.stages.values())

    def verdict(self, name):
        for v in self.verdicts:
            if v["name"] == name:
                return v
        raise KeyError(name)

    def artifact(self, stage, key, default=None):
        return self.stages[stage].artifacts.get(key, default)

    def to_dict(self, timing=False):
        out = {"schema_version": self.schema_version, "version": self.version,
               "scenario": self.scenario,
               "stages": {k: v.to_dict(timing) for k, v in self.stages.items()},
               "verdicts": self.verdicts}
        if timing:
            out["timing"] = self.timing
        return out


def _verdict(report, criterion, **extra):
    """Flatten a VerdictReport, naming the statement it checks."""
    d = report.to_dict()
    d["criterion"] = criterion
    d.update(extra)
    return d


def _criterion_verdict(cv, statement):
    return {"name": cv.criterion, "criterion": statement, "holds": bool(cv.holds),
            "lhs": float(cv.lhs), "rhs": float(cv.rhs), "tolerance": 0.0,
            "relation": "criterion", "conclusion": cv.conclusion, "details": cv.to_dict()}


def config_from_spec(spec, base=None):
    base = PipelineConfig() if base is None else base
    tol = replace(base.tolerances, **{k: v for k, v in spec.tolerances.items()
                                      if k in Tolerances.__dataclass_fields__})
    jang = replace(base.jang, **{k: v for k, v in spec.jang.items()
                                 if k in JangConfig.__dataclass_fields__})
    glue = replace(base.glue, **{k: (tuple(v) if isinstance(v, list) else v)
                                 for k, v in spec.glue.items() if k in GlueConfig.__dataclass_fields__})
    adm = replace(base.admissibility, delta=glue.delta)
    return replace(base, tolerances=tol, jang=jang, glue=glue, admissibility=adm)


class _Run:
    def __init__(self, spec, config):
        self.spec = spec
        self.cfg = config
        self.stages = {name: StageResult() for name in STAGES}
        self.verdicts = []
        self.series = {}
        self.ctx = {}

    def art(self, stage, **kw):
        self.stages[stage].artifacts.update(kw)

    def run(self):
        for name in STAGES:
            stage = self.stages[name]
            toggle = TOGGLED.get(name)
            if toggle and not self.spec.enabled(toggle):
                stage.status, stage.error = "skipped", "disabled by toggle"
                continue
            blocked = [d for d in DEPENDS.get(name, ()) if self.stages[d].status not in ("ok", "partial")]
            if blocked:
                stage.status, stage.error = "skipped", f"needs {', '.join(blocked)}"
                continue
            t0 = time.perf_counter()
            try:
                getattr(self, "stage_" + name)()
                if stage.status == "pending":
                    stage.status = "ok"
            except RECOVERABLE as exc:
                stage.status, stage.error = "failed", f"{type(exc).__name__}: {exc}"
            stage.seconds = time.perf_counter() - t0
        return RunReport(self.spec.to_dict(), self.stages, self.verdicts, self.series,
                         {k: v.seconds for k, v in self.stages.items()})

    # ------------------------------------------------------------ stages

    def stage_constraints(self):
        tol = self.cfg.tolerances
        data = self.spec.build_data()
        self.ctx["data"] = data
        em = compute_constraints(data)
        dec = check_dec(em, data, tol)
        boundary = check_admissible_boundary(data, tol, em)
        self.ctx["boundary_ok"] = boundary.holds
        self.art("constraints", count=data.grid.count, r_min=data.grid.r_min, r_max=data.grid.r_max,
                 rho_b=float(data.rho[-1]), time_symmetric=data.is_time_symmetric,
                 dec=dec.holds, dec_min_slack=dec.details["min_slack"], untrapped=boundary.details["untrapped"],
                 boundary_admissible=boundary.holds)
        self.verdicts.append(_verdict(dec, "dominant energy condition"))
        self.verdicts.append(_verdict(boundary, "untrapped boundary and energy condition"))
        self.series["mu_minus_J"] = (data.nodes, em.mu - em.J_norm)

    def stage_jang(self):
        data = self.ctx["data"]
        jang = self.spec.jang
        sol = solve_jang_dirichlet(data, tau_b=jang.get("tau_b", 0.0), config=self.cfg.jang,
                                   inner=jang.get("inner", "auto"),
                                   inner_value=jang.get("inner_value", 0.0),
                                   tolerances=self.cfg.tolerances)
        art = {"residual": sol.residual, "residual_unregularized": sol.residual_unregularized,
               "eps_final": sol.eps_final, "inner": sol.inner, "stages": len(sol.trace),
               "blowup_radius": None, "blowup_kind": None}
        if sol.blowup is not None:
            art.update(blowup_radius=sol.blowup.radius, blowup_kind=sol.blowup.kind)
            sol = truncate_outside_blowup(sol)
            art["truncated_r_min"] = sol.data.grid.r_min
        graph = assemble_jang_graph(sol.data, sol)
        self.ctx["graph"] = graph
        audit = audit_admissible_X(graph, self.cfg.admissibility)
        x_zero = bool(np.max(np.abs(graph.X_r)) < 1e-12)
        admissible = bool(self.ctx["boundary_ok"] and (x_zero or audit.admissible))
        self.ctx["admissible"] = admissible
        defect = graph.scalar_bound_defect
        h = graph.metric.grid.spacing
        # discretization allowance of the third-derivative terms in Rbar and div X
        scale = 1.0 + np.abs(graph.Rbar) + np.abs(graph.divX) + graph.X_norm_sq
        allow = self.cfg.tolerances.discretization(h) * scale / np.maximum(graph.data.rho, h) ** 2
        i = int(np.argmin(defect + allow))
        self.verdicts.append(_verdict(
            compare("jang_scalar_bound", defect[i], 0.0, allow[i], at_r=float(graph.nodes[i]),
                    applies=self.stages["constraints"].artifacts["dec"]),
            "scalar curvature lower bound of the Jang graph"))
        art.update(X_nu_boundary=graph.X_nu_boundary, X_identically_zero=x_zero,
                   admissibility=audit.to_dict(), admissible=admissible,
                   max_abs_f=float(np.max(np.abs(graph.f))),
                   vacuum_identity_max=float(np.max(np.abs(graph.vacuum_identity))))
        self.art("jang", **art)
        self.series["jang_f"] = (graph.nodes, graph.f)
        self.series["graph_hawking_mass"] = (graph.nodes, graph.metric.hawking_mass_profile())

    def stage_masses(self):
        data = self.ctx["data"]
        surface = boundary_from_data(data, count=self.cfg.quasilocal.theta_nodes)
        ly = liu_yau_mass(surface)
        self.ctx["m_LY"] = ly.value
        wy0 = wang_yau_energy(surface, 0.0)
        mH_b = float(data.metric.hawking_mass_profile()[-1])
        art = {"m_LY": ly.value, "m_WY_tau0": wy0.value, "m_H_boundary": mH_b, "m_WY_family": None}
        self.verdicts.append(_verdict(
            compare("wang_yau_reduction", wy0.value, ly.value, 1e-10, relation="=="),
            "Wang-Yau energy at the static observer equals the Liu-Yau mass"))
        if self.ctx.get("boundary_ok"):
            self.verdicts.append(_verdict(compare("liu_yau_positive", ly.value, 0.0),
                                          "positivity of the Liu-Yau mass"))
        adm = check_tau_admissible(surface, 0.0)
        art["tau0_admissible"] = adm.holds
        if adm.holds:
            self.ctx["m_WY"] = wy0.value
        if self.spec.enabled("wang_yau_family") and adm.holds:
            fam = wang_yau_mass_over_family(surface, self.cfg.quasilocal)
            art["m_WY_family"] = fam.value
            art["m_WY_family_coefficients"] = fam.details["coefficients"]
            self.ctx["m_WY"] = fam.value
            self.verdicts.append(_verdict(
                compare("wang_yau_family_min", fam.value, wy0.value, 0.0, relation="<="),
                "family minimum of the Wang-Yau energy does not exceed the static value"))
        self.art("masses", **art)

    def stage_hulls(self):
        data, graph = self.ctx["data"], self.ctx["graph"]
        tol = self.cfg.tolerances
        m_ly = self.ctx.get("m_LY")
        mots = find_outermost_mots(data, tol)
        minimal = find_outermost_minimal(graph.metric, tol)
        gm = graph.metric
        hull = strictly_minimizing_hull(gm, gm.nodes[0])
        mH = gm.hawking_mass_profile()
        m_hull = float(np.interp(hull.r_hull, gm.nodes, mH))
        self.ctx["m_hull"] = m_hull
        art = {"mots_radius": None if mots is None else mots.radius,
               "mots_kind": None if mots is None else mots.kind,
               "mots_area": None if mots is None else mots.area,
               "orientation": self.spec.orientation,
               "orientation_match": None if mots is None else (
                   self.spec.orientation in ("either", mots.kind) or mots.kind == "minimal"),
               "graph_minimal_radius": None if minimal is None else minimal.radius,
               "graph_minimal_area": None if minimal is None else minimal.area,
               "hull_radius": hull.r_hull, "hull_jumped": hull.jumped, "m_H_hull": m_hull}
        if m_ly is not None:
            if mots is not None:
                self.verdicts.append(_verdict(
                    compare("penrose_mots", m_ly, np.sqrt(mots.area / (16 * np.pi)), CHAIN_TOL,
                            area=mots.area, applies=self.ctx["admissible"]),
                    "quasi-local Penrose inequality for the outermost MOTS"))
            if minimal is not None:
                # a centered graph sphere projects to the data sphere of the same area radius
                proj_area = data.metric.area_at(minimal.radius) if data.grid.contains(minimal.radius) else minimal.area
                self.verdicts.append(_verdict(
                    compare("penrose_graph_minimal", m_ly, np.sqrt(minimal.area / (16 * np.pi)),
                            CHAIN_TOL, area=minimal.area, projection_area=proj_area,
                            area_not_smaller=bool(minimal.area >= proj_area * (1 - 1e-12)),
                            applies=self.ctx["admissible"]),
                    "quasi-local Penrose inequality for a minimal sphere of the Jang graph"))
            mask = outward_minimizing_mask(gm, tol) & ~gm.center_mask
            vals = mH[mask]
            i = int(np.argmax(vals)) if vals.size else 0
            worst = float(vals[i]) if vals.size else 0.0
            self.verdicts.append(_verdict(
                compare("hull_chain", m_ly, worst, CHAIN_TOL, hulls=int(mask.sum()),
                        worst_radius=float(gm.nodes[mask][i]) if vals.size else None,
                        applies=self.ctx["admissible"]),
                "Liu-Yau mass bounds the Hawking mass of every minimizing hull of the Jang graph"))
        self.art("hulls", **art)

    def stage_glue(self):
        graph = self.ctx["graph"]
        gm = graph.metric
        cfg = self.cfg.glue
        ext = shi_tam_round_extension(float(gm.area[-1]), float(gm.mean_curvature[-1]), cfg.far_factor)
        glued = smooth_corner(graph, ext, cfg.delta, cfg, self.cfg.tolerances)
        conf = solve_conformal(glued)
        self.ctx["conformal"] = conf
        scal = conf.scalar_check()
        ident = conf.mass_identity()
        scale = max(abs(conf.A_tail), abs(conf.A_volume))
        agree = compare("A_delta_agreement", conf.A_tail, conf.A_volume,
                        cfg.tol_A * max(scale, 1e-14), relation="==")
        self.ctx["scalar_ok"] = scal.holds
        art = {"m_ext": ext.m_ext, "rho_b": ext.rho_b, "shi_tam_extension": ext.shi_tam.to_dict(),
               "delta": glued.delta, "corner_jump": glued.corner_jump,
               "div_sup_tube": glued.div_sup_tube, "div_scaled": glued.div_scaled,
               "C1_measured": glued.C1_measured, "K_minus_outside": glued.K_minus_outside,
               "support_confined": glued.support_confined, "X_flux": glued.X_flux,
               "A_tail": conf.A_tail, "A_volume": conf.A_volume, "m_adm_hat": conf.m_adm_hat,
               "R_hat_min": conf.R_hat_min, "u_min": float(conf.u.min()),
               "L6_norm_w": conf.L6_norm_w, "L6_bound": conf.L6_bound}
        self.verdicts.append(_verdict(scal, "nonnegative scalar curvature after the conformal change"))
        self.verdicts.append(_verdict(ident, "ADM mass of the conformal metric"))
        self.verdicts.append(_verdict(agree, "tail and volume values of the mass shift agree"))
        self.verdicts.append(_verdict(
            compare("tube_support", 0.0, glued.K_minus_outside, 0.0, relation=">="),
            "negative part of the smoothed scalar term stays in the tube"))
        if self.ctx.get("m_LY") is not None:
            chain = verify_mass_chain({"conformal": conf, "m_hull": self.ctx["m_hull"],
                                       "m_LY": self.ctx["m_LY"], "m_WY": self.ctx.get("m_WY")},
                                      CHAIN_TOL)
            chain.details["applies"] = self.ctx["admissible"]
            self.verdicts.append(_verdict(chain, "mass comparison chain"))
            art["mass_chain"] = chain.details["checks"]
        self.art("glue", **art)
        self.series["conformal_w"] = (conf.t, conf.w)

    def stage_imcf(self):
        conf = self.ctx.get("conformal")
        metric = conf.metric if conf is not None else self.ctx["graph"].metric
        rho = metric.rho
        # start off a regular center; otherwise from the inner end
        i0 = int(np.searchsorted(rho, 0.05 * rho[-1])) if metric.center_mask[0] else 0
        r0 = float(metric.nodes[i0])
        A0 = strictly_minimizing_hull(metric, r0).area_hull
        env_max = float(np.min(metric.area[-4:]))
        dt = self.cfg.imcf_dt
        t_max = max(np.log(env_max / A0) - 2 * dt, dt)
        trace = run_weak_imcf(metric, r0, t_max, dt)
        floor = conf.R_hat_min if conf is not None else 0.0
        ger = check_geroch(trace, floor)
        ger.details["applies"] = bool(self.ctx.get("scalar_ok", conf is None))
        ger.details["metric"] = "conformal" if conf is not None else "graph"
        self.verdicts.append(_verdict(ger, "monotonicity of the Hawking mass along the flow"))
        self.art("imcf", metric="conformal" if conf is not None else "graph", r0=r0,
                 t_max=float(trace.t[-1]), samples=int(trace.t.size), jumps=[list(j) for j in trace.jumps],
                 truncated=trace.truncated, m_H_start=float(trace.m_H[0]),
                 m_H_end=float(trace.m_H[-1]), area_law_error=area_law_error(trace))
        self.series["flow_hawking_mass"] = (trace.t, trace.m_H)

    def stage_criteria(self):
        data, graph = self.ctx["data"], self.ctx["graph"]
        ccfg = self.cfg.criteria
        m_ly = self.ctx.get("m_LY")
        adm = self.ctx["admissible"]
        art = {"C_absolute": ccfg.C_absolute, "errors": {}}
        jobs = {
            "m_ST": lambda: criteria.shi_tam_mass(graph.metric, config=ccfg),
            "m_star": lambda: criteria.m_star(data, graph, config=ccfg),
        }
        masses = {}
        for key, job in jobs.items():
            try:
                masses[key] = job()
                art[key] = masses[key].value
            except RECOVERABLE as exc:
                art["errors"][key] = f"{type(exc).__name__}: {exc}"
        if "m_star" in masses:
            art["beta"] = masses["m_star"].details["beta"]
        evals = [
            ("hoop", "hoop-type MOTS existence",
             lambda: criteria.evaluate_hoop(data, graph, m_ly, ccfg, masses.get("m_star"), adm)
             if "m_star" in masses else None),
            ("minimal_sphere", "minimal sphere detection in the Jang graph",
             lambda: criteria.evaluate_minimal_sphere(data, graph, None, m_ly, ccfg, masses.get("m_ST"),
                                                     adm)
             if "m_ST" in masses else None),
            ("curvature_bound", "curvature-bound MOTS nonexistence",
             lambda: criteria.evaluate_curvature_bound(data, graph, m_ly, config=ccfg,
                                                      admissible=adm)),
            ("schoen_yau", "pointwise energy criterion",
             lambda: criteria.schoen_yau_criterion(data, self.cfg.tolerances)),
        ]
        if m_ly is None:
            evals = evals[-1:]
            art["errors"]["liu_yau"] = "no Liu-Yau mass; mass criteria not evaluated"
        conclusions = {}
        for key, statement, job in evals:
            try:
                cv = job()
            except RECOVERABLE as exc:
                art["errors"][key] = f"{type(exc).__name__}: {exc}"
                continue
            if cv is None:
                continue
            conclusions[key] = cv.conclusion
            self.verdicts.append(_criterion_verdict(cv, statement))
        mots = find_outermost_mots(data, self.cfg.tolerances)
        bad = conclusions.get("curvature_bound") == "not_exists" and mots is not None
        self.verdicts.append({"name": "criteria_consistency",
                              "criterion": "no nonexistence verdict while a MOTS is found",
                              "holds": not bad, "lhs": float(mots is not None), "rhs": 0.0,
                              "tolerance": 0.0, "relation": "criterion",
                              "details": {"conclusions": conclusions}})
        art["conclusions"] = conclusions
        if art["errors"]:
            self.stages["criteria"].status = "partial"
        self.art("criteria", **art)


def run_pipeline(spec, config=None):
    """Run every enabled stage of a scenario and collect the report."""
    cfg = config_from_spec(spec, config)
    return _Run(spec, cfg).run()


def _threads():
    try:
        return max(1, int(os.environ.get("PENROSE_LAB_THREADS", "1")))
    except ValueError:
        return 1


SWEEP_AXES = ("grid.count", "delta", "eps_min", "r_b", "m")
OBSERVABLES = {
    "m_LY": ("masses", "m_LY"),
    "m_H_boundary": ("masses", "m_H_boundary"),
    "m_H_hull": ("hulls", "m_H_hull"),
    "mots_radius": ("hulls", "mots_radius"),
    "jang_residual": ("jang", "residual"),
    "div_scaled": ("glue", "div_scaled"),
    "C1_measured": ("glue", "C1_measured"),
    "A_tail": ("glue", "A_tail"),
    "m_adm_hat": ("glue", "m_adm_hat"),
}


def _axis_key(axis):
    return {"grid.count": "grid.count", "delta": "glue.delta", "eps_min": "jang.eps_min",
            "r_b": "parameters.r_b", "m": "parameters.m"}[axis]


def observable(report, name):
    stage, key = OBSERVABLES[name]
    v = report.artifact(stage, key)
    return float(v) if v is not None else float("nan")


def sweep(spec, axis, values, observables=None, reference=None, config=None):
    """Run the pipeline along one axis and tabulate observables.

    Orders are Richardson estimates from successive differences (or from
    errors against ``reference`` values when given), for refinement ratios
    read off consecutive axis values.
    """
    if axis not in SWEEP_AXES:
        raise ValueError(f"axis must be one of {SWEEP_AXES}")
    names = list(observables or ["m_LY", "m_H_boundary", "m_H_hull"])
    specs = [spec.with_overrides(**{_axis_key(axis): (int(v) if axis == "grid.count" else float(v))})
             for v in values]
    with ThreadPoolExecutor(max_workers=_threads()) as pool:
        reports = list(pool.map(lambda s: run_pipeline(s, config), specs))
    vals = np.asarray(values, dtype=float)
    table = {"axis": axis, "values": vals.tolist(), "observables": {}}
    for name in names:
        y = np.array([observable(r, name) for r in reports])
        entry = {"values": y.tolist()}
        if reference and name in reference:
            err = y - reference[name]
            entry["errors"] = err.tolist()
            ratios = vals[:-1] / vals[1:]
            if axis == "grid.count":
                ratios = 1.0 / ratios
            with np.errstate(divide="ignore", invalid="ignore"):
                entry["orders"] = [float(richardson_order(err[i:i + 2], ratios[i])[0])
                                   for i in range(len(err) - 1)]
        elif y.size >= 3:
            diffs = np.diff(y)
            with np.errstate(divide="ignore", invalid="ignore"):
                entry["orders"] = [float(richardson_order(diffs[i:i + 2], vals[i + 1] / vals[i]
                                                          if axis == "grid.count" else vals[i] / vals[i + 1])[0])
                                   for i in range(diffs.size - 1)]
        if axis == "delta" and y.size >= 2:
            with np.errstate(divide="ignore", invalid="ignore"):
                entry["log_slopes"] = (np.diff(np.log(np.abs(y))) / np.diff(np.log(vals))).tolist()
        table["observables"][name] = entry
    return reports, table
