"""Tolerance and solver configuration shared across stages."""

from dataclasses import dataclass, field, replace


@dataclass(frozen=True)
class Tolerances:
    tol_dec: float = 1e-10
    # discretization acceptance is disc_factor * dr**2
    disc_factor: float = 8.0
    root_rtol: float = 1e-10
    smoothness_bound: float = 1e3
    tol_embed: float = 1e-6
    tol_minimal_H: float = 1e-4

    def discretization(self, dr):
        return self.disc_factor * dr * dr

    def with_overrides(self, **kw):
        return replace(self, **kw)


@dataclass(frozen=True)
class JangConfig:
    eps_start: float = 1e-1
    eps_min: float = 1e-8
    eps_factor: float = 0.25
    newton_tol: float = 1e-11
    max_newton: int = 60
    max_halvings: int = 40
    blowup_threshold: float = 1e6
    # rho' / sqrt(gbar_rr) below this marks the cylinder plateau
    plateau_slope: float = 1e-3

    def schedule(self):
        eps = [self.eps_start]
        while eps[-1] * self.eps_factor >= self.eps_min * (1 - 1e-12):
            eps.append(eps[-1] * self.eps_factor)
        if eps[-1] > self.eps_min * (1 + 1e-12):
            eps.append(self.eps_min)
        return eps


@dataclass(frozen=True)
class AdmissibilityConfig:
    """Constants entering the admissible-X audit.

    Any of d1, d2, d3 left as None is set to the measured norm, i.e. the
    tightest constant for which the strict norm bounds can hold.
    """

    d1: float | None = None
    d2: float | None = None
    d3: float | None = None
    C1: float = 1.0
    delta: float = 1e-3
    sobolev_scale: float | None = None


# sharp Euclidean constant in ||u||_6^2 <= C ||grad u||_2^2
FLAT_SOBOLEV = 1.0 / (3.0 * (3.141592653589793 / 2.0) ** (4.0 / 3.0))


@dataclass(frozen=True)
class GlueConfig:
    # tube width; the mass bookkeeping closes only as delta -> 0
    delta: float = 1e-3
    far_factor: float = 100.0
    tail_window: tuple = (50.0, 100.0)
    tube_nodes: int = 400
    # growth factor of graded spacings away from the tube
    grading: float = 1.05
    # largest spacing on the extension, in units of rho_b
    far_spacing: float = 0.02
    tol_K: float = 1e-7
    tol_A: float = 1e-4


@dataclass(frozen=True)
class QuasiLocalConfig:
    theta_nodes: int = 512
    family_degree: int = 2
    family_box: float = 0.5
    golden_tol: float = 1e-4
    sweeps: int = 3


@dataclass(frozen=True)
class CriteriaConfig:
    C_absolute: float = 1.0
    # curvatures below this count as zero (rounding noise of flat data)
    tiny_curvature: float = 1e-9
    # isoperimetric-branch ties must be won by this relative margin
    tie_margin: float = 1e-8


@dataclass(frozen=True)
class PipelineConfig:
    tolerances: Tolerances = field(default_factory=Tolerances)
    jang: JangConfig = field(default_factory=JangConfig)
    admissibility: AdmissibilityConfig = field(default_factory=AdmissibilityConfig)
    glue: GlueConfig = field(default_factory=GlueConfig)
    quasilocal: QuasiLocalConfig = field(default_factory=QuasiLocalConfig)
    criteria: CriteriaConfig = field(default_factory=CriteriaConfig)
    imcf_dt: float = 1e-3
