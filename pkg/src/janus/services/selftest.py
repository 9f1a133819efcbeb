"""Bundled cross-checks of the closed forms against the exact and Fock-space references."""
import cmath
import logging
import math
from dataclasses import dataclass, field

import numpy as np

from janus.models.params import Displacement, JanusSpec, SqueezeParam, normalize_weights
from janus.services import fock_oracle, gsp, moments, wigner
from janus.services.metrology import QfiParameter, qfi_displacement_phase, qfi_fidelity_numeric

logger = logging.getLogger(__name__)

DEFAULT_SEED = 20240611
ORACLE_DRAWS = 100
QFI_DRAWS = 20


@dataclass(frozen=True)
class CheckResult:
    max_discrepancy: float
    tolerance: float

    @property
    def passed(self) -> bool:
        return self.max_discrepancy <= self.tolerance


@dataclass
class SelftestReport:
    seed: int
    checks: dict[str, CheckResult] = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks.values())

    def to_dict(self) -> dict:
        return {
            "seed": self.seed,
            "passed": self.passed,
            "checks": {
                name: {
                    "max_discrepancy": c.max_discrepancy,
                    "tolerance": c.tolerance,
                    "passed": c.passed,
                }
                for name, c in self.checks.items()
            },
        }


def random_spec(rng: np.random.Generator, r_max: float = 1.5, alpha_max: float = 2.0) -> JanusSpec:
    """Random normalized spec with r, s <= r_max and |alpha| <= alpha_max."""
    chi = complex(rng.normal(), rng.normal())
    eta = complex(rng.normal(), rng.normal())
    xi = SqueezeParam(rng.uniform(0, r_max), rng.uniform(0, 2 * math.pi))
    zeta = SqueezeParam(rng.uniform(0, r_max), rng.uniform(0, 2 * math.pi))
    alpha = Displacement.polar(rng.uniform(0, alpha_max), rng.uniform(0, 2 * math.pi))
    return normalize_weights(JanusSpec(chi, eta, xi, zeta, alpha))


def _relative(a: complex, b: complex) -> float:
    return abs(a - b) / max(1.0, abs(b))


def check_polynomials(max_index: int = 10) -> tuple[CheckResult, CheckResult]:
    symmetry = 0.0
    paths = 0.0
    for p in range(max_index + 1):
        for q in range(p % 2, max_index + 1, 2):
            residual = gsp.symmetry_residual_exact(p, q)
            symmetry = max([symmetry] + [float(abs(c)) for c in residual.coeffs])
            if q >= p:
                diff = gsp.poly(p, q) - gsp.poly_via_rec12(p, q)
                paths = max([paths] + [float(abs(c)) for c in diff.coeffs])
    return CheckResult(symmetry, 0.0), CheckResult(paths, 0.0)


def check_series(rng: np.random.Generator, draws: int = 40) -> CheckResult:
    worst = 0.0
    for _ in range(draws):
        p = int(rng.integers(0, 9))
        q = int(rng.integers(0, 5)) * 2 + p % 2
        angle = rng.uniform(0, 2 * math.pi)
        z = 0.9 * math.sqrt(rng.uniform()) * cmath.exp(1j * angle)
        closed = gsp.f_closed(p, q, z)
        scale = max(1.0, gsp.series_magnitude(p, q, z))
        worst = max(worst, abs(gsp.f_series(p, q, z) - closed) / scale)
    return CheckResult(worst, 1e-10)


def check_moments(rng: np.random.Generator, draws: int = ORACLE_DRAWS) -> tuple[CheckResult, CheckResult]:
    oracle = 0.0
    explicit = 0.0
    for _ in range(draws):
        spec = random_spec(rng)
        ket, bra = fock_oracle.build_components_fock(spec)
        for k in range(5):
            value = moments.matrix_element(k, spec.xi, spec.zeta, spec.alpha)
            oracle = max(oracle, _relative(fock_oracle.cross_moment_fock(bra, ket, k), value))
        for k, closed in ((1, moments.m1_closed), (2, moments.m2_closed), (3, moments.m3_closed)):
            value = moments.matrix_element(k, spec.xi, spec.zeta, spec.alpha)
            explicit = max(explicit, _relative(closed(spec.xi, spec.zeta, spec.alpha), value))
    return CheckResult(oracle, 1e-8), CheckResult(explicit, 1e-12)


def check_wigner(rng: np.random.Generator, draws: int = 3) -> CheckResult:
    worst = 0.0
    for _ in range(draws):
        spec = random_spec(rng, r_max=1.0, alpha_max=1.0)
        state = fock_oracle.build_janus_fock(spec)
        q0, p0 = wigner.center_of(spec.alpha)
        q = q0 + rng.uniform(-2, 2, size=9)
        p = p0 + rng.uniform(-2, 2, size=9)
        diff = np.abs(wigner.wigner_janus(spec, q, p) - fock_oracle.wigner_fock(state, q, p))
        worst = max(worst, float(np.max(diff)))
    return CheckResult(worst, 1e-6)


def check_qfi(rng: np.random.Generator, draws: int = QFI_DRAWS) -> CheckResult:
    worst = 0.0
    for _ in range(draws):
        spec = random_spec(rng, r_max=0.8, alpha_max=1.5)
        formula = qfi_displacement_phase(spec).value
        numeric = qfi_fidelity_numeric(spec, QfiParameter.DISPLACEMENT_PHASE).value
        worst = max(worst, abs(numeric - formula) / max(1.0, formula))
    return CheckResult(worst, 1e-3)


def run_selftest(seed: int = DEFAULT_SEED) -> SelftestReport:
    """Deterministic for a given seed."""
    rng = np.random.default_rng(seed)
    report = SelftestReport(seed)
    symmetry, paths = check_polynomials()
    report.checks["polynomial_symmetry"] = symmetry
    report.checks["recurrence_paths"] = paths
    report.checks["series_vs_closed"] = check_series(rng)
    oracle, explicit = check_moments(rng)
    report.checks["oracle_moments"] = oracle
    report.checks["explicit_forms"] = explicit
    report.checks["wigner_oracle"] = check_wigner(rng)
    report.checks["qfi_cross"] = check_qfi(rng)
    for name, check in report.checks.items():
        log = logger.info if check.passed else logger.warning
        log(f"selftest {name}: max discrepancy {check.max_discrepancy:.3e} (tolerance {check.tolerance:g})")
    return report
