"""Quantum Fisher information of displaced Janus states."""
import logging
import math
from dataclasses import dataclass, replace
from enum import Enum

import numpy as np

from janus.config import get_config
from janus.errors import InvalidParameter, StepTooSmall
from janus.models.params import JanusSpec, SqueezeParam, normalize_weights
from janus.services.fock_oracle import FockVector, build_janus_fock, var_gsq_fock
from janus.services.moments import janus_moment

logger = logging.getLogger(__name__)

MIN_DEFICIT = 1e-13
STEP_RANGE = (1e-5, 1e-2)
LEADING_ORDER_LIMIT = 0.3
# sqrt((2m)!)/(2^m m!) at m = 1 and m = 3
C1 = math.sqrt(2.0) / 2.0
C3 = math.sqrt(720.0) / 48.0


class QfiMethod(str, Enum):
    VARIANCE_FORMULA = "variance_formula"
    EXPANSION = "expansion"
    FIDELITY_NUMERIC = "fidelity_numeric"


class QfiParameter(str, Enum):
    DISPLACEMENT_PHASE = "displacement_phase"
    SQUEEZING_ANGLE = "squeezing_angle"
    SQUEEZING_GENERATOR = "squeezing_generator"


@dataclass(frozen=True)
class QfiResult:
    value: float
    method: QfiMethod
    parameter: QfiParameter
    sensitivity: float | None = None

    def to_dict(self) -> dict:
        return {
            "parameter": self.parameter.value,
            "method": self.method.value,
            "value": self.value,
            "sensitivity": self.sensitivity,
        }


def var_n(spec: JanusSpec) -> float:
    """Var(n) = N_2 + N_1 - N_1^2 of the normalized state."""
    spec = normalize_weights(spec)
    n1 = janus_moment(1, spec)
    return janus_moment(2, spec) + n1 - n1 * n1


def qfi_displacement_phase(spec: JanusSpec) -> QfiResult:
    return QfiResult(
        4.0 * var_n(spec), QfiMethod.VARIANCE_FORMULA, QfiParameter.DISPLACEMENT_PHASE
    )


def qfi_squeezing_angle_leading(r: float) -> float:
    """16 |c3/c1|^2 r^4 (= 10 r^4) for the undisplaced antisymmetric state."""
    if r > LEADING_ORDER_LIMIT:
        logger.warning(f"Leading-order squeezing-angle QFI used at r = {r} > {LEADING_ORDER_LIMIT}")
    return 16.0 * (C3 / C1) ** 2 * r**4


def _family(spec: JanusSpec, parameter: QfiParameter):
    """lambda -> spec along the one-parameter family of the given kind."""
    if parameter is QfiParameter.DISPLACEMENT_PHASE:
        # e^{i lambda n} rotates alpha by lambda and both squeezing axes by 2 lambda
        def shifted(lam: float) -> JanusSpec:
            return replace(
                spec,
                xi=spec.xi.rotated(2 * lam),
                zeta=spec.zeta.rotated(2 * lam),
            ).with_alpha(spec.alpha.alpha * complex(math.cos(lam), math.sin(lam)))

        return shifted
    if parameter is QfiParameter.SQUEEZING_ANGLE:

        def rotated(lam: float) -> JanusSpec:
            return normalize_weights(replace(spec, xi=spec.xi.rotated(lam)))

        return rotated
    raise InvalidParameter(f"no fidelity family for parameter {parameter.value}")


def _unit(vec: FockVector) -> np.ndarray:
    return vec.amps / vec.norm


def _fidelity_qfi(family, cutoff: int, h: float) -> tuple[float, float]:
    """8 (1 - |<psi(-h/2)|psi(h/2)>|) / h^2 and the fidelity deficit itself."""
    a = _unit(build_janus_fock(family(-h / 2), cutoff))
    b = _unit(build_janus_fock(family(h / 2), cutoff))
    overlap = np.vdot(b, a)
    phase = overlap / abs(overlap) if abs(overlap) > 0 else 1.0
    deficit = 0.5 * float(np.sum(np.abs(a - phase * b) ** 2))
    if deficit < MIN_DEFICIT:
        raise StepTooSmall(f"fidelity deficit {deficit:.3e} at step {h:g} is below {MIN_DEFICIT:g}")
    return 8.0 * deficit / h**2, deficit


def qfi_fidelity_numeric(
    spec: JanusSpec, parameter: QfiParameter, dl: float | None = None
) -> QfiResult:
    """Central-difference fidelity QFI with two-step Richardson extrapolation."""
    dl = dl if dl is not None else get_config().metrology.dl
    if not STEP_RANGE[0] <= dl <= STEP_RANGE[1]:
        raise InvalidParameter(f"step {dl} outside [{STEP_RANGE[0]:g}, {STEP_RANGE[1]:g}]")
    spec = normalize_weights(spec)
    family = _family(spec, parameter)
    cutoff = build_janus_fock(spec).cutoff

    coarse, _ = _fidelity_qfi(family, cutoff, dl)
    fine, _ = _fidelity_qfi(family, cutoff, dl / 2)
    value = (4.0 * fine - coarse) / 3.0
    sensitivity = abs(fine - coarse)
    if value > 0 and sensitivity > 0.1 * value:
        logger.warning(f"Fidelity QFI step sensitivity {sensitivity:.3e} is large vs value {value:.3e}")
    return QfiResult(value, QfiMethod.FIDELITY_NUMERIC, parameter, sensitivity)


def var_gsq(spec: JanusSpec, theta_g: float) -> float:
    """Var of (e^{-i theta_g} a^2 + e^{i theta_g} a^dag^2)/2 in the Fock-space state."""
    return var_gsq_fock(build_janus_fock(normalize_weights(spec)), theta_g)


def qfi_squeezing_generator(spec: JanusSpec, theta_g: float) -> QfiResult:
    return QfiResult(
        4.0 * var_gsq(spec, theta_g), QfiMethod.VARIANCE_FORMULA, QfiParameter.SQUEEZING_GENERATOR
    )


def var_gsq_scan(spec: JanusSpec, offsets, theta_g: float | None = None) -> list[tuple[float, float]]:
    """Var(G_sq) as the second squeezing axis moves to theta - offset.

    theta_g defaults to the first component's squeezing angle.
    """
    theta_g = spec.xi.theta if theta_g is None else theta_g
    rows = []
    for offset in offsets:
        moved = replace(spec, zeta=SqueezeParam(spec.zeta.r, spec.xi.theta - offset))
        rows.append((float(offset), var_gsq(moved, theta_g)))
    return rows
