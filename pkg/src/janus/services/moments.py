"""Matrix elements M_k = <zeta,alpha| a^dag^k a^k |xi,alpha>, factorial moments and g^(k)(0).

|xi,alpha> = D(alpha) S(xi)|0> with squeezed-vacuum amplitudes
(cosh r)^{-1/2} (e^{i theta} tanh r)^m sqrt((2m)!)/(2^m m!) on |2m>.
For the superposition chi|xi,alpha> + eta|zeta,alpha> the interference weight is
2 Re[conj(eta) chi M_k(xi, zeta, alpha)].
"""
import cmath
import logging
import math
from dataclasses import dataclass

from scipy.optimize import minimize_scalar

from janus.config import get_config
from janus.errors import BranchError, ConsistencyError, InvalidParameter, OrderTooLarge, VacuumState
from janus.models.params import (
    Displacement,
    JanusSpec,
    SqueezeParam,
    composite_z,
    norm_form,
    normalize_weights,
)
from janus.services.gsp import poly

logger = logging.getLogger(__name__)

VACUUM_THRESHOLD = 1e-12
EXPANSION_LIMIT = 0.3
CLOSED_FORM_RTOL = 1e-8


@dataclass(frozen=True)
class MomentResult:
    value: complex
    k: int
    branch_residual: float = 0.0

    @property
    def real(self) -> float:
        return self.value.real

    def to_dict(self) -> dict:
        return {"k": self.k, "value": self.value.real, "branch_residual": self.branch_residual}


def _alpha_value(alpha: Displacement | complex) -> complex:
    return alpha.alpha if isinstance(alpha, Displacement) else complex(alpha)


def _check_order(k: int) -> None:
    if k < 0:
        raise InvalidParameter(f"moment order must be >= 0, got {k}")
    cap = get_config().moments.order_cap
    if k > cap:
        raise OrderTooLarge(f"order {k} exceeds the configured cap {cap}")


def _prefactor(xi: SqueezeParam, zeta: SqueezeParam) -> float:
    return 1.0 / math.sqrt(math.cosh(xi.r) * math.cosh(zeta.r))


def m0(xi: SqueezeParam, zeta: SqueezeParam) -> complex:
    """Overlap <zeta|xi> of the two squeezed vacua."""
    arg = math.cosh(xi.r) * math.cosh(zeta.r) - math.sinh(xi.r) * math.sinh(zeta.r) * cmath.exp(
        1j * (xi.theta - zeta.theta)
    )
    return 1.0 / cmath.sqrt(arg)


def matrix_element(
    k: int, xi: SqueezeParam, zeta: SqueezeParam, alpha: Displacement | complex = 0j
) -> complex:
    """<zeta,alpha| a^dag^k a^k |xi,alpha> by the same-parity (p, q) double sum."""
    _check_order(k)
    a = _alpha_value(alpha)
    z = composite_z(xi, zeta).z
    log_one_minus_z = cmath.log(1.0 - z)
    bra_step = zeta.tanh * zeta.phase.conjugate()
    ket_step = xi.tanh * xi.phase

    total = 0j
    for p in range(k + 1):
        for q in range(p % 2, k + 1, 2):
            weight = math.comb(k, p) * math.comb(k, q) * a ** (k - p) * a.conjugate() ** (k - q)
            if weight == 0:
                continue
            # F_{p,q}(z) for q >= p, and the symmetric partner otherwise
            if q >= p:
                P = poly(p, q)
                shift = bra_step ** ((q - p) // 2)
            else:
                P = poly(q, p)
                shift = ket_step ** ((p - q) // 2)
            F = P.evaluate(z) * cmath.exp(-0.5 * (p + q + 1) * log_one_minus_z)
            total += weight * shift * F
    return _prefactor(xi, zeta) * total


def m1_closed(xi: SqueezeParam, zeta: SqueezeParam, alpha: Displacement | complex = 0j) -> complex:
    a2 = abs(_alpha_value(alpha)) ** 2
    z = composite_z(xi, zeta).z
    return _prefactor(xi, zeta) / (1 - z) ** 1.5 * (a2 * (1 - z) + z)


def _phase_terms(xi: SqueezeParam, zeta: SqueezeParam, alpha: Displacement | complex) -> complex:
    """tanh s e^{i(2 phi_a - phi)} + tanh r e^{i(theta - 2 phi_a)}."""
    phi_a = Displacement(_alpha_value(alpha)).phase
    return zeta.tanh * cmath.exp(1j * (2 * phi_a - zeta.theta)) + xi.tanh * cmath.exp(
        1j * (xi.theta - 2 * phi_a)
    )


def m2_closed(xi: SqueezeParam, zeta: SqueezeParam, alpha: Displacement | complex = 0j) -> complex:
    a2 = abs(_alpha_value(alpha)) ** 2
    z = composite_z(xi, zeta).z
    bracket = (
        (1 - z) ** 2 * a2**2
        + (2 * z**2 + z)
        + (1 - z) * a2 * (4 * z + _phase_terms(xi, zeta, alpha))
    )
    return _prefactor(xi, zeta) / (1 - z) ** 2.5 * bracket


def m3_closed(xi: SqueezeParam, zeta: SqueezeParam, alpha: Displacement | complex = 0j) -> complex:
    a2 = abs(_alpha_value(alpha)) ** 2
    z = composite_z(xi, zeta).z
    phases = _phase_terms(xi, zeta, alpha)
    bracket = (
        (1 - z) ** 3 * a2**3
        + (6 * z**3 + 9 * z**2)
        + (1 - z) ** 2 * a2**2 * (9 * z + 3 * phases)
        + (1 - z) * a2 * (9 * (2 * z**2 + z) + 9 * z * phases)
    )
    return _prefactor(xi, zeta) / (1 - z) ** 3.5 * bracket


def _single_state_terms(xi: SqueezeParam, alpha: Displacement | complex) -> tuple:
    a2 = abs(_alpha_value(alpha)) ** 2
    sh, ch = math.sinh(xi.r), math.cosh(xi.r)
    c1 = math.cos(2 * Displacement(_alpha_value(alpha)).phase - xi.theta)
    return a2, sh, ch, c1


def n3_closed(xi: SqueezeParam, alpha: Displacement | complex = 0j) -> float:
    a2, sh, ch, c1 = _single_state_terms(xi, alpha)
    return (
        a2**3
        + a2**2 * (9 * sh**2 + 6 * sh * ch * c1)
        + a2 * (27 * sh**4 + 9 * sh**2 + 18 * sh**3 * ch * c1)
        + 15 * sh**6
        + 9 * sh**4
    )


def n4_closed(xi: SqueezeParam, alpha: Displacement | complex = 0j) -> float:
    a2, sh, ch, c1 = _single_state_terms(xi, alpha)
    c2 = math.cos(2 * (2 * Displacement(_alpha_value(alpha)).phase - xi.theta))
    return (
        a2**4
        + a2**3 * (16 * sh**2 + 12 * sh * ch * c1)
        + a2**2 * (108 * sh**4 + 36 * sh**2 + 96 * sh**3 * ch * c1 + 6 * sh**2 * ch**2 * c2)
        + a2 * (240 * sh**6 + 144 * sh**4 + (180 * sh**5 + 36 * sh**3) * ch * c1)
        + 105 * sh**8
        + 90 * sh**6
        + 9 * sh**4
    )


def g2_single_closed(xi: SqueezeParam, alpha: Displacement | complex = 0j) -> float:
    """Explicit g^(2)(0) of one squeezed coherent state."""
    a2, sh, ch, c1 = _single_state_terms(xi, alpha)
    n1 = a2 + sh**2
    if n1 <= VACUUM_THRESHOLD:
        raise VacuumState(f"mean photon number {n1:.3e} too small")
    return (a2**2 + a2 * (4 * sh**2 + 2 * sh * ch * c1) + 3 * sh**4 + sh**2) / n1**2


_EXPLICIT_SINGLE = {3: n3_closed, 4: n4_closed}


def _real_part(value: complex, what: str) -> tuple[float, float]:
    residual = abs(value.imag)
    tol = get_config().moments.imag_tol * max(1.0, abs(value.real))
    if residual > tol:
        raise BranchError(f"{what} has imaginary residue {residual:.3e} (tolerance {tol:.3e})")
    return value.real, residual


def single_moment_result(k: int, xi: SqueezeParam, alpha: Displacement | complex = 0j) -> MomentResult:
    if k == 0:
        return MomentResult(1 + 0j, 0)
    value = matrix_element(k, xi, xi, alpha)
    real, residual = _real_part(value, f"N_{k}")
    explicit = _EXPLICIT_SINGLE.get(k)
    if explicit is not None:
        expected = explicit(xi, alpha)
        if abs(real - expected) > CLOSED_FORM_RTOL * max(1.0, abs(expected)):
            raise ConsistencyError(
                f"N_{k}: general formula {real!r} disagrees with explicit form {expected!r}"
            )
    return MomentResult(complex(real), k, residual)


def single_moment(k: int, xi: SqueezeParam, alpha: Displacement | complex = 0j) -> float:
    """<xi,alpha| a^dag^k a^k |xi,alpha> as a real number."""
    return single_moment_result(k, xi, alpha).real


def janus_moment_result(k: int, spec: JanusSpec) -> MomentResult:
    residual = 0.0
    total = 0.0
    if spec.chi != 0:
        diag = single_moment_result(k, spec.xi, spec.alpha)
        total += abs(spec.chi) ** 2 * diag.real
        residual = max(residual, diag.branch_residual)
    if spec.eta != 0:
        diag = single_moment_result(k, spec.zeta, spec.alpha)
        total += abs(spec.eta) ** 2 * diag.real
        residual = max(residual, diag.branch_residual)
        if spec.chi != 0:
            cross = spec.eta.conjugate() * spec.chi * matrix_element(k, spec.xi, spec.zeta, spec.alpha)
            total += 2.0 * cross.real
    return MomentResult(complex(total), k, residual)


def janus_moment(k: int, spec: JanusSpec) -> float:
    """<Psi| a^dag^k a^k |Psi> for the weights as given."""
    return janus_moment_result(k, spec).real


def gk(k: int, spec: JanusSpec) -> float:
    """g^(k)(0) of the normalized state.

    The weights need not be normalized; the norm quadratic form is divided out.
    """
    form = norm_form(spec)
    n1 = janus_moment(1, spec) / form
    if n1 <= VACUUM_THRESHOLD:
        raise VacuumState(f"mean photon number {n1:.3e} too small for g^({k})")
    return janus_moment(k, spec) / form / n1**k


def norm_deficit(spec: JanusSpec) -> float:
    return norm_form(spec) - 1.0


def antisymmetric_spec(r: float, alpha: complex = 0j, axis: float = 0.0) -> JanusSpec:
    """Normalized eta = -chi superposition with r = s and opposite squeezing axes."""
    xi = SqueezeParam(r, axis)
    zeta = SqueezeParam(r, axis + math.pi)
    return normalize_weights(JanusSpec(1.0, -1.0, xi, zeta, Displacement(alpha)))


def _warn_expansion(r: float) -> None:
    if r > EXPANSION_LIMIT:
        logger.warning(f"Small-squeezing expansion used at r = {r} > {EXPANSION_LIMIT}")


def antisym_g2_expansion(a: float, r: float) -> float:
    """Leading g^(2)(0) of the antisymmetric state plus its r^4 correction; a = |alpha|."""
    _warn_expansion(r)
    a2 = a * a
    return (a2**2 + 8 * a2 + 2) / (a2 + 2) ** 2 + 5 * (2 * a2**2 - a2 + 10) / (
        2 * (a2 + 2) ** 3
    ) * r**4


def antisym_g3_expansion(a: float, r: float) -> float:
    _warn_expansion(r)
    a2 = a * a
    return (a2**3 + 18 * a2**2 + 18 * a2) / (a2 + 2) ** 3 + 15 * (
        2 * a2**3 + 9 * a2**2 + 34 * a2 + 20
    ) / (2 * (a2 + 2) ** 4) * r**4


def _n2_vacuum(r: float) -> float:
    return 3 * math.sinh(r) ** 4 + math.sinh(r) ** 2


def undisplaced_g2(spec: JanusSpec) -> float:
    """g^(2)(0) at alpha = 0 from the vacuum moments and the M_1, M_2 interference terms.

    spec.alpha is ignored.
    """
    spec = normalize_weights(spec.with_alpha(0j))
    r, s = spec.xi.r, spec.zeta.r
    weight = spec.chi * spec.eta.conjugate()
    numer = (
        abs(spec.chi) ** 2 * _n2_vacuum(r)
        + abs(spec.eta) ** 2 * _n2_vacuum(s)
        + 2 * (weight * m2_closed(spec.xi, spec.zeta)).real
    )
    denom = (
        abs(spec.chi) ** 2 * math.sinh(r) ** 2
        + abs(spec.eta) ** 2 * math.sinh(s) ** 2
        + 2 * (weight * m1_closed(spec.xi, spec.zeta)).real
    )
    if denom <= VACUUM_THRESHOLD:
        raise VacuumState(f"mean photon number {denom:.3e} too small")
    return numer / denom**2


def optimized_g2_formula(r: float) -> float:
    """Rational g^(2)(r) of the optimized unequal-amplitude undisplaced state, x = sinh^2 r."""
    x = math.sinh(r) ** 2
    numer = 12 * x**5 + 40 * x**4 + 51 * x**3 + 28 * x**2 + 11 * x + 2
    denom = 4 * x**5 + 16 * x**4 + 29 * x**3 + 29 * x**2 + 16 * x + 4
    return numer / denom


@dataclass(frozen=True)
class OptimizedG2:
    g2: float
    ratio: float
    numeric_g2: float


def _weighted_family(r: float, ratio: float) -> JanusSpec:
    return JanusSpec(ratio, -1.0, SqueezeParam(r, 0.0), SqueezeParam(r, math.pi))


def optimized_g2_undisplaced(r: float, log_ratio_bound: float = 6.0) -> OptimizedG2:
    """Rational g^(2)(r) plus the weight ratio |chi|/|eta| minimizing g^(2) numerically.

    The minimum is taken over chi = c, eta = -1 with opposite squeezing axes.
    """
    if not r > 0.0:
        raise InvalidParameter(f"r must be > 0, got {r}")

    def objective(log_ratio: float) -> float:
        return gk(2, _weighted_family(r, math.exp(log_ratio)))

    found = minimize_scalar(
        objective,
        bounds=(-log_ratio_bound, log_ratio_bound),
        method="bounded",
        options={"xatol": 1e-10},
    )
    ratio = math.exp(found.x)
    logger.debug(f"optimized g2 at r={r}: ratio={ratio}, minimum={found.fun}")
    return OptimizedG2(optimized_g2_formula(r), ratio, float(found.fun))
