"""Closed-form Wigner functions of squeezed coherent states and their superpositions.

Phase space uses the dq dp measure with beta = (q + ip)/sqrt(2); every pure Gaussian
state peaks at 1/pi. The squeezed vacuum |xi> has the position wave function
exp(-c x^2/2) with c = (1 - w)/(1 + w), w = e^{i theta} tanh r, so the cross-Wigner
function of |xi><zeta| is the complex Gaussian

    <zeta|xi> exp(-1/2 dx^T K dx) / pi,
    K = [[4 c_xi c_zeta*/S, -2i D/S], [-2i D/S, 4/S]],  S = c_xi + c_zeta*,  D = c_xi - c_zeta*,

with det K = 4. Sigma = K^-1 is real only when zeta = xi.
"""
import cmath
import logging
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from janus.config import get_config
from janus.errors import BranchError, GridTooCoarse, InvalidParameter, SingularSigma
from janus.models.params import Displacement, JanusSpec, SqueezeParam, normalize_weights
from janus.services.moments import m0

logger = logging.getLogger(__name__)

SINGULAR_DET = 1e-300
HERMITICITY_TOL = 1e-12


@dataclass(frozen=True)
class Covariance2:
    """Symmetric 2x2 matrix [[v11, v12], [v12, v22]]; entries may be complex for cross terms."""

    v11: complex
    v12: complex
    v22: complex

    @property
    def det(self) -> complex:
        return self.v11 * self.v22 - self.v12 * self.v12

    @property
    def is_real(self) -> bool:
        return all(complex(v).imag == 0 for v in (self.v11, self.v12, self.v22))

    def inverse(self) -> "Covariance2":
        det = self.det
        if abs(det) < SINGULAR_DET:
            raise SingularSigma(f"covariance determinant {det} is singular")
        return Covariance2(self.v22 / det, -self.v12 / det, self.v11 / det)


@dataclass(frozen=True)
class CrossGauss:
    """exp(-1/2 dx^T sigma^-1 dx) kernel of one (ket, bra) pair around a shared center."""

    overlap: complex
    sigma: Covariance2
    A: complex
    B: complex
    B_tilde: complex
    center: tuple[float, float]

    def evaluate(self, q, p):
        """Cross-Wigner value in the dq dp measure."""
        K = self.sigma.inverse()
        dq = np.asarray(q, dtype=float) - self.center[0]
        dp = np.asarray(p, dtype=float) - self.center[1]
        exponent = -0.5 * (K.v11 * dq**2 + 2 * K.v12 * dq * dp + K.v22 * dp**2)
        return self.overlap * np.exp(exponent) / (2 * math.pi * np.sqrt(complex(self.sigma.det)))

    def evaluate_complex(self, beta):
        """The same kernel in the d^2 beta measure: twice the dq dp density."""
        u = np.asarray(beta, dtype=complex) - complex(*self.center) / math.sqrt(2.0)
        exponent = -self.A * np.abs(u) ** 2 - self.B * u**2 - self.B_tilde * np.conj(u) ** 2
        return 2 * self.overlap * np.exp(exponent) / (2 * math.pi * np.sqrt(complex(self.sigma.det)))


def _rotation(angle: float) -> np.ndarray:
    c, s = math.cos(angle), math.sin(angle)
    return np.array([[c, -s], [s, c]])


def covariance(xi: SqueezeParam) -> Covariance2:
    """R(theta/2) diag(e^{2r}, e^{-2r})/2 R(theta/2)^T."""
    R = _rotation(xi.theta / 2)
    V = R @ np.diag([math.exp(2 * xi.r), math.exp(-2 * xi.r)]) @ R.T / 2
    return Covariance2(float(V[0, 0]), float(0.5 * (V[0, 1] + V[1, 0])), float(V[1, 1]))


def center_of(alpha: Displacement | complex) -> tuple[float, float]:
    a = alpha.alpha if isinstance(alpha, Displacement) else complex(alpha)
    return (math.sqrt(2.0) * a.real, math.sqrt(2.0) * a.imag)


def _width(xi: SqueezeParam) -> complex:
    w = xi.tanh * cmath.exp(1j * xi.theta)
    return (1 - w) / (1 + w)


def ab_coefficients(sigma: Covariance2) -> tuple[complex, complex]:
    """A = (K11 + K22)/2 and B = (K11 - K22 - 2i K12)/4 with K = sigma^-1."""
    K = sigma.inverse()
    return 0.5 * (K.v11 + K.v22), 0.25 * (K.v11 - K.v22 - 2j * K.v12)


def _b_tilde(sigma: Covariance2) -> complex:
    K = sigma.inverse()
    return 0.25 * (K.v11 - K.v22 + 2j * K.v12)


def gaussian_form(xi: SqueezeParam, zeta: SqueezeParam, alpha: Displacement | complex = 0j) -> CrossGauss:
    """Kernel of |xi,alpha><zeta,alpha|."""
    c_ket = _width(xi)
    c_bra = _width(zeta).conjugate()
    S = c_ket + c_bra
    D = c_ket - c_bra
    sigma = Covariance2(1 / S, 0.5j * D / S, c_ket * c_bra / S)
    if xi == zeta:
        sigma = Covariance2(sigma.v11.real, sigma.v12.real, sigma.v22.real)
    A, B = ab_coefficients(sigma)
    return CrossGauss(m0(xi, zeta), sigma, A, B, _b_tilde(sigma), center_of(alpha))


def wigner_single(xi: SqueezeParam, alpha: Displacement | complex, q, p):
    """Gaussian Wigner function of D(alpha)S(xi)|0>."""
    V = covariance(xi)
    K = V.inverse()
    q0, p0 = center_of(alpha)
    dq = np.asarray(q, dtype=float) - q0
    dp = np.asarray(p, dtype=float) - p0
    exponent = -0.5 * (K.v11 * dq**2 + 2 * K.v12 * dq * dp + K.v22 * dp**2)
    values = np.exp(exponent) / (2 * math.pi * math.sqrt(V.det))
    return float(values) if np.ndim(values) == 0 else values


def cross_wigner(xi: SqueezeParam, zeta: SqueezeParam, alpha: Displacement | complex, q, p):
    """Wigner function of |xi,alpha><zeta,alpha|; integrates to <zeta|xi>."""
    values = gaussian_form(xi, zeta, alpha).evaluate(q, p)
    return complex(values) if np.ndim(values) == 0 else values


def cross_wigner_complex(xi: SqueezeParam, zeta: SqueezeParam, alpha: Displacement | complex, beta):
    values = gaussian_form(xi, zeta, alpha).evaluate_complex(beta)
    return complex(values) if np.ndim(values) == 0 else values


def interference_term(spec: JanusSpec, q, p):
    """2 Re[conj(eta) chi W_{xi zeta}], built from both orderings of the cross kernel.

    Raises BranchError when the two orderings are not conjugate to HERMITICITY_TOL.
    """
    weight = spec.eta.conjugate() * spec.chi
    forward = cross_wigner(spec.xi, spec.zeta, spec.alpha, q, p)
    backward = cross_wigner(spec.zeta, spec.xi, spec.alpha, q, p)
    total = weight * np.asarray(forward) + weight.conjugate() * np.asarray(backward)
    residual = float(np.max(np.abs(np.imag(total))))
    if residual > HERMITICITY_TOL * max(1.0, abs(weight)):
        raise BranchError(f"interference term has imaginary residue {residual:.3e}")
    values = np.real(total)
    return float(values) if np.ndim(values) == 0 else values


def mixture_term(spec: JanusSpec, q, p):
    values = abs(spec.chi) ** 2 * wigner_single(spec.xi, spec.alpha, q, p) + abs(
        spec.eta
    ) ** 2 * wigner_single(spec.zeta, spec.alpha, q, p)
    return values


def wigner_janus(spec: JanusSpec, q, p):
    """|chi|^2 W_xi + |eta|^2 W_zeta + 2 Re[conj(eta) chi W_{xi zeta}]."""
    values = mixture_term(spec, q, p)
    if spec.chi != 0 and spec.eta != 0:
        values = values + interference_term(spec, q, p)
    return float(values) if np.ndim(values) == 0 else values


@dataclass(frozen=True)
class WignerExtents:
    q_min: float
    q_max: float
    p_min: float
    p_max: float

    def __post_init__(self):
        if not (self.q_max > self.q_min and self.p_max > self.p_min):
            raise InvalidParameter(f"empty phase-space window {self}")

    @classmethod
    def square(cls, center: tuple[float, float], half_width: float) -> "WignerExtents":
        q0, p0 = center
        return cls(q0 - half_width, q0 + half_width, p0 - half_width, p0 + half_width)


def default_extents(spec: JanusSpec) -> WignerExtents:
    """Center +- sigmas standard deviations of the wider component."""
    r_max = max(spec.xi.r, spec.zeta.r)
    half_width = get_config().grid.sigmas * math.sqrt(math.exp(2 * r_max) / 2)
    return WignerExtents.square(center_of(spec.alpha), half_width)


@dataclass(frozen=True, eq=False)
class WignerGrid:
    """values[i, j] = W(q[i], p[j])."""

    q: np.ndarray
    p: np.ndarray
    values: np.ndarray
    integral: float
    min_value: float
    min_location: tuple[float, float]
    negativity_volume: float

    @property
    def step(self) -> tuple[float, float]:
        return float(self.q[1] - self.q[0]), float(self.p[1] - self.p[0])

    @classmethod
    def from_values(cls, q: np.ndarray, p: np.ndarray, values: np.ndarray) -> "WignerGrid":
        hq, hp = q[1] - q[0], p[1] - p[0]
        integral = float(np.sum(values) * hq * hp)
        i, j = np.unravel_index(int(np.argmin(values)), values.shape)
        # equals the integral of |W| minus 1 for a normalized total grid
        negativity = float(np.sum(np.abs(values)) * hq * hp) - integral
        return cls(
            q, p, values, integral, float(values[i, j]), (float(q[i]), float(p[j])), negativity
        )

    def summary(self) -> dict:
        return {
            "integral": self.integral,
            "min_value": self.min_value,
            "min_q": self.min_location[0],
            "min_p": self.min_location[1],
            "negativity_volume": self.negativity_volume,
        }

    def csv_rows(self):
        for i, qv in enumerate(self.q):
            for j, pv in enumerate(self.p):
                yield float(qv), float(pv), float(self.values[i, j])


@dataclass(frozen=True, eq=False)
class WignerDecomposition:
    mixture: WignerGrid
    interference: WignerGrid
    total: WignerGrid


def _axis(lo: float, hi: float, step: float | None) -> np.ndarray:
    min_points = get_config().grid.points
    if step is None:
        return np.linspace(lo, hi, min_points)
    if not step > 0.0:
        raise InvalidParameter(f"grid step must be > 0, got {step}")
    count = int(math.floor((hi - lo) / step + 1e-9)) + 1
    if count < 2:
        raise InvalidParameter(f"step {step} leaves fewer than two points on [{lo}, {hi}]")
    return lo + step * np.arange(count)


def _evaluate_rows(fn, q: np.ndarray, p: np.ndarray, workers: int) -> np.ndarray:
    """fn(q_i, p_row) for every row, in row order."""
    if workers <= 1:
        rows = [fn(qv, p) for qv in q]
    else:
        with ThreadPoolExecutor(max_workers=workers) as executor:
            rows = list(executor.map(lambda qv: fn(qv, p), q))
    return np.vstack(rows)


def wigner_grid(
    spec: JanusSpec,
    extents: WignerExtents | None = None,
    step: float | None = None,
    decompose: bool = False,
    workers: int | None = None,
) -> WignerGrid | WignerDecomposition:
    """Sample the Wigner function of the normalized state on a uniform grid."""
    spec = normalize_weights(spec)
    extents = extents or default_extents(spec)
    workers = workers or get_config().scan.workers
    q = _axis(extents.q_min, extents.q_max, step)
    p = _axis(extents.p_min, extents.p_max, step)
    logger.info(f"Evaluating Wigner grid {q.size} x {p.size} with {workers} worker(s)")

    mixture = _evaluate_rows(lambda qv, pr: mixture_term(spec, qv, pr), q, p, workers)
    if spec.chi != 0 and spec.eta != 0:
        interference = _evaluate_rows(lambda qv, pr: interference_term(spec, qv, pr), q, p, workers)
    else:
        interference = np.zeros_like(mixture)
    total = WignerGrid.from_values(q, p, mixture + interference)

    tol = get_config().grid.coarse_tol
    if abs(total.integral - 1.0) > tol:
        raise GridTooCoarse(
            f"grid integral {total.integral:.6f} deviates from 1 by more than {tol:g}; "
            f"widen the extents or refine the step"
        )
    if not decompose:
        return total
    return WignerDecomposition(
        WignerGrid.from_values(q, p, mixture), WignerGrid.from_values(q, p, interference), total
    )
