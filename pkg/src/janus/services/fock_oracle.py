"""Truncated Fock-space construction of the states and brute-force evaluation of their statistics.

Everything here is independent of the closed forms in janus.services.moments and
janus.services.wigner and serves as their ground truth.
"""
import logging
import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from scipy.special import gammaln, perm

from janus.config import Config, get_config
from janus.errors import CutoffTooSmall, InvalidParameter
from janus.models.params import Displacement, JanusSpec, SqueezeParam

logger = logging.getLogger(__name__)


@dataclass(frozen=True, eq=False)
class FockVector:
    """Amplitudes on |0>, ..., |cutoff>."""

    amps: np.ndarray

    def __post_init__(self):
        amps = np.array(self.amps, dtype=complex)
        if amps.ndim != 1 or amps.size < 3:
            raise InvalidParameter(f"Fock vector needs at least 3 amplitudes, got shape {amps.shape}")
        amps.flags.writeable = False
        object.__setattr__(self, "amps", amps)

    @property
    def cutoff(self) -> int:
        return self.amps.size - 1

    @property
    def norm(self) -> float:
        return float(np.linalg.norm(self.amps))

    def tail_mass(self, band: int | None = None) -> float:
        band = band or get_config().oracle.tail_band
        return float(np.sum(np.abs(self.amps[-band:]) ** 2))

    def weighted_tail_share(self, order: int, band: int | None = None) -> float:
        """Share of sum |psi_n|^2 (n+1)^order carried by the last band states."""
        band = min(band or get_config().oracle.tail_band, self.cutoff)
        weighted = self.probabilities() * (np.arange(self.cutoff + 1) + 1.0) ** order
        total = float(np.sum(weighted))
        return float(np.sum(weighted[-band:])) / total if total > 0 else 0.0

    def padded(self, cutoff: int) -> "FockVector":
        if cutoff < self.cutoff:
            raise InvalidParameter(f"cannot pad a cutoff {self.cutoff} vector down to {cutoff}")
        if cutoff == self.cutoff:
            return self
        return FockVector(np.concatenate([self.amps, np.zeros(cutoff - self.cutoff, dtype=complex)]))

    def probabilities(self) -> np.ndarray:
        return np.abs(self.amps) ** 2


def _check_cutoff(cutoff: int) -> None:
    if cutoff < 2:
        raise InvalidParameter(f"cutoff must be >= 2, got {cutoff}")


def _check_tail(vec: FockVector, what: str) -> FockVector:
    cfg = get_config().oracle
    mass = vec.tail_mass(min(cfg.tail_band, vec.cutoff))
    if mass > cfg.tail_tol * max(1.0, vec.norm**2):
        raise CutoffTooSmall(
            f"{what}: tail mass {mass:.3e} in the last {cfg.tail_band} states "
            f"exceeds {cfg.tail_tol:g} at cutoff {vec.cutoff}"
        )
    return vec


def _check_moment_tail(vec: FockVector, order: int, what: str) -> FockVector:
    cfg = get_config().oracle
    share = vec.weighted_tail_share(order)
    if share > cfg.moment_tol:
        raise CutoffTooSmall(
            f"{what}: order-{order} weighted tail share {share:.3e} "
            f"exceeds {cfg.moment_tol:g} at cutoff {vec.cutoff}"
        )
    return vec


def fock_number_state(n: int, cutoff: int) -> FockVector:
    _check_cutoff(cutoff)
    if not 0 <= n <= cutoff:
        raise InvalidParameter(f"number state |{n}> outside cutoff {cutoff}")
    amps = np.zeros(cutoff + 1, dtype=complex)
    amps[n] = 1.0
    return FockVector(amps)


def squeezed_vacuum_fock(xi: SqueezeParam, cutoff: int, check: bool = True) -> FockVector:
    """Even amplitudes (cosh r)^{-1/2} (e^{i theta} tanh r)^m sqrt((2m)!)/(2^m m!)."""
    _check_cutoff(cutoff)
    if xi.r == 0.0:
        return fock_number_state(0, cutoff)
    m = np.arange(cutoff // 2 + 1)
    log_c = 0.5 * gammaln(2 * m + 1) - m * math.log(2.0) - gammaln(m + 1)
    log_mag = -0.5 * math.log(math.cosh(xi.r)) + m * math.log(math.tanh(xi.r)) + log_c
    amps = np.zeros(cutoff + 1, dtype=complex)
    amps[2 * m] = np.exp(log_mag + 1j * m * xi.theta)
    vec = FockVector(amps)
    return _check_tail(vec, f"squeezed vacuum r={xi.r}") if check else vec


def coherent_fock(alpha: complex, cutoff: int, check: bool = True) -> FockVector:
    _check_cutoff(cutoff)
    alpha = complex(alpha)
    if alpha == 0:
        return fock_number_state(0, cutoff)
    n = np.arange(cutoff + 1)
    log_mag = -0.5 * abs(alpha) ** 2 + n * math.log(abs(alpha)) - 0.5 * gammaln(n + 1)
    vec = FockVector(np.exp(log_mag + 1j * n * np.angle(alpha)))
    return _check_tail(vec, f"coherent alpha={alpha}") if check else vec


def _laguerre_block(x: np.ndarray | float, d: int, nmax: int) -> np.ndarray:
    """lambda_n = sqrt(n! d!/(n+d)!) L_n^{(d)}(x) for n = 0..nmax by the scaled three-term recurrence.

    x may be an array; the result has shape (nmax + 1,) + shape(x).
    """
    x = np.asarray(x, dtype=float)
    out = np.empty((nmax + 1,) + x.shape)
    prev = np.zeros(x.shape)
    cur = np.ones(x.shape)
    out[0] = cur
    for n in range(nmax):
        nxt = ((2 * n + 1 + d - x) * cur - math.sqrt(n * (n + d)) * prev) / math.sqrt(
            (n + 1) * (n + 1 + d)
        )
        prev, cur = cur, nxt
        out[n + 1] = cur
    return out


def _build_displacement_matrix(alpha: complex, cutoff: int) -> np.ndarray:
    dim = cutoff + 1
    if alpha == 0:
        mat = np.eye(dim, dtype=complex)
        mat.flags.writeable = False
        return mat
    x = abs(alpha) ** 2
    phase = np.angle(alpha)
    mat = np.zeros((dim, dim), dtype=complex)
    # Column n, offset d: vectorized over d while recurring in n
    d = np.arange(dim, dtype=float)
    log_pref = -0.5 * x + 0.5 * d * math.log(x) - 0.5 * gammaln(d + 1)
    below = np.exp(log_pref + 1j * d * phase)
    above = np.exp(log_pref - 1j * d * (phase - math.pi))
    prev = np.zeros(dim)
    cur = np.ones(dim)
    # entries with n + d > cutoff are never stored and may overflow
    with np.errstate(over="ignore", invalid="ignore"):
        for n in range(dim):
            span = dim - n
            idx = np.arange(span)
            mat[n + idx, n] = below[:span] * cur[:span]
            mat[n, n + idx[1:]] = above[1:span] * cur[1:span]
            nxt = ((2 * n + 1 + d - x) * cur - math.sqrt(n) * np.sqrt(n + d) * prev) / (
                math.sqrt(n + 1) * np.sqrt(n + 1 + d)
            )
            prev, cur = cur, nxt
    mat.flags.writeable = False
    return mat


# At most DISPLACEMENT_CACHE_SIZE matrices of at most (CACHED_CUTOFF + 1)^2 entries (~20 MB)
DISPLACEMENT_CACHE_SIZE = 8
CACHED_CUTOFF = 400
_displacement_matrix_cached = lru_cache(maxsize=DISPLACEMENT_CACHE_SIZE)(_build_displacement_matrix)


def displacement_matrix(alpha: complex, cutoff: int) -> np.ndarray:
    """<m|D(alpha)|n> on the truncated space (read-only).

    Matrices up to CACHED_CUTOFF are cached per (alpha, cutoff); larger ones are rebuilt.
    """
    _check_cutoff(cutoff)
    alpha, cutoff = complex(alpha), int(cutoff)
    if cutoff > CACHED_CUTOFF:
        return _build_displacement_matrix(alpha, cutoff)
    return _displacement_matrix_cached(alpha, cutoff)


def displace_fock(state: FockVector, alpha: complex, check: bool = True) -> FockVector:
    alpha = complex(alpha)
    if alpha == 0:
        return state
    vec = FockVector(displacement_matrix(alpha, state.cutoff) @ state.amps)
    return _check_tail(vec, f"displacement alpha={alpha}") if check else vec


def squeezed_coherent_fock(xi: SqueezeParam, alpha: Displacement | complex, cutoff: int) -> FockVector:
    """D(alpha) S(xi)|0>."""
    a = alpha.alpha if isinstance(alpha, Displacement) else complex(alpha)
    return displace_fock(squeezed_vacuum_fock(xi, cutoff), a)


def choose_cutoff(spec: JanusSpec, config: Config | None = None) -> int:
    """Starting cutoff max(min_cutoff, ceil(8(|alpha|^2 + sinh^2 r_max) + 40))."""
    cfg = (config or get_config()).oracle
    override = Config.cutoff_override()
    if override is not None:
        return override
    r_max = max(spec.xi.r, spec.zeta.r)
    estimate = math.ceil(8.0 * (spec.alpha.mag**2 + math.sinh(r_max) ** 2) + 40.0)
    return max(cfg.min_cutoff, estimate)


def _grow_cutoff(spec: JanusSpec, build, order: int | None):
    """Call build(cutoff) from the choose_cutoff guess upwards until every vector it
    returns passes the order-weighted tail test."""
    cfg = get_config().oracle
    order = cfg.tail_order if order is None else order
    current = choose_cutoff(spec)
    while True:
        try:
            vecs = build(current)
            for vec in vecs:
                _check_moment_tail(vec, order, "Fock state")
            return vecs
        except CutoffTooSmall as e:
            grown = math.ceil(current * cfg.growth)
            if grown > cfg.max_cutoff:
                raise CutoffTooSmall(f"{e}; growth stopped at max cutoff {cfg.max_cutoff}") from e
            logger.info(f"Growing Fock cutoff {current} -> {grown}")
            current = grown


def _components(spec: JanusSpec, cutoff: int) -> tuple[FockVector, FockVector]:
    return (
        squeezed_coherent_fock(spec.xi, spec.alpha, cutoff),
        squeezed_coherent_fock(spec.zeta, spec.alpha, cutoff),
    )


def build_components_fock(
    spec: JanusSpec, cutoff: int | None = None, order: int | None = None
) -> tuple[FockVector, FockVector]:
    """D(alpha)S(xi)|0> and D(alpha)S(zeta)|0> on one shared cutoff, weights ignored."""
    if cutoff is not None:
        _check_cutoff(cutoff)
        return _components(spec, cutoff)
    return _grow_cutoff(spec, lambda c: _components(spec, c), order)


def _build_janus(spec: JanusSpec, cutoff: int) -> list[FockVector]:
    """The superposition followed by its nonzero-weight components."""
    amps = np.zeros(cutoff + 1, dtype=complex)
    parts = []
    for weight, xi in ((spec.chi, spec.xi), (spec.eta, spec.zeta)):
        if weight != 0:
            part = squeezed_coherent_fock(xi, spec.alpha, cutoff)
            amps = amps + weight * part.amps
            parts.append(part)
    return [FockVector(amps)] + parts


def build_janus_fock(
    spec: JanusSpec, cutoff: int | None = None, order: int | None = None
) -> FockVector:
    """chi D(alpha)S(xi)|0> + eta D(alpha)S(zeta)|0>.

    Without an explicit cutoff the starting guess of choose_cutoff grows by the
    configured factor until the tail-mass check and the weighted check at the
    given moment order (default oracle.tail_order) pass for the superposition
    and its components.
    """
    if cutoff is not None:
        _check_cutoff(cutoff)
        return _build_janus(spec, cutoff)[0]

    vec = _grow_cutoff(spec, lambda c: _build_janus(spec, c), order)[0]
    if abs(vec.norm - 1.0) > 1e-9:
        logger.debug(f"Fock state norm {vec.norm!r} at cutoff {vec.cutoff} (weights not normalized?)")
    return vec


def _aligned(a: FockVector, b: FockVector) -> tuple[np.ndarray, np.ndarray]:
    cutoff = max(a.cutoff, b.cutoff)
    return a.padded(cutoff).amps, b.padded(cutoff).amps


def overlap_fock(a: FockVector, b: FockVector) -> complex:
    """<a|b>."""
    x, y = _aligned(a, b)
    return complex(np.vdot(x, y))


def cross_moment_fock(bra: FockVector, ket: FockVector, k: int) -> complex:
    """<bra| a^dag^k a^k |ket> with the diagonal weights n!/(n-k)!."""
    if k < 0:
        raise InvalidParameter(f"moment order must be >= 0, got {k}")
    x, y = _aligned(bra, ket)
    weights = perm(np.arange(x.size), k)
    return complex(np.sum(np.conj(x) * y * weights))


def expectation_a2(state: FockVector) -> complex:
    """<a^2> = sum_n conj(psi_n) sqrt((n+1)(n+2)) psi_{n+2}."""
    psi = state.amps
    n = np.arange(psi.size - 2)
    return complex(np.sum(np.conj(psi[:-2]) * np.sqrt((n + 1) * (n + 2)) * psi[2:]))


def cross_wigner_fock(bra: FockVector, ket: FockVector, q, p) -> np.ndarray | complex:
    """Wigner function of |ket><bra| at (q, p), dq dp measure, beta = (q + ip)/sqrt(2).

    Sum of rho_{mn} W_{|m><n|} with, for m = n + d >= n,
    W = (1/pi) (-1)^n sqrt(n!/m!) (2 beta*)^d e^{-2|beta|^2} L_n^{(d)}(4|beta|^2).
    """
    ket_amps, bra_amps = _aligned(ket, bra)
    q_arr, p_arr = np.broadcast_arrays(np.asarray(q, dtype=float), np.asarray(p, dtype=float))
    scalar = q_arr.ndim == 0
    # y = 4|beta|^2
    y = np.atleast_1d(2.0 * (q_arr**2 + p_arr**2))
    arg = np.atleast_1d(np.arctan2(p_arr, q_arr))
    positive = y > 0
    log_y = np.log(np.where(positive, y, 1.0))

    dim = ket_amps.size
    total = np.zeros(y.shape, dtype=complex)
    for d in range(dim):
        if d == 0:
            pref = np.exp(-0.5 * y)
        else:
            pref = np.where(
                positive, np.exp(-0.5 * y + 0.5 * d * log_y - 0.5 * gammaln(d + 1)), 0.0
            )
            if not np.any(pref > 0):
                continue
        span = dim - d
        signs = (-1.0) ** np.arange(span)
        lam = _laguerre_block(y, d, span - 1)
        below = np.tensordot(signs * ket_amps[d:] * np.conj(bra_amps[:span]), lam, axes=1)
        if d == 0:
            total += pref * below
            continue
        above = np.tensordot(signs * ket_amps[:span] * np.conj(bra_amps[d:]), lam, axes=1)
        total += pref * (np.exp(-1j * d * arg) * below + np.exp(1j * d * arg) * above)
    total /= math.pi
    return complex(total[0]) if scalar else total.reshape(q_arr.shape)


def wigner_fock(state: FockVector, q, p) -> np.ndarray | float:
    """Real Wigner function of a pure state."""
    values = cross_wigner_fock(state, state, q, p)
    return float(np.real(values)) if np.ndim(values) == 0 else np.real(values)


def var_gsq_fock(state: FockVector, theta_g: float) -> float:
    """Var of G = (e^{-i theta_g} a^2 + e^{i theta_g} a^dag^2)/2 by ladder application."""
    psi = np.concatenate([state.amps, np.zeros(2, dtype=complex)])
    n = np.arange(psi.size)
    lower = np.zeros_like(psi)
    lower[:-2] = np.sqrt((n[:-2] + 1) * (n[:-2] + 2)) * psi[2:]
    raise_ = np.zeros_like(psi)
    raise_[2:] = np.sqrt(n[2:] * (n[2:] - 1)) * psi[:-2]
    g_psi = 0.5 * (np.exp(-1j * theta_g) * lower + np.exp(1j * theta_g) * raise_)
    norm2 = float(np.vdot(psi, psi).real)
    mean = np.vdot(psi, g_psi).real / norm2
    second = float(np.vdot(g_psi, g_psi).real) / norm2
    return second - mean**2
