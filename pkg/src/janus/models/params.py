"""State specification types."""
import cmath
import json
import logging
import math
from dataclasses import dataclass, replace
from pathlib import Path

from janus.errors import DegenerateState, InvalidParameter

logger = logging.getLogger(__name__)

TWO_PI = 2.0 * math.pi
DEGENERATE_NORM = 1e-14

SPEC_KEYS = (
    "chi_re", "chi_im", "eta_re", "eta_im",
    "r", "theta", "s", "phi",
    "alpha_re", "alpha_im",
)


def reduce_angle(angle: float) -> float:
    """Reduce an angle to [0, 2pi)."""
    reduced = math.fmod(angle, TWO_PI)
    if reduced < 0.0:
        reduced += TWO_PI
    # fmod of a tiny negative number can round up to exactly 2pi
    return 0.0 if reduced >= TWO_PI else reduced


@dataclass(frozen=True)
class SqueezeParam:
    """Squeezing xi = r e^{i theta}."""

    r: float
    theta: float = 0.0

    def __post_init__(self):
        if not math.isfinite(self.r) or self.r < 0.0:
            raise InvalidParameter(f"squeezing magnitude must be finite and >= 0, got {self.r}")
        if not math.isfinite(self.theta):
            raise InvalidParameter(f"squeezing angle must be finite, got {self.theta}")
        object.__setattr__(self, "r", float(self.r))
        object.__setattr__(self, "theta", reduce_angle(float(self.theta)))

    @property
    def tanh(self) -> float:
        return math.tanh(self.r)

    @property
    def phase(self) -> complex:
        return cmath.exp(1j * self.theta)

    def rotated(self, delta: float) -> "SqueezeParam":
        return SqueezeParam(self.r, self.theta + delta)


@dataclass(frozen=True)
class Displacement:
    alpha: complex = 0j

    def __post_init__(self):
        value = complex(self.alpha)
        if not (math.isfinite(value.real) and math.isfinite(value.imag)):
            raise InvalidParameter(f"displacement must be finite, got {self.alpha}")
        object.__setattr__(self, "alpha", value)

    @property
    def mag(self) -> float:
        return abs(self.alpha)

    @property
    def phase(self) -> float:
        return reduce_angle(cmath.phase(self.alpha)) if self.alpha != 0 else 0.0

    @classmethod
    def polar(cls, mag: float, phase: float) -> "Displacement":
        return cls(cmath.rect(mag, phase))


@dataclass(frozen=True)
class CompositeZ:
    """Interference variable z = tanh r tanh s e^{i(theta - phi)}."""

    z: complex


def composite_z(xi: SqueezeParam, zeta: SqueezeParam) -> CompositeZ:
    return CompositeZ(xi.tanh * zeta.tanh * cmath.exp(1j * (xi.theta - zeta.theta)))


@dataclass(frozen=True)
class JanusSpec:
    """chi |xi, alpha> + eta |zeta, alpha>."""

    chi: complex
    eta: complex
    xi: SqueezeParam
    zeta: SqueezeParam
    alpha: Displacement = Displacement()

    def __post_init__(self):
        chi, eta = complex(self.chi), complex(self.eta)
        for name, value in (("chi", chi), ("eta", eta)):
            if not (math.isfinite(value.real) and math.isfinite(value.imag)):
                raise InvalidParameter(f"weight {name} must be finite, got {value}")
        if chi == 0 and eta == 0:
            raise InvalidParameter("chi and eta cannot both be zero")
        object.__setattr__(self, "chi", chi)
        object.__setattr__(self, "eta", eta)

    @classmethod
    def single(cls, xi: SqueezeParam, alpha: complex = 0j) -> "JanusSpec":
        """One squeezed coherent state (eta = 0)."""
        return cls(1.0, 0.0, xi, xi, Displacement(alpha))

    def with_weights(self, chi: complex, eta: complex) -> "JanusSpec":
        return replace(self, chi=complex(chi), eta=complex(eta))

    def with_alpha(self, alpha: complex) -> "JanusSpec":
        return replace(self, alpha=Displacement(alpha))

    def to_dict(self) -> dict:
        """Flat JSON mapping (see SPEC_KEYS)."""
        return {
            "chi_re": self.chi.real,
            "chi_im": self.chi.imag,
            "eta_re": self.eta.real,
            "eta_im": self.eta.imag,
            "r": self.xi.r,
            "theta": self.xi.theta,
            "s": self.zeta.r,
            "phi": self.zeta.theta,
            "alpha_re": self.alpha.alpha.real,
            "alpha_im": self.alpha.alpha.imag,
        }

    @classmethod
    def from_dict(cls, data: dict) -> "JanusSpec":
        unknown = sorted(set(data) - set(SPEC_KEYS))
        if unknown:
            logger.warning(f"Ignoring unknown spec keys: {', '.join(unknown)}")

        def get(key: str) -> float:
            try:
                return float(data.get(key, 0.0))
            except (TypeError, ValueError) as e:
                raise InvalidParameter(f"spec key {key!r} is not a number: {data[key]!r}") from e

        return cls(
            chi=complex(get("chi_re"), get("chi_im")),
            eta=complex(get("eta_re"), get("eta_im")),
            xi=SqueezeParam(get("r"), get("theta")),
            zeta=SqueezeParam(get("s"), get("phi")),
            alpha=Displacement(complex(get("alpha_re"), get("alpha_im"))),
        )

    @classmethod
    def from_json(cls, path: Path) -> "JanusSpec":
        """Load a spec from a JSON file."""
        try:
            with open(path, "r", encoding="utf-8") as f:
                data = json.load(f)
            return cls.from_dict(data)
        except Exception as e:
            logger.error(f"Failed to load spec from {path}: {e}")
            raise

    def save(self, path: Path) -> None:
        with open(path, "w", encoding="utf-8") as f:
            json.dump(self.to_dict(), f, indent=2)


def norm_form(spec: JanusSpec) -> float:
    """|chi|^2 + |eta|^2 + 2 Re[eta* chi <zeta,alpha|xi,alpha>]."""
    from janus.services.moments import m0

    overlap = m0(spec.xi, spec.zeta)
    cross = spec.eta.conjugate() * spec.chi * overlap
    return abs(spec.chi) ** 2 + abs(spec.eta) ** 2 + 2.0 * cross.real


def normalize_weights(spec: JanusSpec) -> JanusSpec:
    """Scale (chi, eta) by one positive real so that the state has unit norm."""
    form = norm_form(spec)
    if form <= DEGENERATE_NORM:
        raise DegenerateState(
            f"norm quadratic form {form:.3e} <= {DEGENERATE_NORM:g}: components cancel"
        )
    scale = 1.0 / math.sqrt(form)
    return spec.with_weights(spec.chi * scale, spec.eta * scale)
