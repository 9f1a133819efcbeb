"""Parameter-scan definitions."""
import cmath
import math
from dataclasses import dataclass, replace

import numpy as np

from janus.errors import InvalidParameter
from janus.models.params import Displacement, JanusSpec, SqueezeParam

AXIS_NAMES = ("r", "s", "theta", "phi", "alpha_mag", "alpha_phase", "weight_ratio")
QUANTITY_KINDS = ("gk", "moment", "wigner_min", "qfi_dphase", "qfi_sangle", "optimized_g2")
ORDERED_KINDS = ("gk", "moment")


@dataclass(frozen=True)
class ScanAxis:
    name: str
    start: float
    stop: float
    count: int

    def __post_init__(self):
        if self.name not in AXIS_NAMES:
            raise InvalidParameter(f"unknown scan axis {self.name!r}; choose from {', '.join(AXIS_NAMES)}")
        if self.count < 2:
            raise InvalidParameter(f"axis {self.name} needs at least 2 points, got {self.count}")
        if not (math.isfinite(self.start) and math.isfinite(self.stop)):
            raise InvalidParameter(f"axis {self.name} range must be finite")

    @classmethod
    def parse(cls, text: str) -> "ScanAxis":
        """'name:start:stop:count'."""
        parts = text.split(":")
        if len(parts) != 4:
            raise InvalidParameter(f"axis must look like name:start:stop:count, got {text!r}")
        name, start, stop, count = parts
        try:
            return cls(name, float(start), float(stop), int(count))
        except ValueError as e:
            raise InvalidParameter(f"bad axis {text!r}: {e}") from e

    def values(self) -> np.ndarray:
        return np.linspace(self.start, self.stop, self.count)

    def describe(self) -> str:
        return f"{self.name}:{self.start!r}:{self.stop!r}:{self.count}"


@dataclass(frozen=True)
class Quantity:
    kind: str
    k: int | None = None

    def __post_init__(self):
        if self.kind not in QUANTITY_KINDS:
            raise InvalidParameter(f"unknown quantity {self.kind!r}; choose from {', '.join(QUANTITY_KINDS)}")
        if self.kind in ORDERED_KINDS and (self.k is None or self.k < 1):
            raise InvalidParameter(f"quantity {self.kind} needs an order, e.g. {self.kind}:2")

    @classmethod
    def parse(cls, text: str) -> "Quantity":
        kind, _, order = text.partition(":")
        try:
            return cls(kind, int(order) if order else None)
        except ValueError as e:
            raise InvalidParameter(f"bad quantity {text!r}: {e}") from e

    def describe(self) -> str:
        return f"{self.kind}:{self.k}" if self.k is not None else self.kind


def _phase_of(value: complex) -> complex:
    return cmath.exp(1j * cmath.phase(value)) if value != 0 else 1.0 + 0j


def apply_axis(spec: JanusSpec, name: str, value: float) -> JanusSpec:
    """Return spec with one scan parameter set to value."""
    if name == "r":
        return replace(spec, xi=SqueezeParam(value, spec.xi.theta))
    if name == "s":
        return replace(spec, zeta=SqueezeParam(value, spec.zeta.theta))
    if name == "theta":
        return replace(spec, xi=SqueezeParam(spec.xi.r, value))
    if name == "phi":
        return replace(spec, zeta=SqueezeParam(spec.zeta.r, value))
    if name == "alpha_mag":
        return replace(spec, alpha=Displacement.polar(value, spec.alpha.phase))
    if name == "alpha_phase":
        return replace(spec, alpha=Displacement.polar(spec.alpha.mag, value))
    if name == "weight_ratio":
        # |chi|/|eta| = value with both phases kept
        return spec.with_weights(value * _phase_of(spec.chi), _phase_of(spec.eta))
    raise InvalidParameter(f"unknown scan axis {name!r}")


@dataclass(frozen=True)
class ScanSpec:
    base: JanusSpec
    quantity: Quantity
    axis1: ScanAxis
    axis2: ScanAxis | None = None

    def __post_init__(self):
        if self.axis2 is not None and self.axis2.name == self.axis1.name:
            raise InvalidParameter(f"scan axes must differ, both are {self.axis1.name}")

    @property
    def axes(self) -> tuple[ScanAxis, ...]:
        return (self.axis1,) if self.axis2 is None else (self.axis1, self.axis2)

    def cells(self) -> list[tuple[float, ...]]:
        """Axis 1 outer, axis 2 inner."""
        if self.axis2 is None:
            return [(float(v),) for v in self.axis1.values()]
        return [(float(a), float(b)) for a in self.axis1.values() for b in self.axis2.values()]

    def spec_at(self, cell: tuple[float, ...]) -> JanusSpec:
        spec = self.base
        for axis, value in zip(self.axes, cell):
            spec = apply_axis(spec, axis.name, value)
        return spec
