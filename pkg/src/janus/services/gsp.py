"""Generalized squeezing functions F_{p,q}(z) and polynomials P_{p,q}(z).

F_{p,q}(z) = sum_{n >= n_min} (2n)!/(2n-p)! * (2n+q-p-1)!!/(2n)!! * z^n
           = P_{p,q}(z) / (1-z)^{(p+q+1)/2}

The polynomials are built exactly (rational coefficients) from P_{0,0} = 1 with

    P_{p+1,q+1} = ((2p+q+1) z - p) P_{p,q} + 2z(1-z) P'_{p,q}
    P_{p,q+2}   = (2pz - p + q + 1) P_{p,q} + 2z(1-z) P'_{p,q}
    P_{p+2,q}   = P_{p+1,q+1} + q(z-1) P_{p+1,q-1}

and are zero whenever p and q have different parity.
"""
import cmath
import logging
import math
import threading
from dataclasses import dataclass
from fractions import Fraction

import numpy as np
from scipy.special import gammaln

from janus.config import get_config
from janus.errors import InvalidParameter, NoConvergence

logger = logging.getLogger(__name__)


def _trim(coeffs: list[Fraction]) -> tuple[Fraction, ...]:
    end = len(coeffs)
    while end > 0 and coeffs[end - 1] == 0:
        end -= 1
    return tuple(coeffs[:end])


def _add(a: tuple[Fraction, ...], b: tuple[Fraction, ...]) -> tuple[Fraction, ...]:
    size = max(len(a), len(b))
    out = [Fraction(0)] * size
    for i, c in enumerate(a):
        out[i] += c
    for i, c in enumerate(b):
        out[i] += c
    return _trim(out)


def _mul(a: tuple[Fraction, ...], b: tuple[Fraction, ...]) -> tuple[Fraction, ...]:
    if not a or not b:
        return ()
    out = [Fraction(0)] * (len(a) + len(b) - 1)
    for i, ca in enumerate(a):
        if ca == 0:
            continue
        for j, cb in enumerate(b):
            out[i + j] += ca * cb
    return _trim(out)


def _derivative(a: tuple[Fraction, ...]) -> tuple[Fraction, ...]:
    return _trim([i * c for i, c in enumerate(a)][1:])


def _shift(a: tuple[Fraction, ...], power: int) -> tuple[Fraction, ...]:
    """Multiply by z**power (power >= 0)."""
    return (Fraction(0),) * power + a if a else ()


def _linear(c0: int, c1: int) -> tuple[Fraction, ...]:
    return _trim([Fraction(c0), Fraction(c1)])


# 2z(1-z)
_TWO_Z_ONE_MINUS_Z = (Fraction(0), Fraction(2), Fraction(-2))


@dataclass(frozen=True)
class PolyZ:
    """Exact polynomial in z, ascending coefficients."""

    coeffs: tuple[Fraction, ...]
    p: int = 0
    q: int = 0

    def __post_init__(self):
        object.__setattr__(self, "coeffs", _trim([Fraction(c) for c in self.coeffs]))

    @property
    def is_zero(self) -> bool:
        return not self.coeffs

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    @property
    def lowest_degree(self) -> int:
        for i, c in enumerate(self.coeffs):
            if c != 0:
                return i
        return -1

    def derivative(self) -> "PolyZ":
        return PolyZ(_derivative(self.coeffs), self.p, self.q)

    def evaluate(self, z: complex) -> complex:
        if self.is_zero:
            return 0j
        coeffs = np.array([float(c) for c in self.coeffs])
        return complex(np.polynomial.polynomial.polyval(complex(z), coeffs))

    def evaluate_exact(self, z: Fraction) -> Fraction:
        total = Fraction(0)
        for c in reversed(self.coeffs):
            total = total * z + c
        return total

    def to_csv_field(self) -> str:
        """Coefficients as 'c0;c1;...' (exact decimal integers or n/d)."""
        return ";".join(str(c) for c in self.coeffs) if self.coeffs else "0"

    def __sub__(self, other: "PolyZ") -> "PolyZ":
        return PolyZ(_add(self.coeffs, tuple(-c for c in other.coeffs)), self.p, self.q)


@dataclass(frozen=True)
class SeriesControl:
    tol: float = 1e-16
    max_terms: int = 100_000

    def __post_init__(self):
        if not self.tol > 0.0:
            raise InvalidParameter(f"series tol must be > 0, got {self.tol}")
        if self.max_terms < 1:
            raise InvalidParameter(f"max_terms must be >= 1, got {self.max_terms}")

    @classmethod
    def from_config(cls) -> "SeriesControl":
        cfg = get_config().series
        return cls(cfg.tol, cfg.max_terms)


def same_parity(p: int, q: int) -> bool:
    return (p - q) % 2 == 0


def _check_indices(p: int, q: int) -> None:
    if p < 0 or q < 0:
        raise InvalidParameter(f"indices must be non-negative, got ({p}, {q})")


class PolynomialTable:
    """Memoized P_{p,q} table; reads are lock-free, growth is serialized."""

    def __init__(self, cap: int):
        self._lock = threading.Lock()
        self._cap = -1
        self._table: dict[tuple[int, int], tuple[Fraction, ...]] = {}
        self.ensure(cap)

    @property
    def cap(self) -> int:
        return self._cap

    def ensure(self, cap: int) -> None:
        if cap <= self._cap:
            return
        with self._lock:
            if cap <= self._cap:
                return
            logger.info(f"Building squeezing polynomial table up to p, q <= {cap}")
            table = _build_table(cap)
            self._table = table
            self._cap = cap

    def get(self, p: int, q: int) -> tuple[Fraction, ...]:
        self.ensure(max(p, q))
        return self._table[(p, q)]


def _build_table(cap: int) -> dict[tuple[int, int], tuple[Fraction, ...]]:
    """Rows p = 0, 1 by Rec2/Rec1, then every further row by the three-term step."""
    width = 2 * cap + 2
    table: dict[tuple[int, int], tuple[Fraction, ...]] = {(0, 0): (Fraction(1),)}

    # Row 0: Rec2 with p = 0
    for q in range(0, width - 1):
        if q % 2:
            table[(0, q)] = ()
            continue
        if q + 2 <= width:
            prev = table[(0, q)]
            table[(0, q + 2)] = _add(
                _mul(_linear(q + 1, 0), prev),
                _mul(_TWO_Z_ONE_MINUS_Z, _derivative(prev)),
            )
    table.setdefault((0, width - 1), ())

    # Row 1: Rec1 from row 0
    table[(1, 0)] = ()
    for q in range(0, width - 1):
        prev = table.get((0, q), ())
        table[(1, q + 1)] = _rec1(0, q, prev)

    # Rows p + 2 by the three-term step; each row is one column shorter
    for p in range(0, cap - 1):
        row_width = width - p - 2
        for q in range(0, row_width):
            if not same_parity(p + 2, q):
                table[(p + 2, q)] = ()
                continue
            upper = table[(p + 1, q + 1)]
            if q == 0:
                table[(p + 2, q)] = upper
            else:
                lower = table[(p + 1, q - 1)]
                table[(p + 2, q)] = _add(upper, _mul(_linear(-q, q), lower))

    return {(p, q): c for (p, q), c in table.items() if p <= cap and q <= cap}


def _rec1(p: int, q: int, prev: tuple[Fraction, ...]) -> tuple[Fraction, ...]:
    """P_{p+1,q+1} from P_{p,q}."""
    return _add(
        _mul(_linear(-p, 2 * p + q + 1), prev),
        _mul(_TWO_Z_ONE_MINUS_Z, _derivative(prev)),
    )


def _rec2(p: int, q: int, prev: tuple[Fraction, ...]) -> tuple[Fraction, ...]:
    """P_{p,q+2} from P_{p,q}."""
    return _add(
        _mul(_linear(q + 1 - p, 2 * p), prev),
        _mul(_TWO_Z_ONE_MINUS_Z, _derivative(prev)),
    )


_default_table: PolynomialTable | None = None
_default_lock = threading.Lock()


def default_table() -> PolynomialTable:
    global _default_table
    if _default_table is None:
        with _default_lock:
            if _default_table is None:
                _default_table = PolynomialTable(get_config().gsp.table_cap)
    return _default_table


def poly(p: int, q: int) -> PolyZ:
    """Exact P_{p,q}(z) from the memoized table."""
    _check_indices(p, q)
    if not same_parity(p, q):
        return PolyZ((), p, q)
    return PolyZ(default_table().get(p, q), p, q)


def poly_via_rec12(p: int, q: int) -> PolyZ:
    """P_{p,q} for q >= p using only the two fundamental relations.

    P_{0,q-p} comes from repeated Rec2, then Rec1 is applied p times.
    """
    _check_indices(p, q)
    if q < p:
        raise InvalidParameter(f"Rec1/Rec2 reach only q >= p, got ({p}, {q})")
    if not same_parity(p, q):
        return PolyZ((), p, q)
    coeffs: tuple[Fraction, ...] = (Fraction(1),)
    for col in range(0, q - p, 2):
        coeffs = _rec2(0, col, coeffs)
    for step in range(p):
        coeffs = _rec1(step, q - p + step, coeffs)
    return PolyZ(coeffs, p, q)


def _double_factorial_odd(j: int) -> int:
    """(2j-1)!! with (-1)!! = 1."""
    return math.factorial(2 * j) // (2**j * math.factorial(j))


def _series_coefficient_exact(p: int, q: int, n: int) -> Fraction:
    j = n + (q - p) // 2
    numer = math.factorial(2 * n) // math.factorial(2 * n - p) * _double_factorial_odd(j)
    return Fraction(numer, 2**n * math.factorial(n))


def n_min(p: int, q: int) -> int:
    return max((p + 1) // 2, (p - q) // 2, 0)


def poly_from_series(p: int, q: int) -> PolyZ:
    """P_{p,q} = F_{p,q} * (1-z)^{(p+q+1)/2}, multiplied out in exact arithmetic."""
    _check_indices(p, q)
    if not same_parity(p, q):
        return PolyZ((), p, q)
    # deg P <= max(p, q); read two extra orders to confirm they vanish
    order = max(p, q) + 2
    start = n_min(p, q)
    series = [Fraction(0)] * (order + 1)
    for n in range(start, order + 1):
        series[n] = _series_coefficient_exact(p, q, n)
    half = Fraction(p + q + 1, 2)
    binom = [Fraction(1)]
    for j in range(1, order + 1):
        binom.append(binom[-1] * (half - j + 1) / j * -1)
    coeffs = [Fraction(0)] * (order + 1)
    for i, a in enumerate(series):
        if a == 0:
            continue
        for j in range(0, order + 1 - i):
            coeffs[i + j] += a * binom[j]
    return PolyZ(tuple(coeffs), p, q)


def f_series(p: int, q: int, z: complex, ctl: SeriesControl | None = None) -> complex:
    """Partial sum of F_{p,q}(z); stops after three consecutive terms below ctl.tol."""
    _check_indices(p, q)
    ctl = ctl or SeriesControl.from_config()
    z = complex(z)
    if abs(z) >= 1.0:
        raise InvalidParameter(f"f_series needs |z| < 1, got |z| = {abs(z)}")
    if not same_parity(p, q):
        return 0j
    start = n_min(p, q)
    shift = (q - p) // 2
    if z == 0:
        return complex(float(_series_coefficient_exact(p, q, 0))) if start == 0 else 0j

    log_mod = math.log(abs(z))
    arg = cmath.phase(z)
    re_terms: list[float] = []
    im_terms: list[float] = []
    small = 0
    for count, n in enumerate(range(start, start + ctl.max_terms)):
        j = n + shift
        log_coeff = (
            gammaln(2 * n + 1) - gammaln(2 * n - p + 1)
            + gammaln(2 * j + 1) - j * math.log(2.0) - gammaln(j + 1)
            - n * math.log(2.0) - gammaln(n + 1)
        )
        mag = math.exp(log_coeff + n * log_mod)
        re_terms.append(mag * math.cos(n * arg))
        im_terms.append(mag * math.sin(n * arg))
        small = small + 1 if mag < ctl.tol else 0
        if small >= 3:
            return complex(math.fsum(re_terms), math.fsum(im_terms))
    raise NoConvergence(
        f"F_{{{p},{q}}} series at |z| = {abs(z):.6f} not below tol {ctl.tol:g} "
        f"after {ctl.max_terms} terms"
    )


def one_minus_z_power(z: complex, half_units: int) -> complex:
    """(1-z)^{half_units/2} on the principal branch."""
    return cmath.exp(0.5 * half_units * cmath.log(1.0 - complex(z)))


def f_closed(p: int, q: int, z: complex) -> complex:
    """P_{p,q}(z) / (1-z)^{(p+q+1)/2}."""
    if complex(z) == 1:
        raise InvalidParameter("f_closed is singular at z = 1")
    P = poly(p, q)
    if P.is_zero:
        return 0j
    return P.evaluate(z) / one_minus_z_power(z, p + q + 1)


def series_magnitude(p: int, q: int, z: complex) -> float:
    """Sum of |terms| of the F_{p,q} series, i.e. F_{p,q}(|z|); the scale of its rounding error."""
    return abs(f_closed(p, q, abs(complex(z))))


def symmetry_residual_exact(p: int, q: int) -> PolyZ:
    """P_{p,q} - z^{(p-q)/2} P_{q,p} in exact arithmetic (for q > p the roles swap)."""
    _check_indices(p, q)
    if not same_parity(p, q):
        raise InvalidParameter(f"symmetry needs same parity, got ({p}, {q})")
    if p >= q:
        return PolyZ(poly(p, q).coeffs, p, q) - PolyZ(_shift(poly(q, p).coeffs, (p - q) // 2))
    return PolyZ(_shift(poly(p, q).coeffs, (q - p) // 2), p, q) - poly(q, p)


def check_symmetry(p: int, q: int, z: complex | Fraction) -> float:
    """|P_{p,q}(z) - z^{(p-q)/2} P_{q,p}(z)|; exact zero for a Fraction argument."""
    if not same_parity(p, q):
        raise InvalidParameter(f"symmetry needs same parity, got ({p}, {q})")
    if isinstance(z, Fraction):
        residual = symmetry_residual_exact(p, q)
        return float(abs(residual.evaluate_exact(z)))
    z = complex(z)
    lo, hi = min(p, q), max(p, q)
    lhs = poly(hi, lo).evaluate(z)
    rhs = z ** ((hi - lo) // 2) * poly(lo, hi).evaluate(z)
    return abs(lhs - rhs)


def table_rows(max_index: int) -> list[tuple[int, int, str]]:
    """(p, q, 'c0;c1;...') for every same-parity pair up to max_index."""
    rows = []
    for p in range(max_index + 1):
        for q in range(max_index + 1):
            if same_parity(p, q):
                rows.append((p, q, poly(p, q).to_csv_field()))
    return rows
