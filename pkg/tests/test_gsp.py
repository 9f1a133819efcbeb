"""Tests for the generalized squeezing functions and polynomials."""
import cmath
import math
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from janus.errors import InvalidParameter, NoConvergence
from janus.services import gsp

# P_{p,q}(z) for same-parity p, q <= 5, ascending coefficients
PUBLISHED_TABLE = {
    (0, 0): (1,),
    (0, 2): (1,),
    (0, 4): (3,),
    (1, 1): (0, 1),
    (1, 3): (0, 3),
    (1, 5): (0, 15),
    (2, 0): (0, 1),
    (2, 2): (0, 1, 2),
    (2, 4): (0, 3, 12),
    (3, 1): (0, 0, 3),
    (3, 3): (0, 0, 9, 6),
    (3, 5): (0, 0, 45, 60),
    (4, 0): (0, 0, 3),
    (4, 2): (0, 0, 3, 12),
    (4, 4): (0, 0, 9, 72, 24),
    (5, 1): (0, 0, 0, 15),
    (5, 3): (0, 0, 0, 45, 60),
    (5, 5): (0, 0, 0, 225, 600, 120),
}


@pytest.mark.parametrize("pq", sorted(PUBLISHED_TABLE))
def test_poly_matches_published_table(pq):
    expected = tuple(Fraction(c) for c in PUBLISHED_TABLE[pq])
    assert gsp.poly(*pq).coeffs == expected


def test_poly_opposite_parity_is_zero():
    assert gsp.poly(2, 3).is_zero
    assert gsp.poly(0, 1).degree == -1
    assert gsp.f_closed(1, 4, 0.3) == 0


def test_poly_rejects_negative_index():
    with pytest.raises(InvalidParameter):
        gsp.poly(-1, 1)


def test_symmetry_exact_up_to_ten():
    for p in range(11):
        for q in range(p % 2, 11, 2):
            assert gsp.symmetry_residual_exact(p, q).is_zero, (p, q)


def test_check_symmetry_numeric_and_exact():
    assert gsp.check_symmetry(6, 2, 0.3 + 0.4j) < 1e-12
    assert gsp.check_symmetry(3, 7, Fraction(2, 7)) == 0.0
    with pytest.raises(InvalidParameter):
        gsp.check_symmetry(2, 3, 0.1)


def test_recurrence_paths_agree():
    for p in range(11):
        for q in range(p, 11, 2):
            assert gsp.poly(p, q).coeffs == gsp.poly_via_rec12(p, q).coeffs, (p, q)


def test_poly_via_rec12_needs_q_at_least_p():
    with pytest.raises(InvalidParameter):
        gsp.poly_via_rec12(4, 2)


@pytest.mark.parametrize("pq", sorted(PUBLISHED_TABLE))
def test_poly_from_series_matches_table(pq):
    assert gsp.poly_from_series(*pq).coeffs == gsp.poly(*pq).coeffs


def test_table_grows_on_demand():
    table = gsp.PolynomialTable(3)
    assert table.cap == 3
    assert table.get(7, 5) == gsp.poly(7, 5).coeffs
    assert table.cap == 7


def test_polyz_helpers():
    P = gsp.poly(4, 4)
    assert P.degree == 4
    assert P.lowest_degree == 2
    assert P.derivative().coeffs == (0, 18, 216, 96)
    assert P.evaluate(0.5) == pytest.approx(24 / 16 + 72 / 8 + 9 / 4)
    assert P.evaluate_exact(Fraction(1, 2)) == Fraction(51, 4)
    assert P.to_csv_field() == "0;0;9;72;24"


def test_table_rows():
    rows = gsp.table_rows(5)
    assert len(rows) == 18
    assert (2, 2, "0;1;2") in rows
    assert (0, 4, "3") in rows


def test_f_series_at_origin():
    assert gsp.f_series(0, 0, 0) == 1
    assert gsp.f_series(0, 2, 0) == 1
    assert gsp.f_series(2, 0, 0) == 0
    assert gsp.f_series(1, 1, 0) == 0


def test_f_series_known_closed_form():
    # F_{0,0}(z) = (1 - z)^{-1/2}
    z = 0.6 * cmath.exp(0.7j)
    assert gsp.f_series(0, 0, z) == pytest.approx(1 / cmath.sqrt(1 - z), rel=1e-12)


def test_f_series_outside_disc():
    with pytest.raises(InvalidParameter):
        gsp.f_series(0, 0, 1.0)
    with pytest.raises(InvalidParameter):
        gsp.f_closed(0, 0, 1.0)


def test_f_series_no_convergence():
    ctl = gsp.SeriesControl(tol=1e-16, max_terms=5)
    with pytest.raises(NoConvergence):
        gsp.f_series(2, 2, 0.5, ctl)


def test_series_control_validation():
    with pytest.raises(InvalidParameter):
        gsp.SeriesControl(tol=0.0)
    with pytest.raises(InvalidParameter):
        gsp.SeriesControl(max_terms=0)


@st.composite
def same_parity_points(draw):
    p = draw(st.integers(min_value=0, max_value=8))
    q = 2 * draw(st.integers(min_value=0, max_value=4)) + p % 2
    radius = draw(st.floats(min_value=0.0, max_value=0.9))
    angle = draw(st.floats(min_value=0.0, max_value=2 * math.pi))
    return p, q, cmath.rect(radius, angle)


@settings(max_examples=200, deadline=None)
@given(same_parity_points())
def test_series_matches_closed_form(point):
    p, q, z = point
    closed = gsp.f_closed(p, q, z)
    series = gsp.f_series(p, q, z)
    # alternating terms for z off the positive axis: the error scales with F(|z|)
    assert abs(series - closed) <= 1e-10 * max(1.0, gsp.series_magnitude(p, q, z))
