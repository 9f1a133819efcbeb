"""Tests for scan definitions and the scan runner."""
import io
import math

import pytest

from janus.errors import InvalidParameter
from janus.models.params import JanusSpec, SqueezeParam
from janus.models.scan import Quantity, ScanAxis, ScanSpec, apply_axis
from janus.services import moments
from janus.services.scanner import evaluate_quantity, run_scan


def test_axis_parse():
    axis = ScanAxis.parse("alpha_mag:0:4:81")
    assert (axis.name, axis.start, axis.stop, axis.count) == ("alpha_mag", 0.0, 4.0, 81)
    assert axis.values()[1] == pytest.approx(0.05)
    assert axis.describe() == "alpha_mag:0.0:4.0:81"


@pytest.mark.parametrize("text", ["r:0:1:1", "r:0:1", "spin:0:1:5", "r:a:1:5", "r:0:inf:3"])
def test_axis_parse_rejects(text):
    with pytest.raises(InvalidParameter):
        ScanAxis.parse(text)


def test_quantity_parse():
    assert Quantity.parse("gk:2") == Quantity("gk", 2)
    assert Quantity.parse("wigner_min").k is None
    assert Quantity.parse("moment:3").describe() == "moment:3"
    for text in ("gk", "gk:0", "entropy", "gk:two"):
        with pytest.raises(InvalidParameter):
            Quantity.parse(text)


def test_scan_axes_must_differ():
    base = JanusSpec.single(SqueezeParam(1.0))
    with pytest.raises(InvalidParameter):
        ScanSpec(base, Quantity("gk", 2), ScanAxis("r", 0, 1, 3), ScanAxis("r", 0, 2, 3))


def test_cells_axis1_outer():
    scan = ScanSpec(
        JanusSpec.single(SqueezeParam(1.0)),
        Quantity("gk", 2),
        ScanAxis("alpha_mag", 0, 1, 2),
        ScanAxis("alpha_phase", 0, 3, 3),
    )
    assert scan.cells() == [
        (0.0, 0.0), (0.0, 1.5), (0.0, 3.0),
        (1.0, 0.0), (1.0, 1.5), (1.0, 3.0),
    ]


def test_apply_axis():
    spec = JanusSpec(2j, -1.0, SqueezeParam(0.3, 0.2), SqueezeParam(0.5, 1.0))
    assert apply_axis(spec, "s", 0.9).zeta == SqueezeParam(0.9, 1.0)
    assert apply_axis(spec, "theta", 1.5).xi == SqueezeParam(0.3, 1.5)
    moved = apply_axis(spec, "alpha_phase", math.pi / 2)
    assert moved.alpha.alpha == 0  # magnitude stays zero
    ratio = apply_axis(spec, "weight_ratio", 0.5)
    assert ratio.chi == pytest.approx(0.5j)
    assert ratio.eta == pytest.approx(-1.0)


def test_evaluate_quantity():
    spec = JanusSpec.single(SqueezeParam(0.5), alpha=1.0)
    assert evaluate_quantity(Quantity("gk", 2), spec) == moments.gk(2, spec)
    assert evaluate_quantity(Quantity("optimized_g2"), spec) == moments.optimized_g2_formula(0.5)


def test_run_scan_marks_failed_cells():
    scan = ScanSpec(
        JanusSpec.single(SqueezeParam(0.0)), Quantity("gk", 2), ScanAxis("alpha_mag", 0, 2, 5)
    )
    table = run_scan(scan)
    assert table.header == ("alpha_mag", "gk:2")
    assert table.failures == 1
    assert math.isnan(table.rows[0][1])
    assert all(row[1] == pytest.approx(1.0) for row in table.rows[1:])


def test_write_csv():
    scan = ScanSpec(
        JanusSpec.single(SqueezeParam(0.0)), Quantity("gk", 2), ScanAxis("alpha_mag", 0, 2, 3)
    )
    out = io.StringIO()
    run_scan(scan).write_csv(out)
    lines = out.getvalue().splitlines()
    assert lines[0] == "# quantity=gk:2"
    assert lines[1] == "# axis1=alpha_mag:0.0:2.0:3"
    assert lines[2].startswith("# base={")
    assert lines[3] == "alpha_mag,gk:2"
    assert lines[4] == "0.0,nan"
    assert lines[-1] == "# failed cells: 1"

    bare = io.StringIO()
    run_scan(scan).write_csv(bare, meta=False)
    assert bare.getvalue().splitlines()[0] == "alpha_mag,gk:2"


def test_scan_is_deterministic_across_workers():
    scan = ScanSpec(
        moments.antisymmetric_spec(0.5),
        Quantity("gk", 2),
        ScanAxis("alpha_mag", 0, 2, 4),
        ScanAxis("alpha_phase", 0, math.pi, 3),
    )
    serial, threaded = io.StringIO(), io.StringIO()
    run_scan(scan, workers=1).write_csv(serial)
    run_scan(scan, workers=3).write_csv(threaded)
    assert serial.getvalue() == threaded.getvalue()


def test_optimized_g2_scan_approaches_half():
    scan = ScanSpec(
        JanusSpec.single(SqueezeParam(1.0)),
        Quantity("optimized_g2"),
        ScanAxis("r", 0.01, 1.0, 10),
    )
    values = [row[1] for row in run_scan(scan).rows]
    assert values[0] == pytest.approx(0.5, abs=1e-3)
    assert values == sorted(values)
