"""Parameter scans over one or two axes."""
import csv
import json
import logging
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import TextIO

from janus.config import get_config
from janus.errors import JanusError
from janus.models.params import JanusSpec, normalize_weights
from janus.models.scan import Quantity, ScanSpec
from janus.services.metrology import QfiParameter, qfi_displacement_phase, qfi_fidelity_numeric
from janus.services.moments import gk, janus_moment, optimized_g2_formula
from janus.services.wigner import wigner_grid

logger = logging.getLogger(__name__)


def evaluate_quantity(quantity: Quantity, spec: JanusSpec) -> float:
    if quantity.kind == "gk":
        return gk(quantity.k, spec)
    if quantity.kind == "moment":
        return janus_moment(quantity.k, normalize_weights(spec))
    if quantity.kind == "wigner_min":
        return wigner_grid(spec).min_value
    if quantity.kind == "qfi_dphase":
        return qfi_displacement_phase(spec).value
    if quantity.kind == "qfi_sangle":
        return qfi_fidelity_numeric(spec, QfiParameter.SQUEEZING_ANGLE).value
    if quantity.kind == "optimized_g2":
        return optimized_g2_formula(spec.xi.r)
    raise ValueError(f"unhandled quantity {quantity.kind}")


@dataclass(frozen=True)
class ScanTable:
    header: tuple[str, ...]
    rows: list[tuple[float, ...]]
    failures: int
    scan: ScanSpec

    def write_csv(self, out: TextIO, meta: bool = True) -> None:
        if meta:
            out.write(f"# quantity={self.scan.quantity.describe()}\n")
            for i, axis in enumerate(self.scan.axes, start=1):
                out.write(f"# axis{i}={axis.describe()}\n")
            out.write(f"# base={json.dumps(self.scan.base.to_dict(), sort_keys=True)}\n")
        writer = csv.writer(out, lineterminator="\n")
        writer.writerow(self.header)
        for row in self.rows:
            writer.writerow([repr(v) for v in row])
        if self.failures:
            out.write(f"# failed cells: {self.failures}\n")


def run_scan(scan: ScanSpec, workers: int | None = None) -> ScanTable:
    """Evaluate every cell; a cell whose computation fails becomes NaN."""
    workers = workers or get_config().scan.workers
    cells = scan.cells()
    logger.info(f"Scanning {len(cells)} cells of {scan.quantity.describe()} with {workers} worker(s)")

    def evaluate(cell: tuple[float, ...]) -> tuple[float, bool]:
        try:
            return evaluate_quantity(scan.quantity, scan.spec_at(cell)), True
        except JanusError as e:
            logger.warning(f"Scan cell {cell} failed: {type(e).__name__}: {e}")
            return math.nan, False

    if workers <= 1:
        results = [evaluate(cell) for cell in cells]
    else:
        with ThreadPoolExecutor(max_workers=workers) as executor:
            results = list(executor.map(evaluate, cells))

    failures = sum(1 for _, ok in results if not ok)
    if failures:
        logger.warning(f"{failures} of {len(cells)} scan cells failed")
    header = tuple(axis.name for axis in scan.axes) + (scan.quantity.describe(),)
    rows = [cell + (value,) for cell, (value, _) in zip(cells, results)]
    return ScanTable(header, rows, failures, scan)
