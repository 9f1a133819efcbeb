"""Core application class."""
import argparse
import json
import logging
import sys
from contextlib import contextmanager
from dataclasses import replace
from pathlib import Path
from typing import TextIO

import numpy as np

from janus.config import Config, set_config
from janus.models.params import SPEC_KEYS, JanusSpec, normalize_weights
from janus.models.scan import Quantity, ScanAxis, ScanSpec
from janus.services import fock_oracle, gsp, metrology, moments
from janus.services.scanner import run_scan
from janus.services.selftest import run_selftest
from janus.services.wigner import WignerDecomposition, WignerExtents, center_of, wigner_grid

logger = logging.getLogger(__name__)

DEFAULT_SPEC = {"chi_re": 1.0}
QFI_PARAMETERS = {
    "dphase": metrology.QfiParameter.DISPLACEMENT_PHASE,
    "sangle": metrology.QfiParameter.SQUEEZING_ANGLE,
    "gsq": metrology.QfiParameter.SQUEEZING_GENERATOR,
}


class JanusApp:
    def __init__(
        self,
        config_path: Path | None = None,
        workers: int | None = None,
        out: TextIO | None = None,
    ):
        """Load config and make it the process-wide configuration."""
        path = Path(config_path) if config_path else Config.get_default_paths() / "config.json"
        self.config = Config.load(path)
        if workers:
            self.config = replace(self.config, scan=replace(self.config.scan, workers=workers))
        set_config(self.config)
        self.out = out or sys.stdout

    def dispatch(self, args: argparse.Namespace) -> int:
        handler = getattr(self, f"cmd_{args.command}")
        logger.info(f"Running command {args.command}")
        return handler(args)

    @contextmanager
    def _target(self, args: argparse.Namespace):
        path = getattr(args, "out", None)
        if path:
            with open(path, "w", encoding="utf-8", newline="") as f:
                yield f
        else:
            yield self.out

    def _emit_json(self, args: argparse.Namespace, data: dict) -> None:
        with self._target(args) as f:
            f.write(json.dumps(data, sort_keys=True) + "\n")

    def resolve_spec(self, args: argparse.Namespace) -> JanusSpec:
        """Spec from --spec, overridden by any explicit parameter flags."""
        data = dict(DEFAULT_SPEC)
        if args.spec:
            data = JanusSpec.from_json(Path(args.spec)).to_dict()
        for key in SPEC_KEYS:
            value = getattr(args, key, None)
            if value is not None:
                data[key] = value
        spec = JanusSpec.from_dict(data)
        if args.dump_spec:
            spec.save(Path(args.dump_spec))
            logger.info(f"Spec written to {args.dump_spec}")
        return spec

    # gsp

    def cmd_gsp(self, args: argparse.Namespace) -> int:
        if args.gsp_command == "table":
            with self._target(args) as f:
                f.write("p,q,coeffs\n")
                for p, q, coeffs in gsp.table_rows(args.max):
                    f.write(f"{p},{q},{coeffs}\n")
            return 0

        z = complex(args.z_re, args.z_im)
        value = gsp.f_closed(args.p, args.q, z)
        data = {
            "p": args.p,
            "q": args.q,
            "z_re": z.real,
            "z_im": z.imag,
            "value_re": value.real,
            "value_im": value.imag,
        }
        if args.series:
            series = gsp.f_series(args.p, args.q, z)
            data.update(series_re=series.real, series_im=series.imag, abs_diff=abs(series - value))
        self._emit_json(args, data)
        return 0

    # moments

    def cmd_moments(self, args: argparse.Namespace) -> int:
        spec = normalize_weights(self.resolve_spec(args))
        result = moments.janus_moment_result(args.k, spec)
        data = result.to_dict()
        if args.oracle:
            state = fock_oracle.build_janus_fock(
                spec, order=max(args.k, self.config.oracle.tail_order)
            )
            oracle = fock_oracle.cross_moment_fock(state, state, args.k).real
            data.update(oracle_value=oracle, abs_diff=abs(oracle - result.real))
        self._emit_json(args, data)
        return 0

    def cmd_gk(self, args: argparse.Namespace) -> int:
        spec = normalize_weights(self.resolve_spec(args))
        value = moments.gk(args.k, spec)
        data = {
            "k": args.k,
            "value": value,
            "branch_residual": moments.janus_moment_result(args.k, spec).branch_residual,
        }
        if args.oracle:
            state = fock_oracle.build_janus_fock(
                spec, order=max(args.k, self.config.oracle.tail_order)
            )
            n1 = fock_oracle.cross_moment_fock(state, state, 1).real
            oracle = fock_oracle.cross_moment_fock(state, state, args.k).real / n1**args.k
            data.update(oracle_value=oracle, abs_diff=abs(oracle - value))
        self._emit_json(args, data)
        return 0

    # wigner

    def cmd_wigner(self, args: argparse.Namespace) -> int:
        spec = normalize_weights(self.resolve_spec(args))
        extents = WignerExtents.square(center_of(spec.alpha), args.extent) if args.extent else None
        result = wigner_grid(spec, extents, args.step, decompose=args.decompose)
        target = Path(args.out or "wigner.csv")

        if isinstance(result, WignerDecomposition):
            grids = {"mixture": result.mixture, "interference": result.interference, "total": result.total}
            summary = {}
            for name, grid in grids.items():
                path = target.with_name(f"{target.stem}_{name}{target.suffix}")
                self._write_grid(path, grid)
                summary[name] = grid.summary()
            total = result.total
        else:
            self._write_grid(target, result)
            summary = result.summary()
            total = result

        if args.oracle:
            state = fock_oracle.build_janus_fock(spec)
            oracle = fock_oracle.wigner_fock(state, *total.min_location)
            summary.update(oracle_value=oracle, abs_diff=abs(oracle - total.min_value))
        self.out.write(json.dumps(summary, sort_keys=True) + "\n")
        return 0

    @staticmethod
    def _write_grid(path: Path, grid) -> None:
        with open(path, "w", encoding="utf-8", newline="") as f:
            f.write("q,p,W\n")
            for q, p, w in grid.csv_rows():
                f.write(f"{q!r},{p!r},{w!r}\n")
        logger.info(f"Wigner grid written to {path}")

    # qfi

    def cmd_qfi(self, args: argparse.Namespace) -> int:
        spec = normalize_weights(self.resolve_spec(args))
        parameter = QFI_PARAMETERS[args.parameter]
        if parameter is metrology.QfiParameter.SQUEEZING_GENERATOR:
            theta_g = spec.xi.theta if args.theta_g is None else args.theta_g
            result = metrology.qfi_squeezing_generator(spec, theta_g)
        elif args.numeric:
            result = metrology.qfi_fidelity_numeric(spec, parameter, args.dl)
        elif parameter is metrology.QfiParameter.DISPLACEMENT_PHASE:
            result = metrology.qfi_displacement_phase(spec)
        else:
            result = metrology.QfiResult(
                metrology.qfi_squeezing_angle_leading(spec.xi.r),
                metrology.QfiMethod.EXPANSION,
                parameter,
            )
        data = result.to_dict()
        if args.oracle:
            oracle = self._qfi_oracle(spec, parameter, args)
            data.update(oracle_value=oracle, abs_diff=abs(oracle - result.value))
        self._emit_json(args, data)
        return 0

    @staticmethod
    def _qfi_oracle(spec: JanusSpec, parameter, args: argparse.Namespace) -> float:
        state = fock_oracle.build_janus_fock(spec)
        if parameter is metrology.QfiParameter.DISPLACEMENT_PHASE:
            probs = state.probabilities()
            n = np.arange(probs.size)
            return float(4.0 * (np.sum(n**2 * probs) - np.sum(n * probs) ** 2))
        if parameter is metrology.QfiParameter.SQUEEZING_ANGLE:
            return metrology.qfi_fidelity_numeric(spec, parameter, args.dl).value
        theta_g = spec.xi.theta if args.theta_g is None else args.theta_g
        wider = fock_oracle.build_janus_fock(spec, int(state.cutoff * 1.5))
        return 4.0 * fock_oracle.var_gsq_fock(wider, theta_g)

    # scan

    def cmd_scan(self, args: argparse.Namespace) -> int:
        scan = ScanSpec(
            base=self.resolve_spec(args),
            quantity=Quantity.parse(args.quantity),
            axis1=ScanAxis.parse(args.axis1),
            axis2=ScanAxis.parse(args.axis2) if args.axis2 else None,
        )
        table = run_scan(scan, self.config.scan.workers)
        with self._target(args) as f:
            table.write_csv(f, meta=not args.no_meta)
        return 0

    # selftest

    def cmd_selftest(self, args: argparse.Namespace) -> int:
        report = run_selftest(args.seed)
        self._emit_json(args, report.to_dict())
        if not report.passed:
            logger.error("Selftest failed")
            return 2
        return 0

