"""Command-line surface."""
import argparse
import json
import logging
import sys
from typing import Sequence, TextIO

from janus.app import QFI_PARAMETERS, JanusApp
from janus.errors import InvalidParameter, JanusError
from janus.services.selftest import DEFAULT_SEED

logger = logging.getLogger(__name__)

LOG_LEVELS = ("DEBUG", "INFO", "WARNING", "ERROR")


class UsageError(Exception):
    """Bad command line."""


class _Parser(argparse.ArgumentParser):
    def error(self, message: str):
        raise UsageError(f"{self.prog}: {message}")


def _positive_int(text: str) -> int:
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError(f"must be >= 1, got {value}")
    return value


def _positive_float(text: str) -> float:
    value = float(text)
    if not value > 0:
        raise argparse.ArgumentTypeError(f"must be > 0, got {value}")
    return value


def _spec_options() -> argparse.ArgumentParser:
    parent = _Parser(add_help=False)
    group = parent.add_argument_group("state")
    group.add_argument("--spec", help="JanusSpec JSON file")
    for flag in ("--chi-re", "--chi-im", "--eta-re", "--eta-im"):
        group.add_argument(flag, type=float)
    group.add_argument("--r", type=float, help="first squeezing magnitude")
    group.add_argument("--theta", type=float, help="first squeezing angle")
    group.add_argument("--s", type=float, help="second squeezing magnitude")
    group.add_argument("--phi", type=float, help="second squeezing angle")
    group.add_argument("--alpha-re", type=float)
    group.add_argument("--alpha-im", type=float)
    group.add_argument("--dump-spec", metavar="PATH", help="write the resolved spec as JSON")
    return parent


def _output_options() -> argparse.ArgumentParser:
    parent = _Parser(add_help=False)
    parent.add_argument("--out", help="output file (default: stdout)")
    return parent


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="janus", description="Photon statistics of displaced Janus states")
    parser.add_argument("--config", help="config JSON (default: platform config directory)")
    parser.add_argument("--log-level", default="WARNING", choices=LOG_LEVELS)
    parser.add_argument("--workers", type=_positive_int, help="thread pool size")

    spec = _spec_options()
    output = _output_options()
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    gsp = sub.add_parser("gsp", help="generalized squeezing polynomials")
    gsp_sub = gsp.add_subparsers(dest="gsp_command", required=True, parser_class=_Parser)
    table = gsp_sub.add_parser("table", parents=[output], help="polynomial table as CSV")
    table.add_argument("--max", type=int, default=5)
    evaluate = gsp_sub.add_parser("eval", parents=[output], help="evaluate F_{p,q}(z)")
    evaluate.add_argument("--p", type=int, required=True)
    evaluate.add_argument("--q", type=int, required=True)
    evaluate.add_argument("--z-re", type=float, required=True)
    evaluate.add_argument("--z-im", type=float, default=0.0)
    evaluate.add_argument("--series", action="store_true", help="also sum the power series")

    for name, text in (("moments", "normally ordered moment N_k"), ("gk", "coherence g^(k)")):
        cmd = sub.add_parser(name, parents=[spec, output], help=text)
        cmd.add_argument("--k", type=int, required=True)
        cmd.add_argument("--oracle", action="store_true", help="cross-check in Fock space")

    wigner = sub.add_parser("wigner", parents=[spec], help="Wigner function grid")
    wigner.add_argument("--extent", type=_positive_float, help="half-width around the center")
    wigner.add_argument("--step", type=_positive_float, help="grid spacing")
    wigner.add_argument("--decompose", action="store_true", help="mixture and interference too")
    wigner.add_argument("--out", help="CSV path (default: wigner.csv)")
    wigner.add_argument("--oracle", action="store_true")

    qfi = sub.add_parser("qfi", parents=[spec, output], help="quantum Fisher information")
    qfi.add_argument("--parameter", choices=sorted(QFI_PARAMETERS), default="dphase")
    qfi.add_argument("--numeric", action="store_true", help="fidelity finite difference")
    qfi.add_argument("--dl", type=_positive_float)
    qfi.add_argument("--theta-g", type=float, help="generator angle for gsq")
    qfi.add_argument("--oracle", action="store_true")

    scan = sub.add_parser("scan", parents=[spec, output], help="parameter scan as CSV")
    scan.add_argument("--quantity", required=True, help="e.g. gk:2, wigner_min, qfi_dphase")
    scan.add_argument("--axis1", required=True, help="name:start:stop:count")
    scan.add_argument("--axis2", help="name:start:stop:count")
    scan.add_argument("--no-meta", action="store_true", help="omit the comment header")

    selftest = sub.add_parser("selftest", parents=[output], help="bundled cross-checks")
    selftest.add_argument("--seed", type=int, default=DEFAULT_SEED)
    return parser


def run(argv: Sequence[str] | None = None, out: TextIO | None = None) -> int:
    """Parse argv, run the command and return the exit code."""
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except UsageError as e:
        print(f"usage error: {e}", file=sys.stderr)
        return 1
    except SystemExit as e:
        # --help and --version
        return int(e.code or 0)

    try:
        app = JanusApp(config_path=args.config, workers=args.workers, out=out)
        return app.dispatch(args)
    except InvalidParameter as e:
        print(f"error: {type(e).__name__}: {e}", file=sys.stderr)
        return 1
    except JanusError as e:
        print(f"error: {type(e).__name__}: {e}", file=sys.stderr)
        return 2
    except (OSError, json.JSONDecodeError) as e:
        logger.error(f"I/O failure: {e}")
        print(f"error: {e}", file=sys.stderr)
        return 1
