"""Application entry point."""
import logging
import sys
from pathlib import Path

# Add src to path if running directly
src_path = Path(__file__).resolve().parent.parent
if str(src_path) not in sys.path:
    sys.path.insert(0, str(src_path))

from janus.cli import LOG_LEVELS, run


def setup_logging(level: str = "WARNING"):
    """Configure basic logging on stderr; stdout carries data."""
    logging.basicConfig(
        level=getattr(logging, level, logging.WARNING),
        format="%(asctime)s - %(name)s - %(levelname)s - %(message)s",
        handlers=[logging.StreamHandler(sys.stderr)],
    )


def _log_level(argv: list[str]) -> str:
    for i, arg in enumerate(argv):
        if arg == "--log-level" and i + 1 < len(argv):
            return argv[i + 1].upper()
        if arg.startswith("--log-level="):
            return arg.split("=", 1)[1].upper()
    return "WARNING"


def main():
    argv = sys.argv[1:]
    level = _log_level(argv)
    setup_logging(level if level in LOG_LEVELS else "WARNING")
    sys.exit(run(argv))


if __name__ == "__main__":
    main()
