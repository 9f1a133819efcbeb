"""Configuration management for Janus."""
import json
import logging
import os
import sys
from dataclasses import asdict, dataclass, field
from pathlib import Path

logger = logging.getLogger(__name__)

CUTOFF_ENV = "JANUS_CUTOFF"


@dataclass
class GspConfig:
    table_cap: int = 16


@dataclass
class SeriesConfig:
    tol: float = 1e-16
    max_terms: int = 100_000


@dataclass
class MomentsConfig:
    order_cap: int = 12
    imag_tol: float = 1e-9


@dataclass
class OracleConfig:
    min_cutoff: int = 60
    tail_band: int = 20
    tail_tol: float = 1e-12
    tail_order: int = 4
    moment_tol: float = 1e-16
    growth: float = 1.5
    max_cutoff: int = 1000


@dataclass
class GridConfig:
    sigmas: float = 6.0
    points: int = 301
    coarse_tol: float = 1e-3


@dataclass
class MetrologyConfig:
    dl: float = 1e-3


@dataclass
class ScanConfig:
    workers: int = 1


@dataclass
class Config:
    version: str = "1.0"
    gsp: GspConfig = field(default_factory=GspConfig)
    series: SeriesConfig = field(default_factory=SeriesConfig)
    moments: MomentsConfig = field(default_factory=MomentsConfig)
    oracle: OracleConfig = field(default_factory=OracleConfig)
    grid: GridConfig = field(default_factory=GridConfig)
    metrology: MetrologyConfig = field(default_factory=MetrologyConfig)
    scan: ScanConfig = field(default_factory=ScanConfig)

    @classmethod
    def load(cls, path: Path) -> "Config":
        """Load config from JSON file, applying defaults."""
        if not path.exists():
            logger.info(f"Config file not found at {path}, using defaults")
            return cls()

        try:
            with open(path, "r", encoding="utf-8") as f:
                data = json.load(f)

            def load_nested(config_cls, data_dict):
                return config_cls(
                    **{k: v for k, v in data_dict.items() if k in config_cls.__annotations__}
                )

            return cls(
                version=data.get("version", "1.0"),
                gsp=load_nested(GspConfig, data.get("gsp", {})),
                series=load_nested(SeriesConfig, data.get("series", {})),
                moments=load_nested(MomentsConfig, data.get("moments", {})),
                oracle=load_nested(OracleConfig, data.get("oracle", {})),
                grid=load_nested(GridConfig, data.get("grid", {})),
                metrology=load_nested(MetrologyConfig, data.get("metrology", {})),
                scan=load_nested(ScanConfig, data.get("scan", {})),
            )
        except Exception as e:
            logger.error(f"Failed to load config from {path}: {e}")
            return cls()

    def save(self, path: Path) -> None:
        """Save current config to JSON file."""
        try:
            path.parent.mkdir(parents=True, exist_ok=True)
            with open(path, "w", encoding="utf-8") as f:
                json.dump(asdict(self), f, indent=4)
        except Exception as e:
            logger.error(f"Failed to save config to {path}: {e}")

    @staticmethod
    def get_default_paths() -> Path:
        """Return platform-appropriate config directory."""
        if sys.platform == "win32":
            return Path(os.environ["APPDATA"]) / "Janus"
        elif sys.platform == "darwin":
            return Path.home() / "Library" / "Application Support" / "Janus"
        else:
            return Path.home() / ".config" / "janus"

    @staticmethod
    def cutoff_override() -> int | None:
        """Starting cutoff forced through the environment, if any."""
        raw = os.environ.get(CUTOFF_ENV)
        if not raw:
            return None
        try:
            value = int(raw)
        except ValueError:
            logger.warning(f"Ignoring non-integer {CUTOFF_ENV}={raw!r}")
            return None
        return value if value >= 2 else None


# Process-wide settings used by the services when no explicit config is passed.
_active = Config()


def get_config() -> Config:
    return _active


def set_config(config: Config) -> None:
    global _active
    _active = config
