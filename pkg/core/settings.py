"""Settings from config/config.yaml, .env and the environment, and the per-run configuration."""

import logging
import os
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional

import yaml
from dotenv import load_dotenv

from algebra.errors import UsageError
from algebra.finite_field import DEFAULT_MAX_ORDER
from core.enumeration import DEFAULT_CAP, DEFAULT_CHUNKS_PER_WORKER

logger = logging.getLogger(__name__)

DEFAULT_CONFIG_PATH = Path(__file__).resolve().parent.parent / "config" / "config.yaml"

# Default verify-all budget, in projected enumeration steps.
DEFAULT_BUDGET = 20_000_000

COMMANDS = ("count-poly", "count-strata", "decompose", "verify-psi", "count-hom", "motive", "verify-all")


@dataclass
class Settings:
    """Defaults shared by every command."""

    cap: int = DEFAULT_CAP
    workers: int = 1
    chunks_per_worker: int = DEFAULT_CHUNKS_PER_WORKER
    max_order: int = DEFAULT_MAX_ORDER
    budget: int = DEFAULT_BUDGET
    report_dir: str = "reports"
    write_jsonl: bool = True
    write_csv: bool = True
    log_level: str = "INFO"
    log_file: str = "logs/coprime_strata.log"
    log_max_size_mb: int = 10
    log_backup_count: int = 3


def _env_int(name: str, default: int) -> int:
    value = os.getenv(name)
    if not value:
        return default
    try:
        return int(value.replace("_", ""))
    except ValueError:
        logger.warning(f"Ignoring {name}={value!r}: not an integer")
        return default


def load_settings(config_path: Optional[Path] = None) -> Settings:
    """Load settings: YAML first, then environment overrides.

    Args:
        config_path: YAML file to read (default: config/config.yaml).

    Returns:
        The merged settings. A missing file leaves the built-in defaults.
    """
    load_dotenv()

    path = Path(config_path) if config_path else DEFAULT_CONFIG_PATH
    config: dict = {}
    if path.exists():
        with open(path) as f:
            config = yaml.safe_load(f) or {}
    else:
        logger.debug(f"No config file at {path}, using defaults")

    field_cfg = config.get("field", {})
    enum_cfg = config.get("enumeration", {})
    harness_cfg = config.get("harness", {})
    report_cfg = config.get("reports", {})
    log_cfg = config.get("logging", {})

    settings = Settings(
        cap=int(enum_cfg.get("cap", DEFAULT_CAP)),
        workers=int(enum_cfg.get("workers", 1)),
        chunks_per_worker=int(enum_cfg.get("chunks_per_worker", DEFAULT_CHUNKS_PER_WORKER)),
        max_order=int(field_cfg.get("max_order", DEFAULT_MAX_ORDER)),
        budget=int(harness_cfg.get("budget", DEFAULT_BUDGET)),
        report_dir=report_cfg.get("directory", "reports"),
        write_jsonl=bool(report_cfg.get("jsonl", True)),
        write_csv=bool(report_cfg.get("csv", True)),
        log_level=log_cfg.get("level", "INFO"),
        log_file=log_cfg.get("file", "logs/coprime_strata.log"),
        log_max_size_mb=int(log_cfg.get("max_size_mb", 10)),
        log_backup_count=int(log_cfg.get("backup_count", 3)),
    )

    settings.cap = _env_int("COPRIME_ENUMERATION_CAP", settings.cap)
    settings.workers = _env_int("COPRIME_WORKERS", settings.workers)
    settings.report_dir = os.getenv("COPRIME_REPORT_DIR") or settings.report_dir
    return settings


@dataclass
class RunConfig:
    """One command invocation: the command, its field and its parameters."""

    command: str
    p: Optional[int] = None
    e: int = 1
    degrees: list[int] = field(default_factory=list)
    k: Optional[int] = None
    a: Optional[int] = None
    b: Optional[int] = None
    n: Optional[int] = None
    cap: int = DEFAULT_CAP
    workers: int = 1
    output_dir: str = "reports"
    force: bool = False
    budget: int = DEFAULT_BUDGET

    def validate(self) -> None:
        """Check that the parameter set fits the command.

        Raises:
            UsageError: On a missing, superfluous or out-of-range parameter.
        """
        if self.command not in COMMANDS:
            raise UsageError(f"unknown command {self.command!r}")
        if self.cap < 0:
            raise UsageError(f"cap must be >= 0, got {self.cap}")
        if self.workers < 1:
            raise UsageError(f"workers must be >= 1, got {self.workers}")

        needs_field = self.command not in ("motive", "verify-all")
        if needs_field and self.p is None:
            raise UsageError(f"{self.command} needs a field (--q or --p/--e)")

        needs_degrees = self.command in ("count-poly", "count-strata", "decompose", "verify-psi")
        needs_weights = self.command in ("count-hom", "motive")
        if needs_degrees and not self.degrees:
            raise UsageError(f"{self.command} needs --degrees")
        if not needs_degrees and self.degrees:
            raise UsageError(f"{self.command} takes no --degrees")
        if any(d < 0 for d in self.degrees):
            raise UsageError(f"degrees must be >= 0, got {self.degrees}")

        weights = (self.a, self.b, self.n)
        if needs_weights and None in weights:
            raise UsageError(f"{self.command} needs --a, --b and --n")
        if not needs_weights and any(w is not None for w in weights):
            raise UsageError(f"{self.command} takes no --a/--b/--n")

        if self.command == "verify-psi" and self.k is None:
            raise UsageError("verify-psi needs --k")
        if self.k is not None and self.command not in ("count-strata", "verify-psi"):
            raise UsageError(f"{self.command} takes no --k")
        if self.force and self.command != "count-hom":
            raise UsageError("--force only applies to count-hom")
        if self.command == "verify-all" and self.budget < 0:
            raise UsageError(f"budget must be >= 0, got {self.budget}")
