"""
Runtime settings and campaign configuration.

Settings are resolved from, in increasing priority: built-in defaults, the
``settings:`` section of a YAML file (``--config PATH`` or ``watkins.yml`` in
the working directory), the ``WATKINS_*`` environment variables, and
command-line flags. The same file may carry a ``campaign:`` section, read by
:meth:`CampaignConfig.from_yaml`.

On Linux the default results directory respects ``XDG_DATA_HOME``
(falling back to ``~/.local/share/watkins/results``).
On macOS it uses ``~/Library/Application Support/watkins/results``.
"""

from __future__ import annotations

import logging
import os
import sys
from dataclasses import dataclass, field, fields
from enum import Enum
from pathlib import Path
from typing import Any, Dict, Mapping, Optional, Tuple

import yaml

from watkins.errors import ConfigError
from watkins.hecke import DEFAULT_AP_CEILING

logger = logging.getLogger(__name__)

CONFIG_FILE_NAME = "watkins.yml"

ENV_DATA = "WATKINS_DATA"
ENV_THREADS = "WATKINS_THREADS"
ENV_AP_CEILING = "WATKINS_AP_CEILING"
ENV_RESULTS_DIR = "WATKINS_RESULTS_DIR"


def _default_results_dir() -> Path:
    """Return the results directory, respecting XDG_DATA_HOME on Linux."""
    xdg = os.environ.get("XDG_DATA_HOME")
    if xdg:
        return Path(xdg) / "watkins" / "results"
    if sys.platform == "darwin":
        return Path.home() / "Library" / "Application Support" / "watkins" / "results"
    return Path.home() / ".local" / "share" / "watkins" / "results"


def read_yaml(path: Path) -> Dict[str, Any]:
    """Parse a YAML mapping; an empty file gives an empty mapping."""
    try:
        with Path(path).open("r", encoding="utf-8") as fh:
            data = yaml.safe_load(fh) or {}
    except OSError as exc:
        raise ConfigError(f"Cannot read {path}: {exc}") from exc
    except yaml.YAMLError as exc:
        raise ConfigError(f"Failed to parse {path}: {exc}") from exc
    if not isinstance(data, dict):
        raise ConfigError(f"{path} must contain a mapping at the top level")
    return data


def _positive_int(name: str, value: Any) -> int:
    try:
        number = int(value)
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"{name} must be an integer, got {value!r}") from exc
    if isinstance(value, bool) or number < 1:
        raise ConfigError(f"{name} must be a positive integer, got {value!r}")
    return number


# ----------------------------------------------------------------------
# Settings
# ----------------------------------------------------------------------


@dataclass(frozen=True)
class Settings:
    """Resolved runtime settings.

    Attributes:
        data_path: Curve bundle override (``None`` uses the packaged CSV).
        threads: Worker threads for sweeps and coefficient tables.
        ap_ceiling: Largest prime allowed for point counting.
        results_dir: Where ``campaign`` writes reports without ``--out``.
        color: Styled console output.
    """

    data_path: Optional[Path] = None
    threads: int = 1
    ap_ceiling: int = DEFAULT_AP_CEILING
    results_dir: Path = field(default_factory=_default_results_dir)
    color: bool = True

    def __post_init__(self) -> None:
        object.__setattr__(self, "threads", _positive_int("threads", self.threads))
        object.__setattr__(self, "ap_ceiling", _positive_int("ap_ceiling", self.ap_ceiling))
        if self.ap_ceiling < 2:
            raise ConfigError("ap_ceiling must be at least 2")


def load_settings(
    config_path: Optional[Path] = None,
    *,
    env: Optional[Mapping[str, str]] = None,
    cwd: Optional[Path] = None,
    **overrides: Any,
) -> Settings:
    """Resolve :class:`Settings` from the YAML file, the environment and *overrides*.

    ``WATKINS_THREADS`` is an upper bound: explicit thread counts from the
    YAML file or the command line are capped by it.

    Args:
        config_path: Explicit YAML file. Without it ``watkins.yml`` in *cwd*
            is used when present.
        env: Environment mapping (defaults to ``os.environ``).
        cwd: Directory searched for ``watkins.yml``.
        **overrides: Command-line values; ``None`` means "not given".
    """
    env = os.environ if env is None else env
    values: Dict[str, Any] = {}

    path = config_path
    if path is None:
        candidate = (cwd or Path.cwd()) / CONFIG_FILE_NAME
        path = candidate if candidate.exists() else None
    if path is not None:
        data = read_yaml(path).get("settings") or {}
        if not isinstance(data, dict):
            raise ConfigError(f"{path}: settings section must be a mapping")
        known = {f.name for f in fields(Settings)}
        for key, value in data.items():
            name = str(key).replace("-", "_")
            if name == "data":
                name = "data_path"
            if name not in known:
                raise ConfigError(f"{path}: unknown setting {key!r}")
            values[name] = value
        logger.info("Loaded settings from %s", path)

    thread_cap: Optional[int] = None
    if env.get(ENV_DATA):
        values["data_path"] = env[ENV_DATA]
    if env.get(ENV_THREADS):
        thread_cap = _positive_int(ENV_THREADS, env[ENV_THREADS])
        values.setdefault("threads", thread_cap)
    if env.get(ENV_AP_CEILING):
        values["ap_ceiling"] = env[ENV_AP_CEILING]
    if env.get(ENV_RESULTS_DIR):
        values["results_dir"] = env[ENV_RESULTS_DIR]

    for key, value in overrides.items():
        if value is not None:
            values[key] = value

    if values.get("data_path") is not None:
        values["data_path"] = Path(values["data_path"])
    if values.get("results_dir") is not None:
        values["results_dir"] = Path(values["results_dir"])
    settings = Settings(**values)
    if thread_cap is not None and settings.threads > thread_cap:
        logger.debug("Capping threads %d at %s=%d", settings.threads, ENV_THREADS, thread_cap)
        settings = Settings(**{**values, "threads": thread_cap})
    return settings


# ----------------------------------------------------------------------
# Campaigns
# ----------------------------------------------------------------------


class CampaignMode(str, Enum):
    TABLES = "tables"
    WATKINS_SWEEP = "watkins-sweep"
    CONGRUENCE_SWEEP = "congruence-sweep"
    LEMMAS = "lemmas"
    SETZER_SCAN = "setzer-scan"


class OutputFormat(str, Enum):
    TEXT = "text"
    JSON = "json"
    CSV = "csv"


@dataclass(frozen=True)
class CampaignConfig:
    """A batch verification run.

    Attributes:
        mode: Which sweep to run.
        D_max: Twists by squarefree D != 1 with |D| <= D_max (watkins-sweep, lemmas).
        d_min, d_max: Range of odd squarefree d (congruence-sweep, lemmas).
        max_omega: Largest omega(d) in the congruence sweep.
        B: Coefficient bound.
        q_max: Prime ceiling for per-prime checks.
        setzer_limit: Setzer primes below this are scanned (setzer-scan, lemmas).
        labels: Restrict curve sweeps to these labels (empty: all bundled curves).
        verdict_mode: ``auto``, ``cased`` or ``refined``.
        output: Output format.
        out: Result file (``None`` prints to stdout).
        data_path: Curve bundle override.
        ap_ceiling: Point-counting ceiling; ``B`` and ``q_max`` may not exceed it.
    """

    mode: CampaignMode
    D_max: int = 50
    d_min: int = 3
    d_max: int = 105
    max_omega: int = 3
    B: int = 2000
    q_max: int = 500
    setzer_limit: int = 10**4
    labels: Tuple[str, ...] = ()
    verdict_mode: str = "auto"
    output: OutputFormat = OutputFormat.TEXT
    out: Optional[Path] = None
    data_path: Optional[Path] = None
    ap_ceiling: int = DEFAULT_AP_CEILING

    def __post_init__(self) -> None:
        try:
            object.__setattr__(self, "mode", CampaignMode(self.mode))
            object.__setattr__(self, "output", OutputFormat(self.output))
        except ValueError as exc:
            raise ConfigError(str(exc)) from exc
        for name in ("D_max", "d_min", "d_max", "max_omega", "B", "q_max",
                     "setzer_limit", "ap_ceiling"):
            object.__setattr__(self, name, _positive_int(name, getattr(self, name)))
        if self.d_min > self.d_max:
            raise ConfigError(f"d_min = {self.d_min} exceeds d_max = {self.d_max}")
        if self.B > self.ap_ceiling:
            raise ConfigError(f"B = {self.B} exceeds the enumeration ceiling {self.ap_ceiling}")
        if self.q_max > self.ap_ceiling:
            raise ConfigError(
                f"q_max = {self.q_max} exceeds the enumeration ceiling {self.ap_ceiling}"
            )
        if self.verdict_mode not in ("auto", "cased", "refined"):
            raise ConfigError(f"Unknown verdict mode {self.verdict_mode!r}")
        if isinstance(self.labels, str):
            object.__setattr__(self, "labels", (self.labels,))
        else:
            object.__setattr__(self, "labels", tuple(self.labels))
        for name in ("out", "data_path"):
            value = getattr(self, name)
            if value is not None:
                object.__setattr__(self, name, Path(value))

    @classmethod
    def from_mapping(cls, data: Mapping[str, Any], origin: str = "<config>") -> "CampaignConfig":
        known = {f.name for f in fields(cls)}
        values: Dict[str, Any] = {}
        for key, value in data.items():
            name = str(key).replace("-", "_")
            if name == "data":
                name = "data_path"
            if name not in known:
                raise ConfigError(f"{origin}: unknown campaign key {key!r}")
            values[name] = value
        if "mode" not in values:
            raise ConfigError(f"{origin}: campaign mode is required")
        try:
            return cls(**values)
        except TypeError as exc:
            raise ConfigError(f"{origin}: {exc}") from exc

    @classmethod
    def from_yaml(cls, path: Path) -> "CampaignConfig":
        """Read a campaign from *path*; a top-level ``campaign:`` section is used when present."""
        data = read_yaml(path)
        section = data.get("campaign", data)
        if not isinstance(section, dict):
            raise ConfigError(f"{path}: campaign section must be a mapping")
        return cls.from_mapping(section, origin=str(path))
