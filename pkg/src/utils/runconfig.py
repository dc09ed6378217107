"""
Run Configuration
=================

A run is fully described by a flat `key = value` text file plus CLI flags.

FORMAT:
-------

    # symmetric alpha = 1.5
    alpha = 1.5
    c_plus = 1
    c_minus = 1
    seed = 20240229
    levels = 128, 256, 512

UTF-8, one key per line, `#` starts a comment, blank lines are ignored.
Unknown or repeated keys are errors.

PRECEDENCE:
-----------

CLI flags > config-file keys > SETTINGS (environment) > built-in defaults.
alpha, c_plus, c_minus and seed have no default.

ADDING A KEY:
-------------

1. Give it a default in config/settings.py RUN_DEFAULTS (or none if required)
2. Add a field to RunConfig and its parser to RUN_KEYS
"""
import logging
import math
from dataclasses import asdict, dataclass, field, fields
from pathlib import Path
from typing import Any, Callable, Dict, List, Mapping, Optional, Tuple

import numpy as np

from config.settings import SETTINGS

from ..asymptotics.report import Tolerances
from ..core.errors import ConfigError
from ..fluctuation.config import BANDWIDTH_RULES, MEANDER, SUPREMUM, MCConfig
from ..stable.params import StableParams, validate_params
from ..stable.tables import make_grid
from .helpers import config_hash

logger = logging.getLogger(__name__)

DEFAULTS = SETTINGS.RUN_DEFAULTS
REQUIRED_KEYS = ("alpha", "c_plus", "c_minus", "seed")
# Keys that change where and how fast a run goes, never what it writes
RUNTIME_KEYS = ("out", "workers")
TOLERANCE_KEYS = (
    "exponent_tol", "constant_tol", "meander_constant_tol", "tight_exponent_tol",
    "tight_constant_tol", "pup_exponent_tol", "stderr_multiplier",
)


# =============================================================================
# VALUE PARSERS
# =============================================================================

def _parse_float(text: str) -> float:
    value = float(text)
    if not math.isfinite(value):
        raise ValueError(f"{text!r} is not a finite number")
    return value


def _parse_int(text: str) -> int:
    text = text.strip().replace("_", "")
    try:
        return int(text)
    except ValueError:
        value = float(text)
        if not value.is_integer():
            raise ValueError(f"{text!r} is not an integer") from None
        return int(value)


def _parse_bool(text: str) -> bool:
    lowered = text.strip().lower()
    if lowered in ("true", "yes", "1", "on"):
        return True
    if lowered in ("false", "no", "0", "off"):
        return False
    raise ValueError(f"{text!r} is not a boolean")


def _parse_levels(text: str) -> Tuple[int, ...]:
    parts = [p for p in text.replace(" ", "").split(",") if p]
    if not parts:
        raise ValueError("levels needs at least one value")
    return tuple(_parse_int(p) for p in parts)


def _choice(*allowed) -> Callable[[str], Any]:
    def parse(text: str):
        for option in allowed:
            if text.strip() == str(option):
                return option
        raise ValueError(f"{text!r} is not one of {', '.join(str(a) for a in allowed)}")
    return parse


RUN_KEYS: Dict[str, Callable[[str], Any]] = {
    "alpha": _parse_float,
    "c_plus": _parse_float,
    "c_minus": _parse_float,
    "seed": _parse_int,
    "n_paths": _parse_int,
    "meander_paths": _parse_int,
    "n_steps": _parse_int,
    "levels": _parse_levels,
    "grid_min": _parse_float,
    "grid_max": _parse_float,
    "grid_points": _parse_int,
    "grid_spacing": _choice("log", "linear"),
    "out": str.strip,
    "format": _choice("csv"),
    "horizon": _parse_float,
    "passage_x": _parse_float,
    "t_min": _parse_float,
    "t_max": _parse_float,
    "t_points": _parse_int,
    "derivatives": _choice(0, 1, 2),
    "p_up": _parse_bool,
    "workers": _parse_int,
    "exponent_tol": _parse_float,
    "constant_tol": _parse_float,
    "meander_constant_tol": _parse_float,
    "tight_exponent_tol": _parse_float,
    "tight_constant_tol": _parse_float,
    "pup_exponent_tol": _parse_float,
    "stderr_multiplier": _parse_float,
    "kde_bandwidth_rule": _choice(*BANDWIDTH_RULES),
}


def parse_value(key: str, value: Any) -> Any:
    """Parse one value; non-strings (already typed CLI values) pass through."""
    if key not in RUN_KEYS:
        raise ConfigError(f"unknown config key {key!r}")
    if not isinstance(value, str):
        return tuple(value) if key == "levels" else value
    try:
        return RUN_KEYS[key](value)
    except ValueError as exc:
        raise ConfigError(f"bad value for {key}: {exc}") from None


def parse_config_text(text: str, source: str = "<config>") -> Dict[str, Any]:
    """
    Parse `key = value` lines into typed values.

    Raises:
        ConfigError: malformed line, unknown or repeated key, bad value
    """
    values: Dict[str, Any] = {}
    for number, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"{source}:{number}: expected 'key = value', got {raw.strip()!r}")
        key, value = (part.strip() for part in line.split("=", 1))
        if key not in RUN_KEYS:
            raise ConfigError(f"{source}:{number}: unknown config key {key!r}")
        if key in values:
            raise ConfigError(f"{source}:{number}: key {key!r} given twice")
        values[key] = parse_value(key, value)
    return values


def load_config_file(path) -> Dict[str, Any]:
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except (OSError, UnicodeDecodeError) as exc:
        raise ConfigError(f"cannot read config file {path}: {exc}") from None
    return parse_config_text(text, source=str(path))


def _format_value(value: Any) -> str:
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, tuple):
        return ", ".join(str(v) for v in value)
    if isinstance(value, float):
        return repr(value)
    return str(value)


# =============================================================================
# RUN CONFIG
# =============================================================================

@dataclass(frozen=True)
class RunConfig:
    """
    Effective configuration of one CLI run.

    Construct it through RunConfig.from_sources so that precedence and
    required keys are applied; direct construction is for tests.
    """

    alpha: float
    c_plus: float
    c_minus: float
    seed: int
    n_paths: int = DEFAULTS["n_paths"]
    meander_paths: int = DEFAULTS["meander_paths"]
    n_steps: int = DEFAULTS["n_steps"]
    levels: Tuple[int, ...] = DEFAULTS["levels"]
    grid_min: float = DEFAULTS["grid_min"]
    grid_max: float = DEFAULTS["grid_max"]
    grid_points: int = DEFAULTS["grid_points"]
    grid_spacing: str = DEFAULTS["grid_spacing"]
    out: str = field(default_factory=lambda: str(SETTINGS.OUTPUT_DIR))
    format: str = DEFAULTS["format"]
    horizon: float = DEFAULTS["horizon"]
    passage_x: float = DEFAULTS["passage_x"]
    t_min: float = DEFAULTS["t_min"]
    t_max: float = DEFAULTS["t_max"]
    t_points: int = DEFAULTS["t_points"]
    derivatives: int = DEFAULTS["derivatives"]
    p_up: bool = DEFAULTS["p_up"]
    workers: int = field(default_factory=lambda: SETTINGS.WORKERS)
    exponent_tol: float = DEFAULTS["exponent_tol"]
    constant_tol: float = DEFAULTS["constant_tol"]
    meander_constant_tol: float = DEFAULTS["meander_constant_tol"]
    tight_exponent_tol: float = DEFAULTS["tight_exponent_tol"]
    tight_constant_tol: float = DEFAULTS["tight_constant_tol"]
    pup_exponent_tol: float = DEFAULTS["pup_exponent_tol"]
    stderr_multiplier: float = DEFAULTS["stderr_multiplier"]
    kde_bandwidth_rule: str = DEFAULTS["kde_bandwidth_rule"]

    def __post_init__(self):
        object.__setattr__(self, "levels", tuple(int(n) for n in self.levels))
        if self.n_paths < 1 or self.meander_paths < 1:
            raise ConfigError("n_paths and meander_paths must be >= 1")
        if not 0 <= self.seed < 2 ** 64:
            raise ConfigError(f"seed must be a 64-bit unsigned integer, got {self.seed}")
        if not 0.0 < self.grid_min < self.grid_max:
            raise ConfigError("grid needs 0 < grid_min < grid_max")
        if self.grid_points < 2:
            raise ConfigError("grid_points must be >= 2")
        if not 0.0 < self.t_min < self.t_max:
            raise ConfigError("time grid needs 0 < t_min < t_max")
        if self.t_points < 2:
            raise ConfigError("t_points must be >= 2")
        if not (self.horizon > 0.0 and self.passage_x > 0.0):
            raise ConfigError("horizon and passage_x must be > 0")
        if self.workers < 1:
            raise ConfigError(f"workers must be >= 1, got {self.workers}")
        for key in TOLERANCE_KEYS:
            if getattr(self, key) < 0.0:
                raise ConfigError(f"{key} must be >= 0")

    @classmethod
    def from_sources(
        cls,
        config_file: Optional[Path] = None,
        overrides: Optional[Mapping[str, Any]] = None,
    ) -> "RunConfig":
        """
        Merge file keys and CLI overrides over the defaults.

        Overrides whose value is None are ignored, so an argparse namespace
        can be passed through unfiltered.

        Raises:
            ConfigError: unreadable file, unknown key, bad value, missing
                required key
        """
        values: Dict[str, Any] = {}
        if config_file is not None:
            values.update(load_config_file(config_file))
        for key, value in (overrides or {}).items():
            if value is not None:
                values[key] = parse_value(key, value)

        missing = [key for key in REQUIRED_KEYS if key not in values]
        if missing:
            raise ConfigError(f"missing required config key(s): {', '.join(missing)}")
        return cls(**values)

    # =========================================================================
    # DERIVED OBJECTS
    # =========================================================================

    def params(self) -> StableParams:
        """Validated process parameters (raises ParameterError)."""
        return validate_params(self.alpha, self.c_plus, self.c_minus)

    def mc_config(self, kind: str = SUPREMUM) -> MCConfig:
        if kind not in (SUPREMUM, MEANDER):
            raise ValueError(f"unknown simulation kind {kind!r}")
        return MCConfig(
            n_paths=self.n_paths if kind == SUPREMUM else self.meander_paths,
            n_steps=self.n_steps,
            seed=self.seed,
            levels=self.levels,
            kde_bandwidth_rule=self.kde_bandwidth_rule,
            horizon=self.horizon,
            block_paths=SETTINGS.BLOCK_PATHS,
            workers=self.workers,
        )

    def grid(self) -> np.ndarray:
        try:
            return make_grid(self.grid_min, self.grid_max, self.grid_points, self.grid_spacing)
        except ValueError as exc:
            raise ConfigError(str(exc)) from None

    def times(self) -> np.ndarray:
        return np.geomspace(self.t_min, self.t_max, self.t_points)

    def tolerances(self) -> Tolerances:
        return Tolerances(
            exponent=self.exponent_tol,
            constant=self.constant_tol,
            meander_constant=self.meander_constant_tol,
            stderr_multiplier=self.stderr_multiplier,
            tight_exponent=self.tight_exponent_tol,
            tight_constant=self.tight_constant_tol,
            pup_exponent=self.pup_exponent_tol,
        )

    @property
    def output_dir(self) -> Path:
        return Path(self.out)

    # =========================================================================
    # SERIALIZATION
    # =========================================================================

    def as_dict(self) -> Dict[str, Any]:
        return asdict(self)

    def _result_lines(self) -> List[str]:
        return [
            f"{f.name} = {_format_value(getattr(self, f.name))}"
            for f in fields(self)
            if f.name not in RUNTIME_KEYS
        ]

    def to_text(self) -> str:
        """
        The effective config in the same format it is parsed from.

        `out` and `workers` are left out; the run log records them.
        """
        lines = ["# effective configuration"] + self._result_lines()
        return "\n".join(lines) + "\n"

    def digest(self) -> str:
        """
        sha256 of the effective configuration without `out` and `workers`.

        Neither changes any number written, so outputs stay byte-identical
        across output directories and thread counts.
        """
        keep = self._result_lines()
        keep.append(f"block_paths = {SETTINGS.BLOCK_PATHS}")
        return config_hash("\n".join(keep))
