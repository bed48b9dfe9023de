"""Tolerance configuration for phaseamb."""

import dataclasses
import sys

if sys.version_info >= (3, 11):
    import tomllib
else:  # pragma: no cover - Python 3.10 fallback
    import tomli as tomllib
from pathlib import Path

from lib.errors import ConfigError

_LOCAL_CONFIG = "phaseamb.toml"
_CONFIG_PATHS = [
    Path(_LOCAL_CONFIG),
    Path.home() / ".config" / "phaseamb" / "config.toml",
]


@dataclasses.dataclass(frozen=True)
class Tolerances:
    """Numerical tolerances shared by every module.

    All values are relative unless noted.
    """

    eval: float = 1e-9
    trim: float = 1e-12
    root: float = 1e-8
    pair: float = 1e-6
    circle: float = 1e-7
    real: float = 1e-8
    dedup: float = 1e-6
    nn: float = 1e-9
    # Root clustering: link distance for multiple roots off the unit circle, and the
    # band ||z| - 1| inside which roots are tested for unit-circle multiplicity.
    cluster: float = 1e-3
    circle_window: float = 1e-2

    def with_overrides(self, **overrides):
        """Return a copy with the non-None overrides applied, validated."""
        values = {k: v for k, v in overrides.items() if v is not None}
        names = {f.name for f in dataclasses.fields(self)}
        unknown = sorted(set(values) - names)
        if unknown:
            raise ConfigError(f"Unknown tolerance(s): {', '.join(unknown)}")
        for name, value in values.items():
            if not isinstance(value, (int, float)) or value <= 0:
                raise ConfigError(f"Tolerance {name} must be positive, got {value!r}")
        return dataclasses.replace(self, **{k: float(v) for k, v in values.items()})


DEFAULT_TOLERANCES = Tolerances()


def load_config(path=None):
    """Load config from an explicit path or the first existing TOML file.

    Search order: ./phaseamb.toml, ~/.config/phaseamb/config.toml.
    Returns (config_dict, config_path); ({}, None) when no file exists and no
    explicit path was given.
    """
    if path is not None:
        path = Path(path)
        if not path.is_file():
            raise ConfigError(f"Config file not found: {path}")
        candidates = [path]
    else:
        candidates = _CONFIG_PATHS
    for candidate in candidates:
        if candidate.is_file():
            with open(candidate, "rb") as f:
                try:
                    return tomllib.load(f), candidate
                except tomllib.TOMLDecodeError as exc:
                    raise ConfigError(f"Invalid TOML in {candidate}: {exc}") from exc
    return {}, None


def load_tolerances(path=None, **overrides):
    """Build Tolerances from defaults, the config file, then explicit overrides."""
    config, _ = load_config(path)
    table = config.get("tolerances", {})
    if not isinstance(table, dict):
        raise ConfigError("[tolerances] must be a table")
    tol = DEFAULT_TOLERANCES.with_overrides(**table)
    return tol.with_overrides(**overrides)
