"""
Configuration settings - hard-coded defaults, optionally overridden by a
.env file and then by the process environment (QCAT_* keys).
"""

import os
from dataclasses import dataclass
from pathlib import Path
from typing import Optional

from dotenv import dotenv_values
from loguru import logger


@dataclass(frozen=True)
class Settings:
    """Application settings."""
    seed: int = 0
    log_level: str = "WARNING"
    log_file: str = ""                  # empty = console only

    # Fraction of the acceptance counts run by `suite` (1.0 = full battery)
    suite_scale: float = 1.0


_ENV_KEYS = {
    "QCAT_SEED": ("seed", int),
    "QCAT_LOG_LEVEL": ("log_level", str),
    "QCAT_LOG_FILE": ("log_file", str),
    "QCAT_SUITE_SCALE": ("suite_scale", float),
}


def _coerce(key: str, raw: str, cast):
    try:
        value = cast(raw.strip())
    except (TypeError, ValueError) as e:
        raise ValueError(f"{key}={raw!r} is not a valid {cast.__name__}") from e
    if key == "QCAT_SUITE_SCALE" and not 0.0 < value <= 1.0:
        raise ValueError(f"{key} must lie in (0, 1], got {value}")
    return value


def load_settings(env_file: Optional[str] = ".env", environ: Optional[dict] = None) -> Settings:
    """Load settings: defaults < .env file < process environment."""
    values = {}
    if env_file and Path(env_file).exists():
        values.update({k: v for k, v in dotenv_values(env_file).items() if v is not None})
        logger.debug(f"Loaded {len(values)} keys from {env_file}")

    environ = os.environ if environ is None else environ
    values.update({k: environ[k] for k in _ENV_KEYS if k in environ})

    overrides = {}
    for key, (field_name, cast) in _ENV_KEYS.items():
        if key in values and values[key] != "":
            overrides[field_name] = _coerce(key, values[key], cast)

    return Settings(**overrides)
