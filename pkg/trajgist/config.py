"""
TrajGiST — Runtime Configuration
=================================
Environment settings plus the layered YAML configuration used by the CLI.
"""

import os
from pathlib import Path
from typing import Any, Dict, Optional

import yaml

from .core.errors import InvalidParameterError

DEFAULT_CONFIG_PATH = Path(__file__).with_name("config.yaml")


class Settings:
    """Process-wide settings — reads from environment or uses defaults."""

    # ── Logging ───────────────────────────────────────────
    LOG_LEVEL: str = os.getenv("TRAJGIST_LOG_LEVEL", "INFO")
    LOG_FILE: str = os.getenv("TRAJGIST_LOG_FILE", "")

    # ── Configuration file ────────────────────────────────
    CONFIG_PATH: str = os.getenv("TRAJGIST_CONFIG", str(DEFAULT_CONFIG_PATH))


settings = Settings()


def _merge(base: Dict[str, Any], override: Dict[str, Any]) -> Dict[str, Any]:
    out = dict(base)
    for key, value in override.items():
        if isinstance(value, dict) and isinstance(out.get(key), dict):
            out[key] = _merge(out[key], value)
        else:
            out[key] = value
    return out


def load_config(path: Optional[str] = None) -> Dict[str, Any]:
    """
    Packaged defaults overlaid with the file at ``path`` (or TRAJGIST_CONFIG).

    Sections: dataset, index, split, workload, run.
    """
    with open(DEFAULT_CONFIG_PATH, "r", encoding="utf-8") as f:
        config = yaml.safe_load(f) or {}
    path = path or settings.CONFIG_PATH
    if path and Path(path).resolve() != DEFAULT_CONFIG_PATH.resolve():
        with open(path, "r", encoding="utf-8") as f:
            override = yaml.safe_load(f) or {}
        if not isinstance(override, dict):
            raise InvalidParameterError(f"config file {path} must hold a mapping")
        config = _merge(config, override)
    return config
