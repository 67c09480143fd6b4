import logging
import os
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Dict, Optional

import yaml
from dotenv import load_dotenv

from .errors import ConfigError

logger = logging.getLogger(__name__)

DEFAULT_CONFIG_PATH = Path("config.yaml")
MARGIN_ENV = "WEYLAB_MARGIN"
FORMATS = ("csv", "json", "latex")
DENOMS = ("ones", "factorial")

DEFAULTS: Dict[str, Any] = {
    "orders": {"n_max": 6, "trunc": 8, "lambda_order": 6, "x_order": 12, "margin": None},
    "denoms": "ones",
    "output": {"format": "json"},
    "logging": {"level": "INFO"},
    "tests": {"seed": 20240601},
}

ORDER_NAMES = ("n_max", "trunc", "lambda_order", "x_order", "margin")

REQUIRED_FIELDS = {
    "orders": ("n_max", "trunc", "lambda_order", "x_order"),
    "denoms": (),
    "output": ("format",),
    "logging": ("level",),
}


def load_config(path: Optional[Path] = None) -> Dict[str, Any]:
    """
    Load configuration from config.yaml and the environment.

    Args:
        path: YAML file to read; config.yaml in the working directory by default

    Returns:
        Configuration dictionary

    Raises:
        ConfigError: If a required field is missing, the YAML is invalid, or
            WEYLAB_MARGIN is not a non-negative integer
    """
    path = Path(path) if path else DEFAULT_CONFIG_PATH
    load_dotenv()
    try:
        with open(path, "r", encoding="utf-8") as file:
            config_data = yaml.safe_load(file) or {}
        for section, keys in REQUIRED_FIELDS.items():
            if section not in config_data:
                raise ConfigError(f"Required field '{section}' not found in {path}")
            for key in keys:
                if key not in (config_data[section] or {}):
                    raise ConfigError(f"Required field '{section}.{key}' not found in {path}")
        config_data.setdefault("tests", dict(DEFAULTS["tests"]))
        logger.info(f"✅ Loaded configuration from {path}")
    except FileNotFoundError:
        logger.warning(f"⚠️ {path} not found, using built-in defaults")
        config_data = {key: (dict(value) if isinstance(value, dict) else value) for key, value in DEFAULTS.items()}
    except yaml.YAMLError as e:
        raise ConfigError(f"Error parsing {path}: {e}")

    margin = os.getenv(MARGIN_ENV)
    if margin is not None:
        config_data["orders"]["margin"] = _parse_margin(margin)
        logger.info(f"Margin {margin} taken from {MARGIN_ENV}")
    return config_data


def _parse_margin(raw: str) -> int:
    try:
        value = int(raw)
    except ValueError:
        raise ConfigError(f"{MARGIN_ENV} must be an integer, got {raw!r}")
    if value < 0:
        raise ConfigError(f"{MARGIN_ENV} must be non-negative, got {value}")
    return value


@dataclass(frozen=True)
class Orders:
    n_max: int
    trunc: int
    lambda_order: int
    x_order: int
    margin: int

    def __post_init__(self):
        for name in ("n_max", "trunc", "lambda_order", "x_order"):
            value = getattr(self, name)
            if not isinstance(value, int) or isinstance(value, bool) or value < 1:
                raise ConfigError(f"order '{name}' must be a positive integer, got {value!r}")
        if not isinstance(self.margin, int) or isinstance(self.margin, bool) or self.margin < 0:
            raise ConfigError(f"margin must be a non-negative integer, got {self.margin!r}")


@dataclass(frozen=True)
class JobConfig:
    """One CLI invocation: command, operator source, orders and output."""

    command: str
    orders: Orders
    op: Optional[str] = None
    denoms: str = "ones"
    format: str = "json"
    out: Optional[Path] = None
    fixture: Optional[Path] = None
    log_level: str = "INFO"
    format_given: bool = False
    extra: Dict[str, Any] = field(default_factory=dict)

    def __post_init__(self):
        if self.format not in FORMATS:
            raise ConfigError(f"format must be one of {FORMATS}, got {self.format!r}")
        if self.denoms not in DENOMS:
            raise ConfigError(f"denoms must be one of {DENOMS}, got {self.denoms!r}")

    @classmethod
    def from_sources(cls, command: str, config_data: Dict[str, Any], flags: Dict[str, Any]) -> "JobConfig":
        """
        Merge flags over the loaded configuration.

        Flags left as None fall through to the configuration, which already
        carries the environment override. A margin set nowhere defaults to
        the truncation order.
        """
        orders = {name: config_data["orders"].get(name) for name in ORDER_NAMES}
        for name in ORDER_NAMES:
            if flags.get(name) is not None:
                orders[name] = flags[name]
        if orders["margin"] is None:
            orders["margin"] = orders["trunc"]
        return cls(
            command=command,
            orders=Orders(**orders),
            op=flags.get("op"),
            denoms=flags.get("denoms") or config_data["denoms"],
            format=flags.get("format") or config_data["output"]["format"],
            out=Path(flags["out"]) if flags.get("out") else None,
            fixture=Path(flags["fixture"]) if flags.get("fixture") else None,
            format_given=bool(flags.get("format")),
            log_level="DEBUG" if flags.get("verbose") else str(config_data["logging"]["level"]).upper(),
            extra={key: value for key, value in flags.items() if key in ("alpha", "m", "beta")},
        )