"""
Configuration loading

Caps and the default seed live in config.yaml; environment variables
(optionally from a .env file) override the file, and CLI flags override both.
"""

import os
import logging
from dataclasses import dataclass, asdict, fields, replace
from pathlib import Path
from typing import Any, Dict, Optional

import yaml

try:
    from dotenv import load_dotenv
    load_dotenv(Path(__file__).parent.parent / '.env')
except ImportError:
    pass

logger = logging.getLogger(__name__)

CONFIG_FILE = "config.yaml"

# Environment variable -> Caps field
ENV_OVERRIDES = {
    "FPS_GROUP_CAP": "group_cap",
    "FPS_SUPPORT_CAP": "support_cap",
    "FPS_DIM_CAP": "dim_cap",
    "FPS_KAPPA_BUDGET": "kappa_max_u",
    "FPS_SEED": "seed",
}


@dataclass(frozen=True)
class Caps:
    """
    The single record of size limits and the decomposition seed

    Attributes:
        group_cap: Largest group that may be enumerated element by element
        support_cap: Largest support handled by canonical forms and factoring
        dim_cap: Largest module dimension passed to decompose
        subgroup_cap: Largest p-group whose subgroup lattice is enumerated
        oracle_max_degree: Largest qn accepted by the Broue oracle
        split_attempts: Random Fitting splits tried before confirmation
        idempotent_search_cap: Largest number of local-algebra elements
            scanned exhaustively when confirming indecomposability
        kappa_max_u: Largest wreath exponent tested by kappa
        kappa_max_dim: Largest wreath-power module dimension tested by kappa
        exponent_cap: Largest exponent used for single-element factors
        linear_commutant_cap: Largest non-permutation module whose
            commutant is found by solving the linear system
        seed: Seed for random endomorphisms
    """
    group_cap: int = 1_000_000
    support_cap: int = 12
    dim_cap: int = 400
    subgroup_cap: int = 128
    oracle_max_degree: int = 8
    split_attempts: int = 40
    idempotent_search_cap: int = 4096
    kappa_max_u: int = 4
    kappa_max_dim: int = 300
    exponent_cap: int = 8
    linear_commutant_cap: int = 30
    seed: int = 0

    def to_dict(self) -> Dict[str, int]:
        return asdict(self)

    def with_overrides(self, **overrides: Optional[int]) -> "Caps":
        """Return a copy with every non-None override applied."""
        changes = {k: int(v) for k, v in overrides.items() if v is not None}
        unknown = set(changes) - {f.name for f in fields(self)}
        if unknown:
            raise ValueError(f"Unknown cap(s): {', '.join(sorted(unknown))}")
        for name, value in changes.items():
            if value < 0 or (value == 0 and name != "seed"):
                raise ValueError(f"Cap {name} must be positive, got {value}")
        return replace(self, **changes)


DEFAULT_CAPS = Caps()


def load_config(config_path: Optional[str] = None) -> Dict[str, Any]:
    """
    Load the YAML configuration file

    Args:
        config_path: Path to config.yaml (defaults to the repository copy)

    Returns:
        Parsed configuration dictionary (empty when the file is unusable)
    """
    path = Path(config_path) if config_path else Path(__file__).parent.parent / CONFIG_FILE
    try:
        with open(path, 'r') as f:
            config = yaml.safe_load(f) or {}
    except FileNotFoundError:
        logger.warning(f"Config file not found: {path}; using built-in defaults")
        return {}
    except yaml.YAMLError as e:
        logger.error(f"Error parsing config file {path}: {e}")
        return {}

    if not isinstance(config, dict):
        logger.error(f"Config file {path} does not hold a mapping; using built-in defaults")
        return {}
    return config


def caps_from_config(config: Dict[str, Any], environ: Optional[Dict[str, str]] = None) -> Caps:
    """
    Build a Caps record from a parsed config and the environment

    Args:
        config: Output of load_config
        environ: Environment mapping (defaults to os.environ)

    Returns:
        Caps with file values, then environment values, applied over defaults
    """
    environ = os.environ if environ is None else environ
    known = {f.name for f in fields(Caps)}

    values: Dict[str, Any] = {}
    for name, value in (config.get('caps') or {}).items():
        if name in known:
            values[name] = value
        else:
            logger.warning(f"Ignoring unknown cap in config: {name}")
    if 'seed' in config:
        values['seed'] = config['seed']

    for env_name, field_name in ENV_OVERRIDES.items():
        raw = environ.get(env_name)
        if raw is None or raw == "":
            continue
        try:
            values[field_name] = int(raw)
        except ValueError:
            logger.warning(f"Ignoring non-integer {env_name}={raw!r}")

    return DEFAULT_CAPS.with_overrides(**values)
