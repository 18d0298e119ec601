# engine_config.py

import os
from dataclasses import dataclass, asdict
from typing import Any, Dict, Optional

from dotenv import load_dotenv

load_dotenv()

ENGINE_VERSION = "1.0.0"

OUTPUT_FORMATS = ("text", "json", "csv")


def _env_int(name: str, default: int) -> int:
    raw = os.getenv(name)
    if raw is None or raw.strip() == "":
        return default
    try:
        return int(raw)
    except ValueError:
        raise ValueError(f"Invalid integer for {name}: {raw!r}")


# Defaults for every scan; values from the environment (or a .env file) win
SCAN_CONFIG = {
    "limit": _env_int("TRIFORM_LIMIT", 100000),  # scan bound N for classification runs
    "c_max": _env_int("TRIFORM_C_MAX", 500),  # largest c tried by the stable search
    "max_depth": _env_int("TRIFORM_MAX_DEPTH", 6),  # lambda-tree depth before a clean node is flagged
    "jobs": _env_int("TRIFORM_JOBS", os.cpu_count() or 1),
    "format": os.getenv("TRIFORM_FORMAT", "text"),
    "cache_path": os.getenv("TRIFORM_CACHE") or None,
    "escalate_limit": _env_int("TRIFORM_ESCALATE_LIMIT", 1000000),  # rescan bound for unexplained survivors
    "oracle_budget": _env_int("TRIFORM_ORACLE_BUDGET", 2000000),  # residue steps per oracle call
    "log_dir": os.getenv("TRIFORM_LOG_DIR", "logs"),
}

# Bounds of the small lemmas the harness reproduces
EXCLUSION_SCAN_LIMIT = 10000
IDENTITY_N_MAX = 2000
LEM13_M_MAX = 10000
JONES_N_MAX = 5000
UNIVERSALITY_N_MAX = 10000
TREE_PRIMES = (3, 5, 7)
MISSING_PRIME_RANGE_SHAPE_I = (11, 131)
MISSING_PRIME_RANGE_SHAPE_II = (11, 23)


@dataclass
class RunConfig:
    limit: int = SCAN_CONFIG["limit"]
    c_max: int = SCAN_CONFIG["c_max"]
    max_depth: int = SCAN_CONFIG["max_depth"]
    jobs: int = SCAN_CONFIG["jobs"]
    format: str = SCAN_CONFIG["format"]
    cache_path: Optional[str] = SCAN_CONFIG["cache_path"]
    escalate_limit: int = SCAN_CONFIG["escalate_limit"]

    def __post_init__(self):
        if self.limit < 1:
            raise ValueError(f"limit must be >= 1, got {self.limit}")
        if self.jobs < 1:
            raise ValueError(f"jobs must be >= 1, got {self.jobs}")
        if self.c_max < 1 or self.max_depth < 1:
            raise ValueError("c_max and max_depth must be positive")
        if self.format not in OUTPUT_FORMATS:
            raise ValueError(f"Invalid output format: {self.format}")

    def snapshot(self) -> Dict[str, Any]:
        """Config values that affect results; embedded in certificates."""
        data = asdict(self)
        data.pop("jobs")
        data.pop("format")
        data.pop("cache_path")
        return data


def get_run_config(**overrides) -> RunConfig:
    """Build a RunConfig from the defaults above plus explicit (command-line) overrides."""
    values = {key: value for key, value in overrides.items() if value is not None}
    return RunConfig(**values)
