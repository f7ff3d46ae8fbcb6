"""engine.config

Run configuration passed from the CLI or the UI.
"""

from __future__ import annotations

import os
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Dict, Mapping, Union

from core.params import ModelParams, params_to_dict

COMMANDS = ("verify", "spectrum", "solve-bae", "solve-functional")
BRANCHES = ("+", "-", "both")
FORMATS = ("json", "csv")
STRATEGIES = ("homotopy_xi", "multistart", "oracle_seeded")

DEFAULT_TOLERANCES: Dict[str, float] = {
    "identities": 1e-10,
    "solver": 1e-11,
    "functional": 1e-10,
    "match": 1e-6,
}

# solve-functional needs more random starts than the root solvers
DEFAULT_SEEDS: Dict[str, int] = {
    "verify": 64,
    "spectrum": 64,
    "solve-bae": 64,
    "solve-functional": 200,
}

CACHE_ENV = "ODBA_CACHE_DIR"
LOG_LEVEL_ENV = "ODBA_LOG_LEVEL"


def default_cache_dir() -> Path:
    env = os.environ.get(CACHE_ENV, "").strip()
    return Path(env).expanduser() if env else Path.home() / ".cache" / "odba"


@dataclass(frozen=True)
class RunConfig:
    command: str
    params: ModelParams
    branch: str = "both"
    M: Union[int, str] = "default"
    tolerances: Mapping[str, float] = field(default_factory=lambda: dict(DEFAULT_TOLERANCES))
    seed_count: int = 64
    rng_seed: int = 0
    output_path: str = ""
    format: str = "json"
    strategy: str = "homotopy_xi"
    xi_steps: int = 20
    use_cache: bool = True

    def tol(self, key: str) -> float:
        return float(self.tolerances.get(key, DEFAULT_TOLERANCES[key]))

    @property
    def branches(self) -> tuple:
        return {"+": (1,), "-": (-1,), "both": (1, -1)}[self.branch]

    def to_dict(self) -> Dict[str, Any]:
        """Canonical, JSON-ready form; feeding it back to parse_config reproduces the run.

        output_path, format and use_cache only steer where results go, so they
        are left out.
        """
        return {
            "command": self.command,
            "params": params_to_dict(self.params),
            "branch": self.branch,
            "M": self.M,
            "tolerances": {k: float(v) for k, v in sorted(self.tolerances.items())},
            "seed_count": int(self.seed_count),
            "rng_seed": int(self.rng_seed),
            "strategy": self.strategy,
            "xi_steps": int(self.xi_steps),
        }
