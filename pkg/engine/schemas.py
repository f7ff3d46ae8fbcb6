"""engine.schemas

Contract for RunConfig: what a config file (or the CLI flags) may contain
and how it is validated.

Accepted layout (flat or nested model parameters):

    {"command": "verify", "N": 2, "p": 2, "q": 3, "xi": 0.5, "theta": [0.2, -0.4]}
    {"command": "solve-bae", "params": {"N": 1, "p": 1.3, "q": 2.1, "xi": 0.5,
     "theta": "homogeneous"}, "branch": "both", "M": "default"}

Every rejection is a ConfigError naming the offending field. Violations of
the model-parameter rules are passed through with the rule text.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from pathlib import Path
from typing import Any, Dict, List, Mapping, Optional, Union

from core.modes import get_parametrization
from core.params import ModelParams, ParamsError, as_complex, pole_violations

from .config import (
    BRANCHES,
    COMMANDS,
    DEFAULT_SEEDS,
    DEFAULT_TOLERANCES,
    FORMATS,
    STRATEGIES,
    RunConfig,
)
from .parsing import load_config_file

PARAM_KEYS = ("N", "p", "q", "xi", "theta")

_BRANCH_ALIASES = {
    "+": "+",
    "plus": "+",
    "1": "+",
    "+1": "+",
    "-": "-",
    "minus": "-",
    "-1": "-",
    "both": "both",
    "all": "both",
    "+-": "both",
}


class ConfigError(ValueError):
    """Invalid run configuration; `field` names the offending entry."""

    def __init__(self, field: str, message: str) -> None:
        super().__init__(f"{field}: {message}")
        self.field = field


def _as_int(x: Any, field: str, *, minimum: Optional[int] = None) -> int:
    if isinstance(x, bool):
        raise ConfigError(field, f"must be an integer, got {x!r}")
    try:
        f = float(x)
    except (TypeError, ValueError) as e:
        raise ConfigError(field, f"must be an integer, got {x!r}") from e
    if not math.isfinite(f) or f != int(f):
        raise ConfigError(field, f"must be an integer, got {x!r}")
    v = int(f)
    if minimum is not None and v < minimum:
        raise ConfigError(field, f"must be >= {minimum}, got {v}")
    return v


def _as_tol(x: Any, field: str) -> float:
    try:
        f = float(x)
    except (TypeError, ValueError) as e:
        raise ConfigError(field, f"must be a positive number, got {x!r}") from e
    if not math.isfinite(f) or f <= 0:
        raise ConfigError(field, f"must be a positive finite number, got {x!r}")
    return f


def normalize_branch(x: Any) -> str:
    b = str(x if x is not None else "both").strip().lower()
    if b not in _BRANCH_ALIASES:
        raise ConfigError("branch", f"must be one of {', '.join(BRANCHES)}, got {x!r}")
    return _BRANCH_ALIASES[b]


def normalize_theta(x: Any, N: int) -> List[Any]:
    """List, comma-separated string or "homogeneous"."""
    if x is None:
        return [0.0] * N
    if isinstance(x, str):
        s = x.strip()
        if s.lower() == "homogeneous":
            return [0.0] * N
        parts = [t for t in s.replace(";", ",").split(",") if t.strip()]
        return [as_complex(t.strip(), f"theta[{i}]") for i, t in enumerate(parts)]
    if isinstance(x, (list, tuple)):
        return list(x)
    raise ConfigError("theta", f"must be a list, a comma list or 'homogeneous', got {x!r}")


def build_params(d: Mapping[str, Any]) -> ModelParams:
    if "N" not in d:
        raise ConfigError("N", "is required")
    N = _as_int(d["N"], "N", minimum=1)
    values: Dict[str, complex] = {}
    for key, default in (("p", None), ("q", None), ("xi", 0.0)):
        raw = d.get(key, default)
        if raw is None:
            raise ConfigError(key, "is required")
        try:
            values[key] = as_complex(raw, key)
        except ParamsError as e:
            raise ConfigError(key, str(e)) from e
    try:
        theta = normalize_theta(d.get("theta"), N)
    except ParamsError as e:
        raise ConfigError("theta", str(e)) from e
    if len(theta) != N:
        raise ConfigError("theta", f"has {len(theta)} entries, expected N={N}")
    try:
        params = ModelParams(N=N, p=values["p"], q=values["q"], xi=values["xi"], theta=tuple(theta))
    except ParamsError as e:
        field = "theta" if e.rule.startswith("theta") or "theta" in str(e) else (e.rule or "params")
        raise ConfigError(field, str(e)) from e
    bad = pole_violations(params)
    if bad:
        raise ConfigError("theta", bad[0])
    return params


def _merge(base: Mapping[str, Any], overrides: Optional[Mapping[str, Any]]) -> Dict[str, Any]:
    """Flatten nested params and overlay non-None overrides."""
    out: Dict[str, Any] = {k: v for k, v in dict(base).items() if k != "params"}
    nested = base.get("params") or {}
    if not isinstance(nested, Mapping):
        raise ConfigError("params", f"must be an object, got {type(nested).__name__}")
    for k in PARAM_KEYS:
        if k in nested and k not in out:
            out[k] = nested[k]
    for k, v in dict(overrides or {}).items():
        if v is not None:
            out[k] = v
    return out


def parse_config(
    source: Union[str, Path, Mapping[str, Any], None] = None,
    *,
    overrides: Optional[Mapping[str, Any]] = None,
) -> RunConfig:
    """Validated RunConfig from a config file path or mapping, overlaid by flags.

    Defaults: tolerances identities 1e-10, solver 1e-11, functional 1e-10,
    match 1e-6; M "default"; rng_seed 0; seed_count per command.
    """
    if source is None:
        base: Mapping[str, Any] = {}
    elif isinstance(source, Mapping):
        base = source
    else:
        try:
            base = load_config_file(source)
        except FileNotFoundError as e:
            raise ConfigError("config", str(e)) from e
        except ValueError as e:
            raise ConfigError("config", f"cannot parse {source}: {e}") from e
    d = _merge(base, overrides)

    command = str(d.get("command") or "").strip().lower()
    if command not in COMMANDS:
        raise ConfigError("command", f"must be one of {', '.join(COMMANDS)}, got {d.get('command')!r}")

    params = build_params(d)
    branch = normalize_branch(d.get("branch"))

    M_raw = d.get("M", "default")
    if M_raw is None or (isinstance(M_raw, str) and M_raw.strip().lower() == "default"):
        M: Union[int, str] = "default"
    else:
        M = _as_int(M_raw, "M", minimum=0)
        try:
            get_parametrization(params.N, M)
        except ValueError as e:
            raise ConfigError("M", str(e)) from e

    tol_raw = d.get("tolerances") or {}
    if not isinstance(tol_raw, Mapping):
        raise ConfigError("tolerances", f"must be an object, got {type(tol_raw).__name__}")
    tolerances = dict(DEFAULT_TOLERANCES)
    for k, v in tol_raw.items():
        if k not in DEFAULT_TOLERANCES:
            raise ConfigError(f"tolerances.{k}", f"unknown key; expected one of {', '.join(DEFAULT_TOLERANCES)}")
        tolerances[k] = _as_tol(v, f"tolerances.{k}")

    seed_count = _as_int(d.get("seed_count", DEFAULT_SEEDS[command]), "seed_count", minimum=1)
    rng_seed = _as_int(d.get("rng_seed", 0), "rng_seed", minimum=0)

    fmt = str(d.get("format") or "json").strip().lower()
    if fmt not in FORMATS:
        raise ConfigError("format", f"must be one of {', '.join(FORMATS)}, got {d.get('format')!r}")

    strategy = str(d.get("strategy") or "homotopy_xi").strip().lower()
    if strategy not in STRATEGIES:
        raise ConfigError("strategy", f"must be one of {', '.join(STRATEGIES)}, got {d.get('strategy')!r}")

    xi_steps = _as_int(d.get("xi_steps", 20), "xi_steps")
    if not 10 <= xi_steps <= 50:
        raise ConfigError("xi_steps", f"must be in 10..50, got {xi_steps}")

    return RunConfig(
        command=command,
        params=params,
        branch=branch,
        M=M,
        tolerances=tolerances,
        seed_count=seed_count,
        rng_seed=rng_seed,
        output_path=str(d.get("output_path") or ""),
        format=fmt,
        strategy=strategy,
        xi_steps=xi_steps,
        use_cache=bool(d.get("use_cache", True)),
    )


@dataclass(frozen=True)
class ConfigIssue:
    field: str
    message: str

    def to_dict(self) -> Dict[str, Any]:
        return {"field": self.field, "message": self.message}


def check_config(
    source: Union[str, Path, Mapping[str, Any], None] = None,
    *,
    overrides: Optional[Mapping[str, Any]] = None,
) -> Optional[ConfigIssue]:
    """parse_config without raising; used by the UI to show a message."""
    try:
        parse_config(source, overrides=overrides)
    except ConfigError as e:
        return ConfigIssue(field=e.field, message=str(e))
    return None
