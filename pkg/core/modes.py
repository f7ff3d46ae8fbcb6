"""
core.modes
T-Q parametrizations (sector size M and the shape of the inhomogeneous term).

Kept in core so solver and UI share the same sector rules.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Dict, List


@dataclass(frozen=True)
class ParametrizationSpec:
    key: str
    desc: str
    third_power: int    # inhomogeneous term carries (u(u+1))^third_power
    has_lambda: bool    # whether the Q(u) family is present


DEFAULT_PARAMETRIZATIONS: Dict[str, ParametrizationSpec] = {
    "generic": ParametrizationSpec(
        key="generic",
        desc="0 <= M <= N/2: N-2M lambda roots plus M (mu, nu) pairs.",
        third_power=1,
        has_lambda=True,
    ),
    "even_half": ParametrizationSpec(
        key="even_half",
        desc="Even N, M = N/2: only (mu, nu) pairs, no lambda roots.",
        third_power=1,
        has_lambda=False,
    ),
    "odd_extended": ParametrizationSpec(
        key="odd_extended",
        desc="Odd N, M = (N+1)/2: only (mu, nu) pairs; inhomogeneous term gains u(u+1).",
        third_power=2,
        has_lambda=False,
    ),
}


def get_parametrization(N: int, M: int) -> ParametrizationSpec:
    if N < 1:
        raise ValueError(f"N must be positive, got {N}")
    if 0 <= M <= N // 2:
        return DEFAULT_PARAMETRIZATIONS["even_half" if 2 * M == N else "generic"]
    if N % 2 == 1 and M == (N + 1) // 2:
        return DEFAULT_PARAMETRIZATIONS["odd_extended"]
    raise ValueError(f"M={M} outside 0..{N // 2}" + (f" (or {(N + 1) // 2} for odd N)" if N % 2 else ""))


def lambda_count(N: int, M: int) -> int:
    spec = get_parametrization(N, M)
    return N - 2 * M if spec.has_lambda else 0


def default_sector(N: int) -> int:
    """M = N/2 for even N, (N+1)/2 for odd N."""
    return N // 2 if N % 2 == 0 else (N + 1) // 2


def sweep_sectors(N: int, include_extended: bool = True) -> List[int]:
    """0..N//2, then (N+1)/2 for odd N unless include_extended is off."""
    out = list(range(0, N // 2 + 1))
    if include_extended and N % 2 == 1:
        out.append((N + 1) // 2)
    return out
