"""
core.rng
Deterministic RNG helpers that do NOT rely on Python's built-in hash().

Same (base_seed + inputs) => same numpy Generator stream across platforms & runs.
"""

from __future__ import annotations

import hashlib
import json
from typing import Any

import numpy as np


def _canonical(parts: Any) -> str:
    return json.dumps(parts, sort_keys=True, ensure_ascii=False, separators=(",", ":"), default=_encode)


def _encode(x: Any) -> Any:
    if isinstance(x, complex):
        return [x.real, x.imag]
    if isinstance(x, np.generic):
        return _encode(x.item())
    return str(x)


def stable_digest(*parts: Any, salt: str = "odba") -> str:
    """Hex SHA-256 over a canonical JSON representation of `parts`."""
    payload = _canonical(parts)
    return hashlib.sha256((salt + "|" + payload).encode("utf-8")).hexdigest()


def stable_int_seed(*parts: Any, salt: str = "odba") -> int:
    """Return a stable 32-bit integer seed derived from arbitrary inputs.

    Complex numbers serialize as [re, im]; other non-JSON types fall back to str().
    """
    return int(stable_digest(*parts, salt=salt)[:8], 16)


def rng_from(*parts: Any, base_seed: int) -> np.random.Generator:
    """Create a numpy Generator from (base_seed + parts)."""
    return np.random.default_rng(stable_int_seed(base_seed, *parts))


def complex_disk(rng: np.random.Generator, size: int, radius: float = 1.0) -> np.ndarray:
    """Uniform samples from the complex disk |z| < radius."""
    r = radius * np.sqrt(rng.uniform(0.0, 1.0, size))
    phi = rng.uniform(0.0, 2.0 * np.pi, size)
    return r * np.exp(1j * phi)
