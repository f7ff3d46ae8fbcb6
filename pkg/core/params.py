"""
core.params
Model parameters of the open XXX chain (UI/CLI independent).

The chain has N sites, a diagonal K^- (parameter p), a non-diagonal K^+
(parameters q and xi) and per-site inhomogeneities theta. eta is fixed to 1.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from itertools import combinations
from typing import Any, Dict, List, Mapping, Sequence, Tuple

import numpy as np

MAX_SITES = 12
POLE_GUARD = 1e-9


class ParamsError(ValueError):
    """Invalid model parameters. `rule` names the violated invariant."""

    def __init__(self, message: str, rule: str = "") -> None:
        super().__init__(message)
        self.rule = rule


def as_complex(x: Any, field: str) -> complex:
    """Accept numbers, [re, im] pairs and numeric strings."""
    if isinstance(x, (list, tuple)) and len(x) == 2:
        z = complex(float(x[0]), float(x[1]))
    elif isinstance(x, str):
        try:
            z = complex(x.replace(" ", "").replace("i", "j"))
        except ValueError as e:
            raise ParamsError(f"{field} is not a number: {x!r}", rule="finite") from e
    else:
        try:
            z = complex(x)
        except (TypeError, ValueError) as e:
            raise ParamsError(f"{field} is not a number: {x!r}", rule="finite") from e
    if not (np.isfinite(z.real) and np.isfinite(z.imag)):
        raise ParamsError(f"{field} must be finite, got {x!r}", rule="finite")
    return z


@dataclass(frozen=True)
class ModelParams:
    """Parameters of one chain.

    theta is either all zero (homogeneous point) or pairwise distinct.
    """

    N: int
    p: complex
    q: complex
    xi: complex
    theta: Tuple[complex, ...]
    eta: float = 1.0

    def __post_init__(self) -> None:
        if not isinstance(self.N, (int, np.integer)) or isinstance(self.N, bool):
            raise ParamsError(f"N must be an integer, got {self.N!r}", rule="N")
        if not 1 <= int(self.N) <= MAX_SITES:
            raise ParamsError(f"N must be in 1..{MAX_SITES}, got {self.N}", rule="N")
        if self.eta != 1.0:
            raise ParamsError(f"eta is fixed to 1, got {self.eta}", rule="eta")
        object.__setattr__(self, "N", int(self.N))
        object.__setattr__(self, "p", as_complex(self.p, "p"))
        object.__setattr__(self, "q", as_complex(self.q, "q"))
        object.__setattr__(self, "xi", as_complex(self.xi, "xi"))
        theta = tuple(as_complex(t, f"theta[{i}]") for i, t in enumerate(self.theta))
        if len(theta) != self.N:
            raise ParamsError(f"theta has length {len(theta)}, expected N={self.N}", rule="theta_length")
        object.__setattr__(self, "theta", theta)
        if not self.homogeneous:
            for i, j in combinations(range(self.N), 2):
                if abs(theta[i] - theta[j]) <= POLE_GUARD:
                    raise ParamsError(
                        f"theta[{i}] and theta[{j}] coincide; inhomogeneities must be pairwise distinct",
                        rule="theta_distinct",
                    )

    @property
    def homogeneous(self) -> bool:
        return all(t == 0 for t in self.theta)

    @property
    def theta_array(self) -> np.ndarray:
        return np.asarray(self.theta, dtype=complex)

    # boundary fields of the Hamiltonian
    @property
    def h_N(self) -> complex:
        return 1.0 / self.p

    @property
    def h1_x(self) -> complex:
        return self.xi / self.q

    @property
    def h1_z(self) -> complex:
        return 1.0 / self.q

    @property
    def is_real(self) -> bool:
        vals = [self.p, self.q, self.xi, *self.theta]
        return all(abs(v.imag) == 0 for v in vals)

    def with_xi(self, xi: complex) -> "ModelParams":
        return replace(self, xi=xi)

    def at_homogeneous_point(self) -> "ModelParams":
        return replace(self, theta=(0j,) * self.N)


def homogeneous_params(N: int, p: complex, q: complex, xi: complex) -> ModelParams:
    return ModelParams(N=N, p=p, q=q, xi=xi, theta=(0j,) * int(N))


def pole_violations(params: ModelParams, guard: float = POLE_GUARD) -> List[str]:
    """Rules of generic inhomogeneities violated by `params` (empty when fine).

    Generic means theta_j not in {0, +-1/2, +-1} and |theta_i +- theta_j| not in
    {0, 1}; this keeps the functional relation and the exchange-relation
    denominators evaluated at theta points away from their poles.
    """
    if params.homogeneous:
        return []
    out: List[str] = []
    th = params.theta
    for j, t in enumerate(th):
        if min(abs(1 - 2 * t), abs(1 + 2 * t)) <= guard:
            out.append(
                f"theta[{j}]={_fmt(t)} hits a pole: the factors 1-2theta_j and 1+2theta_j of "
                "the functional relation Lambda(theta_j)Lambda(theta_j-1) must be nonzero"
            )
        if abs(t) <= guard:
            out.append(f"theta[{j}]={_fmt(t)} must be nonzero away from the homogeneous point")
        if min(abs(t - 1), abs(t + 1)) <= guard:
            out.append(f"theta[{j}]={_fmt(t)} must avoid +-1 (zeros of the vacuum functions collide)")
    for i, j in combinations(range(len(th)), 2):
        for s, label in ((th[i] - th[j], "-"), (th[i] + th[j], "+")):
            if abs(s) <= guard or min(abs(s - 1), abs(s + 1)) <= guard:
                out.append(f"|theta[{i}] {label} theta[{j}]| must avoid 0 and 1, got {_fmt(s)}")
    return out


def require_generic(params: ModelParams) -> None:
    bad = pole_violations(params)
    if bad:
        raise ParamsError(bad[0], rule="pole")


def sample_params(
    rng: np.random.Generator,
    N: int,
    *,
    homogeneous: bool = False,
    min_gap: float = 0.03,
) -> ModelParams:
    """Default sampler: p, q in [0.7, 3], xi in [0, 2], theta_j in (0.05, 0.45)
    pairwise separated by at least `min_gap`."""
    p = float(rng.uniform(0.7, 3.0))
    q = float(rng.uniform(0.7, 3.0))
    xi = float(rng.uniform(0.0, 2.0))
    if homogeneous:
        return homogeneous_params(N, p, q, xi)
    for _ in range(10_000):
        th = np.sort(rng.uniform(0.05, 0.45, N))
        if N == 1 or float(np.min(np.diff(th))) >= min_gap:
            break
    else:
        # evenly spread fallback for crowded N
        th = np.linspace(0.06, 0.44, N)
    return ModelParams(N=N, p=p, q=q, xi=xi, theta=tuple(complex(t) for t in rng.permutation(th)))


def params_from_mapping(d: Mapping[str, Any]) -> ModelParams:
    """Build ModelParams from a plain mapping (config files, reports).

    theta may be a list or the string "homogeneous" (or missing).
    """
    if "N" not in d:
        raise ParamsError("N is required", rule="N")
    try:
        N = int(d["N"])
    except (TypeError, ValueError) as e:
        raise ParamsError(f"N must be an integer, got {d['N']!r}", rule="N") from e
    theta_raw = d.get("theta", "homogeneous")
    if theta_raw is None or (isinstance(theta_raw, str) and theta_raw.strip().lower() == "homogeneous"):
        theta: Sequence[Any] = [0.0] * max(N, 0)
    elif isinstance(theta_raw, (list, tuple)):
        theta = list(theta_raw)
    else:
        raise ParamsError(f"theta must be a list or 'homogeneous', got {theta_raw!r}", rule="theta_length")
    return ModelParams(
        N=N,
        p=d.get("p", 1.0),
        q=d.get("q", 1.0),
        xi=d.get("xi", 0.0),
        theta=tuple(theta),
    )


def params_to_dict(params: ModelParams) -> Dict[str, Any]:
    """JSON-ready mapping; complex values as [re, im]."""
    return {
        "N": params.N,
        "p": complex_pair(params.p),
        "q": complex_pair(params.q),
        "xi": complex_pair(params.xi),
        "theta": "homogeneous" if params.homogeneous else [complex_pair(t) for t in params.theta],
        "eta": params.eta,
    }


def complex_pair(z: complex) -> List[float]:
    z = complex(z)
    return [float(z.real), float(z.imag)]


def _fmt(z: complex) -> str:
    z = complex(z)
    return f"{z.real:g}" if z.imag == 0 else f"{z.real:g}{z.imag:+g}j"
