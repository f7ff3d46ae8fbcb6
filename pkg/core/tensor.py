"""
core.tensor
Dense operator algebra on tensor products of spin-1/2 spaces.

Kronecker convention: factor 1 is the leftmost (slowest-varying) index.
Every operator here is immutable once built; functions are pure.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache, reduce
from typing import Iterable, Sequence, Tuple

import numpy as np

LOCAL_DIM = 2
MAX_FACTORS = 14  # 12 sites plus two auxiliary spaces


# ---------------------------------------------------------------------------
# Constants
# ---------------------------------------------------------------------------

def _frozen(m: np.ndarray) -> np.ndarray:
    a = np.array(m, dtype=complex)
    a.setflags(write=False)
    return a


IDENTITY2 = _frozen(np.eye(2))
SIGMA_X = _frozen([[0, 1], [1, 0]])
SIGMA_Y = _frozen([[0, -1j], [1j, 0]])
SIGMA_Z = _frozen([[1, 0], [0, -1]])
# V = -i sigma^y
CROSSING_V = _frozen([[0, -1], [1, 0]])
PERMUTATION = _frozen([[1, 0, 0, 0], [0, 0, 1, 0], [0, 1, 0, 0], [0, 0, 0, 1]])
# P^(-) = (1 - P) / 2
ANTISYMMETRIZER = _frozen((np.eye(4) - PERMUTATION) / 2.0)


@dataclass(frozen=True)
class DenseOperator:
    """Square complex matrix acting on a product of factors.

    factor_dims lists the per-factor dimensions (all 2 for spin-1/2); their
    product equals the matrix size. A fully traced operator has no factors
    and is a 1x1 matrix.
    """

    entries: np.ndarray
    factor_dims: Tuple[int, ...]

    def __post_init__(self) -> None:
        m = np.array(self.entries, dtype=complex)
        dims = tuple(int(d) for d in self.factor_dims)
        if m.ndim != 2 or m.shape[0] != m.shape[1]:
            raise ValueError(f"entries must be a square matrix, got shape {m.shape}")
        if int(np.prod(dims, dtype=np.int64)) != m.shape[0]:
            raise ValueError(f"factor_dims {dims} do not multiply to dim {m.shape[0]}")
        m.setflags(write=False)
        object.__setattr__(self, "entries", m)
        object.__setattr__(self, "factor_dims", dims)

    @property
    def dim(self) -> int:
        return int(self.entries.shape[0])

    @property
    def n_factors(self) -> int:
        return len(self.factor_dims)

    # --- algebra ---

    def _check_compatible(self, other: "DenseOperator") -> None:
        if self.factor_dims != other.factor_dims:
            raise ValueError(f"factor mismatch: {self.factor_dims} vs {other.factor_dims}")

    def __matmul__(self, other: "DenseOperator") -> "DenseOperator":
        self._check_compatible(other)
        return DenseOperator(self.entries @ other.entries, self.factor_dims)

    def __add__(self, other: "DenseOperator") -> "DenseOperator":
        self._check_compatible(other)
        return DenseOperator(self.entries + other.entries, self.factor_dims)

    def __sub__(self, other: "DenseOperator") -> "DenseOperator":
        self._check_compatible(other)
        return DenseOperator(self.entries - other.entries, self.factor_dims)

    def __mul__(self, scalar: complex) -> "DenseOperator":
        return DenseOperator(self.entries * complex(scalar), self.factor_dims)

    __rmul__ = __mul__

    def __neg__(self) -> "DenseOperator":
        return DenseOperator(-self.entries, self.factor_dims)

    def apply(self, vec: np.ndarray) -> np.ndarray:
        return self.entries @ np.asarray(vec, dtype=complex)

    def norm(self) -> float:
        return float(np.linalg.norm(self.entries))

    def scalar(self) -> complex:
        """Value of a 1x1 operator (e.g. a full trace)."""
        if self.dim != 1:
            raise ValueError(f"operator of dim {self.dim} is not a scalar")
        return complex(self.entries[0, 0])

    def is_scalar_multiple_of_identity(self, rtol: float = 1e-10) -> bool:
        c = np.trace(self.entries) / self.dim
        off = np.linalg.norm(self.entries - c * np.eye(self.dim))
        return bool(off <= rtol * max(abs(c) * np.sqrt(self.dim), 1e-300))

    @staticmethod
    def identity(n_factors: int) -> "DenseOperator":
        return DenseOperator(np.eye(LOCAL_DIM ** n_factors), (LOCAL_DIM,) * n_factors)

    @staticmethod
    def from_matrix(m: np.ndarray) -> "DenseOperator":
        """Wrap a 2^n x 2^n matrix as an operator on n spin-1/2 factors."""
        m = np.asarray(m)
        n = int(round(np.log2(m.shape[0]))) if m.shape[0] > 0 else 0
        return DenseOperator(m, (LOCAL_DIM,) * n)


# ---------------------------------------------------------------------------
# Embeddings
# ---------------------------------------------------------------------------

def _check_index(k: int, n: int, name: str) -> None:
    if not isinstance(k, (int, np.integer)) or not 1 <= int(k) <= n:
        raise ValueError(f"{name}={k} out of range 1..{n}")


def _check_n(n: int) -> None:
    if not 1 <= n <= MAX_FACTORS:
        raise ValueError(f"factor count {n} out of range 1..{MAX_FACTORS}")


def kron(*ops: np.ndarray) -> np.ndarray:
    return reduce(np.kron, (np.asarray(o, dtype=complex) for o in ops), np.ones((1, 1), dtype=complex))


def embed_factors(op: np.ndarray, sites: Sequence[int], n: int) -> DenseOperator:
    """Embed `op`, acting on `sites` in the given order, into n factors.

    Slot k of `op` (in its own Kronecker order) lands on factor sites[k];
    all other factors carry the identity.
    """
    _check_n(n)
    sites = [int(s) for s in sites]
    for s in sites:
        _check_index(s, n, "site")
    if len(set(sites)) != len(sites):
        raise ValueError(f"sites must be distinct, got {sites}")
    m = len(sites)
    op = np.asarray(op, dtype=complex)
    if op.shape != (LOCAL_DIM ** m, LOCAL_DIM ** m):
        raise ValueError(f"operator shape {op.shape} does not fit {m} factors")

    rest = [k for k in range(1, n + 1) if k not in sites]
    full = np.kron(op, np.eye(LOCAL_DIM ** len(rest), dtype=complex))
    order = sites + rest  # factor carried by each tensor axis of `full`
    if order == list(range(1, n + 1)):
        return DenseOperator(full, (LOCAL_DIM,) * n)

    t = full.reshape((LOCAL_DIM,) * (2 * n))
    pos = [order.index(k) for k in range(1, n + 1)]
    t = t.transpose(pos + [n + p for p in pos])
    return DenseOperator(t.reshape(LOCAL_DIM ** n, LOCAL_DIM ** n), (LOCAL_DIM,) * n)


def embed_site(op2: np.ndarray, j: int, n: int) -> DenseOperator:
    """op2 on factor j, identity elsewhere (dimension 2^n)."""
    _check_n(n)
    _check_index(j, n, "site j")
    left = np.eye(LOCAL_DIM ** (j - 1), dtype=complex)
    right = np.eye(LOCAL_DIM ** (n - j), dtype=complex)
    return DenseOperator(kron(left, op2, right), (LOCAL_DIM,) * n)


def embed_pair(op4: np.ndarray, i: int, j: int, n: int) -> DenseOperator:
    """op4 with its first slot on factor i and second slot on factor j."""
    _check_n(n)
    _check_index(i, n, "site i")
    _check_index(j, n, "site j")
    if i == j:
        raise ValueError(f"embed_pair needs i != j, got i=j={i}")
    return embed_factors(op4, [i, j], n)


@lru_cache(maxsize=256)
def permutation_embedded(i: int, j: int, n: int) -> np.ndarray:
    """Read-only P_ij on n factors (used on every monodromy build)."""
    m = np.array(embed_pair(PERMUTATION, i, j, n).entries)
    m.setflags(write=False)
    return m


# ---------------------------------------------------------------------------
# Transposes and traces
# ---------------------------------------------------------------------------

def partial_transpose(op: DenseOperator, k: int) -> DenseOperator:
    n = op.n_factors
    _check_index(k, n, "factor k")
    t = op.entries.reshape(op.factor_dims + op.factor_dims)
    t = np.swapaxes(t, k - 1, n + k - 1)
    return DenseOperator(t.reshape(op.dim, op.dim), op.factor_dims)


def trace_factors(op: DenseOperator, factors: Iterable[int]) -> DenseOperator:
    """Partial trace over `factors`; the result lives on the remaining ones."""
    n = op.n_factors
    picked = sorted({int(k) for k in factors})
    if not picked:
        raise ValueError("factors must be a nonempty set")
    for k in picked:
        _check_index(k, n, "factor")

    t = op.entries.reshape(op.factor_dims + op.factor_dims)
    dims = list(op.factor_dims)
    for k in reversed(picked):
        cur = len(dims)
        t = np.trace(t, axis1=k - 1, axis2=cur + k - 1)
        del dims[k - 1]
    size = int(np.prod(dims, dtype=np.int64)) if dims else 1
    return DenseOperator(np.asarray(t).reshape(size, size), tuple(dims))


def aux_blocks(op: DenseOperator) -> Tuple[DenseOperator, DenseOperator, DenseOperator, DenseOperator]:
    """The four blocks of an operator on (aux of dim 2) x rest, aux = factor 1."""
    if op.n_factors < 2 or op.factor_dims[0] != LOCAL_DIM:
        raise ValueError(f"expected auxiliary factor of dim 2 in front, got {op.factor_dims}")
    h = op.dim // LOCAL_DIM
    rest = op.factor_dims[1:]
    e = op.entries
    return (
        DenseOperator(e[:h, :h], rest),
        DenseOperator(e[:h, h:], rest),
        DenseOperator(e[h:, :h], rest),
        DenseOperator(e[h:, h:], rest),
    )


def relative_residual(lhs: np.ndarray, rhs: np.ndarray, eps: float = 1e-300) -> float:
    """||lhs - rhs||_F / max(||lhs||_F, ||rhs||_F, eps)."""
    lhs = np.asarray(lhs)
    rhs = np.asarray(rhs)
    den = max(float(np.linalg.norm(lhs)), float(np.linalg.norm(rhs)), eps)
    return float(np.linalg.norm(lhs - rhs)) / den
