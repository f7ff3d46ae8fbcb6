"""
core.lattice
Model-defining objects of the open XXX chain.

R(u) = u + P (eta = 1), K^-(u) = diag(p+u, p-u),
K^+(u) = [[q+u+1, xi(u+1)], [xi(u+1), q-u-1]].

Operators on auxiliary x quantum space put the auxiliary space in factor 1
and site j in factor j+1.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Literal

import numpy as np

from .params import ModelParams
from .tensor import (
    CROSSING_V,
    PERMUTATION,
    SIGMA_X,
    SIGMA_Y,
    SIGMA_Z,
    DenseOperator,
    aux_blocks,
    embed_factors,
    embed_pair,
    embed_site,
    kron,
    partial_transpose,
    permutation_embedded,
    trace_factors,
)

Variant = Literal["forward", "hat"]


# ---------------------------------------------------------------------------
# Local matrices
# ---------------------------------------------------------------------------

def r_matrix(u: complex) -> np.ndarray:
    return complex(u) * np.eye(4, dtype=complex) + PERMUTATION


def xi_unitarity(u: complex) -> complex:
    """(u+1)(u-1); not to be confused with the boundary parameter xi."""
    u = complex(u)
    return (u + 1) * (u - 1)


def k_minus(u: complex, params: ModelParams) -> np.ndarray:
    u = complex(u)
    return np.diag([params.p + u, params.p - u]).astype(complex)


def k_plus(u: complex, params: ModelParams) -> np.ndarray:
    u = complex(u)
    off = params.xi * (u + 1)
    return np.array([[params.q + u + 1, off], [off, params.q - u - 1]], dtype=complex)


# ---------------------------------------------------------------------------
# Monodromy matrices
# ---------------------------------------------------------------------------

def monodromy(u: complex, params: ModelParams, variant: Variant = "forward") -> DenseOperator:
    """One-row monodromy on aux x quantum (N+1 factors).

    forward: R_{0N}(u-theta_N) ... R_{01}(u-theta_1)
    hat:     R_{01}(u+theta_1) ... R_{0N}(u+theta_N)
    """
    u = complex(u)
    n = params.N + 1
    dim = 2 ** n
    eye = np.eye(dim, dtype=complex)
    out = eye.copy()
    for j, th in enumerate(params.theta, start=1):
        p0j = permutation_embedded(1, j + 1, n)
        if variant == "forward":
            out = ((u - th) * eye + p0j) @ out
        elif variant == "hat":
            out = out @ ((u + th) * eye + p0j)
        else:
            raise ValueError(f"variant must be 'forward' or 'hat', got {variant!r}")
    return DenseOperator(out, (2,) * n)


def on_two_aux(T: DenseOperator, aux: int, N: int) -> DenseOperator:
    """Place an aux x quantum operator on two auxiliary spaces (factors 1, 2) x quantum.

    `aux` picks which auxiliary factor T acts on; the quantum sites move to 3..N+2.
    """
    if aux not in (1, 2):
        raise ValueError(f"aux must be 1 or 2, got {aux}")
    return embed_factors(T.entries, [aux] + list(range(3, N + 3)), N + 2)


def t_hat_by_crossing(u: complex, params: ModelParams) -> DenseOperator:
    """(-1)^(N-1) V_0 T^{t_0}(-u-1) V_0, which equals the hat monodromy."""
    n = params.N + 1
    t = partial_transpose(monodromy(-complex(u) - 1, params, "forward"), 1)
    v0 = embed_site(CROSSING_V, 1, n).entries
    sign = (-1) ** (params.N - 1)
    return DenseOperator(sign * (v0 @ t.entries @ v0), t.factor_dims)


@dataclass(frozen=True)
class OneRowComponents:
    alpha: DenseOperator
    beta: DenseOperator
    gamma: DenseOperator
    delta: DenseOperator


@dataclass(frozen=True)
class DoubleRowComponents:
    A: DenseOperator
    B: DenseOperator
    C: DenseOperator
    D: DenseOperator
    Dbar: DenseOperator


def extract_one_row_components(T: DenseOperator) -> OneRowComponents:
    a, b, c, d = aux_blocks(T)
    return OneRowComponents(alpha=a, beta=b, gamma=c, delta=d)


def one_row_components(u: complex, params: ModelParams) -> OneRowComponents:
    return extract_one_row_components(monodromy(u, params, "forward"))


def double_row_monodromy(u: complex, params: ModelParams) -> DenseOperator:
    """T(u) K^-_0(u) T_hat(u)."""
    t = monodromy(u, params, "forward")
    th = monodromy(u, params, "hat")
    k0 = embed_site(k_minus(u, params), 1, params.N + 1)
    return t @ k0 @ th


def extract_double_row_components(TT: DenseOperator, u: complex) -> DoubleRowComponents:
    """A, B, C, D blocks plus Dbar(u) = (2u+1) D(u) - A(u)."""
    a, b, c, d = aux_blocks(TT)
    dbar = (2 * complex(u) + 1) * d - a
    return DoubleRowComponents(A=a, B=b, C=c, D=d, Dbar=dbar)


def double_row_components(u: complex, params: ModelParams) -> DoubleRowComponents:
    return extract_double_row_components(double_row_monodromy(u, params), u)


def b_from_one_row(u: complex, params: ModelParams) -> DenseOperator:
    """B(u) rebuilt from one-row entries.

    (-1)^N [-(p+u) alpha(u) beta(-u-1) + (p-u) beta(u) alpha(-u-1)]
    """
    u = complex(u)
    cu = one_row_components(u, params)
    cm = one_row_components(-u - 1, params)
    comb = (-(params.p + u)) * (cu.alpha @ cm.beta) + (params.p - u) * (cu.beta @ cm.alpha)
    return ((-1) ** params.N) * comb


# ---------------------------------------------------------------------------
# Transfer matrix and Hamiltonian
# ---------------------------------------------------------------------------

def transfer_matrix(u: complex, params: ModelParams) -> DenseOperator:
    """tau(u) = tr_0 K^+_0(u) TT(u)."""
    kp0 = embed_site(k_plus(u, params), 1, params.N + 1)
    return trace_factors(kp0 @ double_row_monodromy(u, params), {1})


def transfer_from_components(u: complex, params: ModelParams) -> DenseOperator:
    """(q+u+1)A + xi(u+1)(B+C) + (q-u-1)D."""
    u = complex(u)
    c = double_row_components(u, params)
    return (
        (params.q + u + 1) * c.A
        + (params.xi * (u + 1)) * (c.B + c.C)
        + (params.q - u - 1) * c.D
    )


def hamiltonian(
    params: ModelParams,
    mode: Literal["direct", "from_transfer"] = "direct",
    step: float = 1e-3,
) -> DenseOperator:
    """Open XXX Hamiltonian with boundary fields.

    direct:        sum_j sigma_j . sigma_{j+1} + (1/p) sz_N + (1/q)(sz_1 + xi sx_1)
    from_transfer: d/du ln tau(u) at u=0, minus N (homogeneous point only);
                   4th-order central differences, tau(0) is a multiple of id.
    """
    N = params.N
    if mode == "direct":
        dim = 2 ** N
        h = np.zeros((dim, dim), dtype=complex)
        for j in range(1, N):
            for s in (SIGMA_X, SIGMA_Y, SIGMA_Z):
                h += embed_pair(kron(s, s), j, j + 1, N).entries
        h += params.h_N * embed_site(SIGMA_Z, N, N).entries
        h += params.h1_z * embed_site(SIGMA_Z, 1, N).entries
        h += params.h1_x * embed_site(SIGMA_X, 1, N).entries
        return DenseOperator(h, (2,) * N)
    if mode == "from_transfer":
        if not params.homogeneous:
            raise ValueError("hamiltonian(mode='from_transfer') needs theta_j = 0 for all j")
        tau0 = transfer_matrix(0.0, params).entries[0, 0]
        t = {k: transfer_matrix(k * step, params).entries for k in (-2, -1, 1, 2)}
        deriv = (t[-2] - 8 * t[-1] + 8 * t[1] - t[2]) / (12 * step)
        return DenseOperator(deriv / tau0 - N * np.eye(2 ** N), (2,) * N)
    raise ValueError(f"mode must be 'direct' or 'from_transfer', got {mode!r}")


def total_sz(N: int) -> DenseOperator:
    out = DenseOperator(np.zeros((2 ** N, 2 ** N)), (2,) * N)
    for j in range(1, N + 1):
        out = out + embed_site(SIGMA_Z, j, N)
    return out


# ---------------------------------------------------------------------------
# Reference state and vacuum functions
# ---------------------------------------------------------------------------

def vacuum_state(N: int) -> np.ndarray:
    """All spins up; basis index 0 under the Kronecker convention."""
    v = np.zeros(2 ** N, dtype=complex)
    v[0] = 1.0
    return v


def vacuum_a(u: complex, params: ModelParams) -> complex:
    """a(u) = (p+u) prod (u-theta_j+1)(u+theta_j+1)."""
    u = complex(u)
    th = params.theta_array
    return complex((params.p + u) * np.prod((u - th + 1) * (u + th + 1)))


def vacuum_d(u: complex, params: ModelParams) -> complex:
    """d(u) = 2u(p-u-1) prod (u-theta_j)(u+theta_j)."""
    u = complex(u)
    th = params.theta_array
    return complex(2 * u * (params.p - u - 1) * np.prod((u - th) * (u + th)))


def one_row_a(u: complex, params: ModelParams) -> complex:
    """a~(u) = prod (u-theta_j+1)."""
    return complex(np.prod(complex(u) - params.theta_array + 1))


def one_row_d(u: complex, params: ModelParams) -> complex:
    """d~(u) = prod (u-theta_j)."""
    return complex(np.prod(complex(u) - params.theta_array))


def identity_on_sites(N: int) -> DenseOperator:
    return DenseOperator(np.eye(2 ** N), (2,) * N)

