"""
core.bethe
Generalized T-Q relation, Bethe equations and their solvers.

For branch s = +1 / -1 and S = sqrt(1+xi^2) (principal branch):

    a_bar(u) = (2u+2)/(2u+1) (u + s p)(S u + s q) prod (u+theta+1)(u-theta+1)
    d_bar(u) = a_bar(-u-1)

    Lambda(u) = a_bar Q(u-1)Q1(u-1)/(Q Q2) + d_bar Q(u+1)Q2(u+1)/(Q Q1)
                + 2(1-S) (u(u+1))^k F(u)/(Q Q1 Q2)

with F(u) = prod (u+theta)(u-theta)(u+theta+1)(u-theta+1) and k = 2 only in
the odd-N extended sector. The Bethe equations are the zeros of

    Phi(u) = (2u+1) [Lambda Q Q1 Q2](u)

at every root, a polynomial in all roots (no denominators).
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field, replace
from itertools import combinations
from typing import Any, Dict, List, Literal, Optional, Sequence, Tuple, Union

import numpy as np
import scipy.linalg
from numpy.polynomial import Polynomial
from scipy.optimize import linear_sum_assignment

from .lattice import hamiltonian
from .modes import get_parametrization, lambda_count, sweep_sectors
from .newton import NewtonResult, damped_newton
from .params import ModelParams, complex_pair, params_to_dict
from .rng import complex_disk, rng_from
from .spectral import (
    FIT_RADIUS,
    ORACLE_MAX_SITES,
    LambdaCandidate,
    fit_nodes,
    fit_polynomials,
    lambda_from_oracle,
)

logger = logging.getLogger(__name__)

ROOT_GUARD = 1e-6
BAE_TOL = 1e-11
HOMOTOPY_BASE_SEED = 0
ORACLE_TRIES = 16

Strategy = Literal["multistart", "homotopy_xi", "oracle_seeded"]


class PoleError(ValueError):
    """Evaluation at a pole of the T-Q expression or the energy formula."""

    def __init__(self, message: str, *, point: Optional[complex] = None) -> None:
        super().__init__(message)
        self.point = point


def parse_branch(x: Union[int, str]) -> int:
    if isinstance(x, str):
        s = x.strip().lower()
        if s in ("+", "plus", "+1", "1"):
            return 1
        if s in ("-", "minus", "-1", "−"):
            return -1
        raise ValueError(f"branch must be '+' or '-', got {x!r}")
    if x in (1, -1):
        return int(x)
    raise ValueError(f"branch must be +1 or -1, got {x!r}")


def branch_label(branch: int) -> str:
    return "+" if branch > 0 else "-"


# ---------------------------------------------------------------------------
# Root sets and contexts
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class BetheRootSet:
    N: int
    branch: int
    M: int
    lam: Tuple[complex, ...] = ()
    mu: Tuple[complex, ...] = ()
    nu: Tuple[complex, ...] = ()

    def __post_init__(self) -> None:
        object.__setattr__(self, "branch", parse_branch(self.branch))
        object.__setattr__(self, "lam", tuple(complex(x) for x in self.lam))
        object.__setattr__(self, "mu", tuple(complex(x) for x in self.mu))
        object.__setattr__(self, "nu", tuple(complex(x) for x in self.nu))
        want = lambda_count(self.N, self.M)
        if len(self.lam) != want:
            raise ValueError(f"lam has {len(self.lam)} roots, sector N={self.N}, M={self.M} needs {want}")
        if len(self.mu) != self.M or len(self.nu) != self.M:
            raise ValueError(f"mu and nu need M={self.M} roots each, got {len(self.mu)} and {len(self.nu)}")

    @property
    def third_power(self) -> int:
        return get_parametrization(self.N, self.M).third_power

    @property
    def vector(self) -> np.ndarray:
        return np.array(self.lam + self.mu + self.nu, dtype=complex)

    @classmethod
    def from_vector(cls, N: int, branch: int, M: int, x: Sequence[complex]) -> "BetheRootSet":
        n = lambda_count(N, M)
        x = [complex(v) for v in x]
        return cls(N=N, branch=branch, M=M, lam=tuple(x[:n]), mu=tuple(x[n:n + M]), nu=tuple(x[n + M:]))

    def canonical(self) -> "BetheRootSet":
        """Representative modulo permutations and the Q-function symmetries.

        lambda -> -lambda-1 leaves Q invariant; (mu, nu) -> (-nu-1, -mu-1)
        leaves Q1 and Q2 invariant.
        """
        lam = tuple(sorted((_half_plane(x) for x in self.lam), key=_root_key))
        mu_a, nu_a = _sorted(self.mu), _sorted(self.nu)
        mu_b, nu_b = _sorted(-x - 1 for x in self.nu), _sorted(-x - 1 for x in self.mu)
        if [_root_key(x) for x in mu_b + nu_b] < [_root_key(x) for x in mu_a + nu_a]:
            mu_a, nu_a = mu_b, nu_b
        return replace(self, lam=lam, mu=tuple(mu_a), nu=tuple(nu_a))

    def to_dict(self) -> Dict[str, Any]:
        return {
            "branch": branch_label(self.branch),
            "M": self.M,
            "lambda": [complex_pair(x) for x in self.lam],
            "mu": [complex_pair(x) for x in self.mu],
            "nu": [complex_pair(x) for x in self.nu],
        }


def _half_plane(x: complex) -> complex:
    y = -x - 1
    if x.real > y.real or (x.real == y.real and x.imag >= y.imag):
        return x
    return y


def _root_key(x: complex) -> Tuple[float, float]:
    return (round(x.real, 8), round(x.imag, 8))


def _sorted(xs: Any) -> List[complex]:
    return sorted((complex(x) for x in xs), key=_root_key)


def root_set_distance(a: BetheRootSet, b: BetheRootSet) -> float:
    if (a.N, a.branch, a.M) != (b.N, b.branch, b.M):
        return float("inf")
    va, vb = a.canonical().vector, b.canonical().vector
    if va.size == 0:
        return 0.0
    return float(np.max(np.abs(va - vb) / np.maximum(1.0, np.abs(va))))


@dataclass(frozen=True)
class TQContext:
    params: ModelParams
    branch: int
    sqrt1xi2: complex
    homogeneous: bool

    @property
    def S(self) -> complex:
        return self.sqrt1xi2

    @property
    def tied(self) -> bool:
        return self.params.xi == 0


def make_context(params: ModelParams, branch: Union[int, str]) -> TQContext:
    s = complex(np.sqrt(complex(1 + params.xi ** 2)))
    return TQContext(params=params, branch=parse_branch(branch), sqrt1xi2=s, homogeneous=params.homogeneous)


# ---------------------------------------------------------------------------
# T-Q building blocks
# ---------------------------------------------------------------------------

def _prod_factors(u: Any, roots: np.ndarray, shift: float) -> Any:
    """prod_j (u - r_j)(u + r_j' + 1) style products over root pairs."""
    out = np.ones_like(np.asarray(u, dtype=complex))
    for r in roots:
        out = out * (u - r) * (u + r + shift)
    return out


def _q(u: Any, lam: np.ndarray) -> Any:
    return _prod_factors(u, lam, 1.0)


def _q12(u: Any, first: np.ndarray, second: np.ndarray) -> Any:
    out = np.ones_like(np.asarray(u, dtype=complex))
    for a, b in zip(first, second):
        out = out * (u - a) * (u + b + 1)
    return out


def eval_q_functions(u: complex, roots: BetheRootSet) -> Tuple[complex, complex, complex]:
    """Q(u), Q1(u), Q2(u)."""
    lam = np.asarray(roots.lam, dtype=complex)
    mu = np.asarray(roots.mu, dtype=complex)
    nu = np.asarray(roots.nu, dtype=complex)
    u = complex(u)
    return complex(_q(u, lam)), complex(_q12(u, mu, nu)), complex(_q12(u, nu, mu))


def a_bar_cleared(u: Any, ctx: TQContext) -> Any:
    """(2u+1) a_bar(u)."""
    s, S, p = ctx.branch, ctx.S, ctx.params
    th = p.theta_array
    prod = np.ones_like(np.asarray(u, dtype=complex))
    for t in th:
        prod = prod * (u + t + 1) * (u - t + 1)
    return (2 * u + 2) * (u + s * p.p) * (S * u + s * p.q) * prod


def d_bar_cleared(u: Any, ctx: TQContext) -> Any:
    """(2u+1) d_bar(u)."""
    s, S, p = ctx.branch, ctx.S, ctx.params
    th = p.theta_array
    prod = np.ones_like(np.asarray(u, dtype=complex))
    for t in th:
        prod = prod * (u + t) * (u - t)
    return 2 * u * (u - s * p.p + 1) * (S * (u + 1) - s * p.q) * prod


def a_bar(u: complex, ctx: TQContext) -> complex:
    u = complex(u)
    if abs(2 * u + 1) == 0:
        raise PoleError("a_bar has a pole at u = -1/2", point=u)
    return complex(a_bar_cleared(u, ctx) / (2 * u + 1))


def d_bar(u: complex, ctx: TQContext) -> complex:
    u = complex(u)
    if abs(2 * u + 1) == 0:
        raise PoleError("d_bar has a pole at u = -1/2", point=u)
    return complex(d_bar_cleared(u, ctx) / (2 * u + 1))


def f_product(u: Any, params: ModelParams) -> Any:
    """prod (u+theta)(u-theta)(u+theta+1)(u-theta+1); u^2N (u+1)^2N when homogeneous."""
    out = np.ones_like(np.asarray(u, dtype=complex))
    for t in params.theta_array:
        out = out * (u + t) * (u - t) * (u + t + 1) * (u - t + 1)
    return out


def _terms(u: Any, lam: np.ndarray, mu: np.ndarray, nu: np.ndarray, ctx: TQContext, power: int) -> Tuple[Any, Any, Any]:
    """The three cleared T-Q terms at u; their sum is Phi(u)."""
    t1 = a_bar_cleared(u, ctx) * _q(u - 1, lam) * _q12(u - 1, mu, nu) * _q12(u, mu, nu)
    t2 = d_bar_cleared(u, ctx) * _q(u + 1, lam) * _q12(u + 1, nu, mu) * _q12(u, nu, mu)
    t3 = (2 * u + 1) * 2 * (1 - ctx.S) * (u * (u + 1)) ** power * f_product(u, ctx.params)
    return t1, t2, t3


def tq_polynomial_terms(u: Any, roots: BetheRootSet, ctx: TQContext) -> Tuple[Any, Any, Any]:
    lam, mu, nu = (np.asarray(f, dtype=complex) for f in (roots.lam, roots.mu, roots.nu))
    return _terms(u, lam, mu, nu, ctx, roots.third_power)


def third_term(u: complex, roots: BetheRootSet, ctx: TQContext) -> complex:
    """The inhomogeneous contribution to Lambda(u); exactly zero at xi = 0."""
    if ctx.S == 1:
        return 0j
    q, q1, q2 = eval_q_functions(u, roots)
    u = complex(u)
    return complex(2 * (1 - ctx.S) * (u * (u + 1)) ** roots.third_power * f_product(u, ctx.params) / (q * q1 * q2))


def eval_tq_lambda(u: complex, roots: BetheRootSet, ctx: TQContext) -> complex:
    """Lambda(u) from the T-Q relation."""
    u = complex(u)
    q, q1, q2 = eval_q_functions(u, roots)
    den = (2 * u + 1) * q * q1 * q2
    t1, t2, t3 = tq_polynomial_terms(u, roots, ctx)
    if abs(den) <= 1e-15 * (abs(t1) + abs(t2) + abs(t3)):
        raise PoleError(f"T-Q expression evaluated at a zero of (2u+1) Q Q1 Q2 (u={u})", point=u)
    return complex((t1 + t2 + t3) / den)


def bae_residuals(roots: BetheRootSet, ctx: TQContext) -> np.ndarray:
    """Cleared Bethe equations: Phi at each lambda_j, mu_j, nu_j (in that order)."""
    lam, mu, nu = (np.asarray(f, dtype=complex) for f in (roots.lam, roots.mu, roots.nu))
    x = roots.vector
    t1, t2, t3 = _terms(x, lam, mu, nu, ctx, roots.third_power)
    return np.asarray(t1 + t2 + t3, dtype=complex)


def bae_relative_residuals(roots: BetheRootSet, ctx: TQContext) -> np.ndarray:
    """|Phi| over |t1| + |t2| + |t3| at each root."""
    lam, mu, nu = (np.asarray(f, dtype=complex) for f in (roots.lam, roots.mu, roots.nu))
    x = roots.vector
    t1, t2, t3 = _terms(x, lam, mu, nu, ctx, roots.third_power)
    scale = np.abs(t1) + np.abs(t2) + np.abs(t3)
    return np.abs(t1 + t2 + t3) / np.maximum(scale, 1e-300)


def bae_residuals_printed(roots: BetheRootSet, ctx: TQContext) -> np.ndarray:
    """Bethe equations in ratio form (left side minus right side).

    lambda_j: -a/d - Q(x+1)Q2(x)Q2(x+1)/(Q(x-1)Q1(x)Q1(x-1)) - rhs(x)/(Q(x-1)Q1(x)Q1(x-1))
    mu_j:     rhs(x)/(Q(x+1)Q2(x)Q2(x+1)) + 1
    nu_j:     rhs_nu(x)/(Q(x-1)Q1(x)Q1(x-1)) + 1
    """
    s, S, p = ctx.branch, ctx.S, ctx.params
    th = p.theta_array
    k = roots.third_power

    def rhs(x: complex) -> complex:
        extra = (x * (x + 1)) ** (k - 1)
        return complex(
            (1 - S) * (x + 1) * (2 * x + 1) * np.prod((x + th + 1) * (x - th + 1)) * extra
            / ((x - s * p.p + 1) * (S * (x + 1) - s * p.q))
        )

    def rhs_nu(x: complex) -> complex:
        extra = (x * (x + 1)) ** (k - 1)
        return complex(
            (1 - S) * x * (2 * x + 1) * np.prod((x + th) * (x - th)) * extra
            / ((x + s * p.p) * (S * x + s * p.q))
        )

    out: List[complex] = []
    for x in roots.lam:
        qm, q0, qp = (eval_q_functions(x + k, roots) for k in (-1, 0, 1))
        den = qm[0] * q0[1] * qm[1]
        out.append(-a_bar(x, ctx) / d_bar(x, ctx) - qp[0] * q0[2] * qp[2] / den - rhs(x) / den)
    for x in roots.mu:
        q0, qp = eval_q_functions(x, roots), eval_q_functions(x + 1, roots)
        out.append(rhs(x) / (qp[0] * q0[2] * qp[2]) + 1)
    for x in roots.nu:
        qm, q0 = eval_q_functions(x - 1, roots), eval_q_functions(x, roots)
        out.append(rhs_nu(x) / (qm[0] * q0[1] * qm[1]) + 1)
    return np.asarray(out, dtype=complex)


# ---------------------------------------------------------------------------
# Ordinary (diagonal boundary) Bethe equations
# ---------------------------------------------------------------------------

def ordinary_residuals(qbar_roots: np.ndarray, ctx: TQContext) -> np.ndarray:
    """(2x+1)[a_bar Qbar(x-1) + d_bar Qbar(x+1)] at each root of Qbar = prod (u-x)(u+x+1)."""
    x = np.asarray(qbar_roots, dtype=complex)
    return a_bar_cleared(x, ctx) * _q(x - 1, x) + d_bar_cleared(x, ctx) * _q(x + 1, x)


def _ordinary_measure(ctx: TQContext) -> Any:
    def measure(x: np.ndarray, r: np.ndarray) -> float:
        if x.size == 0:
            return 0.0
        scale = np.abs(a_bar_cleared(x, ctx) * _q(x - 1, x)) + np.abs(d_bar_cleared(x, ctx) * _q(x + 1, x))
        return float(np.max(np.abs(r) / np.maximum(scale, 1e-300)))
    return measure


def tie_roots(qbar_roots: Sequence[complex], N: int, branch: int, M: int, split: Sequence[int]) -> BetheRootSet:
    """Root set with mu = nu taken from `split` indices of Qbar and lambda from the rest."""
    xs = [complex(x) for x in qbar_roots]
    mu = [xs[i] for i in split]
    lam = [x for i, x in enumerate(xs) if i not in set(split)]
    return BetheRootSet(N=N, branch=branch, M=M, lam=tuple(lam), mu=tuple(mu), nu=tuple(mu))


# ---------------------------------------------------------------------------
# Admissibility
# ---------------------------------------------------------------------------

def admissibility(roots: BetheRootSet, ctx: TQContext) -> Tuple[bool, str]:
    """Reject spurious zeros of the cleared equations.

    Roots at 0, -1 or -1/2, coinciding roots (mirror images included, mu = nu
    allowed only at xi = 0), and root sets whose Lambda is not a polynomial
    of degree 2N+2 are rejected.
    """
    xs = roots.vector
    for x in xs:
        for bad in (0.0, -1.0, -0.5):
            if abs(x - bad) < ROOT_GUARD:
                return False, f"root {x:.6g} at the spurious point {bad}"
    pool = [(x, "lam") for x in roots.lam]
    pool += [(x, "mu") for x in roots.mu] + [(x, "nu") for x in roots.nu]
    for (a, fa), (b, fb) in combinations(pool, 2):
        if ctx.tied and {fa, fb} == {"mu", "nu"}:
            continue
        if abs(a - b) < ROOT_GUARD or (fa == fb == "lam" and abs(a + b + 1) < ROOT_GUARD):
            return False, f"roots {a:.6g} and {b:.6g} coincide"
    ok, why = _polynomial_check(roots, ctx)
    return ok, why


def _polynomial_check(roots: BetheRootSet, ctx: TQContext, rtol: float = 1e-6) -> Tuple[bool, str]:
    N = ctx.params.N
    for radius in (FIT_RADIUS, 2.3, 3.1):
        nodes = fit_nodes(N, radius=radius)
        off_nodes = np.array([0.17 + 0.11j, -0.71 + 0.23j, 0.4 - 0.6j])
        try:
            vals = np.array([eval_tq_lambda(u, roots, ctx) for u in nodes])
            direct = np.array([eval_tq_lambda(u, roots, ctx) for u in off_nodes])
        except PoleError:
            continue
        poly = fit_polynomials(nodes, vals, 2 * N + 2, radius=radius)[0]
        fitted = poly(off_nodes)
        err = float(np.max(np.abs(fitted - direct))) / max(float(np.max(np.abs(direct))), 1e-300)
        if err > rtol:
            return False, f"Lambda is not a polynomial of degree {2 * N + 2} (fit error {err:.2e})"
        return True, ""
    return False, "Lambda could not be sampled away from Q zeros"


# ---------------------------------------------------------------------------
# Energy
# ---------------------------------------------------------------------------

def energy_from_roots(roots: BetheRootSet, ctx: TQContext) -> complex:
    """E = 2 sum 1/(l(l+1)) + 2 sum (1/nu - 1/(mu+1)) + N - 1 + s(1/p + S/q)."""
    if not ctx.homogeneous:
        raise ValueError("energy_from_roots needs a homogeneous context (all theta_j = 0)")
    p = ctx.params
    e = complex(p.N - 1) + ctx.branch * (1 / p.p + ctx.S / p.q)
    for x in roots.lam:
        if abs(x) < ROOT_GUARD or abs(x + 1) < ROOT_GUARD:
            raise PoleError(f"lambda root {x} sits on a pole of the energy (0 or -1)", point=x)
        e += 2 / (x * (x + 1))
    for x in roots.nu:
        if abs(x) < ROOT_GUARD:
            raise PoleError(f"nu root {x} sits on the energy pole 0", point=x)
        e += 2 / x
    for x in roots.mu:
        if abs(x + 1) < ROOT_GUARD:
            raise PoleError(f"mu root {x} sits on the energy pole -1", point=x)
        e -= 2 / (x + 1)
    return complex(e)


def energy_by_log_derivative(roots: BetheRootSet, ctx: TQContext, step: float = 1e-4) -> complex:
    """Lambda'(0)/Lambda(0) - N with 4th-order central differences."""
    f = {k: eval_tq_lambda(k * step, roots, ctx) for k in (-2, -1, 0, 1, 2)}
    deriv = (f[-2] - 8 * f[-1] + 8 * f[1] - f[2]) / (12 * step)
    return complex(deriv / f[0] - ctx.params.N)


# ---------------------------------------------------------------------------
# Solvers
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class TraceStep:
    xi: complex
    measure: float
    energy: Optional[complex] = None

    def to_dict(self) -> Dict[str, Any]:
        return {
            "xi": complex_pair(self.xi),
            "measure": self.measure,
            "energy": None if self.energy is None else complex_pair(self.energy),
        }


@dataclass(frozen=True)
class HomotopyTrace:
    start: BetheRootSet
    steps: List[TraceStep]
    end: Optional[BetheRootSet]
    reason: str = ""

    @property
    def completed(self) -> bool:
        return self.end is not None

    def to_dict(self) -> Dict[str, Any]:
        return {
            "start": self.start.to_dict(),
            "end": None if self.end is None else self.end.to_dict(),
            "steps": [s.to_dict() for s in self.steps],
            "reason": self.reason,
        }


@dataclass(frozen=True)
class BaeSolve:
    solutions: List[BetheRootSet]
    strategy: str
    attempted: int
    converged: int
    rejected: int
    failures: List[Dict[str, Any]] = field(default_factory=list)
    traces: List[HomotopyTrace] = field(default_factory=list)


def _newton_on_roots(template: BetheRootSet, ctx: TQContext, x0: np.ndarray, tol: float, max_iter: int) -> NewtonResult:
    N, branch, M = template.N, template.branch, template.M

    def fun(x: np.ndarray) -> np.ndarray:
        return bae_residuals(BetheRootSet.from_vector(N, branch, M, x), ctx)

    def measure(x: np.ndarray, _: np.ndarray) -> float:
        rel = bae_relative_residuals(BetheRootSet.from_vector(N, branch, M, x), ctx)
        return float(np.max(rel)) if rel.size else 0.0

    return damped_newton(fun, x0, measure=measure, tol=tol, max_iter=max_iter)


def _accept(
    candidate: BetheRootSet,
    ctx: TQContext,
    found: List[BetheRootSet],
    dedup_tol: float = 1e-7,
) -> Tuple[bool, str]:
    ok, why = admissibility(candidate, ctx)
    if not ok:
        return False, why
    canon = candidate.canonical()
    if any(root_set_distance(canon, f) < dedup_tol for f in found):
        return False, "duplicate"
    found.append(canon)
    return True, ""


def solve_tied(
    ctx: TQContext,
    M: int,
    seed_count: int,
    rng_seed: int,
    *,
    tol: float = BAE_TOL,
    max_iter: int = 200,
) -> BaeSolve:
    """xi = 0: mu and nu merge and the ordinary equations for Qbar = Q Q1 hold.

    Returns root sets with mu = nu; lambda gets the first roots of each
    canonical Qbar solution.
    """
    N, branch = ctx.params.N, ctx.branch
    ctx0 = ctx if ctx.tied else make_context(ctx.params.with_xi(0.0), branch)
    n = lambda_count(N, M) + M
    rng = rng_from("bae-tied", N, M, branch, base_seed=rng_seed)
    measure = _ordinary_measure(ctx0)
    found: List[BetheRootSet] = []
    failures: List[Dict[str, Any]] = []
    converged = rejected = 0
    for idx in range(seed_count):
        x0 = complex_disk(rng, n, radius=float(N))
        res = damped_newton(lambda x: ordinary_residuals(x, ctx0), x0, measure=measure, tol=tol, max_iter=max_iter)
        if not res.converged:
            failures.append({"seed": idx, "reason": res.reason, "measure": res.measure})
            continue
        converged += 1
        xs = sorted((_half_plane(complex(x)) for x in res.x), key=_root_key)
        cand = tie_roots(xs, N, branch, M, split=range(lambda_count(N, M), n))
        ok, why = _accept(cand, ctx0, found)
        if not ok and why != "duplicate":
            rejected += 1
            logger.debug("tied seed %d rejected: %s", idx, why)
    return BaeSolve(found, "tied", seed_count, converged, rejected, failures[:20])


def split_scale(ctx: TQContext) -> complex:
    """eps = 2(1 - S), the coefficient of the inhomogeneous T-Q term."""
    return complex(2 * (1 - ctx.S))


def _q12_drop(u: complex, first: np.ndarray, second: np.ndarray, j: int) -> complex:
    """prod_l (u - first_l)(u + second_l + 1) with the factor (u - first_j) left out."""
    out = u + second[j] + 1
    for l, (a, b) in enumerate(zip(first, second)):
        if l != j:
            out = out * (u - a) * (u + b + 1)
    return complex(out)


def _inhomogeneous_core(u: Any, ctx: TQContext, power: int) -> Any:
    """(2u+1) (u(u+1))^power F(u): the third cleared term divided by eps."""
    return (2 * u + 1) * (u * (u + 1)) ** power * f_product(u, ctx.params)


class _RootChart:
    """Plain coordinates (lambda, mu, nu) for xi continuation."""

    def __init__(self, template: BetheRootSet) -> None:
        self.N, self.branch, self.M = template.N, template.branch, template.M
        self.power = template.third_power
        self.L = lambda_count(self.N, self.M)

    def encode(self, roots: BetheRootSet, ctx: TQContext) -> np.ndarray:
        return roots.vector

    def roots(self, y: np.ndarray, ctx: TQContext) -> BetheRootSet:
        return BetheRootSet.from_vector(self.N, self.branch, self.M, y)

    def parts(self, y: np.ndarray, ctx: TQContext) -> Tuple[np.ndarray, np.ndarray]:
        """(residual, scale) per equation."""
        r = self.roots(y, ctx)
        lam, mu, nu = (np.asarray(f, dtype=complex) for f in (r.lam, r.mu, r.nu))
        t1, t2, t3 = _terms(r.vector, lam, mu, nu, ctx, self.power)
        return t1 + t2 + t3, np.abs(t1) + np.abs(t2) + np.abs(t3)

    def residual(self, y: np.ndarray, ctx: TQContext) -> np.ndarray:
        return self.parts(y, ctx)[0]

    def measure(self, y: np.ndarray, ctx: TQContext) -> float:
        r, scale = self.parts(y, ctx)
        if r.size == 0:
            return 0.0
        return float(np.max(np.abs(r) / np.maximum(scale, 1e-300)))


class _SplitChart(_RootChart):
    """Coordinates (lambda, mu, w) with nu = mu + eps w.

    On mu = nu the cleared mu_j and nu_j equations are eps times
    -w_j A_j + G(mu_j) and w_j B_j + G(nu_j); the residuals here are those
    regular factors, so xi = 0 is not a singular point of the system.
    """

    def _lam_mu_nu(self, y: np.ndarray, ctx: TQContext) -> Tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray]:
        y = np.asarray(y, dtype=complex)
        L, M = self.L, self.M
        lam, mu, w = y[:L], y[L:L + M], y[L + M:]
        return lam, mu, mu + split_scale(ctx) * w, w

    def _factors(self, lam: np.ndarray, mu: np.ndarray, nu: np.ndarray, ctx: TQContext) -> Tuple[np.ndarray, np.ndarray]:
        """A_j and B_j: the mu/nu equations with the vanishing root difference removed."""
        a = np.array([
            d_bar_cleared(x, ctx) * _q(x + 1, lam) * _q12(x + 1, nu, mu) * _q12_drop(x, nu, mu, j)
            for j, x in enumerate(mu)
        ], dtype=complex)
        b = np.array([
            a_bar_cleared(x, ctx) * _q(x - 1, lam) * _q12(x - 1, mu, nu) * _q12_drop(x, mu, nu, j)
            for j, x in enumerate(nu)
        ], dtype=complex)
        return a, b

    def encode(self, roots: BetheRootSet, ctx: TQContext) -> np.ndarray:
        lam, mu, nu = (np.asarray(f, dtype=complex) for f in (roots.lam, roots.mu, roots.nu))
        eps = split_scale(ctx)
        if eps != 0:
            w = (nu - mu) / eps
        else:
            a, _ = self._factors(lam, mu, nu, ctx)
            if np.any(a == 0):
                raise PoleError("tied start has a vanishing split factor", point=complex(mu[int(np.argmin(np.abs(a)))]))
            w = _inhomogeneous_core(mu, ctx, self.power) / a
        return np.concatenate([lam, mu, w])

    def roots(self, y: np.ndarray, ctx: TQContext) -> BetheRootSet:
        lam, mu, nu, _ = self._lam_mu_nu(y, ctx)
        return BetheRootSet(N=self.N, branch=self.branch, M=self.M, lam=tuple(lam), mu=tuple(mu), nu=tuple(nu))

    def parts(self, y: np.ndarray, ctx: TQContext) -> Tuple[np.ndarray, np.ndarray]:
        lam, mu, nu, w = self._lam_mu_nu(y, ctx)
        t1, t2, t3 = _terms(lam, lam, mu, nu, ctx, self.power)
        a, b = self._factors(lam, mu, nu, ctx)
        g_mu = _inhomogeneous_core(mu, ctx, self.power)
        g_nu = _inhomogeneous_core(nu, ctx, self.power)
        res = np.concatenate([t1 + t2 + t3, -w * a + g_mu, w * b + g_nu])
        scale = np.concatenate([
            np.abs(t1) + np.abs(t2) + np.abs(t3),
            np.abs(w * a) + np.abs(g_mu),
            np.abs(w * b) + np.abs(g_nu),
        ])
        return res, scale


def _chart_for(start: BetheRootSet) -> _RootChart:
    if start.M and start.mu == start.nu:
        return _SplitChart(start)
    return _RootChart(start)


def continue_in_xi(
    start: BetheRootSet,
    params: ModelParams,
    xi_path: Sequence[complex],
    *,
    tol: float = BAE_TOL,
    max_iter: int = 200,
    max_bisections: int = 6,
) -> HomotopyTrace:
    """Natural-parameter continuation of a root set along xi_path[1:].

    `start` must solve the equations at xi_path[0]. A start with mu = nu (the
    xi = 0 tie) is carried in split coordinates. A failed step is bisected
    up to `max_bisections` times before the chain is abandoned; the end point
    is polished on the cleared equations.
    """
    branch = start.branch
    chart = _chart_for(start)
    steps: List[TraceStep] = []

    def newton_at(xi: complex, y0: np.ndarray) -> Tuple[TQContext, NewtonResult]:
        ctx = make_context(params.with_xi(xi), branch)
        res = damped_newton(
            lambda y: chart.residual(y, ctx), y0,
            measure=lambda y, _r: chart.measure(y, ctx), tol=tol, max_iter=max_iter,
        )
        return ctx, res

    def record(ctx: TQContext, m: float, roots: BetheRootSet) -> None:
        energy = None
        if ctx.homogeneous:
            try:
                energy = energy_from_roots(roots, ctx)
            except PoleError:
                energy = None
        steps.append(TraceStep(xi=complex(ctx.params.xi), measure=m, energy=energy))

    def abandon(reason: str) -> HomotopyTrace:
        logger.warning("xi continuation abandoned: %s", reason)
        return HomotopyTrace(start=start, steps=steps, end=None, reason=reason)

    current = complex(xi_path[0])
    try:
        y0 = chart.encode(start, make_context(params.with_xi(current), branch))
    except PoleError as e:
        return abandon(str(e))
    ctx, res = newton_at(current, y0)
    if not res.converged:
        return abandon(f"start does not solve the equations at xi={current} ({res.reason})")
    y = res.x
    record(ctx, res.measure, chart.roots(y, ctx))

    for target in xi_path[1:]:
        pending = [complex(target)]
        depth = 0
        while pending:
            goal = pending[-1]
            ctx, res = newton_at(goal, y)
            if res.converged:
                y = res.x
                current = goal
                pending.pop()
                record(ctx, res.measure, chart.roots(y, ctx))
                continue
            depth += 1
            if depth > max_bisections:
                return abandon(f"no convergence near xi={goal} ({res.reason})")
            pending.append((current + goal) / 2)

    end = chart.roots(y, ctx)
    polished = _newton_on_roots(end, ctx, end.vector, tol, max_iter)
    if not polished.converged:
        return abandon(f"end point polish failed ({polished.reason})")
    end = BetheRootSet.from_vector(start.N, branch, start.M, polished.x)
    return HomotopyTrace(start=start, steps=steps, end=end)


def _homotopy(ctx: TQContext, M: int, seed_count: int, xi_steps: int, tol: float, max_iter: int) -> BaeSolve:
    N, branch = ctx.params.N, ctx.branch
    tied = solve_tied(ctx, M, max(seed_count, 32), HOMOTOPY_BASE_SEED, tol=tol, max_iter=max_iter)
    if ctx.tied:
        return replace(tied, strategy="homotopy_xi")

    xi_path = [ctx.params.xi * k / xi_steps for k in range(xi_steps + 1)]
    found: List[BetheRootSet] = []
    traces: List[HomotopyTrace] = []
    failures: List[Dict[str, Any]] = []
    attempted = converged = rejected = 0
    for t_idx, tied_set in enumerate(tied.solutions):
        # every M-subset of the Qbar roots, real or complex, becomes the (mu, nu) pairs
        qbar = list(tied_set.lam) + list(tied_set.mu)
        for split in combinations(range(len(qbar)), M):
            attempted += 1
            start = tie_roots(qbar, N, branch, M, split)
            trace = continue_in_xi(start, ctx.params, xi_path, tol=tol, max_iter=max_iter)
            traces.append(trace)
            if trace.end is None:
                failures.append({"tied_solution": t_idx, "split": list(split), "reason": trace.reason})
                continue
            converged += 1
            ok, why = _accept(trace.end, ctx, found)
            if not ok and why != "duplicate":
                rejected += 1
                logger.debug("homotopy chain %d/%s rejected: %s", t_idx, split, why)
    return BaeSolve(found, "homotopy_xi", attempted, converged, rejected, failures[:20], traces)


def _multistart(ctx: TQContext, M: int, seed_count: int, rng_seed: int, tol: float, max_iter: int) -> BaeSolve:
    if ctx.tied:
        solved = solve_tied(ctx, M, seed_count, rng_seed, tol=tol, max_iter=max_iter)
        return replace(solved, strategy="multistart")
    N, branch = ctx.params.N, ctx.branch
    template = BetheRootSet(N=N, branch=branch, M=M, lam=(0j,) * lambda_count(N, M), mu=(0j,) * M, nu=(0j,) * M)
    n = template.vector.size
    rng = rng_from("bae-multistart", N, M, branch, base_seed=rng_seed)
    found: List[BetheRootSet] = []
    failures: List[Dict[str, Any]] = []
    converged = rejected = 0
    for idx in range(seed_count):
        x0 = complex_disk(rng, n, radius=float(N))
        res = _newton_on_roots(template, ctx, x0, tol, max_iter)
        if not res.converged:
            failures.append({"seed": idx, "reason": res.reason, "measure": res.measure})
            continue
        converged += 1
        ok, why = _accept(BetheRootSet.from_vector(N, branch, M, res.x), ctx, found)
        if not ok and why != "duplicate":
            rejected += 1
            logger.debug("seed %d rejected: %s", idx, why)
    return BaeSolve(found, "multistart", seed_count, converged, rejected, failures[:20])


def roots_from_lambda(
    cand: LambdaCandidate,
    ctx: TQContext,
    *,
    consistency_tol: float = 1e-8,
) -> Optional[np.ndarray]:
    """M = 0: solve the T-Q relation linearly for Q(u) = sum q_k v^k + v^N.

    Returns the lambda roots, or None when Lambda has no M = 0 representation
    in this branch.
    """
    N = ctx.params.N
    u = Polynomial([0.0, 1.0])
    v = u * (u + 1)
    vm = u * (u - 1)
    vp = (u + 1) * (u + 2)
    nodes = np.linspace(-2.0, 2.0, 4 * N + 12) + 0.37j
    lam_vals = cand.poly(nodes)
    aa = a_bar_cleared(nodes, ctx)
    dd = d_bar_cleared(nodes, ctx)
    w = (2 * nodes + 1) * lam_vals
    cols = [w * v(nodes) ** k - aa * vm(nodes) ** k - dd * vp(nodes) ** k for k in range(N + 1)]
    third = (2 * nodes + 1) * 2 * (1 - ctx.S) * nodes * (nodes + 1) * f_product(nodes, ctx.params)
    A = np.stack(cols[:N], axis=1)
    b = third - cols[N]
    qk, *_ = np.linalg.lstsq(A, b, rcond=None)
    miss = float(np.linalg.norm(A @ qk - b)) / max(float(np.linalg.norm(b)), 1e-300)
    if miss > consistency_tol:
        return None
    vroots = np.polynomial.polynomial.polyroots(np.concatenate([qk, [1.0]]))
    return (-1 + np.sqrt(1 + 4 * np.asarray(vroots, dtype=complex))) / 2


class _IdentityFit:
    """Root set for a fixed Lambda: (2u+1) Lambda Q Q1 Q2 = t1 + t2 + t3 on nodes.

    The identity is polynomial of degree 2N+3+2L+4M in u, so a few more nodes
    than that make it exact; the system is solved by Gauss-Newton.
    """

    def __init__(self, cand: LambdaCandidate, ctx: TQContext, M: int) -> None:
        N = ctx.params.N
        self.ctx, self.M = ctx, M
        self.L = lambda_count(N, M)
        self.power = get_parametrization(N, M).third_power
        self.nodes = fit_nodes(N, count=2 * N + 2 * self.L + 4 * M + 8)
        self.weight = (2 * self.nodes + 1) * cand.poly(self.nodes)

    def _sides(self, x: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
        L, M, u = self.L, self.M, self.nodes
        lam, mu, nu = x[:L], x[L:L + M], x[L + M:]
        lhs = self.weight * _q(u, lam) * _q12(u, mu, nu) * _q12(u, nu, mu)
        t1, t2, t3 = _terms(u, lam, mu, nu, self.ctx, self.power)
        return lhs, t1 + t2 + t3

    def residual(self, x: np.ndarray) -> np.ndarray:
        lhs, rhs = self._sides(np.asarray(x, dtype=complex))
        return lhs - rhs

    def measure(self, x: np.ndarray, r: np.ndarray) -> float:
        lhs, _ = self._sides(np.asarray(x, dtype=complex))
        return float(np.max(np.abs(r))) / max(float(np.max(np.abs(lhs))), 1e-300)


def _oracle_seeded(
    ctx: TQContext,
    M: int,
    seed_count: int,
    rng_seed: int,
    tol: float,
    max_iter: int,
) -> BaeSolve:
    """Root sets seeded from the exact eigenvalues of tau(u).

    M = 0 solves the T-Q relation linearly for Q; M > 0 fits the roots to the
    T-Q identity from up to ORACLE_TRIES random starts per eigenvalue. Every
    seed is then polished on the cleared Bethe equations.
    """
    N, branch = ctx.params.N, ctx.branch
    template = BetheRootSet(
        N=N, branch=branch, M=M, lam=(0j,) * lambda_count(N, M), mu=(0j,) * M, nu=(0j,) * M,
    )
    found: List[BetheRootSet] = []
    failures: List[Dict[str, Any]] = []
    attempted = converged = rejected = 0
    for idx, cand in enumerate(lambda_from_oracle(ctx.params)):
        if M == 0:
            attempted += 1
            lam = roots_from_lambda(cand, ctx)
            if lam is None:
                failures.append({"oracle_index": idx, "reason": "no M=0 representation in this branch"})
                continue
            starts = [lam]
        else:
            fit = _IdentityFit(cand, ctx, M)
            rng = rng_from("bae-oracle", N, M, branch, idx, base_seed=rng_seed)
            starts = []
            for _ in range(min(seed_count, ORACLE_TRIES)):
                x0 = complex_disk(rng, template.vector.size, radius=float(N))
                res = damped_newton(fit.residual, x0, measure=fit.measure, tol=1e-10, max_iter=max_iter)
                if res.converged:
                    starts.append(res.x)
                    break
            attempted += 1
            if not starts:
                failures.append({"oracle_index": idx, "reason": f"no {M}-pair root set fits this eigenvalue"})
                continue
        res = _newton_on_roots(template, ctx, starts[0], tol, max_iter)
        if not res.converged:
            failures.append({"oracle_index": idx, "reason": res.reason, "measure": res.measure})
            continue
        converged += 1
        ok, why = _accept(BetheRootSet.from_vector(N, branch, M, res.x), ctx, found)
        if not ok and why != "duplicate":
            rejected += 1
            logger.debug("oracle eigenvalue %d rejected: %s", idx, why)
    return BaeSolve(found, "oracle_seeded", attempted, converged, rejected, failures[:20])


def solve_bae(
    ctx: TQContext,
    M: int,
    strategy: Strategy = "homotopy_xi",
    seed_count: int = 64,
    rng_seed: int = 0,
    *,
    xi_steps: int = 20,
    tol: float = BAE_TOL,
    max_iter: int = 200,
) -> BaeSolve:
    """Converged, admissible, deduplicated root sets for one branch and sector.

    An empty result is not an error; it is logged and the caller may raise
    seed_count or switch strategy.
    """
    get_parametrization(ctx.params.N, M)
    if strategy == "multistart":
        solved = _multistart(ctx, M, seed_count, rng_seed, tol, max_iter)
    elif strategy == "homotopy_xi":
        if not 10 <= xi_steps <= 50:
            raise ValueError(f"xi_steps must be in 10..50, got {xi_steps}")
        solved = _homotopy(ctx, M, seed_count, xi_steps, tol, max_iter)
    elif strategy == "oracle_seeded":
        solved = _oracle_seeded(ctx, M, seed_count, rng_seed, tol, max_iter)
    else:
        raise ValueError(f"unknown strategy {strategy!r}")
    if not solved.solutions:
        logger.warning(
            "%s found no admissible solution (N=%d, M=%d, branch %s, %d attempts)",
            strategy, ctx.params.N, M, branch_label(ctx.branch), solved.attempted,
        )
    return solved


def _chains_lost(solved: BaeSolve, ctx: TQContext) -> bool:
    if solved.strategy != "homotopy_xi" or ctx.tied:
        return False
    return not solved.traces or any(not t.completed for t in solved.traces)


def solve_sector(
    ctx: TQContext,
    M: int,
    strategies: Sequence[Strategy] = ("homotopy_xi",),
    seed_count: int = 64,
    rng_seed: int = 0,
    *,
    xi_steps: int = 20,
    tol: float = BAE_TOL,
    oracle_fallback: bool = True,
) -> List[BaeSolve]:
    """Run `strategies` in order for one branch and sector.

    When a xi continuation chain is abandoned (or none could start), the
    sector is also solved oracle-seeded, unless that strategy already ran.
    """
    out = [solve_bae(ctx, M, s, seed_count, rng_seed, xi_steps=xi_steps, tol=tol) for s in strategies]
    if (
        oracle_fallback
        and "oracle_seeded" not in strategies
        and ctx.params.N <= ORACLE_MAX_SITES
        and any(_chains_lost(s, ctx) for s in out)
    ):
        logger.info("M=%d branch %s: xi chains lost, adding oracle-seeded roots", M, branch_label(ctx.branch))
        out.append(solve_bae(ctx, M, "oracle_seeded", seed_count, rng_seed, tol=tol))
    return out


# ---------------------------------------------------------------------------
# Spectrum matching
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class SpectrumMatch:
    exact: List[complex]
    levels: List[Dict[str, Any]]
    pairs: List[Dict[str, Any]]
    matched_fraction: float
    max_distance: Optional[float]
    unmatched: List[complex]
    unmatched_count: int
    tolerance: float
    completeness_confirmed: bool
    note: str = ""

    def to_dict(self) -> Dict[str, Any]:
        return {
            "exact": [complex_pair(e) for e in self.exact],
            "levels": self.levels,
            "pairs": self.pairs,
            "matched_fraction": self.matched_fraction,
            "max_distance": self.max_distance,
            "unmatched": [complex_pair(e) for e in self.unmatched],
            "unmatched_count": self.unmatched_count,
            "tolerance": self.tolerance,
            "completeness_confirmed": self.completeness_confirmed,
            "note": self.note,
        }


def exact_energies(params: ModelParams) -> List[complex]:
    h = hamiltonian(params, "direct").entries
    if params.is_real:
        vals = scipy.linalg.eigvalsh(h).astype(complex)
    else:
        vals = scipy.linalg.eigvals(h)
    return sorted((complex(v) for v in vals), key=lambda z: (z.real, z.imag))


def match_levels(
    exact: Sequence[complex], found: Sequence[complex], tol: float
) -> Tuple[List[Dict[str, Any]], int, Optional[float]]:
    """Minimum-cost assignment on |E_exact - E_found|.

    Returns (pairs, matched count, largest distance among matched pairs);
    the distance is None when no pair is within `tol`.
    """
    if not exact or not found:
        return [], 0, None
    cost = np.abs(np.asarray(exact)[:, None] - np.asarray(found)[None, :])
    rows, cols = linear_sum_assignment(cost)
    pairs = []
    matched = 0
    worst: Optional[float] = None
    for i, j in zip(rows, cols):
        d = float(cost[i, j])
        ok = d <= tol
        pairs.append({"exact_index": int(i), "level_index": int(j), "distance": d, "matched": ok})
        if ok:
            matched += 1
            worst = d if worst is None else max(worst, d)
    return pairs, matched, worst


def spectrum_match(
    params: ModelParams,
    M_policy: Union[str, int] = "sweep",
    *,
    strategies: Sequence[Strategy] = ("homotopy_xi", "multistart"),
    branches: Sequence[int] = (1, -1),
    seed_count: int = 64,
    rng_seed: int = 0,
    tol: float = 1e-6,
    xi_steps: int = 20,
) -> SpectrumMatch:
    """Solve both branches, compute energies, match the union to exact levels.

    Coverage is measured and reported; a fraction below 1 flags the
    completeness of the two branches as unconfirmed for this sample.
    """
    if not params.homogeneous:
        raise ValueError("spectrum_match needs homogeneous params (all theta_j = 0)")
    if params.N > 4:
        logger.warning("spectrum_match at N=%d: full coverage is only targeted for N <= 4", params.N)
    sectors = sweep_sectors(params.N) if M_policy == "sweep" else [int(M_policy)]

    levels: List[Dict[str, Any]] = []
    for branch in branches:
        ctx = make_context(params, branch)
        for M in sectors:
            collected: List[BetheRootSet] = []
            for solved in solve_sector(ctx, M, strategies, seed_count, rng_seed, xi_steps=xi_steps):
                add_levels(levels, collected, solved, ctx, M)

    return score_levels(params, levels, tol)


def add_levels(
    levels: List[Dict[str, Any]],
    collected: List[BetheRootSet],
    solved: BaeSolve,
    ctx: TQContext,
    M: int,
) -> None:
    """Append one level per new root set; `collected` holds the sets already seen for this sector."""
    for r in solved.solutions:
        if any(root_set_distance(r, c) < 1e-7 for c in collected):
            continue
        collected.append(r)
        levels.append({
            "branch": branch_label(ctx.branch),
            "M": M,
            "strategy": solved.strategy,
            "energy": energy_from_roots(r, ctx),
            "roots": r.to_dict(),
        })


def score_levels(params: ModelParams, levels: Sequence[Dict[str, Any]], tol: float = 1e-6) -> SpectrumMatch:
    """Match level energies (complex, key "energy") to the exact spectrum of H."""
    exact = exact_energies(params)
    energies = [complex(lv["energy"]) for lv in levels]
    pairs, matched, worst = match_levels(exact, energies, tol)
    matched_idx = {p["exact_index"] for p in pairs if p["matched"]}
    unmatched = [e for i, e in enumerate(exact) if i not in matched_idx]
    fraction = matched / len(exact)
    confirmed = fraction == 1.0
    note = "" if confirmed else (
        f"completeness unconfirmed: {len(unmatched)} of {len(exact)} exact levels have no T-Q partner "
        f"within {tol:g}; raise seed_count or widen the sector sweep"
    )
    out_levels = [dict(lv, energy=complex_pair(lv["energy"])) for lv in levels]
    return SpectrumMatch(
        exact=exact,
        levels=out_levels,
        pairs=pairs,
        matched_fraction=fraction,
        max_distance=worst,
        unmatched=unmatched,
        unmatched_count=len(unmatched),
        tolerance=tol,
        completeness_confirmed=confirmed,
        note=note,
    )


def trace_drift(trace: HomotopyTrace, params: ModelParams) -> List[Dict[str, Any]]:
    """Per-step energy change and distance to the nearest exact level."""
    out: List[Dict[str, Any]] = []
    prev: Optional[complex] = None
    for step in trace.steps:
        if step.energy is None:
            continue
        exact = np.asarray(exact_energies(params.with_xi(step.xi)))
        drift = float(np.min(np.abs(exact - step.energy)))
        change = 0.0 if prev is None else abs(step.energy - prev)
        out.append({"xi": complex_pair(step.xi), "energy": complex_pair(step.energy), "drift": drift, "step_change": change})
        prev = step.energy
    return out


def summarize_solutions(solved: BaeSolve, ctx: TQContext) -> Dict[str, Any]:
    rows = []
    for r in solved.solutions:
        row: Dict[str, Any] = {
            "roots": r.to_dict(),
            "max_relative_residual": float(np.max(bae_relative_residuals(r, ctx))) if r.vector.size else 0.0,
        }
        if ctx.homogeneous:
            row["energy"] = complex_pair(energy_from_roots(r, ctx))
        rows.append(row)
    return {
        "branch": branch_label(ctx.branch),
        "strategy": solved.strategy,
        "attempted": solved.attempted,
        "converged": solved.converged,
        "rejected": solved.rejected,
        "solutions": rows,
        "failures": solved.failures,
        "params": params_to_dict(ctx.params),
    }
