"""
core.verify
Catalog of algebraic identities of the open XXX chain, checked numerically.

Every entry builds both sides as matrices (or as operators applied to a fixed
set of vectors) and reports the relative Frobenius residual

    ||lhs - rhs|| / max(||lhs||, ||rhs||, 1e-300).

Relations whose right side is zero are normalized by the norms of the
factors instead.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import Any, Callable, Dict, List, Optional, Sequence, Tuple

import numpy as np

from .lattice import (
    b_from_one_row,
    double_row_components,
    double_row_monodromy,
    k_minus,
    k_plus,
    monodromy,
    on_two_aux,
    one_row_a,
    one_row_components,
    one_row_d,
    r_matrix,
    t_hat_by_crossing,
    transfer_matrix,
    vacuum_a,
    vacuum_d,
    vacuum_state,
    xi_unitarity,
)
from .params import ModelParams, complex_pair, params_to_dict, require_generic
from .rng import complex_disk, rng_from
from .spectral import functional_rhs, functional_rhs_vacuum, lambda_at_zero, quantum_determinant
from .tensor import (
    ANTISYMMETRIZER,
    CROSSING_V,
    PERMUTATION,
    DenseOperator,
    embed_pair,
    embed_site,
    partial_transpose,
    relative_residual,
)

logger = logging.getLogger(__name__)

DEFAULT_TOL = 1e-10
POINT_GUARD = 0.02
STATE_SAMPLES = 5
ASYMPTOTIC_BASE = 1e3
ASYMPTOTIC_LEVELS = 6


class UnknownIdentityError(KeyError):
    def __init__(self, identity_id: str) -> None:
        super().__init__(identity_id)
        self.identity_id = identity_id

    def __str__(self) -> str:
        return f"unknown identity {self.identity_id!r}; known: {', '.join(CATALOG)}"


@dataclass(frozen=True)
class VerificationResult:
    identity_id: str
    residual: float
    tolerance: float
    passed: bool
    sample: Dict[str, Any]
    detail: str = ""

    def to_dict(self) -> Dict[str, Any]:
        return {
            "identity_id": self.identity_id,
            "residual": self.residual if np.isfinite(self.residual) else str(self.residual),
            "tolerance": self.tolerance,
            "passed": self.passed,
            "sample": self.sample,
            "detail": self.detail,
        }


# (lhs, rhs, scale): scale None means max(||lhs||, ||rhs||)
Sides = Tuple[np.ndarray, np.ndarray, Optional[float]]
Builder = Callable[[ModelParams, Sequence[complex], np.ndarray], Sides]


@dataclass(frozen=True)
class IdentitySpec:
    key: str
    desc: str
    n_points: int
    build: Builder
    min_tol: float = 0.0
    guards: Tuple[str, ...] = ()   # denominators kept away from zero when sampling


# ---------------------------------------------------------------------------
# Small builders
# ---------------------------------------------------------------------------

def _r(i: int, j: int, n: int, u: complex) -> np.ndarray:
    return embed_pair(r_matrix(u), i, j, n).entries


def _k(mat: np.ndarray, j: int, n: int) -> np.ndarray:
    return embed_site(mat, j, n).entries


def _pt(m: np.ndarray, k: int) -> np.ndarray:
    return partial_transpose(DenseOperator.from_matrix(m), k).entries


def _stack(*pairs: Tuple[np.ndarray, np.ndarray]) -> Tuple[np.ndarray, np.ndarray]:
    return (
        np.concatenate([np.ravel(a) for a, _ in pairs]),
        np.concatenate([np.ravel(b) for _, b in pairs]),
    )


def _states(params: ModelParams, count: int = STATE_SAMPLES) -> np.ndarray:
    rng = rng_from("verify-states", params.N, base_seed=11)
    dim = 2 ** params.N
    v = rng.normal(size=(dim, count)) + 1j * rng.normal(size=(dim, count))
    return v / np.linalg.norm(v, axis=0)


def _zero_scale(*ops: np.ndarray) -> float:
    s = 1.0
    for op in ops:
        s *= float(np.linalg.norm(op))
    return s


# --- R-matrix ---

def _qybe(params: ModelParams, pts: Sequence[complex], _: np.ndarray) -> Sides:
    u1, u2, u3 = pts
    lhs = _r(1, 2, 3, u1 - u2) @ _r(1, 3, 3, u1 - u3) @ _r(2, 3, 3, u2 - u3)
    rhs = _r(2, 3, 3, u2 - u3) @ _r(1, 3, 3, u1 - u3) @ _r(1, 2, 3, u1 - u2)
    return lhs, rhs, None


def _unitarity(params: ModelParams, pts: Sequence[complex], _: np.ndarray) -> Sides:
    (u,) = pts
    lhs = _r(1, 2, 2, u) @ _r(2, 1, 2, -u)
    return lhs, -xi_unitarity(u) * np.eye(4), None


def _crossing_r(params: ModelParams, pts: Sequence[complex], _: np.ndarray) -> Sides:
    (u,) = pts
    v1 = _k(CROSSING_V, 1, 2)
    return r_matrix(u), v1 @ _pt(r_matrix(-u - 1), 2) @ v1, None


def _pt_symmetry(params: ModelParams, pts: Sequence[complex], _: np.ndarray) -> Sides:
    (u,) = pts
    r12 = r_matrix(u)
    lhs, rhs = _stack((r12, _r(2, 1, 2, u)), (r12, _pt(_pt(r12, 1), 2)))
    return lhs, rhs, None


def _antisymmetry(params: ModelParams, pts: Sequence[complex], _: np.ndarray) -> Sides:
    return r_matrix(-1.0), -2.0 * ANTISYMMETRIZER, None


def _initial_r(params: ModelParams, pts: Sequence[complex], _: np.ndarray) -> Sides:
    return r_matrix(0.0), np.array(PERMUTATION), None


# --- K-matrices ---

def _reflection(params: ModelParams, pts: Sequence[complex], _: np.ndarray) -> Sides:
    u1, u2 = pts
    k1, k2 = _k(k_minus(u1, params), 1, 2), _k(k_minus(u2, params), 2, 2)
    lhs = _r(1, 2, 2, u1 - u2) @ k1 @ _r(2, 1, 2, u1 + u2) @ k2
    rhs = k2 @ _r(1, 2, 2, u1 + u2) @ k1 @ _r(2, 1, 2, u1 - u2)
    return lhs, rhs, None


def _dual_reflection(params: ModelParams, pts: Sequence[complex], _: np.ndarray) -> Sides:
    u1, u2 = pts
    k1, k2 = _k(k_plus(u1, params), 1, 2), _k(k_plus(u2, params), 2, 2)
    s = -u1 - u2 - 2
    lhs = _r(1, 2, 2, u2 - u1) @ k1 @ _r(2, 1, 2, s) @ k2
    rhs = k2 @ _r(1, 2, 2, s) @ k1 @ _r(2, 1, 2, u2 - u1)
    return lhs, rhs, None


# --- one-row monodromy ---

def _two(params: ModelParams, u: complex, aux: int, variant: str) -> np.ndarray:
    return on_two_aux(monodromy(u, params, variant), aux, params.N).entries


def _rll_1(params: ModelParams, pts: Sequence[complex], _: np.ndarray) -> Sides:
    u, v = pts
    n = params.N + 2
    t1, t2 = _two(params, u, 1, "forward"), _two(params, v, 2, "forward")
    r = _r(1, 2, n, u - v)
    return r @ t1 @ t2, t2 @ t1 @ r, None


def _rll_2(params: ModelParams, pts: Sequence[complex], _: np.ndarray) -> Sides:
    u, v = pts
    n = params.N + 2
    h1, h2 = _two(params, u, 1, "hat"), _two(params, v, 2, "hat")
    r = _r(1, 2, n, v - u)
    return r @ h2 @ h1, h1 @ h2 @ r, None


def _rll_3(params: ModelParams, pts: Sequence[complex], _: np.ndarray) -> Sides:
    u, v = pts
    n = params.N + 2
    t1, h2 = _two(params, u, 1, "forward"), _two(params, v, 2, "hat")
    r = _r(1, 2, n, u + v)
    return h2 @ r @ t1, t1 @ r @ h2, None


def _t_hat_crossing(params: ModelParams, pts: Sequence[complex], _: np.ndarray) -> Sides:
    (u,) = pts
    return monodromy(u, params, "hat").entries, t_hat_by_crossing(u, params).entries, None


def _exch_beta_comm(params: ModelParams, pts: Sequence[complex], _: np.ndarray) -> Sides:
    lam, mu = pts
    bl, bm = one_row_components(lam, params).beta.entries, one_row_components(mu, params).beta.entries
    lhs, rhs = bl @ bm, bm @ bl
    return lhs, rhs, _zero_scale(bl, bm)


def _exch_bg(params: ModelParams, pts: Sequence[complex], _: np.ndarray) -> Sides:
    lam, mu = pts
    cl, cm = one_row_components(lam, params), one_row_components(mu, params)
    b_l, g_m = cl.beta.entries, cm.gamma.entries
    extra = (cm.delta.entries @ cl.alpha.entries - cl.delta.entries @ cm.alpha.entries) / (lam - mu)
    return b_l @ g_m, g_m @ b_l + extra, None


def _exch_ab(params: ModelParams, pts: Sequence[complex], _: np.ndarray) -> Sides:
    lam, mu = pts
    cl, cm = one_row_components(lam, params), one_row_components(mu, params)
    rhs = ((lam - mu - 1) / (lam - mu)) * (cm.beta.entries @ cl.alpha.entries) + (
        cl.beta.entries @ cm.alpha.entries
    ) / (lam - mu)
    return cl.alpha.entries @ cm.beta.entries, rhs, None


def _exch_db(params: ModelParams, pts: Sequence[complex], _: np.ndarray) -> Sides:
    lam, mu = pts
    cl, cm = one_row_components(lam, params), one_row_components(mu, params)
    rhs = ((lam - mu + 1) / (lam - mu)) * (cm.beta.entries @ cl.delta.entries) - (
        cl.beta.entries @ cm.delta.entries
    ) / (lam - mu)
    return cl.delta.entries @ cm.beta.entries, rhs, None


# --- double-row monodromy ---

def _dr_exchange(params: ModelParams, pts: Sequence[complex], _: np.ndarray) -> Sides:
    u1, u2 = pts
    n = params.N + 2
    tt1 = on_two_aux(double_row_monodromy(u1, params), 1, params.N).entries
    tt2 = on_two_aux(double_row_monodromy(u2, params), 2, params.N).entries
    lhs = _r(1, 2, n, u1 - u2) @ tt1 @ _r(2, 1, n, u1 + u2) @ tt2
    rhs = tt2 @ _r(1, 2, n, u1 + u2) @ tt1 @ _r(2, 1, n, u1 - u2)
    return lhs, rhs, None


def _b_expansion(params: ModelParams, pts: Sequence[complex], _: np.ndarray) -> Sides:
    (u,) = pts
    return double_row_components(u, params).B.entries, b_from_one_row(u, params).entries, None


def _cb_relation(params: ModelParams, pts: Sequence[complex], vecs: np.ndarray) -> Sides:
    lam, mu = pts
    L, M = double_row_components(lam, params), double_row_components(mu, params)
    A_l, A_m, D_l, D_m = L.A.entries, M.A.entries, L.Dbar.entries, M.Dbar.entries
    s, d = lam + mu + 1, lam - mu
    rhs = (
        M.B.entries @ L.C.entries
        + (lam + mu) / (s * d * (2 * lam + 1)) * (A_m @ D_l)
        + (d + 1) * (2 * lam) / (s * d * (2 * lam + 1)) * (A_m @ A_l)
        - 2 * lam * (A_l @ D_m + A_l @ A_m) / (d * (2 * lam + 1) * (2 * mu + 1))
        - (D_l @ D_m + D_l @ A_m) / (s * (2 * lam + 1) * (2 * mu + 1))
    )
    return L.C.entries @ M.B.entries @ vecs, rhs @ vecs, None


def _ab_relation(params: ModelParams, pts: Sequence[complex], vecs: np.ndarray) -> Sides:
    lam, mu = pts
    L, M = double_row_components(lam, params), double_row_components(mu, params)
    s, d = lam + mu + 1, lam - mu
    rhs = (
        (lam + mu) * (d - 1) / (d * s) * (M.B.entries @ L.A.entries)
        - (L.B.entries @ M.Dbar.entries) / (s * (2 * mu + 1))
        + 2 * mu / (d * (2 * mu + 1)) * (L.B.entries @ M.A.entries)
    )
    return L.A.entries @ M.B.entries @ vecs, rhs @ vecs, None


def _dbarb_relation(params: ModelParams, pts: Sequence[complex], vecs: np.ndarray) -> Sides:
    lam, mu = pts
    L, M = double_row_components(lam, params), double_row_components(mu, params)
    s, d = lam + mu + 1, lam - mu
    rhs = (
        (d + 1) * (s + 1) / (d * s) * (M.B.entries @ L.Dbar.entries)
        - 2 * (lam + 1) / (d * (2 * mu + 1)) * (L.B.entries @ M.Dbar.entries)
        + 4 * (lam + 1) * mu / ((2 * mu + 1) * s) * (L.B.entries @ M.A.entries)
    )
    return L.Dbar.entries @ M.B.entries @ vecs, rhs @ vecs, None


# --- transfer matrix ---

def _transfer_crossing(params: ModelParams, pts: Sequence[complex], _: np.ndarray) -> Sides:
    (u,) = pts
    return transfer_matrix(-u - 1, params).entries, transfer_matrix(u, params).entries, None


def _transfer_initial(params: ModelParams, pts: Sequence[complex], _: np.ndarray) -> Sides:
    return transfer_matrix(0.0, params).entries, lambda_at_zero(params) * np.eye(2 ** params.N), None


def richardson(values: Sequence[np.ndarray], ratio: float = 2.0) -> np.ndarray:
    """Extrapolate f(h_k), h_k = h_0 / ratio^k, to h = 0 (error expansion in integer powers of h)."""
    table = [np.asarray(v, dtype=complex) for v in values]
    for m in range(1, len(table)):
        f = ratio ** m
        table = [(f * table[k + 1] - table[k]) / (f - 1) for k in range(len(table) - 1)]
    return table[0]


def _transfer_asymptotic(params: ModelParams, pts: Sequence[complex], _: np.ndarray) -> Sides:
    deg = 2 * params.N + 2
    vals = []
    for k in range(ASYMPTOTIC_LEVELS):
        u = ASYMPTOTIC_BASE * 2.0 ** k
        vals.append(transfer_matrix(u, params).entries / u ** deg)
    return richardson(vals), 2.0 * np.eye(2 ** params.N), None


def _transfer_commute(params: ModelParams, pts: Sequence[complex], _: np.ndarray) -> Sides:
    u, v = pts
    tu, tv = transfer_matrix(u, params).entries, transfer_matrix(v, params).entries
    return tu @ tv, tv @ tu, _zero_scale(tu, tv)


def _qdet_trace_form(params: ModelParams, pts: Sequence[complex], _: np.ndarray) -> Sides:
    (u,) = pts
    closed = quantum_determinant(u, params, "closed_form")
    trace = quantum_determinant(u, params, "trace_form")
    return np.array([trace]), np.array([closed]), None


def _operator_functional(params: ModelParams, pts: Sequence[complex], _: np.ndarray) -> Sides:
    (j,) = pts
    t = params.theta[int(j.real) - 1]
    lhs = transfer_matrix(t, params).entries @ transfer_matrix(t - 1, params).entries
    return lhs, functional_rhs(t, params) * np.eye(2 ** params.N), None


_ENTRIES: List[IdentitySpec] = [
    IdentitySpec("qybe", "R12 R13 R23 = R23 R13 R12", 3, _qybe, guards=("diff",)),
    IdentitySpec("unitarity", "R12(u) R21(-u) = -(u+1)(u-1) id", 1, _unitarity),
    IdentitySpec("crossing_r", "R12(u) = V1 R12^t2(-u-1) V1, V = -i sigma^y", 1, _crossing_r),
    IdentitySpec("pt_symmetry", "R12(u) = R21(u) = R12^(t1 t2)(u)", 1, _pt_symmetry),
    IdentitySpec("antisymmetry", "R(-1) = -2 P^-", 0, _antisymmetry),
    IdentitySpec("initial_r", "R(0) = P", 0, _initial_r),
    IdentitySpec("reflection", "reflection equation for K^-", 2, _reflection),
    IdentitySpec("dual_reflection", "dual reflection equation for K^+", 2, _dual_reflection),
    IdentitySpec("rll_1", "R12(u-v) T1(u) T2(v) = T2(v) T1(u) R12(u-v)", 2, _rll_1),
    IdentitySpec("rll_2", "R12(v-u) T^2(v) T^1(u) = T^1(u) T^2(v) R12(v-u)", 2, _rll_2),
    IdentitySpec("rll_3", "T^2(v) R12(u+v) T1(u) = T1(u) R12(u+v) T^2(v)", 2, _rll_3),
    IdentitySpec("t_hat_crossing", "T^(u) = (-1)^(N-1) V0 T^t0(-u-1) V0", 1, _t_hat_crossing),
    IdentitySpec("exch_beta_comm", "beta(l) beta(m) = beta(m) beta(l)", 2, _exch_beta_comm),
    IdentitySpec("exch_bg", "beta(l) gamma(m) exchange", 2, _exch_bg, guards=("diff",)),
    IdentitySpec("exch_ab", "alpha(l) beta(m) exchange", 2, _exch_ab, guards=("diff",)),
    IdentitySpec("exch_db", "delta(l) beta(m) exchange", 2, _exch_db, guards=("diff",)),
    IdentitySpec("dr_exchange", "R12 TT1 R21 TT2 = TT2 R12 TT1 R21", 2, _dr_exchange),
    IdentitySpec("b_expansion", "B(u) from one-row components", 1, _b_expansion),
    IdentitySpec("cb_relation", "C(l) B(m) exchange on random states", 2, _cb_relation, 1e-9, ("diff", "sum", "half")),
    IdentitySpec("ab_relation", "A(l) B(m) exchange on random states", 2, _ab_relation, 1e-9, ("diff", "sum", "half")),
    IdentitySpec("dbarb_relation", "Dbar(l) B(m) exchange on random states", 2, _dbarb_relation, 1e-9, ("diff", "sum", "half")),
    IdentitySpec("transfer_crossing", "tau(-u-1) = tau(u)", 1, _transfer_crossing),
    IdentitySpec("transfer_initial", "tau(0) = 2pq prod(1-theta^2) id", 0, _transfer_initial),
    IdentitySpec("transfer_asymptotic", "tau(u) / u^(2N+2) -> 2 id (extrapolated)", 0, _transfer_asymptotic, 1e-6),
    IdentitySpec("transfer_commute", "[tau(u), tau(v)] = 0", 2, _transfer_commute),
    IdentitySpec("qdet_trace_form", "quantum determinant: trace form = closed form", 1, _qdet_trace_form),
    IdentitySpec("operator_functional", "tau(theta_j) tau(theta_j-1) = Delta_q(theta_j)/((1-2theta_j)(1+2theta_j)) id", 1, _operator_functional),
]

CATALOG: Dict[str, IdentitySpec] = {spec.key: spec for spec in _ENTRIES}


def get_identity(identity_id: str) -> IdentitySpec:
    try:
        return CATALOG[identity_id]
    except KeyError:
        raise UnknownIdentityError(identity_id) from None


# ---------------------------------------------------------------------------
# Sampling and checking
# ---------------------------------------------------------------------------

def _guard_ok(pts: np.ndarray, guards: Sequence[str], guard: float) -> bool:
    if "half" in guards and np.any(np.abs(2 * pts + 1) < guard):
        return False
    for a in range(len(pts)):
        for b in range(a + 1, len(pts)):
            if "diff" in guards and abs(pts[a] - pts[b]) < guard:
                return False
            if "sum" in guards and abs(pts[a] + pts[b] + 1) < guard:
                return False
    return True


def sample_points(
    identity_id: str,
    rng: np.random.Generator,
    params: Optional[ModelParams] = None,
    guard: float = POINT_GUARD,
) -> List[complex]:
    """Spectral points from the unit disk, denominators kept at least `guard` from zero.

    operator_functional takes a site index instead; it is drawn from 1..N.
    """
    spec = get_identity(identity_id)
    if identity_id == "operator_functional":
        n = params.N if params is not None else 1
        return [complex(int(rng.integers(1, n + 1)))]
    for _ in range(1000):
        pts = complex_disk(rng, spec.n_points)
        if _guard_ok(pts, spec.guards, guard):
            return [complex(x) for x in pts]
    raise RuntimeError(f"could not sample guarded points for {identity_id}")


def _sample_record(params: ModelParams, points: Sequence[complex]) -> Dict[str, Any]:
    return {"params": params_to_dict(params), "points": [complex_pair(x) for x in points]}


def verify_identity(
    identity_id: str,
    params: ModelParams,
    points: Sequence[complex],
    tol: float = DEFAULT_TOL,
) -> VerificationResult:
    """Build both sides of one catalog identity and compare them."""
    spec = get_identity(identity_id)
    require_generic(params)
    points = [complex(x) for x in points]
    if len(points) != spec.n_points:
        raise ValueError(f"{identity_id} needs {spec.n_points} spectral points, got {len(points)}")
    if identity_id == "operator_functional":
        j = points[0]
        if j.imag != 0 or not 1 <= int(j.real) <= params.N or j.real != int(j.real):
            raise ValueError(f"operator_functional takes a site index in 1..{params.N}, got {j}")

    tol_used = max(float(tol), spec.min_tol)
    sample = _sample_record(params, points)
    lhs, rhs, scale = spec.build(params, points, _states(params))
    if scale is None:
        residual = relative_residual(lhs, rhs)
    else:
        residual = float(np.linalg.norm(np.asarray(lhs) - np.asarray(rhs))) / max(scale, 1e-300)

    if not np.isfinite(residual):
        logger.warning("%s: non-finite residual at %s", identity_id, sample["points"])
        return VerificationResult(identity_id, float("nan"), tol_used, False, sample, "non-finite residual")
    return VerificationResult(identity_id, residual, tol_used, residual <= tol_used, sample)


def verify_catalog(
    params: ModelParams,
    *,
    tol: float = DEFAULT_TOL,
    rng_seed: int = 0,
    ids: Optional[Sequence[str]] = None,
) -> List[VerificationResult]:
    """Every requested identity once, in catalog order; operator_functional at each j."""
    wanted = list(CATALOG) if ids is None else [get_identity(i).key for i in ids]
    rng = rng_from("verify-catalog", params_to_dict(params), base_seed=rng_seed)
    out: List[VerificationResult] = []
    for key in CATALOG:
        if key not in wanted:
            continue
        if key == "operator_functional":
            for j in range(1, params.N + 1):
                out.append(verify_identity(key, params, [complex(j)], tol))
            continue
        out.append(verify_identity(key, params, sample_points(key, rng, params), tol))
    failed = [r.identity_id for r in out if not r.passed]
    if failed:
        logger.warning("identity checks failed: %s", ", ".join(failed))
    return out


# ---------------------------------------------------------------------------
# Reference-state relations at the inhomogeneity points
# ---------------------------------------------------------------------------

@dataclass
class _VacuumChecks:
    params: ModelParams
    tol: float
    sample: Dict[str, Any]
    results: List[VerificationResult] = field(default_factory=list)

    def add(self, key: str, residual: float, tol: Optional[float] = None, detail: str = "") -> None:
        t = self.tol if tol is None else tol
        if not np.isfinite(residual):
            self.results.append(VerificationResult(key, float("nan"), t, False, self.sample, "non-finite residual"))
            return
        self.results.append(VerificationResult(key, float(residual), t, residual <= t, self.sample, detail))

    def equal(self, key: str, lhs: np.ndarray, rhs: np.ndarray, **kw: Any) -> None:
        self.add(key, relative_residual(lhs, rhs), **kw)

    def zero(self, key: str, vec: np.ndarray, scale: float, **kw: Any) -> None:
        self.add(key, float(np.linalg.norm(vec)) / max(scale, 1e-300), **kw)


def tt_six_terms(theta: complex, params: ModelParams) -> List[np.ndarray]:
    """The six vectors whose sum is tau(theta) tau(theta-1)|0>."""
    t = complex(theta)
    q, xi = params.q, params.xi
    vac = vacuum_state(params.N)
    at, dt = double_row_components(t, params), double_row_components(t - 1, params)
    b_prev = dt.B.apply(vac)
    ad = vacuum_a(t, params) * vacuum_d(t - 1, params)
    return [
        2 * (t + q) * (t + 1) * (q - t) / ((2 * t + 1) * (2 * t - 1)) * ad * vac,
        xi ** 2 * t * (t + 1) * at.C.apply(b_prev),
        xi * (q - t) * (t + 1) / (2 * t - 1) * vacuum_d(t - 1, params) * at.B.apply(vac),
        2 * xi * t * (t + q) * (t + 1) / (2 * t + 1) * at.A.apply(b_prev),
        xi * t * (q - t - 1) / (2 * t + 1) * at.Dbar.apply(b_prev),
        xi ** 2 * t * (t + 1) * at.B.apply(b_prev),
    ]


def verify_vacuum_relations(
    params: ModelParams,
    *,
    tol: float = DEFAULT_TOL,
    rng_seed: int = 0,
    points: int = 3,
) -> List[VerificationResult]:
    """Actions on the all-up state |0> and the relations at u = theta_j.

    C|0> = 0, A|0> = a|0>, Dbar|0> = d|0> at sampled u; the vanishing of a and
    d at theta_j - 1 and theta_j; the one-row relations at (theta_j, theta_j-1);
    B(theta_j) B(theta_j-1) = 0 as an operator; and the reduction of
    tau(theta_j) tau(theta_j-1)|0> term by term.
    """
    require_generic(params)
    rng = rng_from("verify-vacuum", params_to_dict(params), base_seed=rng_seed)
    us = [complex(x) for x in complex_disk(rng, points)]
    chk = _VacuumChecks(params, tol, _sample_record(params, us))
    vac = vacuum_state(params.N)

    for u in us:
        c = double_row_components(u, params)
        chk.zero("vacuum_c", c.C.apply(vac), c.C.norm())
        chk.equal("vacuum_a", c.A.apply(vac), vacuum_a(u, params) * vac)
        chk.equal("vacuum_dbar", c.Dbar.apply(vac), vacuum_d(u, params) * vac)

    for j, t in enumerate(params.theta, start=1):
        chk.sample = _sample_record(params, [t])
        scale = max(abs(vacuum_a(t, params)), abs(vacuum_d(t - 1, params)), 1.0)
        chk.add("vacuum_zeros", max(abs(vacuum_a(t - 1, params)), abs(vacuum_d(t, params))) / scale,
                detail=f"j={j}")

        now, prev = one_row_components(t, params), one_row_components(t - 1, params)
        al, be, ga, de = (x.entries for x in (now.alpha, now.beta, now.gamma, now.delta))
        al1, be1, de1 = prev.alpha.entries, prev.beta.entries, prev.delta.entries
        ad = one_row_a(t, params) * one_row_d(t - 1, params)
        chk.zero("theta_alpha_beta", al @ be1 @ vac, _zero_scale(al, be1), detail=f"j={j}")
        chk.zero("theta_delta_alpha", de @ al1 @ vac, _zero_scale(de, al1), detail=f"j={j}")
        chk.zero("theta_alpha_alpha", al @ al1 @ vac, _zero_scale(al, al1), detail=f"j={j}")
        chk.zero("theta_delta_delta", de @ de1 @ vac, _zero_scale(de, de1), detail=f"j={j}")
        chk.equal("theta_gamma_beta", ga @ be1 @ vac, -ad * vac, detail=f"j={j}")
        chk.equal("theta_delta_beta", de @ be1 @ vac, -one_row_d(t - 1, params) * (be @ vac), detail=f"j={j}")
        chk.equal("theta_alpha_delta", al @ de1 @ vac, ad * vac, detail=f"j={j}")
        chk.zero("theta_beta_beta", be @ be1 @ vac, _zero_scale(be, be1), detail=f"j={j}")

        b_now = double_row_components(t, params).B.entries
        b_prev = double_row_components(t - 1, params).B.entries
        chk.zero("bb_vanishing", b_now @ b_prev, _zero_scale(b_now, b_prev), tol=min(tol, 1e-11), detail=f"j={j}")

        terms = tt_six_terms(t, params)
        tt = transfer_matrix(t, params).entries @ transfer_matrix(t - 1, params).entries @ vac
        chk.equal("tt_expansion", tt, sum(terms), detail=f"j={j}")
        grouped = -2 * params.xi ** 2 * t ** 2 * (t + 1) / ((2 * t - 1) * (2 * t + 1))
        chk.equal(
            "tt_reduction",
            terms[1] + terms[2] + terms[3] + terms[4],
            grouped * vacuum_a(t, params) * vacuum_d(t - 1, params) * vac,
            detail=f"j={j}",
        )
        chk.equal("tt_final", tt, functional_rhs_vacuum(t, params) * vac, detail=f"j={j}")

    failed = sorted({r.identity_id for r in chk.results if not r.passed})
    if failed:
        logger.warning("vacuum relations failed: %s", ", ".join(failed))
    return chk.results


def summarize(results: Sequence[VerificationResult]) -> Dict[str, Any]:
    worst: Dict[str, float] = {}
    for r in results:
        worst[r.identity_id] = max(worst.get(r.identity_id, 0.0), r.residual if np.isfinite(r.residual) else np.inf)
    return {
        "total": len(results),
        "passed": sum(r.passed for r in results),
        "failed": sorted({r.identity_id for r in results if not r.passed}),
        "worst_residual": {k: (v if np.isfinite(v) else "nan") for k, v in worst.items()},
    }
