"""
core.newton
Damped Newton iteration for holomorphic systems F(x) = 0, x in C^n.

Steps are halved while they increase ||F||; convergence is judged by a
caller-supplied measure so scale-free criteria can be used on raw residuals.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np

logger = logging.getLogger(__name__)

Residual = Callable[[np.ndarray], np.ndarray]
Jacobian = Callable[[np.ndarray], np.ndarray]
Measure = Callable[[np.ndarray, np.ndarray], float]


@dataclass(frozen=True)
class NewtonResult:
    x: np.ndarray
    measure: float
    iterations: int
    converged: bool
    reason: str


def central_jacobian(fun: Residual, x: np.ndarray, rel_step: float = 1e-7) -> np.ndarray:
    """Holomorphic central differences, one column per unknown."""
    x = np.asarray(x, dtype=complex)
    cols = []
    for k in range(x.size):
        h = rel_step * max(1.0, abs(x[k]))
        e = np.zeros_like(x)
        e[k] = h
        cols.append((np.asarray(fun(x + e)) - np.asarray(fun(x - e))) / (2 * h))
    return np.stack(cols, axis=1) if cols else np.zeros((0, 0), dtype=complex)


def _max_abs(_: np.ndarray, r: np.ndarray) -> float:
    return float(np.max(np.abs(r))) if r.size else 0.0


def damped_newton(
    fun: Residual,
    x0: np.ndarray,
    *,
    jacobian: Optional[Jacobian] = None,
    measure: Optional[Measure] = None,
    tol: float = 1e-11,
    max_iter: int = 200,
    min_damping: float = 2.0 ** -12,
) -> NewtonResult:
    """Solve fun(x) = 0 from x0.

    Square systems use a direct solve (least squares when singular);
    rectangular ones are Gauss-Newton steps via lstsq.
    """
    measure = measure or _max_abs
    x = np.array(x0, dtype=complex)
    r = np.asarray(fun(x), dtype=complex)
    if not np.all(np.isfinite(r)):
        return NewtonResult(x, float("inf"), 0, False, "non-finite residual at seed")

    for it in range(max_iter + 1):
        m = measure(x, r)
        if m <= tol:
            return NewtonResult(x, m, it, True, "converged")
        if it == max_iter:
            break

        J = jacobian(x) if jacobian is not None else central_jacobian(fun, x)
        if not np.all(np.isfinite(J)):
            return NewtonResult(x, m, it, False, "non-finite jacobian")
        try:
            if J.shape[0] == J.shape[1]:
                step = np.linalg.solve(J, -r)
            else:
                step = np.linalg.lstsq(J, -r, rcond=None)[0]
        except np.linalg.LinAlgError:
            step = np.linalg.lstsq(J, -r, rcond=None)[0]

        r_norm = float(np.linalg.norm(r))
        t = 1.0
        while t >= min_damping:
            x_new = x + t * step
            r_new = np.asarray(fun(x_new), dtype=complex)
            if np.all(np.isfinite(r_new)) and float(np.linalg.norm(r_new)) < r_norm:
                break
            t *= 0.5
        else:
            logger.debug("newton stagnated at iteration %d, measure %.3e", it, m)
            return NewtonResult(x, m, it, False, "stagnated")
        x, r = x_new, r_new

    return NewtonResult(x, measure(x, r), max_iter, False, "max iterations")
