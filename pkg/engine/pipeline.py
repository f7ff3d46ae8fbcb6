"""engine.pipeline

Headless run flow.

Responsibilities:
- Dispatch a RunConfig to verify / spectrum / solve-bae / solve-functional
- Time every stage and turn stage errors into failure records
- Assemble the report (and serve/store it through the result cache)

This layer is UI-agnostic.
"""

from __future__ import annotations

import json
import logging
from typing import Any, Callable, Dict, List, Optional, Tuple

import numpy as np

from core.bethe import (
    BetheRootSet,
    add_levels,
    make_context,
    score_levels,
    solve_sector,
    summarize_solutions,
    trace_drift,
)
from core.modes import get_parametrization, sweep_sectors
from core.params import complex_pair
from core.spectral import (
    ORACLE_MAX_SITES,
    REFERENCE_POINT,
    derivative_condition_residual,
    lambda_from_oracle,
    match_to_oracle,
    solve_lambda_functional,
)
from core.verify import summarize, verify_catalog, verify_vacuum_relations

from .cache import ResultCache
from .config import RunConfig
from .report import StageTimer, dumps_report, make_report, report_to_csv

logger = logging.getLogger(__name__)

CANDIDATE_TOL = 1e-8
RECOVERY_TOL = 1e-7
DRIFT_TRACES = 8

Results = Dict[str, Any]
Failures = List[Dict[str, Any]]


def _run_verify(config: RunConfig, timer: StageTimer, failures: Failures) -> Results:
    params, tol = config.params, config.tol("identities")
    results: List[Any] = []
    with timer.stage("catalog"):
        results += verify_catalog(params, tol=tol, rng_seed=config.rng_seed)
    with timer.stage("vacuum"):
        results += verify_vacuum_relations(params, tol=tol, rng_seed=config.rng_seed)
    for r in results:
        if not r.passed:
            failures.append({
                "stage": "verify",
                "identity": r.identity_id,
                "residual": r.residual,
                "tolerance": r.tolerance,
                "detail": r.detail,
            })
    table = [
        {"identity": r.identity_id, "residual": r.residual, "tolerance": r.tolerance, "passed": r.passed, "detail": r.detail}
        for r in results
    ]
    return {"summary": summarize(results), "checks": [r.to_dict() for r in results], "table": table}


def _run_spectrum(config: RunConfig, timer: StageTimer, failures: Failures) -> Results:
    params = config.params
    with timer.stage("oracle"):
        cands = lambda_from_oracle(params)
    rows: List[Dict[str, Any]] = []
    table: List[Dict[str, Any]] = []
    with timer.stage("properties"):
        for idx, c in enumerate(cands):
            row: Dict[str, Any] = c.to_dict()
            row["index"] = idx
            row["value_at_reference"] = complex_pair(c.poly(REFERENCE_POINT))
            trow: Dict[str, Any] = {
                "index": idx,
                "value_at_reference": row["value_at_reference"],
                "max_residual": c.max_residual,
            }
            if params.homogeneous:
                row["energy"] = complex_pair(c.energy(params))
                row["determinant_forms"] = {
                    form: derivative_condition_residual(c.poly, params, form)
                    for form in ("factor_product", "printed")
                }
                trow["energy"] = row["energy"]
                trow.update({f"derivative_{k}": v for k, v in row["determinant_forms"].items()})
            rows.append(row)
            table.append(trow)
            if c.max_residual > CANDIDATE_TOL:
                failures.append({
                    "stage": "spectrum",
                    "candidate": idx,
                    "residuals": dict(c.residuals),
                    "tolerance": CANDIDATE_TOL,
                })
    out: Results = {
        "reference_point": complex_pair(REFERENCE_POINT),
        "count": len(cands),
        "expected_count": 2 ** params.N,
        "candidates": rows,
        "table": table,
    }
    if len(cands) != 2 ** params.N:
        failures.append({"stage": "spectrum", "error": "candidate count", "found": len(cands), "expected": 2 ** params.N})
    return out


def _sectors(config: RunConfig) -> List[int]:
    if config.M == "default":
        return sweep_sectors(config.params.N)
    get_parametrization(config.params.N, int(config.M))
    return [int(config.M)]


def _run_solve_bae(config: RunConfig, timer: StageTimer, failures: Failures) -> Results:
    params = config.params
    tol = config.tol("solver")
    solves: List[Dict[str, Any]] = []
    levels: List[Dict[str, Any]] = []
    traces = []
    total = 0
    with timer.stage("solve"):
        for branch in config.branches:
            ctx = make_context(params, branch)
            for M in _sectors(config):
                collected: List[BetheRootSet] = []
                for solved in solve_sector(
                    ctx, M, (config.strategy,), config.seed_count, config.rng_seed,  # type: ignore[arg-type]
                    xi_steps=config.xi_steps, tol=tol,
                ):
                    summary = summarize_solutions(solved, ctx)
                    summary["M"] = M
                    solves.append(summary)
                    total += len(solved.solutions)
                    traces += [t for t in solved.traces if t.completed]
                    if ctx.homogeneous:
                        add_levels(levels, collected, solved, ctx, M)
    if total == 0:
        failures.append({
            "stage": "solve-bae",
            "error": "no admissible root set in any requested branch/sector",
            "strategy": config.strategy,
            "seed_count": config.seed_count,
        })

    out: Results = {"solves": solves, "solution_count": total}
    if not params.homogeneous:
        out["spectrum_match"] = None
        out["note"] = "energies and spectrum matching need the homogeneous point"
        out["table"] = [
            {"branch": s["branch"], "M": s["M"], "roots": row["roots"], "max_relative_residual": row["max_relative_residual"]}
            for s in solves for row in s["solutions"]
        ]
        return out

    with timer.stage("match"):
        match = score_levels(params, levels, config.tol("match"))
    out["spectrum_match"] = match.to_dict()
    matched_levels = {p["level_index"] for p in match.pairs if p["matched"]}
    out["table"] = [
        {
            "branch": lv["branch"],
            "M": lv["M"],
            "strategy": lv["strategy"],
            "energy": lv["energy"],
            "matched": i in matched_levels,
        }
        for i, lv in enumerate(match.levels)
    ]
    if traces:
        with timer.stage("xi_drift"):
            drifts = [trace_drift(t, params) for t in traces[:DRIFT_TRACES]]
        steps = [s for d in drifts for s in d]
        out["xi_continuation"] = {
            "chains": len(traces),
            "inspected": len(drifts),
            "max_drift": max((s["drift"] for s in steps), default=0.0),
            "max_step_change": max((s["step_change"] for s in steps), default=0.0),
        }
    return out


def _run_solve_functional(config: RunConfig, timer: StageTimer, failures: Failures) -> Results:
    params = config.params
    mode = "homogeneous" if params.homogeneous else "inhomogeneous"
    with timer.stage("functional"):
        solved = solve_lambda_functional(
            params, mode, config.seed_count, rng_seed=config.rng_seed, tol=config.tol("functional")
        )
    if solved.converged == 0:
        failures.append({"stage": "solve-functional", "error": "no seed converged", "seeds": solved.seeds_tried})
    out: Results = {
        "mode": mode,
        "seeds_tried": solved.seeds_tried,
        "converged": solved.converged,
        "candidates": [c.to_dict() for c in solved.candidates],
        "seed_failures": solved.failures[:20],
    }
    table = [{"index": i, "max_residual": c.max_residual} for i, c in enumerate(solved.candidates)]
    if params.N <= ORACLE_MAX_SITES:
        with timer.stage("oracle"):
            oracle = lambda_from_oracle(params)
        distances = match_to_oracle(solved.candidates, oracle)
        recovered = sum(d <= RECOVERY_TOL for d in distances)
        out["oracle"] = {
            "count": len(oracle),
            "distances": distances,
            "recovered": recovered,
            "complete": recovered == len(oracle),
            "tolerance": RECOVERY_TOL,
        }
    out["table"] = table
    return out


HANDLERS: Dict[str, Callable[[RunConfig, StageTimer, Failures], Results]] = {
    "verify": _run_verify,
    "spectrum": _run_spectrum,
    "solve-bae": _run_solve_bae,
    "solve-functional": _run_solve_functional,
}


def compute(config: RunConfig) -> Dict[str, Any]:
    """Run one command without the cache. Stage errors become failure records."""
    timer = StageTimer()
    failures: Failures = []
    logger.info("run %s (N=%d)", config.command, config.params.N)
    try:
        results = HANDLERS[config.command](config, timer, failures)
    except Exception as e:
        logger.warning("%s failed: %s: %s", config.command, type(e).__name__, e)
        failed_stage = timer.records[-1]["stage"] if timer.records and timer.records[-1]["status"] == "error" else config.command
        failures.append({"stage": failed_stage, "error": type(e).__name__, "message": str(e)})
        results = {"partial": True}
    results["passed"] = not failures
    for rec in timer.records:
        logger.info("stage %s %s in %.3fs", rec["stage"], rec["status"], rec["elapsed_s"])
    return make_report(config=config.to_dict(), results=results, failures=failures, timing=timer.to_dict())


def run(config: RunConfig, *, cache: Optional[ResultCache] = None) -> Dict[str, Any]:
    """Report document for `config`; served from the cache when possible."""
    report, _ = run_text(config, cache=cache)
    return report


def run_text(config: RunConfig, *, cache: Optional[ResultCache] = None) -> Tuple[Dict[str, Any], str]:
    """(report, canonical JSON text); cache hits return the stored bytes."""
    store = (cache or ResultCache()) if config.use_cache else None
    if store is not None:
        text = store.load_text(config)
        if text is not None:
            return json.loads(text), text
    report = compute(config)
    text = dumps_report(report)
    if store is not None:
        store.store_text(config, text)
    return report, text


def render(report: Dict[str, Any], fmt: str, json_text: Optional[str] = None) -> str:
    if fmt == "csv":
        return report_to_csv(report)
    return json_text if json_text is not None else dumps_report(report)


def exit_code(report: Dict[str, Any]) -> int:
    return 0 if not report.get("failures") else 1


def summary_line(report: Dict[str, Any]) -> str:
    cfg = report.get("config", {})
    res = report.get("results", {})
    status = "OK" if not report.get("failures") else f"FAILED ({len(report['failures'])})"
    parts = [f"{cfg.get('command', '?')}", f"N={cfg.get('params', {}).get('N', '?')}", status]
    match = res.get("spectrum_match")
    if isinstance(match, dict):
        parts.append(f"matched={match.get('matched_fraction')}")
    if "summary" in res:
        parts.append(f"checks={res['summary'].get('passed')}/{res['summary'].get('total')}")
    return " ".join(parts)


def energies_of(report: Dict[str, Any]) -> np.ndarray:
    """Level energies of a solve-bae report as a complex array (UI plots, tests)."""
    levels = ((report.get("results") or {}).get("spectrum_match") or {}).get("levels") or []
    return np.array([complex(*lv["energy"]) for lv in levels], dtype=complex)
