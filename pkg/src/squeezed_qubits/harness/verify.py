"""Per-preset pass/fail checks."""

from __future__ import annotations

import tempfile

import numpy as np

from .presets import Expectation, Preset
from .runner import RunFailure, RunResult, run

TRACE_BOUND = 1e-9
HERM_BOUND = 1e-10
RUNTIME_BOUND = 60.0
MARKOV_POSITIVITY = -1e-6


def _check(name, measured, bound, passed, verdict=None):
    return {
        "name": name,
        "measured": measured,
        "bound": bound,
        "verdict": verdict or ("pass" if passed else "fail"),
    }


def structural_checks(result: RunResult) -> list[dict]:
    checks = []
    for regime, rr in result.regimes.items():
        tr = rr.trajectory
        checks.append(_check(f"{regime}: max |Tr rho - 1| per step", tr.max_step_trace_dev, TRACE_BOUND,
                             tr.max_step_trace_dev < TRACE_BOUND))
        checks.append(_check(f"{regime}: max |rho - rho^dagger| per step", tr.max_step_herm_dev, HERM_BOUND,
                             tr.max_step_herm_dev < HERM_BOUND))
        lo = float(np.min(tr.min_eig))
        if regime.startswith("markov"):
            checks.append(_check(f"{regime}: min eigenvalue", lo, MARKOV_POSITIVITY, lo >= MARKOV_POSITIVITY))
        else:
            checks.append(_check(f"{regime}: min eigenvalue (reported)", lo, None, True, "info"))
    checks.append(_check("runtime [s]", result.runtime, RUNTIME_BOUND, result.runtime < RUNTIME_BOUND))
    return checks


def expectation_check(result: RunResult, exp: Expectation) -> dict:
    rr = result.regimes.get(exp.regime)
    label = f"{exp.regime}: {exp.kind}"
    if rr is None:
        return _check(label, None, None, False)
    t = rr.trajectory.times
    c = rr.concurrence
    window = t <= (exp.t_end if exp.t_end is not None else np.inf) + 1e-12
    if exp.kind == "cycles_equal":
        return _check(f"{label} == {exp.n}", rr.esd.cycle_count, exp.n, rr.esd.cycle_count == exp.n)
    if exp.kind == "cycles_at_least":
        return _check(f"{label} >= {exp.n}", rr.esd.cycle_count, exp.n, rr.esd.cycle_count >= exp.n)
    if exp.kind == "constant":
        ref = c[0] if exp.value is None else exp.value
        dev = float(np.max(np.abs(c[window] - ref)))
        return _check(f"{label} C={ref:.6g} on [0, {exp.t_end}]", dev, exp.tol, dev < exp.tol)
    if exp.kind == "deviates":
        dev = float(np.max(np.abs(c[window] - c[0])))
        return _check(f"{label} on [0, {exp.t_end}]", dev, exp.tol, dev > exp.tol)
    if exp.kind == "asymptote_below":
        a = rr.esd.asymptotic_concurrence
        return _check(label, a, exp.tol, a < exp.tol)
    if exp.kind == "drift":
        dev = float(np.max(np.abs(c[window] - c[0])))
        return _check(f"{label} on [0, {exp.t_end}]", dev, None, True, "info")
    raise ValueError(f"unknown expectation kind {exp.kind!r}")


def verify(preset: Preset, out_dir=None) -> dict:
    """Run a preset and evaluate structural checks plus its expectations."""
    cfg = preset.config
    tmp = None
    if out_dir is None:
        tmp = tempfile.TemporaryDirectory()
        out_dir = tmp.name
    try:
        try:
            result = run(cfg, out_dir)
            error = None
        except RunFailure as exc:
            result, error = exc.result, str(exc)
        checks = structural_checks(result)
        checks += [expectation_check(result, e) for e in preset.expectations]
        if error:
            checks.append(_check("numerical failure", error, None, False))
    finally:
        if tmp is not None:
            tmp.cleanup()
    passed = all(c["verdict"] != "fail" for c in checks)
    return {"preset": cfg.name, "passed": passed, "checks": checks}
