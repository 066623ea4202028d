"""Run experiments and parameter sweeps, writing CSV/SVG outputs."""

from __future__ import annotations

import logging
import math
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from functools import lru_cache
from pathlib import Path

import numpy as np

from ..bath import BathSpec, CoefficientTable, QuadratureConfig, QuadratureError, build_coefficient_table
from ..dynamics import GeneratorSpec, IntegrationError, Trajectory, evolve, markov_parameters
from ..entanglement import EsdReport, NegativeStateError, detect_esd
from ..jacobi import EigenConvergenceError
from . import output
from .config import ExperimentConfig, get_path, set_path

log = logging.getLogger(__name__)

NUMERICAL_ERRORS = (IntegrationError, QuadratureError, NegativeStateError, EigenConvergenceError, FloatingPointError)


class RunFailure(RuntimeError):
    """A numerical failure; ``result`` holds whatever finished before it."""

    def __init__(self, message: str, result: "RunResult"):
        super().__init__(message)
        self.result = result


@dataclass
class RegimeResult:
    trajectory: Trajectory
    concurrence: np.ndarray
    esd: EsdReport
    runtime: float


@dataclass
class RunResult:
    config: ExperimentConfig
    regimes: dict[str, RegimeResult] = field(default_factory=dict)
    table: CoefficientTable | None = None
    runtime: float = 0.0
    error: str | None = None
    out_dir: Path | None = None

    def summary(self) -> dict:
        per = {}
        for name, rr in self.regimes.items():
            tr = rr.trajectory
            per[name] = {
                "cycle_count": rr.esd.cycle_count,
                "dead_intervals": rr.esd.dead_intervals,
                "revived": rr.esd.revived,
                "first_death_time": None if math.isnan(rr.esd.first_death_time) else rr.esd.first_death_time,
                "asymptotic_concurrence": rr.esd.asymptotic_concurrence,
                "initial_concurrence": float(rr.concurrence[0]),
                "max_step_trace_dev": tr.max_step_trace_dev,
                "max_step_herm_dev": tr.max_step_herm_dev,
                "min_eig": float(np.min(tr.min_eig)),
                "n_steps": tr.n_steps,
                "n_rejected": tr.n_rejected,
                "runtime_s": rr.runtime,
            }
        return {
            "name": self.config.name,
            "status": "failed" if self.error else "ok",
            "error": self.error,
            "runtime_s": self.runtime,
            "regimes": per,
            "config": self.config.to_dict(),
        }


@lru_cache(maxsize=16)
def cached_table(bath: BathSpec, t_max: float, h_coeff: float | None, quad: QuadratureConfig) -> CoefficientTable:
    return build_coefficient_table(bath, t_max, h_coeff, quad)


def generator_for(cfg: ExperimentConfig, regime: str, table: CoefficientTable | None = None) -> GeneratorSpec:
    if regime == "nonmarkov":
        if table is None:
            table = cached_table(cfg.bath, cfg.integrator.t_max, cfg.h_coeff, cfg.quadrature)
        return GeneratorSpec.nonmarkov(table)
    n, m, theta = markov_parameters(cfg.bath)
    if regime == "markov_unsqueezed":
        return GeneratorSpec.markov_unsqueezed(cfg.markov_gamma, n)
    return GeneratorSpec.markov(cfg.markov_gamma, n, m, theta)


def simulate(cfg: ExperimentConfig) -> RunResult:
    """Integrate every selected regime; raises :class:`RunFailure` on numerical trouble."""
    start = time.perf_counter()
    result = RunResult(cfg)
    rho0 = cfg.initial_state.density(cfg.bath)
    try:
        for regime in cfg.regimes:
            t0 = time.perf_counter()
            if regime == "nonmarkov":
                result.table = cached_table(cfg.bath, cfg.integrator.t_max, cfg.h_coeff, cfg.quadrature)
            gen = generator_for(cfg, regime, result.table)
            traj = evolve(rho0, gen, cfg.integrator)
            conc = traj.concurrence()
            esd = detect_esd(traj.times, conc, cfg.esd.threshold, cfg.esd.min_width)
            result.regimes[regime] = RegimeResult(traj, conc, esd, time.perf_counter() - t0)
            log.info("%s/%s: %d dead interval(s)", cfg.name, regime, esd.cycle_count)
    except NUMERICAL_ERRORS as exc:
        result.error = f"{type(exc).__name__}: {exc}"
        result.runtime = time.perf_counter() - start
        raise RunFailure(result.error, result) from exc
    result.runtime = time.perf_counter() - start
    return result


def write_outputs(result: RunResult, out_dir) -> Path:
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    for regime, rr in result.regimes.items():
        output.write_trajectory_csv(out / f"trajectory_{regime}.csv", rr.trajectory, rr.concurrence)
        output.write_esd_csv(out / f"esd_{regime}.csv", rr.esd)
    if result.table is not None:
        output.write_coefficients_csv(out / "coefficients.csv", result.table)
    if result.regimes:
        series = {k: (rr.trajectory.times, rr.concurrence) for k, rr in result.regimes.items()}
        output.write_concurrence_svg(out / "concurrence.svg", series, title=result.config.name)
    output.write_json(out / "summary.json", result.summary())
    result.out_dir = out
    return out


def run(cfg: ExperimentConfig, out_dir=None) -> RunResult:
    """Simulate and write all outputs; partial outputs are written on failure."""
    out_dir = Path(out_dir if out_dir is not None else cfg.output)
    try:
        result = simulate(cfg)
    except RunFailure as exc:
        write_outputs(exc.result, out_dir)
        raise
    write_outputs(result, out_dir)
    return result


def _sweep_one(args):
    cfg, out_dir = args
    try:
        res = run(cfg, out_dir)
    except RunFailure as exc:
        res = exc.result
    # trajectories stay on disk; only the summary crosses process boundaries
    return res.summary()


def sweep(base: ExperimentConfig, path: str, values, out_dir=None, jobs: int = 1) -> list[dict]:
    """Run ``base`` once per value of the scalar at ``path``.

    Writes one run directory per value plus ``sweep_summary.csv``.
    """
    out = Path(out_dir if out_dir is not None else base.output)
    out.mkdir(parents=True, exist_ok=True)
    cfgs = [set_path(base, path, v) for v in values]
    tasks = [(c, out / f"{path}={v:.12g}") for c, v in zip(cfgs, values)]
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            summaries = list(pool.map(_sweep_one, tasks))
    else:
        summaries = [_sweep_one(t) for t in tasks]

    header = ["value"]
    for r in base.regimes:
        header += [f"{r}_asymptotic_concurrence", f"{r}_first_death_time", f"{r}_cycle_count"]
    header.append("status")
    rows = []
    for v, s in zip(values, summaries):
        row = [v]
        for r in base.regimes:
            info = s["regimes"].get(r)
            if info is None:
                row += [math.nan, math.nan, -1]
            else:
                fd = info["first_death_time"]
                row += [info["asymptotic_concurrence"], math.nan if fd is None else fd, info["cycle_count"]]
        row.append(0 if s["status"] == "ok" else 1)
        rows.append(row)
    output.write_csv(out / "sweep_summary.csv", header, rows)
    return summaries


__all__ = [
    "RunFailure", "RunResult", "RegimeResult", "cached_table", "generator_for",
    "simulate", "run", "sweep", "write_outputs", "get_path",
]
