"""Master-equation generators and time integration for the two-qubit state.

Both generators act in the interaction picture: there is no coherent
``-i[H, rho]`` term.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .bath import (
    BathSpec,
    CoefficientSet,
    CoefficientTable,
    QuadratureConfig,
    coefficients,
    correlation_M,
    occupancy_N,
)
from .jacobi import jacobi_eigvalsh
from .qubits import S_MINUS, S_PLUS

SP, SM = np.array(S_PLUS), np.array(S_MINUS)
SPSM = SP @ SM
SMSP = SM @ SP
SPSP = SP @ SP
SMSM = SM @ SM

REGIMES = ("markov", "nonmarkov", "markov_unsqueezed")


class IntegrationError(RuntimeError):
    def __init__(self, message: str, t: float):
        super().__init__(f"{message} at t={t:.6g}")
        self.t = t


def nonmarkov_rhs(rho: np.ndarray, c: CoefficientSet) -> np.ndarray:
    """Time-local generator with coefficients (Delta, mu, alpha)."""
    d, mu, al = c.delta, c.mu, c.alpha
    a = SP @ rho @ SM
    b = SM @ rho @ SP
    out = (
        2 * d.real * a
        - d * (rho @ SMSP)
        - d.conjugate() * (SMSP @ rho)
        + 2 * mu.real * b
        - mu * (SPSM @ rho)
        - mu.conjugate() * (rho @ SPSM)
    )
    if al != 0:
        out = out + al * (2 * (SP @ rho @ SP) - SPSP @ rho - rho @ SPSP)
        out = out + al.conjugate() * (2 * (SM @ rho @ SM) - SMSM @ rho - rho @ SMSM)
    return out


def _dissipator(x: np.ndarray, y: np.ndarray, xy: np.ndarray, rho: np.ndarray) -> np.ndarray:
    # 2 x rho y - {xy, rho}
    return 2 * (x @ rho @ y) - xy @ rho - rho @ xy


def markov_rhs(rho: np.ndarray, gamma: float, n: float, m: float, theta: float) -> np.ndarray:
    """Broadband squeezed-bath Lindblad generator; ``m = 0`` gives the unsqueezed bath."""
    out = 0.5 * gamma * (n + 1) * _dissipator(SM, SP, SPSM, rho)
    out = out + 0.5 * gamma * n * _dissipator(SP, SM, SMSP, rho)
    if m != 0:
        ph = np.exp(1j * theta)
        out = out - 0.5 * gamma * m * ph * _dissipator(SP, SP, SPSP, rho)
        out = out - 0.5 * gamma * m * np.conj(ph) * _dissipator(SM, SM, SMSM, rho)
    return out


def markov_parameters(bath: BathSpec) -> tuple[float, float, float]:
    """Markov ``(N, M, theta)`` evaluated at the qubit frequency.

    At ``kt == 0`` this is ``(sinh^2 r, sinh r cosh r, theta)``.
    """
    n = float(occupancy_N(bath.omega0, bath))
    m = float(abs(correlation_M(bath.omega0, bath)))
    return n, m, bath.theta


@dataclass(frozen=True)
class GeneratorSpec:
    """Which master equation to integrate and its parameters.

    For ``regime == "nonmarkov"`` the coefficients come from ``source``: a
    :class:`CoefficientTable`, any callable ``t -> CoefficientSet``, or a
    :class:`BathSpec` for direct quadrature at every call (slow, for
    validation).
    """

    regime: str
    gamma: float = 1.0
    n: float = 0.0
    m: float = 0.0
    theta: float = 0.0
    source: object = None
    quad: QuadratureConfig | None = None

    def __post_init__(self):
        if self.regime not in REGIMES:
            raise ValueError(f"unknown regime {self.regime!r}")
        if self.regime == "nonmarkov":
            if self.source is None:
                raise ValueError("nonmarkov regime needs a coefficient source")
        else:
            if not self.gamma > 0 or self.n < 0 or self.m < 0:
                raise ValueError("markov regime needs gamma > 0, N >= 0, M >= 0")
            if self.regime == "markov_unsqueezed":
                object.__setattr__(self, "m", 0.0)

    @classmethod
    def markov(cls, gamma: float, n: float, m: float, theta: float = 0.0):
        return cls("markov", gamma=gamma, n=n, m=m, theta=theta)

    @classmethod
    def markov_unsqueezed(cls, gamma: float, n: float):
        return cls("markov_unsqueezed", gamma=gamma, n=n)

    @classmethod
    def markov_from_bath(cls, bath: BathSpec, gamma: float = 1.0):
        n, m, theta = markov_parameters(bath)
        return cls.markov(gamma, n, m, theta)

    @classmethod
    def nonmarkov(cls, source, quad: QuadratureConfig | None = None):
        return cls("nonmarkov", source=source, quad=quad)

    @property
    def coverage(self) -> float:
        """Largest time the coefficient source can serve."""
        if self.regime == "nonmarkov" and isinstance(self.source, CoefficientTable):
            return self.source.t_max
        return math.inf

    def coefficient_function(self) -> Callable[[float], CoefficientSet]:
        src = self.source
        if isinstance(src, BathSpec):
            quad = self.quad or QuadratureConfig()
            return lambda t: coefficients(t, src, quad)
        return src

    def rhs_function(self) -> Callable[[float, np.ndarray], np.ndarray]:
        if self.regime == "nonmarkov":
            coef = self.coefficient_function()
            return lambda t, rho: nonmarkov_rhs(rho, coef(t))
        g, n, m, th = self.gamma, self.n, self.m, self.theta
        return lambda t, rho: markov_rhs(rho, g, n, m, th)


@dataclass(frozen=True)
class IntegratorConfig:
    """Integrator settings.

    ``rk45_adaptive`` lands exactly on every multiple of ``sample_dt`` and
    records the state there; ``rk4_fixed`` takes steps of ``dt`` and records
    every ``sample_stride``-th step.
    """

    method: str = "rk45_adaptive"
    t_max: float = 10.0
    rel_tol: float = 1e-8
    abs_tol: float = 1e-10
    dt_min: float = 1e-12
    dt_max: float | None = None
    sample_dt: float = 0.01
    dt: float = 1e-3
    sample_stride: int = 10

    def __post_init__(self):
        if self.method not in ("rk45_adaptive", "rk4_fixed"):
            raise ValueError(f"unknown integrator {self.method!r}")
        if not self.t_max > 0:
            raise ValueError("t_max must be positive")
        if not (self.rel_tol > 0 and self.abs_tol > 0 and self.dt > 0 and self.sample_dt > 0):
            raise ValueError("tolerances and step sizes must be positive")
        if self.dt_max is not None and not self.dt_min <= self.dt_max:
            raise ValueError("dt_min must not exceed dt_max")
        if self.sample_stride < 1:
            raise ValueError("sample_stride must be >= 1")


@dataclass
class Trajectory:
    times: np.ndarray
    states: np.ndarray
    trace_dev: np.ndarray
    herm_dev: np.ndarray
    min_eig: np.ndarray = field(default=None)
    max_step_trace_dev: float = 0.0
    max_step_herm_dev: float = 0.0
    n_steps: int = 0
    n_rejected: int = 0

    def __post_init__(self):
        if self.min_eig is None:
            self.min_eig = jacobi_eigvalsh(self.states)[:, 0]

    def concurrence(self) -> np.ndarray:
        from .entanglement import concurrence

        return np.atleast_1d(concurrence(self.states))


# Dormand-Prince 5(4) tableau
_C = np.array([0, 1 / 5, 3 / 10, 4 / 5, 8 / 9, 1, 1])
_A = [
    [],
    [1 / 5],
    [3 / 40, 9 / 40],
    [44 / 45, -56 / 15, 32 / 9],
    [19372 / 6561, -25360 / 2187, 64448 / 6561, -212 / 729],
    [9017 / 3168, -355 / 33, 46732 / 5247, 49 / 176, -5103 / 18656],
    [35 / 384, 0, 500 / 1113, 125 / 192, -2187 / 6784, 11 / 84],
]
_B5 = np.array([35 / 384, 0, 500 / 1113, 125 / 192, -2187 / 6784, 11 / 84, 0])
_B4 = np.array([5179 / 57600, 0, 7571 / 16695, 393 / 640, -92097 / 339200, 187 / 2100, 1 / 40])
_E = _B5 - _B4


def _dp_step(f, t, y, h, k1):
    k = [k1]
    for i in range(1, 7):
        yi = y + h * sum(a * kj for a, kj in zip(_A[i], k) if a != 0)
        k.append(f(t + _C[i] * h, yi))
    y5 = y + h * sum(b * kj for b, kj in zip(_B5, k) if b != 0)
    err = h * sum(e * kj for e, kj in zip(_E, k) if e != 0)
    return y5, err


def _rk4_step(f, t, y, h):
    k1 = f(t, y)
    k2 = f(t + h / 2, y + h / 2 * k1)
    k3 = f(t + h / 2, y + h / 2 * k2)
    k4 = f(t + h, y + h * k3)
    return y + h / 6 * (k1 + 2 * k2 + 2 * k3 + k4)


def _enforce(rho):
    herm = float(np.max(np.abs(rho - rho.conj().T)))
    tr = np.trace(rho)
    trace_dev = float(abs(tr - 1))
    rho = 0.5 * (rho + rho.conj().T)
    return rho / np.trace(rho).real, trace_dev, herm


def evolve(rho0, gen: GeneratorSpec, cfg: IntegratorConfig) -> Trajectory:
    """Integrate the master equation from ``rho0`` over ``[0, cfg.t_max]``.

    After every accepted step the state is Hermitised and renormalised; the
    deviations removed there are recorded first.
    """
    rho = np.array(rho0, dtype=complex)
    if rho.shape != (4, 4):
        raise ValueError("rho0 must be 4x4")
    if gen.coverage < cfg.t_max * (1 - 1e-12):
        raise ValueError(
            f"coefficient source covers [0, {gen.coverage}] but t_max is {cfg.t_max}"
        )
    f = gen.rhs_function()
    if cfg.method == "rk4_fixed":
        return _evolve_rk4(f, rho, cfg)
    dt_max = cfg.dt_max
    if dt_max is None:
        src = gen.source
        dt_max = src.h if isinstance(src, CoefficientTable) else cfg.sample_dt
    return _evolve_rk45(f, rho, cfg, dt_max)


def _evolve_rk4(f, rho, cfg: IntegratorConfig) -> Trajectory:
    n_steps = int(round(cfg.t_max / cfg.dt))
    h = cfg.t_max / n_steps
    times, states, tdev, hdev = [0.0], [rho.copy()], [0.0], [0.0]
    max_t = max_h = 0.0
    for k in range(1, n_steps + 1):
        t = (k - 1) * h
        rho, td, hd = _enforce(_rk4_step(f, t, rho, h))
        max_t, max_h = max(max_t, td), max(max_h, hd)
        if k % cfg.sample_stride == 0 or k == n_steps:
            times.append(k * h)
            states.append(rho.copy())
            tdev.append(td)
            hdev.append(hd)
    return Trajectory(
        np.array(times), np.array(states), np.array(tdev), np.array(hdev),
        max_step_trace_dev=max_t, max_step_herm_dev=max_h, n_steps=n_steps,
    )


def _evolve_rk45(f, rho, cfg: IntegratorConfig, dt_max: float) -> Trajectory:
    n_samples = int(round(cfg.t_max / cfg.sample_dt))
    sample_times = cfg.t_max * np.arange(n_samples + 1) / n_samples
    times, states, tdev, hdev = [0.0], [rho.copy()], [0.0], [0.0]
    max_t = max_h = 0.0
    n_steps = n_rej = 0

    t = 0.0
    h = min(dt_max, cfg.sample_dt, 1e-3)
    k1 = f(t, rho)
    for target in sample_times[1:]:
        while t < target:
            step = min(h, target - t)
            landing = target - (t + step) <= 1e-12 * max(1.0, target)
            y5, err = _dp_step(f, t, rho, step, k1)
            if not (np.all(np.isfinite(y5)) and np.all(np.isfinite(err))):
                raise IntegrationError("non-finite state", t)
            scale = cfg.abs_tol + cfg.rel_tol * np.maximum(np.abs(rho), np.abs(y5))
            enorm = float(np.sqrt(np.mean(np.abs(err / scale) ** 2)))
            if enorm <= 1.0:
                t = target if landing else t + step
                rho, td, hd = _enforce(y5)
                max_t, max_h = max(max_t, td), max(max_h, hd)
                k1 = f(t, rho)
                n_steps += 1
                grow = 5.0 if enorm == 0 else min(5.0, 0.9 * enorm ** -0.2)
                if step == h:
                    h = min(dt_max, h * grow)
            else:
                n_rej += 1
                h = step * max(0.2, 0.9 * enorm ** -0.2)
                if h < cfg.dt_min:
                    raise IntegrationError(f"step size underflow (h={h:.3e})", t)
        times.append(t)
        states.append(rho.copy())
        tdev.append(td)
        hdev.append(hd)
    return Trajectory(
        np.array(times), np.array(states), np.array(tdev), np.array(hdev),
        max_step_trace_dev=max_t, max_step_herm_dev=max_h,
        n_steps=n_steps, n_rejected=n_rej,
    )
