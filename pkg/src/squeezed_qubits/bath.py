"""Squeezed thermal reservoir with an Ohmic, Gaussian-cutoff spectral density.

Natural units: frequencies in units of the qubit resonance (omega0 = 1 by
default) and temperature given as KT in the same units; ``kt == 0`` is the
squeezed vacuum.

The time-dependent master-equation coefficients are

    Delta(t) = int J(w) N(w)     K(w0 - w, t) dw
    mu(t)    = int J(w) [1+N(w)] K(w0 - w, t) dw
    alpha(t) = int J(w) M(w) e^{i(w0-w)t} K(w0 - w, t) dw

with the inner time integral done analytically,
K(d, t) = (e^{idt} - 1) / (id).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .quadrature import QuadratureError, integrate

__all__ = [
    "BathSpec",
    "CoefficientSet",
    "CoefficientTable",
    "QuadratureConfig",
    "QuadratureError",
    "anomalous_kernel",
    "build_coefficient_table",
    "coefficients",
    "correlation_M",
    "default_h_coeff",
    "memory_kernel",
    "occupancy_N",
    "planck_occupancy",
    "spectral_density",
]

TAIL_CUTOFFS = 6.0
SERIES_THRESHOLD = 1e-6


@dataclass(frozen=True)
class BathSpec:
    """Reservoir parameters.

    Attributes
    ----------
    coupling : float
        Dimensionless Ohmic coupling strength (Gamma).
    omega0 : float
        Qubit transition frequency.
    cutoff : float
        Gaussian high-frequency cutoff omega_c.
    r, theta : float
        Squeeze magnitude and phase; theta is reduced to [0, 2 pi).
    kt : float
        Bath temperature as an energy, same units as omega0.
    """

    coupling: float = 1.0 / math.pi
    omega0: float = 1.0
    cutoff: float = 1.0
    r: float = 0.0
    theta: float = 0.0
    kt: float = 0.0

    def __post_init__(self):
        for name in ("coupling", "omega0", "cutoff"):
            value = getattr(self, name)
            if not (np.isfinite(value) and value > 0):
                raise ValueError(f"{name} must be positive, got {value}")
        if not (np.isfinite(self.r) and self.r >= 0):
            raise ValueError(f"r must be >= 0, got {self.r}")
        if not (np.isfinite(self.kt) and self.kt >= 0):
            raise ValueError(f"kt must be >= 0, got {self.kt}")
        if not np.isfinite(self.theta):
            raise ValueError("theta must be finite")
        object.__setattr__(self, "theta", float(self.theta) % (2 * math.pi))

    @property
    def vacuum_N(self) -> float:
        return math.sinh(self.r) ** 2

    @property
    def vacuum_M(self) -> float:
        return math.sinh(self.r) * math.cosh(self.r)


@dataclass(frozen=True)
class QuadratureConfig:
    tol: float = 1e-9
    max_subdivisions: int = 20000
    omega_max: float | None = None
    # seed panels are divided by this factor; 2 = "doubled resolution"
    resolution: int = 1

    def __post_init__(self):
        if self.tol <= 0:
            raise ValueError("tol must be positive")
        if self.max_subdivisions < 1 or self.resolution < 1:
            raise ValueError("max_subdivisions and resolution must be >= 1")


@dataclass(frozen=True)
class CoefficientSet:
    delta: complex
    mu: complex
    alpha: complex
    t: float = 0.0


# -- spectral functions ------------------------------------------------------


def planck_occupancy(omega, kt: float):
    """Bose-Einstein occupancy ``1 / (exp(omega/kt) - 1)``; zero when ``kt == 0``."""
    omega = np.asarray(omega, dtype=float)
    if kt < 0:
        raise ValueError("kt must be >= 0")
    if kt == 0:
        if np.any(omega < 0):
            raise ValueError("omega must be >= 0")
        return np.zeros_like(omega)[()] if omega.ndim else 0.0
    if np.any(omega <= 0):
        raise ValueError("planck_occupancy diverges at omega <= 0 for kt > 0")
    n = 1.0 / np.expm1(omega / kt)
    return n[()] if n.ndim else float(n)


def _omega_times_n(omega, kt: float):
    # omega * n(omega), finite at omega = 0 where it equals kt
    omega = np.asarray(omega, dtype=float)
    if kt == 0:
        return np.zeros_like(omega)
    x = omega / kt
    safe = np.where(x > 0, x, 1.0)
    return np.where(x > 0, omega / np.expm1(safe), kt)


def occupancy_N(omega, bath: BathSpec):
    """Squeezed thermal occupancy ``n (cosh^2 r + sinh^2 r) + sinh^2 r``."""
    ch2 = math.cosh(bath.r) ** 2
    sh2 = math.sinh(bath.r) ** 2
    n = planck_occupancy(omega, bath.kt)
    return n * (ch2 + sh2) + sh2


def correlation_M(omega, bath: BathSpec):
    """Anomalous correlation ``-cosh r sinh r e^{i theta} (2 n + 1)``."""
    n = planck_occupancy(omega, bath.kt)
    return -math.cosh(bath.r) * math.sinh(bath.r) * np.exp(1j * bath.theta) * (2 * n + 1)


def spectral_density(omega, bath: BathSpec):
    """Ohmic spectral density with Gaussian cutoff, ``Gamma w exp(-w^2/wc^2)``."""
    omega = np.asarray(omega, dtype=float)
    j = bath.coupling * omega * np.exp(-((omega / bath.cutoff) ** 2))
    return j[()] if j.ndim else float(j)


def _spectral_weights(omega: np.ndarray, bath: BathSpec):
    """Return ``J N``, ``J`` and ``J (2n + 1)`` on a node array, finite at w = 0."""
    envelope = bath.coupling * np.exp(-((omega / bath.cutoff) ** 2))
    j = envelope * omega
    jn = envelope * _omega_times_n(omega, bath.kt)
    ch2 = math.cosh(bath.r) ** 2
    sh2 = math.sinh(bath.r) ** 2
    j_big_n = jn * (ch2 + sh2) + j * sh2
    j_two_n_plus_one = 2 * jn + j
    return j_big_n, j, j_two_n_plus_one


# -- kernels -----------------------------------------------------------------


def memory_kernel(delta, t):
    """``(e^{i delta t} - 1) / (i delta)``, the integral of e^{i delta s} over [0, t]."""
    delta = np.asarray(delta, dtype=float)
    t = np.asarray(t, dtype=float)
    x = delta * t
    small = np.abs(x) < SERIES_THRESHOLD
    safe_delta = np.where(small, 1.0, delta)
    # half-angle form avoids the cancellation in e^{ix} - 1
    direct = np.exp(0.5j * x) * (2.0 * np.sin(0.5 * x) / safe_delta)
    series = t * (1.0 + 0.5j * x - x * x / 6.0)
    out = np.where(small, series, direct)
    return out[()] if out.ndim else complex(out)


def anomalous_kernel(delta, t):
    """``e^{i delta t} K(delta, t)``, the integral of e^{i delta (t + s)} over s in [0, t]."""
    delta = np.asarray(delta, dtype=float)
    t = np.asarray(t, dtype=float)
    out = np.exp(1j * delta * t) * np.asarray(memory_kernel(delta, t))
    return out[()] if out.ndim else complex(out)


# -- coefficients ------------------------------------------------------------


def _omega_max(bath: BathSpec, quad: QuadratureConfig) -> float:
    if quad.omega_max is not None:
        return quad.omega_max
    return bath.omega0 + TAIL_CUTOFFS * bath.cutoff


def _seed_width(bath: BathSpec, quad: QuadratureConfig, t_max: float) -> float:
    width = bath.cutoff / 8.0
    if t_max > 0:
        width = min(width, math.pi / (4.0 * t_max))
    return width / quad.resolution


def _coefficient_integrals(times: np.ndarray, bath: BathSpec, quad: QuadratureConfig):
    """Integrate values and time derivatives of (Delta, mu, alpha) on ``times``.

    Returns two complex arrays of shape ``(len(times), 3)``.
    """
    times = np.asarray(times, dtype=float)
    squeeze = -math.cosh(bath.r) * math.sinh(bath.r) * np.exp(1j * bath.theta)

    def integrand(omega):
        w_big_n, w_j, w_two_n1 = _spectral_weights(omega, bath)
        d = (bath.omega0 - omega)[:, None]
        kern = memory_kernel(d, times[None, :])
        phase = np.exp(1j * d * times[None, :])
        out = np.empty((omega.size, 6, times.size), dtype=complex)
        out[:, 0] = w_big_n[:, None] * kern
        out[:, 1] = w_j[:, None] * kern
        out[:, 2] = w_two_n1[:, None] * (phase * kern)
        out[:, 3] = w_big_n[:, None] * phase
        out[:, 4] = w_j[:, None] * phase
        out[:, 5] = w_two_n1[:, None] * (2 * phase * phase - phase)
        return out

    t_max = float(times.max()) if times.size else 0.0
    res = integrate(
        integrand,
        0.0,
        _omega_max(bath, quad),
        tol=quad.tol / max(1.0, abs(squeeze) * 2),
        seed_width=_seed_width(bath, quad, t_max),
        max_subdivisions=quad.max_subdivisions,
    )
    v = res.value
    values = np.stack([v[0], v[0] + v[1], squeeze * v[2]], axis=-1)
    derivs = np.stack([v[3], v[3] + v[4], squeeze * v[5]], axis=-1)
    return values, derivs


def coefficients(t: float, bath: BathSpec, quad: QuadratureConfig | None = None) -> CoefficientSet:
    """Evaluate (Delta, mu, alpha) at a single time by direct quadrature."""
    quad = quad or QuadratureConfig()
    if t < 0:
        raise ValueError("t must be >= 0")
    if t == 0:
        return CoefficientSet(0j, 0j, 0j, 0.0)
    values, _ = _coefficient_integrals(np.array([t]), bath, quad)
    delta, mu, alpha = values[0]
    if bath.r == 0:
        alpha = 0j
    return CoefficientSet(complex(delta), complex(mu), complex(alpha), float(t))


def bath_correlation(t, bath: BathSpec, quad: QuadratureConfig | None = None) -> np.ndarray:
    """Time derivatives of (Delta, mu, alpha), shape ``(len(t), 3)``.

    ``dDelta/dt`` is the normal-ordered bath correlation at lag t and
    ``dalpha/dt = 2 g(2t) - g(t)`` for the anomalous correlation g.
    """
    quad = quad or QuadratureConfig()
    t = np.atleast_1d(np.asarray(t, dtype=float))
    _, derivs = _coefficient_integrals(t, bath, quad)
    return derivs


def default_h_coeff(bath: BathSpec) -> float:
    """Table spacing ``min(0.005 / gamma_eff, period / 20)``.

    ``gamma_eff = 2 pi J(w0) (2 N(w0) + 1)`` is the long-time total decay
    rate scale of the populations.
    """
    n0 = float(occupancy_N(bath.omega0, bath))
    gamma_eff = 2 * math.pi * spectral_density(bath.omega0, bath) * (2 * n0 + 1)
    period = 2 * math.pi / bath.omega0
    return min(0.005 / gamma_eff, period / 20)


@dataclass(frozen=True)
class CoefficientTable:
    """Coefficients on a uniform grid with cubic Hermite interpolation.

    Node values and exact time derivatives come from the same quadrature
    pass, so the interpolant reproduces node values exactly and is C1.
    """

    h: float
    values: np.ndarray = field(repr=False)
    derivatives: np.ndarray = field(repr=False)
    interpolation_error: float | None = None

    @property
    def grid(self) -> np.ndarray:
        return self.h * np.arange(len(self.values))

    @property
    def t_max(self) -> float:
        return self.h * (len(self.values) - 1)

    def __len__(self):
        return len(self.values)

    def interpolate(self, t: float) -> np.ndarray:
        """Return the complex triple (Delta, mu, alpha) at time ``t``."""
        n = len(self.values)
        s = t / self.h
        if s < -1e-9 or s > (n - 1) * (1 + 1e-12) + 1e-9:
            raise ValueError(f"t={t} outside coefficient table range [0, {self.t_max}]")
        k = round(s)
        if abs(s - k) <= 1e-9:
            return self.values[min(max(k, 0), n - 1)].copy()
        i = min(int(s), n - 2)
        u = s - i
        u2 = u * u
        u3 = u2 * u
        h00 = 2 * u3 - 3 * u2 + 1
        h10 = u3 - 2 * u2 + u
        h01 = -2 * u3 + 3 * u2
        h11 = u3 - u2
        v, d = self.values, self.derivatives
        return h00 * v[i] + h10 * self.h * d[i] + h01 * v[i + 1] + h11 * self.h * d[i + 1]

    def __call__(self, t: float) -> CoefficientSet:
        delta, mu, alpha = self.interpolate(t)
        return CoefficientSet(complex(delta), complex(mu), complex(alpha), float(t))


def build_coefficient_table(
    bath: BathSpec,
    t_max: float,
    h_coeff: float | None = None,
    quad: QuadratureConfig | None = None,
    *,
    check_midpoints: bool = False,
) -> CoefficientTable:
    """Tabulate (Delta, mu, alpha) on ``[0, t_max]``.

    The step actually used is ``t_max / ceil(t_max / h_coeff)`` so the grid
    ends exactly at ``t_max``. With ``check_midpoints`` the coefficients are
    also computed directly at every half-step and the largest deviation of
    the interpolant is stored as ``interpolation_error``.
    """
    quad = quad or QuadratureConfig()
    if h_coeff is None:
        h_coeff = default_h_coeff(bath)
    if not t_max > 0 or not h_coeff > 0:
        raise ValueError("t_max and h_coeff must be positive")
    n_steps = int(math.ceil(t_max / h_coeff - 1e-9))
    h = t_max / n_steps
    grid = h * np.arange(n_steps + 1)
    values, derivs = _coefficient_integrals(grid, bath, quad)
    values[0] = 0
    if bath.r == 0:
        values[:, 2] = 0
        derivs[:, 2] = 0
    table = CoefficientTable(h, values, derivs)
    if check_midpoints:
        mids = grid[:-1] + 0.5 * h
        direct, _ = _coefficient_integrals(mids, bath, quad)
        if bath.r == 0:
            direct[:, 2] = 0
        interp = np.array([table.interpolate(t) for t in mids])
        err = float(np.max(np.abs(interp - direct)))
        table = CoefficientTable(h, values, derivs, err)
    return table
