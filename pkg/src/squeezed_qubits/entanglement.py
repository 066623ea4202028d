"""Wootters concurrence and sudden-death / revival detection."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .jacobi import jacobi_eigh

SIGMA_Y = np.array([[0, -1j], [1j, 0]])
YY = np.kron(SIGMA_Y, SIGMA_Y)

CLAMP_TOL = 1e-6
HARD_NEGATIVITY = 1e-4
ROUNDOFF = 64 * np.finfo(float).eps


class NegativeStateError(ValueError):
    """A density matrix is too far from positive for its concurrence to mean anything."""


def spin_flip(rho):
    """``(sy x sy) rho* (sy x sy)`` with entrywise conjugation in the product basis."""
    rho = np.asarray(rho, dtype=complex)
    return YY @ np.conj(rho) @ YY


def _sqrt_psd(rho):
    w, v = jacobi_eigh(rho)
    lowest = np.min(w, axis=-1)
    if np.any(lowest < -HARD_NEGATIVITY):
        raise NegativeStateError(
            f"density matrix eigenvalue {lowest.min():.3e} below -{HARD_NEGATIVITY:g}"
        )
    # eigenvalues at roundoff level are zeros; their square roots (~1e-8) are not negligible
    floor = ROUNDOFF * np.max(np.abs(w), axis=-1, keepdims=True)
    root = np.sqrt(np.where(w > floor, w, 0.0))
    return (v * root[..., None, :]) @ np.conj(np.swapaxes(v, -1, -2))


def wootters_roots(rho):
    """Square roots of the eigenvalues of ``rho rho~``, descending.

    Computed through the Hermitian matrix ``sqrt(rho) rho~ sqrt(rho)``, which
    has the same spectrum as the non-Hermitian product.
    """
    rho = np.asarray(rho, dtype=complex)
    s = _sqrt_psd(rho)
    r = s @ spin_flip(rho) @ s
    w, _ = jacobi_eigh(r)
    floor = ROUNDOFF * np.max(np.abs(w), axis=-1, keepdims=True)
    return np.sqrt(np.where(w > floor, w, 0.0))[..., ::-1]


def concurrence(rho):
    """Concurrence ``max(0, l1 - l2 - l3 - l4)`` of one matrix or a stack of them."""
    lam = wootters_roots(rho)
    c = lam[..., 0] - lam[..., 1] - lam[..., 2] - lam[..., 3]
    c = np.clip(c, 0.0, 1.0)
    return float(c) if np.ndim(c) == 0 else c


def pure_state_concurrence(psi) -> float:
    a00, a01, a10, a11 = np.asarray(psi, dtype=complex)
    return float(2 * abs(a00 * a11 - a01 * a10))


@dataclass
class EsdReport:
    dead_intervals: list[tuple[float, float]] = field(default_factory=list)
    revived: list[bool] = field(default_factory=list)
    asymptotic_concurrence: float = 0.0

    @property
    def cycle_count(self) -> int:
        return len(self.dead_intervals)

    @property
    def death_times(self) -> list[float]:
        return [start for start, _ in self.dead_intervals]

    @property
    def revival_times(self) -> list[float]:
        return [end for (_, end), ok in zip(self.dead_intervals, self.revived) if ok]

    @property
    def first_death_time(self) -> float:
        return self.dead_intervals[0][0] if self.dead_intervals else float("nan")


def _crossing(t0, c0, t1, c1, level):
    if c1 == c0:
        return t1
    return t0 + (level - c0) / (c1 - c0) * (t1 - t0)


def detect_esd(times, conc, threshold: float = 1e-3, min_width: int = 5) -> EsdReport:
    """Find maximal runs with ``C <= threshold``.

    Runs of fewer than ``min_width`` samples are dropped as chatter. Interval
    ends are refined by linear interpolation of the threshold crossing; a run
    that reaches the last sample ends at ``times[-1]`` and is marked as not
    revived.
    """
    times = np.asarray(times, dtype=float)
    conc = np.asarray(conc, dtype=float)
    if times.shape != conc.shape or times.ndim != 1:
        raise ValueError("times and concurrence must be 1-D arrays of equal length")
    n = len(times)
    report = EsdReport()
    if n == 0:
        return report
    tail = max(1, int(np.ceil(0.1 * n)))
    report.asymptotic_concurrence = float(np.mean(conc[-tail:]))

    dead = conc <= threshold
    edges = np.diff(dead.astype(np.int8), prepend=0, append=0)
    starts = np.flatnonzero(edges == 1)
    stops = np.flatnonzero(edges == -1)  # exclusive
    for i, j in zip(starts, stops):
        if j - i < min_width:
            continue
        t_start = times[0] if i == 0 else _crossing(times[i - 1], conc[i - 1], times[i], conc[i], threshold)
        if j == n:
            report.dead_intervals.append((float(t_start), float(times[-1])))
            report.revived.append(False)
        else:
            t_end = _crossing(times[j - 1], conc[j - 1], times[j], conc[j], threshold)
            report.dead_intervals.append((float(t_start), float(t_end)))
            report.revived.append(True)
    return report
