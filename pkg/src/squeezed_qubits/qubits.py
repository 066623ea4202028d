"""Two-qubit operators and named states.

Basis order is fixed module-wide: (|00>, |01>, |10>, |11>) with |1> the
excited state of each qubit and the first qubit as the most significant bit.
"""

from __future__ import annotations

import math

import numpy as np

BASIS = ("00", "01", "10", "11")
DIM = 4

_sigma_minus = np.array([[0, 1], [0, 0]], dtype=complex)  # |0><1|
_eye2 = np.eye(2, dtype=complex)

S_MINUS = np.kron(_sigma_minus, _eye2) + np.kron(_eye2, _sigma_minus)
S_PLUS = S_MINUS.conj().T
S_MINUS.setflags(write=False)
S_PLUS.setflags(write=False)


def ket(label: str) -> np.ndarray:
    """Computational basis vector, e.g. ``ket("01")``."""
    v = np.zeros(DIM, dtype=complex)
    v[BASIS.index(label)] = 1.0
    return v


def collective_lowering() -> np.ndarray:
    return S_MINUS.copy()


def collective_raising() -> np.ndarray:
    return S_PLUS.copy()


def _check_r(r: float):
    if not r > 0:
        raise ValueError(f"phi1/phi4 are undefined for r <= 0 (got r={r})")


def squeeze_amplitudes(r: float) -> tuple[float, float]:
    """Zero-temperature ``(N, M) = (sinh^2 r, sinh r cosh r)``."""
    return math.sinh(r) ** 2, math.sinh(r) * math.cosh(r)


def _dark_pair(n: float, m: float, theta: float):
    norm = math.sqrt(n * n + m * m)
    if norm == 0:
        raise ValueError("N = M = 0 leaves phi1/phi4 undefined")
    phase = np.exp(-1j * theta)
    phi1 = (n * ket("11") + m * phase * ket("00")) / norm
    phi4 = (m * ket("11") - n * phase * ket("00")) / norm
    return phi1, phi4


def dfs_state_phi1(r: float, theta: float = 0.0, *, n: float | None = None, m: float | None = None):
    """Markovian dark state ``(N|11> + M e^{-i theta}|00>) / sqrt(N^2 + M^2)``.

    ``N`` and ``M`` default to their squeezed-vacuum values for ``r``; pass
    them explicitly for the thermal construction.
    """
    _check_r(r)
    n0, m0 = squeeze_amplitudes(r)
    return _dark_pair(n0 if n is None else n, m0 if m is None else m, theta)[0]


def dfs_state_phi2() -> np.ndarray:
    """Singlet ``(|01> - |10>)/sqrt(2)``."""
    return (ket("01") - ket("10")) / math.sqrt(2)


def dfs_state_phi3() -> np.ndarray:
    """Triplet ``(|01> + |10>)/sqrt(2)``."""
    return (ket("01") + ket("10")) / math.sqrt(2)


def dfs_state_phi4(r: float, theta: float = 0.0, *, n: float | None = None, m: float | None = None):
    _check_r(r)
    n0, m0 = squeeze_amplitudes(r)
    return _dark_pair(n0 if n is None else n, m0 if m is None else m, theta)[1]


def _check_eps(eps: float):
    if not 0.0 <= eps <= 1.0:
        raise ValueError(f"epsilon must lie in [0, 1], got {eps}")


def initial_psi1(eps: float, r: float, theta: float = 0.0, **nm) -> np.ndarray:
    """``eps |phi1> + sqrt(1 - eps^2) |phi4>``."""
    _check_eps(eps)
    return eps * dfs_state_phi1(r, theta, **nm) + math.sqrt(1 - eps * eps) * dfs_state_phi4(r, theta, **nm)


def initial_psi2(eps: float) -> np.ndarray:
    """``eps |phi2> + sqrt(1 - eps^2) |phi3>``."""
    _check_eps(eps)
    return eps * dfs_state_phi2() + math.sqrt(1 - eps * eps) * dfs_state_phi3()


def markov_lindblad_operator(n: float, theta: float) -> np.ndarray:
    """Single jump operator ``sqrt(N+1) S- - sqrt(N) e^{i theta} S+``."""
    return math.sqrt(n + 1) * S_MINUS - math.sqrt(n) * np.exp(1j * theta) * S_PLUS


def density_from_pure(psi, *, atol: float = 1e-12) -> np.ndarray:
    psi = np.asarray(psi, dtype=complex)
    if psi.shape != (DIM,):
        raise ValueError(f"expected a length-{DIM} state vector, got shape {psi.shape}")
    norm = np.linalg.norm(psi)
    if abs(norm - 1) > atol:
        raise ValueError(f"state is not normalised (norm={norm})")
    return np.outer(psi, psi.conj())


def check_density_matrix(rho, *, atol: float = 1e-10, neg_tol: float = 1e-8):
    """Raise ``ValueError`` unless ``rho`` is a 4x4 Hermitian unit-trace PSD matrix."""
    rho = np.asarray(rho)
    if rho.shape != (DIM, DIM):
        raise ValueError(f"density matrix must be {DIM}x{DIM}")
    herm = np.max(np.abs(rho - rho.conj().T))
    if herm > atol:
        raise ValueError(f"density matrix not Hermitian (deviation {herm:.2e})")
    tr = np.trace(rho)
    if abs(tr - 1) > atol:
        raise ValueError(f"density matrix trace is {tr}")
    lo = np.linalg.eigvalsh(0.5 * (rho + rho.conj().T)).min()
    if lo < -neg_tol:
        raise ValueError(f"density matrix has eigenvalue {lo:.2e}")
