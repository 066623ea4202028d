"""Cyclic Jacobi eigensolver for small complex Hermitian matrices.

Works on stacks of matrices (``(..., n, n)``); every matrix in the stack
receives the same sweep order with its own rotation angles.
"""

from __future__ import annotations

import numpy as np


class EigenConvergenceError(RuntimeError):
    pass


def jacobi_eigh(a, *, tol: float = 1e-14, max_sweeps: int = 50):
    """Eigen-decompose Hermitian matrices.

    Parameters
    ----------
    a : array_like, shape (..., n, n)
        Hermitian input. Only the Hermitian part is used.
    tol : float
        Sweeps stop once the off-diagonal Frobenius norm is below
        ``tol * ||a||_F`` for every matrix in the stack.

    Returns
    -------
    w : ndarray, shape (..., n)
        Eigenvalues in ascending order.
    v : ndarray, shape (..., n, n)
        Unitary matrix whose columns are the eigenvectors.
    """
    a = np.asarray(a, dtype=complex)
    a = 0.5 * (a + np.conj(np.swapaxes(a, -1, -2)))
    n = a.shape[-1]
    v = np.broadcast_to(np.eye(n, dtype=complex), a.shape).copy()
    scale = np.sqrt(np.sum(np.abs(a) ** 2, axis=(-2, -1)))
    target = tol * np.where(scale > 0, scale, 1.0)
    offdiag = ~np.eye(n, dtype=bool)

    for _ in range(max_sweeps):
        off = np.sqrt(np.sum(np.abs(a[..., offdiag]) ** 2, axis=-1))
        if np.all(off <= target):
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                _rotate(a, v, p, q)
    else:
        off = np.sqrt(np.sum(np.abs(a[..., offdiag]) ** 2, axis=-1))
        if np.any(off > target):
            raise EigenConvergenceError(
                f"Jacobi sweeps did not converge (off-diagonal norm {off.max():.2e})"
            )

    w = np.real(np.diagonal(a, axis1=-2, axis2=-1))
    order = np.argsort(w, axis=-1)
    w = np.take_along_axis(w, order, axis=-1)
    v = np.take_along_axis(v, order[..., None, :], axis=-1)
    return w, v


def _rotate(a, v, p, q):
    apq = a[..., p, q]
    mag = np.abs(apq)
    active = mag > 0
    phase = np.where(active, apq / np.where(active, mag, 1.0), 1.0)
    # after the phase change the (p, q) element is real and equal to mag
    tau = (a[..., q, q].real - a[..., p, p].real) / (2.0 * np.where(active, mag, 1.0))
    t = np.where(tau >= 0, 1.0, -1.0) / (np.abs(tau) + np.sqrt(1.0 + tau * tau))
    t = np.where(active, t, 0.0)
    c = 1.0 / np.sqrt(1.0 + t * t)
    s = t * c
    cph = np.conj(phase)
    c_ = c[..., None]
    s_ = s[..., None]
    # columns: A <- A U with U_pp = c, U_pq = s, U_qp = -s e^{-i phi}, U_qq = c e^{-i phi}
    for m in (a, v):
        col_p = m[..., :, p].copy()
        col_q = m[..., :, q].copy()
        m[..., :, p] = c_ * col_p - s_ * cph[..., None] * col_q
        m[..., :, q] = s_ * col_p + c_ * cph[..., None] * col_q
    # rows: A <- U^dagger A
    row_p = a[..., p, :].copy()
    row_q = a[..., q, :].copy()
    a[..., p, :] = c_ * row_p - s_ * phase[..., None] * row_q
    a[..., q, :] = s_ * row_p + c_ * phase[..., None] * row_q
    a[..., p, q] = 0.0
    a[..., q, p] = 0.0


def jacobi_eigvalsh(a, **kwargs):
    return jacobi_eigh(a, **kwargs)[0]
