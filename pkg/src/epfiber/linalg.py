"""Small dense linear algebra for density matrices (dimension <= 6).

The eigensolver is a cyclic Jacobi iteration. Complex Hermitian input
``H = A + iB`` is mapped to the real symmetric matrix ``[[A, -B], [B, A]]``
whose spectrum is the spectrum of ``H`` with every eigenvalue doubled.
"""

from __future__ import annotations

import numpy as np

HERMITIAN_TOL = 1e-10
TRACE_TOL = 1e-10
PSD_TOL = 1e-10


class InvalidInputError(ValueError):
    """Raised when an argument violates a documented precondition."""


def _jacobi_symmetric(a: np.ndarray, tol: float = 1e-15, max_sweeps: int = 64) -> np.ndarray:
    a = np.array(a, dtype=float, copy=True)
    n = a.shape[0]
    if n == 1:
        return a.diagonal().copy()
    scale = max(np.abs(a).max(), np.finfo(float).tiny)
    for _ in range(max_sweeps):
        off = np.sqrt(np.sum(np.triu(a, 1) ** 2))
        if off <= tol * scale:
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = a[p, q]
                if abs(apq) <= 1e-300:
                    continue
                theta = (a[q, q] - a[p, p]) / (2.0 * apq)
                t = np.sign(theta) / (abs(theta) + np.sqrt(theta * theta + 1.0))
                if theta == 0.0:
                    t = 1.0
                c = 1.0 / np.sqrt(t * t + 1.0)
                s = t * c
                # A <- J^T A J with J the (p, q) Givens rotation
                ap = a[:, p].copy()
                aq = a[:, q].copy()
                a[:, p] = c * ap - s * aq
                a[:, q] = s * ap + c * aq
                ap = a[p, :].copy()
                aq = a[q, :].copy()
                a[p, :] = c * ap - s * aq
                a[q, :] = s * ap + c * aq
                a[p, q] = a[q, p] = 0.0
    return np.sort(a.diagonal())


def eigvalsh(h: np.ndarray) -> np.ndarray:
    """Ascending eigenvalues of a Hermitian matrix.

    Raises InvalidInputError if ``h`` is not square or not Hermitian within
    ``HERMITIAN_TOL``.
    """
    h = np.asarray(h)
    if h.ndim != 2 or h.shape[0] != h.shape[1]:
        raise InvalidInputError(f"expected a square matrix, got shape {h.shape}")
    if np.abs(h - h.conj().T).max(initial=0.0) > HERMITIAN_TOL:
        raise InvalidInputError("matrix is not Hermitian")
    h = 0.5 * (h + h.conj().T)
    if not np.iscomplexobj(h) or not np.any(h.imag):
        return _jacobi_symmetric(h.real)
    a, b = h.real, h.imag
    big = np.block([[a, -b], [b, a]])
    return _jacobi_symmetric(big)[::2]


def partial_transpose(rho: np.ndarray, dims: tuple[int, int], subsystem: int = 1) -> np.ndarray:
    """Partial transpose of a bipartite operator on subsystem 0 or 1."""
    da, db = dims
    r = np.asarray(rho).reshape(da, db, da, db)
    if subsystem == 1:
        r = r.transpose(0, 3, 2, 1)
    elif subsystem == 0:
        r = r.transpose(2, 1, 0, 3)
    else:
        raise InvalidInputError("subsystem must be 0 or 1")
    return r.reshape(da * db, da * db)


def check_density_matrix(rho, dim: int | None = None) -> np.ndarray:
    """Validate and return ``rho`` as a complex density matrix.

    Checks Hermiticity, unit trace and positivity at the module tolerances.
    """
    rho = np.asarray(rho, dtype=complex)
    if rho.ndim != 2 or rho.shape[0] != rho.shape[1]:
        raise InvalidInputError(f"density matrix must be square, got shape {rho.shape}")
    if dim is not None and rho.shape[0] != dim:
        raise InvalidInputError(f"expected a {dim}x{dim} density matrix, got {rho.shape}")
    if abs(np.trace(rho) - 1.0) > TRACE_TOL:
        raise InvalidInputError(f"trace is {np.trace(rho).real:.3g}, expected 1")
    if eigvalsh(rho)[0] < -PSD_TOL:
        raise InvalidInputError("density matrix is not positive semidefinite")
    return rho


def is_density_matrix(rho, dim: int | None = None) -> bool:
    try:
        check_density_matrix(rho, dim)
    except InvalidInputError:
        return False
    return True


def ket(*amplitudes) -> np.ndarray:
    v = np.asarray(amplitudes, dtype=complex)
    return v / np.linalg.norm(v)


def projector(v: np.ndarray) -> np.ndarray:
    v = np.asarray(v, dtype=complex).reshape(-1)
    return np.outer(v, v.conj())
