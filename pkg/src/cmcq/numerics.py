"""Dense matrix helpers shared by the rest of the package.

Matrices are plain ``numpy`` arrays. Everything here is pure and returns new
arrays.
"""

from __future__ import annotations

import numpy as np

from .errors import DimensionMismatch, NotHermitian

DEFAULT_TOL = 1e-9


def hermiticity_deviation(m: np.ndarray) -> float:
    m = np.asarray(m)
    if m.size == 0:
        return 0.0
    return float(np.max(np.abs(m - m.conj().T)))


def _require_square(m: np.ndarray) -> None:
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise DimensionMismatch(f"expected a square matrix, got shape {m.shape}")


def _require_hermitian(m: np.ndarray, tol: float) -> None:
    dev = hermiticity_deviation(m)
    if dev > tol:
        raise NotHermitian([("hermiticity", dev)])


def hermitian_eigenvalues(m, tol: float = DEFAULT_TOL) -> np.ndarray:
    """Ascending eigenvalues of a Hermitian matrix.

    Raises ``NotHermitian`` if ``max|m - m^H|`` exceeds ``tol``. The input is
    symmetrized before diagonalization so tiny asymmetries do not leak in.
    """
    m = np.asarray(m)
    _require_square(m)
    _require_hermitian(m, tol)
    h = 0.5 * (m + m.conj().T)
    return np.linalg.eigvalsh(h)


def singular_values(m) -> np.ndarray:
    m = np.asarray(m)
    if m.size == 0:
        return np.zeros(0)
    return np.linalg.svd(m, compute_uv=False)


def trace_norm(m) -> float:
    """Sum of singular values."""
    return float(np.sum(singular_values(m)))


def kron(a, b) -> np.ndarray:
    return np.kron(np.asarray(a), np.asarray(b))


def _check_bipartite(m: np.ndarray, dA: int, dB: int) -> None:
    if m.ndim != 2 or m.shape != (dA * dB, dA * dB):
        raise DimensionMismatch(f"matrix of shape {m.shape} does not act on {dA}x{dB}")


def partial_trace(m, dA: int, dB: int, keep: str = "A") -> np.ndarray:
    """Reduce a bipartite operator to one party.

    ``keep`` is ``"A"`` or ``"B"``; the other party is traced out.
    """
    m = np.asarray(m)
    _check_bipartite(m, dA, dB)
    t = m.reshape(dA, dB, dA, dB)
    if keep == "A":
        return np.einsum("ijkj->ik", t)
    if keep == "B":
        return np.einsum("ijil->jl", t)
    raise ValueError(f"keep must be 'A' or 'B', got {keep!r}")


def partial_transpose(m, dA: int, dB: int) -> np.ndarray:
    """Transpose on party B."""
    m = np.asarray(m)
    _check_bipartite(m, dA, dB)
    return m.reshape(dA, dB, dA, dB).transpose(0, 3, 2, 1).reshape(dA * dB, dA * dB)


def psd_check(m, tol: float = DEFAULT_TOL) -> bool:
    """True iff the smallest eigenvalue is at least ``-tol``."""
    ev = hermitian_eigenvalues(m, tol)
    return bool(ev.size == 0 or ev[0] >= -tol)


def psd_sqrt(m, tol: float = DEFAULT_TOL) -> np.ndarray:
    """Principal square root of a PSD matrix; eigenvalues in [-tol, 0) are clipped."""
    m = np.asarray(m)
    _require_hermitian(m, tol)
    w, v = np.linalg.eigh(0.5 * (m + m.conj().T))
    if w.size and w[0] < -tol:
        raise ValueError(f"matrix is not PSD (min eigenvalue {w[0]:.3e})")
    w = np.clip(w, 0.0, None)
    return (v * np.sqrt(w)) @ v.conj().T


def random_unitary(d: int, rng: np.random.Generator) -> np.ndarray:
    """Haar-random unitary via QR of a complex Ginibre matrix."""
    z = (rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))) / np.sqrt(2)
    q, r = np.linalg.qr(z)
    ph = np.diag(r) / np.abs(np.diag(r))
    return q * ph
