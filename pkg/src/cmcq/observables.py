"""Local orthogonal observables and their bipartite lift.

The local basis on C^d is ordered as

* ``D_i = |i><i|`` for i = 0..d-1,
* ``X_ij = (|i><j| + |j><i|)/sqrt(2)`` for i < j (lexicographic),
* ``Y_ij = i(|i><j| - |j><i|)/sqrt(2)`` for i < j (lexicographic),

so every operator is Hermitian and ``tr(G_a G_b) = delta_ab``.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import lru_cache

import numpy as np


@dataclass(frozen=True, eq=False)
class ObservableBasis:
    d: int
    ops: np.ndarray  # shape (d*d, d, d)
    labels: tuple[str, ...]

    def __len__(self) -> int:
        return self.ops.shape[0]


@dataclass(frozen=True, eq=False)
class BipartiteObservables:
    """``A_i (x) 1`` for the dA**2 local A operators, then ``1 (x) B_j``."""

    dA: int
    dB: int
    ms: np.ndarray  # shape (dA**2 + dB**2, dA*dB, dA*dB)
    local_a: ObservableBasis
    local_b: ObservableBasis

    def __len__(self) -> int:
        return self.ms.shape[0]


def pairs(d: int) -> list[tuple[int, int]]:
    return list(itertools.combinations(range(d), 2))


@lru_cache(maxsize=None)
def _loo(d: int) -> ObservableBasis:
    ops = np.zeros((d * d, d, d), dtype=complex)
    labels = []
    for i in range(d):
        ops[i, i, i] = 1.0
        labels.append(f"D{i}")
    s = 1 / np.sqrt(2)
    n = d
    for i, j in pairs(d):
        ops[n, i, j] = ops[n, j, i] = s
        labels.append(f"X{i}{j}")
        n += 1
    for i, j in pairs(d):
        ops[n, i, j] = 1j * s
        ops[n, j, i] = -1j * s
        labels.append(f"Y{i}{j}")
        n += 1
    ops.setflags(write=False)
    return ObservableBasis(d, ops, tuple(labels))


def loo_basis(d: int) -> ObservableBasis:
    if d < 1:
        raise ValueError("dimension must be positive")
    return _loo(int(d))


@lru_cache(maxsize=None)
def _bipartite(dA: int, dB: int) -> BipartiteObservables:
    a, b = loo_basis(dA), loo_basis(dB)
    ms = np.concatenate(
        [
            np.einsum("aij,kl->aikjl", a.ops, np.eye(dB)).reshape(dA * dA, dA * dB, dA * dB),
            np.einsum("ij,akl->aikjl", np.eye(dA), b.ops).reshape(dB * dB, dA * dB, dA * dB),
        ]
    )
    ms.setflags(write=False)
    return BipartiteObservables(dA, dB, ms, a, b)


def bipartite_observables(dA: int, dB: int) -> BipartiteObservables:
    if dA < 1 or dB < 1:
        raise ValueError("dimensions must be positive")
    return _bipartite(int(dA), int(dB))


def gram_matrix(ops: np.ndarray) -> np.ndarray:
    """Matrix of tr(G_a G_b)."""
    return np.einsum("aij,bji->ab", ops, ops)


def expand(h: np.ndarray, basis: ObservableBasis) -> np.ndarray:
    """Coefficients tr(G_a h) of ``h`` in the basis."""
    return np.einsum("aij,ji->a", basis.ops, h)
