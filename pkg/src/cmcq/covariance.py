"""Covariance matrices of bipartite states with respect to local orthogonal observables."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.linalg import block_diag

from . import numerics as nx
from .errors import DimensionMismatch
from .observables import BipartiteObservables, bipartite_observables, pairs
from .states import DensityMatrix, _schmidt_unsorted


@dataclass(frozen=True, eq=False)
class CovarianceMatrix:
    """gamma = [[A, C], [C^T, B]] with A of size dA**2 and B of size dB**2."""

    dA: int
    dB: int
    gamma: np.ndarray

    @property
    def nA(self) -> int:
        return self.dA * self.dA

    @property
    def A(self) -> np.ndarray:
        return self.gamma[: self.nA, : self.nA]

    @property
    def B(self) -> np.ndarray:
        return self.gamma[self.nA :, self.nA :]

    @property
    def C(self) -> np.ndarray:
        return self.gamma[: self.nA, self.nA :]

    def trace_norm_C(self) -> float:
        return nx.trace_norm(self.C)


def covariance_matrix(rho: DensityMatrix, obs: BipartiteObservables | None = None) -> CovarianceMatrix:
    """gamma_ab = <M_a M_b + M_b M_a>/2 - <M_a><M_b>."""
    if obs is None:
        obs = bipartite_observables(rho.dA, rho.dB)
    if (obs.dA, obs.dB) != (rho.dA, rho.dB):
        raise DimensionMismatch(f"observables for {obs.dA}x{obs.dB}, state on {rho.dA}x{rho.dB}")
    ms = obs.ms
    n = ms.shape[0]
    means = np.real(np.einsum("aij,ji->a", ms, rho.m))
    p = np.matmul(rho.m, ms).reshape(n, -1)
    mt = ms.transpose(0, 2, 1).reshape(n, -1)
    second = np.real(p @ mt.T)
    gamma = second - np.outer(means, means)
    gamma = 0.5 * (gamma + gamma.T)
    return CovarianceMatrix(rho.dA, rho.dB, gamma)


def pure_schmidt_cm(lams) -> CovarianceMatrix:
    """Closed-form CM of sum_i sqrt(lam_i)|ii> in the D/X/Y observable order."""
    lam = _schmidt_unsorted(lams)
    d = lam.size
    dblock = np.diag(lam) - np.outer(lam, lam)
    pr = pairs(d)
    local = np.array([0.5 * (lam[i] + lam[k]) for i, k in pr])
    corr = np.array([np.sqrt(lam[i] * lam[k]) for i, k in pr])
    a = block_diag(dblock, np.diag(local), np.diag(local)) if pr else dblock
    c = block_diag(dblock, np.diag(corr), np.diag(-corr)) if pr else dblock.copy()
    gamma = np.block([[a, c], [c.T, a]])
    return CovarianceMatrix(d, d, gamma)


def point_cm(d: int, k: int) -> CovarianceMatrix:
    """CM of the product state |kk>."""
    lam = np.zeros(d)
    lam[k] = 1.0
    return pure_schmidt_cm(lam)
