"""Concurrence: pure-state values, the two-qubit formula, and bounds from E."""

from __future__ import annotations

import itertools
from dataclasses import dataclass

import numpy as np

from . import numerics as nx
from .covariance import CovarianceMatrix
from .eparam import EParamResult, e_estimate
from .errors import DimensionMismatch
from .states import DensityMatrix, schmidt_vector

# C >= factor * E, proven for these local dimensions only
TRANSFER_FACTORS = {2: 1.0, 3: 0.5, 4: 1.0 / 3.0}

SIGMA_Y = np.array([[0, -1j], [1j, 0]])


@dataclass(frozen=True)
class ConcurrenceBound:
    value: float
    kind: str  # exact_pure | exact_wootters | lower_from_E | lower_combined
    factor: float = 1.0
    e: EParamResult | None = None

    def to_dict(self) -> dict:
        out = {"value": self.value, "kind": self.kind, "factor": self.factor}
        if self.e is not None:
            out["e"] = self.e.to_dict()
        return out


def concurrence_pure(lams) -> ConcurrenceBound:
    """sqrt(d/(d-1)) * sqrt(1 - tr rho_A^2), normalized to [0, 1]."""
    lam = schmidt_vector(lams)
    d = lam.size
    if d == 1:
        return ConcurrenceBound(0.0, "exact_pure")
    lin = max(1.0 - float(np.sum(lam**2)), 0.0)
    return ConcurrenceBound(float(min(np.sqrt(d / (d - 1) * lin), 1.0)), "exact_pure")


def concurrence_pure_schmidt(lams) -> float:
    """The same quantity written as sqrt(2d/(d-1)) * sqrt(sum_{i<j} lam_i lam_j)."""
    lam = schmidt_vector(lams)
    d = lam.size
    if d == 1:
        return 0.0
    s = sum(lam[i] * lam[j] for i, j in itertools.combinations(range(d), 2))
    return float(np.sqrt(2 * d / (d - 1)) * np.sqrt(s))


def wootters_concurrence(rho: DensityMatrix) -> ConcurrenceBound:
    """max(0, mu_1 - mu_2 - mu_3 - mu_4) for a two-qubit state.

    The mu are the singular values of tau = W^T (sy x sy) W with rho = W W^dag
    built from the numerically nonzero eigenpairs. This avoids square roots
    of round-off eigenvalues of rho rho~, which would cost ~1e-8 accuracy on
    low-rank inputs.
    """
    if (rho.dA, rho.dB) != (2, 2):
        raise DimensionMismatch("the two-qubit formula needs a 2x2 system")
    ev, vecs = np.linalg.eigh(rho.m)
    keep = ev > ev.size * np.finfo(float).eps * max(ev.max(), 1.0)
    w = vecs[:, keep] * np.sqrt(ev[keep])
    yy = np.kron(SIGMA_Y, SIGMA_Y)
    mu = np.zeros(4)
    sv = np.linalg.svd(w.T @ yy @ w, compute_uv=False)
    mu[: sv.size] = sv
    return ConcurrenceBound(float(max(0.0, mu[0] - mu[1:].sum())), "exact_wootters")


def concurrence_lower_bound(rho: DensityMatrix, tol: float = nx.DEFAULT_TOL, cm: CovarianceMatrix | None = None) -> ConcurrenceBound:
    """factor(d) * E for d = 2, 3, 4, using the best available E estimate."""
    if rho.dA != rho.dB or rho.dA not in TRANSFER_FACTORS:
        raise DimensionMismatch(f"no concurrence transfer factor for {rho.dA}x{rho.dB}")
    factor = TRANSFER_FACTORS[rho.dA]
    e, _ = e_estimate(rho, tol, cm)
    kind = "lower_from_E" if e.kind == "exact" else "lower_combined"
    return ConcurrenceBound(float(factor * e.value), kind, factor, e)


def schmidt_sum_inequality_check(lams, tol: float = 1e-12) -> bool:
    """sqrt(2d/(d-1)) sqrt(sum lam_i lam_j) >= (2/(d-1)) sum sqrt(lam_i lam_j)."""
    lam = schmidt_vector(lams)
    d = lam.size
    if d == 1:
        return True
    lhs = concurrence_pure_schmidt(lam)
    rhs = 2 / (d - 1) * sum(np.sqrt(lam[i] * lam[j]) for i, j in itertools.combinations(range(d), 2))
    return bool(lhs >= rhs - tol)
