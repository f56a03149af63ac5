"""Separability tests: the two trace corollaries of the CMC and a PPT cross-check.

Each test returns a :class:`CriterionVerdict` whose ``margin`` is
``statistic - threshold``; a positive margin beyond ``tol`` certifies
entanglement.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from . import numerics as nx
from .covariance import CovarianceMatrix, covariance_matrix
from .errors import DimensionMismatch
from .states import DensityMatrix


@dataclass(frozen=True)
class CriterionVerdict:
    name: str
    statistic: float
    threshold: float
    violated: bool
    margin: float

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "statistic": self.statistic,
            "threshold": self.threshold,
            "margin": self.margin,
            "violated": self.violated,
        }


def _verdict(name: str, statistic: float, threshold: float, tol: float) -> CriterionVerdict:
    margin = statistic - threshold
    return CriterionVerdict(name, float(statistic), float(threshold), bool(margin > tol), float(margin))


class CMStatistics(NamedTuple):
    """Scalar CM data that both corollaries and the E bounds are built from."""

    d: int
    purity_a: float
    purity_b: float
    trace_norm_c: float


def cm_statistics(rho: DensityMatrix, cm: CovarianceMatrix | None = None) -> CMStatistics:
    if rho.dA != rho.dB:
        raise DimensionMismatch(f"CMC corollaries need dA == dB, got {rho.dA}x{rho.dB}")
    if cm is None:
        cm = covariance_matrix(rho)
    pa, pb = rho.local_purities()
    return CMStatistics(rho.dA, pa, pb, cm.trace_norm_C())


def trace_criterion(rho: DensityMatrix, tol: float = nx.DEFAULT_TOL, cm: CovarianceMatrix | None = None) -> CriterionVerdict:
    """2 tr|C| <= [1 - tr(rho_A^2)] + [1 - tr(rho_B^2)] for separable states."""
    s = cm_statistics(rho, cm)
    return _verdict("cmc_trace", 2 * s.trace_norm_c, 2 - s.purity_a - s.purity_b, tol)


def tracenorm_criterion(rho: DensityMatrix, tol: float = nx.DEFAULT_TOL, cm: CovarianceMatrix | None = None) -> CriterionVerdict:
    """||C||_tr^2 <= [1 - tr(rho_A^2)][1 - tr(rho_B^2)] for separable states."""
    s = cm_statistics(rho, cm)
    return _verdict("cmc_tracenorm", s.trace_norm_c**2, (1 - s.purity_a) * (1 - s.purity_b), tol)


def ppt_check(rho: DensityMatrix, tol: float = nx.DEFAULT_TOL) -> CriterionVerdict:
    """Violated when the partial transpose has an eigenvalue below ``-tol``."""
    pt = nx.partial_transpose(rho.m, rho.dA, rho.dB)
    lmin = float(np.linalg.eigvalsh(0.5 * (pt + pt.conj().T))[0])
    return _verdict("ppt", -lmin, 0.0, tol)
