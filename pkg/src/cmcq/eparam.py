"""The entanglement parameter E = 1 - V.

V is the largest t <= 1 for which gamma - t * (kappa_A (+) kappa_B) stays
positive semidefinite. It is known exactly for pure states and
Schmidt-correlated states, where the optimal kappa is a mixture of the CMs
of the product states |ii>; for anything else only lower bounds on E are
available.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import maxmin as mm
from . import numerics as nx
from .covariance import CovarianceMatrix, covariance_matrix, point_cm
from .criteria import CMStatistics, cm_statistics
from .errors import DimensionMismatch, NotPure
from .states import (
    PURITY_TOL,
    DensityMatrix,
    SchmidtCorrelatedState,
    sc_coefficients,
    schmidt_decompose,
    schmidt_vector,
)

BISECTION_EPS = 1e-10


@dataclass(frozen=True)
class EParamResult:
    kind: str  # "exact" or "lower_bound"
    value: float  # clamped to [0, 1]
    raw: float
    source: str

    def to_dict(self) -> dict:
        return {"kind": self.kind, "value": self.value, "raw": self.raw, "source": self.source}


def _exact(alpha0: float, source: str) -> EParamResult:
    v = 1.0 - min(1.0, max(alpha0, 0.0))
    return EParamResult("exact", float(v), float(v), source)


def _bound(raw: float, source: str) -> EParamResult:
    return EParamResult("lower_bound", float(min(max(raw, 0.0), 1.0)), float(raw), source)


# -- bounds for arbitrary states ---------------------------------------------


def e_bound_trace(rho: DensityMatrix, cm: CovarianceMatrix | None = None, stats: CMStatistics | None = None) -> EParamResult:
    """E >= (tr rho_A^2 + tr rho_B^2 + 2 tr|C| - 2) / (2d - 2)."""
    s = stats or cm_statistics(rho, cm)
    if s.d < 2:
        raise DimensionMismatch("E bounds need d >= 2")
    raw = (s.purity_a + s.purity_b + 2 * s.trace_norm_c - 2) / (2 * s.d - 2)
    return _bound(raw, "bound_trace")


def e_bound_tracenorm(rho: DensityMatrix, cm: CovarianceMatrix | None = None, stats: CMStatistics | None = None) -> EParamResult:
    """E >= [ (tr rho_A^2 + tr rho_B^2 - 2)/2 + sqrt((tr rho_A^2 - tr rho_B^2)^2/4 + ||C||_tr^2) ] / (d - 1)."""
    s = stats or cm_statistics(rho, cm)
    if s.d < 2:
        raise DimensionMismatch("E bounds need d >= 2")
    root = np.sqrt(0.25 * (s.purity_a - s.purity_b) ** 2 + s.trace_norm_c**2)
    raw = ((s.purity_a + s.purity_b - 2) / 2 + root) / (s.d - 1)
    return _bound(raw, "bound_tracenorm")


# -- exact values ------------------------------------------------------------


def e_pure_formula(lams) -> float:
    """Closed-form E of sum_i sqrt(lam_i)|ii> for d = 2, 3, 4."""
    lam = schmidt_vector(lams)
    d = lam.size
    r = np.sqrt(lam)
    if d == 2:
        return float(2 * r[0] * r[1])
    if d == 3:
        problem = mm.from_schmidt(lam)
        _, _, i0 = mm.d3_candidates(problem)
        j0, k0 = [x for x in range(3) if x != i0]
        return float(2 * r[i0] * r[j0] + 2 * r[i0] * r[k0] - lam[i0])
    if d == 4:
        return float(max(2 * r[a] * r[b] + 2 * r[c] * r[e] for (a, b), (c, e) in mm.D4_PAIRINGS))
    raise ValueError("closed form only for d = 2, 3, 4")


def e_pure(lams) -> EParamResult:
    """Exact E for a pure state given by its Schmidt coefficients.

    d <= 4 uses the closed forms of the max-min problem; larger d solve the
    same problem as a linear program.
    """
    lam = schmidt_vector(lams)
    if lam.size == 1:
        return _exact(np.inf, "pure_closed_form")
    problem = mm.from_schmidt(lam)
    sol = mm.solve(problem)
    source = "pure_closed_form" if lam.size <= 4 else "pure_maxmin_solver"
    return _exact(sol.alpha0, source)


def e_sc(s: SchmidtCorrelatedState) -> EParamResult:
    return _exact(mm.solve(mm.from_sc(s)).alpha0, "sc_maxmin")


def e_sc_coefficients(rho_ij) -> EParamResult:
    """Exact E for a state supported on |ii><jj| with coefficient matrix rho_ij."""
    return _exact(mm.solve(mm.from_coefficients(rho_ij)).alpha0, "sc_maxmin")


def e_estimate(rho: DensityMatrix, tol: float = nx.DEFAULT_TOL, cm: CovarianceMatrix | None = None) -> tuple[EParamResult, list[EParamResult]]:
    """Best available E for ``rho`` plus every result computed on the way.

    Preference: exact value for pure or Schmidt-correlated input, otherwise
    the larger of the two lower bounds.
    """
    if cm is None:
        cm = covariance_matrix(rho)
    stats = cm_statistics(rho, cm)
    results = [e_bound_trace(rho, stats=stats), e_bound_tracenorm(rho, stats=stats)]
    exact = None
    if rho.purity() >= 1 - PURITY_TOL:
        try:
            exact = e_pure(schmidt_decompose(rho).lambdas)
        except NotPure:
            exact = None
    if exact is None:
        coeff = sc_coefficients(rho, tol)
        if coeff is not None:
            exact = e_sc_coefficients(coeff)
    if exact is not None:
        results.append(exact)
        return exact, results
    return max(results[:2], key=lambda r: r.raw), results


# -- the diagonal ansatz -----------------------------------------------------


@dataclass(frozen=True, eq=False)
class DiagonalAnsatz:
    """kappa_A (+) kappa_B = sum_i p_i gamma(|ii>)."""

    p: np.ndarray

    def __post_init__(self):
        p = np.asarray(self.p, dtype=float).ravel()
        if np.any(p < -1e-12) or abs(p.sum() - 1) > 1e-10:
            raise ValueError(f"ansatz weights must be a probability vector, got {p}")
        object.__setattr__(self, "p", np.clip(p, 0.0, None))

    def kappa(self) -> np.ndarray:
        d = self.p.size
        return sum(pk * point_cm(d, k).gamma for k, pk in enumerate(self.p))


def _check_ansatz(cm: CovarianceMatrix, ansatz: DiagonalAnsatz) -> None:
    if cm.dA != cm.dB or ansatz.p.size != cm.dA:
        raise DimensionMismatch(f"ansatz of length {ansatz.p.size} for a {cm.dA}x{cm.dB} CM")


def feasibility_check(cm: CovarianceMatrix, ansatz: DiagonalAnsatz, t: float, tol: float = nx.DEFAULT_TOL) -> bool:
    """Is gamma - t * kappa PSD up to ``tol``?"""
    _check_ansatz(cm, ansatz)
    return nx.psd_check(cm.gamma - t * ansatz.kappa(), tol)


def v_diag_ansatz(cm: CovarianceMatrix, ansatz: DiagonalAnsatz, tol: float = nx.DEFAULT_TOL, eps: float = BISECTION_EPS) -> float:
    """Largest t in [0, 1] passing :func:`feasibility_check`, by bisection."""
    _check_ansatz(cm, ansatz)
    kappa = ansatz.kappa()

    def ok(t: float) -> bool:
        return nx.psd_check(cm.gamma - t * kappa, tol)

    if ok(1.0):
        return 1.0
    lo, hi = 0.0, 1.0
    while hi - lo > eps:
        mid = 0.5 * (lo + hi)
        if ok(mid):
            lo = mid
        else:
            hi = mid
    return lo
