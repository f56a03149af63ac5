"""Bipartite states: validation, Schmidt analysis, special families, filtering."""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import NamedTuple, Sequence

import numpy as np

from . import numerics as nx
from .errors import (
    BadSchmidt,
    DimensionMismatch,
    NotHermitian,
    NotPSD,
    NotPure,
    NotSubnormalized,
    StateValidationError,
    TraceNotOne,
    ZeroProbability,
)

PURITY_TOL = 1e-8
SCHMIDT_SUM_TOL = 1e-10


@dataclass(frozen=True, eq=False)
class DensityMatrix:
    """A bipartite density matrix on C^dA (x) C^dB.

    Build through :func:`validate_density` (or the constructors in this
    module) rather than directly, so the invariants are checked.
    """

    dA: int
    dB: int
    m: np.ndarray

    @property
    def dim(self) -> int:
        return self.dA * self.dB

    def reduced(self, keep: str = "A") -> np.ndarray:
        return nx.partial_trace(self.m, self.dA, self.dB, keep)

    def purity(self) -> float:
        return float(np.real(np.trace(self.m @ self.m)))

    def local_purities(self) -> tuple[float, float]:
        ra, rb = self.reduced("A"), self.reduced("B")
        return float(np.real(np.trace(ra @ ra))), float(np.real(np.trace(rb @ rb)))


def validate_density(m, dA: int, dB: int, tol: float = nx.DEFAULT_TOL) -> DensityMatrix:
    """Check Hermiticity, unit trace and positivity; return a DensityMatrix.

    Every violated invariant is collected. The raised exception's class is
    that of the first violation (Hermiticity, then trace, then positivity)
    and its ``violations`` attribute lists all of them.
    """
    m = np.array(m, dtype=complex)
    if m.ndim != 2 or m.shape != (dA * dB, dA * dB):
        raise DimensionMismatch(f"matrix of shape {m.shape} does not act on {dA}x{dB}")
    if not np.all(np.isfinite(m)):
        raise StateValidationError([("non-finite entries", float("nan"))])
    violations = []
    kinds = []
    herm = nx.hermiticity_deviation(m)
    if herm > tol:
        violations.append(("hermiticity", herm))
        kinds.append(NotHermitian)
    tr_dev = abs(np.trace(m) - 1.0)
    if tr_dev > tol:
        violations.append(("trace != 1", float(tr_dev)))
        kinds.append(TraceNotOne)
    h = 0.5 * (m + m.conj().T)
    lmin = float(np.linalg.eigvalsh(h)[0])
    if lmin < -tol:
        violations.append(("negative eigenvalue", -lmin))
        kinds.append(NotPSD)
    if violations:
        raise kinds[0](violations)
    return DensityMatrix(dA, dB, h)


def schmidt_vector(lams: Sequence[float], tol: float = SCHMIDT_SUM_TOL, renormalize: bool = False) -> np.ndarray:
    """Validate Schmidt coefficients and return them sorted descending.

    Ties keep their original relative order.
    """
    lam = np.asarray(lams, dtype=float).ravel()
    if lam.size == 0 or not np.all(np.isfinite(lam)):
        raise BadSchmidt("Schmidt coefficients must be a non-empty finite sequence")
    if np.any(lam < -tol):
        raise BadSchmidt(f"negative Schmidt coefficient {lam.min():.3e}")
    lam = np.clip(lam, 0.0, None)
    total = lam.sum()
    if renormalize:
        if total <= 0:
            raise BadSchmidt("Schmidt coefficients sum to zero")
        lam = lam / total
    elif abs(total - 1.0) > tol:
        raise BadSchmidt(f"Schmidt coefficients sum to {total!r}, not 1")
    order = np.argsort(-lam, kind="stable")
    return lam[order]


def _schmidt_unsorted(lams, tol: float = SCHMIDT_SUM_TOL) -> np.ndarray:
    lam = np.asarray(lams, dtype=float).ravel()
    schmidt_vector(lam, tol)
    return np.clip(lam, 0.0, None)


def schmidt_ket(lams) -> np.ndarray:
    """The vector sum_i sqrt(lam_i) |ii>, in the order given."""
    lam = _schmidt_unsorted(lams)
    d = lam.size
    psi = np.zeros(d * d, dtype=complex)
    psi[np.arange(d) * (d + 1)] = np.sqrt(lam)
    return psi


def pure_from_schmidt(lams) -> DensityMatrix:
    psi = schmidt_ket(lams)
    d = int(round(np.sqrt(psi.size)))
    return DensityMatrix(d, d, np.outer(psi, psi.conj()))


def pure_state(psi, dA: int, dB: int) -> DensityMatrix:
    psi = np.asarray(psi, dtype=complex).ravel()
    if psi.size != dA * dB:
        raise DimensionMismatch(f"state vector of length {psi.size} does not live in {dA}x{dB}")
    psi = psi / np.linalg.norm(psi)
    return DensityMatrix(dA, dB, np.outer(psi, psi.conj()))


class SchmidtDecomposition(NamedTuple):
    lambdas: np.ndarray
    basis_a: np.ndarray  # columns are |a_i>
    basis_b: np.ndarray  # columns are |b_i>


def schmidt_decompose(rho: DensityMatrix, tol: float = PURITY_TOL) -> SchmidtDecomposition:
    """Schmidt coefficients (descending) and local bases of a pure state.

    The returned coefficient vector has length ``min(dA, dB)``, zero padded.
    """
    purity = rho.purity()
    if purity < 1.0 - tol:
        raise NotPure(f"purity {purity:.12f} below 1 - {tol:g}")
    w, v = np.linalg.eigh(rho.m)
    psi = v[:, -1]
    coeff = psi.reshape(rho.dA, rho.dB)
    u, s, vh = np.linalg.svd(coeff)
    lam = s**2
    lam = lam / lam.sum()
    k = lam.size
    recon = np.einsum("i,ai,ib->ab", s, u[:, :k], vh[:k, :]).ravel()
    err = float(np.max(np.abs(np.outer(recon, recon.conj()) - rho.m)))
    if err > tol:
        raise NotPure(f"rank-one reconstruction error {err:.3e}")
    return SchmidtDecomposition(lam, u[:, :k], vh[:k, :].T)


@dataclass(frozen=True, eq=False)
class SchmidtCorrelatedState:
    """Mixture sum_u q_u |psi_u><psi_u| with |psi_u> = sum_i sqrt(lam_i^(u)) |ii>."""

    weights: np.ndarray
    rows: np.ndarray

    def __post_init__(self):
        q = np.asarray(self.weights, dtype=float).ravel()
        rows = np.atleast_2d(np.asarray(self.rows, dtype=float))
        if rows.shape[0] != q.size:
            raise DimensionMismatch(f"{q.size} weights for {rows.shape[0]} rows")
        if np.any(q < -SCHMIDT_SUM_TOL) or abs(q.sum() - 1.0) > SCHMIDT_SUM_TOL:
            raise BadSchmidt(f"weights must be a probability vector, got {q}")
        for row in rows:
            _schmidt_unsorted(row)
        object.__setattr__(self, "weights", np.clip(q, 0.0, None))
        object.__setattr__(self, "rows", np.clip(rows, 0.0, None))

    @property
    def d(self) -> int:
        return self.rows.shape[1]

    def coefficient_matrix(self) -> np.ndarray:
        """rho_ij = sum_u q_u sqrt(lam_i^(u) lam_j^(u))."""
        r = np.sqrt(self.rows)
        return np.einsum("u,ui,uj->ij", self.weights, r, r)


def sc_build(s: SchmidtCorrelatedState) -> DensityMatrix:
    d = s.d
    m = np.zeros((d * d, d * d), dtype=complex)
    idx = np.arange(d) * (d + 1)
    m[np.ix_(idx, idx)] = s.coefficient_matrix()
    return DensityMatrix(d, d, m)


def sc_coefficients(rho: DensityMatrix, tol: float = nx.DEFAULT_TOL) -> np.ndarray | None:
    """Return rho_ij if rho is supported on |ii><jj| with real nonnegative entries.

    Returns ``None`` when the state is not of that form in the computational basis.
    """
    if rho.dA != rho.dB:
        return None
    d = rho.dA
    idx = np.arange(d) * (d + 1)
    rest = rho.m.copy()
    block = rest[np.ix_(idx, idx)].copy()
    rest[np.ix_(idx, idx)] = 0
    if np.max(np.abs(rest), initial=0.0) > tol:
        return None
    if np.max(np.abs(block.imag), initial=0.0) > tol or block.real.min() < -tol:
        return None
    return np.clip(block.real, 0.0, None)


_BELL_SIGNS = np.array(
    [
        [1, 0, 0, 1],  # Phi+
        [1, 0, 0, -1],  # Phi-
        [0, 1, 1, 0],  # Psi+
        [0, 1, -1, 0],  # Psi-
    ],
    dtype=complex,
)
BELL_VECTORS = _BELL_SIGNS / np.sqrt(2)
# projectors with entries exactly 0 or +-1/2
_BELL_PROJECTORS = 0.5 * np.einsum("ki,kj->kij", _BELL_SIGNS, _BELL_SIGNS)


def bell_diagonal(p: Sequence[float], tol: float = SCHMIDT_SUM_TOL) -> DensityMatrix:
    """sum_k p_k |B_k><B_k| over (Phi+, Phi-, Psi+, Psi-)."""
    p = np.asarray(p, dtype=float)
    if p.shape != (4,) or np.any(p < -tol) or abs(p.sum() - 1) > tol:
        raise ValueError(f"need four probabilities, got {p}")
    m = np.einsum("k,kij->ij", p, _BELL_PROJECTORS)
    return DensityMatrix(2, 2, m)


# -- filtering ---------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class FilterPair:
    FA: np.ndarray
    FB: np.ndarray

    def __post_init__(self):
        fa = np.asarray(self.FA, dtype=complex)
        fb = np.asarray(self.FB, dtype=complex)
        for name, f in (("FA", fa), ("FB", fb)):
            if f.ndim != 2 or f.shape[0] != f.shape[1]:
                raise DimensionMismatch(f"{name} must be square, got {f.shape}")
            norm = nx.singular_values(f)[0] if f.size else 0.0
            if norm > 1 + nx.DEFAULT_TOL:
                raise NotSubnormalized(f"{name} has operator norm {norm:.6f} > 1")
        object.__setattr__(self, "FA", fa)
        object.__setattr__(self, "FB", fb)


def apply_filter(rho: DensityMatrix, f: FilterPair, tol: float = nx.DEFAULT_TOL) -> tuple[DensityMatrix, float]:
    """(F_A (x) F_B) rho (F_A (x) F_B)^dagger, renormalized, with its success probability."""
    if f.FA.shape[0] != rho.dA or f.FB.shape[0] != rho.dB:
        raise DimensionMismatch("filter dimensions do not match the state")
    k = np.kron(f.FA, f.FB)
    out = k @ rho.m @ k.conj().T
    prob = float(np.real(np.trace(out)))
    if prob <= tol:
        raise ZeroProbability(f"filter success probability {prob:.3e}")
    out = out / prob
    return DensityMatrix(rho.dA, rho.dB, 0.5 * (out + out.conj().T)), prob


def complementary_filter(f, tol: float = nx.DEFAULT_TOL) -> np.ndarray:
    """(1 - F^dagger F)^(1/2); for Hermitian F this is (1 - F F)^(1/2)."""
    f = np.asarray(f, dtype=complex)
    h = np.eye(f.shape[0]) - f.conj().T @ f
    w = np.linalg.eigvalsh(0.5 * (h + h.conj().T))
    if w[0] < -tol:
        raise NotSubnormalized(f"1 - F^dagger F has eigenvalue {w[0]:.3e}")
    return nx.psd_sqrt(h, tol)


class FilterOutcome(NamedTuple):
    label: str
    state: DensityMatrix | None  # None when the outcome never occurs
    probability: float


def locc_protocol_outcomes(rho: DensityMatrix, f: FilterPair, tol: float = nx.DEFAULT_TOL) -> list[FilterOutcome]:
    """The four outcomes of measuring {F, F^c} on each side.

    Order: (F_A, F_B), (F_A, F_B^c), (F_A^c, F_B), (F_A^c, F_B^c).
    """
    fa_c = complementary_filter(f.FA, tol)
    fb_c = complementary_filter(f.FB, tol)
    out = []
    for (la, a), (lb, b) in itertools.product((("FA", f.FA), ("FAc", fa_c)), (("FB", f.FB), ("FBc", fb_c))):
        k = np.kron(a, b)
        s = k @ rho.m @ k.conj().T
        p = float(np.real(np.trace(s)))
        state = DensityMatrix(rho.dA, rho.dB, s / p) if p > tol else None
        out.append(FilterOutcome(f"{la}*{lb}", state, max(p, 0.0)))
    return out


def average_state(outcomes: Sequence[FilterOutcome]) -> DensityMatrix:
    """sum_i p_i rho_i over the outcomes that occur."""
    present = [o for o in outcomes if o.state is not None]
    ref = present[0].state
    m = sum(o.probability * o.state.m for o in present)
    return DensityMatrix(ref.dA, ref.dB, m)


# -- random sampling ---------------------------------------------------------


def random_ket(d: int, rng: np.random.Generator) -> np.ndarray:
    z = rng.standard_normal(d) + 1j * rng.standard_normal(d)
    return z / np.linalg.norm(z)


def random_schmidt(d: int, rng: np.random.Generator) -> np.ndarray:
    """Uniform (flat Dirichlet) Schmidt vector, sorted descending."""
    return schmidt_vector(rng.dirichlet(np.ones(d)))


def random_pure(dA: int, dB: int, rng: np.random.Generator) -> DensityMatrix:
    return pure_state(random_ket(dA * dB, rng), dA, dB)


def random_mixed(dA: int, dB: int, rng: np.random.Generator, rank: int | None = None) -> DensityMatrix:
    """Induced-measure mixed state (Hilbert-Schmidt measure when ``rank`` is None)."""
    n = dA * dB
    k = n if rank is None else rank
    g = rng.standard_normal((n, k)) + 1j * rng.standard_normal((n, k))
    m = g @ g.conj().T
    return DensityMatrix(dA, dB, m / np.real(np.trace(m)))


def random_separable(dA: int, dB: int, rng: np.random.Generator, n_terms: int | None = None) -> DensityMatrix:
    """Dirichlet-weighted mixture of Haar-random product pure states.

    The number of terms defaults to a uniform draw from 1..2*max(dA, dB)**2.
    """
    if n_terms is None:
        n_terms = int(rng.integers(1, 2 * max(dA, dB) ** 2 + 1))
    w = rng.dirichlet(np.ones(n_terms))
    m = np.zeros((dA * dB, dA * dB), dtype=complex)
    for wk in w:
        psi = np.kron(random_ket(dA, rng), random_ket(dB, rng))
        m += wk * np.outer(psi, psi.conj())
    return DensityMatrix(dA, dB, m)


def local_unitary(rho: DensityMatrix, u: np.ndarray, v: np.ndarray) -> DensityMatrix:
    k = np.kron(u, v)
    return DensityMatrix(rho.dA, rho.dB, k @ rho.m @ k.conj().T)
