"""The max-min problem over the probability simplex.

    alpha0 = max_p min_{i<j} b_ij / (p_i + p_j)

A pair with ``p_i + p_j = 0`` imposes no constraint (its ratio counts as
+inf). With ``q = alpha * p`` the problem becomes the linear program

    maximize sum(q)  subject to  q_i + q_j <= b_ij,  q >= 0,

whose optimum is alpha0 and whose optimizer, normalized, is an optimal p.
"""

from __future__ import annotations

import functools
import itertools
from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import linprog

from .observables import pairs
from .states import SchmidtCorrelatedState, _schmidt_unsorted

DEFAULT_EPS = 1e-10


@dataclass(frozen=True, eq=False)
class MaxMinProblem:
    """Symmetric nonnegative pair coefficients ``b`` (diagonal ignored).

    ``roots`` holds sqrt(lambda) when ``b_ij = (roots_i - roots_j)**2`` came
    from a single Schmidt vector; the d=4 closed form is only valid then.
    """

    b: np.ndarray
    roots: np.ndarray | None = field(default=None)

    def __post_init__(self):
        b = np.array(self.b, dtype=float)
        if b.ndim != 2 or b.shape[0] != b.shape[1]:
            raise ValueError(f"b must be a square matrix, got shape {b.shape}")
        if not np.allclose(b, b.T, atol=1e-12):
            raise ValueError("b must be symmetric")
        off = b[~np.eye(b.shape[0], dtype=bool)]
        if off.size and off.min() < -1e-12:
            raise ValueError("b must be nonnegative")
        b = np.clip(0.5 * (b + b.T), 0.0, None)
        np.fill_diagonal(b, 0.0)
        b.setflags(write=False)
        object.__setattr__(self, "b", b)

    @property
    def d(self) -> int:
        return self.b.shape[0]

    @property
    def schmidt_derived(self) -> bool:
        return self.roots is not None

    @classmethod
    def from_pairs(cls, d: int, values) -> "MaxMinProblem":
        """Build from b_ij listed for i < j in lexicographic order."""
        values = np.asarray(values, dtype=float).ravel()
        pr = pairs(d)
        if values.size != len(pr):
            raise ValueError(f"d={d} needs {len(pr)} pair values, got {values.size}")
        b = np.zeros((d, d))
        for (i, j), v in zip(pr, values):
            b[i, j] = b[j, i] = v
        return cls(b)

    def pair_values(self) -> np.ndarray:
        return np.array([self.b[i, j] for i, j in pairs(self.d)])

    def permuted(self, perm) -> "MaxMinProblem":
        perm = np.asarray(perm)
        roots = None if self.roots is None else self.roots[perm]
        return MaxMinProblem(self.b[np.ix_(perm, perm)], roots)


@dataclass(frozen=True, eq=False)
class MaxMinSolution:
    alpha0: float
    p: np.ndarray
    method: str

    def to_dict(self) -> dict:
        return {"alpha0": self.alpha0, "p": [float(x) for x in self.p], "method": self.method}


def from_schmidt(lams) -> MaxMinProblem:
    """b_ij = (sqrt(lam_i) - sqrt(lam_j))**2."""
    r = np.sqrt(_schmidt_unsorted(lams))
    return MaxMinProblem((r[:, None] - r[None, :]) ** 2, roots=r)


def from_coefficients(rho_ij) -> MaxMinProblem:
    """b_ij = rho_ii + rho_jj - 2 rho_ij for a Schmidt-correlated coefficient matrix."""
    r = np.asarray(rho_ij, dtype=float)
    diag = np.diag(r)
    b = diag[:, None] + diag[None, :] - 2 * r
    # cancellation can leave tiny negatives when two pure terms coincide
    return MaxMinProblem(np.clip(b, 0.0, None))


def from_sc(s: SchmidtCorrelatedState) -> MaxMinProblem:
    """b_ij = sum_u q_u (sqrt(lam_i^(u)) - sqrt(lam_j^(u)))**2."""
    r = np.sqrt(s.rows)
    diff = r[:, :, None] - r[:, None, :]
    b = np.einsum("u,uij->ij", s.weights, diff**2)
    if s.weights.size == 1 or np.allclose(s.rows, s.rows[0]):
        return MaxMinProblem(b, roots=r[0])
    return MaxMinProblem(b)


def objective(problem: MaxMinProblem, p) -> float:
    """min over non-vacuous pairs of b_ij / (p_i + p_j)."""
    p = np.asarray(p, dtype=float)
    best = np.inf
    for i, j in pairs(problem.d):
        s = p[i] + p[j]
        if s > 0:
            best = min(best, problem.b[i, j] / s)
    return float(best)


def _uniform(d: int) -> np.ndarray:
    return np.full(d, 1.0 / d)


# -- closed forms ------------------------------------------------------------


def solve_d2(problem: MaxMinProblem) -> MaxMinSolution:
    if problem.d != 2:
        raise ValueError("solve_d2 needs d=2")
    return MaxMinSolution(float(problem.b[0, 1]), _uniform(2), "closed2")


def d3_candidates(problem: MaxMinProblem) -> tuple[float, float, int]:
    """(alpha_I, alpha_II, i0) for a d=3 problem.

    alpha_I equalizes all three ratios; alpha_II sets p_i0 = 0 where i0 is the
    index outside the largest pair.
    """
    b = problem.b
    pr = pairs(3)
    vals = [b[i, j] for i, j in pr]
    j0, k0 = pr[int(np.argmax(vals))]
    i0 = 3 - j0 - k0
    alpha_i = 0.5 * sum(vals)
    alpha_ii = b[i0, j0] + b[i0, k0]
    return float(alpha_i), float(alpha_ii), i0


def solve_d3(problem: MaxMinProblem) -> MaxMinSolution:
    """Closed form for d=3, valid for any b >= 0."""
    if problem.d != 3:
        raise ValueError("solve_d3 needs d=3")
    b = problem.b
    alpha_i, alpha_ii, i0 = d3_candidates(problem)
    alpha = min(alpha_i, alpha_ii)
    if alpha <= 0:
        return MaxMinSolution(0.0, _uniform(3), "closed3")
    p = np.zeros(3)
    if alpha_i <= alpha_ii:
        for i in range(3):
            j, k = [x for x in range(3) if x != i]
            p[i] = (b[i, j] + b[i, k] - b[j, k]) / (2 * alpha)
    else:
        j0, k0 = [x for x in range(3) if x != i0]
        p[j0] = b[i0, j0] / alpha
        p[k0] = b[i0, k0] / alpha
    p = np.clip(p, 0.0, None)
    return MaxMinSolution(float(alpha), p / p.sum(), "closed3")


D4_PAIRINGS = (((0, 1), (2, 3)), ((0, 2), (1, 3)), ((0, 3), (1, 2)))


def d4_candidates(problem: MaxMinProblem) -> np.ndarray:
    """b_12 + b_34, b_13 + b_24, b_14 + b_23."""
    b = problem.b
    return np.array([b[x] + b[y] for x, y in D4_PAIRINGS])


def solve_d4(problem: MaxMinProblem) -> MaxMinSolution:
    """Closed form for d=4: the smallest of the three perfect-matching sums.

    Only established for b coming from one Schmidt vector; other inputs are
    rejected (use :func:`solve_general`).
    """
    if problem.d != 4:
        raise ValueError("solve_d4 needs d=4")
    if not problem.schmidt_derived:
        raise ValueError("the d=4 closed form needs Schmidt-derived b; use solve_general")
    cand = d4_candidates(problem)
    k = int(np.argmin(cand))
    alpha = float(cand[k])
    if alpha <= 0:
        return MaxMinSolution(0.0, _uniform(4), "closed4")
    p = _d4_distribution(problem.b, D4_PAIRINGS[k], alpha)
    return MaxMinSolution(alpha, p, "closed4")


def _d4_distribution(b: np.ndarray, pairing, alpha: float) -> np.ndarray:
    """A p with alpha_ij = alpha on both pairs of ``pairing`` and >= alpha elsewhere.

    With x = p_i1 and y = p_i2 the remaining conditions are eight half-planes;
    the vertex of their arrangement with the largest worst-case slack is taken,
    which is exact whenever the region is non-empty.
    """
    (i1, j1), (i2, j2) = pairing
    s1, s2 = b[i1, j1] / alpha, b[i2, j2] / alpha
    # rows (a, c): a . (x, y) <= c
    a = np.array([[1, 1], [-1, -1], [1, -1], [-1, 1], [-1, 0], [1, 0], [0, -1], [0, 1]], dtype=float)
    c = np.array(
        [
            b[i1, i2] / alpha,  # p_i1 + p_i2
            b[j1, j2] / alpha - s1 - s2,  # p_j1 + p_j2
            b[i1, j2] / alpha - s2,  # p_i1 + p_j2
            b[j1, i2] / alpha - s1,  # p_j1 + p_i2
            0.0,
            s1,
            0.0,
            s2,
        ]
    )
    best, best_slack = None, -np.inf
    for r1, r2 in itertools.combinations(range(len(c)), 2):
        m = a[[r1, r2]]
        if abs(np.linalg.det(m)) < 1e-12:
            continue
        xy = np.linalg.solve(m, c[[r1, r2]])
        slack = np.min(c - a @ xy)
        if slack > best_slack:
            best, best_slack = xy, slack
    x, y = best
    p = np.zeros(4)
    p[i1], p[j1], p[i2], p[j2] = x, s1 - x, y, s2 - y
    p = np.clip(p, 0.0, None)
    return p / p.sum()


# -- general solvers ---------------------------------------------------------


def _pair_constraints(d: int) -> np.ndarray:
    pr = pairs(d)
    a = np.zeros((len(pr), d))
    for row, (i, j) in enumerate(pr):
        a[row, i] = a[row, j] = 1.0
    return a


def _lp_solve(b: np.ndarray, scale: float = 1.0) -> tuple[float, np.ndarray]:
    """max sum(q) s.t. q_i + q_j <= b_ij * scale, q >= 0. Returns (value, normalized q)."""
    d = b.shape[0]
    caps = np.array([b[i, j] for i, j in pairs(d)]) * scale
    res = linprog(-np.ones(d), A_ub=_pair_constraints(d), b_ub=caps, bounds=[(0, None)] * d, method="highs")
    if res.status != 0:
        raise RuntimeError(f"LP failed: {res.message}")
    q = np.clip(res.x, 0.0, None)
    total = q.sum()
    p = q / total if total > 0 else _uniform(d)
    return float(-res.fun), p


def feasible_at(problem: MaxMinProblem, t: float) -> tuple[bool, np.ndarray]:
    """Is there p with b_ij / (p_i + p_j) >= t for every non-vacuous pair?

    Decided by maximizing sum(q) under q_i + q_j <= b_ij / t; feasible iff
    the optimum reaches 1, and then p = q / sum(q) is a witness.
    """
    if t <= 0:
        return True, _uniform(problem.d)
    value, p = _lp_solve(problem.b, 1.0 / t)
    return value >= 1.0, p


def solve_general(problem: MaxMinProblem, eps: float = DEFAULT_EPS, method: str = "lp") -> MaxMinSolution:
    """Solve any instance with d >= 2.

    ``method="lp"`` solves the scaled linear program once. ``method="bisection"``
    bisects on t, deciding each t with :func:`feasible_at`, until the bracket
    is narrower than ``eps``.
    """
    d = problem.d
    if d < 2:
        raise ValueError("need d >= 2")
    if method == "lp":
        value, p = _lp_solve(problem.b)
        return MaxMinSolution(value, p, "lp")
    if method != "bisection":
        raise ValueError(f"unknown method {method!r}")
    b = problem.b
    upper = sum(min(b[i, j] for j in range(d) if j != i) for i in range(d))
    lo, hi = 0.0, upper + eps
    best_p = _uniform(d)
    while hi - lo >= eps:
        mid = 0.5 * (lo + hi)
        ok, p = feasible_at(problem, mid)
        if ok:
            lo, best_p = mid, p
        else:
            hi = mid
    return MaxMinSolution(lo, best_p, "bisection")


@functools.lru_cache(maxsize=8)
def _prefix_grid(steps: int, m: int) -> tuple[np.ndarray, np.ndarray]:
    grid = np.indices((steps + 1,) * m).reshape(m, -1).T
    grid = grid[grid.sum(axis=1) <= steps].astype(float)
    rem = steps - grid.sum(axis=1)
    grid.setflags(write=False)
    rem.setflags(write=False)
    return grid, rem


def grid_oracle(problem: MaxMinProblem, steps: int = 400) -> MaxMinSolution:
    """Best point of the simplex grid with spacing 1/steps.

    Every grid point is covered. The first d-2 coordinates are enumerated
    explicitly; along the split of the remainder between the last two
    coordinates the objective is the minimum of a nonincreasing and a
    nondecreasing sequence, so its grid maximum sits at their crossing,
    which is located by bisection.
    """
    d = problem.d
    if d < 2:
        raise ValueError("need d >= 2")
    b = problem.b
    if d == 2:
        return MaxMinSolution(float(b[0, 1]), _uniform(2), "grid")
    a_idx, b_idx = d - 2, d - 1
    m = d - 2
    grid, rem = _prefix_grid(steps, m)

    def ratio(bij, den):
        return np.divide(bij * steps, den, out=np.full(den.shape, np.inf), where=den > 0)

    const = ratio(b[a_idx, b_idx], rem)
    for i, j in itertools.combinations(range(m), 2):
        const = np.minimum(const, ratio(b[i, j], grid[:, i] + grid[:, j]))

    cols = [grid[:, i] for i in range(m)]

    def dec(k):
        return functools.reduce(np.minimum, (ratio(b[i, a_idx], cols[i] + k) for i in range(m)))

    def inc(k):
        return functools.reduce(np.minimum, (ratio(b[i, b_idx], cols[i] + rem - k) for i in range(m)))

    lo = np.full(rem.shape, -1.0)
    hi = rem + 1.0
    while True:
        active = hi - lo > 1
        if not active.any():
            break
        mid = np.floor(0.5 * (lo + hi))
        pred = inc(mid) <= dec(mid)
        lo = np.where(active & pred, mid, lo)
        hi = np.where(active & ~pred, mid, hi)

    def value(k):
        return np.minimum(const, np.minimum(dec(k), inc(k)))

    k1 = np.clip(lo, 0, rem)
    k2 = np.clip(lo + 1, 0, rem)
    v1, v2 = value(k1), value(k2)
    k = np.where(v2 > v1, k2, k1)
    v = np.maximum(v1, v2)
    row = int(np.argmax(v))
    point = np.concatenate([grid[row], [k[row], rem[row] - k[row]]]) / steps
    return MaxMinSolution(float(v[row]), point, "grid")


def solve(problem: MaxMinProblem, method: str = "closed", eps: float = DEFAULT_EPS, steps: int = 400) -> MaxMinSolution:
    """Dispatch to a solver.

    ``closed`` uses the closed forms where they apply (d=2, d=3, and d=4 for
    Schmidt-derived b) and falls back to the linear program otherwise.
    """
    if method == "closed":
        if problem.d == 2:
            return solve_d2(problem)
        if problem.d == 3:
            return solve_d3(problem)
        if problem.d == 4 and problem.schmidt_derived:
            return solve_d4(problem)
        return solve_general(problem, eps)
    if method in ("lp", "bisection"):
        return solve_general(problem, eps, method)
    if method == "grid":
        return grid_oracle(problem, steps)
    raise ValueError(f"unknown method {method!r}")
