"""Acceptance suite: ten end-to-end criteria at their stated tolerances.

Each ``criterion_N`` returns ``(passed, detail)``. Under pytest every
criterion is a test and a PASS/FAIL line per criterion is printed in the
terminal summary; ``python3 tests/test_acceptance.py`` prints the same lines.
"""

from __future__ import annotations

import numpy as np
import pytest

from cmcq import maxmin as mm
from cmcq import numerics as nx
from cmcq.concurrence import TRANSFER_FACTORS, concurrence_lower_bound, concurrence_pure, wootters_concurrence
from cmcq.covariance import covariance_matrix, pure_schmidt_cm
from cmcq.criteria import cm_statistics, ppt_check, trace_criterion, tracenorm_criterion
from cmcq.demo import FILTER_A, FILTER_B, OUTCOME_PROBABILITIES, RHO, RHO_FILTERED
from cmcq.eparam import DiagonalAnsatz, e_bound_trace, e_bound_tracenorm, e_pure, e_sc, feasibility_check, v_diag_ansatz
from cmcq.states import (
    FilterPair,
    SchmidtCorrelatedState,
    apply_filter,
    average_state,
    bell_diagonal,
    local_unitary,
    locc_protocol_outcomes,
    pure_from_schmidt,
    random_pure,
    random_schmidt,
    random_separable,
    sc_build,
    schmidt_decompose,
    validate_density,
)

TOL = 1e-9
RESULTS: dict[int, tuple[bool, str]] = {}


def criterion_1():
    rho = validate_density(RHO, 2, 2)
    filters = FilterPair(FILTER_A, FILTER_B)
    filt, _ = apply_filter(rho, filters)
    outcomes = locc_protocol_outcomes(rho, filters)
    probs = np.array([o.probability for o in outcomes])
    dev_m = np.max(np.abs(filt.m - RHO_FILTERED))
    dev_p = np.max(np.abs(probs - OUTCOME_PROBABILITIES))
    m_rho = [trace_criterion(rho, TOL).margin, tracenorm_criterion(rho, TOL).margin]
    m_filt = [trace_criterion(filt, TOL).margin, tracenorm_criterion(filt, TOL).margin]
    npt = ppt_check(rho, TOL).violated
    avg_min = -ppt_check(average_state(outcomes), TOL).statistic
    ok = dev_m <= 5e-5 and dev_p <= 5e-5 and max(m_rho) <= 0 and min(m_filt) > 0 and npt and avg_min >= -1e-9
    return ok, (
        f"rho_filt dev {dev_m:.1e}, prob dev {dev_p:.1e}, rho margins {max(m_rho):+.4f}, "
        f"filtered margins {min(m_filt):+.4f}, rho NPT={npt}, mixture min PT eig {avg_min:+.2e}"
    )


def criterion_2():
    rng = np.random.default_rng(2)
    worst = 0.0
    for _ in range(1000):
        lam = random_schmidt(2, rng)
        closed = 2 * np.sqrt(lam[0] * lam[1])
        e = e_pure(lam).value
        c = wootters_concurrence(pure_from_schmidt(lam)).value
        worst = max(worst, abs(e - closed), abs(c - closed))
    return worst <= 1e-10, f"max |e_pure - 2 sqrt(l1 l2)|, |Wootters - 2 sqrt(l1 l2)| = {worst:.1e}"


def criterion_3():
    rng = np.random.default_rng(3)
    worst_lp = {3: 0.0, 4: 0.0}
    worst_grid = {3: 0.0, 4: 0.0}
    for d in (3, 4):
        for _ in range(1000):
            problem = mm.from_schmidt(random_schmidt(d, rng))
            closed = mm.solve(problem).alpha0
            worst_lp[d] = max(worst_lp[d], abs(closed - mm.solve_general(problem).alpha0))
            worst_grid[d] = max(worst_grid[d], abs(closed - mm.grid_oracle(problem, 400).alpha0))
    ok = max(worst_lp.values()) <= 1e-8 and max(worst_grid.values()) <= 8e-3
    return ok, (
        f"closed vs LP: d=3 {worst_lp[3]:.1e}, d=4 {worst_lp[4]:.1e}; "
        f"closed vs grid(400): d=3 {worst_grid[3]:.1e}, d=4 {worst_grid[4]:.1e}"
    )


def criterion_4():
    devs = {d: abs(e_pure(np.full(d, 1 / d)).value - 1) for d in (2, 3, 4)}
    raw = e_bound_trace(bell_diagonal([1, 0, 0, 0])).raw
    # "exactly 1" read as equality to machine precision
    ok = max(devs.values()) <= 1e-10 and abs(raw - 1) <= 1e-14
    return ok, f"|E - 1| max {max(devs.values()):.1e}; Bell trace bound {raw!r}"


def criterion_5():
    rng = np.random.default_rng(5)
    worst, n_above, zero_ok = 0.0, 0, True
    for _ in range(1000):
        p = rng.dirichlet(np.ones(4))
        rho = bell_diagonal(p)
        bound = concurrence_lower_bound(rho, TOL).value
        exact = wootters_concurrence(rho).value
        if p.max() > 0.5:
            n_above += 1
            worst = max(worst, abs(bound - exact))
        else:
            zero_ok &= bound == 0 and exact == 0
    return worst <= 1e-9 and zero_ok, f"{n_above} states with lambda_max > 1/2: max |bound - Wootters| {worst:.1e}; others all zero: {zero_ok}"


def criterion_6():
    rng = np.random.default_rng(6)
    violations, worst = 0, -np.inf
    for d, n in ((2, 10_000), (3, 1000)):
        for _ in range(n):
            rho = random_separable(d, d, rng)
            cm = covariance_matrix(rho)
            stats = cm_statistics(rho, cm)
            violations += trace_criterion(rho, TOL, cm).violated + tracenorm_criterion(rho, TOL, cm).violated
            worst = max(worst, e_bound_trace(rho, stats=stats).raw, e_bound_tracenorm(rho, stats=stats).raw)
    return violations == 0 and worst <= 1e-9, f"11000 separable states: {violations} violations, largest raw E bound {worst:+.3e}"


def criterion_7():
    rng = np.random.default_rng(7)
    worst = np.inf
    for d in (3, 4):
        for _ in range(1000):
            lam = schmidt_decompose(random_pure(d, d, rng)).lambdas
            worst = min(worst, concurrence_pure(lam).value - TRANSFER_FACTORS[d] * e_pure(lam).value)
    return worst >= -1e-10, f"min C - factor*E over 2000 states = {worst:+.3e}"


def criterion_8():
    rng = np.random.default_rng(8)
    worst = 0.0
    for _ in range(200):
        lam = random_schmidt(int(rng.integers(2, 7)), rng)
        diff = pure_schmidt_cm(lam).gamma - covariance_matrix(pure_from_schmidt(lam)).gamma
        worst = max(worst, float(np.max(np.abs(diff))))
    return worst <= 1e-12, f"max entry difference {worst:.1e}"


def _statistics(rho):
    cm = covariance_matrix(rho)
    s = cm_statistics(rho, cm)
    return np.array(
        [
            s.purity_a,
            s.purity_b,
            s.trace_norm_c,
            trace_criterion(rho, TOL, cm).statistic,
            tracenorm_criterion(rho, TOL, cm).statistic,
            e_bound_trace(rho, stats=s).raw,
            e_bound_tracenorm(rho, stats=s).raw,
            ppt_check(rho, TOL).statistic,
        ]
    )


def criterion_9():
    rng = np.random.default_rng(9)
    worst_cvx, worst_lu = -np.inf, 0.0
    for _ in range(500):
        d = int(rng.integers(2, 5))
        s1 = SchmidtCorrelatedState(rng.dirichlet(np.ones(2)), np.array([random_schmidt(d, rng) for _ in range(2)]))
        s2 = SchmidtCorrelatedState(rng.dirichlet(np.ones(3)), np.array([random_schmidt(d, rng) for _ in range(3)]))
        w = rng.random()
        mix = SchmidtCorrelatedState(np.concatenate([w * s1.weights, (1 - w) * s2.weights]), np.vstack([s1.rows, s2.rows]))
        worst_cvx = max(worst_cvx, e_sc(mix).value - w * e_sc(s1).value - (1 - w) * e_sc(s2).value)
        rho = sc_build(mix)
        rot = local_unitary(rho, nx.random_unitary(d, rng), nx.random_unitary(d, rng))
        worst_lu = max(worst_lu, float(np.max(np.abs(_statistics(rho) - _statistics(rot)))))
    ok = worst_cvx <= 1e-9 and worst_lu <= 1e-9
    return ok, f"max convexity excess {worst_cvx:+.2e}; max statistic change under local unitaries {worst_lu:.1e}"


def criterion_10():
    cm = pure_schmidt_cm([0.9, 0.1])
    ansatz = DiagonalAnsatz([0.5, 0.5])
    v = v_diag_ansatz(cm, ansatz, TOL)
    below, above = feasibility_check(cm, ansatz, v, TOL), feasibility_check(cm, ansatz, v + 1e-8, TOL)
    ok = abs(v - 0.4) <= 1e-8 and below and not above
    return ok, f"V = {v:.12f}; feasible at V: {below}, at V + 1e-8: {above}"


CRITERIA = {n: globals()[f"criterion_{n}"] for n in range(1, 11)}
NAMES = {
    1: "filtering example reproduction",
    2: "two-qubit pure exactness",
    3: "closed forms vs LP and grid oracle",
    4: "maximal entanglement",
    5: "Bell-diagonal tightness",
    6: "separable soundness sweep",
    7: "transfer-bound soundness",
    8: "closed-form pure-state CM",
    9: "SC convexity and local-unitary invariance",
    10: "feasibility boundary",
}


def report_line(n: int) -> str:
    ok, detail = RESULTS[n]
    return f"[{'PASS' if ok else 'FAIL'}] criterion {n:2d} ({NAMES[n]}): {detail}"


@pytest.mark.parametrize("n", list(CRITERIA))
def test_criterion(n):
    RESULTS[n] = CRITERIA[n]()
    print(report_line(n))
    assert RESULTS[n][0], RESULTS[n][1]


if __name__ == "__main__":
    for n, fn in CRITERIA.items():
        RESULTS[n] = fn()
        print(report_line(n))
