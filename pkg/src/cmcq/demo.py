"""A two-qubit state that the CMC misses but local filtering exposes.

The constants are five-decimal reference values; ``run_filtering_demo``
recomputes everything from ``RHO`` and the two filters and compares.
"""

from __future__ import annotations

from importlib.resources import files
from typing import NamedTuple

import numpy as np

from . import numerics as nx
from .criteria import ppt_check, trace_criterion, tracenorm_criterion
from .eparam import e_bound_trace, e_bound_tracenorm
from .states import (
    FilterPair,
    apply_filter,
    average_state,
    complementary_filter,
    locc_protocol_outcomes,
    validate_density,
)

RHO = np.array(
    [
        [0.48508, 0, 0, 0.02094],
        [0, 0.33, 0, 0],
        [0, 0, 0.00067, 0],
        [0.02094, 0, 0, 0.18425],
    ]
)
FILTER_A = np.diag([0.16457, 0.98637])
FILTER_B = np.diag([0.96526, 0.26128])
FILTER_A_COMPLEMENT = np.diag([0.98637, 0.16457])
FILTER_B_COMPLEMENT = np.diag([0.26128, 0.96526])
RHO_FILTERED = np.array(
    [
        [0.47636, 0, 0, 0.03336],
        [0, 0.02375, 0, 0],
        [0, 0, 0.02364, 0],
        [0.03336, 0, 0, 0.47626],
    ]
)
OUTCOME_PROBABILITIES = np.array([0.02570, 0.17629, 0.46200, 0.33601])
ROUNDING_TOL = 5e-5


class Check(NamedTuple):
    name: str
    passed: bool
    detail: str


def example_state_file():
    """Path-like handle to the shipped state file holding ``RHO``."""
    return files("cmcq") / "data" / "filter_example.json"


def example_state():
    return validate_density(RHO, 2, 2)


def example_filters() -> FilterPair:
    return FilterPair(FILTER_A, FILTER_B)


def run_filtering_demo(tol: float = nx.DEFAULT_TOL) -> list[Check]:
    rho = example_state()
    filters = example_filters()
    checks = []

    margins = [trace_criterion(rho, tol).margin, tracenorm_criterion(rho, tol).margin]
    bounds = [e_bound_trace(rho).raw, e_bound_tracenorm(rho).raw]
    checks.append(
        Check(
            "rho not detected by the CMC corollaries",
            max(margins) <= tol and max(bounds) <= tol,
            f"margins {margins[0]:+.5f}, {margins[1]:+.5f}; raw E bounds {bounds[0]:+.5f}, {bounds[1]:+.5f}",
        )
    )

    ppt = ppt_check(rho, tol)
    checks.append(Check("rho is NPT", ppt.violated, f"min eigenvalue of partial transpose {-ppt.statistic:+.6f}"))

    fa_c, fb_c = complementary_filter(FILTER_A, tol), complementary_filter(FILTER_B, tol)
    dev_c = max(np.max(np.abs(fa_c - FILTER_A_COMPLEMENT)), np.max(np.abs(fb_c - FILTER_B_COMPLEMENT)))
    checks.append(Check("complementary filters match", dev_c <= ROUNDING_TOL, f"max deviation {dev_c:.2e}"))

    filt, _ = apply_filter(rho, filters, tol)
    dev = float(np.max(np.abs(filt.m - RHO_FILTERED)))
    checks.append(Check("filtered state matches", dev <= ROUNDING_TOL, f"max entry deviation {dev:.2e}"))

    outcomes = locc_protocol_outcomes(rho, filters, tol)
    probs = np.array([o.probability for o in outcomes])
    dev_p = float(np.max(np.abs(probs - OUTCOME_PROBABILITIES)))
    checks.append(
        Check(
            "outcome probabilities match",
            dev_p <= ROUNDING_TOL,
            "p = (" + ", ".join(f"{p:.5f}" for p in probs) + f"), max deviation {dev_p:.2e}",
        )
    )

    fm = [trace_criterion(filt, tol).margin, tracenorm_criterion(filt, tol).margin]
    fb = [e_bound_trace(filt).raw, e_bound_tracenorm(filt).raw]
    checks.append(
        Check(
            "filtered state detected",
            min(fm) > tol and min(fb) > tol,
            f"margins {fm[0]:+.5f}, {fm[1]:+.5f}; E bounds {fb[0]:+.5f}, {fb[1]:+.5f}",
        )
    )

    avg = average_state(outcomes)
    avg_ppt = ppt_check(avg, tol)
    checks.append(Check("averaged state is PPT", not avg_ppt.violated, f"min eigenvalue of partial transpose {-avg_ppt.statistic:+.6f}"))
    return checks
