"""Assemble analysis reports (schema ``cmcq.report/1``).

Every number carries the name of the operation that produced it under
``"op"``.
"""

from __future__ import annotations

import time

from . import __version__
from . import numerics as nx
from .concurrence import (
    TRANSFER_FACTORS,
    concurrence_lower_bound,
    concurrence_pure,
    wootters_concurrence,
)
from .covariance import covariance_matrix
from .criteria import cm_statistics, ppt_check, trace_criterion, tracenorm_criterion
from .eparam import e_estimate, e_pure, e_sc
from .states import DensityMatrix, SchmidtCorrelatedState, schmidt_vector
from .statefile import digest

REPORT_SCHEMA = "cmcq.report/1"


def _tag(value, op: str) -> dict:
    if isinstance(value, dict):
        return {**value, "op": op}
    return {"value": value, "op": op}


def _header(tol: float) -> dict:
    return {"schema": REPORT_SCHEMA, "tool_version": __version__, "tolerance": tol}


def analyze_density(rho: DensityMatrix, tol: float = nx.DEFAULT_TOL, label: str | None = None, timing: bool = True) -> dict:
    start = time.perf_counter()
    report = _header(tol)
    report["input"] = {"digest": digest(rho.m, (rho.dA, rho.dB)), "dims": [rho.dA, rho.dB]}
    if label is not None:
        report["input"]["label"] = label
    pa, pb = rho.local_purities()
    quantities = {
        "purity": _tag(rho.purity(), "purity"),
        "purity_A": _tag(pa, "partial_trace"),
        "purity_B": _tag(pb, "partial_trace"),
    }
    ppt = ppt_check(rho, tol)
    criteria = {"ppt": _tag(ppt.to_dict(), "ppt_check")}
    detected = {"ppt": ppt.violated}
    notes = []
    if rho.dA == rho.dB:
        cm = covariance_matrix(rho)
        stats = cm_statistics(rho, cm)
        quantities["trace_abs_C"] = _tag(stats.trace_norm_c, "trace_norm")
        quantities["trace_norm_C"] = _tag(stats.trace_norm_c, "trace_norm")
        tc, tn = trace_criterion(rho, tol, cm), tracenorm_criterion(rho, tol, cm)
        criteria["cmc_trace"] = _tag(tc.to_dict(), "trace_criterion")
        criteria["cmc_tracenorm"] = _tag(tn.to_dict(), "tracenorm_criterion")
        detected["cmc"] = tc.violated or tn.violated
        if rho.dA >= 2:
            best, results = e_estimate(rho, tol, cm)
            report["entanglement_parameter"] = {
                "best": _tag(best.to_dict(), "e_estimate"),
                "results": [_tag(r.to_dict(), "e_" + r.source if r.source.startswith("bound") else "e_exact") for r in results],
            }
        conc = {}
        if rho.dA in TRANSFER_FACTORS:
            conc["lower_bound"] = _tag(concurrence_lower_bound(rho, tol, cm).to_dict(), "concurrence_lower_bound")
        else:
            notes.append(f"no concurrence transfer factor for d={rho.dA}")
        if rho.dA == 2:
            conc["wootters"] = _tag(wootters_concurrence(rho).to_dict(), "wootters_concurrence")
        if conc:
            report["concurrence"] = conc
    else:
        notes.append("CMC corollaries and E bounds need dA == dB; only PPT evaluated")
    report["quantities"] = quantities
    report["criteria"] = criteria
    report["detected"] = detected
    if notes:
        report["notes"] = notes
    order = ["schema", "tool_version", "tolerance", "input", "quantities", "criteria", "detected",
             "entanglement_parameter", "concurrence", "notes"]
    report = {k: report[k] for k in order if k in report}
    if timing:
        report["timing_s"] = time.perf_counter() - start
    return report


def _pure_like_report(kind: str, inp: dict, e, d: int, tol: float, exact_c=None) -> dict:
    report = _header(tol)
    report["input"] = {"kind": kind, **inp}
    report["entanglement_parameter"] = {"best": _tag(e.to_dict(), "e_pure" if kind == "pure" else "e_sc")}
    conc = {}
    if exact_c is not None:
        conc["exact"] = _tag(exact_c.to_dict(), "concurrence_pure")
    if d in TRANSFER_FACTORS:
        f = TRANSFER_FACTORS[d]
        conc["lower_bound"] = _tag({"value": f * e.value, "kind": "lower_from_E", "factor": f}, "concurrence_lower_bound")
    report["concurrence"] = conc
    return report


def analyze_pure(lams, tol: float = nx.DEFAULT_TOL, timing: bool = True) -> dict:
    start = time.perf_counter()
    lam = schmidt_vector(lams)
    report = _pure_like_report("pure", {"schmidt": [float(x) for x in lam]}, e_pure(lam), lam.size, tol, concurrence_pure(lam))
    if timing:
        report["timing_s"] = time.perf_counter() - start
    return report


def analyze_sc(s: SchmidtCorrelatedState, tol: float = nx.DEFAULT_TOL, timing: bool = True) -> dict:
    start = time.perf_counter()
    inp = {"weights": [float(x) for x in s.weights], "rows": [[float(x) for x in r] for r in s.rows]}
    exact_c = concurrence_pure(s.rows[0]) if s.weights.size == 1 else None
    report = _pure_like_report("sc", inp, e_sc(s), s.d, tol, exact_c)
    if timing:
        report["timing_s"] = time.perf_counter() - start
    return report


def format_text(report: dict, indent: int = 0) -> str:
    """Flatten a report into ``key: value`` lines."""
    lines = []
    pad = "  " * indent
    for key, value in report.items():
        if isinstance(value, dict):
            if set(value) <= {"value", "op"}:
                lines.append(f"{pad}{key}: {_fmt(value['value'])}  [{value['op']}]")
            else:
                lines.append(f"{pad}{key}:")
                lines.append(format_text(value, indent + 1))
        elif isinstance(value, list) and value and isinstance(value[0], dict):
            lines.append(f"{pad}{key}:")
            for n, item in enumerate(value):
                lines.append(f"{pad}  [{n}]")
                lines.append(format_text(item, indent + 2))
        else:
            lines.append(f"{pad}{key}: {_fmt(value)}")
    return "\n".join(lines)


def _fmt(v) -> str:
    if isinstance(v, float):
        return f"{v:.10g}"
    if isinstance(v, list):
        return "[" + ", ".join(_fmt(x) for x in v) + "]"
    return str(v)
