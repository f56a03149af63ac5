"""JSON formats for input states and analysis reports.

State file (``cmcq.state/1``)::

    {
      "schema": "cmcq.state/1",
      "dims": [dA, dB],
      "matrix": [[re, im], ...],        # (dA*dB)**2 entries, row-major
      "metadata": {"label": "...", "source": "..."}   # optional
    }

Schmidt-correlated file (``cmcq.sc/1``)::

    {"schema": "cmcq.sc/1", "weights": [q_1, ...], "rows": [[lam_1, ...], ...]}
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import numerics as nx
from .errors import CMCError
from .states import DensityMatrix, SchmidtCorrelatedState, validate_density

STATE_SCHEMA = "cmcq.state/1"
SC_SCHEMA = "cmcq.sc/1"


class StateFileError(CMCError):
    """Malformed or invalid input file; the message carries a location."""


@dataclass
class StateFile:
    dims: tuple[int, int]
    matrix: np.ndarray
    metadata: dict = field(default_factory=dict)

    def to_density(self, tol: float = nx.DEFAULT_TOL) -> DensityMatrix:
        return validate_density(self.matrix, *self.dims, tol=tol)


def _load_json(text: str, origin: str):
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise StateFileError(f"{origin}:{exc.lineno}:{exc.colno}: invalid JSON: {exc.msg}") from None


def _field_line(text: str, key: str) -> int | None:
    needle = f'"{key}"'
    for n, line in enumerate(text.splitlines(), start=1):
        if needle in line:
            return n
    return None


def _where(origin: str, text: str, key: str) -> str:
    line = _field_line(text, key)
    return f"{origin}:{line}" if line else origin


def parse_state(text: str, origin: str = "<string>") -> StateFile:
    doc = _load_json(text, origin)
    if not isinstance(doc, dict):
        raise StateFileError(f"{origin}: top level must be an object")
    schema = doc.get("schema", STATE_SCHEMA)
    if schema != STATE_SCHEMA:
        raise StateFileError(f"{_where(origin, text, 'schema')}: unsupported schema {schema!r}")
    dims = doc.get("dims")
    if not (isinstance(dims, list) and len(dims) == 2 and all(isinstance(x, int) and x >= 1 for x in dims)):
        raise StateFileError(f"{_where(origin, text, 'dims')}: 'dims' must be two positive integers")
    n = dims[0] * dims[1]
    entries = doc.get("matrix")
    if not isinstance(entries, list) or len(entries) != n * n:
        got = len(entries) if isinstance(entries, list) else type(entries).__name__
        raise StateFileError(f"{_where(origin, text, 'matrix')}: 'matrix' needs {n * n} [re, im] pairs, got {got}")
    flat = np.empty(n * n, dtype=complex)
    for k, pair in enumerate(entries):
        if not (isinstance(pair, list) and len(pair) == 2 and all(isinstance(x, (int, float)) and not isinstance(x, bool) for x in pair)):
            raise StateFileError(f"{_where(origin, text, 'matrix')}: entry {k} (row {k // n}, col {k % n}) is not a [re, im] pair")
        flat[k] = complex(pair[0], pair[1])
    meta = doc.get("metadata") or {}
    if not isinstance(meta, dict):
        raise StateFileError(f"{_where(origin, text, 'metadata')}: 'metadata' must be an object")
    return StateFile((dims[0], dims[1]), flat.reshape(n, n), meta)


def read_state(path) -> StateFile:
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as exc:
        raise StateFileError(f"{path}: {exc.strerror}") from None
    return parse_state(text, str(path))


def read_density(path, tol: float = nx.DEFAULT_TOL) -> tuple[DensityMatrix, StateFile]:
    """Read and validate a state file; validation errors point at the matrix."""
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as exc:
        raise StateFileError(f"{path}: {exc.strerror}") from None
    sf = parse_state(text, str(path))
    try:
        return sf.to_density(tol), sf
    except CMCError as exc:
        raise StateFileError(f"{_where(str(path), text, 'matrix')}: {type(exc).__name__}: {exc}") from None


def state_to_dict(matrix, dims, metadata: dict | None = None) -> dict:
    m = np.asarray(matrix, dtype=complex)
    doc = {
        "schema": STATE_SCHEMA,
        "dims": [int(dims[0]), int(dims[1])],
        "matrix": [[float(z.real), float(z.imag)] for z in m.ravel()],
    }
    if metadata:
        doc["metadata"] = dict(metadata)
    return doc


def dump_state(sf: StateFile) -> str:
    return json.dumps(state_to_dict(sf.matrix, sf.dims, sf.metadata), indent=1)


def write_density(path, rho: DensityMatrix, label: str | None = None, source: str | None = None) -> None:
    meta = {k: v for k, v in (("label", label), ("source", source)) if v is not None}
    Path(path).write_text(json.dumps(state_to_dict(rho.m, (rho.dA, rho.dB), meta), indent=1) + "\n")


def parse_sc(text: str, origin: str = "<string>") -> SchmidtCorrelatedState:
    doc = _load_json(text, origin)
    if not isinstance(doc, dict):
        raise StateFileError(f"{origin}: top level must be an object")
    schema = doc.get("schema", SC_SCHEMA)
    if schema != SC_SCHEMA:
        raise StateFileError(f"{_where(origin, text, 'schema')}: unsupported schema {schema!r}")
    weights, rows = doc.get("weights"), doc.get("rows")
    if not isinstance(weights, list) or not isinstance(rows, list) or not rows:
        raise StateFileError(f"{origin}: need lists 'weights' and 'rows'")
    try:
        return SchmidtCorrelatedState(np.array(weights, dtype=float), np.array(rows, dtype=float))
    except (ValueError, TypeError) as exc:
        raise StateFileError(f"{_where(origin, text, 'rows')}: {exc}") from None


def read_sc(path) -> SchmidtCorrelatedState:
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as exc:
        raise StateFileError(f"{path}: {exc.strerror}") from None
    return parse_sc(text, str(path))


def digest(matrix, dims) -> str:
    """sha256 over the dimensions and the complex128 little-endian matrix bytes."""
    m = np.ascontiguousarray(np.asarray(matrix, dtype="<c16"))
    h = hashlib.sha256()
    h.update(f"{int(dims[0])}x{int(dims[1])};".encode())
    h.update(m.tobytes())
    return "sha256:" + h.hexdigest()
