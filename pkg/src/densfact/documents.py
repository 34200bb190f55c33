"""
Kind-tagged JSON matrix documents.

Complex numbers are written as ``[re, im]`` pairs and matrices as row-major
nested arrays. Top-level fields, in output order::

    kind        "ensemble" | "density" | "factor" | "coisometry"
    n           Hilbert-space dimension (all kinds except coisometry)
    k           number of states / columns (ensemble, factor) or rows (coisometry)
    p           number of columns (coisometry)
    probs       k reals (ensemble)
    states      k arrays of n pairs, one per state (ensemble)
    matrix      n x n (density), n x k (factor) or k x p (coisometry) pairs
    meta        optional string -> string map

Serialisation is deterministic: fixed key order, one matrix row per line,
shortest round-trip float repr.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from typing import Any

import numpy as np

from .density_model import DensityFactor, DensityOperator, Ensemble
from .equivalence import CoIsometry, verify_coisometry
from .errors import DensfactError, InvariantError, ParseError, SchemaError
from .linalg_core import DEFAULT_TOL

KINDS = ("ensemble", "density", "factor", "coisometry")
_FIELDS = {
    "ensemble": ("kind", "n", "k", "probs", "states", "meta"),
    "density": ("kind", "n", "matrix", "meta"),
    "factor": ("kind", "n", "k", "matrix", "meta"),
    "coisometry": ("kind", "k", "p", "matrix", "meta"),
}


@dataclass
class MatrixDocument:
    """In-memory form of a document.

    ``data`` is always the matrix in its mathematical orientation: for an
    ensemble it is the n x k array whose columns are the states.
    """

    kind: str
    data: np.ndarray
    probs: np.ndarray | None = None
    meta: dict[str, str] = field(default_factory=dict)

    @property
    def dims(self) -> dict[str, int]:
        rows, cols = self.data.shape
        if self.kind == "coisometry":
            return {"k": rows, "p": cols}
        if self.kind == "density":
            return {"n": rows}
        return {"n": rows, "k": cols}

    def to_domain(self):
        if self.kind == "ensemble":
            return Ensemble(self.data, self.probs)
        if self.kind == "density":
            return DensityOperator(self.data)
        if self.kind == "factor":
            return DensityFactor(self.data)
        return CoIsometry(self.data)


def document_from(obj, meta: dict[str, str] | None = None) -> MatrixDocument:
    """Wrap a domain object into a document."""
    meta = dict(meta or {})
    if isinstance(obj, Ensemble):
        return MatrixDocument("ensemble", np.array(obj.states), np.array(obj.probs), meta)
    if isinstance(obj, DensityOperator):
        return MatrixDocument("density", np.array(obj.matrix), None, meta)
    if isinstance(obj, DensityFactor):
        return MatrixDocument("factor", np.array(obj.matrix), None, meta)
    if isinstance(obj, CoIsometry):
        return MatrixDocument("coisometry", np.array(obj.matrix), None, meta)
    raise TypeError(f"cannot wrap {type(obj).__name__} in a matrix document")


# -- reading ---------------------------------------------------------------


def _reject_constant(name: str):
    raise ParseError(f"non-finite literal {name} is not allowed")


def _is_number(x: Any) -> bool:
    return isinstance(x, (int, float)) and not isinstance(x, bool)


def _dim(obj: dict, name: str) -> int:
    if name not in obj:
        raise SchemaError("missing required field", name)
    value = obj[name]
    if not isinstance(value, int) or isinstance(value, bool) or value < 1:
        raise SchemaError(f"must be a positive integer, got {value!r}", name)
    return value


def _pairs_matrix(value: Any, rows: int, cols: int, name: str) -> np.ndarray:
    if not isinstance(value, list) or len(value) == 0:
        raise SchemaError("must be a non-empty array of rows", name)
    if len(value) != rows:
        raise SchemaError(f"expected {rows} rows, got {len(value)}", name)
    out = np.empty((rows, cols), dtype=np.complex128)
    for i, row in enumerate(value):
        if not isinstance(row, list) or len(row) != cols:
            raise SchemaError(f"row {i} must be an array of {cols} [re, im] pairs", name)
        for j, pair in enumerate(row):
            if (
                not isinstance(pair, list)
                or len(pair) != 2
                or not all(_is_number(x) for x in pair)
            ):
                raise SchemaError(f"entry [{i}][{j}] must be a [re, im] number pair", name)
            re, im = float(pair[0]), float(pair[1])
            if not (math.isfinite(re) and math.isfinite(im)):
                raise InvariantError(f"entry [{i}][{j}] is not finite", "finite entries")
            out[i, j] = complex(re, im)
    return out


def _check_invariants(doc: MatrixDocument, tol: float) -> None:
    checks = {
        "ensemble": ("normalised states with a probability distribution", lambda o: o.validate(tol)),
        "density": ("Hermitian positive semidefinite unit-trace matrix", lambda o: o.validate(tol)),
        "factor": ("unit Frobenius norm factor", lambda o: o.validate(tol)),
        "coisometry": ("orthonormal rows (A A* = I)", lambda o: verify_coisometry(o, tol)),
    }
    invariant, check = checks[doc.kind]
    try:
        check(doc.to_domain())
    except DensfactError as exc:
        raise InvariantError(str(exc), invariant) from exc


def parse_document(text: str | bytes, tol: float = DEFAULT_TOL) -> MatrixDocument:
    """Read and validate a document.

    Raises
    ------
    ParseError
        Malformed JSON, with line and column.
    SchemaError
        Missing, unknown or ill-typed fields.
    InvariantError
        Well-formed document whose contents violate a domain invariant.
    """
    if isinstance(text, bytes):
        try:
            text = text.decode("utf-8")
        except UnicodeDecodeError as exc:
            raise ParseError(f"input is not UTF-8: {exc}") from exc
    try:
        obj = json.loads(text, parse_constant=_reject_constant)
    except json.JSONDecodeError as exc:
        raise ParseError(exc.msg, exc.lineno, exc.colno) from exc
    if not isinstance(obj, dict):
        raise SchemaError("document must be a JSON object", "<root>")
    kind = obj.get("kind")
    if kind not in KINDS:
        raise SchemaError(f"must be one of {', '.join(KINDS)}, got {kind!r}", "kind")
    unknown = sorted(set(obj) - set(_FIELDS[kind]))
    if unknown:
        raise SchemaError(f"unexpected field for kind {kind!r}", unknown[0])

    meta = obj.get("meta", {})
    if not isinstance(meta, dict) or not all(
        isinstance(k, str) and isinstance(v, str) for k, v in meta.items()
    ):
        raise SchemaError("must be a map of strings to strings", "meta")

    probs = None
    if kind == "ensemble":
        n, k = _dim(obj, "n"), _dim(obj, "k")
        if "states" not in obj:
            raise SchemaError("missing required field", "states")
        states = _pairs_matrix(obj["states"], k, n, "states")
        raw = obj.get("probs")
        if not isinstance(raw, list) or not all(_is_number(x) for x in raw):
            raise SchemaError("must be an array of numbers", "probs")
        if len(raw) != k:
            raise SchemaError(f"expected {k} probabilities, got {len(raw)}", "probs")
        probs = np.array(raw, dtype=float)
        if not np.all(np.isfinite(probs)):
            raise InvariantError("probabilities must be finite", "finite entries")
        data = states.T.copy()
    else:
        if kind == "density":
            rows = cols = _dim(obj, "n")
        elif kind == "factor":
            rows, cols = _dim(obj, "n"), _dim(obj, "k")
        else:
            rows, cols = _dim(obj, "k"), _dim(obj, "p")
        if "matrix" not in obj:
            raise SchemaError("missing required field", "matrix")
        data = _pairs_matrix(obj["matrix"], rows, cols, "matrix")

    doc = MatrixDocument(kind, data, probs, dict(meta))
    _check_invariants(doc, tol)
    return doc


# -- writing ---------------------------------------------------------------


def _num(x: float) -> str:
    # repr gives the shortest string that round-trips
    return json.dumps(float(x))


def _row(values: np.ndarray) -> str:
    return "[" + ", ".join(f"[{_num(z.real)}, {_num(z.imag)}]" for z in values) + "]"


def _matrix_lines(m: np.ndarray) -> str:
    rows = [f"    {_row(r)}" for r in m]
    return "[\n" + ",\n".join(rows) + "\n  ]"


def serialize_document(doc: MatrixDocument) -> str:
    """Deterministic UTF-8 JSON text for ``doc`` (ends with a newline).

    Raises
    ------
    InvariantError
        If any number is NaN or infinite.
    """
    if doc.kind not in KINDS:
        raise SchemaError(f"must be one of {', '.join(KINDS)}", "kind")
    data = np.asarray(doc.data, dtype=np.complex128)
    if data.ndim != 2:
        raise SchemaError("must be two-dimensional", "matrix")
    if not np.all(np.isfinite(data)):
        raise InvariantError("matrix contains NaN or Inf", "finite entries")
    parts = [f'  "kind": {json.dumps(doc.kind)}']
    dims = MatrixDocument(doc.kind, data).dims
    parts += [f'  "{name}": {value}' for name, value in dims.items()]
    if doc.kind == "ensemble":
        probs = np.asarray(doc.probs, dtype=float)
        if probs.shape != (data.shape[1],):
            raise SchemaError(f"expected {data.shape[1]} probabilities", "probs")
        if not np.all(np.isfinite(probs)):
            raise InvariantError("probabilities contain NaN or Inf", "finite entries")
        parts.append('  "probs": [' + ", ".join(_num(p) for p in probs) + "]")
        parts.append(f'  "states": {_matrix_lines(data.T)}')
    else:
        parts.append(f'  "matrix": {_matrix_lines(data)}')
    if doc.meta:
        meta = json.dumps({k: doc.meta[k] for k in sorted(doc.meta)}, ensure_ascii=False)
        parts.append(f'  "meta": {meta}')
    return "{\n" + ",\n".join(parts) + "\n}\n"
