"""JSON instance files.

Layout::

    {"n": 3, "name": "...", "comment": "...",
     "P": [[...], ...], "I": [[...], ...], "C": [[...], ...]}

Each cell is a finite number or the string ``"-inf"``.  ``+inf`` is
rejected because no arc weight of a PIC instance can be ⊤.
"""

from __future__ import annotations

import json
import math
from pathlib import Path

import numpy as np

from .solver import ProblemInstance

NEG_INF_TOKEN = "-inf"


class InstanceFileError(ValueError):
    pass


def _reject_constant(name: str):
    raise InstanceFileError(f"non-finite literal {name} is not allowed; use \"-inf\"")


def _cell(value, where: str) -> float:
    if isinstance(value, bool):
        raise InstanceFileError(f"{where}: expected a number or \"-inf\", got {value!r}")
    if isinstance(value, (int, float)):
        return float(value)
    if value == NEG_INF_TOKEN:
        return -math.inf
    raise InstanceFileError(f"{where}: expected a number or \"-inf\", got {value!r}")


def _matrix(doc: dict, key: str, n: int) -> np.ndarray:
    if key not in doc:
        raise InstanceFileError(f"missing field {key!r}")
    rows = doc[key]
    if not isinstance(rows, list) or len(rows) != n:
        raise InstanceFileError(f"{key}: expected {n} rows")
    out = np.empty((n, n))
    for i, row in enumerate(rows):
        if not isinstance(row, list) or len(row) != n:
            raise InstanceFileError(f"{key}[{i}]: expected a row of {n} cells")
        for j, value in enumerate(row):
            out[i, j] = _cell(value, f"{key}[{i}][{j}]")
    return out


def parse_instance(text: str) -> tuple[ProblemInstance, dict]:
    """Parse an instance document; returns the instance and its metadata."""
    try:
        doc = json.loads(text, parse_constant=_reject_constant)
    except json.JSONDecodeError as exc:
        raise InstanceFileError(f"line {exc.lineno}, column {exc.colno}: {exc.msg}") from None
    if not isinstance(doc, dict):
        raise InstanceFileError("top level must be an object")
    n = doc.get("n")
    if isinstance(n, bool) or not isinstance(n, int) or n < 1:
        raise InstanceFileError(f"n: expected a positive integer, got {n!r}")
    P, I, C = (_matrix(doc, key, n) for key in ("P", "I", "C"))
    meta = {k: doc[k] for k in ("name", "comment") if k in doc}
    return ProblemInstance(P, I, C), meta


def load_instance(path: str | Path) -> tuple[ProblemInstance, dict]:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise InstanceFileError(f"cannot read {path}: {exc.strerror}") from None
    return parse_instance(text)


def encode_value(x: float):
    """JSON value for an extended real: a number or a ``"-inf"``/``"+inf"`` token."""
    if x == -math.inf:
        return NEG_INF_TOKEN
    if x == math.inf:
        return "+inf"
    x = float(x) + 0.0
    return int(x) if x.is_integer() and abs(x) < 2**53 else x


def encode_matrix(M: np.ndarray) -> list[list]:
    return [[encode_value(v) for v in row] for row in M]


def dump_instance(inst: ProblemInstance, name: str | None = None, comment: str | None = None) -> str:
    doc: dict = {"n": inst.n}
    if name is not None:
        doc["name"] = name
    if comment is not None:
        doc["comment"] = comment
    for key in ("P", "I", "C"):
        doc[key] = encode_matrix(getattr(inst, key))
    return json.dumps(doc, indent=2) + "\n"
