"""JSON interchange formats (``format_version`` "1").

Complex entries are ``[re, im]`` pairs, matrices are row-major lists of rows.
Python's ``json`` writes floats with the shortest repr that round-trips, so
encoding is lossless at double precision.

Measurement file::

    {"format_version": "1", "d": 2, "block_sizes": [2, 3],
     "operators": [[M, M], [M, M, M]], "provenance": {...}}

Basis file::

    {"format_version": "1", "d": 2, "operators": [M, M, M]}

State batch (a single document, or JSON Lines of the ``states`` items)::

    {"format_version": "1", "states": [{"label": "bell", "dims": [2, 2], "matrix": M}]}
"""

from __future__ import annotations

import json
from typing import IO, Any, Iterator

import numpy as np

from .exceptions import GSMError

FORMAT_VERSION = "1"


class FormatError(GSMError):
    pass


def encode_matrix(m) -> list:
    m = np.asarray(m, dtype=np.complex128)
    return [[[float(z.real), float(z.imag)] for z in row] for row in m]


def decode_matrix(data) -> np.ndarray:
    try:
        arr = np.asarray(data, dtype=float)
    except (TypeError, ValueError) as exc:
        raise FormatError(f"malformed matrix: {exc}") from None
    if arr.ndim != 3 or arr.shape[2] != 2 or arr.shape[0] != arr.shape[1] or arr.shape[0] == 0:
        raise FormatError(f"matrix must be a non-empty square array of [re, im] pairs, got shape {arr.shape}")
    return arr[..., 0] + 1j * arr[..., 1]


def _check_version(doc: dict) -> None:
    if not isinstance(doc, dict):
        raise FormatError("top-level JSON value must be an object")
    v = doc.get("format_version")
    if v != FORMAT_VERSION:
        raise FormatError(f"unsupported format_version {v!r}; expected {FORMAT_VERSION!r}")


def dumps(doc: Any) -> str:
    return json.dumps(doc, indent=2, allow_nan=False) + "\n"


def measurement_to_dict(blocks, d: int, provenance: dict | None = None) -> dict:
    doc = {
        "format_version": FORMAT_VERSION,
        "d": int(d),
        "block_sizes": [len(b) for b in blocks],
        "operators": [[encode_matrix(e) for e in b] for b in blocks],
    }
    if provenance is not None:
        doc["provenance"] = provenance
    return doc


def measurement_from_dict(doc: dict) -> tuple[int, list[np.ndarray], dict | None]:
    """Return ``(d, blocks, provenance)``; shapes are checked, physics is not."""
    _check_version(doc)
    try:
        d = int(doc["d"])
        sizes = [int(m) for m in doc["block_sizes"]]
        raw = doc["operators"]
    except (KeyError, TypeError, ValueError) as exc:
        raise FormatError(f"measurement file missing or malformed field: {exc}") from None
    if not raw or not sizes:
        raise FormatError("measurement file has no POVMs")
    if len(raw) != len(sizes):
        raise FormatError(f"{len(raw)} operator blocks but {len(sizes)} block sizes")
    blocks = []
    for a, (block, m) in enumerate(zip(raw, sizes)):
        if not isinstance(block, list) or len(block) == 0:
            raise FormatError(f"block {a} is empty")
        if len(block) != m:
            raise FormatError(f"block {a} has {len(block)} operators, block_sizes says {m}")
        mats = [decode_matrix(e) for e in block]
        if any(e.shape != (d, d) for e in mats):
            raise FormatError(f"block {a} has operators that are not {d}x{d}")
        blocks.append(np.array(mats))
    return d, blocks, doc.get("provenance")


def load_measurement(fp: IO[str]):
    try:
        doc = json.load(fp)
    except json.JSONDecodeError as exc:
        raise FormatError(f"invalid JSON: {exc}") from None
    return measurement_from_dict(doc)


def basis_from_dict(doc: dict) -> list[np.ndarray]:
    _check_version(doc)
    try:
        ops = [decode_matrix(m) for m in doc["operators"]]
    except (KeyError, TypeError) as exc:
        raise FormatError(f"basis file malformed: {exc}") from None
    if not ops:
        raise FormatError("basis file has no operators")
    return ops


def basis_to_dict(ops, d: int) -> dict:
    return {"format_version": FORMAT_VERSION, "d": int(d), "operators": [encode_matrix(g) for g in ops]}


def state_to_dict(rho, dims, label: str | None = None) -> dict:
    doc = {"label": label, "dims": [int(x) for x in dims], "matrix": encode_matrix(rho)}
    return doc


def _state_item(item: dict, i: int) -> tuple[str, tuple[int, int], np.ndarray]:
    try:
        dims = tuple(int(x) for x in item["dims"])
        rho = decode_matrix(item["matrix"])
    except (KeyError, TypeError, ValueError) as exc:
        raise FormatError(f"state {i} malformed: {exc}") from None
    label = item.get("label") or f"state{i}"
    return str(label), dims, rho


def iter_states(text: str) -> Iterator[tuple[str, tuple[int, int], np.ndarray]]:
    """Parse a state batch: a ``{"states": [...]}`` document, a single state object, or JSON Lines."""
    try:
        doc = json.loads(text)
    except json.JSONDecodeError:
        doc = None
    if isinstance(doc, dict) and "matrix" in doc:
        yield _state_item(doc, 0)
        return
    if isinstance(doc, dict):
        _check_version(doc)
        items = doc.get("states")
        if not isinstance(items, list):
            raise FormatError("state file needs a 'states' list")
        for i, item in enumerate(items):
            yield _state_item(item, i)
        return
    lines = [ln for ln in text.splitlines() if ln.strip()]
    if not lines:
        raise FormatError("empty state batch")
    for i, ln in enumerate(lines):
        try:
            item = json.loads(ln)
        except json.JSONDecodeError as exc:
            raise FormatError(f"line {i + 1}: invalid JSON: {exc}") from None
        if not isinstance(item, dict):
            raise FormatError(f"line {i + 1}: expected a state object")
        yield _state_item(item, i)


def measured(value, tolerance: float) -> dict:
    """Report leaf: a numeric value with the tolerance it was tested against."""
    return {"value": _plain(value), "tolerance": tolerance}


def _plain(v):
    if isinstance(v, (np.floating, np.integer)):
        return v.item()
    if isinstance(v, np.ndarray):
        return [_plain(x) for x in v.tolist()]
    if isinstance(v, (list, tuple)):
        return [_plain(x) for x in v]
    return v
