"""JSON state and report files.

A state file looks like::

    {
      "format_version": 1,
      "kind": "density",
      "n_max": 1,
      "blocks": [{"n": 0, "matrix": [[1.0, 0.0]]}],
      "metadata": {"label": "vacuum", "truncation_deficit": 0.0}
    }

``matrix`` holds ``(n+1)**2`` ``[re, im]`` pairs in row-major order.
Manifolds that are omitted are zero.  Output is canonical (fixed key
order, shortest round-trip float repr), so save -> load -> save is
byte-identical.
"""

from __future__ import annotations

import json
import re
from pathlib import Path

import numpy as np

from .states import DensityOperator

__all__ = [
    "FORMAT_VERSION",
    "StateFileError",
    "state_to_dict",
    "state_from_dict",
    "dumps_state",
    "loads_state",
    "save_state",
    "load_state",
    "dumps_document",
]

FORMAT_VERSION = 1


class StateFileError(ValueError):
    pass


def _number(x: float) -> float:
    x = float(x)
    # canonical zero so that -0.0 from arithmetic does not change the bytes
    return 0.0 if x == 0 else x


def state_to_dict(rho: DensityOperator, label: str | None = None) -> dict:
    blocks = []
    for n, block in enumerate(rho.blocks):
        if not np.any(block):
            continue
        blocks.append({
            "n": n,
            "matrix": [[_number(z.real), _number(z.imag)] for z in block.ravel()],
        })
    metadata = {"truncation_deficit": _number(rho.truncation_deficit)}
    label = rho.label if label is None else label
    if label is not None:
        metadata = {"label": label, **metadata}
    return {
        "format_version": FORMAT_VERSION,
        "kind": "density",
        "n_max": rho.n_max,
        "blocks": blocks,
        "metadata": metadata,
    }


def state_from_dict(doc: dict) -> DensityOperator:
    try:
        version = doc["format_version"]
        n_max = doc["n_max"]
        entries = doc["blocks"]
    except (KeyError, TypeError) as exc:
        raise StateFileError(f"missing field {exc}") from None
    if version != FORMAT_VERSION:
        raise StateFileError(f"unsupported format_version {version!r}")
    if doc.get("kind", "density") != "density":
        raise StateFileError(f"unsupported kind {doc.get('kind')!r}")
    if not isinstance(n_max, int) or isinstance(n_max, bool) or n_max < 0:
        raise StateFileError(f"n_max must be a nonnegative integer, got {n_max!r}")
    blocks = [np.zeros((n + 1, n + 1), dtype=complex) for n in range(n_max + 1)]
    seen = set()
    for entry in entries:
        try:
            n = entry["n"]
            pairs = entry["matrix"]
        except (KeyError, TypeError) as exc:
            raise StateFileError(f"block entry missing field {exc}") from None
        if not isinstance(n, int) or isinstance(n, bool) or not 0 <= n <= n_max:
            raise StateFileError(f"block manifold {n!r} outside 0..{n_max}")
        if n in seen:
            raise StateFileError(f"duplicate block for manifold {n}")
        seen.add(n)
        try:
            values = np.array(pairs, dtype=float)
        except (TypeError, ValueError):
            raise StateFileError(f"block {n}: matrix entries must be [re, im] numbers") from None
        if values.shape != ((n + 1) ** 2, 2):
            raise StateFileError(
                f"block {n}: expected {(n + 1) ** 2} [re, im] pairs, got shape {values.shape}")
        blocks[n] = (values[:, 0] + 1j * values[:, 1]).reshape(n + 1, n + 1)
    metadata = doc.get("metadata") or {}
    try:
        return DensityOperator(blocks, truncation_deficit=metadata.get("truncation_deficit", 0.0),
                               label=metadata.get("label"))
    except ValueError as exc:
        raise StateFileError(str(exc)) from None


_INNERMOST_LIST = re.compile(r"\[\s+([^\[\]{}]*?)\s+\]")


def dumps_document(doc: dict) -> str:
    """Canonical JSON: two-space indent, innermost lists kept on one line."""
    text = json.dumps(doc, indent=2, allow_nan=False)
    text = _INNERMOST_LIST.sub(lambda m: "[" + re.sub(r",\s+", ", ", m.group(1)) + "]", text)
    return text + "\n"


def dumps_state(rho: DensityOperator, label: str | None = None) -> str:
    return dumps_document(state_to_dict(rho, label))


def loads_state(text: str) -> DensityOperator:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise StateFileError(f"not valid JSON: {exc}") from None
    return state_from_dict(doc)


def save_state(path, rho: DensityOperator, label: str | None = None) -> None:
    Path(path).write_text(dumps_state(rho, label))


def load_state(path) -> DensityOperator:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise StateFileError(f"cannot read {path}: {exc.strerror}") from None
    return loads_state(text)
