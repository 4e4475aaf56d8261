"""JSON records shared by the command line and the shipped fixtures."""

from __future__ import annotations

import json
from importlib import resources
from pathlib import Path

import numpy as np

from .signature import DomainError, Signature
from .orbits.canonical import canonical_representative
from .orbits.families import FAMILY_ORDER, FamilyLabel, family_type_sum, parameter_count
from .orbits.types import TypeSum

FIXTURE_VERSION = 1
FIXTURE_FILE = "canonical_representatives.json"
SEED_MAX = 2**64 - 1


def matrix_to_json(A, sig) -> dict:
    return {"sig": Signature.parse(sig).value, "rows": np.asarray(A, dtype=float).tolist()}


def matrix_from_json(doc: dict, sig=None) -> tuple[np.ndarray, Signature]:
    """Matrix and signature from ``{"sig": ..., "rows": [...]}``.

    ``sig`` overrides the recorded signature when given.
    """
    if not isinstance(doc, dict) or "rows" not in doc:
        raise DomainError("matrix record needs a 'rows' field")
    try:
        A = np.array(doc["rows"], dtype=float)
    except (TypeError, ValueError) as exc:
        raise DomainError(f"rows are not a numeric array: {exc}") from None
    if A.shape != (7, 7):
        raise DomainError(f"expected a 7x7 matrix, got shape {A.shape}")
    if not np.all(np.isfinite(A)):
        raise DomainError("matrix has non-finite entries")
    chosen = sig if sig is not None else doc.get("sig", Signature.SPLIT)
    return A, Signature.parse(chosen)


def vector_from_json(value, length: int = 7) -> np.ndarray:
    try:
        v = np.array(value, dtype=float)
    except (TypeError, ValueError) as exc:
        raise DomainError(f"not a numeric vector: {exc}") from None
    if v.shape != (length,):
        raise DomainError(f"expected a vector of length {length}, got shape {v.shape}")
    return v


def label_to_json(label: FamilyLabel, ts: TypeSum) -> dict:
    doc = label.to_json()
    doc["summands"] = ts.to_json()
    return doc


def label_from_json(doc: dict) -> tuple[FamilyLabel, TypeSum]:
    return FamilyLabel(doc["family"], tuple(doc["params"])), TypeSum.from_json(doc["summands"])


def trajectory_to_json(states) -> list[dict]:
    return [s.to_json() for s in states]


def check_seed(seed: int) -> int:
    if not isinstance(seed, (int, np.integer)) or not 0 <= int(seed) <= SEED_MAX:
        raise DomainError(f"seed must be an unsigned 64-bit integer, got {seed!r}")
    return int(seed)


def dumps(doc) -> str:
    """Deterministic JSON text: sorted keys, shortest round-trip floats."""
    return json.dumps(doc, sort_keys=True, indent=2, ensure_ascii=False) + "\n"


# --- canonical representatives -------------------------------------------------


def default_params(name: str) -> tuple[float, ...]:
    """Distinct positive parameters (1, 2, 3, ...) for a family."""
    return tuple(float(i + 1) for i in range(parameter_count(name)))


def build_canonical_fixtures() -> dict:
    reps = []
    for name in FAMILY_ORDER:
        label = FamilyLabel(name, default_params(name))
        ts = family_type_sum(label)
        A = canonical_representative(label, Signature.SPLIT)
        entry = label_to_json(label, ts)
        entry["type_sum"] = str(ts)
        entry["height"] = ts.height
        entry["matrix"] = matrix_to_json(A, Signature.SPLIT)
        reps.append(entry)
    return {"version": FIXTURE_VERSION, "sig": Signature.SPLIT.value, "representatives": reps}


def write_canonical_fixtures(path: str | Path) -> None:
    Path(path).write_text(dumps(build_canonical_fixtures()))


def load_canonical_fixtures() -> dict:
    text = resources.files("wolfqk.data").joinpath(FIXTURE_FILE).read_text()
    doc = json.loads(text)
    if doc.get("version") != FIXTURE_VERSION:
        raise DomainError(f"fixture version {doc.get('version')} is not supported")
    return doc
