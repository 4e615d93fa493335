"""Shared JSON encodings for complex matrices and vectors.

Matrices and vectors serialize to ``{"dim": n, "re": ..., "im": ...}`` with
row-major nested lists for matrices and flat lists for vectors.  Canonical
bytes (sorted keys, no whitespace) back the description-length measure and
the config hashes in run manifests.
"""
from __future__ import annotations

import json
from typing import Any

import numpy as np

from .errors import ValidationError


def matrix_to_json(a: np.ndarray) -> dict[str, Any]:
    a = np.asarray(a, dtype=np.complex128)
    if a.ndim != 2:
        raise ValidationError(f"expected a matrix, got ndim={a.ndim}")
    return {"dim": int(a.shape[0]), "re": a.real.tolist(), "im": a.imag.tolist()}


def vector_to_json(v: np.ndarray) -> dict[str, Any]:
    v = np.asarray(v, dtype=np.complex128).reshape(-1)
    return {"dim": int(v.size), "re": v.real.tolist(), "im": v.imag.tolist()}


def complex_from_json(obj: dict[str, Any]) -> np.ndarray:
    """Rebuild a complex array from the shared schema (matrix or vector)."""
    try:
        re = np.asarray(obj["re"], dtype=np.float64)
        im = np.asarray(obj["im"], dtype=np.float64)
    except (KeyError, TypeError, ValueError) as exc:
        raise ValidationError(f"malformed complex-array JSON: {exc}") from exc
    if re.shape != im.shape:
        raise ValidationError("re/im shapes differ")
    if re.ndim not in (1, 2):
        raise ValidationError(f"expected vector or matrix, got ndim={re.ndim}")
    return re + 1j * im


def canonical_bytes(obj: Any) -> bytes:
    """Canonical UTF-8 JSON: sorted keys, compact separators."""
    return json.dumps(obj, sort_keys=True, separators=(",", ":")).encode("utf-8")
