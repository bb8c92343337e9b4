"""Deterministic JSON report documents.

Floats are written as their shortest round-trip decimal strings (``repr``),
so two runs with the same configuration produce byte-identical files.
"""
from __future__ import annotations

import dataclasses
import enum
import json
import math
from fractions import Fraction
from typing import Any

import numpy as np

SCHEMA = "dichotomy.report/1"


def _float(x: float) -> str:
    if math.isnan(x):
        return "nan"
    if math.isinf(x):
        return "inf" if x > 0 else "-inf"
    return repr(float(x))


def plain(obj: Any) -> Any:
    """Recursively turn results into JSON-ready values."""
    if obj is None or isinstance(obj, (bool, str)):
        return obj
    if isinstance(obj, enum.Enum):
        return obj.value
    if isinstance(obj, (int, np.integer)) and not isinstance(obj, bool):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        return _float(float(obj))
    if isinstance(obj, Fraction):
        return str(obj)
    if isinstance(obj, complex):
        return {"re": _float(obj.real), "im": _float(obj.imag)}
    if isinstance(obj, dict):
        return {str(k): plain(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [plain(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return [plain(v) for v in obj.tolist()]
    if dataclasses.is_dataclass(obj):
        return {f.name: plain(getattr(obj, f.name)) for f in dataclasses.fields(obj) if f.repr}
    if hasattr(obj, "_mpf_") or hasattr(obj, "_mpc_"):
        return str(obj)
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def dumps(doc: dict) -> str:
    return json.dumps(plain(doc), sort_keys=True, indent=2, ensure_ascii=False) + "\n"


def report_doc(command: str, config: dict, results: dict, verdict: str, version: str, timing: dict | None = None) -> dict:
    doc = {
        "schema": SCHEMA,
        "tool": {"name": "dichotomy", "version": version},
        "command": command,
        "config": config,
        "results": results,
        "verdict": verdict,
    }
    if timing is not None:
        doc["timing"] = timing
    return doc
