"""Output formatting: CSV and JSON views with 12 significant digits."""

from __future__ import annotations

import json

import numpy as np

SIG_DIGITS = 12


def fmt(value: float) -> str:
    return f"{float(value):.{SIG_DIGITS}g}"


def round_sig(value: float) -> float:
    return float(fmt(value))


def matrix_to_csv(matrix: np.ndarray, labels: list[str]) -> str:
    """One row per asset; header and row keys are the asset ids."""
    matrix = np.asarray(matrix, dtype=float)
    lines = ["id," + ",".join(labels)]
    for label, row in zip(labels, matrix):
        lines.append(label + "," + ",".join(fmt(v) for v in row))
    return "\n".join(lines) + "\n"


def matrix_to_json_obj(matrix: np.ndarray, labels: list[str]) -> dict:
    matrix = np.asarray(matrix, dtype=float)
    return {"assets": list(labels),
            "rows": [[round_sig(v) for v in row] for row in matrix]}


def to_json_text(obj) -> str:
    """Compact single-line JSON; floats already rounded by the caller."""
    return json.dumps(obj, separators=(",", ":"))


def round_obj(obj):
    """Recursively round floats in a report structure to 12 significant digits."""
    if isinstance(obj, bool):
        return obj
    if isinstance(obj, float):
        return round_sig(obj)
    if isinstance(obj, dict):
        return {k: round_obj(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [round_obj(v) for v in obj]
    return obj
