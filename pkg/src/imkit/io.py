"""JSON wire format.

Matrices are ``{"dim": d, "re": [[...]], "im": [[...]]}`` and vectors
``{"dim": d, "re": [...], "im": [...]}``; ``im`` may be omitted for real
data. Kraus sets are ``{"outcomes": n, "kraus": [matrix, ...]}``.
Non-square matrices (Kraus operators) additionally carry ``"shape"``.
"""

from __future__ import annotations

import json
import sys
from pathlib import Path

import numpy as np

from .channels import KrausSet, RealKrausSet
from .errors import InvalidInput


def array_to_json(a) -> dict:
    a = np.asarray(a)
    re = np.real(a).astype(float)
    im = np.imag(a).astype(float) if np.iscomplexobj(a) else np.zeros_like(re)
    out = {"dim": int(a.shape[0]), "re": re.tolist(), "im": im.tolist()}
    if a.ndim == 2 and a.shape[0] != a.shape[1]:
        out["shape"] = [int(a.shape[0]), int(a.shape[1])]
    return out


def array_from_json(obj) -> np.ndarray:
    if not isinstance(obj, dict) or "re" not in obj:
        raise InvalidInput("expected an object with 're' (and optionally 'im') arrays")
    try:
        re = np.asarray(obj["re"], dtype=float)
        im = np.asarray(obj["im"], dtype=float) if "im" in obj else np.zeros_like(re)
    except (TypeError, ValueError) as exc:
        raise InvalidInput(f"malformed numeric array: {exc}") from None
    if re.shape != im.shape or re.ndim not in (1, 2):
        raise InvalidInput(f"'re' and 'im' must be matching vectors or matrices, got {re.shape} and {im.shape}")
    if "dim" in obj and int(obj["dim"]) != re.shape[0]:
        raise InvalidInput(f"'dim' = {obj['dim']} does not match data with {re.shape[0]} rows")
    return re + 1j * im


def kraus_to_json(k: KrausSet) -> dict:
    return {
        "outcomes": len(k),
        "dim_in": k.dim_in,
        "dim_out": k.dim_out,
        "real": isinstance(k, RealKrausSet),
        "kraus": [array_to_json(op) for op in k],
    }


def kraus_from_json(obj, real: bool | None = None) -> KrausSet:
    if not isinstance(obj, dict) or "kraus" not in obj:
        raise InvalidInput("expected an object with a 'kraus' list")
    ops = [array_from_json(m) for m in obj["kraus"]]
    if "outcomes" in obj and int(obj["outcomes"]) != len(ops):
        raise InvalidInput(f"'outcomes' = {obj['outcomes']} but {len(ops)} operators given")
    din, dout = obj.get("dim_in"), obj.get("dim_out")
    use_real = obj.get("real", True) if real is None else real
    if use_real:
        return RealKrausSet(ops, din, dout)
    return KrausSet(ops, din, dout)


def read_json(path: str):
    try:
        text = sys.stdin.read() if path == "-" else Path(path).read_text()
    except OSError as exc:
        raise InvalidInput(f"cannot read {path}: {exc.strerror}") from None
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise InvalidInput(f"{path}: invalid JSON ({exc.msg} at line {exc.lineno})") from None


def _default(o):
    if isinstance(o, np.generic):
        return o.item()
    if isinstance(o, np.ndarray):
        return o.tolist()
    raise TypeError(f"cannot serialise {type(o).__name__}")


def dumps(obj) -> str:
    # json emits the shortest repr that round-trips each double
    return json.dumps(obj, indent=2, default=_default) + "\n"
