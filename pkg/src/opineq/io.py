"""Text formats (JSON syntax) for matrices, maps, bounds, and instances.

A square matrix is ``{"n": n, "re": [[...]], "im": [[...]]}`` with `im`
optional (default all-zero); rectangular payloads carry explicit "rows" /
"cols".  Floats are written with `repr`, which round-trips doubles exactly
(17 significant digits suffice), so load(dump(x)) == x bit-for-bit.
"""

from __future__ import annotations

import json

import numpy as np

from .constants import SandwichBounds
from .errors import MalformedSpec
from .maps import MapSpec
from .sampler import Instance


def dumps_canonical(obj) -> str:
    """Deterministic JSON: sorted keys, fixed separators, trailing newline."""
    return json.dumps(obj, sort_keys=True, indent=1, separators=(",", ": ")) + "\n"


def _grid(values: np.ndarray) -> list:
    return [[float(x) for x in row] for row in values]


def matrix_to_obj(A: np.ndarray) -> dict:
    M = np.asarray(A, dtype=np.complex128)
    if M.ndim != 2 or M.shape[0] != M.shape[1]:
        raise MalformedSpec(f"matrix payload must be square, got shape {M.shape}")
    obj = {"n": int(M.shape[0]), "re": _grid(M.real)}
    if np.any(M.imag != 0.0):
        obj["im"] = _grid(M.imag)
    return obj


def obj_to_matrix(obj: dict) -> np.ndarray:
    try:
        n = int(obj["n"])
        re = np.asarray(obj["re"], dtype=float)
    except (KeyError, TypeError, ValueError) as exc:
        raise MalformedSpec(f"bad matrix payload: {exc}") from exc
    if re.shape != (n, n):
        raise MalformedSpec(f"re field has shape {re.shape}, expected ({n}, {n})")
    if "im" in obj:
        im = np.asarray(obj["im"], dtype=float)
        if im.shape != (n, n):
            raise MalformedSpec(f"im field has shape {im.shape}, expected ({n}, {n})")
    else:
        im = np.zeros((n, n))
    return re + 1j * im


def rect_to_obj(V: np.ndarray) -> dict:
    M = np.asarray(V, dtype=np.complex128)
    if M.ndim != 2:
        raise MalformedSpec(f"expected a matrix, got shape {M.shape}")
    obj = {"rows": int(M.shape[0]), "cols": int(M.shape[1]), "re": _grid(M.real)}
    if np.any(M.imag != 0.0):
        obj["im"] = _grid(M.imag)
    return obj


def obj_to_rect(obj: dict) -> np.ndarray:
    try:
        shape = (int(obj["rows"]), int(obj["cols"]))
        re = np.asarray(obj["re"], dtype=float)
    except (KeyError, TypeError, ValueError) as exc:
        raise MalformedSpec(f"bad array payload: {exc}") from exc
    if re.shape != shape:
        raise MalformedSpec(f"re field has shape {re.shape}, expected {shape}")
    if "im" in obj:
        im = np.asarray(obj["im"], dtype=float)
        if im.shape != shape:
            raise MalformedSpec(f"im field has shape {im.shape}, expected {shape}")
    else:
        im = np.zeros(shape)
    return re + 1j * im


def map_to_obj(phi: MapSpec) -> dict:
    obj = {"kind": phi.kind, "n": phi.n}
    if phi.kind == "compression":
        obj["V"] = rect_to_obj(phi.payload)
    elif phi.kind == "pinching":
        obj["blocks"] = [list(b) for b in phi.payload]
    elif phi.kind == "unitary_mixture":
        obj["terms"] = [
            {"weight": float(w), "U": matrix_to_obj(U)} for w, U in phi.payload
        ]
    return obj


def obj_to_map(obj: dict) -> MapSpec:
    try:
        kind = obj["kind"]
        n = int(obj["n"])
    except (KeyError, TypeError, ValueError) as exc:
        raise MalformedSpec(f"bad map payload: {exc}") from exc
    if kind == "compression":
        return MapSpec(kind, n, obj_to_rect(obj["V"]))
    if kind == "pinching":
        return MapSpec(kind, n, tuple(tuple(int(i) for i in b) for b in obj["blocks"]))
    if kind == "unitary_mixture":
        terms = tuple(
            (float(t["weight"]), obj_to_matrix(t["U"])) for t in obj["terms"]
        )
        return MapSpec(kind, n, terms)
    return MapSpec(kind, n)


def instance_to_obj(inst: Instance) -> dict:
    return {
        "n": inst.n,
        "seed": inst.seed,
        "bounds": inst.bounds.to_dict(),
        "A": matrix_to_obj(inst.A),
        "B": matrix_to_obj(inst.B),
    }


def obj_to_instance(obj: dict) -> Instance:
    try:
        return Instance(
            A=obj_to_matrix(obj["A"]),
            B=obj_to_matrix(obj["B"]),
            bounds=SandwichBounds.from_dict(obj["bounds"]),
            seed=int(obj["seed"]),
            n=int(obj["n"]),
        )
    except KeyError as exc:
        raise MalformedSpec(f"instance payload missing field {exc}") from exc


def save_json(path: str, obj) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(dumps_canonical(obj))


def load_json(path: str):
    with open(path, "r", encoding="utf-8") as fh:
        return json.load(fh)
