"""JSON persistence for operators, bases, decompositions, POVMs and LHV models.

Complex entries are written as ``[re, im]`` pairs.  ``json`` emits the
shortest repr that round-trips each double, so reading a file back yields
bit-identical arrays.
"""

from __future__ import annotations

import json
from pathlib import Path

import numpy as np

from .basis import OperatorBasis
from .decomposition import SeparableDecomposition
from .duality import MeasurementFamily, Povm
from .errors import InputError
from .lhv import LhvModel
from .linalg import as_operator


def operator_to_json(X) -> dict:
    X = as_operator(X)
    return {"dim": X.shape[0], "entries": [[float(z.real), float(z.imag)] for z in X.ravel()]}


def operator_from_json(obj) -> np.ndarray:
    try:
        d = int(obj["dim"])
        pairs = np.asarray(obj["entries"], dtype=float)
    except (KeyError, TypeError, ValueError) as exc:
        raise InputError(f"malformed operator: {exc}") from exc
    if d < 1 or pairs.shape != (d * d, 2):
        raise InputError(f"operator of dim {d} needs {d * d} [re, im] pairs")
    return (pairs[:, 0] + 1j * pairs[:, 1]).reshape(d, d)


def _ops_from_json(items, dim: int) -> np.ndarray:
    ops = [operator_from_json(o) for o in items]
    if not ops:
        return np.zeros((0, dim, dim), dtype=complex)
    if any(X.shape[0] != dim for X in ops):
        raise InputError(f"all operators must have dimension {dim}")
    return np.array(ops)


def basis_to_json(B: OperatorBasis) -> dict:
    return {
        "dim": B.dim,
        "kind": B.kind.value,
        "hermitian": bool(B.hermitian),
        "operators": [operator_to_json(C) for C in B],
    }


def basis_from_json(obj) -> OperatorBasis:
    try:
        d = int(obj["dim"])
        return OperatorBasis(d, _ops_from_json(obj["operators"], d), obj.get("kind", "Custom"), bool(obj["hermitian"]))
    except (KeyError, TypeError) as exc:
        raise InputError(f"malformed basis: {exc}") from exc


def decomposition_to_json(D: SeparableDecomposition) -> dict:
    return {
        "dimA": D.dim_a,
        "dimB": D.dim_b,
        "weights": [float(w) for w in D.weights],
        "a_ops": [operator_to_json(X) for X in D.a_ops],
        "b_ops": [operator_to_json(X) for X in D.b_ops],
    }


def decomposition_from_json(obj) -> SeparableDecomposition:
    try:
        da, db = int(obj["dimA"]), int(obj["dimB"])
        return SeparableDecomposition(
            da, db, np.asarray(obj["weights"], dtype=float),
            _ops_from_json(obj["a_ops"], da), _ops_from_json(obj["b_ops"], db),
        )
    except (KeyError, TypeError, ValueError) as exc:
        raise InputError(f"malformed decomposition: {exc}") from exc


def povm_to_json(P: Povm) -> dict:
    return {"dim": P.dim, "elements": [operator_to_json(M) for M in P.elements]}


def povm_from_json(obj) -> Povm:
    try:
        d = int(obj["dim"])
        return Povm(d, _ops_from_json(obj["elements"], d))
    except (KeyError, TypeError) as exc:
        raise InputError(f"malformed POVM: {exc}") from exc


def family_to_json(F: MeasurementFamily) -> dict:
    return {"dim": F.dim, "povms": [povm_to_json(P) for P in F.povms]}


def family_from_json(obj) -> MeasurementFamily:
    """A family file, a bare list of POVMs, or a single POVM."""
    if isinstance(obj, list):
        return MeasurementFamily(tuple(povm_from_json(p) for p in obj))
    if isinstance(obj, dict) and "elements" in obj:
        return MeasurementFamily((povm_from_json(obj),))
    try:
        return MeasurementFamily(tuple(povm_from_json(p) for p in obj["povms"]))
    except (KeyError, TypeError) as exc:
        raise InputError(f"malformed measurement family: {exc}") from exc


def model_to_json(M: LhvModel) -> dict:
    return {
        "hidden_probs": [float(p) for p in M.hidden_probs],
        "responses_a": [r.tolist() for r in M.responses_a],
        "responses_b": [r.tolist() for r in M.responses_b],
    }


def model_from_json(obj) -> LhvModel:
    try:
        p = np.asarray(obj["hidden_probs"], dtype=float)
        ra = tuple(np.asarray(r, dtype=float).reshape(p.size, -1) for r in obj["responses_a"])
        rb = tuple(np.asarray(r, dtype=float).reshape(p.size, -1) for r in obj["responses_b"])
    except (KeyError, TypeError, ValueError) as exc:
        raise InputError(f"malformed LHV model: {exc}") from exc
    if abs(p.sum() - 1) > 1e-10 or np.any(p < 0):
        raise InputError("hidden_probs must be a probability distribution")
    return LhvModel(p, ra, rb)


def table_to_json(a_setting: int, b_setting: int, probs) -> dict:
    return {"settings": [a_setting, b_setting], "probs": np.asarray(probs).tolist()}


def format_table(probs, row_label: str = "a", col_label: str = "b") -> str:
    """Aligned plain-text table of joint probabilities."""
    probs = np.asarray(probs)
    head = f"{row_label}\\{col_label}".ljust(6) + "".join(f"{j:>14d}" for j in range(probs.shape[1]))
    fmt = "{:>14d}" if probs.dtype.kind in "iu" else "{:>14.10f}"
    rows = [f"{i:<6d}" + "".join(fmt.format(v) for v in row) for i, row in enumerate(probs)]
    return "\n".join([head, *rows])


def read_json(path) -> object:
    try:
        return json.loads(Path(path).read_text(encoding="utf-8"))
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise InputError(f"{path} is not valid JSON: {exc}") from exc


def write_json(path, obj) -> str:
    Path(path).write_text(json.dumps(obj, allow_nan=False), encoding="utf-8")
    return str(path)
