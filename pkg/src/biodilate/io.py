"""JSON file formats (schema ``biodilate/v1``).

Complex numbers are ``[re, im]`` pairs. Writers sort keys so identical
inputs give byte-identical files.
"""

from __future__ import annotations

import hashlib
import json
from pathlib import Path

import numpy as np

from . import qsim
from .exceptions import BiodilateError, DimensionMismatch, UnnormalizedTarget

SCHEMA = "biodilate/v1"


class FileFormatError(BiodilateError, ValueError):
    pass


def cpair(z) -> list[float]:
    z = complex(z)
    return [float(z.real), float(z.imag)]


def cvec(v) -> list[list[float]]:
    return [cpair(z) for z in np.asarray(v).ravel()]


def cmat(M) -> list[list[list[float]]]:
    return [cvec(row) for row in np.asarray(M)]


def _pairs_to_complex(pairs, what: str) -> np.ndarray:
    try:
        arr = np.array(pairs, dtype=float)
    except (TypeError, ValueError) as exc:
        raise FileFormatError(f"{what}: entries must be [re, im] pairs") from exc
    if arr.ndim < 2 or arr.shape[-1] != 2:
        raise FileFormatError(f"{what}: entries must be [re, im] pairs")
    if not np.all(np.isfinite(arr)):
        raise FileFormatError(f"{what}: non-finite value")
    return arr[..., 0] + 1j * arr[..., 1]


def _check_schema(doc: dict, what: str):
    if not isinstance(doc, dict):
        raise FileFormatError(f"{what}: top level must be an object")
    if doc.get("schema", SCHEMA) != SCHEMA:
        raise FileFormatError(f"{what}: unsupported schema {doc.get('schema')!r}")


def matrix_to_doc(M) -> dict:
    M = np.asarray(M)
    return {"schema": SCHEMA, "dim": int(M.shape[0]), "entries": cvec(M.reshape(-1))}


def matrix_from_doc(doc: dict) -> np.ndarray:
    _check_schema(doc, "matrix file")
    try:
        dim = int(doc["dim"])
        entries = doc["entries"]
    except (KeyError, TypeError, ValueError) as exc:
        raise FileFormatError("matrix file needs integer 'dim' and 'entries'") from exc
    if dim < 1 or len(entries) != dim * dim:
        raise FileFormatError(f"matrix file: expected {dim * dim} entries, found {len(entries)}")
    return _pairs_to_complex(entries, "matrix file").reshape(dim, dim)


def state_to_doc(v) -> dict:
    return {"schema": SCHEMA, "amplitudes": cvec(v)}


def state_from_doc(doc: dict, *, renormalize: bool = False, atol: float = 1e-8) -> np.ndarray:
    _check_schema(doc, "state file")
    if "amplitudes" not in doc:
        raise FileFormatError("state file needs 'amplitudes'")
    v = _pairs_to_complex(doc["amplitudes"], "state file")
    n = v.size
    if n < 1 or n & (n - 1):
        raise FileFormatError(f"state file: length {n} is not a power of two")
    norm = np.linalg.norm(v)
    if norm == 0:
        raise FileFormatError("state file: zero vector")
    if abs(norm - 1.0) > atol:
        if not renormalize:
            raise UnnormalizedTarget(f"state norm {norm:.12g} is not 1 (use --renormalize)")
        v = v / norm
    return v


def gate_to_doc(g: qsim.Gate) -> dict:
    return {
        "label": g.label,
        "targets": list(g.targets),
        "controls": [list(c) for c in g.controls],
        "matrix": cmat(g.matrix),
    }


def circuit_to_doc(circuit: qsim.Circuit, *, initial_state=None, postselect=None, output_register=None) -> dict:
    doc = {
        "schema": SCHEMA,
        "num_qubits": circuit.num_qubits,
        "gates": [gate_to_doc(g) for g in circuit.gates],
    }
    if initial_state is not None:
        doc["initial_state"] = cvec(initial_state)
    if postselect is not None:
        register, value = postselect
        doc["postselect"] = {"register": list(register), "value": int(value)}
    if output_register is not None:
        doc["output_register"] = list(output_register)
    return doc


def circuit_from_doc(doc: dict) -> qsim.Circuit:
    _check_schema(doc, "circuit file")
    try:
        gates = tuple(
            qsim.Gate(_pairs_to_complex(g["matrix"], "gate matrix"), tuple(g["targets"]),
                      tuple(tuple(c) for c in g["controls"]), label=g["label"])
            for g in doc["gates"])
        return qsim.Circuit(int(doc["num_qubits"]), gates)
    except (KeyError, TypeError) as exc:
        raise FileFormatError(f"circuit file: {exc}") from exc
    except DimensionMismatch as exc:
        raise FileFormatError(f"circuit file: {exc}") from exc


def simulate_circuit_doc(doc: dict) -> qsim.PostSelectionResult:
    """Run an exported circuit from its recorded initial state and post-select."""
    circuit = circuit_from_doc(doc)
    init = _pairs_to_complex(doc["initial_state"], "initial state")
    final = qsim.run(qsim.StateVector(circuit.num_qubits, init), circuit)
    ps = doc["postselect"]
    return qsim.postselect(final, ps["register"], ps["value"])


def dumps(doc) -> str:
    return json.dumps(doc, sort_keys=True, indent=2, ensure_ascii=False) + "\n"


def digest(doc) -> str:
    blob = json.dumps(doc, sort_keys=True, separators=(",", ":")).encode()
    return hashlib.sha256(blob).hexdigest()


def read_json(path) -> dict:
    try:
        return json.loads(Path(path).read_text())
    except json.JSONDecodeError as exc:
        raise FileFormatError(f"{path}: invalid JSON ({exc})") from exc


def write_json(path, doc) -> None:
    Path(path).write_text(dumps(doc))
