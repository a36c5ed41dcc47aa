"""JSON encodings for matrices, states, channels and POVMs.

Matrix: ``{"dim": n, "entries": [[re, im], ...]}`` row-major, length ``n*n``.
A non-square matrix may carry ``"shape": [rows, cols]`` instead of ``dim``.
Channel: ``{"dim_in": n, "dim_out": m, "kraus": [<matrix>, ...]}``.
POVM: ``{"effects": [<matrix>, ...]}``.
"""
import json
from numbers import Real
from pathlib import Path

import numpy as np

from .errors import ParseError, QsdpiError
from .states import DensityMatrix, Povm, QuantumChannel


def matrix_to_json(M):
    M = np.asarray(M, dtype=complex)
    out = {}
    if M.shape[0] == M.shape[1]:
        out["dim"] = int(M.shape[0])
    else:
        out["shape"] = [int(M.shape[0]), int(M.shape[1])]
    out["entries"] = [[float(z.real), float(z.imag)] for z in M.ravel()]
    return out


def matrix_from_json(obj, path="$"):
    if not isinstance(obj, dict):
        raise ParseError("matrix must be an object", path)
    if "shape" in obj:
        shape = obj["shape"]
        if (not isinstance(shape, list) or len(shape) != 2
                or not all(isinstance(d, int) and d >= 1 for d in shape)):
            raise ParseError("shape must be two positive integers", f"{path}.shape")
        rows, cols = shape
    else:
        dim = obj.get("dim")
        if not isinstance(dim, int) or isinstance(dim, bool) or dim < 1:
            raise ParseError("dim must be a positive integer", f"{path}.dim")
        rows = cols = dim
    entries = obj.get("entries")
    if not isinstance(entries, list):
        raise ParseError("entries must be a list", f"{path}.entries")
    if len(entries) != rows * cols:
        raise ParseError(
            f"expected {rows * cols} entries, got {len(entries)}", f"{path}.entries"
        )
    vals = np.empty(rows * cols, dtype=complex)
    for i, e in enumerate(entries):
        if (not isinstance(e, list) or len(e) != 2
                or not all(isinstance(x, Real) and not isinstance(x, bool) for x in e)):
            raise ParseError("entry must be [re, im]", f"{path}.entries[{i}]")
        vals[i] = complex(e[0], e[1])
    if not np.all(np.isfinite(vals)):
        raise ParseError("entries must be finite", f"{path}.entries")
    return vals.reshape(rows, cols)


def channel_to_json(ch):
    return {
        "dim_in": ch.dim_in,
        "dim_out": ch.dim_out,
        "kraus": [matrix_to_json(K) for K in ch.kraus],
    }


def channel_from_json(obj, path="$"):
    if not isinstance(obj, dict):
        raise ParseError("channel must be an object", path)
    kraus_obj = obj.get("kraus")
    if not isinstance(kraus_obj, list) or not kraus_obj:
        raise ParseError("kraus must be a nonempty list", f"{path}.kraus")
    kraus = [matrix_from_json(k, f"{path}.kraus[{i}]") for i, k in enumerate(kraus_obj)]
    for key, axis in (("dim_out", 0), ("dim_in", 1)):
        if key in obj:
            if not isinstance(obj[key], int):
                raise ParseError(f"{key} must be an integer", f"{path}.{key}")
            for i, K in enumerate(kraus):
                if K.shape[axis] != obj[key]:
                    raise ParseError(f"Kraus operator disagrees with {key}", f"{path}.kraus[{i}]")
    return QuantumChannel(kraus, is_qc=bool(obj.get("is_qc", False)))


def povm_to_json(povm):
    return {"effects": [matrix_to_json(F) for F in povm.effects]}


def povm_from_json(obj, path="$"):
    if not isinstance(obj, dict) or not isinstance(obj.get("effects"), list):
        raise ParseError("POVM must have an effects list", f"{path}.effects")
    return Povm([matrix_from_json(F, f"{path}.effects[{i}]")
                 for i, F in enumerate(obj["effects"])])


def state_from_json(obj, path="$"):
    return DensityMatrix(matrix_from_json(obj, path))


def load_json(path):
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise ParseError(f"cannot read {path}: {exc.strerror}", str(path)) from None
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"invalid JSON in {path}: {exc.msg}", f"{path}:{exc.lineno}") from None


def _load(path, decoder):
    obj = load_json(path)
    try:
        return decoder(obj)
    except ParseError as exc:
        raise ParseError(f"{path}: {exc}", exc.path) from None


def load_matrix(path):
    return _load(path, matrix_from_json)


def load_state(path):
    return DensityMatrix(load_matrix(path))


def load_channel(path):
    return _load(path, channel_from_json)


def load_povm(path):
    return _load(path, povm_from_json)


def error_payload(exc: QsdpiError):
    out = {"error": type(exc).__name__, "message": str(exc)}
    if isinstance(exc, ParseError) and exc.path:
        out["path"] = exc.path
    return out
