"""JSON schemas for matrices, instances, series, trajectories, reports.

Complex entries travel as ``[re, im]`` pairs in row-major order.
Floats rely on the shortest-roundtrip repr, so dump, load and dump
again is byte-stable; non-finite values are rejected both ways.
Loaders validate shape and type and raise :class:`SchemaError` with
the offending key, never a bare KeyError.

An instance file stores only the three defining blocks (and the
generator seed when there is one); defect operators, bases and the
coupling isometry are recomputed on load so a file cannot smuggle in
inconsistent derived data.
"""

from __future__ import annotations

import json

import numpy as np

from . import linalg
from .lifting import LiftingInstance, assemble
from .ncsystem import Trajectory
from .rowtuple import OperatorTuple
from .transfer import NCSeries
from .words import Word

SCHEMA_VERSION = 1


class SchemaError(ValueError):
    """Malformed or out-of-contract JSON content."""


def graded_key(w: Word):
    return (len(w), w)


def _require(obj, key: str, kind, where: str):
    if not isinstance(obj, dict) or key not in obj:
        raise SchemaError(f"{where}: missing key {key!r}")
    val = obj[key]
    if kind is int and isinstance(val, bool):
        raise SchemaError(f"{where}: key {key!r} must be an integer")
    if not isinstance(val, kind):
        raise SchemaError(f"{where}: key {key!r} has type {type(val).__name__}")
    return val


def matrix_to_json(m: np.ndarray) -> dict:
    m = linalg.as_matrix(m)
    data = [
        [float(z.real), float(z.imag)] for z in np.asarray(m, dtype=np.complex128).ravel()
    ]
    return {"rows": int(m.shape[0]), "cols": int(m.shape[1]), "data": data}


def matrix_from_json(obj, where: str = "matrix") -> np.ndarray:
    rows = _require(obj, "rows", int, where)
    cols = _require(obj, "cols", int, where)
    data = _require(obj, "data", list, where)
    if rows < 0 or cols < 0:
        raise SchemaError(f"{where}: negative dimensions")
    if len(data) != rows * cols:
        raise SchemaError(
            f"{where}: expected {rows * cols} entries, found {len(data)}"
        )
    out = np.zeros((rows, cols), dtype=np.complex128)
    flat = out.ravel()
    for k, entry in enumerate(data):
        if (
            not isinstance(entry, list)
            or len(entry) != 2
            or not all(isinstance(p, (int, float)) and not isinstance(p, bool) for p in entry)
        ):
            raise SchemaError(f"{where}: entry {k} is not an [re, im] pair")
        if not all(np.isfinite(p) for p in entry):
            raise SchemaError(f"{where}: entry {k} is not finite")
        flat[k] = complex(entry[0], entry[1])
    return out


def word_from_json(obj, d: int, where: str = "word") -> Word:
    if not isinstance(obj, list) or not all(
        isinstance(k, int) and not isinstance(k, bool) for k in obj
    ):
        raise SchemaError(f"{where}: a word is a list of integers")
    w = tuple(obj)
    if any(not 1 <= k <= d for k in w):
        raise SchemaError(f"{where}: letters of {w} outside 1..{d}")
    return w


def instance_to_json(instance: LiftingInstance) -> dict:
    out = {
        "schemaVersion": SCHEMA_VERSION,
        "d": instance.d,
        "dimC": instance.dim_c,
        "dimA": instance.dim_a,
        "C": [matrix_to_json(m) for m in instance.c.ops],
        "A": [matrix_to_json(m) for m in instance.a.ops],
        "B": [matrix_to_json(m) for m in instance.b],
        "seed": instance.seed,
    }
    return out


def instance_from_json(
    obj, tol: float = linalg.TOL_EQ, strict: bool = True
) -> LiftingInstance:
    d = _require(obj, "d", int, "instance")
    nc = _require(obj, "dimC", int, "instance")
    na = _require(obj, "dimA", int, "instance")
    if d < 1 or nc < 0 or na < 0:
        raise SchemaError("instance: dimensions out of range")
    seed = obj.get("seed")
    if seed is not None and (isinstance(seed, bool) or not isinstance(seed, int)):
        raise SchemaError("instance: seed must be an integer or null")
    mats = {}
    for key, shape in (("C", (nc, nc)), ("A", (na, na)), ("B", (na, nc))):
        entries = _require(obj, key, list, "instance")
        if len(entries) != d:
            raise SchemaError(f"instance: expected {d} blocks under {key!r}")
        got = [matrix_from_json(m, f"instance.{key}[{j}]") for j, m in enumerate(entries)]
        for j, m in enumerate(got):
            if m.shape != shape:
                raise SchemaError(
                    f"instance.{key}[{j}]: shape {m.shape}, expected {shape}"
                )
        mats[key] = got
    return assemble(
        OperatorTuple(tuple(mats["C"])),
        OperatorTuple(tuple(mats["A"])),
        tuple(mats["B"]),
        tol=tol,
        seed=seed,
        strict=strict,
    )


def series_to_json(series: NCSeries) -> dict:
    coeffs = [
        {"word": list(w), "matrix": matrix_to_json(series.coeffs[w])}
        for w in sorted(series.coeffs, key=graded_key)
    ]
    return {
        "schemaVersion": SCHEMA_VERSION,
        "outDim": series.out_dim,
        "inDim": series.in_dim,
        "depth": series.depth,
        "coeffs": coeffs,
    }


def series_from_json(obj, d: int) -> NCSeries:
    out_dim = _require(obj, "outDim", int, "series")
    in_dim = _require(obj, "inDim", int, "series")
    depth = _require(obj, "depth", int, "series")
    entries = _require(obj, "coeffs", list, "series")
    coeffs: dict[Word, np.ndarray] = {}
    for k, entry in enumerate(entries):
        where = f"series.coeffs[{k}]"
        w = word_from_json(_require(entry, "word", list, where), d, where)
        if w in coeffs:
            raise SchemaError(f"{where}: duplicate word {w}")
        if len(w) > depth:
            raise SchemaError(f"{where}: word {w} exceeds depth {depth}")
        m = matrix_from_json(_require(entry, "matrix", dict, where), where)
        if m.shape != (out_dim, in_dim):
            raise SchemaError(
                f"{where}: shape {m.shape}, expected ({out_dim}, {in_dim})"
            )
        coeffs[w] = m
    return NCSeries(out_dim, in_dim, depth, coeffs)


def _signal_block(values: dict[Word, np.ndarray]) -> list:
    return [
        {"word": list(w), "matrix": matrix_to_json(values[w])}
        for w in sorted(values, key=graded_key)
    ]


def _signal_from_json(entries, d: int, where: str) -> dict[Word, np.ndarray]:
    out: dict[Word, np.ndarray] = {}
    for k, entry in enumerate(entries):
        spot = f"{where}[{k}]"
        w = word_from_json(_require(entry, "word", list, spot), d, spot)
        if w in out:
            raise SchemaError(f"{spot}: duplicate word {w}")
        out[w] = matrix_from_json(_require(entry, "matrix", dict, spot), spot)
    return out


def trajectory_to_json(traj: Trajectory) -> dict:
    return {
        "schemaVersion": SCHEMA_VERSION,
        "depth": traj.depth,
        "input": _signal_block(traj.u),
        "state": _signal_block(traj.x),
        "output": _signal_block(traj.y),
    }


def trajectory_from_json(obj, d: int) -> Trajectory:
    depth = _require(obj, "depth", int, "trajectory")
    return Trajectory(
        depth,
        _signal_from_json(_require(obj, "input", list, "trajectory"), d, "trajectory.input"),
        _signal_from_json(_require(obj, "state", list, "trajectory"), d, "trajectory.state"),
        _signal_from_json(_require(obj, "output", list, "trajectory"), d, "trajectory.output"),
    )


def report_to_json(checks) -> dict:
    """Checks carry name, max_violation, threshold and passed.

    A check that died carries an error message and no finite
    violation; it is stored with ``maxViolation: null``.
    """
    rows = []
    for c in checks:
        v = float(c.max_violation)
        row = {
            "check": c.name,
            "maxViolation": v if np.isfinite(v) else None,
            "threshold": float(c.threshold),
            "pass": bool(c.passed),
        }
        err = getattr(c, "error", None)
        if err is not None:
            row["error"] = str(err)
        rows.append(row)
    return {"schemaVersion": SCHEMA_VERSION, "checks": rows}


def _reject_constant(name: str):
    raise SchemaError(f"non-finite number {name} is not allowed")


def dump_text(obj) -> str:
    """Deterministic rendering: sorted keys, two-space indent, newline."""
    return json.dumps(obj, indent=2, sort_keys=True, allow_nan=False) + "\n"


def load_text(text: str):
    try:
        return json.loads(text, parse_constant=_reject_constant)
    except json.JSONDecodeError as exc:
        raise SchemaError(f"invalid JSON: {exc}") from exc


def save(path, obj) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(dump_text(obj))


def load(path):
    with open(path, "r", encoding="utf-8") as fh:
        return load_text(fh.read())
