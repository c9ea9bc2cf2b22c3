"""Signal CSV files and JSON report documents."""

from __future__ import annotations

import csv
import hashlib
import io
import json
import math
from dataclasses import dataclass
from importlib import metadata, resources
from pathlib import Path

import jsonschema
import numpy as np

HEADER = ["n", "r", "i", "j", "k"]


class SignalFormatError(ValueError):
    """A signal file could not be parsed."""


@dataclass(frozen=True)
class SignalFile:
    """Sample indices and quaternion samples read from ``n,r,i,j,k`` CSV."""

    n: np.ndarray
    q: np.ndarray
    digest: str = ""

    def __len__(self) -> int:
        return self.q.shape[0]


def parse_signal(text: str, digest: str = "") -> SignalFile:
    rows = list(csv.reader(io.StringIO(text)))
    rows = [r for r in rows if any(cell.strip() for cell in r)]
    if not rows:
        raise SignalFormatError("empty signal file")
    header = [c.strip() for c in rows[0]]
    if header != HEADER:
        raise SignalFormatError(f"header must be {','.join(HEADER)}, got {','.join(header)}")
    if len(rows) == 1:
        raise SignalFormatError("signal file has no samples")
    idx = []
    vals = []
    for lineno, row in enumerate(rows[1:], start=2):
        if len(row) != 5:
            raise SignalFormatError(f"line {lineno}: expected 5 fields, got {len(row)}")
        try:
            idx.append(int(row[0]))
            vals.append([float(c) for c in row[1:]])
        except ValueError as exc:
            raise SignalFormatError(f"line {lineno}: {exc}") from None
        if not all(math.isfinite(v) for v in vals[-1]):
            raise SignalFormatError(f"line {lineno}: non-finite value")
    n = np.array(idx, dtype=int)
    if np.any(np.diff(n) <= 0):
        raise SignalFormatError("sample index n must be strictly increasing")
    return SignalFile(n, np.array(vals, dtype=float), digest)


def read_signal(path) -> SignalFile:
    try:
        raw = Path(path).read_bytes()
        text = raw.decode("utf-8")
    except (OSError, UnicodeDecodeError) as exc:
        raise SignalFormatError(f"cannot read {path}: {exc}") from None
    return parse_signal(text, hashlib.sha256(raw).hexdigest())


def format_signal(q, n=None) -> str:
    """CSV text; values use the shortest representation that round-trips."""
    q = np.asarray(q, dtype=float)
    n = np.arange(q.shape[0]) if n is None else np.asarray(n)
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(HEADER)
    for idx, row in zip(n, q):
        writer.writerow([int(idx)] + [repr(float(v)) for v in row])
    return buf.getvalue()


def write_signal(path, q, n=None) -> None:
    Path(path).write_text(format_signal(q, n), encoding="utf-8")


def fixture_path(name: str = "reference_seq.csv") -> Path:
    """Location of a CSV fixture shipped with the package."""
    return Path(str(resources.files("quatsp") / "data" / name))


def library_version() -> str:
    try:
        return metadata.version("artifact")
    except metadata.PackageNotFoundError:
        from . import __version__

        return __version__


# reports ---------------------------------------------------------------------

REPORT_SCHEMA = {
    "$schema": "https://json-schema.org/draft/2020-12/schema",
    "type": "object",
    "required": ["command", "parameters", "results", "residuals", "provenance"],
    "additionalProperties": False,
    "$defs": {
        "quaternion": {"type": "array", "items": {"type": "number"}, "minItems": 4, "maxItems": 4},
        "value": {
            "anyOf": [
                {"type": "number"},
                {"type": "string"},
                {"type": "boolean"},
                {"type": "null"},
                {"type": "array", "items": {"$ref": "#/$defs/value"}},
                {"type": "object", "additionalProperties": {"$ref": "#/$defs/value"}},
            ]
        },
    },
    "properties": {
        "command": {
            "enum": ["autocorr", "matrices", "duality", "takagi", "qlms", "nlqlms", "gradcheck", "rotate"]
        },
        "parameters": {"type": "object"},
        "results": {"type": "object", "additionalProperties": {"$ref": "#/$defs/value"}},
        "residuals": {"type": "object", "additionalProperties": {"type": "number"}},
        "provenance": {
            "type": "object",
            "required": ["input_digest", "version"],
            "properties": {
                "input_digest": {"type": ["string", "null"]},
                "version": {"type": "string"},
            },
        },
    },
}


def quaternion_list(a) -> list:
    """Nested lists with quaternions as ``[r, i, j, k]``."""
    return np.asarray(a, dtype=float).tolist()


def build_report(command: str, parameters: dict, results: dict, residuals: dict,
                 input_digest: str | None) -> dict:
    doc = {
        "command": command,
        "parameters": parameters,
        "results": results,
        "residuals": {k: float(v) for k, v in residuals.items()},
        "provenance": {"input_digest": input_digest, "version": library_version()},
    }
    jsonschema.validate(doc, REPORT_SCHEMA)
    return doc


def _encode(obj, indent: int, level: int) -> str:
    pad = "\n" + " " * (indent * (level + 1))
    end = "\n" + " " * (indent * level)
    if isinstance(obj, bool) or obj is None:
        return json.dumps(obj)
    if isinstance(obj, (int, np.integer)):
        return str(int(obj))
    if isinstance(obj, (float, np.floating)):
        x = float(obj)
        if not math.isfinite(x):
            raise ValueError("non-finite number in report")
        # 17 significant digits always round-trip a double
        return format(x, ".17g")
    if isinstance(obj, str):
        return json.dumps(obj, ensure_ascii=False)
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        items = [f"{json.dumps(str(k), ensure_ascii=False)}: {_encode(v, indent, level + 1)}" for k, v in obj.items()]
        return "{" + pad + ("," + pad).join(items) + end + "}"
    if isinstance(obj, (list, tuple)):
        if not obj:
            return "[]"
        if all(not isinstance(v, (dict, list, tuple)) for v in obj):
            return "[" + ", ".join(_encode(v, indent, level + 1) for v in obj) + "]"
        return "[" + pad + ("," + pad).join(_encode(v, indent, level + 1) for v in obj) + end + "]"
    raise TypeError(f"cannot serialise {type(obj).__name__}")


def dumps_report(doc: dict, indent: int = 2) -> str:
    """JSON text with every float written to 17 significant digits."""
    return _encode(doc, indent, 0) + "\n"
