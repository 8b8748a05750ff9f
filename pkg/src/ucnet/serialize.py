"""Versioned flat text format for named tensors.

Layout::

    tensors 1
    meta <key> <value ...>
    tensor <name> <ndim> <dim0> <dim1> ...
    <row of values> ...

Values are printed with 17 significant digits, which round-trips IEEE
doubles exactly, so save followed by load reproduces every array bit for
bit. Meta values are free-form strings (rest of line).
"""

from __future__ import annotations

from pathlib import Path
from typing import Mapping

import numpy as np

FORMAT_NAME = "tensors"
FORMAT_VERSION = 1


def _format_value(x: float) -> str:
    return f"{x:.17g}"


def save_tensors(path, tensors: Mapping[str, np.ndarray],
                 meta: Mapping[str, str] | None = None) -> None:
    path = Path(path)
    lines = [f"{FORMAT_NAME} {FORMAT_VERSION}"]
    for key, value in (meta or {}).items():
        if " " in key or "\n" in key:
            raise ValueError(f"meta key {key!r} must not contain whitespace")
        if "\n" in str(value):
            raise ValueError(f"meta value for {key!r} must be a single line")
        lines.append(f"meta {key} {value}")
    for name, array in tensors.items():
        if " " in name or "\n" in name:
            raise ValueError(f"tensor name {name!r} must not contain whitespace")
        array = np.asarray(array, dtype=np.float64)
        if not np.all(np.isfinite(array)):
            raise ValueError(f"tensor {name!r} contains non-finite values")
        dims = " ".join(str(d) for d in array.shape)
        lines.append(f"tensor {name} {array.ndim} {dims}".rstrip())
        rows = array.reshape(array.shape[0], -1) if array.ndim >= 2 else \
            array.reshape(1, -1)
        for row in rows:
            lines.append(" ".join(_format_value(v) for v in row))
    path.write_text("\n".join(lines) + "\n", encoding="utf-8", newline="\n")


def load_tensors(path) -> tuple[dict[str, np.ndarray], dict[str, str]]:
    path = Path(path)
    lines = path.read_text(encoding="utf-8").splitlines()
    if not lines:
        raise ValueError(f"{path}: empty tensor file")
    header = lines[0].split()
    if len(header) != 2 or header[0] != FORMAT_NAME:
        raise ValueError(f"{path}: not a tensor file")
    if int(header[1]) != FORMAT_VERSION:
        raise ValueError(f"{path}: unsupported version {header[1]}")

    tensors: dict[str, np.ndarray] = {}
    meta: dict[str, str] = {}
    pos = 1
    while pos < len(lines):
        line = lines[pos]
        if not line.strip():
            pos += 1
            continue
        if line.startswith("meta "):
            parts = line.split(" ", 2)
            meta[parts[1]] = parts[2] if len(parts) > 2 else ""
            pos += 1
            continue
        if not line.startswith("tensor "):
            raise ValueError(f"{path}: line {pos + 1}: expected tensor header")
        fields = line.split()
        name = fields[1]
        if name in tensors:
            raise ValueError(f"{path}: duplicate tensor {name!r}")
        ndim = int(fields[2])
        shape = tuple(int(d) for d in fields[3:3 + ndim])
        if len(shape) != ndim:
            raise ValueError(f"{path}: line {pos + 1}: malformed shape")
        n_rows = shape[0] if ndim >= 2 else 1
        values: list[float] = []
        pos += 1
        for _ in range(n_rows):
            if pos >= len(lines):
                raise ValueError(f"{path}: tensor {name!r}: truncated data")
            values.extend(float(v) for v in lines[pos].split())
            pos += 1
        expected = int(np.prod(shape)) if shape else 1
        if len(values) != expected:
            raise ValueError(
                f"{path}: tensor {name!r}: expected {expected} values, "
                f"got {len(values)}")
        tensors[name] = np.array(values, dtype=np.float64).reshape(shape)
    return tensors, meta
