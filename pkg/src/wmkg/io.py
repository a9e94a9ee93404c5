"""Binary and CSV writers for gridded float64 data.

Binary layout, little-endian throughout::

    b"WMKG"                     magic
    u32 version                 currently 1
    u32 rank
    u64 size[rank]
    rank x { u32 label_len, label bytes (UTF-8), f64 origin, f64 delta }
    f64 data[prod(size)]        row-major

CSV files are long format: one column per axis (coordinate values) and a
final ``value`` column, with a header row.
"""
from __future__ import annotations

import csv
import struct
from dataclasses import dataclass
from pathlib import Path

import numpy as np

MAGIC = b"WMKG"
VERSION = 1


@dataclass(frozen=True)
class Axis:
    label: str
    origin: float
    delta: float

    def values(self, size):
        return self.origin + self.delta * np.arange(size)


def write_binary(path, data, axes):
    data = np.ascontiguousarray(data, dtype="<f8")
    if len(axes) != data.ndim:
        raise ValueError(f"{len(axes)} axes given for rank-{data.ndim} data")
    parts = [MAGIC, struct.pack("<II", VERSION, data.ndim)]
    parts.append(struct.pack(f"<{data.ndim}Q", *data.shape))
    for ax in axes:
        label = ax.label.encode("utf-8")
        parts.append(struct.pack("<I", len(label)))
        parts.append(label)
        parts.append(struct.pack("<dd", float(ax.origin), float(ax.delta)))
    parts.append(data.tobytes(order="C"))
    Path(path).write_bytes(b"".join(parts))


def read_binary(path):
    """Return ``(data, axes)`` from a file written by :func:`write_binary`."""
    raw = Path(path).read_bytes()
    if raw[:4] != MAGIC:
        raise ValueError(f"{path}: not a WMKG file")
    version, rank = struct.unpack_from("<II", raw, 4)
    if version != VERSION:
        raise ValueError(f"{path}: unsupported version {version}")
    pos = 12
    shape = struct.unpack_from(f"<{rank}Q", raw, pos)
    pos += 8 * rank
    axes = []
    for _ in range(rank):
        (n,) = struct.unpack_from("<I", raw, pos)
        pos += 4
        label = raw[pos : pos + n].decode("utf-8")
        pos += n
        origin, delta = struct.unpack_from("<dd", raw, pos)
        pos += 16
        axes.append(Axis(label, origin, delta))
    count = int(np.prod(shape)) if rank else 1
    data = np.frombuffer(raw, dtype="<f8", count=count, offset=pos).reshape(shape)
    return data.copy(), axes


def write_csv(path, data, axes):
    data = np.asarray(data, dtype=float)
    coords = [ax.values(s) for ax, s in zip(axes, data.shape)]
    grids = np.meshgrid(*coords, indexing="ij")
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow([ax.label for ax in axes] + ["value"])
        cols = [g.ravel() for g in grids] + [data.ravel()]
        for row in zip(*cols):
            w.writerow([repr(float(x)) for x in row])


def write_table_csv(path, columns):
    """Write a dict of equal-length 1-D columns as a CSV with a header row."""
    names = list(columns)
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(names)
        for row in zip(*(np.asarray(columns[c], dtype=float) for c in names)):
            w.writerow([repr(float(x)) for x in row])


def read_table_csv(path):
    with open(path, newline="") as fh:
        rows = list(csv.reader(fh))
    header, body = rows[0], rows[1:]
    arr = np.array([[float(x) for x in r] for r in body]) if body else np.zeros((0, len(header)))
    return {name: arr[:, i] for i, name in enumerate(header)}


def write_field(directory, name, data, axes, formats):
    """Write ``name.bin`` and/or ``name.csv``; returns the written paths."""
    directory = Path(directory)
    out = []
    if "bin" in formats:
        p = directory / f"{name}.bin"
        write_binary(p, data, axes)
        out.append(p)
    if "csv" in formats:
        p = directory / f"{name}.csv"
        write_csv(p, data, axes)
        out.append(p)
    return out
