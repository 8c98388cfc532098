"""
On-disk formats: binary snapshots, CSV reports and JSON manifests.

Snapshot layout (all little-endian)::

    4s   magic "2DKS"
    u32  format version
    u32  n
    f64  lx1, lx2, save time
    f64  n*n values, row-major (row = x2 index)
"""

from __future__ import annotations

import csv
import json
import struct
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable

import numpy as np

from .spectral import GridSpec, build_physical_grid

MAGIC = b"2DKS"
FORMAT_VERSION = 1
SCHEMA_VERSION = 1
_HEADER = struct.Struct("<4sIIddd")

ERRORS_HEADER = ["axis_value", "T", "l2", "linf", "wall_time_s"]


class SnapshotError(ValueError):
    pass


class BadMagicError(SnapshotError):
    pass


class VersionMismatchError(SnapshotError):
    pass


class TruncatedSnapshotError(SnapshotError):
    def __init__(self, expected: int, actual: int):
        super().__init__(f"snapshot payload truncated: expected {expected} values, found {actual}")
        self.expected = expected
        self.actual = actual


@dataclass
class Snapshot:
    values: np.ndarray
    lx1: float
    lx2: float
    t: float

    @property
    def n(self) -> int:
        return self.values.shape[0]


def write_snapshot(path, values: np.ndarray, lx1: float, lx2: float, t: float) -> Path:
    values = np.asarray(values, dtype="<f8")
    if values.ndim != 2 or values.shape[0] != values.shape[1]:
        raise ValueError(f"snapshot must be square, got shape {values.shape}")
    path = Path(path)
    with open(path, "wb") as f:
        f.write(_HEADER.pack(MAGIC, FORMAT_VERSION, values.shape[0], lx1, lx2, t))
        f.write(np.ascontiguousarray(values).tobytes())
    return path


def read_snapshot(path) -> Snapshot:
    data = Path(path).read_bytes()
    if len(data) < 4 or data[:4] != MAGIC:
        raise BadMagicError(f"{path}: bad magic {data[:4]!r}, expected {MAGIC!r}")
    if len(data) < _HEADER.size:
        raise SnapshotError(f"{path}: header truncated ({len(data)} bytes)")
    _, version, n, lx1, lx2, t = _HEADER.unpack_from(data)
    if version != FORMAT_VERSION:
        raise VersionMismatchError(f"{path}: format version {version}, expected {FORMAT_VERSION}")
    payload = data[_HEADER.size:]
    expected = n * n
    if len(payload) < 8 * expected:
        raise TruncatedSnapshotError(expected, len(payload) // 8)
    if len(payload) > 8 * expected:
        raise SnapshotError(f"{path}: {len(payload) - 8 * expected} trailing bytes after payload")
    values = np.frombuffer(payload, dtype="<f8").reshape(n, n).astype(float)
    return Snapshot(values, lx1, lx2, t)


def fmt(x: float) -> str:
    """Shortest round-trip decimal for a float."""
    return repr(float(x))


def write_errors_csv(report, path) -> Path:
    """One row per (axis value, checkpoint); the reference row carries zeros."""
    if not report.checkpoints:
        raise ValueError("report has no checkpoints")
    path = Path(path)
    with open(path, "w", newline="") as f:
        w = csv.writer(f)
        w.writerow(ERRORS_HEADER)
        for row in report.rows:
            for t in report.checkpoints:
                e = row.errors[t]
                w.writerow([fmt(row.axis_value), fmt(t), fmt(e.l2), fmt(e.linf), fmt(row.wall_time)])
    return path


def read_errors_csv(path) -> list[dict[str, float]]:
    with open(path, newline="") as f:
        return [{k: float(v) for k, v in row.items()} for row in csv.DictReader(f)]


def write_contour_csv(path, values: np.ndarray, spec: GridSpec) -> Path:
    X1, X2 = build_physical_grid(spec)
    path = Path(path)
    with open(path, "w", newline="") as f:
        w = csv.writer(f)
        w.writerow(["x1", "x2", "u"])
        for a, b, c in zip(X1.ravel(), X2.ravel(), np.asarray(values).ravel()):
            w.writerow([fmt(a), fmt(b), fmt(c)])
    return path


def write_diagnostics_csv(path, traj) -> Path:
    path = Path(path)
    with open(path, "w", newline="") as f:
        w = csv.writer(f)
        w.writerow(["t", "l2", "min", "max"])
        for row in zip(traj.times, traj.l2, traj.umin, traj.umax):
            w.writerow([fmt(v) for v in row])
    return path


def write_report(report, out_dir, contours: bool = True, manifest: dict | None = None) -> list[Path]:
    """Write ``errors.csv``, per-run terminal snapshots and optional contours.

    Raises before touching the filesystem if the report has no checkpoints.
    """
    if not report.checkpoints:
        raise ValueError("report has no checkpoints")
    out = Path(out_dir)
    snap_dir = out / "snapshots"
    snap_dir.mkdir(parents=True, exist_ok=True)
    written = [write_errors_csv(report, out / "errors.csv")]
    t_end = report.checkpoints[-1]
    for key, traj in report.trajectories.items():
        g = traj.config.grid
        tag = f"{report.axis}_{fmt(key)}"
        written.append(write_snapshot(snap_dir / f"{tag}.bin", traj.snapshot_at(t_end),
                                      g.lx1, g.lx2, t_end))
        if contours:
            cdir = out / "contours"
            cdir.mkdir(exist_ok=True)
            written.append(write_contour_csv(cdir / f"{tag}.csv", traj.snapshot_at(t_end), g))
    if manifest is not None:
        manifest = dict(manifest)
        manifest["snapshots"] = [
            {"file": str(p.relative_to(out)), "t": t_end}
            for p in written if p.suffix == ".bin"
        ]
        written.append(write_manifest(out / "manifest.json", manifest))
    return written


def write_manifest(path, manifest: dict) -> Path:
    path = Path(path)
    path.write_text(json.dumps({"schema_version": SCHEMA_VERSION, **manifest}, indent=2))
    return path


def read_manifest(path) -> dict:
    manifest = json.loads(Path(path).read_text())
    if manifest.get("schema_version") != SCHEMA_VERSION:
        raise ValueError(f"{path}: unsupported manifest schema {manifest.get('schema_version')!r}")
    return manifest


def snapshot_paths(manifest: dict, base) -> Iterable[Path]:
    return [Path(base) / s["file"] for s in manifest.get("snapshots", [])]
