"""Command-line front end.

Flags override values from ``--config``, which is either a flat ``key=value``
file (keys are the long flag names without the leading dashes) or a
``manifest.json`` written by a previous invocation.

Exit codes: 0 success, 2 configuration error, 3 divergence, 4 I/O error.
"""

from __future__ import annotations

import argparse
import csv
import json
import logging
import sys
import time
from dataclasses import dataclass, field
from datetime import datetime, timezone
from pathlib import Path

from . import __version__
from .analysis import (
    length_scale_sweep,
    spatial_convergence_study,
    temporal_convergence_study,
    time_window_study,
)
from .serialization import (
    SnapshotError,
    fmt,
    write_contour_csv,
    write_diagnostics_csv,
    write_manifest,
    write_report,
    write_snapshot,
)
from .solver import DivergenceError, RealityError, SolverConfig, run
from .spectral import ConfigError, GridSpec

log = logging.getLogger("ks2d")

MODES = ("solve", "spatial-conv", "temporal-conv", "sweep", "time-windows")
EXIT_OK, EXIT_CONFIG, EXIT_DIVERGED, EXIT_IO = 0, 2, 3, 4

SWEEP_LX2 = (10 ** -1.5, 0.2, 0.4, 0.6, 0.8, 1.0, 1.2, 1.4, 1.6, 1.8, 2.0)

# key -> (converter name, default)
KEYS = {
    "mode": ("mode", "solve"),
    "n": ("int", 64),
    "lx1": ("float", 1.0),
    "lx2": ("float", 0.6),
    "dt": ("float", 1e-3),
    "t-final": ("float", 1.0),
    "n-save": ("int", 11),
    "operator": ("str", "paper"),
    "scaling": ("str", "paper"),
    "no-nonlinear": ("bool", False),
    "blowup-ceiling": ("float", 1e6),
    "out": ("str", "ks2d-out"),
    "contours": ("bool", True),
    "n-list": ("int-list", (32, 48, 64)),
    "n-ref": ("int", 96),
    "dt-list": ("float-list", (1e-1, 1e-2, 1e-3)),
    "dt-ref": ("float", 1e-4),
    "t-checkpoints": ("float-list", None),
    "lx1-list": ("float-list", (0.2, 1.0, 1.8)),
    "lx2-list": ("float-list", SWEEP_LX2),
    "t-list": ("float-list", None),
}


def _convert(key: str, raw):
    kind = KEYS[key][0]
    if not isinstance(raw, str):
        return raw
    raw = raw.strip()
    try:
        if kind == "int":
            return int(raw)
        if kind == "float":
            return float(raw)
        if kind == "int-list":
            return tuple(int(v) for v in raw.split(",") if v.strip())
        if kind == "float-list":
            return tuple(float(v) for v in raw.split(",") if v.strip())
        if kind == "bool":
            low = raw.lower()
            if low in ("1", "true", "yes", "on"):
                return True
            if low in ("0", "false", "no", "off"):
                return False
            raise ValueError(raw)
        if kind == "mode":
            if raw not in MODES:
                raise ConfigError("mode", f"expected one of {MODES}, got {raw!r}")
            return raw
    except ValueError as exc:
        if isinstance(exc, ConfigError):
            raise
        raise ConfigError(key, f"cannot parse {raw!r} as {kind}") from None
    return raw


def _normalize_key(key: str) -> str:
    return key.strip().lstrip("-").lower().replace("_", "-")


def read_config_file(path) -> dict:
    """Flat ``key=value`` file, or the ``flags`` section of a manifest."""
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise ConfigError("config", f"cannot read {path}: {exc.strerror}") from None
    if text.lstrip().startswith("{"):
        try:
            values = json.loads(text)["flags"]
        except (ValueError, KeyError):
            raise ConfigError("config", f"{path} is not a ks2d manifest") from None
        items = values.items()
    else:
        items = []
        for lineno, line in enumerate(text.splitlines(), 1):
            line = line.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise ConfigError("config", f"{path}:{lineno}: expected key=value, got {line!r}")
            k, v = line.split("=", 1)
            items.append((k, v))
    out = {}
    for k, v in items:
        key = _normalize_key(k)
        if key not in KEYS:
            raise ConfigError(key, f"unknown configuration key in {path}")
        out[key] = v
    return out


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="ks2d",
        description="Pseudospectral IMEX-RK solver for the 2D Kuramoto-Sivashinsky equation.",
        argument_default=argparse.SUPPRESS,
    )
    p.add_argument("--mode", choices=MODES)
    p.add_argument("--config", metavar="FILE", help="key=value file or a previous manifest.json")
    p.add_argument("--n", help="grid points per dimension (even, >= 4)")
    p.add_argument("--lx1", help="length-scale parameter; L1 = 2*pi/lx1")
    p.add_argument("--lx2", help="length-scale parameter; L2 = 2*pi/lx2")
    p.add_argument("--dt")
    p.add_argument("--t-final")
    p.add_argument("--n-save", help="saved snapshots including t=0 and t=T (default 11)")
    p.add_argument("--operator", choices=("paper", "full-biharmonic"))
    p.add_argument("--scaling", choices=("paper", "physical"))
    p.add_argument("--no-nonlinear", action="store_const", const="true")
    p.add_argument("--blowup-ceiling")
    p.add_argument("--out", metavar="DIR")
    p.add_argument("--no-contours", dest="contours", action="store_const", const="false")
    p.add_argument("--n-list", help="comma-separated grid sizes")
    p.add_argument("--n-ref")
    p.add_argument("--dt-list", help="comma-separated time steps")
    p.add_argument("--dt-ref")
    p.add_argument("--t-checkpoints", help="comma-separated times (default: t-final)")
    p.add_argument("--lx1-list")
    p.add_argument("--lx2-list")
    p.add_argument("--t-list", help="comma-separated window lengths")
    p.add_argument("-v", "--verbose", action="store_true")
    p.add_argument("--version", action="version", version=f"ks2d {__version__}")
    return p


@dataclass
class Request:
    mode: str
    config: SolverConfig
    out: Path
    options: dict
    flags: dict = field(default_factory=dict)


def parse_config(argv=None) -> Request:
    args = vars(build_parser().parse_args(argv))
    args.pop("verbose", None)
    raw = {}
    if "config" in args:
        raw.update(read_config_file(args.pop("config")))
    for dest, v in args.items():
        raw[dest.replace("_", "-")] = v

    values = {k: default for k, (_, default) in KEYS.items()}
    for k, v in raw.items():
        values[k] = _convert(k, v)

    config = SolverConfig(
        grid=GridSpec(values["n"], values["lx1"], values["lx2"]),
        dt=values["dt"],
        t_final=values["t-final"],
        n_save=values["n-save"],
        operator_mode=values["operator"],
        scaling_mode=values["scaling"],
        nonlinear_enabled=not values["no-nonlinear"],
        blowup_ceiling=values["blowup-ceiling"],
    )
    if values["t-checkpoints"] is None:
        values["t-checkpoints"] = (config.t_final,)
    if values["t-list"] is None:
        values["t-list"] = (config.t_final,)
    for key in ("n-list", "dt-list", "t-checkpoints", "lx1-list", "lx2-list", "t-list"):
        if not values[key]:
            raise ConfigError(key, "list must not be empty")

    flags = {k: _flag_text(v) for k, v in values.items()}
    return Request(values["mode"], config, Path(values["out"]), values, flags)


def _flag_text(v) -> str:
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, (tuple, list)):
        return ",".join(_flag_text(x) for x in v)
    if isinstance(v, float):
        return fmt(v)
    return str(v)


def _now() -> str:
    return datetime.now(timezone.utc).isoformat()


def _base_manifest(req: Request, started: str) -> dict:
    return {
        "tool_version": f"ks2d {__version__}",
        "mode": req.mode,
        "config": req.config.to_dict(),
        "flags": req.flags,
        "started": started,
    }


def _solve(req: Request) -> int:
    started = _now()
    snap_dir = req.out / "snapshots"
    snap_dir.mkdir(parents=True, exist_ok=True)
    diverged = None
    try:
        traj = run(req.config)
    except DivergenceError as exc:
        traj, diverged = exc.partial, exc
    g = req.config.grid
    snaps = []
    for k, (t, u) in enumerate(zip(traj.times, traj.snapshots)):
        name = f"snapshots/snap_{k:04d}.bin"
        write_snapshot(req.out / name, u, g.lx1, g.lx2, t)
        snaps.append({"file": name, "t": t, "step": traj.steps[k]})
    write_diagnostics_csv(req.out / "diagnostics.csv", traj)
    if req.options["contours"] and traj.snapshots:
        (req.out / "contours").mkdir(exist_ok=True)
        write_contour_csv(req.out / "contours" / "terminal.csv", traj.final, g)
    manifest = _base_manifest(req, started)
    manifest.update(
        ended=_now(),
        wall_time=traj.wall_time,
        snapshots=snaps,
        diverged=diverged is not None,
        divergence_step=None if diverged is None else diverged.step,
    )
    write_manifest(req.out / "manifest.json", manifest)
    if diverged is not None:
        log.error("%s", diverged)
        return EXIT_DIVERGED
    log.info("wrote %d snapshots to %s (%.2fs)", len(snaps), req.out, traj.wall_time)
    return EXIT_OK


def _convergence(req: Request) -> int:
    started = _now()
    o = req.options
    t0 = time.perf_counter()
    if req.mode == "spatial-conv":
        report = spatial_convergence_study(req.config, o["n-list"], o["n-ref"], o["t-checkpoints"])
    else:
        report = temporal_convergence_study(req.config, o["dt-list"], o["dt-ref"], o["t-checkpoints"])
    manifest = _base_manifest(req, started)
    manifest.update(ended=_now(), wall_time=time.perf_counter() - t0,
                    diverged=False, divergence_step=None, reports=["errors.csv"])
    write_report(report, req.out, contours=o["contours"], manifest=manifest)
    for row in report.rows:
        log.info("%s=%-10g %s", report.axis, row.axis_value,
                 "  ".join(f"T={t:g}: L2={e.l2:.3e} Linf={e.linf:.3e}" for t, e in row.errors.items()))
    return EXIT_OK


def _sweep(req: Request) -> int:
    started = _now()
    t0 = time.perf_counter()
    records = length_scale_sweep(req.config, req.options["lx1-list"], req.options["lx2-list"])
    out = req.out
    (out / "snapshots").mkdir(parents=True, exist_ok=True)
    (out / "diagnostics").mkdir(exist_ok=True)
    snaps = []
    with open(out / "sweep.csv", "w", newline="") as f:
        w = csv.writer(f)
        w.writerow(["lx1", "lx2", "diverged", "divergence_step", "t_end", "l2", "min", "max", "wall_time_s"])
        for r in records:
            tag = f"lx1_{fmt(r.lx1)}_lx2_{fmt(r.lx2)}"
            tr = r.trajectory
            w.writerow([fmt(r.lx1), fmt(r.lx2), str(r.diverged).lower(),
                        "" if r.divergence_step is None else r.divergence_step,
                        fmt(tr.times[-1]), fmt(tr.l2[-1]), fmt(tr.umin[-1]), fmt(tr.umax[-1]),
                        fmt(tr.wall_time)])
            name = f"snapshots/{tag}.bin"
            write_snapshot(out / name, tr.final, r.lx1, r.lx2, tr.times[-1])
            snaps.append({"file": name, "t": tr.times[-1], "lx1": r.lx1, "lx2": r.lx2})
            write_diagnostics_csv(out / "diagnostics" / f"{tag}.csv", tr)
            if req.options["contours"]:
                (out / "contours").mkdir(exist_ok=True)
                write_contour_csv(out / "contours" / f"{tag}.csv", tr.final,
                                  GridSpec(req.config.grid.n, r.lx1, r.lx2))
    manifest = _base_manifest(req, started)
    manifest.update(ended=_now(), wall_time=time.perf_counter() - t0, snapshots=snaps,
                    diverged=any(r.diverged for r in records),
                    divergence_step=None, reports=["sweep.csv"],
                    divergent_runs=[{"lx1": r.lx1, "lx2": r.lx2, "step": r.divergence_step}
                                    for r in records if r.diverged])
    write_manifest(out / "manifest.json", manifest)
    return EXIT_OK


def _time_windows(req: Request) -> int:
    started = _now()
    summary = time_window_study(req.config, req.options["t-list"])
    out = req.out
    (out / "snapshots").mkdir(parents=True, exist_ok=True)
    g = summary.trajectory.config.grid
    snaps = []
    with open(out / "windows.csv", "w", newline="") as f:
        w = csv.writer(f)
        w.writerow(["T", "l2", "min", "max"])
        for t, u in summary.windows.items():
            w.writerow([fmt(t), fmt((u**2).sum() ** 0.5), fmt(u.min()), fmt(u.max())])
            name = f"snapshots/T_{fmt(t)}.bin"
            write_snapshot(out / name, u, g.lx1, g.lx2, t)
            snaps.append({"file": name, "t": t})
            if req.options["contours"]:
                (out / "contours").mkdir(exist_ok=True)
                write_contour_csv(out / "contours" / f"T_{fmt(t)}.csv", u, g)
    write_diagnostics_csv(out / "diagnostics.csv", summary.trajectory)
    manifest = _base_manifest(req, started)
    manifest.update(ended=_now(), wall_time=summary.trajectory.wall_time, snapshots=snaps,
                    diverged=False, divergence_step=None, reports=["windows.csv"])
    write_manifest(out / "manifest.json", manifest)
    return EXIT_OK


HANDLERS = {
    "solve": _solve,
    "spatial-conv": _convergence,
    "temporal-conv": _convergence,
    "sweep": _sweep,
    "time-windows": _time_windows,
}


def main(argv=None) -> int:
    argv = sys.argv[1:] if argv is None else list(argv)
    verbose = "-v" in argv or "--verbose" in argv
    logging.basicConfig(level=logging.INFO if verbose else logging.WARNING,
                        format="%(levelname)s %(message)s")
    try:
        req = parse_config(argv)
    except ConfigError as exc:
        print(f"ks2d: configuration error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    try:
        return HANDLERS[req.mode](req)
    except ConfigError as exc:
        print(f"ks2d: configuration error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (DivergenceError, RealityError) as exc:
        print(f"ks2d: {exc}", file=sys.stderr)
        return EXIT_DIVERGED
    except (OSError, SnapshotError) as exc:
        print(f"ks2d: I/O error: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
