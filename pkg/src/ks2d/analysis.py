"""
Error metrics, self-convergence studies and parameter sweeps.

All error norms are plain vector norms over grid values (no quadrature
weights).  Cross-resolution comparisons resample the reference spectrally
onto the coarser grid.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterable, Optional, Sequence

import numpy as np

from .solver import DivergenceError, SolverConfig, Trajectory, run, save_schedule
from .spectral import ConfigError, LinearSymbol


class UndefinedRelativeError(ZeroDivisionError):
    pass


@dataclass(frozen=True)
class ErrorPair:
    l2: float
    linf: float


@dataclass
class ConvergenceRow:
    axis_value: float
    errors: dict[float, ErrorPair]
    wall_time: float


@dataclass
class ConvergenceReport:
    """One row per refinement level, errors keyed by checkpoint time.

    The reference level is included as a row with zero errors.
    """

    axis: str
    reference: float
    checkpoints: list[float]
    rows: list[ConvergenceRow]
    trajectories: dict[float, Trajectory] = field(default_factory=dict, repr=False)

    def l2(self, t: float) -> list[float]:
        return [r.errors[t].l2 for r in self.rows]

    def linf(self, t: float) -> list[float]:
        return [r.errors[t].linf for r in self.rows]

    def axis_values(self) -> list[float]:
        return [r.axis_value for r in self.rows]


def relative_errors(U: np.ndarray, U_ref: np.ndarray) -> ErrorPair:
    U = np.asarray(U, dtype=float)
    U_ref = np.asarray(U_ref, dtype=float)
    if U.shape != U_ref.shape:
        raise ValueError(f"shape mismatch: {U.shape} vs {U_ref.shape}")
    ref2 = np.linalg.norm(U_ref.ravel())
    refi = np.max(np.abs(U_ref))
    if ref2 == 0 or refi == 0:
        raise UndefinedRelativeError("reference field has zero norm")
    d = (U - U_ref).ravel()
    return ErrorPair(float(np.linalg.norm(d) / ref2), float(np.max(np.abs(d)) / refi))


def _resample_axis(c: np.ndarray, m: int, axis: int) -> np.ndarray:
    """Truncate or zero-pad one axis of an unshifted spectrum to length ``m``."""
    n = c.shape[axis]
    if m == n:
        return c
    c = np.moveaxis(c, axis, 0)
    out = np.zeros((m,) + c.shape[1:], dtype=complex)
    if m < n:
        h = m // 2
        out[:h] = c[:h]
        out[m - h + 1:] = c[n - h + 1:]
        # source modes +h and -h both alias onto the target Nyquist
        out[h] = c[h] + c[n - h]
    else:
        h = n // 2
        out[:h] = c[:h]
        out[m - h + 1:] = c[n - h + 1:]
        out[h] = 0.5 * c[h]
        out[m - h] = 0.5 * c[h]
    return np.moveaxis(out, 0, axis)


def spectral_resample(u: np.ndarray, n_dst: int) -> np.ndarray:
    """Fourier interpolation of a square periodic field onto an ``n_dst`` grid.

    Band-limited fields (all modes strictly below both Nyquist limits)
    are reproduced exactly at shared points.
    """
    u = np.asarray(u, dtype=float)
    n_src = u.shape[0]
    for n in (n_src, n_dst):
        if n < 2 or n % 2:
            raise ConfigError("n", f"resample sizes must be even, got {n}")
    if u.shape != (n_src, n_src):
        raise ValueError(f"expected a square field, got {u.shape}")
    if n_dst == n_src:
        return u.copy()
    c = np.fft.fft2(u)
    c = _resample_axis(_resample_axis(c, n_dst, 0), n_dst, 1)
    return np.fft.ifft2(c).real * (n_dst**2 / n_src**2)


def estimate_order(errors: Sequence[float], steps: Sequence[float]) -> list[float]:
    """Observed order ``ln(e_i/e_{i+1}) / ln(h_i/h_{i+1})`` for each adjacent pair."""
    if len(errors) != len(steps) or len(errors) < 2:
        raise ValueError("need matching error/step sequences of length >= 2")
    if any(not (e > 0) for e in errors):
        raise ValueError("errors must be strictly positive")
    if any(not (h > 0) for h in steps) or any(a <= b for a, b in zip(steps, steps[1:])):
        raise ValueError("steps must be positive and strictly decreasing")
    return [math.log(e0 / e1) / math.log(h0 / h1)
            for e0, e1, h0, h1 in zip(errors, errors[1:], steps, steps[1:])]


def linear_exact_solution(u_hat0: np.ndarray, symbol: LinearSymbol | np.ndarray,
                          t: float) -> np.ndarray:
    """Exact solution of ``u_t + L u = 0``: each mode scales by ``exp(-lam t)``."""
    if t < 0:
        raise ValueError("t must be non-negative")
    lam = symbol.lam if isinstance(symbol, LinearSymbol) else np.asarray(symbol)
    return np.asarray(u_hat0) * np.exp(-lam * t)


def _checkpoint_steps(dt: float, checkpoints: Sequence[float]) -> list[int]:
    if not checkpoints:
        raise ConfigError("t_checkpoints", "at least one checkpoint is required")
    steps = []
    for t in checkpoints:
        r = t / dt
        if not t > 0 or abs(r - round(r)) > 1e-9 * r:
            raise ConfigError("t_checkpoints", f"t={t} is not a positive multiple of dt={dt}")
        steps.append(round(r))
    return steps


def _run_checkpoints(template: SolverConfig, checkpoints: Sequence[float], **changes) -> Trajectory:
    cfg = template.replace(t_final=max(checkpoints), n_save=2, **changes)
    steps = _checkpoint_steps(cfg.dt, checkpoints)
    return run(cfg, save_steps=[0, *steps])


def spatial_convergence_study(template: SolverConfig, n_list: Iterable[int], n_ref: int,
                              t_checkpoints: Sequence[float]) -> ConvergenceReport:
    n_list = sorted(int(n) for n in n_list)
    t_checkpoints = sorted(float(t) for t in t_checkpoints)
    _checkpoint_steps(template.dt, t_checkpoints)
    if n_list and n_ref < max(n_list):
        raise ConfigError("n_ref", f"reference {n_ref} must be at least max(n_list)={max(n_list)}")

    trajectories = {}
    for n in sorted(set(n_list) | {n_ref}):
        try:
            trajectories[n] = _run_checkpoints(template, t_checkpoints, n=n)
        except DivergenceError as exc:
            raise DivergenceError(exc.step, f"n={n}: {exc.reason}", exc.partial) from exc

    ref = trajectories[n_ref]
    rows = []
    for n in sorted(set(n_list) | {n_ref}):
        tr = trajectories[n]
        errs = {t: relative_errors(tr.snapshot_at(t), spectral_resample(ref.snapshot_at(t), n))
                for t in t_checkpoints}
        rows.append(ConvergenceRow(float(n), errs, tr.wall_time))
    return ConvergenceReport("n", float(n_ref), t_checkpoints, rows, trajectories)


def temporal_convergence_study(template: SolverConfig, dt_list: Iterable[float], dt_ref: float,
                               t_checkpoints: Sequence[float]) -> ConvergenceReport:
    dts = sorted({float(d) for d in dt_list} | {float(dt_ref)}, reverse=True)
    t_checkpoints = sorted(float(t) for t in t_checkpoints)
    if dt_ref > min(dts):
        raise ConfigError("dt_ref", f"reference {dt_ref} must be the smallest time step")
    for dt in dts:
        _checkpoint_steps(dt, t_checkpoints)

    trajectories = {}
    for dt in dts:
        try:
            trajectories[dt] = _run_checkpoints(template, t_checkpoints, dt=dt)
        except DivergenceError as exc:
            raise DivergenceError(exc.step, f"dt={dt}: {exc.reason}", exc.partial) from exc

    ref = trajectories[float(dt_ref)]
    rows = []
    for dt in dts:
        tr = trajectories[dt]
        errs = {t: relative_errors(tr.snapshot_at(t), ref.snapshot_at(t)) for t in t_checkpoints}
        rows.append(ConvergenceRow(dt, errs, tr.wall_time))
    return ConvergenceReport("dt", float(dt_ref), t_checkpoints, rows, trajectories)


@dataclass
class SweepRecord:
    lx1: float
    lx2: float
    trajectory: Optional[Trajectory]
    diverged: bool = False
    divergence_step: Optional[int] = None
    message: str = ""

    @property
    def terminal(self) -> Optional[np.ndarray]:
        return None if self.trajectory is None else self.trajectory.final


def length_scale_sweep(template: SolverConfig, lx1_list: Iterable[float],
                       lx2_list: Iterable[float]) -> list[SweepRecord]:
    """Run every ``(lx1, lx2)`` pair; divergent runs are recorded, not raised."""
    records = []
    for lx1 in lx1_list:
        for lx2 in lx2_list:
            cfg = template.replace(lx1=float(lx1), lx2=float(lx2))
            try:
                records.append(SweepRecord(cfg.grid.lx1, cfg.grid.lx2, run(cfg)))
            except DivergenceError as exc:
                records.append(SweepRecord(cfg.grid.lx1, cfg.grid.lx2, exc.partial,
                                           True, exc.step, str(exc)))
    return records


@dataclass
class TimeWindowSummary:
    trajectory: Trajectory
    windows: dict[float, np.ndarray]


def time_window_study(template: SolverConfig, t_list: Sequence[float]) -> TimeWindowSummary:
    """A single run to ``max(t_list)`` whose saves include every window end.

    The template's regular save schedule is kept alongside the window ends.
    """
    t_list = [float(t) for t in t_list]
    if not t_list or any(a >= b for a, b in zip(t_list, t_list[1:])):
        raise ConfigError("t_list", "must be a non-empty increasing list")
    window_steps = _checkpoint_steps(template.dt, t_list)
    cfg = template.replace(t_final=t_list[-1],
                           n_save=min(template.n_save, window_steps[-1] + 1))
    steps = set(save_schedule(cfg.n_time, cfg.n_save)) | set(window_steps)
    traj = run(cfg, save_steps=sorted(steps))
    return TimeWindowSummary(traj, {t: traj.snapshot_at(t) for t in t_list})
