"""Full time-marching runs with snapshot capture."""

from __future__ import annotations

import math
import time
from dataclasses import dataclass, field, asdict
from typing import Optional, Sequence

import numpy as np

from .imex import ImexStepper, StepState
from .spectral import (
    ConfigError,
    GridSpec,
    NonlinearTerm,
    OPERATOR_MODES,
    SCALING_MODES,
    build_linear_symbol,
    build_physical_grid,
    forward_transform,
    inverse_transform,
)

IMAG_TOLERANCE = 1e-8
STEP_TOLERANCE = 1e-9


@dataclass(frozen=True)
class SolverConfig:
    grid: GridSpec
    dt: float = 1e-3
    t_final: float = 1.0
    n_save: int = 11
    operator_mode: str = "paper"
    scaling_mode: str = "paper"
    nonlinear_enabled: bool = True
    blowup_ceiling: float = 1e6

    def __post_init__(self):
        for name in ("dt", "t_final"):
            v = getattr(self, name)
            if not (isinstance(v, (int, float)) and math.isfinite(v) and v > 0):
                raise ConfigError(name, f"must be a finite positive number, got {v!r}")
        if self.dt > self.t_final:
            raise ConfigError("dt", f"dt={self.dt} exceeds t_final={self.t_final}")
        ratio = self.t_final / self.dt
        if abs(ratio - round(ratio)) > STEP_TOLERANCE * ratio:
            raise ConfigError(
                "t_final", f"t_final={self.t_final} is not an integer multiple of dt={self.dt}")
        if self.operator_mode not in OPERATOR_MODES:
            raise ConfigError("operator", f"expected one of {OPERATOR_MODES}, got {self.operator_mode!r}")
        if self.scaling_mode not in SCALING_MODES:
            raise ConfigError("scaling", f"expected one of {SCALING_MODES}, got {self.scaling_mode!r}")
        if isinstance(self.n_save, bool) or not isinstance(self.n_save, int):
            raise ConfigError("n_save", f"must be an integer, got {self.n_save!r}")
        if not 2 <= self.n_save <= self.n_time + 1:
            raise ConfigError(
                "n_save", f"must lie in [2, {self.n_time + 1}] for {self.n_time} steps, got {self.n_save}")
        if not self.blowup_ceiling > 0:
            raise ConfigError("blowup_ceiling", "must be positive")

    @property
    def n_time(self) -> int:
        return round(self.t_final / self.dt)

    def replace(self, **changes) -> "SolverConfig":
        """Copy with changes; grid fields (n, lx1, lx2) may be given directly."""
        grid_changes = {k: changes.pop(k) for k in ("n", "lx1", "lx2") if k in changes}
        if grid_changes:
            g = self.grid
            changes["grid"] = GridSpec(**{"n": g.n, "lx1": g.lx1, "lx2": g.lx2, **grid_changes})
        values = {**asdict(self), "grid": self.grid, **changes}
        return SolverConfig(**values)

    def to_dict(self) -> dict:
        return {
            "n": self.grid.n, "lx1": self.grid.lx1, "lx2": self.grid.lx2,
            "dt": self.dt, "t_final": self.t_final, "n_save": self.n_save,
            "operator_mode": self.operator_mode, "scaling_mode": self.scaling_mode,
            "nonlinear_enabled": self.nonlinear_enabled,
            "blowup_ceiling": self.blowup_ceiling,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "SolverConfig":
        d = dict(d)
        grid = GridSpec(d.pop("n"), d.pop("lx1"), d.pop("lx2"))
        return cls(grid=grid, **d)


@dataclass
class Trajectory:
    times: list[float]
    snapshots: list[np.ndarray]
    config: SolverConfig
    wall_time: float
    steps: list[int]
    l2: list[float] = field(default_factory=list)
    umin: list[float] = field(default_factory=list)
    umax: list[float] = field(default_factory=list)
    max_imag: list[float] = field(default_factory=list)

    def snapshot_at(self, t: float) -> np.ndarray:
        step = round(t / self.config.dt)
        try:
            return self.snapshots[self.steps.index(step)]
        except ValueError:
            raise KeyError(f"no snapshot saved at t={t}") from None

    @property
    def final(self) -> np.ndarray:
        return self.snapshots[-1]


class DivergenceError(RuntimeError):
    def __init__(self, step: int, reason: str, partial: Trajectory | None = None):
        super().__init__(f"run diverged at step {step}: {reason}")
        self.step = step
        self.reason = reason
        self.partial = partial


class RealityError(RuntimeError):
    """The inverse transform of a saved state had a non-negligible imaginary part."""


def initial_condition(spec: GridSpec) -> np.ndarray:
    X1, X2 = build_physical_grid(spec)
    return np.sin(X1 + X2) + np.sin(X1) + np.sin(X2)


def save_schedule(n_time: int, n_save: int) -> list[int]:
    """Evenly spaced step indices from 0 to ``n_time`` inclusive."""
    return sorted({round(k * n_time / (n_save - 1)) for k in range(n_save)})


def _to_physical(u_hat: np.ndarray, step: int) -> tuple[np.ndarray, float]:
    z = inverse_transform(u_hat)
    imag = float(np.max(np.abs(z.imag)))
    if not imag < IMAG_TOLERANCE:
        raise RealityError(f"imaginary residue {imag:.3e} at step {step}")
    return z.real.copy(), imag


def run(config: SolverConfig, u0: np.ndarray | None = None,
        save_steps: Optional[Sequence[int]] = None) -> Trajectory:
    """March ``config.n_time`` steps from ``u0`` (default: the sine initial condition).

    ``save_steps`` overrides the evenly spaced schedule; it must contain 0 and
    ``n_time``.  Raises :class:`DivergenceError` when the solution stops being
    finite or its max norm passes ``config.blowup_ceiling``.
    """
    spec = config.grid
    n_time = config.n_time
    if save_steps is None:
        steps = save_schedule(n_time, config.n_save)
    else:
        steps = sorted(set(int(s) for s in save_steps))
        if steps[0] != 0 or steps[-1] != n_time:
            raise ConfigError("save_steps", f"must start at 0 and end at {n_time}")
    if u0 is None:
        u0 = initial_condition(spec)
    u0 = np.asarray(u0, dtype=float)
    if u0.shape != spec.shape:
        raise ValueError(f"initial field has shape {u0.shape}, grid expects {spec.shape}")
    if not np.all(np.isfinite(u0)):
        raise ValueError("initial field must be finite")

    symbol = build_linear_symbol(spec, config.operator_mode, config.scaling_mode)
    nonlinear = NonlinearTerm(spec, config.scaling_mode) if config.nonlinear_enabled else None
    stepper = ImexStepper(config.dt, symbol, nonlinear)
    ceiling_sum = config.blowup_ceiling * spec.n**2

    traj = Trajectory(times=[], snapshots=[], config=config, wall_time=0.0, steps=[])

    def record(step, u_hat):
        u, imag = _to_physical(u_hat, step)
        traj.steps.append(step)
        traj.times.append(step * config.dt)
        traj.snapshots.append(u)
        traj.l2.append(float(np.linalg.norm(u)))
        traj.umin.append(float(u.min()))
        traj.umax.append(float(u.max()))
        traj.max_imag.append(imag)

    t0 = time.perf_counter()
    state = StepState(forward_transform(u0))
    record(0, state.u_hat)
    save_iter = iter(steps[1:])
    next_save = next(save_iter, None)
    for step in range(1, n_time + 1):
        state = stepper.step(state)
        # sum |u_hat| / n^2 bounds max |u|; only inverse-transform when it trips
        bound = float(np.sum(np.abs(state.u_hat)))
        if not bound <= ceiling_sum:
            z = inverse_transform(state.u_hat)
            umax = float(np.max(np.abs(z)))
            if not np.isfinite(umax):
                traj.wall_time = time.perf_counter() - t0
                raise DivergenceError(step, "non-finite values", traj)
            if umax > config.blowup_ceiling:
                traj.wall_time = time.perf_counter() - t0
                raise DivergenceError(
                    step, f"max |u| = {umax:.3e} exceeds {config.blowup_ceiling:.3e}", traj)
        if step == next_save:
            record(step, state.u_hat)
            next_save = next(save_iter, None)
    traj.wall_time = time.perf_counter() - t0
    return traj
