"""Four-stage implicit-explicit Runge-Kutta stepping for ``u_t + L u + N(u) = 0``.

The linear operator is diagonal in Fourier space, so each implicit solve is a
per-mode division.  Each stage uses the fresh nonlinear evaluation of the
previous stage value and the one carried from the stage before it.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Optional

import numpy as np

from .spectral import LinearSymbol

NonlinearEvaluator = Callable[[np.ndarray], np.ndarray]

_ALPHA_I = (
    Fraction(343038331393, 1130875731271),
    Fraction(288176579239, 1140253497719),
    Fraction(253330171251, 677500478386),
    Fraction(189462239225, 1091147436423),
)
_BETA_I = (
    Fraction(35965327958, 140127563663),
    Fraction(19632212512, 2700543775099),
    Fraction(-173747147147, 351772688865),
    Fraction(91958533623, 727726057489),
)
_ALPHA_E = (
    Fraction(14, 25),
    Fraction(777974228744, 1346157007247),
    Fraction(251277807242, 1103637129625),
    Fraction(113091689455, 220187950967),
)
_BETA_E = (
    Fraction(0),
    Fraction(-251352885992, 790610919619),
    Fraction(-383714262797, 1103637129625),
    Fraction(-403360439203, 1888264787188),
)


class SingularSolveError(ArithmeticError):
    """The diagonal implicit solve hit a zero denominator."""


@dataclass(frozen=True)
class ImexCoefficients:
    alpha_implicit: tuple[float, ...]
    beta_implicit: tuple[float, ...]
    alpha_explicit: tuple[float, ...]
    beta_explicit: tuple[float, ...]

    @property
    def stages(self) -> int:
        return len(self.alpha_implicit)

    def rows(self):
        return zip(self.alpha_implicit, self.beta_implicit,
                   self.alpha_explicit, self.beta_explicit)


def exact_coefficients() -> dict[str, tuple[Fraction, ...]]:
    """The tabulated weights as exact rationals."""
    return {
        "alpha_implicit": _ALPHA_I,
        "beta_implicit": _BETA_I,
        "alpha_explicit": _ALPHA_E,
        "beta_explicit": _BETA_E,
    }


def tabulated_coefficients() -> ImexCoefficients:
    return ImexCoefficients(**{
        name: tuple(float(f) for f in values)
        for name, values in exact_coefficients().items()
    })


@dataclass
class StepState:
    """Current spectral solution and, if known, its nonlinear term."""

    u_hat: np.ndarray
    prev_nonlinear: Optional[np.ndarray] = None


class ImexStepper:
    """Precomputes the per-stage numerators and denominators for a fixed ``dt``."""

    def __init__(self, dt: float, symbol: LinearSymbol | np.ndarray,
                 nonlinear: NonlinearEvaluator | None,
                 coeffs: ImexCoefficients | None = None):
        if not dt > 0:
            raise ValueError(f"dt must be positive, got {dt}")
        lam = symbol.lam if isinstance(symbol, LinearSymbol) else np.asarray(symbol)
        self.dt = dt
        self.coeffs = tabulated_coefficients() if coeffs is None else coeffs
        self.nonlinear = nonlinear
        self._stages = []
        for s, (aI, bI, aE, bE) in enumerate(self.coeffs.rows(), start=1):
            denom = 1.0 + dt * aI * lam
            if np.any(denom == 0):
                raise SingularSolveError(
                    f"stage {s}: 1 + dt*alpha_I*lambda vanishes for dt={dt}")
            numer = 1.0 - dt * bI * lam
            self._stages.append((numer, denom, dt * aE, dt * bE))

    def amplification(self) -> np.ndarray:
        """Per-mode growth factor of one step when the nonlinear term is off."""
        g = 1.0
        for numer, denom, _, _ in self._stages:
            g = g * numer / denom
        return g

    def step(self, state: StepState) -> StepState:
        u = state.u_hat
        if self.nonlinear is None:
            for numer, denom, _, _ in self._stages:
                u = numer * u / denom
            return StepState(u, None)

        n_cur = state.prev_nonlinear
        if n_cur is None:
            n_cur = self.nonlinear(u)
        n_old = None
        last = len(self._stages) - 1
        for s, (numer, denom, dt_aE, dt_bE) in enumerate(self._stages):
            rhs = numer * u - dt_aE * n_cur
            # the first explicit beta weight is zero and has no operand
            if n_old is not None and dt_bE != 0:
                rhs = rhs - dt_bE * n_old
            u = rhs / denom
            n_old = n_cur
            n_cur = self.nonlinear(u) if s < last else None
        # carry N(u_{n+1}) so the next step's first stage reuses it
        return StepState(u, self.nonlinear(u))


def imex_step(state: StepState, dt: float, symbol: LinearSymbol | np.ndarray,
              nonlinear: NonlinearEvaluator | None,
              coeffs: ImexCoefficients | None = None) -> StepState:
    """Advance ``state`` by one step of size ``dt``.

    ``nonlinear=None`` switches the explicit part off.  For repeated steps with
    a fixed ``dt`` build an :class:`ImexStepper` once instead.
    """
    return ImexStepper(dt, symbol, nonlinear, coeffs).step(state)
