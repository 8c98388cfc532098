"""
Grids, operator symbols, transforms and the de-aliased nonlinear term for the
2D Kuramoto-Sivashinsky equation

    u_t + 1/2 |grad u|^2 + lap(u) + biharm(u) = 0

on the periodic rectangle [0, 2*pi/lx1] x [0, 2*pi/lx2].

Array layout: every n x n field is indexed ``[i, j]`` with ``i`` the x2 sample
index (rows) and ``j`` the x1 sample index (columns).  Spectral arrays use the
standard unshifted DFT ordering along both axes, so ``k1`` varies along
columns and ``k2`` along rows.

Transform convention: ``forward_transform`` is the unnormalized DFT sum and
``inverse_transform`` divides by n**2.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Literal

import numpy as np

OperatorMode = Literal["paper", "full-biharmonic"]
ScalingMode = Literal["paper", "physical"]
Variant = Literal["linear", "nonlinear"]

OPERATOR_MODES = ("paper", "full-biharmonic")
SCALING_MODES = ("paper", "physical")


class ConfigError(ValueError):
    """Invalid grid or solver configuration.  ``field`` names the culprit."""

    def __init__(self, field: str, message: str):
        super().__init__(f"{field}: {message}")
        self.field = field


@dataclass(frozen=True)
class GridSpec:
    """Resolution ``n`` (both directions) and length-scale parameters.

    The domain lengths are ``L1 = 2*pi/lx1`` and ``L2 = 2*pi/lx2``.
    """

    n: int
    lx1: float = 1.0
    lx2: float = 1.0

    def __post_init__(self):
        if isinstance(self.n, bool) or not isinstance(self.n, (int, np.integer)):
            raise ConfigError("n", f"must be an integer, got {self.n!r}")
        if self.n < 4 or self.n % 2:
            raise ConfigError("n", f"must be even and >= 4, got {self.n}")
        for name in ("lx1", "lx2"):
            v = getattr(self, name)
            if not (isinstance(v, (int, float, np.floating)) and math.isfinite(v) and v > 0):
                raise ConfigError(name, f"must be a finite positive number, got {v!r}")
        object.__setattr__(self, "n", int(self.n))
        object.__setattr__(self, "lx1", float(self.lx1))
        object.__setattr__(self, "lx2", float(self.lx2))

    @property
    def L1(self) -> float:
        return 2 * math.pi / self.lx1

    @property
    def L2(self) -> float:
        return 2 * math.pi / self.lx2

    @property
    def shape(self) -> tuple[int, int]:
        return (self.n, self.n)


@dataclass(frozen=True)
class WavenumberGrid:
    k1: np.ndarray
    k2: np.ndarray
    variant: Variant


@dataclass(frozen=True)
class LinearSymbol:
    """Per-mode values of the linear operator; ``u_t = -lam * u`` for N = 0."""

    lam: np.ndarray
    operator_mode: OperatorMode
    scaling_mode: ScalingMode


@dataclass(frozen=True)
class DealiasMask:
    keep: np.ndarray
    cutoff: int
    kept_fraction: float = field(init=False)

    def __post_init__(self):
        object.__setattr__(self, "kept_fraction", float(self.keep.mean()))


def _check_modes(operator_mode=None, scaling_mode=None):
    if operator_mode is not None and operator_mode not in OPERATOR_MODES:
        raise ConfigError("operator", f"expected one of {OPERATOR_MODES}, got {operator_mode!r}")
    if scaling_mode is not None and scaling_mode not in SCALING_MODES:
        raise ConfigError("scaling", f"expected one of {SCALING_MODES}, got {scaling_mode!r}")


def build_physical_grid(spec: GridSpec) -> tuple[np.ndarray, np.ndarray]:
    """Sample coordinates ``(X1, X2)``; the right/top endpoints are excluded."""
    x1 = np.arange(spec.n) * (spec.L1 / spec.n)
    x2 = np.arange(spec.n) * (spec.L2 / spec.n)
    X1, X2 = np.meshgrid(x1, x2, indexing="xy")
    return X1, X2


def wavenumbers_1d(n: int, variant: Variant = "linear") -> np.ndarray:
    """Integer DFT wavenumbers ``0, 1, ..., n/2, -n/2+1, ..., -1``.

    The nonlinear variant puts 0 in the Nyquist slot so odd derivatives of
    real fields stay real.
    """
    k = np.fft.fftfreq(n, d=1.0 / n).round().astype(np.int64)
    k[n // 2] = n // 2 if variant == "linear" else 0
    return k


def build_wavenumber_grid(spec: GridSpec, variant: Variant = "linear") -> WavenumberGrid:
    if variant not in ("linear", "nonlinear"):
        raise ConfigError("variant", f"expected 'linear' or 'nonlinear', got {variant!r}")
    k = wavenumbers_1d(spec.n, variant)
    k1 = np.tile(k, (spec.n, 1))
    return WavenumberGrid(k1=k1, k2=k1.T.copy(), variant=variant)


def scale_factors(spec: GridSpec, scaling_mode: ScalingMode) -> tuple[float, float]:
    _check_modes(scaling_mode=scaling_mode)
    if scaling_mode == "paper":
        return 1.0, 1.0
    return spec.lx1, spec.lx2


def build_linear_symbol(
    spec: GridSpec,
    operator_mode: OperatorMode = "paper",
    scaling_mode: ScalingMode = "paper",
) -> LinearSymbol:
    """Symbol of ``lap + biharm`` with the sign convention ``u_t + L u = 0``.

    ``paper`` mode drops the mixed ``2 k1^2 k2^2`` term of the biharmonic;
    ``full-biharmonic`` keeps it.
    """
    _check_modes(operator_mode, scaling_mode)
    s1, s2 = scale_factors(spec, scaling_mode)
    wn = build_wavenumber_grid(spec, "linear")
    q1 = (s1 * wn.k1.astype(float)) ** 2
    q2 = (s2 * wn.k2.astype(float)) ** 2
    if operator_mode == "paper":
        quartic = q1**2 + q2**2
    else:
        quartic = (q1 + q2) ** 2
    return LinearSymbol(lam=quartic - (q1 + q2), operator_mode=operator_mode,
                        scaling_mode=scaling_mode)


def build_dealias_mask(spec: GridSpec) -> DealiasMask:
    """Square low-pass mask keeping ``|k1|, |k2| <= n // 3``."""
    cutoff = spec.n // 3
    k = np.abs(wavenumbers_1d(spec.n, "linear"))
    keep1 = k <= cutoff
    return DealiasMask(keep=np.outer(keep1, keep1), cutoff=cutoff)


def _check_square(a: np.ndarray, n: int | None = None, what: str = "field"):
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ValueError(f"{what} must be a square 2-D array, got shape {a.shape}")
    if n is not None and a.shape[0] != n:
        raise ValueError(f"{what} has size {a.shape[0]}, grid expects {n}")


def forward_transform(u: np.ndarray) -> np.ndarray:
    u = np.asarray(u)
    _check_square(u)
    return np.fft.fft2(u)


def inverse_transform(u_hat: np.ndarray) -> np.ndarray:
    """Complex inverse transform; callers decide what to do with the imaginary part."""
    u_hat = np.asarray(u_hat)
    _check_square(u_hat, what="spectral field")
    return np.fft.ifft2(u_hat)


def derivative_symbols(spec: GridSpec, scaling_mode: ScalingMode = "paper"):
    """First-derivative multipliers on the nonlinear-variant wavenumber grid.

    ``paper`` scaling uses ``2*pi*i*k``; ``physical`` uses ``i*k*lx``.
    """
    _check_modes(scaling_mode=scaling_mode)
    wn = build_wavenumber_grid(spec, "nonlinear")
    if scaling_mode == "paper":
        f1 = f2 = 2 * math.pi
    else:
        f1, f2 = spec.lx1, spec.lx2
    return 1j * f1 * wn.k1, 1j * f2 * wn.k2


class NonlinearTerm:
    """Reusable evaluator of the de-aliased ``1/2 |grad u|^2`` in spectral space.

    Holds the precomputed derivative symbols and mask; calling it is a pure
    function of the input, so one instance may be shared between threads.
    """

    def __init__(self, spec: GridSpec, scaling_mode: ScalingMode = "paper",
                 mask: DealiasMask | None = None):
        self.spec = spec
        self.scaling_mode = scaling_mode
        self.mask = build_dealias_mask(spec) if mask is None else mask
        if self.mask.keep.shape != spec.shape:
            raise ValueError(f"mask shape {self.mask.keep.shape} does not match grid {spec.shape}")
        d1, d2 = derivative_symbols(spec, scaling_mode)
        keep = self.mask.keep
        # masking folded into the derivative multipliers
        self._d1 = np.where(keep, d1, 0)
        self._d2 = np.where(keep, d2, 0)
        self._keep = keep

    def __call__(self, u_hat: np.ndarray) -> np.ndarray:
        _check_square(u_hat, self.spec.n, "spectral field")
        ux1 = np.fft.ifft2(self._d1 * u_hat)
        ux2 = np.fft.ifft2(self._d2 * u_hat)
        prod = 0.5 * (ux1.real**2 + ux2.real**2)
        out = np.fft.fft2(prod)
        out[~self._keep] = 0
        return out


def nonlinear_term(
    u_hat: np.ndarray,
    spec: GridSpec,
    mask: DealiasMask | None = None,
    scaling_mode: ScalingMode = "paper",
) -> np.ndarray:
    """Spectral coefficients of the de-aliased ``1/2 (u_x1^2 + u_x2^2)``.

    The mask is applied to the input before differentiation and to the
    transformed product; coefficients outside it are exactly zero.
    """
    return NonlinearTerm(spec, scaling_mode, mask)(np.asarray(u_hat))
