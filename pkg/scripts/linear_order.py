"""Observed temporal order on a single decaying Fourier mode with the nonlinear term off."""

import math

import numpy as np

from ks2d import GridSpec, SolverConfig, build_physical_grid, estimate_order, forward_transform, run

g = GridSpec(16, 1.0, 1.0)
X1, X2 = build_physical_grid(g)
u0 = np.cos(2 * X1 + 2 * X2)
exact = forward_transform(u0) * math.exp(-2.4)  # lambda = 24 for the (2, 2) mode, T = 0.1

dts = [1e-2, 5e-3, 2.5e-3, 1.25e-3, 6.25e-4]
errors = []
for dt in dts:
    cfg = SolverConfig(g, dt=dt, t_final=0.1, n_save=2, nonlinear_enabled=False)
    end = forward_transform(run(cfg, u0=u0).final)
    errors.append(float(np.max(np.abs(end - exact)) / np.max(np.abs(exact))))

orders = [float("nan")] + estimate_order(errors, dts)
print(f"{'dt':>10} {'rel error':>12} {'order':>8}")
for dt, e, p in zip(dts, errors, orders):
    print(f"{dt:>10.3g} {e:>12.4e} {p:>8.4f}")
