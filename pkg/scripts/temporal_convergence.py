"""Time-step study: errors against a much smaller step.

    python scripts/temporal_convergence.py           # n=64, T=0.5, physical scaling (about 10 s)
    python scripts/temporal_convergence.py --full    # n=360, dt=1e-1,1e-2,1e-3 vs 1e-4, T up to 10

The desk preset uses physical wavenumber scaling because the unscaled operator
is unstable at dt=1e-1 on a 64-point grid.
"""

import sys

from _preset import launch

DESK = ["--mode", "temporal-conv", "--n", "64", "--lx1", "1", "--lx2", "0.6",
        "--scaling", "physical", "--t-final", "0.5", "--dt-list", "1e-1,1e-2,1e-3",
        "--dt-ref", "1e-4", "--t-checkpoints", "0.5"]
# half-decade steps such as 10**-1.5 do not divide T, so only whole decades are used
FULL = ["--mode", "temporal-conv", "--n", "360", "--lx1", "1", "--lx2", "0.6",
        "--scaling", "physical", "--t-final", "10", "--dt-list", "1e-1,1e-2,1e-3",
        "--dt-ref", "1e-4", "--t-checkpoints", "0.5,1,3,10"]

if __name__ == "__main__":
    sys.exit(launch(DESK, FULL, "runs/temporal"))
