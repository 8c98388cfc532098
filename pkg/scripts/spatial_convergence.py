"""Resolution study: errors against a finer grid at several terminal times.

    python scripts/spatial_convergence.py            # n=32,48,64 vs 96, T=1 (about 10 s)
    python scripts/spatial_convergence.py --full     # n=120..720 vs 840, T=0.5,1,3,10 (hours)

Extra flags are passed to ``ks2d``, e.g. ``--scaling physical``.
"""

import sys

from _preset import launch

DESK = ["--mode", "spatial-conv", "--lx1", "1", "--lx2", "0.6", "--dt", "1e-3",
        "--t-final", "1", "--n-list", "32,48,64", "--n-ref", "96", "--t-checkpoints", "0.5,1"]
FULL = ["--mode", "spatial-conv", "--lx1", "1", "--lx2", "0.6", "--dt", "1e-3",
        "--t-final", "10", "--n-list", "120,240,360,480,600,720", "--n-ref", "840",
        "--t-checkpoints", "0.5,1,3,10"]

if __name__ == "__main__":
    sys.exit(launch(DESK, FULL, "runs/spatial"))
