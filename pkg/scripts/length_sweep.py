"""Domain-size sweep over (lx1, lx2); divergent pairs are recorded, not fatal.

    python scripts/length_sweep.py                   # 2x2 sweep at n=64, T=2
    python scripts/length_sweep.py --full            # 3x11 sweep at n=360, T=10
"""

import sys

from _preset import launch

DESK = ["--mode", "sweep", "--n", "64", "--dt", "1e-3", "--t-final", "2", "--n-save", "21",
        "--lx1-list", "1,1.8", "--lx2-list", "0.6,1"]
FULL = ["--mode", "sweep", "--n", "360", "--dt", "1e-3", "--t-final", "10", "--n-save", "101",
        "--lx1-list", "0.2,1,1.8"]

if __name__ == "__main__":
    sys.exit(launch(DESK, FULL, "runs/sweep"))
