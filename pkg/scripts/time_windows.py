"""Long-window behaviour: one run, terminal states extracted at each window end.

    python scripts/time_windows.py                   # n=64, T=1,2,3
    python scripts/time_windows.py --full            # n=360, T=10,20,...,60
"""

import sys

from _preset import launch

DESK = ["--mode", "time-windows", "--n", "64", "--lx1", "1", "--lx2", "0.6", "--dt", "1e-3",
        "--t-list", "1,2,3"]
FULL = ["--mode", "time-windows", "--n", "360", "--lx1", "1", "--lx2", "0.6", "--dt", "1e-3",
        "--t-list", "10,20,30,40,50,60"]

if __name__ == "__main__":
    sys.exit(launch(DESK, FULL, "runs/time-windows"))
