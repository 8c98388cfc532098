"""Shared launcher: run a CLI preset, forwarding any extra flags."""

import sys

from ks2d.cli import main


def launch(desk: list[str], full: list[str], out: str) -> int:
    extra = sys.argv[1:]
    preset = full if "--full" in extra else desk
    extra = [a for a in extra if a != "--full"]
    if "--out" not in extra:
        extra += ["--out", out + ("-full" if preset is full else "")]
    return main(preset + ["-v"] + extra)
