#!/usr/bin/env python3
"""Single-photon loss threshold: sweep data for the activation curve.

Writes out/loss_sweep.csv with the witness bound [2 eta - 1]_+ and the
activated entanglement/steering along the transmissivity grid.
"""

from pathlib import Path

from cvactivation.cli import main

OUT = Path("out")


if __name__ == "__main__":
    OUT.mkdir(exist_ok=True)
    raise SystemExit(main(["loss-sweep", "--out", str(OUT / "loss_sweep.csv")]))
