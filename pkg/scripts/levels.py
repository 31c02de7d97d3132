"""Three lowest levels versus dip strength around the avoided crossing.

    python3 scripts/levels.py [--out results/levels] [--i0-max 25] [--step 0.25]
"""
import argparse
from pathlib import Path

import numpy as np

from bjjdip import io
from bjjdip.potential import lab_defaults
from bjjdip.schrodinger import Grid, spectrum_sweep
from bjjdip.twomode import locate_resonance


def main():
    ap = argparse.ArgumentParser(description=__doc__.split("\n\n")[0])
    ap.add_argument("--out", default="results/levels")
    ap.add_argument("--i0-max", type=float, default=25.0)
    ap.add_argument("--step", type=float, default=0.25)
    args = ap.parse_args()
    p, grid = lab_defaults(), Grid()
    i0 = np.arange(0.0, args.i0_max + 1e-9, args.step)
    centre = locate_resonance(p, 0.0, args.i0_max, grid)
    i0 = np.unique(np.concatenate((i0, np.linspace(centre - 0.05, centre + 0.05, 21))))
    rows = spectrum_sweep(p, i0, 3, grid)
    # the two gerade levels (E1, E3) repel at the crossing
    gaps = np.array([r.energies[2] - r.energies[0] for r in rows])
    k = int(np.argmin(gaps))
    print(f"resonance at i0 = {centre:.6f}; closest gerade approach "
          f"E3-E1 = {gaps[k]:.4f} at i0 = {rows[k].i0:.4f}")
    path = io.write_table(Path(args.out) / "levels",
                          ["i0", "e1", "e2", "e3", "parity1", "parity2", "parity3"],
                          ([r.i0, *r.energies, *r.parities] for r in rows),
                          {**p.as_dict(), "resonance_i0": centre}, "levels versus i0")
    print(path)


if __name__ == "__main__":
    main()
