"""Tunneling amplitude J(i0)/J(0) with the unreliable window flagged.

    python3 scripts/tunneling.py [--out results/tunneling] [--i0-max 25]
"""
import argparse

import numpy as np

from bjjdip import io
from bjjdip.cli import RunConfig, cmd_sweep


def main():
    ap = argparse.ArgumentParser(description=__doc__.split("\n\n")[0])
    ap.add_argument("--out", default="results/tunneling")
    ap.add_argument("--i0-max", type=float, default=25.0)
    args = ap.parse_args()
    cfg = RunConfig(out=args.out, sweep_max=args.i0_max)
    cfg.validate()
    (path,) = cmd_sweep(cfg)
    columns, rows = io.read_table(path)
    col = {c: k for k, c in enumerate(columns)}
    i0 = np.array([float(r[col["i0"]]) for r in rows])
    ratio = np.array([float(r[col["j_over_j0"]]) for r in rows])
    flagged = i0[[r[col["validity_warning"]] == "1" for r in rows]]
    print(f"J(0) = {float(rows[0][col['j']]):.4e} hbar*omega_H")
    print(f"J/J(0) ranges over [{ratio.min():.3g}, {ratio.max():.3g}]")
    if flagged.size:
        print(f"two-mode description flagged for i0 in [{flagged.min():.4f}, {flagged.max():.4f}]")
    print(path)


if __name__ == "__main__":
    main()
