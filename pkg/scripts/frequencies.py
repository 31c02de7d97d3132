"""Small-oscillation frequencies of the junction along the J(i0) sweep.

    python3 scripts/frequencies.py [--out results/frequencies] [--un 1.5e-5]
"""
import argparse

from bjjdip.cli import RunConfig, cmd_freq
from bjjdip import io


def main():
    ap = argparse.ArgumentParser(description=__doc__.split("\n\n")[0])
    ap.add_argument("--out", default="results/frequencies")
    ap.add_argument("--un", type=float, default=1.5e-5, help="U*N in hbar*omega_H")
    args = ap.parse_args()
    cfg = RunConfig(out=args.out, un=args.un)
    cfg.validate()
    (path,) = cmd_freq(cfg)
    columns, rows = io.read_table(path)
    col = {c: k for k, c in enumerate(columns)}
    peak = max(rows, key=lambda r: float(r[col["omega_J"]]))
    st = [float(r[col["i0"]]) for r in rows if float(r[col["omega_ST"]]) > 0]
    print(f"omega_J peaks at {float(peak[col['omega_J']]):.3e} (i0 = {float(peak[col['i0']]):.4f})")
    if st:
        print(f"self-trapping branch present on {len(st)} rows, i0 in [{min(st):g}, {max(st):g}]")
    print(path)


if __name__ == "__main__":
    main()
