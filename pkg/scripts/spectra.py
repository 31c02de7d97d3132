"""Potential and the three lowest eigenfunctions for several dip strengths.

    python3 scripts/spectra.py [--out results/spectra] [--i0 0 2 4 8]
"""
import argparse

from bjjdip.cli import RunConfig, cmd_spectrum


def main():
    ap = argparse.ArgumentParser(description=__doc__.split("\n\n")[0])
    ap.add_argument("--out", default="results/spectra")
    ap.add_argument("--i0", type=float, nargs="+", default=[0.0, 2.0, 4.0, 8.0])
    args = ap.parse_args()
    cfg = RunConfig(out=args.out, i0_list=",".join(f"{v:g}" for v in args.i0),
                    sweep_max=max(args.i0), sweep_step=0.5)
    cfg.validate()
    for path in cmd_spectrum(cfg):
        print(path)


if __name__ == "__main__":
    main()
