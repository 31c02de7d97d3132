"""Junction dynamics through the J -> -J quench, with both energy landscapes.

    python3 scripts/quench.py [--out results/quench] [--z0 0.5] [--un-over-j 3.5]
"""
import argparse
import json

from bjjdip.cli import RunConfig, cmd_quench


def main():
    ap = argparse.ArgumentParser(description=__doc__.split("\n\n")[0])
    ap.add_argument("--out", default="results/quench")
    ap.add_argument("--z0", type=float, default=0.5)
    ap.add_argument("--un-over-j", type=float, default=3.5)
    args = ap.parse_args()
    cfg = RunConfig(out=args.out, z0=args.z0, un_over_j=args.un_over_j)
    cfg.validate()
    paths = cmd_quench(cfg)
    report = json.loads(paths[-1].read_text())
    for seg in report["segments"]:
        stable = [fp["label"] for fp in seg["fixed_points"] if fp["stable"]]
        print(f"segment {seg['segment']}: J = {seg['j']:+g}, UN = {seg['un']:g}, "
              f"{seg.get('dynamics')}, <z> = {seg.get('mean_z', float('nan')):.4f}, "
              f"drift {seg['energy_drift']:.1e}, stable points {stable}")
    for path in paths:
        print(path)


if __name__ == "__main__":
    main()
