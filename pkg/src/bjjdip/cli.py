"""Command-line front end.

    bjjdip spectrum|sweep|quench|freq [--config FILE] [--out DIR] [--key value ...]

Every :class:`RunConfig` field can be set in a plain ``key = value`` config
file and overridden by the matching ``--key`` flag (underscores become
dashes).  Exit codes: 0 success, 2 numerical failure, 64 usage error, 74 I/O error.
"""
from __future__ import annotations

import argparse
import logging
import math
import sys
from dataclasses import asdict, dataclass, fields
from pathlib import Path

import numpy as np

from . import bjj, io, schrodinger, twomode
from .errors import BJJDipError, NumericError, ParameterError, SelectionError
from .potential import CONFIG_KEYS, evaluate, load_potential, read_config

EXIT_OK = 0
EXIT_NUMERIC = 2
EXIT_USAGE = 64
EXIT_IO = 74

log = logging.getLogger("bjjdip")


@dataclass
class RunConfig:
    # trap, in lab units (see potential.PhysicalParams.from_lab_units)
    mass_amu: float = CONFIG_KEYS["mass_amu"]
    omega_h_hz: float = CONFIG_KEYS["omega_h_hz"]
    v1_scale: float = CONFIG_KEYS["v1_scale"]
    w_um: float = CONFIG_KEYS["w_um"]
    sigma_um: float = CONFIG_KEYS["sigma_um"]
    i0: float = CONFIG_KEYS["i0"]
    # grid
    x_max: float = 12.0
    n_points: int = 4097
    # spectrum / tunneling sweeps (i0 in hbar*omega_H)
    i0_list: str = "0,2,4,8"
    sweep_min: float = 0.0
    sweep_max: float = 25.0
    sweep_step: float = 0.25
    refine_points: int = 41
    refine_halfwidth: float = 0.1
    # junction dynamics (time in |J|^-1)
    z0: float = 0.5
    theta0: float = 0.0
    un_over_j: float = 3.5
    t_switch: float = 10.0
    t_total: float = 20.0
    dt: float = 1e-3
    schedule: str = ""
    portrait_nz: int = 101
    portrait_ntheta: int = 121
    # frequency sweep: U*N in hbar*omega_H
    un: float = 1.5e-5
    out: str = "out"
    format: str = "csv"

    @classmethod
    def from_entries(cls, entries: dict) -> RunConfig:
        kinds = {f.name: f.type for f in fields(cls)}
        values = {}
        for key, raw in entries.items():
            if key not in kinds:
                raise ParameterError(f"unknown config key {key!r}")
            kind = kinds[key]
            try:
                values[key] = int(raw) if kind == "int" else float(raw) if kind == "float" else str(raw)
            except ValueError:
                raise ParameterError(f"{key}: cannot parse {raw!r} as {kind}") from None
        return cls(**values)

    def potential(self):
        return load_potential({k: getattr(self, k) for k in CONFIG_KEYS})

    def grid(self):
        return schrodinger.Grid(-self.x_max, self.x_max, self.n_points)

    def i0_values(self):
        try:
            values = [float(v) for v in self.i0_list.replace(";", ",").split(",") if v.strip()]
        except ValueError:
            raise ParameterError(f"bad i0 list {self.i0_list!r}") from None
        if not values:
            raise ParameterError("i0 list is empty")
        return values

    def sweep_values(self):
        if not (self.sweep_step > 0 and self.sweep_max >= self.sweep_min >= 0):
            raise ParameterError("need sweep_step > 0 and sweep_max >= sweep_min >= 0")
        n = int(math.floor((self.sweep_max - self.sweep_min) / self.sweep_step + 1e-9)) + 1
        return [self.sweep_min + k * self.sweep_step for k in range(n)]

    def junction_schedule(self):
        """``schedule`` as 'duration:j:un;...', else the default J -> -J quench."""
        if not self.schedule.strip():
            if not self.t_total > self.t_switch > 0:
                raise ParameterError("need t_total > t_switch > 0")
            return bjj.QuenchSchedule.quench(self.t_switch, self.t_total, self.un_over_j)
        segments = []
        for part in self.schedule.split(";"):
            try:
                duration, j, un = (float(v) for v in part.split(":"))
            except ValueError:
                raise ParameterError(f"bad schedule segment {part!r}; want duration:j:un") from None
            segments.append(bjj.Segment(duration, bjj.JunctionParams(j, un)))
        return bjj.QuenchSchedule(tuple(segments))

    def validate(self):
        if self.format not in ("csv", "json"):
            raise ParameterError("format must be csv or json")
        if not self.dt > 0:
            raise ParameterError("dt must be positive")
        self.potential()
        self.grid()
        self.i0_values()
        self.sweep_values()
        self.junction_schedule()

    def resolved(self, **extra) -> dict:
        """Dimensionless parameter set recorded in every output header."""
        p = self.potential()
        params = {f"potential.{k}": v for k, v in p.as_dict().items()}
        params["potential.length_unit_m"] = p.length_unit
        params["potential.energy_unit_J"] = p.energy_unit
        params.update({f"config.{k}": v for k, v in asdict(self).items() if k != "out"})
        params.update(extra)
        return params


def _refined_sweep(cfg: RunConfig, p, grid):
    values = cfg.sweep_values()
    if cfg.refine_points <= 0:
        return values
    below = [twomode.is_below_resonance(p, grid, v) for v in values]
    extra = []
    for a, b, ba, bb in zip(values, values[1:], below, below[1:]):
        if ba and not bb:
            centre = twomode.locate_resonance(p, a, b, grid)
            log.info("resonance located at i0 = %.6f", centre)
            lo = max(cfg.sweep_min, centre - cfg.refine_halfwidth)
            hi = min(cfg.sweep_max, centre + cfg.refine_halfwidth)
            extra.extend(np.linspace(lo, hi, cfg.refine_points).tolist())
    return sorted(set(values) | set(extra))


def cmd_spectrum(cfg: RunConfig):
    """Potential, lowest three eigenfunctions per i0, and the E(i0) sweep."""
    p, grid = cfg.potential(), cfg.grid()
    out = Path(cfg.out)
    written = []
    x = grid.x
    i0_values = cfg.i0_values()
    potentials = [evaluate(p.with_i0(i0), x) for i0 in i0_values]
    written.append(io.write_table(
        out / "potential", ["x"] + [f"V_i0={i0:g}" for i0 in i0_values],
        zip(x, *potentials), cfg.resolved(), "potential samples", cfg.format))
    for i0 in i0_values:
        _, pairs = schrodinger.solve(p.with_i0(i0), 3, grid)
        meta = cfg.resolved(**{
            "i0": i0,
            **{f"e{k + 1}": q.energy for k, q in enumerate(pairs)},
            **{f"parity{k + 1}": q.parity.value for k, q in enumerate(pairs)},
        })
        written.append(io.write_table(
            out / f"wavefunctions_i0_{i0:g}", ["x", "v1", "v2", "v3"],
            zip(x, *(q.wavefunction for q in pairs)), meta,
            f"lowest eigenfunctions at i0 = {i0:g}", cfg.format))
    rows = schrodinger.spectrum_sweep(p, _refined_sweep(cfg, p, grid), 3, grid)
    written.append(io.write_table(
        out / "spectrum_sweep", ["i0", "e1", "e2", "e3", "parity1", "parity2", "parity3"],
        ([r.i0, *r.energies, *r.parities] for r in rows), cfg.resolved(),
        "three lowest levels versus dip strength", cfg.format))
    return written


def _tunneling_rows(cfg: RunConfig):
    p, grid = cfg.potential(), cfg.grid()
    return twomode.sweep_tunneling(p, _refined_sweep(cfg, p, grid), grid)


def cmd_sweep(cfg: RunConfig):
    """Tunneling amplitude J(i0) with validity flags."""
    rows = _tunneling_rows(cfg)
    n_warn = sum(r.validity_warning for r in rows)
    changes = twomode.sign_changes([r.j for r in rows])
    meta = cfg.resolved(validity_threshold=twomode.VALIDITY_THRESHOLD,
                        sign_changes_of_j=changes, flagged_rows=n_warn)
    path = io.write_table(
        Path(cfg.out) / "tunneling",
        ["i0", "j", "j_over_j0", "epsilon", "gap_ratio", "regime", "validity_warning"],
        ([r.i0, r.j, r.j_over_j0, r.epsilon, r.gap_ratio, r.regime, r.validity_warning]
         for r in rows), meta, "two-mode parameters versus dip strength", cfg.format)
    return [path]


def _fixed_point_report(p):
    return [{"label": fp.label, "z_bar": fp.z_bar, "theta_bar": fp.theta_bar,
             "exists": fp.exists, "stable": fp.stable, "omega": fp.omega,
             "kind": fp.kind, "bracket": fp.bracket}
            for fp in bjj.fixed_points(p)]


def cmd_quench(cfg: RunConfig):
    """Junction trajectory through a parameter quench plus phase portraits."""
    sched = cfg.junction_schedule()
    traj = bjj.integrate(bjj.BJJState(cfg.z0, cfg.theta0), sched, cfg.dt)
    out = Path(cfg.out)
    seg_info = []
    for k, seg in enumerate(sched.segments):
        info = {"segment": k, "duration": seg.duration, "j": seg.params.j,
                "un": seg.params.un,
                "energy_drift": traj.energy_drift[k] if k < len(traj.energy_drift) else None,
                "fixed_points": _fixed_point_report(seg.params)}
        if k < len(traj.energy_drift):
            try:
                c = bjj.classify_trajectory(traj.segment(k))
                info.update(dynamics=c.kind, mean_z=c.mean_z, stationary=c.stationary)
            except BJJDipError as exc:
                info.update(dynamics="inconclusive", note=str(exc))
        seg_info.append(info)
    meta = cfg.resolved(truncated=traj.truncated,
                        truncated_at=traj.truncated_at if traj.truncated else "none")
    if traj.truncated:
        log.warning("trajectory hit |z| = 1 - z_guard at t = %g and was truncated",
                    traj.truncated_at)
    written = [io.write_table(
        out / "trajectory", ["t", "z", "theta_wrapped", "energy", "segment_index"],
        zip(traj.t, traj.z, traj.theta_wrapped, traj.energy, traj.segment_index),
        meta, "junction trajectory", cfg.format)]
    for k, seg in enumerate(sched.segments):
        z, theta, H = bjj.phase_portrait(seg.params, cfg.portrait_nz, cfg.portrait_ntheta)
        written.append(io.write_matrix(
            out / f"portrait_seg{k}", z, theta, H,
            cfg.resolved(segment=k, j=seg.params.j, un=seg.params.un),
            f"energy landscape of segment {k}", "z", "theta", cfg.format))
    written.append(io.write_json(out / "quench.json", {
        "parameters": meta, "truncated": traj.truncated,
        "truncated_at": traj.truncated_at, "segments": seg_info}))
    return written


def cmd_freq(cfg: RunConfig):
    """Fixed-point oscillation frequencies along the J(i0) sweep."""
    rows = bjj.frequency_sweep(_tunneling_rows(cfg), cfg.un)
    path = io.write_table(
        Path(cfg.out) / "frequencies",
        ["i0", "j", "omega_J", "omega_pi", "omega_ST", "stable_J", "stable_pi", "stable_ST",
         "bracket_J", "bracket_pi", "bracket_ST"],
        ([r.i0, r.j, r.omega_j, r.omega_pi, r.omega_st, r.stable_j, r.stable_pi,
          r.stable_st, r.bracket_j, r.bracket_pi, r.bracket_st] for r in rows),
        cfg.resolved(), "small-oscillation frequencies versus dip strength", cfg.format)
    return [path]


COMMANDS = {"spectrum": cmd_spectrum, "sweep": cmd_sweep, "quench": cmd_quench,
            "freq": cmd_freq}


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", type=Path, help="plain key = value file")
    common.add_argument("-v", "--verbose", action="store_true")
    for f in fields(RunConfig):
        common.add_argument("--" + f.name.replace("_", "-"), dest=f.name, default=None,
                            metavar=f.name.upper())
    parser = _Parser(prog="bjjdip", description=__doc__.split("\n\n")[0])
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)
    for name, fn in COMMANDS.items():
        sub.add_parser(name, parents=[common], help=fn.__doc__)
    return parser


def resolve_config(args) -> RunConfig:
    entries = read_config(args.config) if args.config else {}
    for f in fields(RunConfig):
        value = getattr(args, f.name)
        if value is not None:
            entries[f.name] = value
    return RunConfig.from_entries(entries)


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(name)s: %(message)s")
    try:
        cfg = resolve_config(args)
        cfg.validate()
    except (ParameterError, OSError) as exc:
        print(f"bjjdip: usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    try:
        Path(cfg.out).mkdir(parents=True, exist_ok=True)
        for path in COMMANDS[args.command](cfg):
            log.info("wrote %s", path)
    except (NumericError, SelectionError) as exc:
        print(f"bjjdip: numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except OSError as exc:
        print(f"bjjdip: I/O error: {exc}", file=sys.stderr)
        return EXIT_IO
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
