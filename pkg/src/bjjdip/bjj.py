"""Semiclassical bosonic Josephson junction.

State is the population imbalance z = (N1 - N2)/N and the relative phase
theta = theta2 - theta1.  With hbar = 1 the per-particle energy is

    H(z, theta) = -2 J sqrt(1 - z^2) cos(theta) + (UN/2) z^2

and the equations of motion are

    dz/dt     = -2 J sqrt(1 - z^2) sin(theta)
    dtheta/dt = (UN + 2 J cos(theta) / sqrt(1 - z^2)) z.

Time is measured in whatever units J and UN carry (|J|^-1 when J = +-1).
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum

import numpy as np
from numba import njit

from .errors import (DegenerateParametersError, DomainError, InconclusiveError,
                     ParameterError, SingularityError)

#: trajectories are truncated once |z| >= 1 - Z_GUARD
Z_GUARD = 1e-9
DEFAULT_DT = 1e-3


@dataclass(frozen=True)
class BJJState:
    z: float
    theta: float

    @property
    def theta_wrapped(self) -> float:
        return float(wrap_phase(self.theta))


@dataclass(frozen=True)
class JunctionParams:
    """Tunneling amplitude ``j`` and interaction energy ``un`` = U*N."""

    j: float
    un: float

    def __post_init__(self):
        if not (math.isfinite(self.j) and math.isfinite(self.un)):
            raise ParameterError("junction parameters must be finite")

    @property
    def ratio(self) -> float:
        """UN / 2J."""
        if self.j == 0:
            raise DegenerateParametersError("UN/2J undefined for J = 0")
        return self.un / (2 * self.j)

    @property
    def gamma(self) -> float:
        return abs(self.ratio)

    @property
    def free_rotor(self) -> bool:
        return self.j == 0


@dataclass(frozen=True)
class Segment:
    duration: float
    params: JunctionParams


@dataclass(frozen=True)
class QuenchSchedule:
    segments: tuple

    def __post_init__(self):
        segs = tuple(s if isinstance(s, Segment) else Segment(float(s[0]), s[1])
                     for s in self.segments)
        if not segs:
            raise ParameterError("a schedule needs at least one segment")
        for k, s in enumerate(segs):
            if not (math.isfinite(s.duration) and s.duration > 0):
                raise ParameterError(f"segment {k}: duration must be positive, got {s.duration}")
        object.__setattr__(self, "segments", segs)

    @classmethod
    def single(cls, duration, j, un):
        return cls((Segment(duration, JunctionParams(j, un)),))

    @classmethod
    def quench(cls, t_switch=10.0, t_total=20.0, un_over_j=3.5, j=1.0):
        """J -> -J at ``t_switch`` with UN held fixed."""
        un = un_over_j * j
        return cls((Segment(t_switch, JunctionParams(j, un)),
                    Segment(t_total - t_switch, JunctionParams(-j, un))))

    @property
    def boundaries(self):
        return np.concatenate(([0.0], np.cumsum([s.duration for s in self.segments])))


def wrap_phase(theta):
    """Map to (-pi, pi]."""
    return np.pi - np.mod(np.pi - np.asarray(theta, dtype=float), 2 * np.pi)


def energy(state: BJJState, p: JunctionParams) -> float:
    """Per-particle energy; the total is N times this."""
    z = state.z
    if abs(z) > 1:
        raise DomainError(f"|z| must not exceed 1, got {z}")
    return -2 * p.j * math.sqrt(1 - z * z) * math.cos(state.theta) + 0.5 * p.un * z * z


def energy_grid(z, theta, p: JunctionParams):
    z = np.asarray(z, dtype=float)
    return -2 * p.j * np.sqrt(1 - z * z) * np.cos(theta) + 0.5 * p.un * z * z


def derivatives(state: BJJState, p: JunctionParams) -> tuple[float, float]:
    z, theta = state.z, state.theta
    if abs(z) >= 1:
        raise SingularityError(f"dtheta/dt diverges at |z| = {abs(z)}")
    r = math.sqrt(1 - z * z)
    return -2 * p.j * r * math.sin(theta), (p.un + 2 * p.j * math.cos(theta) / r) * z


@njit(cache=True)
def _rhs(z, th, j, un):
    r = math.sqrt(1.0 - z * z)
    return -2.0 * j * r * math.sin(th), (un + 2.0 * j * math.cos(th) / r) * z


@njit(cache=True)
def _rk4(z0, th0, j, un, dt, nsteps, zmax):
    zs = np.empty(nsteps + 1)
    ths = np.empty(nsteps + 1)
    zs[0] = z0
    ths[0] = th0
    z = z0
    th = th0
    for i in range(nsteps):
        k1z, k1t = _rhs(z, th, j, un)
        z2 = z + 0.5 * dt * k1z
        if abs(z2) >= zmax:
            return zs, ths, i + 1
        k2z, k2t = _rhs(z2, th + 0.5 * dt * k1t, j, un)
        z3 = z + 0.5 * dt * k2z
        if abs(z3) >= zmax:
            return zs, ths, i + 1
        k3z, k3t = _rhs(z3, th + 0.5 * dt * k2t, j, un)
        z4 = z + dt * k3z
        if abs(z4) >= zmax:
            return zs, ths, i + 1
        k4z, k4t = _rhs(z4, th + dt * k3t, j, un)
        z = z + dt / 6.0 * (k1z + 2.0 * k2z + 2.0 * k3z + k4z)
        th = th + dt / 6.0 * (k1t + 2.0 * k2t + 2.0 * k3t + k4t)
        if abs(z) >= zmax:
            return zs, ths, i + 1
        zs[i + 1] = z
        ths[i + 1] = th
    return zs, ths, nsteps + 1


@dataclass(eq=False)
class Trajectory:
    """Sampled solution.  ``theta`` is continuous (unwrapped)."""

    t: np.ndarray
    z: np.ndarray
    theta: np.ndarray
    energy: np.ndarray
    segment_index: np.ndarray
    schedule: QuenchSchedule
    dt: float
    truncated: bool = False
    truncated_at: float | None = None
    energy_drift: list = field(default_factory=list)

    @property
    def theta_wrapped(self):
        return wrap_phase(self.theta)

    def segment(self, k: int) -> Trajectory:
        mask = self.segment_index == k
        sched = QuenchSchedule((self.schedule.segments[k],))
        return Trajectory(self.t[mask], self.z[mask], self.theta[mask], self.energy[mask],
                          np.zeros(int(mask.sum()), dtype=int), sched, self.dt,
                          self.truncated and k == int(self.segment_index[-1]),
                          self.truncated_at, self.energy_drift[k:k + 1])


def integrate(s0: BJJState, sched: QuenchSchedule, dt: float = DEFAULT_DT,
              z_guard: float = Z_GUARD) -> Trajectory:
    """Fixed-step RK4 through every schedule segment.

    Parameters switch instantaneously; (z, theta) is continuous across the
    switch, so each boundary time appears twice, once per segment.  Each
    segment is split into round(duration/dt) equal steps.  If |z| reaches
    1 - z_guard the trajectory stops there and ``truncated`` is set.
    """
    if not dt > 0:
        raise ParameterError("dt must be positive")
    if abs(s0.z) >= 1 - z_guard:
        raise SingularityError(f"initial |z| = {abs(s0.z)} is inside the singular guard band")
    zmax = 1.0 - z_guard
    ts, zs, ths, es, idx = [], [], [], [], []
    drift = []
    z, th, t0 = float(s0.z), float(s0.theta), 0.0
    truncated, t_stop = False, None
    for k, seg in enumerate(sched.segments):
        p = seg.params
        nsteps = max(1, int(round(seg.duration / dt)))
        h = seg.duration / nsteps
        zk, thk, n_ok = _rk4(z, th, float(p.j), float(p.un), h, nsteps, zmax)
        zk, thk = zk[:n_ok], thk[:n_ok]
        tk = t0 + h * np.arange(n_ok)
        ek = energy_grid(zk, thk, p)
        ref = abs(ek[0]) if ek[0] != 0 else 1.0
        drift.append(float(np.max(np.abs(ek - ek[0])) / ref))
        ts.append(tk)
        zs.append(zk)
        ths.append(thk)
        es.append(ek)
        idx.append(np.full(n_ok, k))
        if n_ok < nsteps + 1:
            truncated, t_stop = True, float(tk[-1] + h)
            break
        z, th, t0 = float(zk[-1]), float(thk[-1]), t0 + seg.duration
    return Trajectory(np.concatenate(ts), np.concatenate(zs), np.concatenate(ths),
                      np.concatenate(es), np.concatenate(idx), sched, dt,
                      truncated, t_stop, drift)


# fixed points and their stability

class Label(str, Enum):
    X1 = "X1"
    X2 = "X2"
    X3_PLUS = "X3plus"
    X3_MINUS = "X3minus"
    X4_PLUS = "X4plus"
    X4_MINUS = "X4minus"


class Kind(str, Enum):
    JOSEPHSON = "josephson"
    PI_MODE = "pi_mode"
    SELF_TRAPPED = "self_trapped"


@dataclass(frozen=True)
class FixedPoint:
    label: Label
    z_bar: float
    theta_bar: float
    exists: bool
    stable: bool = False
    omega: float = 0.0
    kind: Kind = Kind.JOSEPHSON
    #: the signed quantity under the square root of the eigenvalue formula
    bracket: float = float("nan")


@dataclass(frozen=True)
class EigenFrequencies:
    eigenvalues: tuple
    stable: bool
    omega: float
    bracket: float


def stability_bracket(z_bar: float, theta_bar: float, p: JunctionParams) -> float:
    """cos(2 theta)/(1 - z^2) + (UN/2J) sqrt(1 - z^2) cos(theta)."""
    one_minus = (1 - z_bar) * (1 + z_bar)
    return (math.cos(2 * theta_bar) / one_minus
            + p.ratio * math.sqrt(one_minus) * math.cos(theta_bar))


def eigen_frequencies(fp: FixedPoint, p: JunctionParams) -> EigenFrequencies:
    """lambda = +-i sqrt(4 J^2 * bracket); stable (a centre) iff bracket >= 0."""
    if not fp.exists:
        raise DomainError(f"{fp.label.value} does not exist for these parameters")
    b = stability_bracket(fp.z_bar, fp.theta_bar, p)
    mag = math.sqrt(4 * p.j**2 * abs(b))
    if b >= 0:
        return EigenFrequencies((1j * mag, -1j * mag), True, mag, b)
    return EigenFrequencies((complex(mag), complex(-mag)), False, 0.0, b)


def _finished(fp: FixedPoint, p: JunctionParams) -> FixedPoint:
    if not fp.exists:
        return fp
    ef = eigen_frequencies(fp, p)
    return FixedPoint(fp.label, fp.z_bar, fp.theta_bar, True, ef.stable, ef.omega,
                      fp.kind, ef.bracket)


def fixed_points(p: JunctionParams, include_absent: bool = False):
    """Stationary points of the equations of motion.

    X1 = (0, 0) and X2 = (0, pi) always exist.  The finite-imbalance pair
    |z| = sqrt(1 - (2J/UN)^2) exists iff (UN)^2 > 4J^2, at theta = 0 (X3)
    when J*UN < 0 and at theta = pi (X4) when J*UN > 0; both signs of z are
    returned.  Absent families are dropped unless ``include_absent``.
    """
    if p.j == 0:
        raise DegenerateParametersError("fixed points are degenerate for J = 0")
    points = [FixedPoint(Label.X1, 0.0, 0.0, True, kind=Kind.JOSEPHSON),
              FixedPoint(Label.X2, 0.0, math.pi, True, kind=Kind.PI_MODE)]
    finite = p.un**2 > 4 * p.j**2
    zb = math.sqrt(1 - (2 * p.j / p.un) ** 2) if finite else float("nan")
    x3 = finite and p.j * p.un < 0
    x4 = finite and p.j * p.un > 0
    for label, z, theta, exists in (
        (Label.X3_PLUS, zb, 0.0, x3),
        (Label.X3_MINUS, -zb, 0.0, x3),
        (Label.X4_PLUS, zb, math.pi, x4),
        (Label.X4_MINUS, -zb, math.pi, x4),
    ):
        if exists or include_absent:
            points.append(FixedPoint(label, z if exists else float("nan"), theta, exists,
                                     kind=Kind.SELF_TRAPPED))
    return [_finished(fp, p) for fp in points]


def stability_matrix(fp: FixedPoint, p: JunctionParams) -> np.ndarray:
    """Linearization of the equations of motion at ``fp``."""
    if not fp.exists:
        raise DomainError(f"{fp.label.value} does not exist for these parameters")
    z, th = fp.z_bar, fp.theta_bar
    one_minus = (1 - z) * (1 + z)
    if one_minus <= 0:
        raise SingularityError("stability matrix diverges at |z| = 1")
    r = math.sqrt(one_minus)
    a = 2 * p.j * z * math.sin(th) / r
    return np.array([[a, -2 * p.j * r * math.cos(th)],
                     [p.un + 2 * p.j * math.cos(th) / one_minus**1.5, -a]])


def critical_imbalance(gamma: float) -> tuple[float, bool]:
    """Self-trapping threshold z_c = (2/Gamma) sqrt(Gamma - 1), clamped to 1.

    Returns ``(z_c, clamped)``.
    """
    if not gamma > 1:
        raise DomainError(f"no self-trapped regime for Gamma = {gamma} <= 1")
    zc = 2 / gamma * math.sqrt(gamma - 1)
    if zc > 1:
        return 1.0, True
    return zc, False


# trajectory diagnostics

@dataclass(frozen=True)
class Classification:
    kind: Kind
    mean_z: float
    stationary: bool = False


def _governing_omega(traj: Trajectory, inverted: bool) -> float:
    p = traj.schedule.segments[0].params
    stable = [fp for fp in fixed_points(p) if fp.stable and fp.omega > 0]
    if inverted:
        cands = [fp for fp in stable if fp.z_bar == 0]
    else:
        sign = np.sign(np.mean(traj.z))
        cands = [fp for fp in stable if fp.z_bar != 0 and np.sign(fp.z_bar) == sign]
    cands = cands or stable
    if not cands:
        raise InconclusiveError("no stable fixed point to set the oscillation period")
    return min(fp.omega for fp in cands)


def classify_trajectory(traj: Trajectory, stationary_tol: float = 1e-12) -> Classification:
    """Josephson if z changes sign at least once, self-trapped otherwise.

    For a multi-segment trajectory pass ``traj.segment(k)``; the period
    check uses the first segment's parameters.
    """
    z = np.asarray(traj.z)
    mean_z = float(np.trapezoid(z, traj.t) / (traj.t[-1] - traj.t[0])) if len(z) > 1 else float(z[0])
    if np.max(np.abs(z)) < stationary_tol:
        return Classification(Kind.SELF_TRAPPED, mean_z, stationary=True)
    inverted = bool(np.any(z > 0) and np.any(z < 0))
    period = 2 * math.pi / _governing_omega(traj, inverted)
    duration = traj.t[-1] - traj.t[0]
    if duration < period:
        raise InconclusiveError(
            f"trajectory spans {duration:.3g}, shorter than one period {period:.3g}")
    return Classification(Kind.JOSEPHSON if inverted else Kind.SELF_TRAPPED, mean_z)


def measured_frequency(t, signal) -> float:
    """Angular frequency from linearly interpolated upward zero crossings of
    a mean-subtracted signal."""
    t = np.asarray(t)
    s = np.asarray(signal) - np.mean(signal)
    up = np.flatnonzero((s[:-1] < 0) & (s[1:] >= 0))
    if len(up) < 2:
        raise InconclusiveError("fewer than two zero crossings")
    tc = t[up] - s[up] * (t[up + 1] - t[up]) / (s[up + 1] - s[up])
    return 2 * math.pi * (len(tc) - 1) / (tc[-1] - tc[0])


@dataclass(frozen=True)
class FrequencyRow:
    i0: float
    j: float
    omega_j: float
    omega_pi: float
    omega_st: float
    stable_j: bool
    stable_pi: bool
    stable_st: bool
    bracket_j: float
    bracket_pi: float
    bracket_st: float


def frequency_sweep(sweep, un_fixed: float):
    """Small-oscillation frequencies along a tunneling sweep at fixed UN.

    ``omega_j`` belongs to the theta = 0 zero-imbalance point, ``omega_pi``
    to theta = pi, ``omega_st`` to the finite-imbalance pair (0 where absent
    or unstable).  Brackets are the signed quantities under the square roots
    and are emitted even where a family is unstable.
    """
    rows = []
    for row in sweep:
        p = JunctionParams(row.j, un_fixed)
        x1, x2 = fixed_points(p)[:2]
        b_st = p.ratio**2 - 1
        rows.append(FrequencyRow(
            i0=row.i0, j=row.j,
            omega_j=x1.omega, omega_pi=x2.omega,
            omega_st=math.sqrt(p.un**2 - 4 * p.j**2) if b_st > 0 else 0.0,
            stable_j=x1.stable, stable_pi=x2.stable, stable_st=b_st > 0,
            bracket_j=x1.bracket, bracket_pi=x2.bracket, bracket_st=b_st,
        ))
    return rows


def phase_portrait(p: JunctionParams, nz: int = 101, ntheta: int = 121):
    """Energy on a (z, theta) grid over [-1, 1] x [-pi, pi].

    Returns ``(z, theta, H)`` with ``H[i, k] = H(z[i], theta[k])``.
    """
    z = np.linspace(-1.0, 1.0, nz)
    theta = np.linspace(-np.pi, np.pi, ntheta)
    return z, theta, energy_grid(z[:, None], theta[None, :], p)
