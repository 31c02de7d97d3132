"""Double-well trap with a narrow attractive laser dip at its centre.

All computation happens in harmonic-oscillator units: lengths in
ell = sqrt(hbar / (m omega_H)), energies in hbar * omega_H.  SI quantities
appear only in :class:`PhysicalParams` and in :func:`nondimensionalize`.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np
from scipy.constants import atomic_mass, hbar, pi
from scipy.optimize import brentq

from .errors import ParameterError, ShapeError

#: step of the coarse scan used to bracket potential minima (in ell)
SCAN_STEP = 0.01
#: golden-section termination width (in ell)
MINIMUM_TOL = 1e-12


@dataclass(frozen=True)
class PhysicalParams:
    """Trap parameters in SI units (mass in kg)."""

    mass: float
    omega_h: float
    barrier_height_v1: float
    barrier_width_w: float
    dip_strength_i0: float
    dip_width_sigma: float

    def __post_init__(self):
        for name in ("mass", "omega_h", "barrier_width_w", "dip_width_sigma"):
            value = getattr(self, name)
            if not (math.isfinite(value) and value > 0):
                raise ParameterError(f"{name} must be positive and finite, got {value!r}")
        if self.dip_width_sigma >= self.barrier_width_w:
            raise ParameterError("dip width must be smaller than the barrier width")
        for name in ("barrier_height_v1", "dip_strength_i0"):
            if not math.isfinite(getattr(self, name)):
                raise ParameterError(f"{name} must be finite")

    @classmethod
    def from_lab_units(cls, mass_amu=87.0, omega_h_hz=15.0, v1_scale=5.0, w_um=5.0,
                       sigma_um=0.5, i0=0.0):
        """Build from the config-file keys.

        ``omega_h_hz`` is the ordinary frequency (omega_H = 2 pi f);
        ``v1_scale`` sets V1 = v1_scale * m omega_H^2 w^2; ``i0`` is the dip
        strength in units of hbar * omega_H.
        """
        if not (mass_amu > 0 and omega_h_hz > 0):
            raise ParameterError("mass_amu and omega_h_hz must be positive")
        mass = mass_amu * atomic_mass
        omega = 2 * pi * omega_h_hz
        w = w_um * 1e-6
        return cls(
            mass=mass,
            omega_h=omega,
            barrier_height_v1=v1_scale * mass * omega**2 * w**2,
            barrier_width_w=w,
            dip_strength_i0=i0 * hbar * omega,
            dip_width_sigma=sigma_um * 1e-6,
        )


@dataclass(frozen=True)
class PotentialParams:
    """Dimensionless potential parameters (ell, hbar omega_H units)."""

    v1: float
    w: float
    i0: float
    sigma: float
    #: ell in metres and hbar*omega_H in joules, when derived from SI input
    length_unit: float | None = field(default=None, compare=False)
    energy_unit: float | None = field(default=None, compare=False)

    def __post_init__(self):
        for name in ("v1", "w", "i0", "sigma"):
            if not math.isfinite(getattr(self, name)):
                raise ParameterError(f"{name} must be finite")
        if not self.w > self.sigma > 0:
            raise ParameterError(f"need w > sigma > 0, got w={self.w}, sigma={self.sigma}")
        if self.v1 < 0 or self.i0 < 0:
            raise ParameterError("v1 and i0 must be non-negative")

    def with_i0(self, i0: float) -> PotentialParams:
        return PotentialParams(self.v1, self.w, i0, self.sigma,
                               self.length_unit, self.energy_unit)

    def as_dict(self) -> dict:
        return {"v1": self.v1, "w": self.w, "i0": self.i0, "sigma": self.sigma}


def oscillator_length(mass: float, omega_h: float) -> float:
    if not (mass > 0 and omega_h > 0):
        raise ParameterError("mass and trap frequency must be positive")
    return math.sqrt(hbar / (mass * omega_h))


def nondimensionalize(p: PhysicalParams) -> PotentialParams:
    """Express lengths in ell and energies in hbar*omega_H.

    The conversion factors are kept on the result as ``length_unit`` and
    ``energy_unit``.
    """
    ell = oscillator_length(p.mass, p.omega_h)
    energy = hbar * p.omega_h
    return PotentialParams(
        v1=p.barrier_height_v1 / energy,
        w=p.barrier_width_w / ell,
        i0=p.dip_strength_i0 / energy,
        sigma=p.dip_width_sigma / ell,
        length_unit=ell,
        energy_unit=energy,
    )


def lab_defaults(i0: float = 0.0) -> PotentialParams:
    """87Rb, 15 Hz trap, 5 um barrier of height 5 m omega^2 w^2, 0.5 um dip."""
    return nondimensionalize(PhysicalParams.from_lab_units(i0=i0))


def evaluate(p: PotentialParams, x):
    """V(x) = x^2/2 + v1 exp(-x^2/2w^2) - i0 exp(-x^2/2 sigma^2).

    Depends on ``x`` only through x^2, so V(x) == V(-x) bitwise.
    """
    x2 = np.square(x)
    return 0.5 * x2 + p.v1 * np.exp(-x2 / (2 * p.w**2)) - p.i0 * np.exp(-x2 / (2 * p.sigma**2))


def derivative(p: PotentialParams, x):
    """dV/dx."""
    x2 = np.square(x)
    return x * (1.0
                - p.v1 / p.w**2 * np.exp(-x2 / (2 * p.w**2))
                + p.i0 / p.sigma**2 * np.exp(-x2 / (2 * p.sigma**2)))


def _golden_section(f, a, b, tol=MINIMUM_TOL):
    invphi = (math.sqrt(5) - 1) / 2
    c = b - invphi * (b - a)
    d = a + invphi * (b - a)
    fc, fd = f(c), f(d)
    while b - a > tol:
        if fc < fd:
            b, d, fd = d, c, fc
            c = b - invphi * (b - a)
            fc = f(c)
        else:
            a, c, fc = c, d, fd
            d = a + invphi * (b - a)
            fd = f(d)
        if c >= d:  # interval exhausted at floating-point resolution
            break
    return 0.5 * (a + b)


def well_minima(p: PotentialParams, x_max: float = 12.0) -> tuple[float, float]:
    """Positions (x_left, x_right) of the two outer potential minima.

    The dip may add a third minimum at x = 0; only the outermost pair is
    returned.  Raises :class:`ShapeError` when there is no off-centre minimum.
    """
    xs = np.arange(1, int(round(x_max / SCAN_STEP)) + 1) * SCAN_STEP
    vs = evaluate(p, xs)
    # interior local minima of the coarse scan on x > 0
    idx = np.flatnonzero((vs[1:-1] < vs[:-2]) & (vs[1:-1] <= vs[2:])) + 1
    if idx.size == 0:
        raise ShapeError("potential has no off-centre minimum (single well)")
    i = idx[-1]
    f = lambda x: float(evaluate(p, x))  # noqa: E731
    x_right = _golden_section(f, xs[i - 1], xs[i + 1])
    # V is flat to ~sqrt(eps) around the minimum; polish on the derivative
    lo, hi = x_right - 10 * SCAN_STEP * 1e-3, x_right + 10 * SCAN_STEP * 1e-3
    if derivative(p, lo) < 0 < derivative(p, hi):
        x_right = brentq(lambda x: float(derivative(p, x)), lo, hi, xtol=1e-15, rtol=4 * np.finfo(float).eps)
    return -float(x_right), float(x_right)


CONFIG_KEYS = {
    "mass_amu": 87.0,
    "omega_h_hz": 15.0,
    "v1_scale": 5.0,
    "w_um": 5.0,
    "sigma_um": 0.5,
    "i0": 0.0,
}


def read_config(path) -> dict[str, str]:
    """Read a plain ``key = value`` file; ``#`` starts a comment."""
    entries = {}
    for lineno, raw in enumerate(Path(path).read_text().splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" in line:
            key, value = line.split("=", 1)
        elif ":" in line:
            key, value = line.split(":", 1)
        else:
            raise ParameterError(f"{path}:{lineno}: expected 'key = value'")
        entries[key.strip()] = value.strip()
    return entries


def load_potential(entries: dict | None = None) -> PotentialParams:
    """PotentialParams from config entries; missing keys take the defaults."""
    values = dict(CONFIG_KEYS)
    for key, value in (entries or {}).items():
        if key in CONFIG_KEYS:
            try:
                values[key] = float(value)
            except ValueError:
                raise ParameterError(f"{key}: not a number: {value!r}") from None
    return nondimensionalize(PhysicalParams.from_lab_units(**values))


__all__ = [
    "PhysicalParams",
    "PotentialParams",
    "nondimensionalize",
    "lab_defaults",
    "evaluate",
    "derivative",
    "well_minima",
    "read_config",
    "load_potential",
    "CONFIG_KEYS",
]
