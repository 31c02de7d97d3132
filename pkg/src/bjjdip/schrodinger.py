"""Finite-difference spectrum of H = -1/2 d^2/dx^2 + V(x) on a symmetric grid."""
from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

import numpy as np

from . import tridiag
from .errors import NumericError, ParameterError, ShapeError
from .potential import PotentialParams, evaluate, well_minima

#: max |psi(x) -/+ psi(-x)| for a state to count as gerade/ungerade
PARITY_TOL = 1e-6
#: max-norm bound on H psi - E psi for an accepted eigenpair; on grids fine
#: enough that eps * ||H|| * sqrt(n) exceeds it, that floor is used instead
RESIDUAL_TOL = 1e-9
#: below this |psi(x_left)| the first-lobe sign rule is used instead
SIGN_FLOOR = 1e-6


class Parity(str, Enum):
    GERADE = "gerade"
    UNGERADE = "ungerade"
    NONE = "none"


@dataclass(frozen=True)
class Grid:
    x_min: float = -12.0
    x_max: float = 12.0
    n_points: int = 4097

    def __post_init__(self):
        if self.n_points < 3:
            raise ParameterError("grid needs at least 3 points")
        if not self.x_max > 0 or self.x_min != -self.x_max:
            raise ParameterError("grid must be symmetric: x_min = -x_max < 0")

    @property
    def spacing(self) -> float:
        return (self.x_max - self.x_min) / (self.n_points - 1)

    @property
    def x(self) -> np.ndarray:
        # integer (or half-integer) offsets keep x[i] == -x[-1 - i] exactly
        offsets = np.arange(self.n_points) - (self.n_points - 1) / 2
        return self.spacing * offsets

    @property
    def center_index(self) -> int | None:
        return self.n_points // 2 if self.n_points % 2 else None

    def nearest_index(self, x: float) -> int:
        return int(np.argmin(np.abs(self.x - x)))


@dataclass(frozen=True, eq=False)
class Hamiltonian:
    """Symmetric tridiagonal matrix: ``diagonal`` (n) and ``offdiagonal`` (n - 1)."""

    diagonal: np.ndarray
    offdiagonal: np.ndarray

    def apply(self, v):
        return tridiag.matvec(self.diagonal, self.offdiagonal, v)

    def dense(self):
        return (np.diag(self.diagonal) + np.diag(self.offdiagonal, 1)
                + np.diag(self.offdiagonal, -1))


@dataclass(frozen=True, eq=False)
class EigenPair:
    energy: float
    wavefunction: np.ndarray
    parity: Parity


def build_hamiltonian(grid: Grid, p: PotentialParams | None = None, potential=None) -> Hamiltonian:
    """Central-difference Hamiltonian with Dirichlet walls just outside the grid.

    Pass either dimensionless potential parameters ``p`` or an array of
    potential samples ``potential``.
    """
    h = grid.spacing
    if potential is None:
        potential = evaluate(p, grid.x) if p is not None else np.zeros(grid.n_points)
    potential = np.asarray(potential, dtype=float)
    if potential.shape != (grid.n_points,):
        raise ParameterError("potential samples do not match the grid")
    d = 1.0 / h**2 + potential
    e = np.full(grid.n_points - 1, -0.5 / h**2)
    return Hamiltonian(d, e)


def classify_parity(psi, grid: Grid | None = None, tol: float = PARITY_TOL) -> Parity:
    psi = np.asarray(psi)
    mirror = psi[::-1]
    if np.max(np.abs(psi - mirror)) < tol:
        return Parity.GERADE
    if np.max(np.abs(psi + mirror)) < tol:
        return Parity.UNGERADE
    return Parity.NONE


def _fix_sign(psi, grid: Grid, x_ref: float | None):
    if x_ref is not None:
        value = psi[grid.nearest_index(x_ref)]
        if abs(value) > SIGN_FLOOR:
            return psi if value >= 0 else -psi
    lobe = np.flatnonzero(np.abs(psi) > 1e-3 * np.max(np.abs(psi)))[0]
    return psi if psi[lobe] >= 0 else -psi


def residual_tolerance(H: Hamiltonian) -> float:
    """Residual bound: RESIDUAL_TOL, or the double-precision floor if larger."""
    d, e = np.abs(H.diagonal), np.abs(H.offdiagonal)
    norm = np.max(d + np.concatenate(([0.0], e)) + np.concatenate((e, [0.0])))
    return max(RESIDUAL_TOL, np.finfo(float).eps * norm * np.sqrt(d.size))


def lowest_eigenpairs(H: Hamiltonian, k: int, grid: Grid, x_ref: float | None = None):
    """The ``k`` lowest eigenpairs, ascending in energy.

    Wavefunctions are normalized so that sum |psi|^2 * spacing = 1 and signed
    so that psi(x_ref) >= 0 (x_ref is normally the left well minimum); states
    that vanish there get a positive first lobe instead.  The reported energy
    is the Rayleigh quotient of the returned vector.
    """
    if not 1 <= k <= grid.n_points:
        raise ParameterError(f"k must lie in [1, {grid.n_points}]")
    d, e = H.diagonal, H.offdiagonal
    _, vectors = tridiag.lowest_eigenpairs(d, e, k)
    h = grid.spacing
    tol = residual_tolerance(H)
    pairs = []
    for i in range(k):
        v = vectors[:, i]
        energy = tridiag.bilinear(d, e, v, v)
        psi = _fix_sign(v / np.sqrt(h), grid, x_ref)
        residual = np.max(np.abs(H.apply(psi) - energy * psi))
        if not residual < tol:
            raise NumericError(f"eigenpair {i} residual {residual:.2e} exceeds {tol:.2e}",
                               index=i)
        pairs.append(EigenPair(energy, psi, classify_parity(psi, grid)))
    return pairs


def reference_point(p: PotentialParams) -> float | None:
    try:
        return well_minima(p)[0]
    except ShapeError:
        return None


def solve(p: PotentialParams, k: int = 3, grid: Grid | None = None):
    """Build H for ``p`` and return ``(H, pairs)``."""
    grid = grid or Grid()
    H = build_hamiltonian(grid, p)
    return H, lowest_eigenpairs(H, k, grid, x_ref=reference_point(p))


@dataclass(frozen=True)
class SpectrumRow:
    i0: float
    energies: tuple
    parities: tuple


def spectrum_sweep(p: PotentialParams, i0_values, k: int = 3, grid: Grid | None = None):
    """Lowest ``k`` levels at each dip strength in ``i0_values`` (ascending)."""
    i0_values = [float(v) for v in i0_values]
    if any(b < a for a, b in zip(i0_values, i0_values[1:])):
        raise ParameterError("i0 values must be ascending")
    grid = grid or Grid()
    rows = []
    for i0 in i0_values:
        try:
            _, pairs = solve(p.with_i0(i0), k, grid)
        except NumericError as exc:
            raise NumericError(f"i0={i0}: {exc}", index=exc.index, i0=i0) from exc
        rows.append(SpectrumRow(i0, tuple(q.energy for q in pairs),
                                tuple(q.parity for q in pairs)))
    return rows
