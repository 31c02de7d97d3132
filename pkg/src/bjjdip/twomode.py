"""Two-mode reduction: Wannier orbitals of the tunneling doublet and the
on-site energy / tunneling amplitude they define.
"""
from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

import numpy as np

from . import tridiag
from .errors import NumericError, ParameterError, SelectionError
from .potential import PotentialParams
from .schrodinger import EigenPair, Grid, Hamiltonian, Parity, build_hamiltonian, solve

#: doublet splitting / distance to the nearest excluded level above which the
#: two-mode description is flagged as unreliable
VALIDITY_THRESHOLD = 0.1


class Regime(str, Enum):
    BELOW = "below_resonance"
    ABOVE = "above_resonance"


@dataclass(frozen=True, eq=False)
class DoubletSelection:
    regime: Regime
    symmetric_state: EigenPair
    antisymmetric_state: EigenPair
    gap_ratio: float
    validity_warning: bool
    i0: float | None = None


@dataclass(frozen=True)
class TwoModeParams:
    epsilon: float
    j: float
    regime: Regime
    #: (E_anti - E_sym)/2 and (E_sym + E_anti)/2, kept as cross-checks
    half_splitting: float
    mean_energy: float


def select_doublet(pairs, i0=None, threshold=VALIDITY_THRESHOLD) -> DoubletSelection:
    """Pick the tunneling doublet out of the three lowest levels.

    Below the resonance the doublet is (v1, v2) and the dip-bound state lies
    above it; above the resonance the dip-bound state has dropped to v1 and
    the doublet is (v2, v3).  The regime is whichever pairing leaves the
    smaller splitting, so it does not depend on the units of ``i0``.
    """
    if len(pairs) < 3:
        raise SelectionError("need at least three eigenpairs")
    e1, e2, e3 = (q.energy for q in pairs[:3])
    if e2 - e1 <= e3 - e2:
        regime, members, splitting, gap = Regime.BELOW, pairs[0:2], e2 - e1, e3 - e2
    else:
        regime, members, splitting, gap = Regime.ABOVE, pairs[1:3], e3 - e2, e2 - e1
    by_parity = {q.parity: q for q in members}
    if set(by_parity) != {Parity.GERADE, Parity.UNGERADE}:
        raise SelectionError(
            f"doublet parities {[q.parity.value for q in members]} are not one gerade + one ungerade")
    ratio = splitting / gap if gap > 0 else np.inf
    return DoubletSelection(
        regime=regime,
        symmetric_state=by_parity[Parity.GERADE],
        antisymmetric_state=by_parity[Parity.UNGERADE],
        gap_ratio=float(ratio),
        validity_warning=bool(ratio >= threshold),
        i0=i0,
    )


def _wannier_ld(sel: DoubletSelection):
    vs = np.asarray(sel.symmetric_state.wavefunction, dtype=np.longdouble)
    va = np.asarray(sel.antisymmetric_state.wavefunction, dtype=np.longdouble)
    root2 = np.sqrt(np.longdouble(2))
    return (vs + va) / root2, (vs - va) / root2


def wannier(sel: DoubletSelection):
    """(w_left, w_right) = (v_s +/- v_a)/sqrt(2)."""
    w_left, w_right = _wannier_ld(sel)
    return w_left.astype(float), w_right.astype(float)


def two_mode_params(sel: DoubletSelection, H: Hamiltonian, grid: Grid) -> TwoModeParams:
    """epsilon = <w1|H|w1>, J = -<w1|H|w2> by grid quadrature.

    J > 0 when the gerade member lies lower, J < 0 otherwise.
    """
    w1, w2 = _wannier_ld(sel)
    h = grid.spacing
    d, e = H.diagonal, H.offdiagonal
    epsilon = tridiag.bilinear(d, e, w1, w1) * h
    j = -tridiag.bilinear(d, e, w1, w2) * h
    es, ea = sel.symmetric_state.energy, sel.antisymmetric_state.energy
    return TwoModeParams(epsilon=epsilon, j=j, regime=sel.regime,
                         half_splitting=(ea - es) / 2, mean_energy=(es + ea) / 2)


@dataclass(frozen=True)
class TunnelingRow:
    i0: float
    j: float
    j_over_j0: float
    epsilon: float
    gap_ratio: float
    regime: Regime
    validity_warning: bool
    half_splitting: float


def tunneling_at(p: PotentialParams, grid: Grid | None = None, i0=None):
    """Return ``(selection, params)`` for a single dip strength."""
    grid = grid or Grid()
    q = p if i0 is None else p.with_i0(i0)
    H, pairs = solve(q, 3, grid)
    sel = select_doublet(pairs, q.i0)
    return sel, two_mode_params(sel, H, grid)


def sweep_tunneling(p: PotentialParams, i0_values, grid: Grid | None = None):
    """J, epsilon and the validity diagnostics across a dip-strength sweep.

    ``j_over_j0`` normalizes by J at i0 = 0, computed separately if 0 is not
    among the requested values.
    """
    i0_values = [float(v) for v in i0_values]
    if not i0_values:
        raise ParameterError("empty i0 sweep")
    if any(b < a for a, b in zip(i0_values, i0_values[1:])):
        raise ParameterError("i0 values must be ascending")
    grid = grid or Grid()
    results = []
    for i0 in i0_values:
        try:
            results.append((i0, *tunneling_at(p, grid, i0)))
        except (NumericError, SelectionError) as exc:
            if isinstance(exc, NumericError):
                raise NumericError(f"i0={i0}: {exc}", index=exc.index, i0=i0) from exc
            raise SelectionError(f"i0={i0}: {exc}") from exc
    if i0_values[0] == 0.0:
        j0 = results[0][2].j
    else:
        j0 = tunneling_at(p, grid, 0.0)[1].j
    return [
        TunnelingRow(i0=i0, j=tm.j, j_over_j0=tm.j / j0, epsilon=tm.epsilon,
                     gap_ratio=sel.gap_ratio, regime=sel.regime,
                     validity_warning=sel.validity_warning,
                     half_splitting=tm.half_splitting)
        for i0, sel, tm in results
    ]


def sign_changes(values) -> int:
    s = np.sign(np.asarray(values, dtype=float))
    s = s[s != 0]
    return int(np.count_nonzero(s[1:] != s[:-1]))


def is_below_resonance(p: PotentialParams, grid: Grid, i0: float) -> bool:
    """True if the (v1, v2) pairing has the smaller splitting at ``i0``."""
    H = build_hamiltonian(grid, p.with_i0(i0))
    e1, e2, e3 = tridiag.bisection_eigenvalues(H.diagonal, H.offdiagonal, 3)
    return e2 - e1 <= e3 - e2


def locate_resonance(p: PotentialParams, lo: float, hi: float, grid: Grid | None = None,
                     tol: float = 1e-6) -> float:
    """Dip strength where the doublet switches from (v1, v2) to (v2, v3).

    Bisection on the regime; requires below-resonance at ``lo`` and
    above-resonance at ``hi``.
    """
    grid = grid or Grid()
    if not (is_below_resonance(p, grid, lo) and not is_below_resonance(p, grid, hi)):
        raise ParameterError(f"no resonance bracketed by [{lo}, {hi}]")
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        if is_below_resonance(p, grid, mid):
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)
