import numpy as np
import pytest

from bjjdip.errors import ParameterError, SelectionError
from bjjdip.potential import PhysicalParams, nondimensionalize
from bjjdip.schrodinger import EigenPair, Parity, solve
from bjjdip.twomode import (VALIDITY_THRESHOLD, Regime, is_below_resonance, locate_resonance,
                            select_doublet, sign_changes, sweep_tunneling, tunneling_at,
                            two_mode_params, wannier)


@pytest.fixture(scope="module")
def low_barrier():
    # lower barrier: the crossing moves down to i0 ~ 6.4
    return nondimensionalize(PhysicalParams.from_lab_units(v1_scale=3.0))


def test_below_resonance_at_zero(trap, grid):
    _, pairs = solve(trap, 3, grid)
    sel = select_doublet(pairs, 0.0)
    assert sel.regime is Regime.BELOW
    assert sel.symmetric_state is pairs[0]
    assert sel.antisymmetric_state is pairs[1]
    assert sel.gap_ratio < VALIDITY_THRESHOLD and not sel.validity_warning


def test_above_resonance_after_crossing(low_barrier, grid):
    assert 6.0 < locate_resonance(low_barrier, 0.0, 8.0, grid) < 7.0
    _, pairs = solve(low_barrier.with_i0(8.0), 3, grid)
    sel = select_doublet(pairs, 8.0)
    assert sel.regime is Regime.ABOVE
    assert sel.symmetric_state is pairs[2]
    assert sel.antisymmetric_state is pairs[1]


def test_above_resonance_at_default_barrier(trap, grid):
    sel, tm = tunneling_at(trap, grid, 16.0)
    assert sel.regime is Regime.ABOVE and tm.j < 0


def test_parity_none_is_rejected():
    psi = np.zeros(5)
    pairs = [EigenPair(1.0, psi, Parity.GERADE), EigenPair(1.1, psi, Parity.NONE),
             EigenPair(3.0, psi, Parity.GERADE)]
    with pytest.raises(SelectionError):
        select_doublet(pairs)
    with pytest.raises(SelectionError):
        select_doublet(pairs[:2])


def test_wide_doublet_is_flagged_not_fatal():
    psi = np.zeros(5)
    pairs = [EigenPair(1.0, psi, Parity.GERADE), EigenPair(1.5, psi, Parity.UNGERADE),
             EigenPair(2.0, psi, Parity.GERADE)]
    sel = select_doublet(pairs)
    assert sel.gap_ratio == 1.0 and sel.validity_warning


@pytest.fixture(scope="module")
def at_zero(trap, grid):
    H, pairs = solve(trap, 3, grid)
    sel = select_doublet(pairs, 0.0)
    return H, sel


def test_wannier_orbitals(at_zero, grid):
    _, sel = at_zero
    wl, wr = wannier(sel)
    h = grid.spacing
    assert abs(np.sum(wl * wr) * h) < 1e-10
    assert abs(np.sum(wl**2) * h - 1) < 1e-10
    assert abs(np.sum(wr**2) * h - 1) < 1e-10
    assert np.max(np.abs(wr - wl[::-1])) < 1e-8
    left = grid.x < 0
    assert np.sum(wl[left] ** 2) * h > 0.95


def test_j_positive_below_and_identities(at_zero, grid):
    H, sel = at_zero
    tm = two_mode_params(sel, H, grid)
    assert tm.j > 0
    assert abs(tm.j - tm.half_splitting) / abs(tm.j) < 1e-8
    assert abs(tm.epsilon - tm.mean_energy) < 1e-9


def test_swapping_wannier_orbitals_keeps_j(at_zero, grid):
    H, sel = at_zero
    wl, wr = wannier(sel)
    h = grid.spacing
    j_lr = -np.dot(wl, H.apply(wr)) * h
    j_rl = -np.dot(wr, H.apply(wl)) * h
    assert abs(abs(j_lr) - abs(j_rl)) / abs(j_lr) < 1e-8
    e_l = np.dot(wl, H.apply(wl)) * h
    e_r = np.dot(wr, H.apply(wr)) * h
    assert abs(e_l - e_r) < 1e-9


@pytest.fixture(scope="module")
def sweep(trap, grid, sweep_i0):
    return sweep_tunneling(trap, sweep_i0, grid)


def test_sweep_identities_on_every_row(sweep):
    for r in sweep:
        assert abs(r.j - r.half_splitting) / abs(r.j) < 1e-8, r.i0


def test_sweep_normalization(sweep):
    assert sweep[0].i0 == 0.0 and sweep[0].j_over_j0 == 1.0


def test_sign_rule(sweep):
    for r in sweep:
        assert (r.j > 0) == (r.regime is Regime.BELOW)


def test_exactly_one_sign_change(sweep):
    assert sign_changes([r.j for r in sweep]) == 1


def test_monotone_on_each_side(sweep, resonance):
    below = [r.j for r in sweep if r.i0 < resonance]
    assert np.all(np.diff(below) > 0)
    # |J| shrinks right after the crossing (it grows again once the dip
    # level approaches the second excited doublet)
    above = [abs(r.j) for r in sweep if resonance < r.i0 <= 20.0]
    assert np.all(np.diff(above) < 0)


def test_exclusion_window_is_flagged(sweep, resonance):
    flagged = [r.i0 for r in sweep if r.validity_warning]
    assert flagged
    assert min(flagged) < resonance < max(flagged)
    # the window is a single contiguous band of rows around the crossing
    idx = [k for k, r in enumerate(sweep) if r.validity_warning]
    assert idx == list(range(idx[0], idx[-1] + 1))
    assert all(not r.validity_warning for r in sweep if abs(r.i0 - resonance) > 0.5)


def test_sweep_argument_checks(trap):
    with pytest.raises(ParameterError):
        sweep_tunneling(trap, [])
    with pytest.raises(ParameterError):
        sweep_tunneling(trap, [3.0, 1.0])


def test_sweep_without_zero_still_normalizes(trap, grid):
    rows = sweep_tunneling(trap, [2.0], grid)
    j0 = tunneling_at(trap, grid, 0.0)[1].j
    assert rows[0].j_over_j0 == pytest.approx(rows[0].j / j0, rel=1e-14)


def test_resonance_bracketing(trap, grid, resonance):
    assert is_below_resonance(trap, grid, resonance - 1e-4)
    assert not is_below_resonance(trap, grid, resonance + 1e-4)
    with pytest.raises(ParameterError):
        locate_resonance(trap, 0.0, 1.0, grid)


def test_sign_changes_helper():
    assert sign_changes([1, 2, -1, -3, 0, -2, 4]) == 2
    assert sign_changes([]) == 0
