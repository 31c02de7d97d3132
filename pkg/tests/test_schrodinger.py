import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.linalg import eigh_tridiagonal

from bjjdip.errors import ParameterError
from bjjdip.potential import PotentialParams, lab_defaults, well_minima
from bjjdip.schrodinger import (PARITY_TOL, Grid, Parity, build_hamiltonian,
                                classify_parity, lowest_eigenpairs, solve, spectrum_sweep)


def test_three_point_stencil():
    grid = Grid(-1.0, 1.0, 3)
    H = build_hamiltonian(grid)
    np.testing.assert_array_equal(H.diagonal, [1.0, 1.0, 1.0])
    np.testing.assert_array_equal(H.offdiagonal, [-0.5, -0.5])
    np.testing.assert_array_equal(H.dense(), H.dense().T)


@pytest.mark.parametrize("kwargs", [dict(x_min=-1.0, x_max=2.0), dict(n_points=2),
                                    dict(x_min=1.0, x_max=-1.0)])
def test_grid_invariants(kwargs):
    with pytest.raises(ParameterError):
        Grid(**kwargs)


def test_grid_is_exactly_mirror_symmetric():
    for n in (4096, 4097):
        x = Grid(-10.0, 10.0, n).x
        np.testing.assert_array_equal(x, -x[::-1])
    assert Grid().x[Grid().center_index] == 0.0


def test_harmonic_spectrum():
    grid = Grid(-10.0, 10.0, 4096)
    H = build_hamiltonian(grid, PotentialParams(v1=0.0, w=1.8, i0=0.0, sigma=0.18))
    pairs = lowest_eigenpairs(H, 4, grid)
    energies = np.array([q.energy for q in pairs])
    np.testing.assert_allclose(energies, np.arange(4) + 0.5, rtol=1e-5)
    assert [q.parity for q in pairs] == [Parity.GERADE, Parity.UNGERADE] * 2


@settings(deadline=None, max_examples=10)
@given(st.floats(-20, 20))
def test_constant_shift(c):
    grid = Grid(-8.0, 8.0, 401)
    base = 0.5 * grid.x**2
    e0 = [q.energy for q in lowest_eigenpairs(build_hamiltonian(grid, potential=base), 3, grid)]
    e1 = [q.energy for q in
          lowest_eigenpairs(build_hamiltonian(grid, potential=base + c), 3, grid)]
    np.testing.assert_allclose(np.array(e1) - np.array(e0), c, atol=1e-10)


@pytest.fixture(scope="module")
def trap_pairs(trap, grid):
    return solve(trap, 3, grid)


def test_energies_match_scipy(trap_pairs, grid):
    H, pairs = trap_pairs
    ref_vals, ref_vecs = eigh_tridiagonal(H.diagonal, H.offdiagonal, select="i",
                                          select_range=(0, 2))
    np.testing.assert_allclose([q.energy for q in pairs], ref_vals, rtol=1e-11)
    for q, v in zip(pairs, ref_vecs.T):
        assert abs(np.dot(q.wavefunction * np.sqrt(grid.spacing), v)) == pytest.approx(1, abs=1e-6)


def test_doublet_structure(trap_pairs):
    _, pairs = trap_pairs
    e1, e2, e3 = (q.energy for q in pairs)
    assert (e2 - e1) / (e3 - e2) < 1e-3
    assert [q.parity for q in pairs] == [Parity.GERADE, Parity.UNGERADE, Parity.GERADE]


def test_normalization_and_orthogonality(trap_pairs, grid):
    _, pairs = trap_pairs
    psi = np.array([q.wavefunction for q in pairs])
    gram = psi @ psi.T * grid.spacing
    assert np.all(np.abs(np.diag(gram) - 1) < 1e-12)
    assert np.all(np.abs(gram - np.eye(3)) < 1e-9)


def test_residuals(trap_pairs):
    H, pairs = trap_pairs
    for q in pairs:
        assert np.max(np.abs(H.apply(q.wavefunction) - q.energy * q.wavefunction)) < 1e-9


def _sign_changes(psi):
    s = np.sign(psi[np.abs(psi) > 1e-8 * np.max(np.abs(psi))])
    return int(np.count_nonzero(s[1:] != s[:-1]))


@pytest.mark.parametrize("i0", [0.0, 8.0, 16.0])
def test_oscillation_theorem(trap, grid, i0):
    _, pairs = solve(trap.with_i0(i0), 3, grid)
    assert [_sign_changes(q.wavefunction) for q in pairs] == [0, 1, 2]


@pytest.mark.parametrize("i0", [0.0, 4.0, 16.0])
def test_ungerade_node_at_origin(trap, grid, i0):
    _, pairs = solve(trap.with_i0(i0), 3, grid)
    odd = [q for q in pairs if q.parity is Parity.UNGERADE]
    assert odd
    for q in odd:
        assert abs(q.wavefunction[grid.center_index]) < 1e-8


def test_sign_convention(trap_pairs, trap, grid):
    _, pairs = trap_pairs
    k = grid.nearest_index(well_minima(trap)[0])
    assert all(q.wavefunction[k] >= 0 for q in pairs)


def test_classify_parity_examples():
    x = Grid(-8.0, 8.0, 801).x
    g = np.exp(-x**2 / 2)
    assert classify_parity(g) is Parity.GERADE
    assert classify_parity(x * g) is Parity.UNGERADE
    noise = np.random.default_rng(0).normal(size=x.size)
    assert classify_parity(noise) is Parity.NONE
    assert classify_parity(g + 10 * PARITY_TOL * x * g) is Parity.NONE


def _e0(trap, n):
    grid = Grid(-12.0, 12.0, n)
    return np.array([q.energy for q in solve(trap, 3, grid)[1]])


@pytest.mark.slow
def test_grid_convergence(trap):
    e = [_e0(trap, n) for n in (2049, 4097, 8193, 16385, 32769)]
    ratio = np.abs(e[1] - e[0]) / np.abs(e[2] - e[1])
    assert np.all((3 < ratio) & (ratio < 5))
    # second order: E0, E1 settle below 1e-6 per doubling from 8193 points,
    # E2 from 16385
    assert np.max(np.abs(e[3][:2] - e[2][:2])) < 1e-6
    assert np.max(np.abs(e[4] - e[3])) < 1e-6


def test_sweep_rejects_unsorted(trap):
    with pytest.raises(ParameterError):
        spectrum_sweep(trap, [2.0, 1.0])


@pytest.fixture(scope="module")
def sweep_rows(trap, grid, sweep_i0):
    return spectrum_sweep(trap, sweep_i0, 3, grid)


def test_sweep_avoided_crossing(sweep_rows):
    gaps = [r.energies[2] - r.energies[1] for r in sweep_rows]
    assert min(gaps) > 0
    # the ground level is gerade and falls as the dip deepens
    ground = [r.energies[0] for r in sweep_rows]
    assert all(r.parities[0] is Parity.GERADE for r in sweep_rows)
    assert np.all(np.diff(ground) <= 0)


def test_sweep_ungerade_level_flat(sweep_rows):
    odd = [e for r in sweep_rows for e, s in zip(r.energies, r.parities)
           if s is Parity.UNGERADE]
    assert len(odd) == len(sweep_rows)
    assert (max(odd) - min(odd)) / np.mean(odd) < 0.01


def test_sweep_parity_labels_switch(sweep_rows):
    first, last = sweep_rows[0], sweep_rows[-1]
    assert first.parities == (Parity.GERADE, Parity.UNGERADE, Parity.GERADE)
    assert last.parities == (Parity.GERADE, Parity.UNGERADE, Parity.GERADE)
    # the dip-bound level overtakes the doublet: E1 drops well below the ungerade level
    assert last.energies[1] - last.energies[0] > 1.0
    assert first.energies[1] - first.energies[0] < 1e-3


def test_residual_bound_is_strict_on_default_grid(trap, grid):
    from bjjdip.schrodinger import RESIDUAL_TOL, residual_tolerance
    assert residual_tolerance(build_hamiltonian(grid, trap)) == RESIDUAL_TOL
    fine = Grid(-12.0, 12.0, 16385)
    assert residual_tolerance(build_hamiltonian(fine, trap)) > RESIDUAL_TOL
