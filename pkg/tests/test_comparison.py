import itertools
import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from strongfield import comparison, meanfield
from strongfield.errors import DomainError


def test_examples():
    s = comparison.solve_comparison(1.0, 1)
    assert s.kappas == (0.5,) and s.energy == -0.25
    s = comparison.solve_comparison(1.0, 2)
    assert s.kappas == (0.5, 0.25) and s.energy == -5 / 16 and s.bound
    s = comparison.solve_comparison(1.0, 3)
    assert s.kappas[2] == 0.0 and not s.bound and s.N_o == 2 and s.energy == -5 / 16


def test_validation():
    with pytest.raises(DomainError):
        comparison.solve_comparison(0.0, 1)
    with pytest.raises(DomainError):
        comparison.solve_comparison(1.0, 0)


@pytest.mark.parametrize("Z", [0.5, 1.0, 2.0, 5.0, 10.0])
def test_two_formula_agreement(Z):
    for N in range(1, comparison.critical_number(Z) + 1):
        if N < 2 * Z + 1:
            a = comparison.comparison_energy(Z, N)
            assert a == pytest.approx(comparison.lambda_form_energy(Z, N), abs=1e-12)


@given(st.floats(0.3, 20.0))
def test_monotone_clamp(Z):
    N_o = comparison.critical_number(Z)
    e = [comparison.comparison_energy(Z, N) for N in range(1, N_o + 4)]
    assert all(b <= a for a, b in zip(e, e[1:]))
    assert e[N_o - 1] == e[N_o] == e[-1]


@given(st.floats(0.1, 50.0), st.integers(1, 120))
def test_bound_iff_last_kappa_positive(Z, N):
    s = comparison.solve_comparison(Z, N)
    assert s.bound == (s.kappas[-1] > 0)
    assert s.bound == (N < 2 * Z + 1)


@pytest.mark.parametrize("Z,Nc", [(1.0, 2), (1.5, 3), (2.0, 4), (0.3, 1), (2.2, 5)])
def test_critical_number(Z, Nc):
    assert comparison.critical_number(Z) == Nc


def test_wavefunction_single_ratio():
    a = comparison.tilde_wavefunction([0.0], 1.0, 1)
    b = comparison.tilde_wavefunction([2.0], 1.0, 1)
    assert b / a == pytest.approx(math.exp(-1.0), rel=1e-14)


def test_wavefunction_symmetry(rng):
    assert comparison.tilde_wavefunction([1.0, 2.0], 1.0, 2) == comparison.tilde_wavefunction([-2.0, 1.0], 1.0, 2)
    z = rng.normal(size=3)
    ref = comparison.tilde_wavefunction(z, 2.0, 3)
    for perm in itertools.permutations(range(3)):
        for signs in itertools.product((1, -1), repeat=3):
            assert comparison.tilde_wavefunction(np.array(signs) * z[list(perm)], 2.0, 3) == pytest.approx(ref)


def test_wavefunction_grid_norm():
    z = np.linspace(-40, 40, 4001)
    dz = z[1] - z[0]
    Z1, Z2 = np.meshgrid(z, z, indexing="ij")
    psi = comparison.tilde_wavefunction(np.stack([Z1, Z2], axis=-1), 1.0, 2)
    assert abs(np.sum(psi**2) * dz * dz - 1.0) <= 1e-4


def test_wavefunction_unbound_refused():
    with pytest.raises(DomainError):
        comparison.tilde_wavefunction([0.1, 0.2, 0.3], 1.0, 3)
    with pytest.raises(DomainError):
        comparison.normalization(1.0, 3)


def test_gamma_first_branch():
    # Z = 1, N = 4: N_o = 2 so i = 1 is below the threshold
    assert comparison.pair_face_gamma(1, [0.1, 3.0, 4.0, 9.0], 1.0, 4) == 1.0


def test_gamma_boundary_case():
    for z2 in (0.0, 1.0, 10.0, 1e3):
        assert comparison.pair_face_gamma(2, [0.0, z2, z2 + 1], 1.0, 3) == pytest.approx(1.0, abs=1e-15)


def test_gamma_decreasing_below_one():
    vals = [comparison.pair_face_gamma(2, [0.0, z2, z2 + 1], 0.9, 3) for z2 in (0.0, 1.0, 10.0)]
    assert vals[0] > vals[1] > vals[2]
    assert all(v <= 1 + 1e-12 for v in vals)


def test_gamma_at_most_one_random(rng):
    count = 0
    while count < 1000:
        Z = rng.uniform(0.3, 4.0)
        N_o = comparison.critical_number(Z)
        N = N_o + int(rng.integers(1, 4))
        z = np.sort(rng.exponential(3.0, N))
        for i in range(1, N):
            assert comparison.pair_face_gamma(i, z, Z, N) <= 1 + 1e-12
        count += 1


def test_gamma_domain():
    with pytest.raises(DomainError):
        comparison.pair_face_gamma(1, [0.1, 0.2], 1.0, 2)  # bound regime
    with pytest.raises(DomainError):
        comparison.pair_face_gamma(3, [0.1, 0.2, 0.3], 1.0, 3)
    with pytest.raises(DomainError):
        comparison.pair_face_gamma(1, [0.3, 0.2, 0.4], 1.0, 3)


def test_zero_mode_annihilation(rng):
    pts = np.sort(rng.uniform(0.01, 5, size=(50, 2)), axis=1)
    r = comparison.zero_mode_residual(1.0, 2, pts)
    assert r.annihilation <= 1e-12
    assert r.laplacian <= 1e-12


def test_zero_mode_faces():
    r = comparison.zero_mode_residual(1.0, 2, [[0.5, 1.5]])
    assert r.origin_jump == pytest.approx(-1.0, abs=1e-14)
    assert r.pair_jumps[0] == pytest.approx(0.5, abs=1e-14)
    assert r.face_residual <= 1e-12


@pytest.mark.parametrize("Z,N", [(2.0, 3), (5.0, 7), (0.9, 3), (1.0, 5)])
def test_zero_mode_faces_general(Z, N, rng):
    pts = np.sort(rng.uniform(0.01, 4, size=(20, N)), axis=1)
    r = comparison.zero_mode_residual(Z, N, pts)
    assert r.annihilation <= 1e-12
    assert r.face_residual <= 1e-12
    if N < 2 * Z + 1:
        assert np.allclose(r.pair_targets, 1 / (2 * Z))


def test_zero_mode_rejects_face_points():
    with pytest.raises(DomainError):
        comparison.zero_mode_residual(1.0, 2, [[0.0, 1.0]])
    with pytest.raises(DomainError):
        comparison.zero_mode_residual(1.0, 2, [[1.0, 1.0]])


def test_check_wavefunction_positive(rng):
    for _ in range(100):
        z = np.sort(rng.exponential(5.0, 4))
        assert comparison.check_wavefunction(z, 1.0, 4) > 0


def test_meanfield_trend():
    lam = 1.0
    target = meanfield.hyperstrong_energy(lam) / lam
    gaps = []
    for Z in (5, 10, 20, 40):
        N = int(lam * Z)
        gaps.append(abs(comparison.comparison_energy(Z, N) / N - target))
    assert all(a > b for a, b in zip(gaps, gaps[1:]))
    # leading correction is O(1/N)
    assert gaps[-2] / gaps[-1] == pytest.approx(2.0, rel=0.1)
