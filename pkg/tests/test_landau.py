import math

import numpy as np
import pytest
from hypothesis import given, strategies as st
from scipy import integrate, optimize

from strongfield import landau
from strongfield.errors import DomainError


def test_scale_exact_point():
    B = math.sinh(0.5) ** 2
    assert landau.scale_factor(B) == pytest.approx(1.0, abs=1e-13)


def test_scale_matches_bisection_oracle():
    f = lambda L: L * math.sinh(L / 2) - 1e3
    L_ref = optimize.bisect(f, 1.0, 50.0, xtol=1e-14)
    assert landau.scale_factor(1e6) == pytest.approx(L_ref, abs=1e-12)


def test_scale_residual_on_ladder():
    for B in np.logspace(4, 12, 17):
        fs = landau.solve_scale(B)
        assert fs.residual / math.sqrt(B) <= 1e-12
        assert abs(fs.L * math.sinh(fs.L / 2) - math.sqrt(B)) / math.sqrt(B) <= 1e-12


def test_scale_over_log_tends_to_one():
    # L = ln B - 2 ln L + 2 ln 2 + ..., so the ratio climbs to 1 from below
    ratios = [landau.scale_factor(B) / math.log(B) for B in (1e4, 1e6, 1e8, 1e10)]
    devs = [abs(r - 1) for r in ratios]
    assert all(a > b for a, b in zip(devs, devs[1:]))
    assert all(r < 1 for r in ratios)
    assert all(a < b for a, b in zip(ratios, ratios[1:]))


@given(st.floats(1e-3, 1e14), st.floats(1.0001, 10.0))
def test_scale_increasing(B, factor):
    assert landau.scale_factor(B * factor) > landau.scale_factor(B)


@pytest.mark.parametrize("bad", [0.0, -1.0, float("nan"), float("inf")])
def test_scale_rejects_bad_field(bad):
    with pytest.raises(DomainError):
        landau.solve_scale(bad)


def test_scaled_potential_at_origin():
    B, r = 1e8, 0.7
    L = landau.scale_factor(B)
    assert landau.scaled_potential(B, r, 0.0) == pytest.approx(math.sqrt(B) / (L * L * r), rel=1e-14)


def test_scaled_potential_rejects_nonpositive_r():
    with pytest.raises(DomainError):
        landau.scaled_potential(1e6, 0.0, 0.1)
    with pytest.raises(DomainError):
        landau.scaled_potential(1e6, -1.0, 0.1)


def test_scaled_potential_shape():
    B = 1e6
    z = np.linspace(0, 3, 31)
    v = landau.scaled_potential(B, 1.0, z)
    assert np.allclose(v, landau.scaled_potential(B, 1.0, -z))
    assert np.all(np.diff(v) < 0)
    assert landau.scaled_potential(B, 2.0, 0.3) < landau.scaled_potential(B, 1.0, 0.3)


@pytest.mark.parametrize("B,r", [(1e4, 0.5), (1e8, 2.0)])
def test_normalization_examples(B, r):
    val, err = landau.normalization_integral(B, r)
    assert abs(val - 1) <= 1e-8
    assert err <= 1e-8


def test_normalization_random(rng):
    for _ in range(20):
        B = 10 ** rng.uniform(2, 12)
        r = 10 ** rng.uniform(-1, 1)
        val, _ = landau.normalization_integral(B, r)
        assert val == pytest.approx(1.0, abs=1e-8)


def test_concentration_with_field():
    vals = [landau.scaled_potential(B, 1.0, 0.3) for B in (1e4, 1e8, 1e12)]
    # away from the spike the tail weight shifts toward the origin
    peaks = [landau.scaled_potential(B, 1.0, 0.0) for B in (1e4, 1e8, 1e12)]
    assert peaks[0] < peaks[1] < peaks[2]
    assert all(v > 0 for v in vals)
    for B in (1e4, 1e8, 1e12):
        assert landau.normalization_integral(B, 1.0)[0] == pytest.approx(1.0, abs=1e-8)


def test_antiderivatives_consistent():
    B, r = 1e6, 0.8
    z = np.linspace(-2, 2, 9)
    F = lambda s: landau.scaled_potential_antiderivative(B, r, s)
    h = 1e-6
    num = (F(z + h) - F(z - h)) / (2 * h)
    assert np.allclose(num, landau.scaled_potential(B, r, z), rtol=1e-6)
    G = lambda s: landau.scaled_potential_second_antiderivative(B, r, s)
    h = 1e-4
    num2 = (G(z + h) - 2 * G(z) + G(z - h)) / h**2
    assert np.allclose(num2[np.abs(z) > 0.1], landau.scaled_potential(B, r, z[np.abs(z) > 0.1]), rtol=1e-4)


def test_delta_bound_zero_kinetic():
    B = 1e8
    assert landau.delta_bound(landau.DeltaBoundInputs(1.0, 0.0, 1.0, B)) == pytest.approx(1 / landau.scale_factor(B))


def test_delta_bound_gaussian_example():
    # unit-norm Gaussian exp(-z^2/2): kinetic energy 1/2
    psi = lambda z: math.pi**-0.25 * math.exp(-0.5 * z * z)
    B = 1e8
    defect, err = landau.delta_defect(psi, B, 1.0)
    bound = landau.delta_bound(landau.DeltaBoundInputs(1.0, 0.5, 1.0, B))
    assert abs(defect) <= bound
    assert err < 1e-8


def test_optimal_radius_beats_unit_radius():
    rstar = landau.optimal_radius(1.0, 1.0)
    f = lambda r: landau.delta_bound(landau.DeltaBoundInputs(1.0, 1.0, r, 1e6))
    golden = optimize.minimize_scalar(f, bracket=(0.1, 0.5, 2.0), tol=1e-10).x
    assert rstar == pytest.approx(golden, rel=1e-4)
    assert f(rstar) < f(1.0)


def test_delta_bound_inputs_validation():
    with pytest.raises(DomainError):
        landau.DeltaBoundInputs(0.0, 1.0, 1.0, 1e6)
    with pytest.raises(DomainError):
        landau.DeltaBoundInputs(1.0, -1.0, 1.0, 1e6)
    with pytest.raises(DomainError):
        landau.DeltaBoundInputs(1.0, 1.0, 0.0, 1e6)


def test_kernel_diagonal_exact():
    for B in (0.5, 10.0, 1e6):
        k = landau.landau_kernel(B, (0.3, -1.2), (0.3, -1.2))
        assert k.value == B / (2 * math.pi)
        assert k.spin == "down"


def test_kernel_hermitian_and_bounded(rng):
    B = 7.0
    for _ in range(100):
        x, y = rng.normal(size=2), rng.normal(size=2)
        a = landau.landau_kernel(B, x, y).value
        b = landau.landau_kernel(B, y, x).value
        assert a == pytest.approx(np.conj(b), abs=1e-15)
        assert abs(a) <= B / (2 * math.pi) + 1e-15


def test_kernel_reproducing():
    B = 10.0
    x, y = (0.0, 0.0), (0.5, 0.0)
    comp = landau.compose_kernel(B, x, y)
    assert abs(comp - landau.landau_kernel(B, x, y).value) <= 1e-6


def test_averaged_potential_tail():
    assert landau.landau_averaged_potential(1e2, 50.0) * 50.0 == pytest.approx(1.0, abs=1e-3)


def test_averaged_potential_origin_closed_form():
    B = 1e2
    assert landau.landau_averaged_potential(B, 0.0) == pytest.approx(math.sqrt(math.pi * B / 2), rel=1e-9)


def test_averaged_potential_two_routes(rng):
    B = 37.0
    for z in rng.uniform(-3, 3, 10):
        # plain polar-coordinate quadrature as the second route
        f = lambda s: B * math.exp(-0.5 * B * s * s) * s / math.hypot(z, s)
        ref, _ = integrate.quad(f, 0, np.inf, epsabs=1e-12)
        assert landau.landau_averaged_potential(B, z) == pytest.approx(ref, rel=1e-8)
        assert float(landau.landau_averaged_potential_closed(B, z)) == pytest.approx(ref, rel=1e-8)


def test_averaged_potential_scaling(rng):
    for _ in range(5):
        B = 10 ** rng.uniform(0, 4)
        z = rng.uniform(-2, 2)
        lhs = landau.landau_averaged_potential(B, z)
        rhs = math.sqrt(B) * landau.landau_averaged_potential(1.0, math.sqrt(B) * z)
        assert lhs == pytest.approx(rhs, rel=1e-8)


def test_averaged_potential_sandwich():
    z = np.linspace(0.01, 20, 200)
    v = landau.landau_averaged_potential_closed(5.0, z)
    assert np.all(v > 0) and np.all(v < 1 / z)
