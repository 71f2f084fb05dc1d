"""Exactly solvable reflection-symmetrized comparison model.

Hamiltonian (rescaled units, charge Z, N bosons):

    sum_i (-d_i^2 - delta(z_i)) + (1/2Z) sum_{i<j} [delta(z_i - z_j) + delta(z_i + z_j)]

On the cone 0 <= z_1 <= ... <= z_N of absolute values the ground state is a
product of exponentials exp(-kappa_n z_n) with kappa_n = 1/2 - (n-1)/(4Z).
Once kappa_n stops being positive the extra particles are not bound and the
energy stays at its value for N_o = ceil(2Z + 1) - 1 particles.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError


def _check(Z, N):
    if not (np.isfinite(Z) and Z > 0):
        raise DomainError("Z must be positive")
    if int(N) != N or N < 1:
        raise DomainError("N must be a positive integer")


def critical_number(Z: float) -> int:
    """Largest integer strictly below 2Z + 1."""
    if not Z > 0:
        raise DomainError("Z must be positive")
    return math.ceil(2 * Z + 1) - 1


def kappas(Z: float, N: int) -> np.ndarray:
    n = np.arange(1, int(N) + 1)
    return 0.5 - (n - 1) / (4.0 * Z)


@dataclass(frozen=True)
class ComparisonSolution:
    Z: float
    N: int
    kappas: tuple
    bound: bool
    energy: float
    N_o: int

    @property
    def lam(self):
        return self.N / self.Z


def lambda_form_energy(Z: float, N: int) -> float:
    """Ground energy written through lambda = N/Z (valid while all kappa_n > 0)."""
    lam = N / Z
    return -0.25 * (N * (1 - lam / 2 + lam * lam / 12) + (lam / 2 - lam * lam / 8) + lam * lam / (24 * N))


def solve_comparison(Z: float, N: int) -> ComparisonSolution:
    _check(Z, N)
    N = int(N)
    k = kappas(Z, N)
    N_o = critical_number(Z)
    energy = -math.fsum(k[: min(N, N_o)] ** 2)
    return ComparisonSolution(float(Z), N, tuple(float(v) for v in k), bool(N <= N_o), energy, N_o)


def comparison_energy(Z: float, N: int) -> float:
    return solve_comparison(Z, N).energy


def _tail_sums(k):
    return np.cumsum(k[::-1])[::-1]


def normalization(Z: float, N: int) -> float:
    """Constant c making the symmetric product-exponential state unit-norm on R^N.

    The cone integral of prod exp(-2 kappa_i z_i) is prod_k 1/(2 S_k) with
    S_k = kappa_k + ... + kappa_N, and R^N holds 2^N N! images of the cone.
    """
    sol = solve_comparison(Z, N)
    if not sol.bound:
        raise DomainError("no square-integrable ground state for N >= 2Z + 1; use the linear-factor state")
    S = _tail_sums(np.array(sol.kappas))
    log_norm2 = N * math.log(2) + math.lgamma(N + 1) - np.sum(np.log(2 * S))
    return math.exp(-0.5 * log_norm2)


def tilde_wavefunction(z, Z: float, N: int) -> float:
    """Ground-state amplitude at z (any point of R^N).

    Sorting |z_i| maps z into the cone, where the state is
    c * prod exp(-kappa_i |z|_(i)).
    """
    z = np.atleast_1d(np.asarray(z, dtype=float))
    if z.shape[-1] != N:
        raise DomainError(f"need {N} coordinates")
    c = normalization(Z, N)
    k = kappas(Z, N)
    s = np.sort(np.abs(z), axis=-1)
    val = c * np.exp(-(s @ k))
    return float(val) if val.ndim == 0 else val


def check_state(Z: float, N: int):
    """Cone form of the zero-mode state: returns (kappas, N_o, linear) where
    ``linear`` marks coordinates carried by a factor (1 - kappa z) instead of
    an exponential."""
    _check(Z, N)
    k = kappas(Z, N)
    N_o = critical_number(Z)
    linear = np.arange(1, N + 1) > N_o
    return k, N_o, linear


def check_wavefunction(z_sorted, Z: float, N: int) -> float:
    """Unnormalized state for the unbound regime on the cone.

    prod_{i <= N_o} exp(-kappa_i z_i) * prod_{j > N_o} (1 - kappa_j z_j);
    the linear factors are positive because kappa_j <= 0 there. Not
    square integrable, so no normalization is attempted.
    """
    k, N_o, lin = check_state(Z, N)
    z = np.asarray(z_sorted, dtype=float)
    return float(np.prod(np.where(lin, 1.0 - k * z, np.exp(-k * z))))


def pair_face_gamma(i: int, z, Z: float, N: int) -> float:
    """Pair-face coupling factor gamma_{i,i+1} of the linear-factor state (1-based i).

    Equals 1 below N_o, 4Z(kappa_{N_o} + |kappa_{N_o+1}| / (1 + |kappa_{N_o+1}| z_{N_o}))
    at i = N_o and 1 / ((1 + |kappa_i| z_i)(1 + |kappa_{i+1}| z_{i+1})) above.
    """
    _check(Z, N)
    N_o = critical_number(Z)
    if N <= N_o:
        raise DomainError("gamma is defined for N >= 2Z + 1 only")
    if not 1 <= i <= N - 1:
        raise DomainError("need 1 <= i <= N - 1")
    z = np.asarray(z, dtype=float)
    if z.shape != (N,) or np.any(z < 0) or np.any(np.diff(z) < 0):
        raise DomainError("z must be a sorted non-negative N-vector")
    k = np.abs(kappas(Z, N))
    if i <= N_o - 1:
        return 1.0
    if i == N_o:
        return 4 * Z * (k[N_o - 1] + k[N_o] / (1 + k[N_o] * z[N_o - 1]))
    return 1.0 / ((1 + k[i - 1] * z[i - 1]) * (1 + k[i] * z[i]))


def _log_derivatives(z, k, lin):
    return np.where(lin, -k / (1.0 - k * z), -k)


def _gradient(z, k, lin):
    """Analytic gradient of the cone state by the product rule."""
    factors = np.where(lin, 1.0 - k * z, np.exp(-k * z))
    dfac = np.where(lin, -k, -k * np.exp(-k * z))
    g = np.empty_like(z)
    for n in range(len(z)):
        g[n] = dfac[n] * np.prod(np.delete(factors, n))
    return g, float(np.prod(factors))


@dataclass
class ZeroModeReport:
    annihilation: float  # max_n |A_n psi| / |psi| over the samples
    laplacian: float  # max |-Delta psi / psi - energy|
    origin_jump: float  # log-derivative jump at z_1 = 0 (target: -1, the well strength)
    pair_jumps: np.ndarray  # jump of (d_{i+1} - d_i) ln psi across each pair face
    pair_targets: np.ndarray  # gamma_{i,i+1} / (2Z)
    face_residual: float


def zero_mode_residual(Z: float, N: int, sample_points) -> ZeroModeReport:
    """Check the product structure of the comparison ground state.

    Uses the exponential state for N < 2Z + 1 and the linear-factor state
    otherwise. ``sample_points`` are points of the open cone
    0 < z_1 < ... < z_N (shape (M, N)); a point on a face is refused. The
    annihilation residual compares the product-rule gradient against
    psi * d ln psi, the Laplacian residual checks the eigenvalue equation
    away from faces, and the face checks compare log-derivative jumps with
    the delta strengths of the model (1 at the origin, gamma/2Z on pair faces).
    """
    k, N_o, lin = check_state(Z, N)
    energy = solve_comparison(Z, N).energy
    pts = np.atleast_2d(np.asarray(sample_points, dtype=float))
    if pts.shape[1] != N:
        raise DomainError(f"sample points need {N} coordinates")
    if np.any(pts[:, 0] <= 0) or np.any(np.diff(pts, axis=1) <= 0):
        raise DomainError("sample points must lie strictly inside the cone")
    ann = lap = 0.0
    for z in pts:
        g, psi = _gradient(z, k, lin)
        ld = _log_derivatives(z, k, lin)
        ann = max(ann, float(np.max(np.abs(g - psi * ld))) / abs(psi))
        # linear factors have no curvature; each exponential contributes kappa^2
        minus_lap = -np.sum(np.where(lin, 0.0, k * k))
        lap = max(lap, abs(minus_lap - energy))
    # origin face: mirror z_1 -> -z_1 flips the sign of its log derivative
    z = pts[0]
    ld = _log_derivatives(z, k, lin)
    origin_jump = 2.0 * ld[0]
    jumps, targets = [], []
    for i in range(1, N):
        zf = z.copy()
        zf[i - 1] = zf[i] = 0.5 * (z[i - 1] + z[i])
        zf = np.maximum.accumulate(zf)
        ldf = _log_derivatives(zf, k, lin)
        jumps.append(2.0 * (ldf[i] - ldf[i - 1]))
        gam = pair_face_gamma(i, zf, Z, N) if N > N_o else 1.0
        targets.append(gam / (2.0 * Z))
    jumps, targets = np.array(jumps), np.array(targets)
    face = max(abs(origin_jump + 1.0), float(np.max(np.abs(jumps - targets))) if N > 1 else 0.0)
    return ZeroModeReport(ann, lap, origin_jump, jumps, targets, face)
