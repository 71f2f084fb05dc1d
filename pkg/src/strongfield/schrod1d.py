"""One-particle ground states on a line.

The finite-difference operator is ``-D2 + diag(V)`` with the 3-point
Laplacian; its lowest eigenpair comes from Sturm-sequence bisection
followed by inverse iteration (LAPACK stebz/stein through
:func:`scipy.linalg.eigh_tridiagonal`).
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy import linalg

from . import landau
from .errors import DomainError, NumericError
from .grid import EnergyReport, Grid1D, Wavefunction1D, cell_average, richardson

EULER_GAMMA = 0.57721566490153286061


def laplacian_bands(grid: Grid1D):
    """Diagonal and off-diagonal of -D2 (Dirichlet ghost nodes)."""
    h2 = grid.dx**2
    return np.full(grid.n, 2.0 / h2), np.full(grid.n - 1, -1.0 / h2)


def apply_hamiltonian(potential, grid: Grid1D, psi):
    """(-D2 + V) psi with zero values beyond the grid ends."""
    psi = np.asarray(psi)
    padded = np.pad(psi, 1)
    lap = (padded[2:] - 2 * psi + padded[:-2]) / grid.dx**2
    return -lap + potential * psi


def ground_state(potential, grid: Grid1D):
    """Lowest eigenpair of -D2 + diag(potential) on ``grid``.

    Returns an :class:`EnergyReport` (error estimate = residual norm of the
    eigenpair) and the normalized :class:`Wavefunction1D`, with the sign
    chosen so that the value at the origin is non-negative.
    """
    potential = np.asarray(potential, dtype=float)
    if potential.shape != (grid.n,):
        raise DomainError(f"potential has shape {potential.shape}, expected ({grid.n},)")
    if not np.all(np.isfinite(potential)):
        raise DomainError("potential must be finite at every node")
    d, e = laplacian_bands(grid)
    try:
        w, v = linalg.eigh_tridiagonal(d + potential, e, select="i", select_range=(0, 0),
                                       lapack_driver="stebz")
    except linalg.LinAlgError as exc:  # pragma: no cover - LAPACK failure path
        raise NumericError(f"tridiagonal eigensolver failed: {exc}") from exc
    energy = float(w[0])
    vec = v[:, 0]
    if vec[grid.center] < 0 or (vec[grid.center] == 0 and vec.sum() < 0):
        vec = -vec
    resid = float(np.linalg.norm(apply_hamiltonian(potential, grid, vec) - energy * vec))
    vec = vec / math.sqrt(grid.dx)
    report = EnergyReport(energy, "eigensolver", grid.dx, resid, {"residual": resid})
    return report, Wavefunction1D(grid, vec)


def kinetic_energy(wf: Wavefunction1D) -> float:
    """Discrete int |psi'|^2 consistent with the 3-point Laplacian."""
    padded = np.pad(wf.values, 1)
    return float(np.sum(np.diff(padded) ** 2) / wf.grid.dx)


def delta_potential(grid: Grid1D, strength: float, scheme: str = "onsite", width: float | None = None,
                    center: float = 0.0):
    """Grid realization of ``strength * delta(z - center)``.

    ``onsite`` puts strength/dx on the node at ``center`` (which must be a
    node); ``gaussian`` samples a normalized Gaussian of the given width.
    """
    if scheme == "onsite":
        v = np.zeros(grid.n)
        k = grid.center + int(round(center / grid.dx))
        v[k] = strength / grid.dx
        return v
    if scheme == "gaussian":
        if width is None or width <= 0:
            raise DomainError("gaussian regularization needs a positive width")
        z = grid.nodes - center
        return strength * np.exp(-0.5 * (z / width) ** 2) / (math.sqrt(2 * math.pi) * width)
    raise DomainError(f"unknown delta scheme {scheme!r}")


def extrapolated_ground_state(potential_fn, grid: Grid1D, order: float = 2.0):
    """Richardson-extrapolated ground energy from ``grid`` and its 2x coarsening.

    ``potential_fn(grid)`` must return the potential sampled on ``grid``.
    """
    coarse = grid.coarsened()
    rc, _ = ground_state(potential_fn(coarse), coarse)
    rf, wf = ground_state(potential_fn(grid), grid)
    value, err = richardson(rc.energy, rf.energy, order)
    report = EnergyReport(value, "extrapolated", grid.dx, err,
                          {"coarse": rc.energy, "fine": rf.energy, "order": order})
    return report, wf


@dataclass(frozen=True)
class DeltaWellState:
    """psi(z) = amplitude * exp(-decay_rate |z|)."""

    decay_rate: float
    amplitude: float

    def __call__(self, z):
        return self.amplitude * np.exp(-self.decay_rate * np.abs(z))


def delta_well_exact(Z: float):
    """Ground state of -d^2/dz^2 - Z delta(z): energy -Z^2/4, decay rate Z/2."""
    if not Z > 0:
        raise DomainError("Z must be positive")
    report = EnergyReport(-0.25 * Z * Z, "analytic")
    return report, DeltaWellState(0.5 * Z, math.sqrt(0.5 * Z))


def discrete_delta_energy(Z: float, dx: float) -> float:
    """Exact ground energy of the on-site delta well on an infinite lattice.

    With psi_j = exp(-q|j|), the center equation gives sinh q = Z dx / 2 and
    E = -4 sinh^2(q/2) / dx^2.
    """
    q = math.asinh(0.5 * Z * dx)
    return -4.0 * math.sinh(0.5 * q) ** 2 / dx**2


@dataclass
class ZeroEnergyReport:
    b: float
    interior_residual: float
    jump_residual: float
    f0: float
    fprime0: float
    positive: bool
    monotone: bool
    printed_potential_residual: float
    potential_ordering: bool


def comparison_potential(b, z):
    """Potential U_b with -f'' - U_b f = 0 off the origin for f = 1 - e^{-b|z|}/(2b+1)."""
    return b * b / ((2 * b + 1) * np.exp(b * np.abs(z)) - 1.0)


def zero_energy_check(b: float, z=None) -> ZeroEnergyReport:
    """Check that f(z) = 1 - exp(-b|z|)/(2b+1) is a zero-energy solution.

    Off the origin, -f'' - U_b f = 0 with ``comparison_potential``; at the
    origin the derivative jump equals f(0), i.e. the condition imposed by
    +delta(z). Derivatives are analytic. The same residual for the larger
    potential b^2 e^{-b|z|}/((2b+1)(1 - e^{-b|z|})) is reported alongside
    (it is not zero), as is the ordering W_b <= U_b <= that potential.
    """
    if not b > 0:
        raise DomainError("b must be positive")
    if z is None:
        z = np.linspace(0.01, 10.0, 100)
    z = np.asarray(z, dtype=float)
    e = np.exp(-b * np.abs(z))
    f = 1.0 - e / (2 * b + 1)
    fpp = -b * b * e / (2 * b + 1)
    resid = np.max(np.abs(-fpp - comparison_potential(b, z) * f))
    w_big = b * b * e / ((2 * b + 1) * (1.0 - e))
    printed = np.max(np.abs(-fpp - w_big * f))
    w_small = b * b * e / (2 * b + 1)
    u = comparison_potential(b, z)
    slack = 1e-12 * u  # far out all three agree to rounding
    ordering = bool(np.all(w_small <= u + slack) and np.all(u <= w_big + slack))
    f0 = 1.0 - 1.0 / (2 * b + 1)
    fp0 = b / (2 * b + 1)
    jump = abs(2 * fp0 - f0)
    zp = z[z > 0]
    fz = 1.0 - np.exp(-b * zp) / (2 * b + 1)
    return ZeroEnergyReport(b, float(resid), float(jump), f0, fp0, bool(np.all(fz > 0)),
                            bool(np.all(np.diff(fz[np.argsort(zp)]) >= 0)), float(printed), ordering)


@dataclass(frozen=True)
class ExpansionValue:
    value: float
    terms: tuple
    truncated: str = "O(1)"


def hydrogen_expansion(B: float) -> ExpansionValue:
    """High-field expansion of the hydrogen ground energy (Z = 1), without its O(1) term.

    With l = ln(B/2), ll = ln ln(B/2) and C = Euler's constant / 2:
    -l^2/4 + l ll - (C + ln 2) l - ll^2 + 2 (C - 1 + ln 2) ll.
    """
    if not (np.isfinite(B) and B > 2 * math.e):
        raise DomainError("B must exceed 2e so that ln ln(B/2) > 0")
    C = 0.5 * EULER_GAMMA
    l = math.log(B / 2)
    ll = math.log(l)
    terms = (-0.25 * l * l, l * ll, -(C + math.log(2)) * l, -ll * ll, 2 * (C - 1 + math.log(2)) * ll)
    return ExpansionValue(math.fsum(terms), terms)


def landau_hydrogen_energy(B: float, half_width: float | None = None, dx: float | None = None):
    """Lowest-Landau-band hydrogen energy: ground state of -d^2 - V_avg(B, z).

    The defaults resolve the transverse length B^-1/2 with cell averages and
    keep the walls well outside the decay length of the bound state.
    """
    if half_width is None:
        half_width = 40.0 / math.log(B)
    if dx is None:
        dx = min(0.2 / math.sqrt(B), half_width / 2000)
    grid = Grid1D.from_spacing(half_width, dx)
    v = -landau.landau_averaged_cell_average(B, grid)
    return ground_state(v, grid)[0]


def scaled_coulomb_potential(B: float, r: float, grid: Grid1D, Z: float = 1.0, shift: float = 0.0):
    """Cell-averaged ``-Z V_{B,r}`` on ``grid``."""
    L = landau.scale_factor(B)
    return -Z * cell_average(lambda s: landau.scaled_potential_antiderivative(B, r, s, L), grid, shift)


def soft_coulomb_potential(r: float, grid: Grid1D, Z: float = 1.0):
    """Cell-averaged ``-Z / sqrt(z^2 + r^2)`` on ``grid``."""
    if not r > 0:
        raise DomainError("transverse distance must be positive")
    return -Z * cell_average(lambda s: np.arcsinh(s / r), grid)
