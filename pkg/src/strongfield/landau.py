"""Magnetic-field scaling in the lowest Landau band.

The longitudinal length scale L(B) solves ``L sinh(L/2) = sqrt(B)``; with
that choice the scaled Coulomb potential

    V_{B,r}(z) = 1 / (L * sqrt(L^2 r^2 / B + z^2))

carries unit weight on |z| <= r and concentrates into a delta function as
B grows. This module also holds the error bound for replacing V_{B,r} by a
delta, the integral kernel of the lowest-Landau-band projector and the
Coulomb potential averaged over the transverse ground-state density.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy import integrate, optimize, special

from .errors import DomainError, NumericError

DEFAULT_QUAD_TOL = 1e-10


def _check_field(B):
    if not (np.isfinite(B) and B > 0):
        raise DomainError(f"field strength must be positive and finite, got {B!r}")


@dataclass(frozen=True)
class FieldScale:
    B: float
    L: float
    residual: float


def _scale_residual(L, root_b):
    return L * math.sinh(0.5 * L) - root_b


def solve_scale(B: float) -> FieldScale:
    """Solve ``L sinh(L/2) = sqrt(B)`` for the scale factor L(B).

    The left side increases strictly from 0, so the bracket
    [1e-6, 10 ln(B + 2)] always holds the root; Brent's method narrows it
    and a couple of Newton steps polish the last digits.
    """
    _check_field(B)
    root_b = math.sqrt(B)
    lo, hi = 1e-6, 10.0 * math.log(B + 2.0)
    if _scale_residual(lo, root_b) > 0:
        # B below ~2.5e-13: L is tiny and L^2/2 ~ sqrt(B)
        lo = 0.0
    L = optimize.brentq(_scale_residual, lo, hi, args=(root_b,), xtol=1e-15, rtol=1e-15, maxiter=200)
    for _ in range(3):
        f = _scale_residual(L, root_b)
        df = math.sinh(0.5 * L) + 0.5 * L * math.cosh(0.5 * L)
        step = f / df
        if not math.isfinite(step):
            break
        L_new = L - step
        if abs(_scale_residual(L_new, root_b)) >= abs(f):
            break
        L = L_new
    res = abs(_scale_residual(L, root_b))
    return FieldScale(B=float(B), L=L, residual=res)


def scale_factor(B: float) -> float:
    return solve_scale(B).L


def _check_r(r):
    if not np.all(np.asarray(r) > 0):
        raise DomainError("transverse distance r must be positive")


def scaled_potential(B, r, z, L=None):
    """V_{B,r}(z); vectorized in ``z`` (and ``r``)."""
    _check_r(r)
    if L is None:
        L = scale_factor(B)
    z = np.asarray(z, dtype=float)
    return 1.0 / (L * np.sqrt((L * r) ** 2 / B + z * z))


def scaled_potential_antiderivative(B, r, z, L=None):
    """Primitive of V_{B,r} vanishing at z = 0: asinh(z/a)/L with a = L r / sqrt(B)."""
    _check_r(r)
    if L is None:
        L = scale_factor(B)
    a = L * r / math.sqrt(B)
    return np.arcsinh(np.asarray(z, dtype=float) / a) / L


def scaled_potential_second_antiderivative(B, r, z, L=None):
    """Second primitive G with G'' = V_{B,r}; used for pair-cell averages."""
    _check_r(r)
    if L is None:
        L = scale_factor(B)
    a = L * r / math.sqrt(B)
    z = np.asarray(z, dtype=float)
    return (z * np.arcsinh(z / a) - np.hypot(z, a)) / L


def normalization_integral(B, r, tol=DEFAULT_QUAD_TOL):
    """Integral of V_{B,r} over |z| <= r by adaptive quadrature (should be 1)."""
    L = scale_factor(B)
    val, err = integrate.quad(lambda t: scaled_potential(B, r, t, L), 0.0, r,
                              epsabs=tol, epsrel=tol, limit=200,
                              points=[min(r, 10 * L * r / math.sqrt(B))])
    return 2.0 * val, 2.0 * err


@dataclass(frozen=True)
class DeltaBoundInputs:
    """Squared norm, kinetic energy, transverse distance and field for the delta bound."""

    lam: float
    T: float
    r: float
    B: float

    def __post_init__(self):
        if not self.lam > 0:
            raise DomainError("lambda must be positive")
        if not self.T >= 0:
            raise DomainError("T must be non-negative")
        if not self.r > 0:
            raise DomainError("r must be positive")
        _check_field(self.B)


def delta_bound(inputs: DeltaBoundInputs) -> float:
    """Bound on | |psi(0)|^2 - int V_{B,r} |psi|^2 |.

    Equal to L(B)^-1 [lam/r + 8 lam^(1/4) T^(3/4) r^(1/2)].
    """
    L = scale_factor(inputs.B)
    lam, T, r = inputs.lam, inputs.T, inputs.r
    return (lam / r + 8.0 * lam**0.25 * T**0.75 * math.sqrt(r)) / L


def optimal_radius(lam: float, T: float) -> float:
    """Radius minimizing the delta bound for fixed lam and T > 0."""
    if T <= 0:
        raise DomainError("the bound decreases without limit in r when T = 0")
    return (lam / (4.0 * lam**0.25 * T**0.75)) ** (2.0 / 3.0)


def delta_defect(psi, B, r, tol=DEFAULT_QUAD_TOL):
    """Measure |psi(0)|^2 - int V_{B,r}(z) |psi(z)|^2 dz by adaptive quadrature.

    ``psi`` is a callable on floats; it should decay fast enough for the
    integral to converge on the real line.
    """
    L = scale_factor(B)
    a = L * r / math.sqrt(B)

    def f(t):
        return scaled_potential(B, r, t, L) * abs(psi(t)) ** 2

    total, err = 0.0, 0.0
    # breakpoints follow the spike width a and the unit scale of psi
    edges = sorted({0.0, min(a, 1.0), min(10 * a, 1.0), min(100 * a, 1.0), 1.0, 10.0})
    for sgn in (1.0, -1.0):
        for lo, hi in zip(edges[:-1], edges[1:]):
            v, e = integrate.quad(lambda t: f(sgn * t), lo, hi, epsabs=tol, epsrel=tol, limit=200)
            total += v
            err += e
        v, e = integrate.quad(lambda t: f(sgn * t), edges[-1], np.inf, epsabs=tol, limit=200)
        total += v
        err += e
    return abs(psi(0.0)) ** 2 - total, err


@dataclass(frozen=True)
class LandauKernelValue:
    value: complex
    B: float
    x_perp: tuple
    y_perp: tuple
    spin: str = "down"  # the projector acts on the spin-down component only


def _kernel_array(B, x, y):
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    cross = x[..., 0] * y[..., 1] - x[..., 1] * y[..., 0]
    d2 = np.sum((x - y) ** 2, axis=-1)
    return (B / (2 * np.pi)) * np.exp(0.5j * B * cross - 0.25 * B * d2)


def landau_kernel(B, x_perp, y_perp) -> LandauKernelValue:
    """Integral kernel of the lowest-Landau-band projector (symmetric gauge)."""
    _check_field(B)
    val = complex(_kernel_array(B, x_perp, y_perp))
    return LandauKernelValue(val, float(B), tuple(map(float, x_perp)), tuple(map(float, y_perp)))


def compose_kernel(B, x_perp, y_perp, order=64, extent=None):
    """Evaluate int K(x,u) K(u,y) du by tensor Gauss-Legendre quadrature.

    The integrand is a Gaussian of width ~B^-1/2 around the midpoint of x
    and y, so the box is centered there and sized to cover the decay.
    """
    _check_field(B)
    x = np.asarray(x_perp, dtype=float)
    y = np.asarray(y_perp, dtype=float)
    mid = 0.5 * (x + y)
    if extent is None:
        extent = 9.0 / math.sqrt(B)
    t, w = np.polynomial.legendre.leggauss(order)
    t, w = t * extent, w * extent
    u = np.stack(np.meshgrid(mid[0] + t, mid[1] + t, indexing="ij"), axis=-1)
    vals = _kernel_array(B, x, u) * _kernel_array(B, u, y)
    return complex(np.einsum("i,j,ij->", w, w, vals))


def landau_averaged_potential(B, z, tol=DEFAULT_QUAD_TOL):
    """Coulomb potential averaged over the lowest-Landau-band transverse density.

    Computes int (B/2pi) exp(-B s^2/2) (z^2 + s^2)^-1/2 d^2s by adaptive
    quadrature after the substitution s = t / sqrt(B). Scalar ``z`` only;
    see :func:`landau_averaged_potential_closed` for array input.
    """
    _check_field(B)
    zs = math.sqrt(B) * abs(float(z))

    def integrand(t):
        return math.exp(-0.5 * t * t) * t / math.hypot(zs, t)

    val, err = integrate.quad(integrand, 0.0, np.inf, epsabs=tol, epsrel=tol, limit=200)
    if err > 10 * tol * max(1.0, abs(val)):
        raise NumericError("quadrature did not converge", estimate=val, residual=err)
    return math.sqrt(B) * val


def landau_averaged_potential_closed(B, z):
    """Closed form sqrt(pi B / 2) * erfcx(sqrt(B/2) |z|) of the averaged potential."""
    _check_field(B)
    z = np.asarray(z, dtype=float)
    return math.sqrt(0.5 * math.pi * B) * special.erfcx(math.sqrt(0.5 * B) * np.abs(z))


def landau_averaged_cell_average(B, grid, order=8):
    """Cell averages of the averaged potential on ``grid``.

    Cells far from the origin use Gauss-Legendre sampling; cells within a
    few transverse lengths of the origin, where the potential has its cusp
    and may be narrower than dx, are integrated adaptively.
    """
    _check_field(B)
    h = 0.5 * grid.dx
    t, w = np.polynomial.legendre.leggauss(order)
    z = grid.nodes[:, None] + h * t[None, :]
    out = 0.5 * (landau_averaged_potential_closed(B, z) @ w)
    width = 1.0 / math.sqrt(B)
    near = np.nonzero(np.abs(grid.nodes) - h < 40 * width)[0]
    f = lambda s: float(landau_averaged_potential_closed(B, s))
    for i in near:
        lo, hi = grid.nodes[i] - h, grid.nodes[i] + h
        pts = [p for p in (0.0, -width, width) if lo < p < hi]
        v, _ = integrate.quad(f, lo, hi, points=pts or None, epsabs=1e-12, epsrel=1e-12, limit=200)
        out[i] = v / grid.dx
    return out
