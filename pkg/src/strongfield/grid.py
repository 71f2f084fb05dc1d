"""Uniform symmetric grids and the small report types shared across modules."""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property

import numpy as np

from .errors import DomainError


@dataclass(frozen=True)
class Grid1D:
    """Uniform grid on [-half_width, half_width] with an odd number of nodes.

    Zero is always a node (index ``center``). Homogeneous Dirichlet
    conditions are imposed through ghost nodes one spacing beyond either
    end, so every one of the ``n`` nodes is an unknown.
    """

    half_width: float
    n: int

    def __post_init__(self):
        if not np.isfinite(self.half_width) or self.half_width <= 0:
            raise DomainError(f"half_width must be positive, got {self.half_width}")
        if self.n < 3 or self.n % 2 == 0:
            raise DomainError(f"n must be odd and >= 3, got {self.n}")

    @property
    def dx(self) -> float:
        return 2.0 * self.half_width / (self.n - 1)

    @property
    def center(self) -> int:
        return (self.n - 1) // 2

    @cached_property
    def nodes(self) -> np.ndarray:
        # built from integer offsets so that nodes[c+k] == -nodes[c-k] exactly
        k = np.arange(self.n) - self.center
        return k * self.dx

    def refined(self) -> "Grid1D":
        """Same extent, half the spacing."""
        return Grid1D(self.half_width, 2 * self.n - 1)

    def coarsened(self) -> "Grid1D":
        """Same extent, twice the spacing."""
        if (self.n - 1) % 4:
            raise DomainError(f"grid with n={self.n} cannot be coarsened to an odd count")
        return Grid1D(self.half_width, (self.n - 1) // 2 + 1)

    def scaled(self, factor: float) -> "Grid1D":
        """Grid for the coordinate z' = factor * z."""
        return Grid1D(self.half_width * factor, self.n)

    @classmethod
    def from_spacing(cls, half_width: float, dx: float) -> "Grid1D":
        m = int(round(half_width / dx))
        return cls(m * dx, 2 * m + 1)


@dataclass
class Wavefunction1D:
    grid: Grid1D
    values: np.ndarray

    def norm2(self) -> float:
        return float(np.sum(np.abs(self.values) ** 2) * self.grid.dx)

    def normalized(self) -> "Wavefunction1D":
        return Wavefunction1D(self.grid, self.values / np.sqrt(self.norm2()))


@dataclass
class EnergyReport:
    """Ground-state energy together with how it was obtained.

    ``method`` is one of ``"eigensolver"``, ``"analytic"``, ``"extrapolated"``.
    ``error_estimate`` is a solver residual or a Richardson step magnitude.
    """

    energy: float
    method: str
    dx: float | None = None
    error_estimate: float = 0.0
    meta: dict = field(default_factory=dict)

    def __post_init__(self):
        if not self.error_estimate >= 0:
            raise DomainError("error_estimate must be non-negative")


def cell_average(antiderivative, grid: Grid1D, shift: float = 0.0) -> np.ndarray:
    """Average of a function over each grid cell [z - dx/2, z + dx/2].

    Uses the exact antiderivative, so integrable spikes narrower than the
    grid spacing keep their full weight; a unit delta at 0 becomes 1/dx on
    the center node.
    """
    z = grid.nodes - shift
    h = 0.5 * grid.dx
    return (antiderivative(z + h) - antiderivative(z - h)) / grid.dx


def richardson(coarse: float, fine: float, order: float = 2.0, ratio: float = 2.0):
    """Two-level Richardson extrapolation.

    Returns the extrapolated value and the magnitude of the correction,
    which doubles as the error estimate.
    """
    step = (fine - coarse) / (ratio**order - 1.0)
    return fine + step, abs(step)
