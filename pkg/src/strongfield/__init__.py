"""One-dimensional models of atoms in very strong magnetic fields.

Submodules:
    landau      field scale L(B), scaled Coulomb potential, delta bound, Landau kernel
    schrod1d    one-particle grid ground states and closed-form checks
    fewbody     N-particle tensor-grid Hamiltonians and their ground energies
    comparison  closed-form solution of the symmetrized comparison model
    meanfield   hyper-strong functional, operator inequality, lower bounds
    cli         batch scans writing CSV/JSON tables
"""
from .errors import CapacityError, DomainError, NumericError
from .grid import EnergyReport, Grid1D, Wavefunction1D

__all__ = ["CapacityError", "DomainError", "NumericError", "EnergyReport", "Grid1D", "Wavefunction1D"]
__version__ = "0.1.0"
