"""Many electrons with N/Z fixed: per-electron energies against the hyper-strong functional."""
import numpy as np

from strongfield import comparison, meanfield
from strongfield.grid import Grid1D

for lam in (0.5, 1.0, 1.5, 2.0, 3.0):
    grid = Grid1D(30.0, 3001) if lam < 2 else Grid1D(100.0, 10001)
    res = meanfield.minimize_hyperstrong(lam, grid)
    print(f"lam={lam:3.1f}  minimizer {res.energy:.6f}  closed form {meanfield.hyperstrong_energy(lam):.6f}"
          f"  iterations {res.iterations}  mu {res.mu:.4f}")

# beyond lam = 2 the extra charge leaks out: the density tail carries it away
res = meanfield.minimize_hyperstrong(3.0, Grid1D(100.0, 10001))
z, rho = res.density.grid.nodes, res.density.values
print("mass beyond |z| > 20:", float(np.sum(rho[np.abs(z) > 20]) * res.density.grid.dx))

print("\ncomparison model at lam = 1")
for Z in (5, 10, 20, 40, 80):
    e = comparison.comparison_energy(Z, Z) / Z
    print(f"Z={Z:3d}  e~/Z = {e:.6f}  gap {e + 7 / 48:.2e}")
