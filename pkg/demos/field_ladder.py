"""One electron in a growing field: the rescaled energy approaches the delta-well value -1/4."""
import numpy as np

from strongfield import landau, schrod1d
from strongfield.grid import Grid1D

grid = Grid1D.from_spacing(40.0, 1e-3)

print(f"{'B':>8} {'L(B)':>8} {'energy':>10} {'gap':>9} {'bound':>8}")
for B in np.logspace(4, 12, 5):
    # transverse distance 1 from the nucleus
    v = schrod1d.scaled_coulomb_potential(B, 1.0, grid)
    rep, wf = schrod1d.ground_state(v, grid)
    T = schrod1d.kinetic_energy(wf)
    bound = landau.delta_bound(landau.DeltaBoundInputs(1.0, T, 1.0, B))
    print(f"{B:8.0e} {landau.scale_factor(B):8.4f} {rep.energy:10.6f} {abs(rep.energy + 0.25):9.5f} {bound:8.4f}")

# The gap closes only like 1/L(B), i.e. logarithmically in B.
# Compare the unscaled hydrogen energy with its high-field expansion.
for B in (1e6, 1e8):
    e = schrod1d.landau_hydrogen_energy(B).energy
    print(f"B={B:.0e}: lowest band {e:.4f}, expansion {schrod1d.hydrogen_expansion(B).value:.4f}")
