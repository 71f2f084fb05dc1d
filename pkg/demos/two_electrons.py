"""Two bosons on a delta well: the exact comparison model against the grid solver."""
from strongfield import comparison, fewbody, meanfield
from strongfield.grid import Grid1D

Z, N = 1.0, 2
sol = comparison.solve_comparison(Z, N)
print("decay rates", sol.kappas, "energy", sol.energy)

ladder = [Grid1D(20.0, 101), Grid1D(20.0, 201), Grid1D(20.0, 401)]
for family in ("symmetrized_comparison", "delta_rescaled"):
    res = fewbody.extrapolate_delta_energy(Z, N, ladder, family=family, method="lobpcg")
    raw = ", ".join(f"{e:.5f}" for e in res.energies)
    print(f"{family:>24}: rungs {raw} -> {res.report.energy:.5f} +- {res.report.error_estimate:.1e}")

# the symmetrized coupling is stronger, so the delta model lies lower
g = Grid1D(40.0, 8001)
cert = meanfield.lower_bound(Z, N, meanfield.Density1D.gaussian(g, 2.0))
print(f"lower bound from a Gaussian trial density: {cert.lower_bound:.4f}")

# a third electron does not lower the comparison energy
print("e~(1,3) =", comparison.comparison_energy(Z, 3), "with decay rates", comparison.kappas(Z, 3))
