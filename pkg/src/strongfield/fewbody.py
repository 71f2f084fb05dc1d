"""N-particle grid Hamiltonians for the one-dimensional atom models.

All families share the same tensor-product grid: one identical
:class:`Grid1D` per particle, the kinetic energy is the sum of 1D 3-point
Laplacians and every potential is diagonal. The operator is applied
matrix-free; a sparse (and, for small sizes, dense) assembly exists only as
an independent route for cross-checks.

Families
--------
``delta``
    sum_i (-d_i^2 - Z delta(z_i)) + sum_{i<j} delta(z_i - z_j)
``delta_rescaled``
    sum_i (-d_i^2 - delta(z_i)) + (1/Z) sum_{i<j} delta(z_i - z_j)
``symmetrized_comparison``
    sum_i (-d_i^2 - delta(z_i)) + (1/2Z) sum_{i<j} [delta(z_i - z_j) + delta(z_i + z_j)]
``parametric_unscaled``
    sum_i (-d_i^2 - Z/sqrt(z_i^2 + |x_i|^2)) + sum_{i<j} 1/sqrt((z_i - z_j)^2 + |x_i - x_j|^2)
``parametric_scaled``
    sum_i (-d_i^2 - Z V_{B,|y_i|}(z_i)) + sum_{i<j} V_{B,|y_i - y_j|}(z_i - z_j)
"""
from __future__ import annotations

import itertools
import math
import os
import warnings
from dataclasses import dataclass, field

import numpy as np
from scipy import fft, sparse
from scipy.sparse import linalg as splinalg

from . import landau, schrod1d
from .errors import CapacityError, DomainError, NumericError
from .grid import EnergyReport, Grid1D, cell_average, richardson

FAMILIES = ("delta", "delta_rescaled", "parametric_unscaled", "parametric_scaled", "symmetrized_comparison")
DELTA_FAMILIES = ("delta", "delta_rescaled", "symmetrized_comparison")
PARAMETRIC_FAMILIES = ("parametric_unscaled", "parametric_scaled")

BUDGET_ENV = "STRONGFIELD_MAX_DIM"
DEFAULT_MAX_DIM = 4_500_000
DENSE_MAX_DIM = 10_000
# grid sizes that fit the default budget comfortably
DEFAULT_POINTS = {1: 4001, 2: 401, 3: 101, 4: 41}


def max_dimension() -> int:
    return int(float(os.environ.get(BUDGET_ENV, DEFAULT_MAX_DIM)))


@dataclass(frozen=True)
class ModelParams:
    Z: float
    N: int
    B: float | None = None
    transverse: tuple | None = None

    def __post_init__(self):
        if not self.Z > 0:
            raise DomainError("Z must be positive")
        if int(self.N) != self.N or self.N < 1:
            raise DomainError("N must be a positive integer")
        if self.transverse is not None:
            t = tuple(tuple(float(c) for c in v) for v in self.transverse)
            if len(t) != self.N or any(len(v) != 2 for v in t):
                raise DomainError("need one transverse 2-vector per particle")
            object.__setattr__(self, "transverse", t)

    @property
    def lam(self) -> float:
        return self.N / self.Z


@dataclass(frozen=True)
class Regularization:
    """How delta functions are put on the grid: ``onsite`` or ``gaussian`` (with ``width``)."""

    scheme: str = "onsite"
    width: float | None = None

    def __post_init__(self):
        if self.scheme not in ("onsite", "gaussian"):
            raise DomainError(f"unknown regularization {self.scheme!r}")
        if self.scheme == "gaussian" and not (self.width and self.width > 0):
            raise DomainError("gaussian regularization needs a positive width")


@dataclass(frozen=True)
class SymmetrySector:
    tag: str = "bosonic"

    def __post_init__(self):
        if self.tag not in ("bosonic", "none"):
            raise DomainError(f"unknown sector {self.tag!r}")


BOSONIC = SymmetrySector("bosonic")
NO_SYMMETRY = SymmetrySector("none")


def _gauss(z, width):
    return np.exp(-0.5 * (z / width) ** 2) / (math.sqrt(2 * math.pi) * width)


def _pair_delta(grid: Grid1D, reg: Regularization, mirror: bool = False):
    """(n, n) grid realization of delta(z_k - z_l), or delta(z_k + z_l) if ``mirror``."""
    n = grid.n
    k = np.arange(n)
    offset = (k[:, None] + k[None, :] - 2 * grid.center) if mirror else (k[:, None] - k[None, :])
    if reg.scheme == "onsite":
        return np.where(offset == 0, 1.0 / grid.dx, 0.0)
    return _gauss(offset * grid.dx, reg.width)


def _pair_from_second_primitive(G, grid: Grid1D):
    """Cell averages of v(z_k - z_l) over the square grid cells, from G'' = v."""
    n = grid.n
    d = (np.arange(-(n - 1), n)) * grid.dx
    h = grid.dx
    vals = (G(d + h) - 2.0 * G(d) + G(d - h)) / h**2
    k = np.arange(n)
    return vals[(k[:, None] - k[None, :]) + n - 1]


def _soft_coulomb_G(c):
    return lambda d: d * np.arcsinh(d / c) - np.hypot(d, c)


class HamiltonianHandle:
    """Assembled N-particle operator (immutable after construction).

    The diagonal potential is stored as an N-dimensional array of shape
    (n,)*N; the kinetic part is applied by stencil.
    """

    def __init__(self, family, params, grid, regularization, one_body, pairs):
        self.family = family
        self.params = params
        self.grid = grid
        self.regularization = regularization
        self.one_body = one_body  # list of N arrays of shape (n,)
        self.pairs = pairs  # {(i, j): (n, n) array}
        N, n = params.N, grid.n
        self.shape = (n,) * N
        diag = np.zeros(self.shape)
        for i, v in enumerate(one_body):
            diag += v.reshape([n if a == i else 1 for a in range(N)])
        for (i, j), p in pairs.items():
            diag += p.reshape([n if a in (i, j) else 1 for a in range(N)])
        diag.setflags(write=False)
        self.diagonal = diag

    @property
    def permutation_symmetric(self) -> bool:
        """True if relabeling the particles leaves the operator unchanged.

        Always true for the delta families; parametric operators qualify
        only when the transverse configuration is symmetric (for instance
        equal |x_i| for N = 2).
        """
        N = self.params.N
        d = self.diagonal
        atol = 1e-12 * max(1.0, float(np.max(np.abs(d))))  # summation order differs by rounding
        return all(np.allclose(d, np.transpose(d, p), rtol=0.0, atol=atol)
                   for p in itertools.permutations(range(N)))

    @property
    def dimension(self) -> int:
        return self.grid.n ** self.params.N

    def norm_estimate(self) -> float:
        """Upper bound on the operator norm (Gershgorin)."""
        return 4.0 * self.params.N / self.grid.dx**2 + float(np.max(np.abs(self.diagonal)))

    def apply(self, psi):
        """Matrix-vector product on a flat or shaped state."""
        flat = np.ndim(psi) == 1
        x = np.asarray(psi).reshape(self.shape)
        N, h2 = self.params.N, self.grid.dx**2
        out = (2.0 * N / h2 + self.diagonal) * x
        for a in range(N):
            lo = [slice(None)] * N
            hi = [slice(None)] * N
            lo[a] = slice(None, -1)
            hi[a] = slice(1, None)
            lo, hi = tuple(lo), tuple(hi)
            out[lo] -= x[hi] / h2
            out[hi] -= x[lo] / h2
        return out.ravel() if flat else out

    def to_sparse(self):
        """Sparse matrix built from Kronecker sums (independent of :meth:`apply`)."""
        n, N = self.grid.n, self.params.N
        d, e = schrod1d.laplacian_bands(self.grid)
        t1 = sparse.diags([e, d, e], [-1, 0, 1], format="csr")
        eye = sparse.identity(n, format="csr")
        kin = sparse.csr_matrix((n**N, n**N))
        for a in range(N):
            factors = [t1 if b == a else eye for b in range(N)]
            term = factors[0]
            for f in factors[1:]:
                term = sparse.kron(term, f, format="csr")
            kin = kin + term
        return (kin + sparse.diags(self.diagonal.ravel())).tocsr()


def _check_budget(grid: Grid1D, N: int):
    dim = grid.n**N
    if dim > max_dimension():
        raise CapacityError(f"dimension {grid.n}^{N} = {dim} exceeds budget {max_dimension()} "
                            f"(set {BUDGET_ENV} to override)")


def assemble(family: str, params: ModelParams, grid: Grid1D, regularization: Regularization | None = None):
    """Build the operator of ``family`` on the N-fold tensor grid."""
    if family not in FAMILIES:
        raise DomainError(f"unknown family {family!r}")
    reg = regularization or Regularization()
    Z, N = params.Z, params.N
    _check_budget(grid, N)
    one_body, pairs = [], {}
    if family in DELTA_FAMILIES:
        attraction = Z if family == "delta" else 1.0
        v1 = -schrod1d.delta_potential(grid, attraction, reg.scheme, reg.width)
        one_body = [v1] * N
        if N > 1:
            if family == "delta":
                p = _pair_delta(grid, reg)
            elif family == "delta_rescaled":
                p = _pair_delta(grid, reg) / Z
            else:
                p = (_pair_delta(grid, reg) + _pair_delta(grid, reg, mirror=True)) / (2.0 * Z)
            pairs = {ij: p for ij in itertools.combinations(range(N), 2)}
    else:
        t = params.transverse
        if t is None:
            raise DomainError(f"{family} needs transverse coordinates")
        radii = [math.hypot(*v) for v in t]
        if min(radii) == 0:
            raise DomainError("every transverse coordinate must be nonzero")
        if family == "parametric_scaled":
            if params.B is None:
                raise DomainError("parametric_scaled needs a field strength B")
            L = landau.scale_factor(params.B)
            B = params.B
            for r in radii:
                one_body.append(-Z * cell_average(lambda s, r=r: landau.scaled_potential_antiderivative(B, r, s, L), grid))
            G = lambda c: (lambda d: landau.scaled_potential_second_antiderivative(B, c, d, L))
        else:
            for r in radii:
                one_body.append(-Z * cell_average(lambda s, r=r: np.arcsinh(s / r), grid))
            G = _soft_coulomb_G
        for i, j in itertools.combinations(range(N), 2):
            c = math.dist(t[i], t[j])
            if c == 0:
                raise DomainError("coinciding transverse coordinates are not supported")
            pairs[(i, j)] = _pair_from_second_primitive(G(c), grid)
    return HamiltonianHandle(family, params, grid, reg, one_body, pairs)


def symmetrize(psi, N):
    """Average over all permutations of the N particle axes."""
    if N == 1:
        return psi
    acc = np.zeros_like(psi)
    perms = list(itertools.permutations(range(N)))
    for p in perms:
        acc += np.transpose(psi, p)
    return acc / len(perms)


def ground_energy(handle: HamiltonianHandle, sector: SymmetrySector = BOSONIC, seed: int = 0,
                  method: str = "lanczos", tol: float = 1e-8, maxiter: int | None = None,
                  ncv: int | None = None, return_vector: bool = False):
    """Lowest eigenvalue of ``handle``.

    ``lanczos`` runs implicitly restarted Lanczos (ARPACK, full
    reorthogonalization) from a seeded Gaussian start; in the bosonic
    sector the start is symmetrized and every product is followed by the
    symmetrizer, which commutes with H. ``lobpcg`` is a block solver
    preconditioned by the exact inverse of the shifted kinetic term (sine
    transforms); it needs far fewer products on fine grids and is checked
    against Lanczos in the tests. ``dense`` diagonalizes the sparse
    assembly (small sizes only) and ``tridiagonal`` is the N = 1 banded
    solver. The report's ``error_estimate`` is the residual ||Hv - Ev||,
    and convergence requires it to be at most ``tol * ||H||_est``.
    """
    N = handle.params.N
    dim = handle.dimension
    shape = handle.shape
    hnorm = handle.norm_estimate()
    if sector.tag == "bosonic" and N > 1 and not handle.permutation_symmetric:
        raise DomainError("operator is not permutation symmetric; use the unrestricted sector")
    if method == "tridiagonal":
        if N != 1:
            raise DomainError("tridiagonal solver is for N = 1 only")
        rep, wf = schrod1d.ground_state(handle.diagonal, handle.grid)
        vec = wf.values * math.sqrt(handle.grid.dx)
        energy = rep.energy
    elif method == "dense":
        if dim > DENSE_MAX_DIM:
            raise CapacityError(f"dense diagonalization limited to dimension {DENSE_MAX_DIM}")
        mat = handle.to_sparse().toarray()
        if sector.tag == "bosonic" and N > 1:
            P = _symmetrizer_matrix(handle.grid.n, N)
            w, V = np.linalg.eigh(P @ mat @ P)
            keep = np.linalg.norm(P @ V - V, axis=0) < 1e-8
            w, V = w[keep], V[:, keep]
        else:
            w, V = np.linalg.eigh(mat)
        energy, vec = float(w[0]), V[:, 0]
    elif method == "lobpcg":
        energy, vec = _lobpcg(handle, sector, seed, tol * hnorm, maxiter or 500)
    elif method == "lanczos":
        rng = np.random.default_rng(seed)
        v0 = rng.standard_normal(dim)
        if sector.tag == "bosonic":
            v0 = symmetrize(v0.reshape(shape), N).ravel()

            def mv(x):
                return symmetrize(handle.apply(np.asarray(x).reshape(shape)), N).ravel()
        else:
            def mv(x):
                return handle.apply(np.asarray(x).ravel())
        op = splinalg.LinearOperator((dim, dim), matvec=mv, dtype=float)
        if ncv is None:
            ncv = min(dim - 1, 24)
        if maxiter is None:
            maxiter = max(2000, dim // 10)
        try:
            w, V = splinalg.eigsh(op, k=1, which="SA", v0=v0, ncv=ncv, tol=1e-12, maxiter=maxiter)
        except splinalg.ArpackNoConvergence as exc:
            best = float(exc.eigenvalues[0]) if len(exc.eigenvalues) else float("nan")
            raise NumericError("Lanczos did not converge", iterations=maxiter, estimate=best) from exc
        energy, vec = float(w[0]), V[:, 0]
    else:
        raise DomainError(f"unknown method {method!r}")
    vec = vec / np.linalg.norm(vec)
    resid = float(np.linalg.norm(handle.apply(vec) - energy * vec))
    if resid > tol * hnorm:
        raise NumericError(f"residual {resid:.3e} above tolerance", estimate=energy, residual=resid)
    meta = {"residual": resid, "norm_estimate": hnorm, "seed": seed, "method": method,
            "sector": sector.tag, "n": handle.grid.n, "half_width": handle.grid.half_width}
    report = EnergyReport(energy, "eigensolver", handle.grid.dx, resid, meta)
    if return_vector:
        return report, vec.reshape(shape) / math.sqrt(handle.grid.dx**N)
    return report


def kinetic_preconditioner(grid: Grid1D, N: int, shift: float):
    """Exact inverse of (sum of 1D 3-point Laplacians + shift) by sine transforms.

    The Dirichlet 3-point Laplacian is diagonalized by the type-I discrete
    sine transform, so the inverse costs a few FFTs per application.
    """
    n = grid.n
    k = np.arange(1, n + 1)
    mu = 4.0 / grid.dx**2 * np.sin(0.5 * np.pi * k / (n + 1)) ** 2
    total = np.zeros((n,) * N) + shift
    for a in range(N):
        total = total + mu.reshape([n if b == a else 1 for b in range(N)])
    inv = 1.0 / total

    def apply(x):
        return fft.idstn(inv * fft.dstn(x, type=1, norm="ortho"), type=1, norm="ortho")

    return apply


def _lobpcg(handle, sector, seed, atol, maxiter):
    """Preconditioned block solver for the lowest eigenpair (one vector block)."""
    N, shape, dim = handle.params.N, handle.shape, handle.dimension
    bos = sector.tag == "bosonic" and N > 1
    # T + shift dominates H for this shift, so the preconditioner is positive definite
    shift = 1.0 + abs(float(np.min(handle.diagonal)))
    prec = kinetic_preconditioner(handle.grid, N, shift)

    def mv(X):
        X = np.asarray(X)
        out = np.empty_like(X)
        for c in range(X.shape[1]):
            y = handle.apply(X[:, c].reshape(shape))
            out[:, c] = (symmetrize(y, N) if bos else y).ravel()
        return out

    def pv(X):
        X = np.asarray(X)
        out = np.empty_like(X)
        for c in range(X.shape[1]):
            y = prec(X[:, c].reshape(shape))
            out[:, c] = (symmetrize(y, N) if bos else y).ravel()
        return out

    rng = np.random.default_rng(seed)
    x0 = rng.standard_normal(dim)
    if bos:
        x0 = symmetrize(x0.reshape(shape), N).ravel()
    x0 = prec(x0.reshape(shape)).ravel()
    A = splinalg.LinearOperator((dim, dim), matvec=lambda x: mv(x.reshape(-1, 1)).ravel(), matmat=mv, dtype=float)
    M = splinalg.LinearOperator((dim, dim), matvec=lambda x: pv(x.reshape(-1, 1)).ravel(), matmat=pv, dtype=float)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        w, V = splinalg.lobpcg(A, x0.reshape(-1, 1), M=M, largest=False, tol=atol, maxiter=maxiter)
    return float(w[0]), V[:, 0]


def _symmetrizer_matrix(n, N):
    dim = n**N
    idx = np.arange(dim).reshape((n,) * N)
    perms = list(itertools.permutations(range(N)))
    rows, cols = [], []
    for p in perms:
        rows.append(idx.ravel())
        cols.append(np.transpose(idx, p).ravel())
    data = np.full(len(perms) * dim, 1.0 / len(perms))
    return sparse.csr_matrix((data, (np.concatenate(rows), np.concatenate(cols))), shape=(dim, dim)).toarray()


def parametric_energy(Z, N, x_perp, grid: Grid1D | None = None, seed: int = 0, method: str | None = None):
    """Ground energy E_{Z,N}(x_perp) of the unscaled parametric Hamiltonian."""
    if grid is None:
        grid = Grid1D(20.0, DEFAULT_POINTS.get(N, 41))
    params = ModelParams(Z, N, transverse=x_perp)
    h = assemble("parametric_unscaled", params, grid)
    method = method or ("tridiagonal" if N == 1 else "lanczos")
    # particles at different transverse positions are distinguishable
    return ground_energy(h, NO_SYMMETRY, seed, method=method)


def scaled_parametric_energy(Z, N, y_perp, B, grid: Grid1D | None = None, seed: int = 0, method: str | None = None):
    """Ground energy e^B_{Z,N}(y_perp) of the scaled parametric Hamiltonian."""
    if grid is None:
        grid = Grid1D(40.0, DEFAULT_POINTS.get(N, 41))
    params = ModelParams(Z, N, B=B, transverse=y_perp)
    h = assemble("parametric_scaled", params, grid)
    method = method or ("tridiagonal" if N == 1 else "lanczos")
    return ground_energy(h, NO_SYMMETRY, seed, method=method)


def scaling_check(Z, N, y_perp, B, grid: Grid1D, seed: int = 0):
    """Compare E_{Z,N}(B^-1/2 y) / L(B)^2 with e^B_{Z,N}(y).

    The unscaled problem is solved on ``grid`` shrunk by 1/L(B), which is
    the image of the scaled grid under z -> z / L. Returns both energies
    and their relative difference.
    """
    L = landau.scale_factor(B)
    x = [tuple(np.asarray(v, dtype=float) / math.sqrt(B)) for v in y_perp]
    unscaled = parametric_energy(Z, N, x, grid.scaled(1.0 / L), seed)
    scaled = scaled_parametric_energy(Z, N, y_perp, B, grid, seed)
    lhs = unscaled.energy / L**2
    return lhs, scaled.energy, abs(lhs - scaled.energy) / abs(scaled.energy)


def transverse_energy_bounds(Z, x_perp):
    """Simple sandwich -sum Z^2 (1 + asinh(1/(Z|x_i|))^2) <= E_{Z,N}(x_perp) <= 0."""
    lower = -sum(Z * Z * (1.0 + math.asinh(1.0 / (Z * math.hypot(*v))) ** 2) for v in x_perp)
    return lower, 0.0


@dataclass
class SuperharmonicResult:
    center_energy: float
    circle_average: float
    samples: np.ndarray
    bounds_ok: bool

    @property
    def gap(self):
        return self.center_energy - self.circle_average


def superharmonic_spot_check(Z, N, center, radius, angular_points=16, grid: Grid1D | None = None,
                             frozen=None, seed: int = 0):
    """Mean-value test of x_1 -> E_{Z,N}(x_1, frozen...) on a circle around ``center``.

    For N = 2 the second transverse coordinate is held at ``frozen``.
    Superharmonicity means the circle average does not exceed the center.
    """
    c = np.asarray(center, dtype=float)
    if not 0 < radius < np.linalg.norm(c):
        raise DomainError("the circle must not touch the origin")
    if N > 2:
        raise DomainError("spot check supports N = 1 or N = 2")
    others = [] if N == 1 else [tuple(frozen if frozen is not None else (0.0, 1.0))]
    if grid is None:
        grid = Grid1D(30.0, 3001 if N == 1 else 201)

    def energy(x1):
        conf = [tuple(x1)] + others
        return parametric_energy(Z, N, conf, grid, seed).energy

    theta = 2 * np.pi * np.arange(angular_points) / angular_points
    pts = c[None, :] + radius * np.stack([np.cos(theta), np.sin(theta)], axis=1)
    cache = {}
    samples = []
    for p in pts:
        # E depends on x_1 only through |x_1| (and |x_1 - x_2|); reuse repeated radii
        key = (round(float(np.hypot(*p)), 13),) if N == 1 else tuple(np.round(p, 13))
        if key not in cache:
            cache[key] = energy(p)
        samples.append(cache[key])
    samples = np.array(samples)
    e0 = energy(c)
    ok = True
    for p, e in zip(list(pts) + [c], list(samples) + [e0]):
        lo, hi = transverse_energy_bounds(Z, [tuple(p)] + others)
        ok &= lo <= e <= hi
    return SuperharmonicResult(e0, float(samples.mean()), samples, bool(ok))


@dataclass
class ExtrapolationResult:
    report: EnergyReport
    energies: list
    spacings: list
    warnings: list = field(default_factory=list)


def extrapolate_delta_energy(Z, N, ladder, family: str = "delta", sector: SymmetrySector = BOSONIC,
                             seed: int = 0, order: float | None = None, method: str | None = None):
    """Richardson extrapolation of a delta-family ground energy over a grid ladder.

    ``ladder`` is a sequence of :class:`Grid1D` (or ``(Grid1D, Regularization)``
    pairs) with spacings halving from one rung to the next. With three or
    more rungs the convergence order is estimated from the last three;
    otherwise ``order`` (default 2) is assumed. The error estimate is the
    magnitude of the last extrapolation step. ``method`` picks the
    eigensolver (tridiagonal for N = 1 and Lanczos otherwise by default).
    """
    grids, regs = [], []
    for item in ladder:
        g, r = (item if isinstance(item, tuple) else (item, None))
        grids.append(g)
        regs.append(r)
    if len(grids) < 2:
        raise DomainError("need at least two rungs")
    params = ModelParams(Z, N)
    energies = []
    for g, r in zip(grids, regs):
        h = assemble(family, params, g, r)
        m = method or ("tridiagonal" if N == 1 else "lanczos")
        energies.append(ground_energy(h, sector, seed, method=m).energy)
    notes = []
    diffs = np.diff(energies)
    if len(diffs) > 1 and not (np.all(diffs <= 0) or np.all(diffs >= 0)):
        notes.append("non-monotone convergence across the ladder")
    ratios = [grids[i].dx / grids[i + 1].dx for i in range(len(grids) - 1)]
    if order is None:
        order = 2.0
        if len(energies) >= 3 and diffs[-1] != 0 and diffs[-2] / diffs[-1] > 1:
            order = math.log(diffs[-2] / diffs[-1]) / math.log(ratios[-1])
    value, err = richardson(energies[-2], energies[-1], order, ratios[-1])
    if notes:
        warnings.warn(notes[0])
    rep = EnergyReport(value, "extrapolated", grids[-1].dx, err,
                       {"energies": energies, "order": order, "warnings": notes})
    return ExtrapolationResult(rep, energies, [g.dx for g in grids], notes)


def unbinding_scan(Z, N_values, grid: Grid1D, family: str = "delta_rescaled", seed: int = 0,
                   method: str = "lobpcg"):
    """Ground energies for increasing N on a fixed grid (exploratory).

    An N that fails to lower the energy relative to N - 1 suggests the extra
    particle is not bound; no critical value is asserted.
    """
    rows = []
    prev = None
    for N in N_values:
        e = ground_energy(assemble(family, ModelParams(Z, N), grid), BOSONIC, seed,
                          method="tridiagonal" if N == 1 else method).energy
        rows.append({"Z": Z, "N": N, "energy": e, "binding": None if prev is None else prev - e})
        prev = e
    return rows
