"""Mode-by-mode spectra of the nonlocal linearized operator.

The operator -Delta phi - lambda v (phi - <phi>) on the unit ball, with
<phi> = int v phi / int v, decomposes over spherical harmonics of degree k.
Each mode reduces to a weighted radial problem

    -phi'' - ((n-1)/r) phi' + (mu_k / r^2) phi = mu v (phi - <phi>_k)

with mu = lambda + sigma, where the average term is present only for the
radial mode k = 0.  Discretization: flux-form finite differences on the
grid (equivalently, exact piecewise-linear stiffness with lumped weighted
mass), which keeps every matrix exactly symmetric.  The nonlocal average
becomes an explicit rank-one correction of the mode-0 mass matrix.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .numerics import (
    RadialGrid,
    SymMatrix,
    edge_second_derivative,
    edge_slope3,
    gen_sym_eigen,
)
from .solver import Vanishing, WeightProfile

__all__ = [
    "ModeOperator",
    "ModeSpectrum",
    "assemble",
    "solve_modes",
    "dirichlet_first",
    "radiality_check",
    "radial_simplicity_check",
    "rayleigh_sigma",
    "RadialityReport",
    "SimplicityReport",
]

_GAUSS_X, _GAUSS_W = np.polynomial.legendre.leggauss(8)


def sphere_eigenvalue(k: int, n: int) -> float:
    """Laplace eigenvalue of degree-k spherical harmonics on S^{n-1}."""
    return float(k * (k + n - 2))


def _cell_quad(a: float, b: float):
    h = b - a
    t = 0.5 * (a + b) + 0.5 * h * _GAUSS_X
    w = 0.5 * h * _GAUSS_W
    return t, w


def _stiffness_coeffs(grid: RadialGrid) -> np.ndarray:
    """Per-cell flux coefficients |S^{n-1}| int_cell r^{n-1} dr / h^2."""
    r = grid.nodes
    n = grid.n
    cell = (r[1:] ** n - r[:-1] ** n) / n
    return grid.surface_area * cell / grid.spacings**2


def _hat_masses(weight: WeightProfile) -> np.ndarray:
    """g[j] = int_{B_1} v hat_j dx with v piecewise linear between nodes.

    For a vanishing weight the last cell integrates the boundary model
    v0 (1-r)^beta instead of the linear interpolant, which would otherwise
    pollute the quadrature where v degenerates.
    """
    grid = weight.grid
    r = grid.nodes
    n = grid.n
    v = weight.v
    g = np.zeros(r.size)
    model = None
    if isinstance(weight.boundary_class, Vanishing):
        bc = weight.boundary_class
        model = lambda t: bc.v0 * (1.0 - t) ** bc.beta  # noqa: E731
    for c in range(r.size - 1):
        a, b = r[c], r[c + 1]
        t, w = _cell_quad(a, b)
        hat_right = (t - a) / (b - a)
        hat_left = 1.0 - hat_right
        if model is not None and c == r.size - 2:
            vv = model(t)
        else:
            vv = v[c] * hat_left + v[c + 1] * hat_right
        common = w * vv * t ** (n - 1)
        g[c] += float(np.sum(common * hat_left))
        g[c + 1] += float(np.sum(common * hat_right))
    return g * grid.surface_area


def _hat_centrifugal(grid: RadialGrid) -> np.ndarray:
    """c[j] = |S^{n-1}| int r^{n-3} hat_j dr; entry 0 is not meaningful."""
    r = grid.nodes
    n = grid.n
    c = np.zeros(r.size)
    for cell in range(r.size - 1):
        a, b = r[cell], r[cell + 1]
        t, w = _cell_quad(a, b)
        hat_right = (t - a) / (b - a)
        common = w * t ** (n - 3.0)
        if cell > 0:
            c[cell] += float(np.sum(common * (1.0 - hat_right)))
        c[cell + 1] += float(np.sum(common * hat_right))
    return c * grid.surface_area


@dataclass
class ModeOperator:
    """Assembled matrices of a single angular mode.

    `moments` holds the nodal weight masses g with g @ u = int v u dx on
    the mode's function space; `weight_total` is int v dx over the whole
    ball, i.e. sum(moments) plus `excluded_moment`, the mass carried by
    the hat functions of the eliminated Dirichlet nodes.  Weighted
    averages of discrete fields are moments @ u / weight_total.
    """

    mode_k: int
    mu_k: float
    stiffness: SymMatrix
    mass: SymMatrix
    weight_total: float
    grid: RadialGrid
    lam: float
    moments: np.ndarray
    excluded_moment: float
    centrifugal: np.ndarray | None
    node_offset: int

    def average(self, coeffs: np.ndarray) -> float:
        """Weighted average <u> = int v u dx / int v dx of a coefficient
        vector on the mode's function space."""
        return float(self.moments @ coeffs) / self.weight_total


def assemble(weight: WeightProfile, mode_k: int, lam: float,
             include_average: bool | None = None) -> ModeOperator:
    """Discretize one angular mode of the linearized operator.

    Mode 0 lives on nodes 0..M-1 (natural condition at r = 0, Dirichlet at
    r = 1) and carries the rank-one average correction; modes k >= 1 live on
    nodes 1..M-1 and add the diagonal mu_k/r^2 block.  The average of any
    k >= 1 field vanishes by orthogonality of the spherical harmonics, so
    requesting the correction there changes nothing.
    """
    if mode_k < 0:
        raise ValueError("mode index must be >= 0")
    grid = weight.grid
    r = grid.nodes
    last = r.size - 1
    mu_k = sphere_eigenvalue(mode_k, grid.n)

    coeff = _stiffness_coeffs(grid)
    size0 = last  # nodes 0..last-1
    stiff0 = np.zeros((size0, size0))
    for cell in range(last):
        k = coeff[cell]
        stiff0[cell, cell] += k
        if cell + 1 < size0:
            stiff0[cell + 1, cell + 1] += k
            stiff0[cell, cell + 1] -= k
            stiff0[cell + 1, cell] -= k

    gfull = _hat_masses(weight)
    total = float(np.sum(gfull))

    if mode_k == 0:
        g = gfull[:last]
        mass = np.diag(g)
        use_average = True if include_average is None else include_average
        if use_average:
            mass = mass - np.outer(g, g) / total
        return ModeOperator(
            mode_k=0,
            mu_k=mu_k,
            stiffness=SymMatrix(stiff0),
            mass=SymMatrix(mass),
            weight_total=total,
            grid=grid,
            lam=lam,
            moments=g.copy(),
            excluded_moment=float(gfull[last]),
            centrifugal=None,
            node_offset=0,
        )

    cent = _hat_centrifugal(grid)[1:last]
    g = gfull[1:last]
    stiff = stiff0[1:, 1:] + mu_k * np.diag(cent)
    return ModeOperator(
        mode_k=mode_k,
        mu_k=mu_k,
        stiffness=SymMatrix(stiff),
        mass=SymMatrix(np.diag(g)),
        weight_total=total,
        grid=grid,
        lam=lam,
        moments=g.copy(),
        excluded_moment=float(gfull[0] + gfull[last]),
        centrifugal=cent,
        node_offset=1,
    )


@dataclass
class ModeSpectrum:
    """Lowest eigenvalues sigma of one angular mode with sample vectors.

    Eigenfunctions are stored on the full grid (Dirichlet zeros included),
    normalized with int v (phi - <phi>)^2 dx = 1 for mode 0 and
    int v phi^2 dx = 1 otherwise; the sign convention makes <phi> > 0
    whenever the average is nonzero.
    """

    mode_k: int
    sigmas: np.ndarray
    eigenfunctions: np.ndarray
    averages: np.ndarray
    grid: RadialGrid
    lam: float


def _embed(vec: np.ndarray, nnodes: int, offset: int) -> np.ndarray:
    full = np.zeros(nnodes)
    full[offset : offset + vec.size] = vec
    return full


def solve_modes(weight: WeightProfile, lam: float, modes, count: int):
    """Lowest `count` eigenpairs of each requested angular mode."""
    if count < 1:
        raise ValueError("count must be >= 1")
    spectra = []
    for mode_k in modes:
        op = assemble(weight, mode_k, lam)
        max_kernel = 1 if mode_k == 0 else 0
        dec = gen_sym_eigen(
            op.stiffness, op.mass, shift=0.0, count=count, max_kernel_dim=max_kernel
        )
        sigmas = dec.values - lam
        nnodes = weight.grid.nodes.size
        funcs = np.empty((count, nnodes))
        avgs = np.zeros(count)
        for i in range(count):
            vec = dec.vectors[:, i]
            avg = op.average(vec) if mode_k == 0 else 0.0
            scale = float(np.max(np.abs(vec)))
            if abs(avg) > 1e-10 * scale:
                if avg < 0.0:
                    vec = -vec
                    avg = -avg
            elif vec[np.argmax(np.abs(vec))] < 0.0:
                vec = -vec
            funcs[i] = _embed(vec, nnodes, op.node_offset)
            avgs[i] = avg
        if lam + sigmas[0] <= 0.0:
            raise ArithmeticError(
                f"mode {mode_k}: lambda + sigma_1 = {lam + sigmas[0]:.3g} not positive"
            )
        spectra.append(
            ModeSpectrum(
                mode_k=mode_k,
                sigmas=sigmas,
                eigenfunctions=funcs,
                averages=avgs,
                grid=weight.grid,
                lam=lam,
            )
        )
    return spectra


def dirichlet_first(weight: WeightProfile, lam: float) -> float:
    """First eigenvalue nu_1 of the uncorrected (Dirichlet type) problem."""
    op = assemble(weight, 0, lam, include_average=False)
    dec = gen_sym_eigen(op.stiffness, op.mass, count=1, max_kernel_dim=0)
    return float(dec.values[0] - lam)


def rayleigh_sigma(op: ModeOperator, coeffs: np.ndarray, lam: float) -> float:
    """Rayleigh quotient of a coefficient vector, reported as sigma."""
    num = float(coeffs @ op.stiffness.entries @ coeffs)
    den = float(coeffs @ op.mass.entries @ coeffs)
    return num / den - lam


@dataclass
class RadialityReport:
    modes_checked: list
    nonradial_sigma_min: dict
    boundary_slopes: np.ndarray
    slope_bound: float
    curvature_values: np.ndarray
    curvature_expected: np.ndarray
    violations: list

    @property
    def ok(self) -> bool:
        return not self.violations


def radiality_check(spectra, weight: WeightProfile,
                    slope_factor: float = 10.0) -> RadialityReport:
    """Verify that non-positive eigenvalues occur only in the radial mode
    and that radial eigenfunctions satisfy phi'(1) = 0 discretely.

    For eigenfunctions with nonzero average and a positive boundary weight,
    the one-sided second derivative at r = 1 is compared against the
    equation value (lambda + sigma) v(1) <phi>.
    """
    modes_present = sorted(s.mode_k for s in spectra)
    if 0 not in modes_present or max(modes_present) < 3:
        raise ValueError("need mode 0 and modes up to k = 3 at least")
    violations = []
    nonradial_min = {}
    for s in spectra:
        if s.mode_k == 0:
            continue
        nonradial_min[s.mode_k] = float(s.sigmas[0])
        if s.sigmas[0] <= 0.0:
            violations.append(
                f"mode {s.mode_k} has non-positive sigma {s.sigmas[0]:.6g}"
            )
    radial = next(s for s in spectra if s.mode_k == 0)
    nodes = radial.grid.nodes
    h_edge = float(nodes[-1] - nodes[-2])
    slope_bound = slope_factor * h_edge
    slopes = np.array(
        [edge_slope3(phi, nodes, side="right") for phi in radial.eigenfunctions]
    )
    for i, slope in enumerate(slopes):
        if abs(slope) > slope_bound:
            violations.append(
                f"mode 0 eigenfunction {i + 1}: |phi'(1)| = {abs(slope):.3g} "
                f"exceeds {slope_bound:.3g}"
            )
    curvature = np.full(len(radial.sigmas), np.nan)
    expected = np.full(len(radial.sigmas), np.nan)
    if weight.v[-1] > 0.0:
        for i, (sigma, avg, phi) in enumerate(
            zip(radial.sigmas, radial.averages, radial.eigenfunctions)
        ):
            if abs(avg) < 1e-10:
                continue
            curvature[i] = edge_second_derivative(phi, nodes, side="right")
            expected[i] = (radial.lam + sigma) * weight.v[-1] * avg
    return RadialityReport(
        modes_checked=modes_present,
        nonradial_sigma_min=nonradial_min,
        boundary_slopes=slopes,
        slope_bound=slope_bound,
        curvature_values=curvature,
        curvature_expected=expected,
        violations=violations,
    )


@dataclass
class SimplicityReport:
    min_gap: float
    gaps: np.ndarray
    floor: float

    @property
    def ok(self) -> bool:
        return self.min_gap > self.floor


def radial_simplicity_check(spectrum: ModeSpectrum,
                            floor: float = 1e-3) -> SimplicityReport:
    """Report the minimal gap between consecutive radial eigenvalues.

    A gap above the discretization floor certifies that no radial
    eigenvalue is numerically multiple.
    """
    if spectrum.mode_k != 0:
        raise ValueError("simplicity check applies to the radial mode")
    if spectrum.sigmas.size < 5:
        raise ValueError("need at least 5 radial eigenvalues")
    gaps = np.diff(spectrum.sigmas)
    return SimplicityReport(min_gap=float(np.min(gaps)), gaps=gaps, floor=floor)
