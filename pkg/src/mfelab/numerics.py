"""Shared low-level numerical kernels.

Radial grids on [0, 1], ball-measure quadrature, fixed-step initial value
integration, and dense symmetric / generalized-symmetric eigensolvers.
All routines are pure functions of their inputs; values are immutable
after construction and safe to share across threads.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import cached_property

import numpy as np
import scipy.linalg

from .errors import DegeneracyError, DivergenceError

__all__ = [
    "RadialGrid",
    "SymMatrix",
    "EigenDecomposition",
    "weighted_integral",
    "integrate_ivp",
    "sym_eigen",
    "gen_sym_eigen",
    "surface_area",
    "ball_volume",
    "edge_slope",
    "edge_slope3",
    "edge_second_derivative",
]

# Relative threshold below which a symmetric-PSD eigenvalue counts as an
# exact (structural) zero.  Chosen well above roundoff (~1e-16) and well
# below the smallest honest mass entries produced by graded grids (~1e-10).
KERNEL_RTOL = 1e-12


def surface_area(n: int) -> float:
    """Surface measure of the unit sphere in R^n."""
    return 2.0 * math.pi ** (n / 2.0) / math.gamma(n / 2.0)


def ball_volume(n: int) -> float:
    """Volume of the unit ball in R^n."""
    return surface_area(n) / n


@dataclass
class RadialGrid:
    """Strictly increasing nodes on [0, 1] with the spatial dimension.

    Quadrature weights for the ball measure |S^{n-1}| r^{n-1} dr are
    computed lazily and cached; they integrate any function that is a
    polynomial of degree <= 2 between nodes exactly.
    """

    nodes: np.ndarray
    n: int

    def __post_init__(self):
        nodes = np.ascontiguousarray(self.nodes, dtype=float)
        if self.n < 2:
            raise ValueError(f"dimension must be >= 2, got {self.n}")
        if nodes.ndim != 1 or nodes.size < 18:
            raise ValueError("grid needs at least 16 interior nodes")
        if nodes[0] != 0.0 or nodes[-1] != 1.0:
            raise ValueError("grid must span [0, 1] exactly")
        if not np.all(np.diff(nodes) > 0.0):
            raise ValueError("grid nodes must be strictly increasing")
        nodes.setflags(write=False)
        self.nodes = nodes

    @classmethod
    def uniform(cls, count: int, n: int) -> "RadialGrid":
        return cls(np.linspace(0.0, 1.0, count), n)

    @classmethod
    def graded(cls, count: int, n: int, strength: float = 2.0) -> "RadialGrid":
        """Grid refined toward r = 1 via r = 1 - (1-u)^strength."""
        if strength < 1.0:
            raise ValueError("grading strength must be >= 1")
        u = np.linspace(0.0, 1.0, count)
        nodes = 1.0 - (1.0 - u) ** strength
        nodes[0], nodes[-1] = 0.0, 1.0
        return cls(nodes, n)

    @cached_property
    def spacings(self) -> np.ndarray:
        d = np.diff(self.nodes)
        d.setflags(write=False)
        return d

    @cached_property
    def surface_area(self) -> float:
        return surface_area(self.n)

    @cached_property
    def ball_volume(self) -> float:
        return ball_volume(self.n)

    @cached_property
    def ball_weights(self) -> np.ndarray:
        """Nodal weights W with W @ u ~= int_{B_1} u dx for radial u.

        Composite rule: on each pair of cells the quadratic interpolant of
        the samples is integrated against r^{n-1} with a Gauss rule exact
        for the product (weighted Simpson).  A trailing odd cell reuses
        the parabola through the last three nodes.
        """
        r = self.nodes
        n = self.n
        w = np.zeros_like(r)
        # degree of parabola * r^{n-1} is n + 1
        npts = max(4, (n + 3) // 2)
        gx, gw = np.polynomial.legendre.leggauss(npts)

        def accumulate(i0, i1, i2, a, b):
            t = 0.5 * (a + b) + 0.5 * (b - a) * gx
            wt = 0.5 * (b - a) * gw * t ** (n - 1)
            for idx, xa, xb, xc in (
                (i0, r[i0], r[i1], r[i2]),
                (i1, r[i1], r[i0], r[i2]),
                (i2, r[i2], r[i0], r[i1]),
            ):
                lag = (t - xb) * (t - xc) / ((xa - xb) * (xa - xc))
                w[idx] += float(np.sum(wt * lag))

        ncells = r.size - 1
        for p in range(ncells // 2):
            i = 2 * p
            accumulate(i, i + 1, i + 2, r[i], r[i + 2])
        if ncells % 2:
            i = ncells
            accumulate(i - 2, i - 1, i, r[i - 1], r[i])
        w *= self.surface_area
        w.setflags(write=False)
        return w


def weighted_integral(samples, grid: RadialGrid) -> float:
    """Full-ball integral of nodal samples, surface factor included."""
    s = np.asarray(samples, dtype=float)
    if s.shape != grid.nodes.shape:
        raise ValueError(
            f"sample length {s.shape} does not match grid {grid.nodes.shape}"
        )
    return float(grid.ball_weights @ s)


def integrate_ivp(field, state0, grid: RadialGrid) -> np.ndarray:
    """Fixed-step RK4 trajectory of y' = field(r, y) aligned with the grid.

    Raises DivergenceError with the blow-up radius if the state leaves
    the finite range.
    """
    nodes = grid.nodes
    y = np.array(state0, dtype=float)
    out = np.empty((nodes.size, y.size))
    out[0] = y
    for i in range(nodes.size - 1):
        r = nodes[i]
        h = nodes[i + 1] - r
        k1 = np.asarray(field(r, y), dtype=float)
        k2 = np.asarray(field(r + 0.5 * h, y + 0.5 * h * k1), dtype=float)
        k3 = np.asarray(field(r + 0.5 * h, y + 0.5 * h * k2), dtype=float)
        k4 = np.asarray(field(r + h, y + h * k3), dtype=float)
        y = y + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
        if not np.all(np.isfinite(y)):
            raise DivergenceError(
                f"state became non-finite at r = {nodes[i + 1]:.6g}",
                radius=float(nodes[i + 1]),
            )
        out[i + 1] = y
    return out


@dataclass
class SymMatrix:
    """Dense symmetric real matrix, symmetrized on construction."""

    entries: np.ndarray

    def __post_init__(self):
        m = np.ascontiguousarray(self.entries, dtype=float)
        if m.ndim != 2 or m.shape[0] != m.shape[1]:
            raise ValueError("entries must be a square matrix")
        if not np.all(np.isfinite(m)):
            raise ValueError("entries must be finite")
        scale = np.linalg.norm(m)
        if scale > 0.0 and np.linalg.norm(m - m.T) > 1e-12 * scale:
            raise ValueError("matrix is not symmetric to 1e-12 relative tolerance")
        m = 0.5 * (m + m.T)
        m.setflags(write=False)
        self.entries = m

    @property
    def order(self) -> int:
        return self.entries.shape[0]


def _entries(M) -> np.ndarray:
    if isinstance(M, SymMatrix):
        return M.entries
    return SymMatrix(np.asarray(M, dtype=float)).entries


@dataclass
class EigenDecomposition:
    """Eigenvalues in ascending order with the matching column vectors."""

    values: np.ndarray
    vectors: np.ndarray


def sym_eigen(M) -> EigenDecomposition:
    """Full decomposition of a dense symmetric matrix.

    The result is checked against the residual and orthonormality
    contracts (1e-9 relative) before being returned.
    """
    m = _entries(M)
    values, vectors = np.linalg.eigh(m)
    scale = float(np.max(np.abs(values))) if values.size else 0.0
    if scale > 0.0:
        residual = np.linalg.norm(m @ vectors - vectors * values, axis=0)
        if np.max(residual) > 1e-9 * scale:
            raise ArithmeticError("eigendecomposition residual above 1e-9")
        gram = vectors.T @ vectors
        if np.max(np.abs(gram - np.eye(m.shape[0]))) > 1e-9:
            raise ArithmeticError("eigenvectors not orthonormal to 1e-9")
    return EigenDecomposition(values, vectors)


def gen_sym_eigen(A, B, shift: float = 0.0, count: int | None = None,
                  max_kernel_dim: int | None = None) -> EigenDecomposition:
    """Pairs of A phi = mu B phi for symmetric A and positive
    semidefinite B, with B-orthonormal vectors and mu ascending.

    Reduction: with C = A + shift*B positive definite and C = L L^T, the
    standard problem L^{-1} B L^{-T} z = theta z yields mu = 1/theta - shift;
    theta values at the roundoff floor correspond to the kernel of B
    (mu = infinity) and are dropped.  `count`, when given, limits the
    output to the lowest `count` pairs.  `max_kernel_dim`, when given,
    raises DegeneracyError if the numerical kernel of B is larger.
    """
    a = _entries(A)
    b = _entries(B)
    if a.shape != b.shape:
        raise ValueError("A and B must have equal order")
    bvals = np.linalg.eigvalsh(b)
    bscale = float(np.max(np.abs(bvals))) if bvals.size else 0.0
    if bscale == 0.0:
        raise ValueError("B must be nonzero")
    if bvals[0] < -1e-10 * bscale:
        raise ValueError("B is indefinite")
    if max_kernel_dim is not None:
        kdim = int(np.sum(bvals <= KERNEL_RTOL * bscale))
        if kdim > max_kernel_dim:
            raise DegeneracyError(
                f"mass kernel dimension {kdim} exceeds declared bound {max_kernel_dim}"
            )
    c = a + shift * b
    try:
        L = np.linalg.cholesky(c)
    except np.linalg.LinAlgError as exc:
        raise ValueError("A + shift*B is not positive definite") from exc
    tmp = scipy.linalg.solve_triangular(L, b, lower=True)
    G = scipy.linalg.solve_triangular(L, tmp.T, lower=True)
    G = 0.5 * (G + G.T)
    theta, Z = np.linalg.eigh(G)
    keep = theta > KERNEL_RTOL * float(theta[-1])
    theta = theta[keep]
    Z = Z[:, keep]
    # descending theta = ascending mu
    theta = theta[::-1]
    Z = Z[:, ::-1]
    if count is not None:
        if count < 1:
            raise ValueError("count must be >= 1")
        if count > theta.size:
            raise DegeneracyError(
                f"only {theta.size} finite pairs available, {count} requested"
            )
        theta = theta[:count]
        Z = Z[:, :count]
    mu = 1.0 / theta - shift
    vectors = scipy.linalg.solve_triangular(L, Z, lower=True, trans="T")
    vectors = vectors / np.sqrt(theta)
    _check_generalized(a, b, mu, vectors)
    return EigenDecomposition(mu, vectors)


def _check_generalized(a, b, mu, vectors):
    scale = np.linalg.norm(a) + np.max(np.abs(mu)) * np.linalg.norm(b)
    residual = a @ vectors - (b @ vectors) * mu
    if np.max(np.linalg.norm(residual, axis=0)) > 1e-9 * scale:
        raise ArithmeticError("generalized eigenpair residual above 1e-9")
    gram = vectors.T @ b @ vectors
    if np.max(np.abs(gram - np.eye(mu.size))) > 1e-9:
        raise ArithmeticError("vectors not B-orthonormal to 1e-9")


def edge_slope(values, nodes, side: str = "right") -> float:
    """Two-point one-sided first derivative at an endpoint."""
    if side == "right":
        return float((values[-1] - values[-2]) / (nodes[-1] - nodes[-2]))
    return float((values[1] - values[0]) / (nodes[1] - nodes[0]))


def edge_slope3(values, nodes, side: str = "right") -> float:
    """Three-point one-sided first derivative (second order accurate)."""
    if side == "right":
        x0, x1, x2 = nodes[-1], nodes[-2], nodes[-3]
        f0, f1, f2 = values[-1], values[-2], values[-3]
    else:
        x0, x1, x2 = nodes[0], nodes[1], nodes[2]
        f0, f1, f2 = values[0], values[1], values[2]
    w0 = (2.0 * x0 - x1 - x2) / ((x0 - x1) * (x0 - x2))
    w1 = (x0 - x2) / ((x1 - x0) * (x1 - x2))
    w2 = (x0 - x1) / ((x2 - x0) * (x2 - x1))
    return float(w0 * f0 + w1 * f1 + w2 * f2)


def edge_second_derivative(values, nodes, side: str = "right") -> float:
    """Second derivative of the quadratic through three endpoint nodes."""
    if side == "right":
        xs = nodes[-3:]
        fs = values[-3:]
    else:
        xs = nodes[:3]
        fs = values[:3]
    xa, xb, xc = xs
    fa, fb, fc = fs
    return float(
        2.0
        * (
            fa / ((xa - xb) * (xa - xc))
            + fb / ((xb - xa) * (xb - xc))
            + fc / ((xc - xa) * (xc - xb))
        )
    )
