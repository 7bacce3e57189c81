"""Nodal structure of radial eigenfunction profiles.

Zero detection on the cubic-spline interpolant, singular-point
classification (zeros where the profile touches without crossing),
generalized nodal domain counting with merging across singular spheres,
signed weighted averages per domain, bound verification, and log-log
fitting of boundary vanishing orders.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy.interpolate import CubicSpline
from scipy.optimize import brentq

from .errors import DiagnosticError, PoorFitError, ResolutionError
from .numerics import RadialGrid, edge_second_derivative, edge_slope3
from .solver import Vanishing, WeightProfile

__all__ = [
    "SingularPoint",
    "NodalReport",
    "find_zeros",
    "classify_singular",
    "count_domains",
    "weighted_averages",
    "verify_bounds",
    "fit_vanishing_order",
    "analyze_eigenfunction",
    "hopf_sign_check",
    "BoundsSummary",
]

_GAUSS3_X, _GAUSS3_W = np.polynomial.legendre.leggauss(3)
MAX_ZEROS = 64
# Spline values below this fraction of the profile scale are eigensolver
# roundoff, not signal; the vanishing-order fit discards them.
NOISE_FLOOR = 1e-12


@dataclass(frozen=True)
class SingularPoint:
    """Zero where both the profile and its slope vanish.

    `second_derivative > 0` is the interior criterion; at a degenerate
    boundary (weight vanishing at r = 1) the criterion is a finite
    vanishing order above 2, recorded in `vanishing_order`.
    """

    radius: float
    second_derivative: float
    vanishing_order: float


@dataclass
class NodalReport:
    """Generalized nodal domains of one radial eigenfunction.

    Domains are listed outermost first, matching the indexing of the
    signed averages m_j; `m_total` is their exact sum.  `bound_satisfied`
    states whether the count stays within twice the eigenvalue index.
    """

    zeros: list
    singular_points: list
    domains: list
    averages: np.ndarray
    m_total: float
    eigen_index: int
    bound_satisfied: bool
    zero_tol: float
    slope_tol: float
    hopf_margins: list = field(default_factory=list)

    def __post_init__(self):
        if abs(float(np.sum(self.averages)) - self.m_total) > 1e-8 * max(
            1.0, abs(self.m_total)
        ):
            raise ArithmeticError("domain averages do not sum to the total")
        signs = [d[2] for d in self.domains]
        for a, b in zip(signs, signs[1:]):
            if a * b != -1:
                raise ArithmeticError("adjacent domain signs do not alternate")
        if self.m_total > 0.0:
            for j, m in enumerate(self.averages, start=1):
                if (-1.0) ** j * m >= 0.0:
                    raise ArithmeticError(
                        f"average m_{j} = {m:.6g} breaks the sign pattern"
                    )

    @property
    def domain_count(self) -> int:
        return len(self.domains)


def _default_zero_tol(phi: np.ndarray) -> float:
    return 1e-8 * float(np.max(np.abs(phi)))


def _default_slope_tol(spline: CubicSpline, nodes: np.ndarray) -> float:
    return 1e-6 * float(np.max(np.abs(spline(nodes, 1))))


def _local_spacing(nodes: np.ndarray, radius: float) -> float:
    i = int(np.clip(np.searchsorted(nodes, radius) - 1, 0, nodes.size - 2))
    return float(nodes[i + 1] - nodes[i])


def find_zeros(phi, grid: RadialGrid, zero_tol: float | None = None,
               slope_tol: float | None = None) -> list:
    """Zeros of the profile in (0, 1], the origin excluded by convention.

    Sign-change zeros are bracketed on the samples and refined on the
    spline; tangential zeros are slope roots of the spline whose value
    lies below the zero tolerance.  Two zeros closer than three grid
    cells trigger a resolution error.
    """
    phi = np.asarray(phi, dtype=float)
    nodes = grid.nodes
    if phi.shape != nodes.shape:
        raise ValueError("profile samples do not match the grid")
    if zero_tol is None:
        zero_tol = _default_zero_tol(phi)
    spline = CubicSpline(nodes, phi)
    if slope_tol is None:
        slope_tol = _default_slope_tol(spline, nodes)

    zeros = []
    definite = [
        (i, np.sign(phi[i])) for i in range(nodes.size) if abs(phi[i]) > zero_tol
    ]
    for (i, si), (j, sj) in zip(definite, definite[1:]):
        if si * sj < 0:
            zeros.append(float(brentq(spline, nodes[i], nodes[j], xtol=1e-14)))

    if abs(phi[-1]) <= zero_tol and not any(abs(z - 1.0) <= zero_tol for z in zeros):
        zeros.append(1.0)

    dspline = spline.derivative()
    for rho in dspline.roots(extrapolate=False):
        rho = float(rho)
        if not (0.0 < rho <= 1.0):
            continue
        if abs(spline(rho)) > zero_tol:
            continue
        spacing = _local_spacing(nodes, rho)
        if any(abs(rho - z) < 3.0 * spacing for z in zeros):
            continue
        zeros.append(rho)

    zeros.sort()
    if len(zeros) > MAX_ZEROS:
        raise ResolutionError(
            f"{len(zeros)} zeros found, beyond the supported {MAX_ZEROS}"
        )
    for a, b in zip(zeros, zeros[1:]):
        spacing = _local_spacing(nodes, 0.5 * (a + b))
        if b - a < 3.0 * spacing:
            raise ResolutionError(
                f"zeros at r = {a:.6g} and r = {b:.6g} closer than 3 cells",
                radius=a,
            )
    return zeros


def classify_singular(phi, weight: WeightProfile, lam: float, sigma: float,
                      avg: float, radius: float,
                      zero_tol: float | None = None,
                      slope_tol: float | None = None,
                      fit_window: int = 12):
    """Classify a detected zero; returns a SingularPoint or None (regular).

    A zero is singular when both the profile and its slope vanish within
    tolerance.  The curvature from the one-sided or spline stencil is
    cross-checked against the equation value (lambda + sigma) v(r) <phi>;
    the equation value wins when the stencil sits below its noise floor,
    and an outright sign conflict raises a diagnostic error.  At a
    degenerate boundary (vanishing weight at r = 1) the classification
    falls back to the fitted vanishing order.
    """
    phi = np.asarray(phi, dtype=float)
    grid = weight.grid
    nodes = grid.nodes
    spline = CubicSpline(nodes, phi)
    if zero_tol is None:
        zero_tol = _default_zero_tol(phi)
    if slope_tol is None:
        slope_tol = _default_slope_tol(spline, nodes)
    if abs(spline(radius)) > zero_tol:
        raise ValueError(f"r = {radius:.6g} is not a zero within tolerance")

    at_boundary = abs(radius - 1.0) <= 1e-12
    slope = (
        edge_slope3(phi, nodes, side="right")
        if at_boundary
        else float(spline(radius, 1))
    )
    if abs(slope) > slope_tol:
        return None

    degenerate = isinstance(weight.boundary_class, Vanishing) and at_boundary
    if degenerate:
        beta_fit, _, _ = fit_vanishing_order(phi, grid, radius, window=fit_window)
        return SingularPoint(
            radius=float(radius), second_derivative=0.0, vanishing_order=beta_fit
        )

    if at_boundary:
        stencil = edge_second_derivative(phi, nodes, side="right")
    else:
        stencil = float(spline(radius, 2))
    v_at = float(np.interp(radius, nodes, weight.v))
    equation = (lam + sigma) * v_at * avg
    third = spline.derivative(3)
    noise = 5.0 * _local_spacing(nodes, radius) * float(np.max(np.abs(third(nodes[:-1]))))
    if equation != 0.0 and np.sign(stencil) != np.sign(equation):
        if abs(stencil) > noise:
            raise DiagnosticError(
                f"curvature at r = {radius:.6g}: stencil {stencil:.3g} and "
                f"equation value {equation:.3g} differ in sign"
            )
        stencil = equation
    curvature = stencil if abs(stencil) > noise or equation == 0.0 else equation
    return SingularPoint(
        radius=float(radius), second_derivative=float(curvature), vanishing_order=2.0
    )


def count_domains(phi, grid: RadialGrid, zeros, singulars,
                  zero_tol: float | None = None) -> list:
    """Generalized nodal domains as (inner, outer, sign), outermost first.

    Interior zeros that are not singular separate domains; singular
    spheres are absorbed, so same-sign regions around them merge.  The
    zero at the origin is never a boundary: the innermost domain is a
    ball.
    """
    phi = np.asarray(phi, dtype=float)
    nodes = grid.nodes
    if zero_tol is None:
        zero_tol = _default_zero_tol(phi)
    singular_radii = {s.radius for s in singulars}
    edges = [0.0]
    for z in zeros:
        if z < 1.0 and not any(abs(z - s) <= 1e-12 for s in singular_radii):
            edges.append(z)
    edges.append(1.0)

    domains = []
    for inner, outer in zip(edges, edges[1:]):
        inside = (nodes > inner) & (nodes < outer)
        values = phi[inside]
        if values.size == 0 or np.max(np.abs(values)) <= zero_tol:
            raise ResolutionError(
                f"cannot resolve the sign on ({inner:.6g}, {outer:.6g})",
                radius=inner,
            )
        sign = 1 if values[np.argmax(np.abs(values))] > 0.0 else -1
        domains.append((float(inner), float(outer), sign))
    return domains[::-1]


def _domain_integral(spline: CubicSpline, weight: WeightProfile,
                     inner: float, outer: float) -> float:
    """int_{inner < r < outer} phi v dx with 3-point Gauss per spline cell.

    Cells are clipped at the domain boundaries, so integrals over a
    partition of (0, 1) add up to the full-range integral exactly.
    """
    grid = weight.grid
    nodes = grid.nodes
    n = grid.n
    total = 0.0
    for c in range(nodes.size - 1):
        a = max(float(nodes[c]), inner)
        b = min(float(nodes[c + 1]), outer)
        if b <= a:
            continue
        h = b - a
        t = 0.5 * (a + b) + 0.5 * h * _GAUSS3_X
        w = 0.5 * h * _GAUSS3_W
        vv = np.interp(t, nodes, weight.v)
        total += float(np.sum(w * spline(t) * vv * t ** (n - 1)))
    return total * grid.surface_area


def weighted_averages(phi, weight: WeightProfile, domains):
    """Signed averages m_j = int_{Omega_j} phi v dx / int v dx per domain,
    outermost first, together with their total."""
    phi = np.asarray(phi, dtype=float)
    grid = weight.grid
    spline = CubicSpline(grid.nodes, phi)
    w_total = weight.total
    m = np.array(
        [_domain_integral(spline, weight, inner, outer) / w_total
         for inner, outer, _ in domains]
    )
    return m, float(np.sum(m))


@dataclass
class BoundsSummary:
    max_count_per_index: dict
    violations: list

    @property
    def ok(self) -> bool:
        return not self.violations


def verify_bounds(reports) -> BoundsSummary:
    """Flag any report whose domain count exceeds twice its eigen index."""
    max_count = {}
    violations = []
    for rep in reports:
        k = rep.eigen_index
        max_count[k] = max(max_count.get(k, 0), rep.domain_count)
        if rep.domain_count > 2 * k:
            violations.append(
                f"eigenfunction {k}: {rep.domain_count} domains exceed {2 * k}"
            )
    return BoundsSummary(max_count_per_index=max_count, violations=violations)


def fit_vanishing_order(samples, grid: RadialGrid, r0: float, window: int = 12,
                        residual_threshold: float = 0.1):
    """Least-squares slope of log|u| against log|r - r0| near r0.

    Returns (order, coefficient, fit residual).  Samples below the
    roundoff floor are discarded; fewer than 8 usable nodes or a residual
    above the threshold raise a poor-fit error.
    """
    if window < 8:
        raise ValueError("window must cover at least 8 nodes")
    u = np.asarray(samples, dtype=float)
    nodes = grid.nodes
    dist = np.abs(nodes - r0)
    order_idx = np.argsort(dist)
    picked = [i for i in order_idx if dist[i] > 0.0][:window]
    scale = float(np.max(np.abs(u)))
    vals = u[picked]
    d = dist[picked]
    keep = np.abs(vals) > NOISE_FLOOR * scale
    vals, d = vals[keep], d[keep]
    if vals.size < 8:
        raise PoorFitError(
            f"only {vals.size} usable nodes near r = {r0:.6g}; refine the grid"
        )
    x = np.log(d)
    y = np.log(np.abs(vals))
    beta, intercept = np.polyfit(x, y, 1)
    residual = float(np.sqrt(np.mean((beta * x + intercept - y) ** 2)))
    if residual > residual_threshold:
        raise PoorFitError(
            f"fit residual {residual:.3g} above {residual_threshold:.3g} "
            f"near r = {r0:.6g}"
        )
    return float(beta), float(np.exp(intercept)), residual


def hopf_sign_check(phi, grid: RadialGrid, domains, margin_factor: float = 5.0):
    """Outward one-sided slopes of phi at the boundaries of negative domains.

    Returns (ok, margins): each margin is the outward derivative minus the
    floor margin_factor * h * max|phi''|; all must be positive.
    """
    phi = np.asarray(phi, dtype=float)
    nodes = grid.nodes
    spline = CubicSpline(nodes, phi)
    floor = margin_factor * float(np.max(grid.spacings)) * float(
        np.max(np.abs(spline(nodes, 2)))
    )
    margins = []
    for inner, outer, sign in domains:
        if sign >= 0:
            continue
        if outer < 1.0:
            margins.append(float(spline(outer, 1)) - floor)
        if inner > 0.0:
            margins.append(-float(spline(inner, 1)) - floor)
    return all(m > 0.0 for m in margins), margins


def analyze_eigenfunction(phi, weight: WeightProfile, lam: float, sigma: float,
                          avg: float, eigen_index: int,
                          boundary_slope_factor: float = 10.0,
                          fit_window: int = 12) -> NodalReport:
    """Full nodal report for one computed radial eigenfunction.

    The profile is oriented so its weighted average is positive.  Interior
    classification uses the scale-free tolerances; at r = 1 the slope
    tolerance accounts for the one-sided difference error, which is of
    order h for a discrete eigenfunction.
    """
    phi = np.asarray(phi, dtype=float)
    if avg < 0.0:
        phi, avg = -phi, -avg
    grid = weight.grid
    nodes = grid.nodes
    spline = CubicSpline(nodes, phi)
    zero_tol = _default_zero_tol(phi)
    slope_tol = _default_slope_tol(spline, nodes)
    h_edge = float(nodes[-1] - nodes[-2])
    boundary_slope_tol = boundary_slope_factor * h_edge * max(
        1.0, float(np.max(np.abs(phi)))
    )

    zeros = find_zeros(phi, grid, zero_tol=zero_tol, slope_tol=slope_tol)
    singulars = []
    for z in zeros:
        tol = boundary_slope_tol if abs(z - 1.0) <= 1e-12 else slope_tol
        point = classify_singular(
            phi, weight, lam, sigma, avg, z,
            zero_tol=zero_tol, slope_tol=tol, fit_window=fit_window,
        )
        if point is not None:
            singulars.append(point)

    domains = count_domains(phi, grid, zeros, singulars, zero_tol=zero_tol)
    averages, m_total = weighted_averages(phi, weight, domains)
    _, margins = hopf_sign_check(phi, grid, domains)
    return NodalReport(
        zeros=zeros,
        singular_points=singulars,
        domains=domains,
        averages=averages,
        m_total=m_total,
        eigen_index=eigen_index,
        bound_satisfied=len(domains) <= 2 * eigen_index,
        zero_tol=zero_tol,
        slope_tol=slope_tol,
        hopf_margins=margins,
    )
