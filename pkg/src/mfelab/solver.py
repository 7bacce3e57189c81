"""Radial solver for the constrained problem on the unit ball.

Solves, in radial coordinates,

    -psi'' - ((n-1)/r) psi' = f(alpha + lambda*psi),   psi'(0) = 0, psi(1) = 0,
    integral_{B_1} f(alpha + lambda*psi) dx = 1,

by shooting: a two-unknown Newton iteration on (psi(0), alpha) in free mode,
or on (psi(0), lambda) when alpha is pinned.  The linearization weight
v = f'(alpha + lambda*psi) is derived from a converged solution.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import ConstraintViolationError, ConvergenceError, PositivityError
from .numerics import RadialGrid, edge_slope3, integrate_ivp, weighted_integral

__all__ = [
    "Exponential",
    "Power",
    "Free",
    "Pinned",
    "Positive",
    "Vanishing",
    "MfeProblem",
    "RadialSolution",
    "WeightProfile",
    "solve",
    "build_weight",
]

_NEWTON_MAX_ITER = 60
_CONTINUATION_STEP = 0.1


@dataclass(frozen=True)
class Exponential:
    """f(t) = exp(t)."""

    def value(self, t):
        return np.exp(t)

    def derivative(self, t):
        return np.exp(t)

    def inverse(self, y: float) -> float:
        return math.log(y)


@dataclass(frozen=True)
class Power:
    """f(t) = t^p, evaluated sign-preserving at transient negative t."""

    p: float = 2.0

    def __post_init__(self):
        if self.p < 1.0:
            raise ValueError(f"power exponent must be >= 1, got {self.p}")

    def value(self, t):
        return np.sign(t) * np.abs(t) ** self.p

    def derivative(self, t):
        return self.p * np.abs(t) ** (self.p - 1.0)

    def inverse(self, y: float) -> float:
        return y ** (1.0 / self.p)


@dataclass(frozen=True)
class Free:
    """alpha is an unknown of the problem."""


@dataclass(frozen=True)
class Pinned:
    """alpha is fixed; the coupling becomes the second unknown."""

    value: float = 0.0


@dataclass(frozen=True)
class Positive:
    """Weight bounded away from zero up to the boundary."""


@dataclass(frozen=True)
class Vanishing:
    """Weight vanishing at r = 1 like v0 * (1-r)^beta."""

    beta: float
    v0: float


@dataclass(frozen=True)
class MfeProblem:
    n: int
    lam: float
    nonlinearity: Exponential | Power = field(default_factory=Exponential)
    alpha_mode: Free | Pinned = field(default_factory=Free)

    def __post_init__(self):
        if self.n < 2:
            raise ValueError(f"dimension must be >= 2, got {self.n}")
        if self.lam < 0.0:
            raise ValueError(f"coupling must be >= 0, got {self.lam}")
        if (
            isinstance(self.alpha_mode, Pinned)
            and self.alpha_mode.value == 0.0
            and not isinstance(self.nonlinearity, Power)
        ):
            raise ValueError("pinned alpha = 0 requires the power nonlinearity")


@dataclass
class RadialSolution:
    """A converged pair (alpha, psi) with its residuals.

    `lambda_effective` equals the problem coupling in free mode and the
    solved-for coupling in pinned mode.  `history` records the Newton
    continuation path (lambda, iterations, residuals) per stage.
    """

    grid: RadialGrid
    psi: np.ndarray
    alpha: float
    lambda_effective: float
    residual_boundary: float
    residual_mass: float
    history: list = field(default_factory=list)

    def psi_slope_origin(self) -> float:
        return edge_slope3(self.psi, self.grid.nodes, side="left")


@dataclass
class WeightProfile:
    grid: RadialGrid
    v: np.ndarray
    boundary_class: Positive | Vanishing

    def __post_init__(self):
        v = np.ascontiguousarray(self.v, dtype=float)
        if v.shape != self.grid.nodes.shape:
            raise ValueError("weight samples do not match the grid")
        if np.any(v < 0.0):
            raise ValueError("weight must be nonnegative")
        if np.any(v[1:-1] <= 0.0):
            raise ValueError("weight must be positive at interior nodes")
        if isinstance(self.boundary_class, Positive) and v[-1] <= 0.0:
            raise ValueError("positive boundary class requires v(1) > 0")
        if isinstance(self.boundary_class, Vanishing) and v[-1] != 0.0:
            raise ValueError("vanishing boundary class requires v(1) = 0")
        v.setflags(write=False)
        self.v = v

    @property
    def total(self) -> float:
        return weighted_integral(self.v, self.grid)


def _make_field(f, n, alpha, lam):
    n1 = n - 1.0

    def field_fn(r, y):
        psi, dpsi = y
        source = f.value(alpha + lam * psi)
        if r == 0.0:
            # (n-1)/r * psi' -> (n-1) psi''(0); the full row collapses to
            # psi''(0) = -f/n.
            return np.array([dpsi, -source / n])
        return np.array([dpsi, -source - n1 * dpsi / r])

    return field_fn


def _shoot(problem, grid, alpha, lam, c):
    f = problem.nonlinearity
    traj = integrate_ivp(_make_field(f, problem.n, alpha, lam), [c, 0.0], grid)
    psi = traj[:, 0]
    mass = weighted_integral(f.value(alpha + lam * psi), grid) - 1.0
    return psi, np.array([psi[-1], mass])


def _newton(residual_fn, x0, tol):
    """Damped two-variable Newton with central-difference Jacobian."""
    x = np.array(x0, dtype=float)
    res = residual_fn(x)
    best = float(np.max(np.abs(res)))
    for iteration in range(_NEWTON_MAX_ITER):
        if best <= tol:
            return x, res, iteration
        jac = np.empty((2, 2))
        for j in range(2):
            step = math.sqrt(np.finfo(float).eps) * max(1.0, abs(x[j]))
            xp = x.copy()
            xm = x.copy()
            xp[j] += step
            xm[j] -= step
            jac[:, j] = (residual_fn(xp) - residual_fn(xm)) / (2.0 * step)
        try:
            delta = np.linalg.solve(jac, -res)
        except np.linalg.LinAlgError as exc:
            raise ConvergenceError(
                "singular Newton system", residuals=tuple(res)
            ) from exc
        scale = 1.0
        for _ in range(10):
            trial = x + scale * delta
            trial_res = residual_fn(trial)
            trial_norm = float(np.max(np.abs(trial_res)))
            if np.isfinite(trial_norm) and trial_norm < best:
                x, res, best = trial, trial_res, trial_norm
                break
            scale *= 0.5
        else:
            raise ConvergenceError(
                f"Newton stagnated at residuals {tuple(res)}", residuals=tuple(res)
            )
    raise ConvergenceError(
        f"no convergence after {_NEWTON_MAX_ITER} iterations, residuals {tuple(res)}",
        residuals=tuple(res),
    )


def _solve_free_at(problem, grid, lam, tol, x0):
    def residual(x):
        _, res = _shoot(problem, grid, alpha=x[1], lam=lam, c=x[0])
        return res

    return _newton(residual, x0, tol)


def _pinned_seed(problem, grid):
    """Moment-matched seed for the pinned mode.

    Matches the parabolic profile c*(1-r^2) at the center and in total
    mass; exact structure only for alpha = 0, but an adequate Newton
    seed nearby.
    """
    f = problem.nonlinearity
    alpha = problem.alpha_mode.value
    r = grid.nodes
    if isinstance(f, Power):
        shape_mass = weighted_integral((1.0 - r**2) ** f.p, grid)
        q = 1.0 / shape_mass
        c = q / (2.0 * problem.n)
        lam = f.inverse(q) / c if alpha == 0.0 else max(f.inverse(q) - alpha, 0.1) / c
        return np.array([c, lam])
    c = 1.0 / (2.0 * problem.n * grid.ball_volume)
    return np.array([c, 1.0])


def solve(problem: MfeProblem, grid: RadialGrid, tol: float) -> RadialSolution:
    """Solve the constrained problem on the grid to the given tolerance.

    Free mode starts from the closed form at lambda = 0 and continues in
    steps of 0.1 up to the requested coupling; the branch reached this way
    is the one reported.  Pinned mode solves for (psi(0), lambda) directly.
    """
    if not (1e-12 <= tol <= 1e-4):
        raise ValueError(f"tolerance must lie in [1e-12, 1e-4], got {tol}")
    f = problem.nonlinearity
    history = []

    if isinstance(problem.alpha_mode, Free):
        alpha0 = f.inverse(1.0 / grid.ball_volume)
        x = np.array([f.value(alpha0) / (2.0 * problem.n), alpha0])
        stages = [0.0]
        k = 1
        while k * _CONTINUATION_STEP < problem.lam - 1e-12:
            stages.append(k * _CONTINUATION_STEP)
            k += 1
        if problem.lam > 0.0:
            stages.append(problem.lam)
        for lam in stages:
            x, res, iters = _solve_free_at(problem, grid, lam, tol, x)
            history.append((lam, iters, (float(res[0]), float(res[1]))))
        c, alpha = x
        lam_eff = problem.lam
    else:
        alpha = problem.alpha_mode.value

        def residual(x):
            _, res = _shoot(problem, grid, alpha=alpha, lam=x[1], c=x[0])
            return res

        x, res, iters = _newton(residual, _pinned_seed(problem, grid), tol)
        c, lam_eff = x
        history.append((lam_eff, iters, (float(res[0]), float(res[1]))))

    psi, res = _shoot(problem, grid, alpha=alpha, lam=lam_eff, c=c)
    residual_boundary, residual_mass = float(res[0]), float(res[1])

    if np.any(psi[1:-1] <= 0.0):
        raise PositivityError("psi is not positive at all interior nodes")
    if isinstance(f, Power):
        if isinstance(problem.alpha_mode, Free) and alpha <= 0.0:
            raise ConstraintViolationError(
                f"power nonlinearity requires alpha > 0, converged to {alpha:.6g}"
            )
        # the sign-preserving extension of t^p is for transient iterates only
        if float(np.min(alpha + lam_eff * psi)) < -10.0 * tol:
            raise ConstraintViolationError("power argument negative at convergence")

    psi = psi.copy()
    psi[-1] = 0.0
    if np.any(np.diff(psi) > 1e-12 * max(psi[0], 1.0)):
        raise ConstraintViolationError("psi is not non-increasing in r")
    solution = RadialSolution(
        grid=grid,
        psi=psi,
        alpha=float(alpha),
        lambda_effective=float(lam_eff),
        residual_boundary=residual_boundary,
        residual_mass=residual_mass,
        history=history,
    )
    if abs(solution.psi_slope_origin()) > 1e-6:
        raise ConvergenceError(
            f"psi'(0) = {solution.psi_slope_origin():.3g} exceeds 1e-6"
        )
    return solution


def build_weight(problem: MfeProblem, sol: RadialSolution) -> WeightProfile:
    """Linearization weight v = f'(alpha + lambda*psi) with its boundary class.

    For pinned alpha = 0 with p > 1 the weight vanishes at r = 1 with order
    beta = p - 1 and amplitude v0 = p (lambda |psi'(1)|)^{p-1}; the boundary
    slope |psi'(1)| = 1/|S^{n-1}| follows exactly from the unit-mass
    constraint and the divergence theorem.
    """
    f = problem.nonlinearity
    lam = sol.lambda_effective
    v = np.asarray(f.derivative(sol.alpha + lam * sol.psi), dtype=float)
    pinned_zero = (
        isinstance(problem.alpha_mode, Pinned) and problem.alpha_mode.value == 0.0
    )
    if pinned_zero and isinstance(f, Power) and f.p > 1.0:
        slope = 1.0 / sol.grid.surface_area
        v0 = f.p * (lam * slope) ** (f.p - 1.0)
        v = v.copy()
        v[-1] = 0.0
        return WeightProfile(sol.grid, v, Vanishing(beta=f.p - 1.0, v0=float(v0)))
    return WeightProfile(sol.grid, v, Positive())
