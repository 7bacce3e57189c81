"""The degenerate case: weight vanishing at the boundary.

Pinning alpha = 0 with the power nonlinearity f(t) = t^p makes the
linearization weight V = p (lambda psi)^{p-1} vanish at r = 1 with order
beta = p - 1, since psi falls off linearly there.  Eigenfunctions then
leave the boundary with order beta + 2 instead of the quadratic touch of
the positive-weight case.  Both orders are recovered here by log-log
fits on a boundary-refined grid.

Run:  python3 demos/05_degenerate_boundary.py
"""

import math
from pathlib import Path

import numpy as np

from mfelab import (
    MfeProblem,
    Pinned,
    Power,
    RadialGrid,
    build_weight,
    fit_vanishing_order,
    solve,
    solve_modes,
)

p = 2.0
grid = RadialGrid.graded(1537, 2, strength=2.0)
problem = MfeProblem(n=2, lam=0.0, nonlinearity=Power(p), alpha_mode=Pinned(0.0))
sol = solve(problem, grid, tol=1e-10)
weight = build_weight(problem, sol)

print(f"pinned alpha = 0, p = {p}")
print(f"solved coupling lambda = {sol.lambda_effective:.8f}")
print(f"center value psi(0) = {sol.psi[0]:.8f}")
print(f"boundary slope from the mass constraint: |psi'(1)| = 1/(2 pi) = "
      f"{1 / (2 * math.pi):.8f}")
bc = weight.boundary_class
print(f"weight boundary model: v0 (1-r)^beta with beta = {bc.beta}, "
      f"v0 = {bc.v0:.8f}")

beta_fit, coeff, resid = fit_vanishing_order(weight.v, grid, 1.0, window=256)
print(f"\nfitted weight order:        {beta_fit:.4f}  (model beta = {bc.beta})")
print(f"fitted weight amplitude:    {coeff:.4f}  (model v0 = {bc.v0:.4f})")

spectrum = solve_modes(weight, sol.lambda_effective, [0], count=2)[0]
phi = spectrum.eigenfunctions[0]
order, amp, _ = fit_vanishing_order(phi, grid, 1.0, window=256)
print(f"fitted eigenfunction order: {order:.4f}  (expected beta + 2 = "
      f"{bc.beta + 2})")
print(f"first eigenvalue sigma_1 = {spectrum.sigmas[0]:.6f}, "
      f"average <phi_1> = {spectrum.averages[0]:.6f}")

try:
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt
except ImportError:
    print("matplotlib not installed; skipping the figure")
else:
    dist = 1.0 - grid.nodes[:-1]
    fig, ax = plt.subplots(figsize=(6, 4.5))
    keep = dist < 0.1
    ax.loglog(dist[keep], np.abs(weight.v[:-1][keep]), label="weight V")
    ax.loglog(dist[keep], np.abs(phi[:-1][keep]), label="eigenfunction")
    ax.loglog(dist[keep], bc.v0 * dist[keep] ** bc.beta, "k--", lw=0.8,
              label=f"slope {bc.beta:.0f}")
    ax.loglog(dist[keep], amp * dist[keep] ** (bc.beta + 2), "k:", lw=0.8,
              label=f"slope {bc.beta + 2:.0f}")
    ax.set_xlabel("1 - r")
    ax.set_ylabel("magnitude")
    ax.set_title("vanishing orders at the boundary")
    ax.legend()
    ax.grid(alpha=0.3, which="both")
    fig.tight_layout()
    target = Path(__file__).with_name("degenerate_boundary.png")
    fig.savefig(target, dpi=120)
    print(f"wrote {target}")
