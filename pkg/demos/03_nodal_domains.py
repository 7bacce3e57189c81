"""Generalized nodal domains of the radial eigenfunctions.

Radial eigenfunctions vanish with zero slope at r = 1, so the boundary
zero is a touching (singular) point rather than a crossing, and nodal
sets are spheres and solid shells.  The k-th radial eigenfunction may
have at most 2k generalized nodal domains; in practice one sees k.  Per
domain, the signed weighted averages m_j alternate starting from the
outermost shell and sum to the eigenfunction's weighted average.

Run:  python3 demos/03_nodal_domains.py
"""

from pathlib import Path

import numpy as np

from mfelab import (
    Free,
    MfeProblem,
    Power,
    RadialGrid,
    analyze_eigenfunction,
    build_weight,
    solve,
    solve_modes,
    verify_bounds,
)

lam = 0.5
grid = RadialGrid.uniform(512, 2)
problem = MfeProblem(n=2, lam=lam, nonlinearity=Power(2.0), alpha_mode=Free())
sol = solve(problem, grid, tol=1e-12)
weight = build_weight(problem, sol)
s0 = solve_modes(weight, lam, [0], count=4)[0]

reports = []
for i in range(4):
    rep = analyze_eigenfunction(
        s0.eigenfunctions[i], weight, lam, float(s0.sigmas[i]),
        float(s0.averages[i]), eigen_index=i + 1,
    )
    reports.append(rep)
    print(f"eigenfunction {i + 1} (sigma = {s0.sigmas[i]:.4f}):")
    print(f"  zeros: {[f'{z:.4f}' for z in rep.zeros]}")
    print(f"  singular points: "
          f"{[f'{p.radius:.4f}' for p in rep.singular_points]}")
    shells = ", ".join(
        f"({a:.4f},{b:.4f}){'+' if s > 0 else '-'}" for a, b, s in rep.domains
    )
    print(f"  domains (outermost first): {shells}")
    print(f"  m_j = {np.array2string(rep.averages, precision=5)}  "
          f"sum {rep.m_total:.6f} vs <phi> {s0.averages[i]:.6f}")
    print(f"  count {rep.domain_count} <= bound {2 * (i + 1)}: "
          f"{rep.bound_satisfied}")
    if rep.hopf_margins:
        print(f"  outward-slope margins on negative shells: "
              f"{[f'{m:.3f}' for m in rep.hopf_margins]}")

summary = verify_bounds(reports)
print(f"\nbound summary: max observed count per index "
      f"{summary.max_count_per_index}, violations: "
      f"{summary.violations or 'none'}")

try:
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt
except ImportError:
    print("matplotlib not installed; skipping the figure")
else:
    fig, ax = plt.subplots(figsize=(7, 4.5))
    offsets = np.arange(4) * 1.0
    for i, rep in enumerate(reports):
        phi = s0.eigenfunctions[i]
        scaled = phi / np.max(np.abs(phi)) * 0.45
        ax.plot(grid.nodes, scaled + offsets[i], lw=1.2)
        ax.axhline(offsets[i], color="k", lw=0.4, alpha=0.5)
        for z in rep.zeros:
            ax.plot([z], [offsets[i]], "k.", ms=5)
    ax.set_yticks(offsets, [f"k={i + 1}" for i in range(4)])
    ax.set_xlabel("r")
    ax.set_title("radial eigenfunctions with their nodal radii")
    fig.tight_layout()
    target = Path(__file__).with_name("nodal_domains.png")
    fig.savefig(target, dpi=120)
    print(f"wrote {target}")
