"""Finite-dimensional certificates behind the nodal domain bounds.

Signed alternating averages m with positive total generate the matrix
A = -m_total diag(m) + m m^T.  Three or more domains force a negative
eigenvalue of A, which is what contradicts minimality and caps the
domain count.  The witness is eigensolver-independent: a leading
principal minor of the reduced companion matrix, evaluated through the
determinant lemma, comes out non-positive, so the Sylvester criterion
rules out positive definiteness.  Interlacing with the rank-one update
K1 = m m^T refines the count of negative eigenvalues.

Run:  python3 demos/04_matrix_certificates.py
"""

import numpy as np

from mfelab import (
    AverageVector,
    build_A,
    build_B_reduced,
    closed_form_minor,
    inertia_of,
    interlacing_check,
    leading_minors,
    negative_eigenvalue_certificate,
    random_average_vector,
)
from mfelab.numerics import sym_eigen

examples = [
    [5.0, -3.0, 5.0, -3.0],
    [5.0, -3.0, 5.0, -3.0, 5.0],
    [5.0, -3.0, 5.0, -3.0, 5.0, -3.0],
    [5.0, -3.0, 5.0, -3.0, 5.0, -3.0, 5.0],
]

print("reference spectra for alternating averages:")
for m in examples:
    avg = AverageVector(np.array(m))
    values = sym_eigen(build_A(avg)).values[::-1]
    pretty = ", ".join(f"{v:.0f}" for v in values)
    print(f"  m = {m}: eigenvalues {pretty}, inertia {inertia_of(build_A(avg))}")

avg = AverageVector(np.array(examples[0]))
print("\nleading principal minors of the reduced companion (N = 4):")
minors = leading_minors(build_B_reduced(avg))
for j, direct in enumerate(minors, start=1):
    closed = closed_form_minor(avg, j)
    print(f"  j = {j}: direct {direct:+.6f}   closed form {closed:+.6f}")

print("\nSylvester witnesses for a few cases:")
for m in ([5.0, -3.0, 1.0], examples[0], examples[1], examples[3]):
    avg = AverageVector(np.array(m))
    cert = negative_eigenvalue_certificate(avg)
    print(
        f"  N = {avg.size} (mod 4 = {cert.case_mod4}): most negative "
        f"{cert.most_negative:+.4f}, witness minor {cert.witness_index} = "
        f"{cert.witness_minor:+.4f}"
    )

print("\nrandomized sweeps (seeded):")
rng = np.random.default_rng(123)
trials = 400
found = 0
interlaced = 0
for _ in range(trials):
    n = int(rng.integers(3, 13))
    avg = random_average_vector(n, rng)
    cert = negative_eigenvalue_certificate(avg)
    found += int(cert.negative_found and cert.witness_minor <= 0)
    K0 = -avg.m_total * np.diag(avg.m)
    interlaced += int(interlacing_check(K0, avg.m).holds)
print(f"  negative eigenvalue + witness: {found}/{trials}")
print(f"  both interlacing chains:       {interlaced}/{trials}")

avg = random_average_vector(8, rng)
K0 = -avg.m_total * np.diag(avg.m)
report = interlacing_check(K0, avg.m)
print("\none interlacing instance in full (N = 8):")
print("  base:    " + "  ".join(f"{v:+8.3f}" for v in report.base_values))
print("  updated: " + "  ".join(f"{v:+8.3f}" for v in report.updated_values))
print(f"  holds: {report.holds} (max violation {report.max_violation:.2e})")
