"""Finite-dimensional certificates built from signed domain averages.

Given alternating averages m with positive total, the quadratic form
Q(a) = sum m_i m_j a_i a_j - m_total * sum m_j a_j^2 has matrix

    A = -m_total * diag(m) + m m^T,

whose lack of positive semidefiniteness (for 3 or more domains) is what
rules out extra nodal domains.  This module builds A, its congruent
companion B and the reduced B_{N-1}, evaluates the determinant-lemma
closed forms and Sylvester leading minors, computes inertia triples, and
checks the rank-one interlacing chains.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .numerics import SymMatrix, sym_eigen

__all__ = [
    "AverageVector",
    "InertiaReport",
    "build_A",
    "build_B",
    "build_B_reduced",
    "det_via_mdl",
    "closed_form_minor",
    "leading_minors",
    "inertia_of",
    "zero_threshold",
    "interlacing_check",
    "negative_eigenvalue_certificate",
    "random_average_vector",
    "make_report",
    "InterlacingReport",
    "CertificateReport",
]


@dataclass(frozen=True)
class AverageVector:
    """Signed domain averages: alternating, starting positive, positive sum."""

    m: np.ndarray

    def __post_init__(self):
        m = np.ascontiguousarray(self.m, dtype=float)
        if m.ndim != 1 or m.size < 2:
            raise ValueError("need at least 2 averages")
        if np.any(m == 0.0):
            raise ValueError("averages must be nonzero")
        expected = (-1.0) ** np.arange(m.size)
        if np.any(np.sign(m) != expected):
            raise ValueError("averages must alternate in sign starting positive")
        if m.sum() <= 0.0:
            raise ValueError("total average must be positive")
        m.setflags(write=False)
        object.__setattr__(self, "m", m)

    @property
    def m_total(self) -> float:
        return float(self.m.sum())

    @property
    def size(self) -> int:
        return self.m.size


def build_A(avg: AverageVector) -> SymMatrix:
    """A = -m_total diag(m) + m m^T; kernel is the all-ones direction."""
    m = avg.m
    return SymMatrix(-avg.m_total * np.diag(m) + np.outer(m, m))


def build_B(avg: AverageVector) -> SymMatrix:
    """Congruent companion -m_total diag(1/m) + ones; kernel spanned by m."""
    m = avg.m
    return SymMatrix(-avg.m_total * np.diag(1.0 / m) + np.ones((m.size, m.size)))


def build_B_reduced(avg: AverageVector) -> SymMatrix:
    """Restriction of B to the first N-1 coordinates."""
    m = avg.m[:-1]
    return SymMatrix(
        -avg.m_total * np.diag(1.0 / m) + np.ones((m.size, m.size))
    )


def det_via_mdl(diag_vals, v) -> float:
    """det(diag + v v^T) = (1 + v^T diag^{-1} v) * prod(diag)."""
    d = np.asarray(diag_vals, dtype=float)
    v = np.asarray(v, dtype=float)
    if d.shape != v.shape:
        raise ValueError("diagonal and vector lengths differ")
    if np.any(d == 0.0):
        raise ValueError("diagonal entries must be nonzero")
    return float((1.0 + np.sum(v * v / d)) * np.prod(d))


def closed_form_minor(avg: AverageVector, j: int) -> float:
    """Closed form of the j-th leading principal minor of B_{N-1}:

        det B^{(j)} = (-1)^j m_total^{j-1} (m_{j+1} + ... + m_N) / (m_1 ... m_j)

    valid for 0 <= j <= N-1; j = 0 gives the empty determinant 1.
    """
    if not 0 <= j <= avg.size - 1:
        raise ValueError(f"minor index {j} out of range for N = {avg.size}")
    m = avg.m
    tail = float(np.sum(m[j:]))
    return float((-1.0) ** j * avg.m_total ** (j - 1) * tail / np.prod(m[:j]))


def leading_minors(M) -> np.ndarray:
    """Determinants of the upper-left j-by-j corners, j = 1..order."""
    entries = M.entries if isinstance(M, SymMatrix) else np.asarray(M, dtype=float)
    order = entries.shape[0]
    return np.array(
        [np.linalg.det(entries[: j + 1, : j + 1]) for j in range(order)]
    )


def zero_threshold(values: np.ndarray) -> float:
    return 1e-9 * float(np.max(np.abs(values))) if values.size else 0.0


def inertia_of(M):
    """(n_minus, n_zero, n_plus) with zeros below 1e-9 of the norm."""
    values = sym_eigen(M).values
    tau = zero_threshold(values)
    n_minus = int(np.sum(values < -tau))
    n_plus = int(np.sum(values > tau))
    return (n_minus, values.size - n_minus - n_plus, n_plus)


@dataclass
class InertiaReport:
    matrix_kind: str
    order: int
    eigenvalues: np.ndarray
    minors: np.ndarray | None
    inertia: tuple
    kernel_basis: np.ndarray | None


def make_report(M, kind: str) -> InertiaReport:
    if kind not in {"A", "B", "B_reduced", "K0", "K0_plus_K1"}:
        raise ValueError(f"unknown matrix kind {kind!r}")
    dec = sym_eigen(M)
    tau = zero_threshold(dec.values)
    n_minus = int(np.sum(dec.values < -tau))
    n_plus = int(np.sum(dec.values > tau))
    n_zero = dec.values.size - n_minus - n_plus
    kernel = None
    if n_zero >= 1:
        idx = int(np.argmin(np.abs(dec.values)))
        kernel = dec.vectors[:, idx].copy()
    minors = leading_minors(M) if kind == "B_reduced" else None
    return InertiaReport(
        matrix_kind=kind,
        order=dec.values.size,
        eigenvalues=dec.values,
        minors=minors,
        inertia=(n_minus, n_zero, n_plus),
        kernel_basis=kernel,
    )


@dataclass
class InterlacingReport:
    holds: bool
    max_violation: float
    base_values: np.ndarray
    updated_values: np.ndarray


def interlacing_check(K0, v) -> InterlacingReport:
    """Verify both rank-one interlacing chains, ascending ordering:

        lam_j(K0 + vv^T) <= lam_{j+1}(K0) <= lam_{j+2}(K0 + vv^T)
        lam_j(K0)        <= lam_{j+1}(K0 + vv^T) <= lam_{j+2}(K0)

    for 1 <= j <= N-2, within the zero threshold as slack.
    """
    base = K0.entries if isinstance(K0, SymMatrix) else np.asarray(K0, dtype=float)
    v = np.asarray(v, dtype=float)
    lam0 = sym_eigen(SymMatrix(base)).values
    lam1 = sym_eigen(SymMatrix(base + np.outer(v, v))).values
    tau = max(zero_threshold(lam0), zero_threshold(lam1))
    worst = 0.0
    npts = lam0.size
    for j in range(npts - 2):
        worst = max(
            worst,
            lam1[j] - lam0[j + 1],
            lam0[j + 1] - lam1[j + 2],
            lam0[j] - lam1[j + 1],
            lam1[j + 1] - lam0[j + 2],
        )
    return InterlacingReport(
        holds=worst <= tau,
        max_violation=float(worst),
        base_values=lam0,
        updated_values=lam1,
    )


@dataclass
class CertificateReport:
    most_negative: float
    negative_found: bool
    case_mod4: int
    witness_index: int
    witness_minor: float
    candidate_minors: dict


def _witness_candidates(n: int) -> list:
    # Sylvester contradiction indices per the residue of N mod 4.
    residue = n % 4
    if residue in (0, 3):
        return [n - 1]
    if residue == 1:
        return [n - 2, n - 3]
    return [n - 3, n - 4]


def negative_eigenvalue_certificate(avg: AverageVector) -> CertificateReport:
    """Most negative eigenvalue of A plus an eigensolver-independent witness.

    The witness is a leading principal minor of B_{N-1}, evaluated through
    its closed form, that is non-positive, so by the Sylvester criterion
    B_{N-1} (hence A) cannot be positive semidefinite.  Defined for
    N >= 3; a two-domain configuration carries no negative eigenvalue.
    """
    if avg.size <= 2:
        raise ValueError("the certificate starts at N = 3")
    values = sym_eigen(build_A(avg)).values
    tau = zero_threshold(values)
    candidates = {j: closed_form_minor(avg, j) for j in _witness_candidates(avg.size)}
    witness = next((j for j, d in candidates.items() if d <= 0.0), None)
    if witness is None:
        raise ArithmeticError(
            f"no non-positive candidate minor for m = {avg.m.tolist()}"
        )
    return CertificateReport(
        most_negative=float(values[0]),
        negative_found=bool(values[0] < -tau),
        case_mod4=avg.size % 4,
        witness_index=witness,
        witness_minor=candidates[witness],
        candidate_minors=candidates,
    )


def random_average_vector(n: int, rng: np.random.Generator) -> AverageVector:
    """Alternating magnitudes uniform in [0.5, 5], resampled until the
    total is positive."""
    signs = (-1.0) ** np.arange(n)
    while True:
        m = signs * rng.uniform(0.5, 5.0, size=n)
        if m.sum() > 0.0:
            return AverageVector(m)
