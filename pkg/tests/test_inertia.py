import numpy as np
import pytest

from mfelab import (
    AverageVector,
    build_A,
    build_B,
    build_B_reduced,
    closed_form_minor,
    det_via_mdl,
    inertia_of,
    interlacing_check,
    leading_minors,
    negative_eigenvalue_certificate,
    random_average_vector,
)
from mfelab.inertia import make_report
from mfelab.numerics import sym_eigen

GOLDEN = [
    ([5.0, -3.0, 5.0, -3.0], [60.0, 12.0, 0.0, -20.0]),
    ([5.0, -3.0, 5.0, -3.0, 5.0], [75.0, 27.0, 0.0, -45.0, -45.0]),
    ([5.0, -3.0, 5.0, -3.0, 5.0, -3.0], [90.0, 18.0, 18.0, 0.0, -30.0, -30.0]),
    ([5.0, -3.0, 5.0, -3.0, 5.0, -3.0, 5.0],
     [105.0, 33.0, 33.0, 0.0, -55.0, -55.0, -55.0]),
]


class TestAverageVector:
    def test_rejects_zero_entry(self):
        with pytest.raises(ValueError):
            AverageVector(np.array([1.0, 0.0, 1.0]))

    def test_rejects_wrong_alternation(self):
        with pytest.raises(ValueError):
            AverageVector(np.array([-1.0, 1.0]))
        with pytest.raises(ValueError):
            AverageVector(np.array([1.0, 1.0]))

    def test_rejects_nonpositive_total(self):
        with pytest.raises(ValueError):
            AverageVector(np.array([1.0, -2.0]))

    def test_total(self):
        avg = AverageVector(np.array([2.0, -1.0]))
        assert avg.m_total == 1.0


class TestBuildA:
    @pytest.mark.parametrize("m,expected", GOLDEN)
    def test_golden_spectra(self, m, expected):
        values = sym_eigen(build_A(AverageVector(np.array(m)))).values
        assert np.max(np.abs(values - np.sort(expected))) < 1e-8

    def test_two_domain_case(self):
        avg = AverageVector(np.array([2.0, -1.0]))
        values = sym_eigen(build_A(avg)).values
        # eigenvalues 0 and -2 m1 m2 = 4
        assert np.allclose(values, [0.0, 4.0], atol=1e-12)

    def test_all_ones_kernel(self):
        rng = np.random.default_rng(21)
        for n in range(2, 10):
            avg = random_average_vector(n, rng)
            A = build_A(avg)
            assert np.max(np.abs(A.entries @ np.ones(n))) < 1e-10 * np.max(
                np.abs(A.entries)
            )

    def test_rank_deficiency_is_one(self):
        rng = np.random.default_rng(22)
        for n in range(3, 11):
            avg = random_average_vector(n, rng)
            values = sym_eigen(build_A(avg)).values
            tau = 1e-9 * np.max(np.abs(values))
            assert int(np.sum(np.abs(values) <= tau)) == 1

    def test_quadratic_form_identity(self):
        rng = np.random.default_rng(23)
        for _ in range(20):
            n = int(rng.integers(2, 10))
            avg = random_average_vector(n, rng)
            a = rng.normal(size=n)
            m = avg.m
            direct = float(
                np.sum(np.outer(m, m) * np.outer(a, a))
                - avg.m_total * np.sum(m * a * a)
            )
            assert float(a @ build_A(avg).entries @ a) == pytest.approx(
                direct, abs=1e-10 * max(1.0, abs(direct))
            )


class TestBuildB:
    def test_kernel_is_m(self):
        rng = np.random.default_rng(24)
        for n in range(2, 10):
            avg = random_average_vector(n, rng)
            B = build_B(avg)
            assert np.max(np.abs(B.entries @ avg.m)) < 1e-10 * np.max(
                np.abs(B.entries)
            )

    def test_same_inertia_as_A(self):
        # congruent matrices share inertia (not eigenvalues)
        rng = np.random.default_rng(25)
        for _ in range(25):
            n = int(rng.integers(2, 11))
            avg = random_average_vector(n, rng)
            assert inertia_of(build_A(avg)) == inertia_of(build_B(avg))

    def test_reduced_determinant_example(self):
        avg = AverageVector(np.array([5.0, -3.0, 5.0, -3.0]))
        det = float(np.linalg.det(build_B_reduced(avg).entries))
        assert det == pytest.approx(-0.64, abs=1e-12)
        assert closed_form_minor(avg, 3) == pytest.approx(-0.64, abs=1e-12)

    def test_reduced_never_singular(self):
        rng = np.random.default_rng(26)
        for _ in range(50):
            n = int(rng.integers(3, 11))
            avg = random_average_vector(n, rng)
            values = sym_eigen(build_B_reduced(avg)).values
            assert np.min(np.abs(values)) > 1e-9 * np.max(np.abs(values))


class TestDetViaMdl:
    def test_identity(self):
        assert det_via_mdl([1.0, 1.0, 1.0], [0.0, 0.0, 0.0]) == 1.0

    def test_two_by_two(self):
        # oracle: direct determinant of [[3, 1], [1, 4]]
        assert det_via_mdl([2.0, 3.0], [1.0, 1.0]) == pytest.approx(11.0)

    def test_zero_diagonal_rejected(self):
        with pytest.raises(ValueError):
            det_via_mdl([1.0, 0.0], [1.0, 1.0])

    def test_reduced_chain_against_direct(self):
        rng = np.random.default_rng(27)
        for _ in range(50):
            n = int(rng.integers(3, 11))
            avg = random_average_vector(n, rng)
            diag = -avg.m_total / avg.m[:-1]
            via_lemma = det_via_mdl(diag, np.ones(n - 1))
            direct = float(np.linalg.det(build_B_reduced(avg).entries))
            assert via_lemma == pytest.approx(direct, rel=1e-8)
            assert closed_form_minor(avg, n - 1) == pytest.approx(direct, rel=1e-8)


class TestLeadingMinors:
    def test_identity(self):
        assert np.allclose(leading_minors(np.eye(3)), [1.0, 1.0, 1.0])

    def test_indefinite_diagonal(self):
        assert np.allclose(
            leading_minors(np.diag([1.0, -1.0, 1.0])), [1.0, -1.0, -1.0]
        )

    def test_closed_forms_match_direct(self):
        rng = np.random.default_rng(28)
        for n in range(4, 11):
            for _ in range(20):
                avg = random_average_vector(n, rng)
                minors = leading_minors(build_B_reduced(avg))
                for j in range(max(1, n - 4), n):
                    assert closed_form_minor(avg, j) == pytest.approx(
                        float(minors[j - 1]), rel=1e-8
                    )


class TestInertia:
    def test_diagonal_core_inertia(self):
        rng = np.random.default_rng(29)
        for n in range(2, 13):
            avg = random_average_vector(n, rng)
            K0 = -avg.m_total * np.diag(avg.m)
            n_minus, n_zero, n_plus = inertia_of(K0)
            assert n_minus == (n + 1) // 2
            assert n_zero == 0
            assert n_plus == n // 2

    def test_six_domain_example(self):
        avg = AverageVector(np.array([5.0, -3.0, 5.0, -3.0, 5.0, -3.0]))
        assert inertia_of(build_A(avg)) == (2, 1, 3)

    def test_seven_domain_example(self):
        avg = AverageVector(np.array([5.0, -3.0, 5.0, -3.0, 5.0, -3.0, 5.0]))
        assert inertia_of(build_A(avg)) == (3, 1, 3)

    def test_report_kernel_vector(self):
        avg = AverageVector(np.array([5.0, -3.0, 5.0, -3.0]))
        report = make_report(build_A(avg), "A")
        assert report.inertia == (1, 1, 2)
        kernel = report.kernel_basis
        kernel = kernel / kernel[0]
        assert np.allclose(kernel, np.ones(4), atol=1e-8)
        assert report.minors is None
        reduced = make_report(build_B_reduced(avg), "B_reduced")
        assert reduced.minors is not None


class TestInterlacing:
    def test_zero_update_trivial(self):
        report = interlacing_check(np.diag([1.0, 2.0, 3.0]), np.zeros(3))
        assert report.holds
        assert np.allclose(report.base_values, report.updated_values)

    def test_small_example_against_eigensolve(self):
        K0 = np.diag([1.0, 2.0, 3.0])
        v = np.ones(3)
        report = interlacing_check(K0, v)
        assert report.holds
        oracle = sym_eigen(K0 + np.outer(v, v)).values
        assert np.allclose(report.updated_values, oracle)

    def test_random_average_pairs(self):
        rng = np.random.default_rng(30)
        for _ in range(100):
            n = int(rng.integers(3, 13))
            avg = random_average_vector(n, rng)
            K0 = -avg.m_total * np.diag(avg.m)
            assert interlacing_check(K0, avg.m).holds


class TestCertificate:
    def test_three_domain_product_identity(self):
        avg = AverageVector(np.array([5.0, -3.0, 1.0]))
        report = negative_eigenvalue_certificate(avg)
        assert report.negative_found
        values = sym_eigen(build_A(avg)).values
        tau = 1e-9 * np.max(np.abs(values))
        nonzero = values[np.abs(values) > tau]
        # t1 * t2 = 3 m1 m2 m3 m_total
        assert float(np.prod(nonzero)) == pytest.approx(
            3 * 5 * (-3) * 1 * 3, rel=1e-10
        )

    def test_sweep_always_finds_negative(self):
        rng = np.random.default_rng(31)
        for n in range(3, 13):
            for _ in range(50):
                avg = random_average_vector(n, rng)
                report = negative_eigenvalue_certificate(avg)
                assert report.negative_found
                assert report.witness_minor <= 0.0

    def test_two_domains_rejected(self):
        with pytest.raises(ValueError):
            negative_eigenvalue_certificate(AverageVector(np.array([2.0, -1.0])))
