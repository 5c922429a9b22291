import cmath
import math

import numpy as np
import pytest

from conftest import column_from_projection
from qmanin import (ConfigError, ManinElement, WeightSequence,
                    adjoint_annihilation_matrix, annihilation_matrix,
                    boundedness_report, creation_matrix, domain_membership,
                    identity_matrix, number_matrix, toeplitz_matrix)
from qmanin.operators import TruncatedOperator, OperatorMeta
from qmanin.weights import QParam

WFAC = WeightSequence.factorial()
WCONST = WeightSequence.constant()


class TestToeplitzMatrix:
    def test_annihilation_band_paper_values(self):
        q = 0.9 * cmath.exp(0.4j)
        T = toeplitz_matrix(ManinElement.theta_bar(q), WFAC, q, 6)
        for n in range(1, 7):
            expect = QParam.of(q).power(-n) * math.sqrt(n)
            assert abs(T.matrix[n - 1, n] - expect) < 1e-13 * abs(expect)
        assert np.count_nonzero(T.matrix) == 6

    def test_unit_symbol_is_exact_identity(self):
        q = 1.7j
        T = toeplitz_matrix(ManinElement.one(q), WFAC, q, 5)
        assert np.array_equal(T.matrix, np.eye(6, dtype=complex))
        assert T.meta.exact

    def test_theta_thetabar_diagonal(self):
        q = 0.8
        g = ManinElement.monomial(q, 1, 1)
        T = toeplitz_matrix(g, WFAC, q, 5)
        for n in range(6):
            expect = q**-n * WFAC.weight(n + 1) / WFAC.weight(n)
            assert abs(T.matrix[n, n] - expect) < 1e-13 * abs(expect)

    def test_matches_projection_oracle(self):
        N = 8
        for q in (1.0, 0.8 * cmath.exp(0.9j)):
            for i in range(4):
                for j in range(4):
                    g = ManinElement.monomial(q, i, j)
                    T = toeplitz_matrix(g, WFAC, q, N)
                    for n in range(N + 1):
                        col = column_from_projection(g, WFAC, N, n)
                        scale = max(float(np.max(np.abs(col))), 1.0)
                        assert np.max(np.abs(T.matrix[:, n] - col)) <= 1e-12 * scale

    def test_multi_term_symbol_oracle(self):
        q = 1.1 * cmath.exp(0.3j)
        g = (ManinElement.monomial(q, 2, 1, 0.5 - 0.5j)
             + ManinElement.theta_bar(q, 2)
             + ManinElement.one(q) * 2.0)
        T = toeplitz_matrix(g, WFAC, q, 10)
        for n in range(11):
            col = column_from_projection(g, WFAC, 10, n)
            scale = max(float(np.max(np.abs(col))), 1.0)
            assert np.max(np.abs(T.matrix[:, n] - col)) <= 1e-12 * scale

    def test_band_structure(self):
        q = 1j
        for i, j in ((2, 0), (0, 3), (2, 1), (3, 3)):
            T = toeplitz_matrix(ManinElement.monomial(q, i, j), WFAC, q, 9)
            rows, cols = np.nonzero(T.matrix)
            assert np.all(rows - cols == i - j)

    def test_linearity(self):
        q = 0.7 + 0.1j
        g = ManinElement.monomial(q, 1, 1)
        h = ManinElement.theta_bar(q)
        alpha = 2.0 - 1.0j
        left = toeplitz_matrix(alpha * g + h, WFAC, q, 7).matrix
        right = (alpha * toeplitz_matrix(g, WFAC, q, 7).matrix
                 + toeplitz_matrix(h, WFAC, q, 7).matrix)
        assert np.allclose(left, right, rtol=1e-13)

    def test_exactness_flag(self):
        q = 1.0
        assert toeplitz_matrix(ManinElement.theta_bar(q), WFAC, q, 5).meta.exact
        assert not toeplitz_matrix(ManinElement.theta(q), WFAC, q, 5).meta.exact
        mixed = ManinElement.theta(q) + ManinElement.theta_bar(q)
        assert not toeplitz_matrix(mixed, WFAC, q, 5).meta.exact

    def test_horizon_failure_is_config_error(self):
        w = WeightSequence.explicit([1.0, 2.0, 3.0])
        with pytest.raises(ConfigError):
            toeplitz_matrix(ManinElement.theta(1.0), w, 1.0, 5)


class TestNamedMatrices:
    def test_annihilation_superdiagonal(self):
        A = annihilation_matrix(WFAC, 1.0, 3)
        assert np.allclose(np.diag(A.matrix, k=1), [1, math.sqrt(2), math.sqrt(3)])

    def test_number_matrix(self):
        assert np.array_equal(number_matrix(2).matrix,
                              np.diag([0.0, 1.0, 2.0]).astype(complex))

    def test_adjoint_is_conjugate_transpose(self):
        rng = np.random.default_rng(21)
        for _ in range(8):
            q = complex(rng.uniform(0.5, 1.5), rng.uniform(-0.5, 0.5))
            w = (WFAC if rng.random() < 0.5
                 else WeightSequence.constant(float(rng.uniform(0.5, 2))))
            N = int(rng.integers(2, 12))
            A = annihilation_matrix(w, q, N)
            Astar = adjoint_annihilation_matrix(w, q, N)
            assert np.allclose(Astar.matrix, A.matrix.conj().T, rtol=1e-13)
            assert np.allclose(A.adjoint().matrix, Astar.matrix, rtol=1e-13)

    def test_creation_vs_adjoint(self):
        # distinct for q = 2 (spec/paper: not adjoints unless q = 1)
        C2 = creation_matrix(WFAC, 2.0, 6).matrix
        A2 = adjoint_annihilation_matrix(WFAC, 2.0, 6).matrix
        assert np.max(np.abs(C2 - A2)) > 0.1
        C1 = creation_matrix(WFAC, 1.0, 6).matrix
        A1 = adjoint_annihilation_matrix(WFAC, 1.0, 6).matrix
        assert np.allclose(C1, A1, rtol=1e-14)

    def test_creation_is_q_free(self):
        a = creation_matrix(WFAC, 2.0, 5).matrix
        b = creation_matrix(WFAC, 0.5j, 5).matrix
        assert np.array_equal(a, b)


class TestTruncatedOperator:
    def test_rejects_nonfinite(self):
        bad = np.eye(3, dtype=complex)
        bad[1, 1] = math.inf
        with pytest.raises(ConfigError):
            TruncatedOperator(bad, OperatorMeta("x", "factorial", 1.0, True))

    def test_json_and_csv(self):
        A = annihilation_matrix(WFAC, 1j, 2)
        doc = A.to_json()
        assert doc["dim"] == 3
        assert doc["meta"]["symbol"] == "tb"
        csv_text = A.to_csv()
        rows = csv_text.strip().split("\n")
        assert len(rows) == 3
        # three quoted "re,im" cells: 3 commas inside + 2 separators
        assert rows[0].count(",") == 5
        assert rows[0].count('"') == 6

    def test_identity_helper(self):
        assert np.array_equal(identity_matrix(WFAC, 1.0, 4).matrix, np.eye(5))


class TestBoundedness:
    def test_constant_unit_q_bounded_not_compact(self):
        rep = boundedness_report(WCONST, 1.0)
        assert rep.bounded == "yes" and rep.compact == "no"
        assert rep.sup_estimate == 1.0

    def test_factorial_unit_q_unbounded(self):
        rep = boundedness_report(WFAC, 1.0)
        assert rep.bounded == "no" and rep.compact == "no"
        assert math.isinf(rep.sup_estimate)

    def test_factorial_q2_compact(self):
        rep = boundedness_report(WFAC, 2.0, horizon=200)
        assert rep.compact == "yes" and rep.bounded == "yes"

    def test_backward_shift_bounded_iff_q_at_least_one(self):
        # constant weights: ratios |q|^{-2n} decay for |q| > 1 and blow up
        # geometrically for |q| < 1
        rep_big = boundedness_report(WCONST, 1.2)
        assert rep_big.bounded == "yes" and rep_big.compact == "yes"
        rep_small = boundedness_report(WCONST, 0.8)
        assert rep_small.bounded == "no"

    def test_slowly_growing_ratios_inconclusive(self):
        # ratios log(n+2): increments decay exactly like 1/n, the p-series edge
        table, acc = [], 1.0
        for n in range(151):
            if n:
                acc *= math.log(n + 2)
            table.append(acc)
        rep = boundedness_report(WeightSequence.explicit(table), 1.0, horizon=150)
        assert rep.bounded == "inconclusive"

    def test_invariant_guard(self):
        from qmanin.operators import BoundednessReport
        with pytest.raises(ConfigError):
            BoundednessReport((1.0,), "yes", "no", math.inf)
        with pytest.raises(ConfigError):
            BoundednessReport((1.0,), "inconclusive", "yes", 1.0)


class TestDomainMembership:
    def test_finite_vector(self):
        assert domain_membership([1.0, 2.0, 3.0], WFAC, 1.0) == "in_domain"

    def test_coherent_coefficients_inside(self):
        lam = 2.0
        def family(n):
            return lam**n / math.sqrt(WFAC.weight(n))
        assert domain_membership(family, WFAC, 1.0) == "in_domain"

    def test_harmonic_coefficients_outside(self):
        assert domain_membership(lambda n: 1.0 / (n + 1), WFAC, 1.0) \
            == "not_in_domain"

    def test_geometric_inside_constant_weights(self):
        assert domain_membership(lambda n: 0.5**n, WCONST, 1.0) == "in_domain"

    def test_growing_terms_outside(self):
        assert domain_membership(lambda n: 1.0, WCONST, 0.8) == "not_in_domain"
