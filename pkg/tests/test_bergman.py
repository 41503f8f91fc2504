"""Bergman-space tests: norms, shift weights, bounds, truncation behaviour."""

import math

import numpy as np
import pytest

from zetaquant import bergman
from zetaquant.bergman import BergmanParams
from zetaquant.errors import DomainError


class TestParams:
    def test_alpha_range(self):
        with pytest.raises(DomainError):
            BergmanParams(0.0)
        with pytest.raises(DomainError):
            BergmanParams(1.2)

    def test_growth_constant(self):
        assert BergmanParams(1.0).a == 1.0
        assert BergmanParams(0.7).a == 0.0

    def test_determinant_support_flag(self):
        assert BergmanParams(0.4).supports_determinants
        assert not BergmanParams(0.5).supports_determinants


class TestWeightNorm:
    def test_alpha_one_closed_values(self):
        # 2pi 2^{-2} Gamma(2) = pi/2 and 2pi 2^{-4} Gamma(4) = 3pi/4
        assert bergman.weight_norm_sq(0, 1.0) == pytest.approx(math.pi / 2, rel=1e-14)
        assert bergman.weight_norm_sq(1, 1.0) == pytest.approx(3 * math.pi / 4, rel=1e-14)

    def test_alpha_half_value(self):
        assert bergman.weight_norm_sq(0, 0.5) == pytest.approx(3 * math.pi / 2, rel=1e-14)

    def test_quadrature_oracle_agreement(self):
        for alpha in (0.3, 0.5, 1.0):
            for n in range(11):
                closed = bergman.weight_norm_sq(n, alpha)
                quad = bergman.weight_norm_sq_quadrature(n, alpha, tol=1e-9)
                assert abs(closed - quad) / quad < 1e-6

    def test_quadrature_tight_tolerance(self):
        got = bergman.weight_norm_sq_quadrature(0, 1.0, tol=1e-10)
        assert got == pytest.approx(math.pi / 2, rel=1e-9)

    def test_frexp_representation(self):
        m, e = bergman.weight_norm_frexp(3, 0.5)
        assert 1.0 <= m < 2.0
        assert m * 2.0**float(e) == pytest.approx(bergman.weight_norm_sq(3, 0.5), rel=1e-13)


class TestShiftWeights:
    def test_first_weights_alpha_one(self):
        g = bergman.shift_weights(BergmanParams(1.0), 2)
        assert g[0] == pytest.approx(math.sqrt(2.0 / 3.0), rel=1e-14)
        assert g[1] == pytest.approx(math.sqrt(0.8), rel=1e-14)

    def test_positive(self):
        g = bergman.shift_weights(BergmanParams(0.35), 2000)
        assert np.all(g > 0)

    def test_definitional_route(self):
        # gamma_n = (n+1) c_{n+1}/c_n through the frexp norm representation
        for alpha in (0.3, 0.5, 1.0):
            route1 = bergman.shift_weights(BergmanParams(alpha), 1001)
            m, e = bergman.weight_norm_frexp(np.arange(1002), alpha)
            n1 = np.arange(1.0, 1002.0)
            route2 = n1 * np.sqrt(m[:-1] / m[1:] * 2.0 ** (e[:-1] - e[1:]).astype(float))
            assert np.abs(route1 / route2 - 1.0).max() <= 1e-12

    def test_exact_factorial_route(self):
        # for integer 2/alpha the Gamma ratio is an exact rising factorial
        for alpha in (1.0, 0.5, 0.4):
            m = int(round(2.0 / alpha))
            n = np.arange(0.0, 1001.0)
            a = (2.0 / alpha) * (n + 1.0)
            prod = np.ones_like(a)
            for j in range(m):
                prod *= a + j
            exact = 2.0 ** (1.0 / alpha) * (n + 1.0) / np.sqrt(prod)
            got = bergman.shift_weights(BergmanParams(alpha), 1001)
            assert np.abs(got / exact - 1.0).max() <= 1e-13


class TestAsymptoticFit:
    def test_slopes(self):
        for alpha, tol in ((0.4, 0.03), (0.5, 0.02), (1.0, 0.02)):
            slope = bergman.gamma_asymptotic_fit(BergmanParams(alpha), 10**3, 10**4)
            assert abs(slope - (1.0 - 1.0 / alpha)) < tol

    def test_range_validation(self):
        with pytest.raises(DomainError):
            bergman.gamma_asymptotic_fit(BergmanParams(0.5), 5, 100)


class TestDerivativeNormBound:
    def test_alpha_one_n_one(self):
        # min_r e^r / r = e at r = 1
        assert bergman.derivative_norm_bound(1, BergmanParams(1.0)) == pytest.approx(
            math.e, rel=1e-14
        )

    def test_alpha_half_n_two(self):
        # r* = 16, bound = 2 * 16^-2 * e^4
        got = bergman.derivative_norm_bound(2, BergmanParams(0.5))
        assert got == pytest.approx(0.4265480471339393678, rel=1e-13)

    def test_stationary_point_optimal(self):
        # the closed-form r* beats nearby r
        for alpha, n in ((0.4, 3), (1.0, 5)):
            r_star = (n / alpha) ** (1.0 / alpha)
            bound = bergman.derivative_norm_bound(n, BergmanParams(alpha))
            for r in (0.9 * r_star, 1.1 * r_star):
                other = math.exp(
                    math.lgamma(n + 1) - n * math.log(r) + r**alpha
                )
                assert bound <= other * (1 + 1e-12)


class TestTruncation:
    def test_matrix_shape(self):
        tr = bergman.shift_truncation(BergmanParams(0.5), 8)
        assert tr.matrix.shape == (9, 9)
        assert np.count_nonzero(tr.matrix) == 8
        assert np.allclose(np.diag(tr.matrix, k=1), tr.gamma)

    def test_power_norm_matches_dense_svd(self):
        tr = bergman.shift_truncation(BergmanParams(0.4), 120)
        M = tr.matrix
        P = np.eye(121)
        for k in range(1, 6):
            P = P @ M
            dense = np.linalg.svd(P, compute_uv=False)[0]
            assert bergman.power_norm(tr, k) == pytest.approx(dense, rel=1e-12)

    def test_norm_checks_bounds_hold(self):
        for alpha in (0.4, 0.5, 1.0):
            tr = bergman.shift_truncation(BergmanParams(alpha), 2000)
            rpt = bergman.truncation_norm_checks(tr, 20)
            assert rpt.all_below_bound

    def test_root_norms_decreasing_for_small_alpha(self):
        tr = bergman.shift_truncation(BergmanParams(0.4), 2000)
        rpt = bergman.truncation_norm_checks(tr, 20)
        assert rpt.root_norms_decreasing

    def test_tail_sup_to_zero(self):
        tr = bergman.shift_truncation(BergmanParams(0.4), 2000)
        rpt = bergman.truncation_norm_checks(tr, 5)
        assert np.all(np.diff(rpt.tail_sup) <= 0)
        assert rpt.tail_sup[-1] < rpt.tail_sup[0]

    def test_adjoint_is_transpose(self):
        tr = bergman.shift_truncation(BergmanParams(0.5), 10)
        adj = bergman.adjoint_matrix(tr)
        assert np.array_equal(adj, tr.matrix.T)
        # non-normality witness on the constant vector: D D* e0 = gamma_0^2 e0,
        # D* D e0 = 0
        e0 = np.zeros(11)
        e0[0] = 1.0
        dd = tr.matrix @ adj @ e0
        assert dd[0] == pytest.approx(tr.gamma[0] ** 2, rel=1e-15)
        assert np.allclose(adj @ tr.matrix @ e0, 0.0)


class TestTranslation:
    def test_constant_unchanged(self):
        tr = bergman.shift_truncation(BergmanParams(0.5), 8)
        r = bergman.translation_check(tr, 2.0 + 1.0j, [1.0])
        assert r.max_coeff_discrepancy < 1e-14

    def test_linear_shift(self):
        tr = bergman.shift_truncation(BergmanParams(0.5), 8)
        r = bergman.translation_check(tr, 1.0, [0.0, 1.0])
        assert r.max_coeff_discrepancy < 1e-12

    def test_cubic_binomial(self):
        tr = bergman.shift_truncation(BergmanParams(0.5), 16)
        r = bergman.translation_check(tr, 2.0 + 1.0j, [0.0, 0.0, 0.0, 1.0])
        assert r.max_coeff_discrepancy < 1e-10

    def test_degree_guard(self):
        tr = bergman.shift_truncation(BergmanParams(0.5), 3)
        with pytest.raises(DomainError):
            bergman.translation_check(tr, 1.0, [0.0, 0.0, 0.0, 1.0])


class TestOrthogonality:
    def test_cross_inner_products_vanish(self):
        for alpha in (0.5, 1.0):
            for n in range(4):
                for m in range(n + 1, 5):
                    ip = bergman.monomial_inner_product_quadrature(n, m, alpha)
                    scale = math.sqrt(
                        bergman.weight_norm_sq(n, alpha) * bergman.weight_norm_sq(m, alpha)
                    )
                    assert abs(ip) / scale < 1e-8

    def test_diagonal_matches_norm(self):
        ip = bergman.monomial_inner_product_quadrature(2, 2, 0.5)
        assert ip.real == pytest.approx(bergman.weight_norm_sq(2, 0.5), rel=1e-7)
        assert abs(ip.imag) < 1e-12


class TestIdealClass:
    def test_grid(self):
        for alpha in (0.35, 0.4, 0.45, 0.55, 0.65, 0.7):
            cls = bergman.gamma_ideal_class(BergmanParams(alpha), 3)
            for p in (1, 2, 3):
                assert cls.in_Jp(p) == (alpha < p / (p + 1.0))

    def test_alpha_one_not_compact(self):
        cls = bergman.gamma_ideal_class(BergmanParams(1.0), 3)
        assert cls.is_bounded and not cls.is_compact
