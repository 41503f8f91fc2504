"""Kernel tests: elementary factors, regularized-determinant terms, summation."""

import cmath
import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from zetaquant import factors
from zetaquant.errors import PoleZeroError, RangeOverflowError


def complexes(max_modulus):
    return st.builds(
        complex,
        st.floats(-max_modulus, max_modulus),
        st.floats(-max_modulus, max_modulus),
    )


class TestElementaryFactor:
    def test_value_at_zero_is_one(self):
        for n in range(6):
            assert factors.elementary_factor(n, 0.0) == 1.0

    def test_e1_at_half(self):
        # (1 - z) e^z at z = 0.5, high-precision reference
        got = factors.elementary_factor(1, 0.5)
        assert abs(got - 0.82436063535006407342) < 1e-15

    def test_vanishes_at_one(self):
        assert factors.elementary_factor(2, 1.0) == 0.0

    def test_overflow_raises(self):
        with pytest.raises(RangeOverflowError):
            factors.elementary_factor(3, 700.0)

    @given(st.integers(0, 6), complexes(0.9))
    @settings(max_examples=200)
    def test_matches_naive_product(self, n, z):
        got = factors.elementary_factor(n, z)
        s = sum(z**j / j for j in range(1, n + 1))
        naive = (1.0 - z) * cmath.exp(s)
        assert abs(got - naive) <= 1e-13 * (1.0 + abs(got))


class TestRegdetTerm:
    def test_order_one_is_fredholm_factor(self):
        assert factors.regdet_term(1, -0.5, 1.0) == 0.5

    def test_order_two_closed_form(self):
        got = factors.regdet_term(2, 1.0, 0.5)
        assert abs(got - 0.90979598956895013541) < 1e-15

    def test_mu_zero_is_one(self):
        assert factors.regdet_term(3, 1.0, 0.0) == 1.0

    @given(st.integers(1, 5), complexes(3.0), complexes(3.0))
    @settings(max_examples=300)
    def test_order_one_identity(self, p, lam, mu):
        if p == 1:
            assert factors.regdet_term(1, lam, mu) == 1.0 + mu * lam

    @given(st.integers(0, 4), complexes(2.0), complexes(2.0))
    @settings(max_examples=300)
    def test_matches_elementary_factor(self, p, lam, mu):
        # regdet_term(p+1, lam, mu) = E_p(-mu lam): the determinant's
        # convergence exponent is the elementary factor's with z = -mu lam
        w = mu * lam
        try:
            lhs = factors.regdet_term(p + 1, lam, mu)
            rhs = factors.elementary_factor(p, -w)
        except RangeOverflowError:
            return
        assert abs(lhs - rhs) <= 1e-12 * (1.0 + abs(lhs))


class TestRegdetLogTerm:
    def test_lambda_zero(self):
        assert factors.regdet_log_term(1, 0.0, 123.0) == 0.0

    def test_order_two_closed_form(self):
        got = factors.regdet_log_term(2, 1.0, 0.5)
        assert abs(got - (-0.094534891891835618022)) < 1e-15

    def test_pole_raises(self):
        with pytest.raises(PoleZeroError):
            factors.regdet_log_term(2, -1.0, 1.0)

    @given(st.integers(1, 5), complexes(2.0), complexes(2.0))
    @settings(max_examples=300)
    def test_exp_consistency(self, p, lam, mu):
        if abs(1.0 + mu * lam) < 1e-6:
            return
        try:
            term = factors.regdet_term(p, lam, mu)
            log_term = factors.regdet_log_term(p, lam, mu)
        except RangeOverflowError:
            return
        assert abs(cmath.exp(log_term) - term) <= 1e-13 * abs(term)

    def test_vectorized_matches_scalar(self):
        rng = np.random.default_rng(1)
        w = rng.normal(size=50) + 1j * rng.normal(size=50)
        for p in (1, 2, 3, 4):
            vec = factors.regdet_log_terms(p, w)
            for i, wi in enumerate(w):
                scalar = factors.regdet_log_term(p, wi, 1.0)
                assert abs(vec[i] - scalar) <= 1e-14 * max(1.0, abs(scalar))


class TestStableLog1p:
    def test_tiny_argument_accuracy(self):
        # log1p(w) - w should keep absolute error near eps*|w|^2
        w = 1e-6 + 2e-6j
        got = factors.stable_log1p(w) - w
        # reference from 40-digit arithmetic
        ref = 1.4999963333350832058e-12 - 2.0000006666606664933e-12j
        assert abs(got - ref) <= 1e-17

    def test_near_pole_accuracy(self):
        # real part = log|1+w| stays accurate close to the pole
        w = -1.0 + 1e-9 + 1e-9j
        got = factors.stable_log1p(w)
        ref = cmath.log(1.0 + w)
        assert abs(got - ref) <= 1e-13 * abs(ref)

    def test_negative_real_axis(self):
        assert factors.stable_log1p(-2.0 + 0.0j).imag == pytest.approx(math.pi)

    @given(complexes(0.45))
    @settings(max_examples=200)
    def test_agrees_with_cmath(self, w):
        # the naive reference carries eps-level absolute error from fl(1+w),
        # so the comparison needs an absolute floor
        got = factors.stable_log1p(w)
        ref = cmath.log(1.0 + w)
        assert abs(got - ref) <= 1e-15 + 1e-13 * abs(ref)


class TestOrderedCompensatedSum:
    def test_empty(self):
        assert factors.ordered_compensated_sum([]) == 0.0

    def test_cancellation_residue(self):
        assert factors.ordered_compensated_sum([1.0, -1.0, 1e-16]) == 1e-16

    def test_many_tenths_vs_exact_rational(self):
        # exact sum of 10^6 copies of the double nearest 0.1
        exact = Fraction(0.1) * 10**6
        got = factors.ordered_compensated_sum([0.1] * 10**6)
        assert abs(got.real - float(exact)) <= 1e-9
        assert got.imag == 0.0

    @given(st.lists(st.floats(-1e6, 1e6), max_size=40))
    @settings(max_examples=200)
    def test_matches_fraction_oracle(self, xs):
        exact = sum((Fraction(x) for x in xs), Fraction(0))
        got = factors.ordered_compensated_sum(xs)
        assert abs(got.real - float(exact)) <= 1e-9 * max(1.0, abs(float(exact)))

    def test_exact_complex_sum_matches_fsum(self):
        rng = np.random.default_rng(2)
        arr = rng.normal(size=1000) * 10.0 ** rng.integers(-8, 8, size=1000)
        arr = arr + 1j * arr[::-1]
        got = factors.exact_complex_sum(arr)
        assert got.real == math.fsum(arr.real.tolist())
        assert got.imag == math.fsum(arr.imag.tolist())
