"""Determinant tests: truncated products, tail bounds, dense-matrix oracles."""

import cmath
import math

import numpy as np
import pytest

from zetaquant import opmodel, regdet
from zetaquant.errors import CertificationError, ConsistencyError, DomainError
from zetaquant.opmodel import TailModel, ZeroMultiset
from zetaquant.regdet import DenseMatrix, RegDetRequest


def op_of(values, tail=None):
    return opmodel.diagonal_operator(values, tail=tail or TailModel.finite())


class TestDetFredholm:
    def test_single_factor(self):
        assert regdet.det_fredholm(op_of([0.5]), 1.0, 1).value == 0.5

    def test_two_factors(self):
        got = regdet.det_fredholm(op_of([0.5, 1 / 3]), 1.0, 2).value
        assert abs(got - 1 / 3) < 1e-15

    def test_geometric_diagonal(self):
        # prod_{k<=30} (1 - 2^-k) against a 30-digit reference
        op = op_of(0.5 ** np.arange(1, 31))
        got = regdet.det_fredholm(op, 1.0, 30).value
        assert abs(got - 0.28878809535555729368) < 1e-14

    def test_exact_zero_flag(self):
        res = regdet.det_fredholm(op_of([0.5, 0.25]), 4.0, 2)
        assert res.value == 0.0
        assert res.zero_index == 1

    def test_uncertified_tail_raises(self):
        op = op_of(1.0 / np.arange(1, 100.0), tail=TailModel.power_law(1.0))
        with pytest.raises(CertificationError):
            regdet.det_fredholm(op, 1.0, 99)
        # caller override evaluates anyway
        regdet.det_fredholm(op, 0.5, 99, certified=False)


class TestDetP:
    def test_z_zero_is_one(self):
        op = op_of([0.3, 0.7, -0.2])
        for p in (1, 2, 3):
            res = regdet.det_p(op, RegDetRequest(p, 0.0, 3))
            assert res.value == 1.0
            assert res.tail_estimate == 0.0

    def test_order_one_equals_fredholm(self):
        op = op_of([0.3 + 0.1j, -0.5, 0.25j])
        z = 0.7 - 0.3j
        a = regdet.det_p(op, RegDetRequest(1, z, 3)).value
        b = regdet.det_fredholm(op, z, 3).value
        assert a == b  # identical code path

    def test_gamma_product_euler_mascheroni(self):
        # prod_{n<=N} (1 + 1/n) e^{-1/n} -> e^{-gamma}; at N=10^6 the
        # truncation sits within 6e-7 of the limit
        N = 10**6
        op = op_of(-1.0 / np.arange(1, N + 1.0), tail=TailModel.power_law(1.0))
        res = regdet.det_p(op, RegDetRequest(2, 1.0, N))
        e_gamma = 0.56145948356688516982
        assert abs(res.value - e_gamma) <= 6e-7
        assert res.value.imag == 0.0

    def test_finite_tail_needs_full_truncation(self):
        op = op_of([0.5, 0.25, 0.125])
        with pytest.raises(CertificationError):
            regdet.det_p(op, RegDetRequest(1, 1.0, 2))

    def test_power_law_certification(self):
        op = op_of(1.0 / np.arange(1, 50.0), tail=TailModel.power_law(1.0))
        with pytest.raises(CertificationError):
            regdet.det_p(op, RegDetRequest(1, 0.5, 49))
        regdet.det_p(op, RegDetRequest(2, 0.5, 49))

    def test_tail_estimate_bounds_truncation_error(self):
        # compare the N-term truncation against a much longer product
        full_n = 2 * 10**5
        diag = -1.0 / np.arange(1, full_n + 1.0)
        op = op_of(diag, tail=TailModel.power_law(1.0))
        z = 0.75 + 0.25j
        full = regdet.det_p(op, RegDetRequest(2, z, full_n))
        for N in (10**3, 10**4):
            opn = op_of(diag[:N], tail=TailModel.power_law(1.0))
            part = regdet.det_p(opn, RegDetRequest(2, z, N))
            log_err = abs(cmath.log(part.value) - cmath.log(full.value))
            assert log_err <= part.tail_estimate

    def test_zero_of_truncated_det_at_data(self):
        # binary-exact reciprocals: evaluating at a stored zero hits an
        # exact 0 factor
        zeros = ZeroMultiset.from_values([2.0, 4.0, -8.0])
        op = opmodel.from_zeros(zeros)
        for idx, a in enumerate([2.0, 4.0, -8.0]):
            res = regdet.det_p(op, RegDetRequest(1, a, 3))
            assert res.value == 0.0
            assert res.zero_index == idx

    def test_argument_principle_simple_zero(self):
        # winding number of det_1(I - zD) around a = 3 equals 1
        zeros = ZeroMultiset.from_values([3.0, 5.0, -2.0])
        op = opmodel.from_zeros(zeros)
        M = 256
        angles = 2 * np.pi * np.arange(M + 1) / M
        pts = 3.0 + 0.1 * np.exp(1j * angles)
        vals = [regdet.det_p(op, RegDetRequest(1, z, 3)).value for z in pts]
        winding = sum(
            cmath.phase(vals[i + 1] / vals[i]) for i in range(M)
        ) / (2 * np.pi)
        assert abs(winding - 1.0) < 1e-9

    def test_conjugate_pairing_real_for_real_z(self):
        t = np.array([14.13, 21.02, 25.01])
        rho = 0.5 + 1j * t
        diag = np.empty(6, dtype=complex)
        diag[0::2] = 1.0 / rho
        diag[1::2] = 1.0 / rho.conj()
        op = op_of(diag)
        res = regdet.det_p(op, RegDetRequest(2, 3.0, 6, regdet.PAIRING_CONJUGATE))
        assert res.value.imag == 0.0
        as_stored = regdet.det_p(op, RegDetRequest(2, 3.0, 6))
        assert abs(res.value - as_stored.value) <= 1e-14 * abs(res.value)

    def test_conjugate_pairing_validates(self):
        op = op_of([0.5 + 0.5j, 0.25])
        with pytest.raises(DomainError):
            regdet.det_p(op, RegDetRequest(1, 1.0, 2, regdet.PAIRING_CONJUGATE))

    def test_functional_pairing_validates(self):
        t = np.array([14.13, 21.02])
        rho = np.concatenate([0.5 + 1j * t, 0.5 - 1j * t])
        op = op_of(1.0 / rho)
        regdet.det_p(op, RegDetRequest(2, 1.0, 4, regdet.PAIRING_FUNCTIONAL))
        off = op_of(1.0 / np.array([0.4 + 1j, 0.4 - 1j]))
        with pytest.raises(DomainError):
            regdet.det_p(off, RegDetRequest(2, 1.0, 2, regdet.PAIRING_FUNCTIONAL))


def random_dense(rng, dim, radius=0.8):
    raw = rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))
    rho = float(np.abs(np.linalg.eigvals(raw)).max())
    return DenseMatrix(radius * raw / rho)


class TestRnMatrix:
    def test_zero_matrix(self):
        A = DenseMatrix(np.zeros((3, 3)))
        assert np.allclose(regdet.rn_matrix(A, 4).entries, 0.0)

    def test_order_one_is_identity_map(self):
        rng = np.random.default_rng(0)
        A = random_dense(rng, 4)
        assert np.allclose(regdet.rn_matrix(A, 1).entries, A.entries)

    def test_scalar_closed_form(self):
        A = DenseMatrix(np.array([[1.0]]))
        got = regdet.rn_matrix(A, 2).entries[0, 0]
        assert abs(got - (-0.26424111765711535681)) < 1e-14

    def test_dim_bound(self):
        with pytest.raises(Exception):
            DenseMatrix(np.zeros((65, 65)))


class TestMatrixDetP:
    def test_zero_matrix_is_one(self):
        A = DenseMatrix(np.zeros((4, 4)))
        assert regdet.matrix_det_p(A, 3, 0.7) == 1.0

    def test_order_one_classical(self):
        rng = np.random.default_rng(1)
        A = random_dense(rng, 5)
        mu = 0.3 - 0.2j
        got = regdet.matrix_det_p(A, 1, mu)
        want = np.linalg.det(np.eye(5) + mu * A.entries)
        assert abs(got - want) <= 1e-12 * abs(want)

    def test_routes_agree_random(self):
        rng = np.random.default_rng(2)
        for dim in range(2, 7):
            for n in range(1, 5):
                A = random_dense(rng, dim)
                regdet.matrix_det_p(A, n, 0.7)  # raises on disagreement

    def test_route_disagreement_raises(self):
        rng = np.random.default_rng(6)
        A = random_dense(rng, 5)
        with pytest.raises(ConsistencyError):
            regdet.matrix_det_p(A, 2, 1.0, rtol=1e-18)


class TestIdentityChecks:
    def test_trace_relation_diag_closed_form(self):
        # lhs = det_2(I + 0.1 A), rhs = det(I + 0.1 A) e^{-0.1 Tr A}, A = diag(1,2)
        A = DenseMatrix(np.diag([1.0, 2.0]))
        r = regdet.det_trace_relation_check(A, 0.1, 2)
        want = 1.1 * 1.2 * math.exp(-0.3)
        assert abs(r.rhs - want) <= 1e-14
        assert r.rel_discrepancy <= 1e-12

    def test_trace_relation_trivial_order_one(self):
        rng = np.random.default_rng(3)
        A = random_dense(rng, 4)
        r = regdet.det_trace_relation_check(A, 0.5, 1)
        assert r.rel_discrepancy <= 1e-13

    def test_trace_relation_random(self):
        rng = np.random.default_rng(4)
        A = random_dense(rng, 4)
        r = regdet.det_trace_relation_check(A, 0.3 + 0.2j, 4)
        assert r.rel_discrepancy <= 1e-10

    def test_exp_trace_zero_matrix(self):
        A = DenseMatrix(np.zeros((3, 3)))
        r = regdet.exp_trace_identity_check(A, 0.9)
        assert r.lhs == 1.0 and r.rhs == 1.0

    def test_exp_trace_geometric_scalar(self):
        A = DenseMatrix(np.array([[2.0]]))
        r = regdet.exp_trace_identity_check(A, 0.25, terms=200)
        assert abs(r.lhs - 2.0) < 1e-10 and abs(r.rhs - 2.0) < 1e-14

    def test_exp_trace_random(self):
        rng = np.random.default_rng(5)
        for dim in range(2, 7):
            A = random_dense(rng, dim)  # rho = 0.8
            r = regdet.exp_trace_identity_check(A, 0.5 / 0.8, terms=60)
            assert r.rel_discrepancy <= 1e-10

    def test_exp_trace_domain_guard(self):
        A = DenseMatrix(np.diag([2.0]))
        with pytest.raises(DomainError):
            regdet.exp_trace_identity_check(A, 0.5)


def test_threaded_reduction_matches_serial(monkeypatch):
    N = 1 << 17
    op = op_of(-1.0 / np.arange(1, N + 1.0), tail=TailModel.power_law(1.0))
    req = RegDetRequest(2, 0.8 + 0.3j, N)
    serial = regdet.det_p(op, req).value
    monkeypatch.setenv("ZETAQUANT_THREADS", "4")
    threaded = regdet.det_p(op, req).value
    assert serial == threaded  # fsum reduction is order-exact
