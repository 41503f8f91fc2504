"""Oracle tests: Lanczos Gamma, Borwein zeta, composed xi, prime sieve.

The oracles are the reference side of every reconstruction check, so they
get their own verification against an independent multiprecision library
(test dependency only) plus classical closed-form values.
"""

import math

import mpmath as mp
import numpy as np
import pytest

from zetaquant import recon
from zetaquant.errors import DomainError, PoleZeroError

mp.mp.dps = 30


class TestGammaOracle:
    def test_factorials(self):
        for n in range(1, 8):
            assert recon.gamma_oracle(n) == pytest.approx(math.factorial(n - 1), rel=1e-13)

    def test_half(self):
        assert recon.gamma_oracle(0.5) == pytest.approx(math.sqrt(math.pi), rel=1e-13)

    def test_poles(self):
        for z in (0.0, -1.0, -5.0):
            with pytest.raises(PoleZeroError):
                recon.gamma_oracle(z)

    def test_against_mpmath_grid(self):
        rng = np.random.default_rng(11)
        for _ in range(150):
            z = complex(rng.uniform(-18, 18), rng.uniform(-18, 18))
            if abs(z) > 20 or (z.imag == 0 and z.real <= 0):
                continue
            if z.real <= 0 and abs(z.imag) < 0.05:
                continue
            got = recon.gamma_oracle(z)
            ref = complex(mp.gamma(mp.mpc(z)))
            assert abs(got - ref) <= 1e-10 * abs(ref)


class TestZetaOracle:
    def test_basel(self):
        assert recon.zeta_oracle(2.0) == pytest.approx(math.pi**2 / 6.0, rel=1e-13)

    def test_classical_values(self):
        assert recon.zeta_oracle(0.0) == -0.5
        assert recon.zeta_oracle(-1.0) == pytest.approx(-1.0 / 12.0, rel=1e-12)
        assert recon.zeta_oracle(4.0) == pytest.approx(math.pi**4 / 90.0, rel=1e-13)

    def test_trivial_zeros(self):
        for s in (-2.0, -4.0, -8.0):
            assert recon.zeta_oracle(s) == 0.0

    def test_pole(self):
        with pytest.raises(PoleZeroError):
            recon.zeta_oracle(1.0)

    def test_against_mpmath_grid(self):
        rng = np.random.default_rng(12)
        for _ in range(150):
            s = complex(rng.uniform(-18, 18), rng.uniform(-18, 18))
            if abs(s) > 20 or abs(s - 1.0) < 0.1:
                continue
            k = round(s.imag * math.log(2.0) / (2.0 * math.pi))
            if k and abs(s - (1.0 + 2j * math.pi * k / math.log(2.0))) < 0.1:
                continue  # removable points of the eta quotient, documented
            ref = complex(mp.zeta(mp.mpc(s)))
            if abs(ref) < 1e-10:
                continue
            got = recon.zeta_oracle(s)
            assert abs(got - ref) <= 1e-10 * abs(ref)

    def test_critical_line(self):
        for t in (1.0, 5.0, 14.0, 30.0):
            got = recon.zeta_oracle(0.5 + 1j * t)
            ref = complex(mp.zeta(mp.mpc(0.5, t)))
            assert abs(got - ref) <= 1e-11 * abs(ref)


class TestXiOracle:
    def test_special_points(self):
        assert recon.xi_oracle(0.0) == 0.5
        assert recon.xi_oracle(1.0) == 0.5

    def test_half(self):
        # (1/2) pi^{-1/4} (1/2)(-1/2) Gamma(1/4) zeta(1/2), 30-digit reference
        assert recon.xi_oracle(0.5) == pytest.approx(0.49712077818831410991, rel=1e-12)

    def test_xi_two_is_pi_sixth(self):
        assert recon.xi_oracle(2.0) == pytest.approx(math.pi / 6.0, rel=1e-12)

    def test_symmetry_exact_off_critical_line(self):
        # the reflection branch makes xi(s) and xi(1-s) the same evaluation
        for s in (0.3, 2.5, -1.2 + 0.7j, 0.4 - 2.0j):
            assert recon.xi_oracle(s) == recon.xi_oracle(1.0 - s)

    def test_symmetry_on_critical_line(self):
        # on Re(s) = 1/2 both sides evaluate directly; agreement is numerical
        for s in (0.5 + 3.0j, 0.5 + 11.0j):
            a = recon.xi_oracle(s)
            b = recon.xi_oracle(1.0 - s)
            assert abs(a - b) <= 1e-12 * abs(a)

    def test_against_composition(self):
        def ref(s):
            s = mp.mpc(s)
            return complex(
                mp.mpf("0.5") * mp.pi ** (-s / 2) * s * (s - 1) * mp.gamma(s / 2) * mp.zeta(s)
            )

        rng = np.random.default_rng(13)
        for _ in range(100):
            s = complex(rng.uniform(-15, 15), rng.uniform(-15, 15))
            if abs(s) > 20:
                continue
            got = recon.xi_oracle(s)
            assert abs(got - ref(s)) <= 1e-10 * abs(ref(s))


class TestPrimes:
    def test_small(self):
        assert list(recon.primes_upto(20)) == [2, 3, 5, 7, 11, 13, 17, 19]

    def test_count_to_10000(self):
        assert len(recon.primes_upto(10**4)) == 1229

    def test_empty(self):
        assert len(recon.primes_upto(1)) == 0
