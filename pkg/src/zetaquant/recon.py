"""Reconstruction of classical functions from their zeros via regularized
determinants: rational functions, Gamma, the Euler product, xi, zeta, and
arbitrary finite-order entire functions (the quantized Hadamard form).

Every reconstruction has an independent oracle next to it: a Lanczos
approximation for Gamma, a Borwein-accelerated alternating series for zeta
(with the functional equation below Re(s) = 0), and their composition for
xi.  The oracles never touch the determinant machinery.

Zero datasets carry only the positive heights t_k of zeros on the critical
line (one decimal per row); the construction synthesizes rho = 1/2 + i t
and its conjugate.  The self-adjointness predicate built from such data
therefore tests that the *data* is real, not the Riemann hypothesis.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import NamedTuple, Optional, Sequence, Tuple

import numpy as np

from .errors import DomainError, ParseError, PoleZeroError
from .factors import exact_complex_sum, stable_log1p
from .opmodel import (
    DiagonalOperator,
    TailModel,
    ZeroMultiset,
    diagonal_operator,
    from_zeros,
)
from .regdet import RegDetRequest, det_fredholm, det_p

EULER_GAMMA = float(np.euler_gamma)

# ---------------------------------------------------------------------------
# Oracles
# ---------------------------------------------------------------------------

# Lanczos g=7, n=9 coefficient set; relative accuracy ~1e-13 on the
# right half-plane, extended by reflection.
_LANCZOS_G = 7.0
_LANCZOS_COEF = (
    0.99999999999980993,
    676.5203681218851,
    -1259.1392167224028,
    771.32342877765313,
    -176.61502916214059,
    12.507343278686905,
    -0.13857109526572012,
    9.9843695780195716e-6,
    1.5056327351493116e-7,
)


def _is_nonpositive_integer(z: complex) -> bool:
    return z.imag == 0.0 and z.real <= 0.0 and z.real == math.floor(z.real)


def gamma_oracle(z: complex) -> complex:
    """Gamma(z) by the Lanczos approximation (reference route)."""
    z = complex(z)
    if _is_nonpositive_integer(z):
        raise PoleZeroError(f"Gamma pole at {z}")
    if z.real < 0.5:
        # reflection: Gamma(z) Gamma(1-z) = pi / sin(pi z)
        return math.pi / (cmath.sin(math.pi * z) * gamma_oracle(1.0 - z))
    z -= 1.0
    x = _LANCZOS_COEF[0]
    for i, c in enumerate(_LANCZOS_COEF[1:], start=1):
        x += c / (z + i)
    t = z + _LANCZOS_G + 0.5
    return math.sqrt(2.0 * math.pi) * t ** (z + 0.5) * cmath.exp(-t) * x


def _borwein_d(n: int) -> Tuple[float, ...]:
    """Borwein's Chebyshev-derived weights d_0..d_n, built in exact arithmetic."""
    d = []
    acc = Fraction(0)
    for k in range(n + 1):
        acc += Fraction(
            math.factorial(n + k - 1) * 4**k,
            math.factorial(n - k) * math.factorial(2 * k),
        )
        d.append(float(n * acc))
    return tuple(d)


_BORWEIN_N = 64
_BORWEIN_D = _borwein_d(_BORWEIN_N)


def _eta_borwein(s: complex) -> complex:
    """Dirichlet eta(s) by Borwein's accelerated alternating series."""
    n = _BORWEIN_N
    d = _BORWEIN_D
    total = 0.0 + 0.0j
    for k in range(n):
        total += ((-1) ** k) * (d[k] - d[n]) * cmath.exp(-s * math.log(k + 1))
    return -total / d[n]


def zeta_oracle(s: complex) -> complex:
    """zeta(s): Borwein eta acceleration for Re(s) > 0, reflection otherwise.

    Documented accuracy: better than 1e-10 relative for |s| <= 20 with
    |Im s| <= 50, away from s = 1 and (for the eta route) away from the
    removable points s = 1 + 2 pi i k / log 2, k != 0.
    """
    s = complex(s)
    if s == 1.0:
        raise PoleZeroError("zeta pole at s = 1")
    if s == 0.0:
        # reflection is 0*inf here; the value is classical
        return complex(-0.5)
    if s.real > 0.0:
        return _eta_borwein(s) / (1.0 - cmath.exp((1.0 - s) * math.log(2.0)))
    # functional equation: zeta(s) = 2^s pi^{s-1} sin(pi s/2) Gamma(1-s) zeta(1-s)
    if _is_nonpositive_integer(s / 2.0):
        return complex(0.0)  # trivial zeros: sin factor vanishes, rest finite
    return (
        2.0**s
        * math.pi ** (s - 1.0)
        * cmath.sin(math.pi * s / 2.0)
        * gamma_oracle(1.0 - s)
        * zeta_oracle(1.0 - s)
    )


def xi_oracle(s: complex) -> complex:
    """Completed zeta xi(s) = (1/2) pi^{-s/2} s(s-1) Gamma(s/2) zeta(s).

    Uses s(s-1)Gamma(s/2) = 2(s-1)Gamma(s/2 + 1) so s = 0 needs no limit,
    and the exact symmetry xi(s) = xi(1-s) to stay on Re(s) >= 1/2 where
    neither factor degenerates.
    """
    s = complex(s)
    if s == 0.0 or s == 1.0:
        return complex(0.5)
    if s.real < 0.5:
        s = 1.0 - s
    return (
        0.5
        * cmath.exp(-(s / 2.0) * math.log(math.pi))
        * (s - 1.0)
        * 2.0
        * gamma_oracle(s / 2.0 + 1.0)
        * zeta_oracle(s)
    )


def primes_upto(limit: int) -> np.ndarray:
    if limit < 2:
        return np.empty(0, dtype=np.int64)
    sieve = np.ones(limit + 1, dtype=bool)
    sieve[:2] = False
    for p in range(2, int(limit**0.5) + 1):
        if sieve[p]:
            sieve[p * p :: p] = False
    return np.flatnonzero(sieve).astype(np.int64)


# ---------------------------------------------------------------------------
# Zero datasets
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ZeroDataset:
    """Strictly increasing positive heights t_k of critical-line zeros."""

    heights: np.ndarray
    source: str
    count: int

    def first(self, n: int) -> np.ndarray:
        if n > self.count:
            raise DomainError(f"dataset {self.source!r} holds {self.count} zeros, need {n}")
        return self.heights[:n]


def load_zero_dataset(path) -> ZeroDataset:
    """Parse an LMFDB-style first-N-zeros file: one positive height per line.

    Lines starting with '#' and blank lines are skipped.  Heights must be
    strictly increasing; violations raise ParseError with the line number.
    """
    heights = []
    last = 0.0
    with open(path, "r", encoding="ascii") as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            try:
                t = float(line)
            except ValueError:
                raise ParseError(f"line {lineno}: not a decimal height: {line!r}", lineno)
            if not math.isfinite(t) or t <= 0.0:
                raise ParseError(f"line {lineno}: height must be a positive real", lineno)
            if t <= last:
                raise ParseError(
                    f"line {lineno}: heights must be strictly increasing "
                    f"({t!r} after {last!r})",
                    lineno,
                )
            heights.append(t)
            last = t
    arr = np.asarray(heights, dtype=float)
    arr.flags.writeable = False
    return ZeroDataset(arr, str(path), len(arr))


def xihat_operator(data: ZeroDataset, extra_zeros: Sequence[complex] = ()) -> DiagonalOperator:
    """Operator of xi-hat(s) = xi(1/2 + i s): diagonal 1/(+-t_k).

    `extra_zeros` lets tests inject synthetic (possibly complex) heights;
    the self-adjointness predicate on the result tests data reality only.
    """
    t = data.heights
    zeros = np.empty(2 * len(t) + 2 * len(extra_zeros), dtype=complex)
    zeros[0 : 2 * len(t) : 2] = t
    zeros[1 : 2 * len(t) : 2] = -t
    for i, h in enumerate(extra_zeros):
        zeros[2 * len(t) + 2 * i] = h
        zeros[2 * len(t) + 2 * i + 1] = -complex(h)
    return diagonal_operator(1.0 / zeros, tail=TailModel.power_law(1.0))


# ---------------------------------------------------------------------------
# Reconstructions
# ---------------------------------------------------------------------------


class ReconResult(NamedTuple):
    value: complex
    tail_estimate: float


def rational_reconstruct(
    zeros: Optional[ZeroMultiset],
    poles: Optional[ZeroMultiset],
    k: int,
    g0: complex,
    z: complex,
    exact: bool = False,
) -> complex:
    """f(z) = z^k g(0) det_1(I - z D_zeros) / det_1(I - z D_poles).

    With exact=True all inputs must be Fractions (or ints); the product is
    then evaluated in exact rational arithmetic.
    """
    if exact:
        zf = Fraction(z)
        num = Fraction(1)
        for v, m in zeros.entries() if zeros is not None else ():
            if v.imag != 0.0:
                raise DomainError("exact path requires real rational zeros")
            num *= (1 - zf / Fraction(v.real)) ** m
        den = Fraction(1)
        for i, (v, m) in enumerate(poles.entries() if poles is not None else ()):
            if v.imag != 0.0:
                raise DomainError("exact path requires real rational poles")
            f = 1 - zf / Fraction(v.real)
            if f == 0:
                raise PoleZeroError(f"evaluation at pole index {i}", index=i)
            den *= f**m
        return Fraction(g0) * zf**k * num / den

    z = complex(z)
    num = 1.0 + 0.0j
    if zeros is not None and len(zeros):
        num = det_fredholm(from_zeros(zeros), z, zeros.total()).value
    den = 1.0 + 0.0j
    if poles is not None and len(poles):
        dres = det_fredholm(from_zeros(poles), z, poles.total())
        if dres.zero_index is not None:
            raise PoleZeroError(
                f"evaluation at pole index {dres.zero_index}", index=dres.zero_index
            )
        den = dres.value
    return z**k * complex(g0) * num / den


def gamma_reconstruct(z: complex, N: int) -> ReconResult:
    """Gamma(z) = (e^{-gamma z}/z) / det_2(I - z D), D the diagonal (-1/n).

    The sequence (-1/n) is square summable but not summable, so the order-2
    determinant is the first one defined.  Relative truncation error is
    about |z|^2/(2N).
    """
    z = complex(z)
    if N < 1:
        raise DomainError("N must be >= 1")
    if _is_nonpositive_integer(z):
        raise PoleZeroError(f"Gamma pole at {z}")
    n = np.arange(1, N + 1, dtype=float)
    op = diagonal_operator(-1.0 / n, tail=TailModel.power_law(1.0))
    det = det_p(op, RegDetRequest(2, z, N))
    if det.zero_index is not None:  # pragma: no cover - pole check above
        raise PoleZeroError("determinant factor vanished", index=det.zero_index)
    value = cmath.exp(-EULER_GAMMA * z) / z / det.value
    return ReconResult(value, abs(z) ** 2 / (2.0 * N))


def euler_product_det(s: complex, prime_bound: int) -> complex:
    """zeta(s) = prod_p det(I - p^{-s} D_phi)^{-1} over primes p <= bound.

    D_phi is the one-entry operator of phi(z) = 1 - z (diagonal {1});
    each factor goes through det_fredholm on it.  Valid for Re(s) > 1.
    """
    s = complex(s)
    if s.real <= 1.0:
        raise DomainError("Euler product requires Re(s) > 1")
    if prime_bound < 2:
        raise DomainError("prime_bound must be >= 2")
    op_phi = from_zeros(ZeroMultiset.from_values([1.0]))
    logs = []
    for p in primes_upto(prime_bound):
        pms = cmath.exp(-s * math.log(float(p)))
        det = det_fredholm(op_phi, pms, 1)
        logs.append(cmath.log(det.value))
    total = exact_complex_sum(np.asarray(logs))
    return cmath.exp(-total)


_XI_EXP_CONST = math.log(2.0 * math.pi) - 1.0 - EULER_GAMMA / 2.0


def _xi_det2(s: complex, t: np.ndarray) -> Tuple[complex, Optional[int]]:
    """det_2(I - s D_xi) over zeros 1/2 +- i t, conjugate pairs combined.

    Each zero contributes log1p(-s/rho) + s/rho; for real s the pair logs
    are exact conjugates, so the fsum of imaginary parts vanishes and the
    product is real.
    """
    rho = 0.5 + 1j * t
    rho_bar = 0.5 - 1j * t
    logs = np.empty(2 * len(t), dtype=complex)
    w1 = -s / rho
    w2 = -s / rho_bar
    if np.any(1.0 + w1 == 0.0) or np.any(1.0 + w2 == 0.0):
        idx = np.flatnonzero((1.0 + w1 == 0.0) | (1.0 + w2 == 0.0))[0]
        return 0.0 + 0.0j, int(idx)
    logs[0::2] = stable_log1p(w1) - w1
    logs[1::2] = stable_log1p(w2) - w2
    total = exact_complex_sum(logs)
    if complex(s).imag == 0.0:
        total = complex(total.real, 0.0)
    return cmath.exp(total), None


def _xi_tail_estimate(s: complex, last_height: float) -> float:
    """|s|^2/2 times the zero-counting density integrated past the data.

    Density (1/2pi) log(t/2pi) and per-pair log magnitude ~ |s|^2/t^2 give
    (|s|^2/2) (1/pi) (log(T/2pi) + 1)/T.  Reported, not certified.
    """
    T = last_height
    return abs(s) ** 2 / 2.0 * (math.log(T / (2.0 * math.pi)) + 1.0) / (math.pi * T)


def xi_reconstruct(s: complex, data: ZeroDataset, N: int) -> ReconResult:
    """xi(s) = (1/2) pi^{-s/2} e^{(log 2pi - 1 - gamma/2) s} det_2(I - s D_xi).

    Zeros are synthesized from the first N heights as 1/2 + i t and the
    conjugate; the product multiplies conjugate pairs together, and on-line
    zeros make the rho <-> 1 - rho pairing coincide with conjugation.
    """
    s = complex(s)
    if N < 1:
        raise DomainError("N must be >= 1")
    t = data.first(N)
    det2, dead = _xi_det2(s, t)
    pref = 0.5 * cmath.exp(-(s / 2.0) * math.log(math.pi)) * cmath.exp(_XI_EXP_CONST * s)
    if dead is not None:
        return ReconResult(0.0 + 0.0j, 0.0)
    return ReconResult(pref * det2, _xi_tail_estimate(s, float(t[-1])))


def zeta_reconstruct(
    s: complex, data: ZeroDataset, N: int, gamma_terms: int = 10**6
) -> complex:
    """zeta(s) from three determinants:

        -(e^{(log 2pi - 1) s} / 2) det_2(I - (s/2) D_Gamma) det_2(I - s D_xi)
                                   / det_1(I - s D_phi)

    The first factor (diagonal -1/n) carries the trivial zeros, the second
    the critical zeros, the third (diagonal {1}) the pole at s = 1.
    """
    s = complex(s)
    if s == 1.0:
        raise PoleZeroError("zeta pole at s = 1")
    n = np.arange(1, gamma_terms + 1, dtype=float)
    op_g = diagonal_operator(-1.0 / n, tail=TailModel.power_law(1.0))
    det_g = det_p(op_g, RegDetRequest(2, s / 2.0, gamma_terms))
    t = data.first(N)
    det_xi, dead_xi = _xi_det2(s, t)
    if det_g.zero_index is not None or dead_xi is not None:
        return 0.0 + 0.0j  # a determinant factor vanished: s is a zero of zeta
    det_phi = det_fredholm(from_zeros(ZeroMultiset.from_values([1.0])), s, 1)
    value = (
        -cmath.exp((math.log(2.0 * math.pi) - 1.0) * s)
        / 2.0
        * det_g.value
        * det_xi
        / det_phi.value
    )
    if s.imag == 0.0:
        value = complex(value.real, 0.0)
    return value


# ---------------------------------------------------------------------------
# Quantized Hadamard factorization
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class HadamardData:
    """Inputs of the quantized Hadamard form f(z) = z^m e^{g(z)} det_{p+1}(I - z D_f).

    g_coeffs are monomial coefficients of the polynomial g, degree <=
    order_lambda; p = floor(order_lambda).
    """

    zeros: ZeroMultiset
    m: int
    g_coeffs: Tuple[complex, ...]
    order_lambda: float

    def __post_init__(self):
        if self.m < 0:
            raise DomainError("order of vanishing m must be >= 0")
        if self.order_lambda < 0:
            raise DomainError("order_lambda must be >= 0")
        object.__setattr__(self, "g_coeffs", tuple(complex(c) for c in self.g_coeffs))
        deg = len(self.g_coeffs) - 1
        while deg >= 0 and self.g_coeffs[deg] == 0:
            deg -= 1
        if deg > self.order_lambda:
            raise DomainError(
                f"deg g = {deg} exceeds the declared order {self.order_lambda}"
            )

    @property
    def p(self) -> int:
        return int(math.floor(self.order_lambda))

    def g_at(self, z: complex) -> complex:
        acc = 0.0 + 0.0j
        for c in reversed(self.g_coeffs):
            acc = acc * z + c
        return acc


def hadamard_reconstruct(
    data: HadamardData, z: complex, N: int, tail: Optional[TailModel] = None
) -> ReconResult:
    """Evaluate the quantized Hadamard factorization at z, truncated at N zeros.

    The declared tail model must certify order p+1 (reciprocal zeros
    (p+1)-power summable) or CertificationError is raised.
    """
    z = complex(z)
    op = from_zeros(data.zeros, tail=tail if tail is not None else TailModel.finite())
    order = data.p + 1
    det = det_p(op, RegDetRequest(order, z, N))
    value = z**data.m * cmath.exp(data.g_at(z)) * det.value
    return ReconResult(value, det.tail_estimate)


def sinc_fixture(n_pairs: int) -> HadamardData:
    """Zeros +-1, +-2, ..., +-n of sin(pi z)/(pi z); order 1, g = 0."""
    zeros = np.empty(2 * n_pairs, dtype=complex)
    k = np.arange(1, n_pairs + 1, dtype=float)
    zeros[0::2] = k
    zeros[1::2] = -k
    return HadamardData(ZeroMultiset.from_values(zeros), 0, (), 1.0)


def sinc_oracle(z: complex) -> complex:
    """sin(pi z)/(pi z), the direct-evaluation oracle for the sinc fixture."""
    z = complex(z)
    if z == 0.0:
        return complex(1.0)
    return cmath.sin(math.pi * z) / (math.pi * z)
