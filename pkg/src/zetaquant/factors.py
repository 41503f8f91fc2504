"""Scalar kernels: Weierstrass elementary factors and regularized-determinant terms.

Everything here is pure and stateless.  The kernels are written so that the
log of a product factor is computed without cancellation for small arguments;
the large determinant products in :mod:`zetaquant.regdet` reduce arrays of
these per-eigenvalue logs with error-free summation.
"""

from __future__ import annotations

import cmath
import math
from math import fsum

import numpy as np

from .errors import PoleZeroError, RangeOverflowError

# Largest x with exp(x) finite in IEEE double.
_EXP_MAX = 709.0

# |z| at or below which elementary_factor uses the log1p path.
LOG_PATH_RADIUS = 0.5


def stable_log1p(w):
    """Principal log(1 + w) for complex w, accurate for |w| near 0 and near -1.

    Accepts a scalar or an ndarray.  For Re(w) >= -1/2 the real part goes
    through the real log1p applied to 2*Re(w) + |w|^2 (absolute error near
    eps*|w|, where numpy's complex log1p loses digits); for Re(w) < -1/2
    the sum 1 + Re(w) is exact (Sterbenz) and log(hypot) is accurate down
    to the pole.
    """
    w = np.asarray(w)
    if not np.iscomplexobj(w):
        return np.log1p(w)
    wr = w.real
    wi = w.imag
    with np.errstate(invalid="ignore", divide="ignore"):
        near_zero = 0.5 * np.log1p(wr * (2.0 + wr) + wi * wi)
        near_pole = np.log(np.hypot(1.0 + wr, wi))
    re = np.where(wr >= -0.5, near_zero, near_pole)
    im = np.arctan2(wi, 1.0 + wr)
    out = re + 1j * im
    if out.ndim == 0:
        return complex(out)
    return out


def _power_sum(z: complex, n: int) -> complex:
    """sum_{j=1}^{n} z^j / j."""
    total = 0.0 + 0.0j
    zj = 1.0 + 0.0j
    for j in range(1, n + 1):
        zj *= z
        total += zj / j
    return total


def _checked_exp(w: complex) -> complex:
    if w.real > _EXP_MAX:
        raise RangeOverflowError(f"exp overflow: Re(exponent) = {w.real:.6g}")
    try:
        return cmath.exp(w)
    except OverflowError as exc:  # pragma: no cover - guarded above
        raise RangeOverflowError(str(exc)) from exc


def elementary_factor(n: int, z: complex) -> complex:
    """Weierstrass elementary factor E_n(z).

    E_0(z) = 1 - z and E_n(z) = (1 - z) exp(z + z^2/2 + ... + z^n/n).
    For |z| <= 1/2 the factor is evaluated as exp(log1p(-z) + sum z^j/j)
    to avoid cancellation between the two pieces.
    """
    if n < 0:
        raise ValueError("n must be a nonnegative integer")
    z = complex(z)
    if not (math.isfinite(z.real) and math.isfinite(z.imag)):
        raise ValueError("z must be finite")
    if n == 0:
        return 1.0 - z
    s = _power_sum(z, n)
    if abs(z) <= LOG_PATH_RADIUS:
        return _checked_exp(stable_log1p(-z) + s)
    if z == 1.0:
        return 0.0 + 0.0j
    return (1.0 - z) * _checked_exp(s)


def _regdet_correction(p: int, w: complex) -> complex:
    """sum_{j=1}^{p-1} (-1)^j j^{-1} w^j (the det_p convergence exponent)."""
    total = 0.0 + 0.0j
    wj = 1.0 + 0.0j
    for j in range(1, p):
        wj *= w
        total += ((-1) ** j) * wj / j
    return total


def regdet_term(p: int, lam: complex, mu: complex) -> complex:
    """Single-eigenvalue factor of det_p(I + mu*A) at eigenvalue lam.

    (1 + mu*lam) * exp(sum_{j=1}^{p-1} (-1)^j j^{-1} (lam*mu)^j); p = 1
    gives the plain Fredholm factor 1 + mu*lam.
    """
    if p < 1:
        raise ValueError("p must be a positive integer")
    w = complex(mu) * complex(lam)
    if p == 1:
        return 1.0 + w
    return (1.0 + w) * _checked_exp(_regdet_correction(p, w))


def regdet_log_term(p: int, lam: complex, mu: complex) -> complex:
    """Principal log of regdet_term(p, lam, mu).

    Raises PoleZeroError when 1 + mu*lam = 0 (log of a zero factor).
    """
    if p < 1:
        raise ValueError("p must be a positive integer")
    w = complex(mu) * complex(lam)
    if 1.0 + w == 0.0:
        raise PoleZeroError("factor 1 + mu*lam vanishes; log term undefined")
    return stable_log1p(w) + _regdet_correction(p, w)


def regdet_log_terms(p: int, w: np.ndarray) -> np.ndarray:
    """Vectorized regdet log terms for an array of products w = mu*lam.

    The caller is responsible for masking out exact zeros of 1 + w.
    """
    w = np.asarray(w, dtype=complex)
    out = stable_log1p(w).astype(complex, copy=True)
    if p > 1:
        wj = np.ones_like(w)
        for j in range(1, p):
            wj = wj * w
            out += ((-1) ** j) * wj / j
    return out


def ordered_compensated_sum(terms) -> complex:
    """Componentwise Neumaier-compensated sum, in the given order.

    Deterministic for a fixed input order; returns a complex scalar.
    """
    sr = 0.0
    cr = 0.0
    si = 0.0
    ci = 0.0
    for t in terms:
        t = complex(t)
        for val, is_real in ((t.real, True), (t.imag, False)):
            if is_real:
                total = sr + val
                if abs(sr) >= abs(val):
                    cr += (sr - total) + val
                else:
                    cr += (val - total) + sr
                sr = total
            else:
                total = si + val
                if abs(si) >= abs(val):
                    ci += (si - total) + val
                else:
                    ci += (val - total) + si
                si = total
    return complex(sr + cr, si + ci)


def exact_complex_sum(values: np.ndarray) -> complex:
    """Correctly rounded componentwise sum of a complex array (via fsum)."""
    values = np.asarray(values)
    if np.iscomplexobj(values):
        return complex(fsum(values.real.tolist()), fsum(values.imag.tolist()))
    return complex(fsum(values.tolist()), 0.0)
