"""Regularized determinants det_p(I - z D) for diagonal operators, plus
small dense-matrix oracles for every determinant identity they rest on.

The infinite-dimensional side is a truncated product over the diagonal:
each eigenvalue contributes the factor (1 + mu*lam) exp(sum_{j<p} (-1)^j
j^{-1} (lam mu)^j) with mu = -z.  Logs of the factors are computed with
the stable kernels from :mod:`zetaquant.factors` and reduced chunkwise
with fsum (an error-free transformation within each fixed-size chunk), so
the reported value is deterministic and independent of worker count, and
conjugate term pairs cancel their imaginary parts exactly.

The dense-matrix side evaluates the same determinants on matrices of
dimension <= ORACLE_DIM_BOUND by two independent routes (eigenvalue
product vs det(I + R_n) after an explicit matrix exponential) and serves
as the oracle for the truncated products.
"""

from __future__ import annotations

import cmath
import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import NamedTuple, Optional

import numpy as np
import scipy.linalg

from .errors import (
    CertificationError,
    ConsistencyError,
    ConstructionError,
    DomainError,
    PoleZeroError,
    RangeOverflowError,
)
from .factors import exact_complex_sum, regdet_log_terms, regdet_term
from .opmodel import DiagonalOperator, TailModel

ORACLE_DIM_BOUND = 64

PAIRING_AS_STORED = "as-stored"
PAIRING_CONJUGATE = "conjugate-paired"
PAIRING_FUNCTIONAL = "functional-paired"
_PAIRINGS = (PAIRING_AS_STORED, PAIRING_CONJUGATE, PAIRING_FUNCTIONAL)

_EXP_MAX = 709.0


@dataclass(frozen=True)
class RegDetRequest:
    """Evaluation request for det_p(I - z D)."""

    order_p: int
    eval_point: complex
    truncation_N: int
    pairing: str = PAIRING_AS_STORED
    tail_model: Optional[TailModel] = None  # None: use the operator's own

    def __post_init__(self):
        if self.order_p < 1:
            raise DomainError("order_p must be >= 1")
        if self.truncation_N < 1:
            raise DomainError("truncation_N must be >= 1")
        if self.pairing not in _PAIRINGS:
            raise DomainError(f"unknown pairing policy {self.pairing!r}")


class DetResult(NamedTuple):
    value: complex
    zero_index: Optional[int]


class DetPResult(NamedTuple):
    value: complex
    tail_estimate: float
    zero_index: Optional[int]


def _worker_count() -> int:
    raw = os.environ.get("ZETAQUANT_THREADS", "1")
    try:
        return max(1, int(raw))
    except ValueError:
        return 1


_CHUNK = 1 << 16


def _sum_logs(logs: np.ndarray) -> complex:
    """Reduction of the per-factor logs, deterministic by construction.

    Terms are split into fixed-size chunks; each chunk is fsum-reduced in
    stored order and the chunk results combine in index order, so the value
    does not depend on the worker count (ZETAQUANT_THREADS only decides how
    many chunks run concurrently).
    """
    if len(logs) <= _CHUNK:
        return exact_complex_sum(logs)
    chunks = [logs[i : i + _CHUNK] for i in range(0, len(logs), _CHUNK)]
    workers = _worker_count()
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            partial = list(pool.map(exact_complex_sum, chunks))
    else:
        partial = [exact_complex_sum(c) for c in chunks]
    return exact_complex_sum(np.asarray(partial))


def _is_conjugate_symmetric(diag: np.ndarray) -> bool:
    return bool(np.array_equal(np.sort_complex(diag), np.sort_complex(diag.conj())))


def _sorted_for_match(arr: np.ndarray) -> np.ndarray:
    # sort by imaginary part first: near-equal real parts (e.g. critical-line
    # zeros) would otherwise scramble the pairing under lexicographic order
    return arr[np.lexsort((arr.real, arr.imag))]


def _is_functional_paired(diag: np.ndarray) -> bool:
    # zeros rho = 1/lam must be closed under rho -> 1 - rho
    rho = 1.0 / diag
    a = _sorted_for_match(rho)
    b = _sorted_for_match(1.0 - rho)
    return bool(np.allclose(a, b, rtol=1e-9, atol=1e-12))


def _check_pairing(diag: np.ndarray, pairing: str) -> None:
    if pairing == PAIRING_CONJUGATE and not _is_conjugate_symmetric(diag):
        raise DomainError("conjugate-paired evaluation requires a conjugate-symmetric diagonal")
    if pairing == PAIRING_FUNCTIONAL:
        if not _is_conjugate_symmetric(diag):
            raise DomainError("functional-paired evaluation requires a conjugate-symmetric diagonal")
        if not _is_functional_paired(diag):
            raise DomainError("functional-paired evaluation requires zeros closed under rho -> 1-rho")


def _truncated_product(diag: np.ndarray, z: complex, p: int, pairing: str) -> DetResult:
    """exp of the fsum of factor logs; exact 0 with index if a factor vanishes."""
    if len(diag) == 0:
        return DetResult(1.0 + 0.0j, None)
    _check_pairing(diag, pairing)
    w = (-z) * diag
    dead = np.flatnonzero(1.0 + w == 0.0)
    if len(dead):
        return DetResult(0.0 + 0.0j, int(dead[0]))
    logs = regdet_log_terms(p, w)
    total = _sum_logs(logs)
    if pairing != PAIRING_AS_STORED and complex(z).imag == 0.0:
        # Conjugate factor logs cancel imaginary parts exactly under fsum;
        # chop any residual so the paired product is real for real z.
        total = complex(total.real, 0.0)
    if total.real > _EXP_MAX:
        raise RangeOverflowError("determinant product overflows double range")
    return DetResult(cmath.exp(total), None)


def _tail_bound(diag: np.ndarray, z: complex, p: int, n_used: int, tail: TailModel) -> float:
    """Bound on |log truncated - log full| under a power-law tail model.

    Leading log-term beyond the truncation is -(z z_n)^p / p, and
    |z_n| ~ |z_N| (n/N)^{-kappa}, so integral comparison gives
    sum_{n>N} |z z_n|^p <= |z z_N|^p N / (p kappa - 1).  The factor 2
    covers the higher-order remainder for |z z_N| <= 1/2.
    """
    if tail.kind != "power-law":
        return 0.0
    kappa = tail.kappa
    scale = abs(z) * abs(diag[n_used - 1])
    if scale == 0.0:
        return 0.0
    if scale > 0.5:
        return math.inf  # bound valid only for |z| sup_{n>N} |z_n| <= 1/2
    return 2.0 * scale**p * n_used / (p * kappa - 1.0)


def _certify(op_len: int, tail: TailModel, order_p: int, n: int) -> None:
    if tail.kind == "finite":
        if n < op_len:
            raise CertificationError(
                f"finite tail model but truncation {n} < stored length {op_len}"
            )
        return
    if n > op_len:
        raise DomainError(f"truncation {n} exceeds the {op_len} stored entries")
    if tail.kind == "power-law":
        if order_p * tail.kappa <= 1.0:
            raise CertificationError(
                f"order {order_p} not certified: p*kappa = {order_p * tail.kappa:g} <= 1"
            )
        return
    if order_p < tail.p_star:
        raise CertificationError(
            f"order {order_p} below declared summability exponent {tail.p_star}"
        )


def det_p(op: DiagonalOperator, req: RegDetRequest) -> DetPResult:
    """Truncated det_p(I - z D) with a tail estimate.

    The product runs over the first truncation_N diagonal entries under the
    requested pairing policy.  The tail estimate bounds the log error under
    the tail model (0 for certified-finite diagonals, inf when the bound's
    validity condition fails).
    """
    tail = req.tail_model if req.tail_model is not None else op.tail
    _certify(len(op.diagonal), tail, req.order_p, req.truncation_N)
    n = min(req.truncation_N, len(op.diagonal))
    diag = op.diagonal[:n]
    z = complex(req.eval_point)
    if z == 0.0:
        return DetPResult(1.0 + 0.0j, 0.0, None)
    value, zero_index = _truncated_product(diag, z, req.order_p, req.pairing)
    if zero_index is not None:
        return DetPResult(0.0 + 0.0j, 0.0, zero_index)
    est = _tail_bound(diag, z, req.order_p, n, tail) if n else 0.0
    return DetPResult(value, est, None)


def det_fredholm(op: DiagonalOperator, z: complex, N: int, certified: bool = True) -> DetResult:
    """Fredholm determinant det(I - z D) = prod (1 - z_n z), truncated at N.

    Same code path as det_p with order 1.  `certified` demands the operator
    be trace class under its tail model; pass False to evaluate anyway.
    """
    if certified:
        tail = op.tail
        if tail.kind == "power-law" and tail.kappa <= 1.0:
            raise CertificationError("operator not certified trace class (kappa <= 1)")
        if tail.kind == "declared" and tail.p_star > 1:
            raise CertificationError(
                f"operator declared J_{tail.p_star}, not trace class"
            )
        if tail.kind == "finite" and N < len(op.diagonal):
            raise CertificationError(
                f"finite diagonal of length {len(op.diagonal)} but truncation {N}"
            )
    n = min(N, len(op.diagonal))
    return _truncated_product(op.diagonal[:n], complex(z), 1, PAIRING_AS_STORED)


# ---------------------------------------------------------------------------
# Dense-matrix oracles
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class DenseMatrix:
    """Small complex matrix used as a brute-force determinant oracle."""

    entries: np.ndarray
    bound: int = ORACLE_DIM_BOUND

    def __post_init__(self):
        arr = np.asarray(self.entries, dtype=complex)
        if arr.ndim != 2 or arr.shape[0] != arr.shape[1]:
            raise ConstructionError("DenseMatrix must be square")
        if arr.shape[0] > self.bound:
            raise ConstructionError(
                f"dim {arr.shape[0]} exceeds oracle bound {self.bound}"
            )
        if not np.all(np.isfinite(arr.real) & np.isfinite(arr.imag)):
            raise ConstructionError("matrix entries must be finite")
        arr = arr.copy()
        arr.flags.writeable = False
        object.__setattr__(self, "entries", arr)

    @property
    def dim(self) -> int:
        return self.entries.shape[0]


def rn_matrix(A: DenseMatrix, n: int) -> DenseMatrix:
    """R_n(A) = (I + A) exp(sum_{j=1}^{n-1} (-1)^j j^{-1} A^j) - I.

    The matrix exponential uses scipy's scaling-and-squaring Pade
    implementation on the polynomial in A.
    """
    if n < 1:
        raise DomainError("n must be >= 1")
    B = A.entries
    d = A.dim
    eye = np.eye(d, dtype=complex)
    poly = np.zeros((d, d), dtype=complex)
    power = eye
    for j in range(1, n):
        power = power @ B
        poly += ((-1) ** j) / j * power
    R = (eye + B) @ scipy.linalg.expm(poly) - eye
    return DenseMatrix(R, bound=A.bound)


def matrix_det_p(A: DenseMatrix, n: int, mu: complex, rtol: float = 1e-10) -> complex:
    """det_n(I + mu A) by eigenvalue product, cross-checked against det(I + R_n(mu A)).

    The two routes are each other's oracle; disagreement beyond rtol raises
    ConsistencyError.  Returns the eigenvalue-product value.
    """
    mu = complex(mu)
    lams = np.linalg.eigvals(A.entries)
    prod = 1.0 + 0.0j
    for lam in lams:
        prod *= regdet_term(n, complex(lam), mu)
    muA = DenseMatrix(mu * A.entries, bound=A.bound)
    direct = complex(np.linalg.det(np.eye(A.dim, dtype=complex) + rn_matrix(muA, n).entries))
    scale = max(abs(prod), abs(direct), 1e-300)
    if abs(prod - direct) / scale > rtol:
        raise ConsistencyError(
            f"det_{n} routes disagree: eig-product {prod}, det(I+R_n) {direct}"
        )
    return prod


@dataclass(frozen=True)
class RouteReport:
    """Two evaluation routes of one identity and their relative discrepancy."""

    lhs: complex
    rhs: complex
    rel_discrepancy: float


def _route_report(lhs: complex, rhs: complex) -> RouteReport:
    scale = max(abs(lhs), abs(rhs), 1e-300)
    return RouteReport(lhs, rhs, abs(lhs - rhs) / scale)


def det_trace_relation_check(A: DenseMatrix, mu: complex, n: int) -> RouteReport:
    """det_n(I + mu A) vs det(I + mu A) * exp(sum_{j<n} (-1)^j j^{-1} Tr((mu A)^j))."""
    if n < 1:
        raise DomainError("n must be >= 1")
    mu = complex(mu)
    lhs = matrix_det_p(A, n, mu)
    B = mu * A.entries
    d = A.dim
    det = complex(np.linalg.det(np.eye(d, dtype=complex) + B))
    expo = 0.0 + 0.0j
    power = np.eye(d, dtype=complex)
    for j in range(1, n):
        power = power @ B
        expo += ((-1) ** j) / j * np.trace(power)
    return _route_report(lhs, det * cmath.exp(expo))


def exp_trace_identity_check(A: DenseMatrix, t: complex, terms: int = 60) -> RouteReport:
    """exp(sum t^n Tr(A^n)/n) vs det(I - t A)^{-1} for |t| rho(A) < 1.

    Traces come from explicit matrix powers, the right side from an LU
    determinant, so the two sides share no intermediate quantities.
    """
    t = complex(t)
    rho = float(np.abs(np.linalg.eigvals(A.entries)).max()) if A.dim else 0.0
    if abs(t) * rho >= 1.0:
        raise DomainError(f"|t|*rho(A) = {abs(t) * rho:g} must be < 1")
    B = A.entries
    d = A.dim
    series = 0.0 + 0.0j
    power = np.eye(d, dtype=complex)
    tn = 1.0 + 0.0j
    for k in range(1, terms + 1):
        power = power @ B
        tn *= t
        series += tn * np.trace(power) / k
    lhs = cmath.exp(series)
    det = complex(np.linalg.det(np.eye(d, dtype=complex) - t * B))
    if det == 0.0:
        raise PoleZeroError("det(I - tA) vanished inside the claimed domain")
    return _route_report(lhs, 1.0 / det)
