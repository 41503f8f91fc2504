"""Diagonal operator model: zero multisets, reciprocal diagonals, trace-ideal class.

A multiset of zeros (or poles) a_n, none equal to 0, yields the diagonal
operator with entries z_n = 1/a_n acting on the total eigenspace.  The
spectrum, eigenvalue multiplicities, operator norm and J_p membership of
that operator are all sequence-level statements, so the model stores the
expanded reciprocal sequence and a declared tail model and answers the
classification questions from those.

Summability of an infinite sequence cannot be decided from a finite
truncation, so membership certificates always go through an explicit
TailModel: `finite` (the stored entries are all there are), `power-law`
(|z_n| = Theta(n^-kappa), so sum |z_n|^p converges iff p*kappa > 1), or
`declared` (the caller asserts the least summability exponent).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterator, Optional, Sequence, Tuple

import numpy as np

from .errors import ConstructionError, DomainError

KIND_ZEROS = "zeros"
KIND_POLES = "poles"


@dataclass(frozen=True)
class TailModel:
    """Declared behaviour of the sequence beyond the stored truncation."""

    kind: str  # 'finite' | 'power-law' | 'declared'
    kappa: Optional[float] = None
    p_star: Optional[int] = None

    @classmethod
    def finite(cls) -> "TailModel":
        return cls("finite")

    @classmethod
    def power_law(cls, kappa: float) -> "TailModel":
        if not kappa > 0:
            raise DomainError("power-law tail model requires kappa > 0")
        return cls("power-law", kappa=float(kappa))

    @classmethod
    def declared(cls, p_star: int) -> "TailModel":
        if p_star < 1:
            raise DomainError("declared p_star must be >= 1")
        return cls("declared", p_star=int(p_star))

    @property
    def is_finite(self) -> bool:
        return self.kind == "finite"

    def __str__(self) -> str:
        if self.kind == "power-law":
            return f"power-law({self.kappa:g})"
        if self.kind == "declared":
            return f"declared({self.p_star})"
        return "finite"


FINITE = TailModel.finite()


def _as_complex_array(values) -> np.ndarray:
    arr = np.asarray(values, dtype=complex)
    if arr.ndim != 1:
        arr = arr.reshape(-1)
    if not np.all(np.isfinite(arr.real) & np.isfinite(arr.imag)):
        raise ConstructionError("entries must be finite complex numbers")
    return arr


@dataclass(frozen=True)
class ZeroMultiset:
    """Ordered multiset of complex zeros or poles with multiplicities.

    Backed by parallel numpy arrays so that large generated zero sets
    (e.g. 10^6 entries) stay compact.
    """

    values: np.ndarray
    multiplicities: np.ndarray
    kind: str = KIND_ZEROS

    def __post_init__(self):
        values = _as_complex_array(self.values)
        mults = np.asarray(self.multiplicities, dtype=np.int64).reshape(-1)
        if self.kind not in (KIND_ZEROS, KIND_POLES):
            raise ConstructionError(f"kind must be 'zeros' or 'poles', got {self.kind!r}")
        if values.shape != mults.shape:
            raise ConstructionError("values and multiplicities must have equal length")
        if np.any(values == 0):
            raise ConstructionError("0 is not allowed in a zero/pole multiset")
        if len(mults) and mults.min() < 1:
            raise ConstructionError("multiplicities must be >= 1")
        values.flags.writeable = False
        mults.flags.writeable = False
        object.__setattr__(self, "values", values)
        object.__setattr__(self, "multiplicities", mults)

    @classmethod
    def from_pairs(cls, pairs: Sequence[Tuple[complex, int]], kind: str = KIND_ZEROS) -> "ZeroMultiset":
        values = [v for v, _ in pairs]
        mults = [m for _, m in pairs]
        return cls(np.asarray(values, dtype=complex), np.asarray(mults, dtype=np.int64), kind)

    @classmethod
    def from_values(cls, values, kind: str = KIND_ZEROS) -> "ZeroMultiset":
        arr = _as_complex_array(values)
        return cls(arr, np.ones(len(arr), dtype=np.int64), kind)

    def entries(self) -> Iterator[Tuple[complex, int]]:
        for v, m in zip(self.values, self.multiplicities):
            yield complex(v), int(m)

    def expand(self) -> np.ndarray:
        """Entries repeated by multiplicity, in stored order."""
        return np.repeat(self.values, self.multiplicities)

    def reciprocal(self) -> "ZeroMultiset":
        return ZeroMultiset(1.0 / self.values, self.multiplicities.copy(), self.kind)

    def total(self) -> int:
        return int(self.multiplicities.sum())

    def __len__(self) -> int:
        return len(self.values)


@dataclass(frozen=True)
class DiagonalOperator:
    """Diagonal (multiplication) operator with the reciprocals of a zero multiset.

    `diagonal[k]` is exactly 1/a_k where a_k runs over the expanded source
    entries in stored order.  Immutable after construction.
    """

    diagonal: np.ndarray
    source: Optional[ZeroMultiset] = None
    tail: TailModel = field(default_factory=TailModel.finite)

    def __post_init__(self):
        diag = _as_complex_array(self.diagonal)
        diag.flags.writeable = False
        object.__setattr__(self, "diagonal", diag)

    def __len__(self) -> int:
        return len(self.diagonal)


def diagonal_operator(values, tail: TailModel = FINITE) -> DiagonalOperator:
    """Operator with an explicitly given diagonal (no source multiset)."""
    return DiagonalOperator(_as_complex_array(values), None, tail)


def from_zeros(zeros: ZeroMultiset, tail: TailModel = FINITE) -> DiagonalOperator:
    """Diagonal operator of a zero/pole multiset: entries 1/a_n in source order."""
    expanded = zeros.expand()
    if np.any(expanded == 0):  # unreachable given multiset invariant
        raise ConstructionError("cannot take reciprocals of zero entries")
    return DiagonalOperator(1.0 / expanded, zeros, tail)


@dataclass(frozen=True)
class SpectrumResult:
    points: Tuple[complex, ...]
    includes_zero: bool

    def __contains__(self, z) -> bool:
        return complex(z) in self.points or (self.includes_zero and complex(z) == 0)


def spectrum(op: DiagonalOperator) -> SpectrumResult:
    """Point spectrum of the stored truncation.

    `includes_zero` is set when the operator is tagged as a truncation of
    an infinite sequence (non-finite tail model); the true spectrum then
    also contains the accumulation point 0, which a finite store cannot
    represent.
    """
    unique = tuple(dict.fromkeys(complex(v) for v in op.diagonal))
    return SpectrumResult(unique, not op.tail.is_finite)


def eigen_multiplicity(op: DiagonalOperator, z: complex) -> int:
    """Number of diagonal entries exactly equal to z.

    Exact comparison on stored values: multiplicity is combinatorial data,
    so callers wanting fuzzy matching must canonicalize first.
    """
    return int(np.count_nonzero(op.diagonal == complex(z)))


def operator_norm(op: DiagonalOperator) -> float:
    """sup |z_n| over the stored diagonal (0 for the operator on the zero space)."""
    if len(op.diagonal) == 0:
        return 0.0
    return float(np.abs(op.diagonal).max())


@dataclass(frozen=True)
class IdealClass:
    """Trace-ideal classification of a diagonal operator under a tail model."""

    p_star: Optional[int]
    none_up_to: Optional[int]
    is_bounded: bool
    is_compact: bool
    is_self_adjoint: bool

    def in_Jp(self, p: int) -> bool:
        """Membership in the trace ideal J_p (monotone in p)."""
        return self.p_star is not None and p >= self.p_star

    @property
    def is_trace_class(self) -> bool:
        return self.in_Jp(1)

    @property
    def is_hilbert_schmidt(self) -> bool:
        return self.in_Jp(2)


def classify(
    op: DiagonalOperator,
    p_max: int,
    tol: float = 0.0,
    tail: Optional[TailModel] = None,
) -> IdealClass:
    """Classify boundedness, compactness, self-adjointness and J_p membership.

    p_star is the least p <= p_max whose tail model certifies
    sum |z_n|^p < infinity; `none_up_to` records p_max when no p qualifies.
    Self-adjointness is the diagonal-reality test |Im z_n| <= tol.
    """
    if p_max < 1:
        raise DomainError("p_max must be >= 1")
    tail = tail if tail is not None else op.tail
    diag = op.diagonal

    if len(diag) == 0:
        sa = True
    else:
        sa = bool(np.abs(diag.imag).max() <= tol)

    if tail.kind == "finite":
        # Finite sequences give finite-rank operators: bounded, compact,
        # and in every J_p.
        return IdealClass(1, None, True, True, sa)

    if tail.kind == "power-law":
        kappa = tail.kappa
        p_star = None
        for p in range(1, p_max + 1):
            if p * kappa > 1.0:
                p_star = p
                break
        none_up_to = p_max if p_star is None else None
        return IdealClass(p_star, none_up_to, True, kappa > 0, sa)

    # declared
    declared = tail.p_star
    if declared <= p_max:
        return IdealClass(declared, None, True, True, sa)
    return IdealClass(None, p_max, True, True, sa)
