"""Legendre-symbol matrix families and the invariants extracted from them.

For an odd prime p and 0 <= delta <= 2:

    A_delta = [((j^2 - k^2)/p)]  for delta <= j, k <= (p-1)/2
    u_delta = [(k/p)]            for delta <= k <= (p-1)/2

D(delta, w) = det(A_delta + w u u^T) - det(A_delta) is linear in w by the
matrix-determinant lemma, so it is carried around as a :class:`LinearPoly`.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import List, Optional

from legdet.exactla import IntMatrix, det, pfaffian, rank1_update_det
from legdet.numtheory import (
    PrimeContext,
    class_number_from_sum,
    half_range_character_sum,
    integer_sqrt_exact,
    jacobi_symbol,
    jacobsthal_sum,
)

__all__ = [
    "LinearPoly",
    "CpRecord",
    "TheoremViolation",
    "build_A",
    "build_u",
    "build_ST_matrix",
    "perturbation_matrix",
    "D_poly",
    "compute_cp",
    "liwu_matrix",
    "liwu_poly",
]


class TheoremViolation(ArithmeticError):
    """A proven property failed to hold; carries the witnessing values."""

    def __init__(self, message: str, **witness):
        self.witness = witness
        detail = ", ".join(f"{k}={v}" for k, v in witness.items())
        super().__init__(f"{message} ({detail})" if detail else message)


@dataclass(frozen=True)
class LinearPoly:
    """constant + slope * w with exact integer coefficients."""

    constant: int
    slope: int

    def __call__(self, w: int) -> int:
        return self.constant + self.slope * w

    @classmethod
    def from_values(cls, f0: int, f1: int, f2: int) -> "LinearPoly":
        """Fit through f(0), f(1), f(2); the three points must be collinear."""
        if f2 - f1 != f1 - f0:
            raise TheoremViolation("non-collinear evaluations", f0=f0, f1=f1, f2=f2)
        return cls(f0, f1 - f0)

    def __str__(self) -> str:
        return f"{self.constant} + {self.slope}*w"


def _indices(ctx: PrimeContext, delta: int) -> range:
    return range(delta, ctx.half + 1)


def build_A(ctx: PrimeContext, delta: int) -> IntMatrix:
    """A_delta; order (p-1)/2 - delta + 1, possibly empty."""
    if delta < 0 or delta > ctx.half + 1:
        raise ValueError(f"delta={delta} out of range for p={ctx.p}")
    idx = _indices(ctx, delta)
    p, chi = ctx.p, ctx.chi
    return IntMatrix(([chi[(j * j - k * k) % p] for k in idx] for j in idx), len(idx))


def build_u(ctx: PrimeContext, delta: int) -> List[int]:
    if delta not in (0, 1):
        raise ValueError(f"u_delta is defined for delta in {{0, 1}}, got {delta}")
    return [ctx.chi[k] for k in _indices(ctx, delta)]


def perturbation_matrix(ctx: PrimeContext, delta: int) -> IntMatrix:
    """[(jk/p)] over delta <= j, k <= (p-1)/2."""
    idx = _indices(ctx, delta)
    p, chi = ctx.p, ctx.chi
    return IntMatrix(([chi[j * k % p] for k in idx] for j in idx), len(idx))


def build_ST_matrix(ctx: PrimeContext, d: int, variant: str) -> IntMatrix:
    """[((j^2 + d k^2)/p)] over 1..(p-1)/2 (variant "S") or 0..(p-1)/2 ("T")."""
    if variant not in ("S", "T"):
        raise ValueError(f"variant must be 'S' or 'T', got {variant!r}")
    idx = _indices(ctx, 1 if variant == "S" else 0)
    p, chi = ctx.p, ctx.chi
    return IntMatrix(([chi[(j * j + d * k * k) % p] for k in idx] for j in idx), len(idx))


def D_poly(ctx: PrimeContext, delta: int) -> LinearPoly:
    """D(delta, w) as an exact linear polynomial in w.

    The slope is u^T adj(A_delta) u. It is read off from determinants at
    w = 0, 1, 2 and the collinearity of those three values is checked.
    """
    A = build_A(ctx, delta)
    u = build_u(ctx, delta)
    # multiplicativity of chi makes the perturbation rank one
    P = perturbation_matrix(ctx, delta)
    if P != IntMatrix([[a * b for b in u] for a in u], len(u)):
        raise TheoremViolation("[(jk/p)] != u u^T", p=ctx.p, delta=delta)
    f0 = det(A)
    f1 = rank1_update_det(A, u, u, 1)
    f2 = rank1_update_det(A, u, u, 2)
    poly = LinearPoly.from_values(f0, f1, f2)
    return LinearPoly(0, poly.slope)


@dataclass(frozen=True)
class CpRecord:
    """Per-prime bundle of determinants and the extracted c_p.

    Branch-specific fields are None where undefined: ``det_A2`` and
    ``class_number`` for p = 1 (mod 4), ``j_minus_1`` for p = 3 (mod 4),
    and ``class_number`` for p = 3. ``pfaffian_A2`` is a consistency
    witness only; its sign carries no meaning.
    """

    p: int
    residue_class: int
    det_A1: int
    det_A2: Optional[int]
    j_minus_1: Optional[int]
    half_sum: int
    c_p: int
    jacobi_p_cp: int
    class_number: Optional[int]
    pfaffian_A2: Optional[int] = None

    @property
    def conjecture_holds(self) -> bool:
        return self.jacobi_p_cp == 1


def compute_cp(ctx: PrimeContext) -> CpRecord:
    """Extract c_p; any failure of the proven integrality/parity is fatal."""
    p = ctx.p
    det_A1 = det(build_A(ctx, 1))
    half_sum = half_range_character_sum(ctx)
    det_A2 = j_minus_1 = class_number = pf = None
    if p % 4 == 1:
        j_minus_1 = jacobsthal_sum(ctx, -1)
        q, r = divmod(-det_A1, j_minus_1)
        if r:
            raise TheoremViolation("J(-1) does not divide -|A1|", p=p, det_A1=det_A1, j_minus_1=j_minus_1)
        square = q
    else:
        A2 = build_A(ctx, 2)
        det_A2 = det(A2)
        if A2.nrows % 2 == 0:
            pf = pfaffian(A2)
            if pf * pf != det_A2:
                raise TheoremViolation("Pf(A2)^2 != |A2|", p=p, pfaffian=pf, det_A2=det_A2)
        square = det_A2
        if p > 3:
            class_number = class_number_from_sum(ctx)
    c_p = integer_sqrt_exact(square)
    if c_p is None:
        raise TheoremViolation("expected a perfect square", p=p, value=square)
    if c_p % 2 == 0:
        raise TheoremViolation("c_p is not odd", p=p, c_p=c_p)
    return CpRecord(
        p=p,
        residue_class=p % 4,
        det_A1=det_A1,
        det_A2=det_A2,
        j_minus_1=j_minus_1,
        half_sum=half_sum,
        c_p=c_p,
        jacobi_p_cp=jacobi_symbol(p, c_p),
        class_number=class_number,
        pfaffian_A2=pf,
    )


def liwu_matrix(ctx: PrimeContext, x: int) -> IntMatrix:
    """[x + ((j^2+k^2)/p) + ((j^2-k^2)/p)] over 1 <= j, k <= (p-1)/2."""
    idx = _indices(ctx, 1)
    p, chi = ctx.p, ctx.chi
    return IntMatrix(
        ([x + chi[(j * j + k * k) % p] + chi[(j * j - k * k) % p] for k in idx] for j in idx),
        len(idx),
    )


def liwu_poly(ctx: PrimeContext) -> LinearPoly:
    """det(liwu_matrix(x)) as constant + slope * x, for p = 3 (mod 4)."""
    if ctx.p % 4 != 3:
        raise ValueError(f"p={ctx.p} is not 3 mod 4")
    return LinearPoly.from_values(*(det(liwu_matrix(ctx, x)) for x in (0, 1, 2)))
