"""Picard lattice of a rational surface in a blowdown basis.

The lattice is Z^(m+2) with distinguished basis (s, f, e_1, ..., e_m); a
class is written D = n*s + d*f - sum_i r_i*e_i and stored as the integer
vector (n, d, r_1, ..., r_m).  The intersection form depends only on the
parity of the blowdown structure: s^2 = 0 (even) or -1 (odd), s.f = 1,
f^2 = 0, e_i.e_j = -delta_ij, and s, f are orthogonal to every e_i.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Iterable, NamedTuple


class Parity(enum.Enum):
    EVEN = "even"
    ODD = "odd"

    @property
    def s_self_intersection(self) -> int:
        return 0 if self is Parity.EVEN else -1

    def flipped(self) -> "Parity":
        return Parity.ODD if self is Parity.EVEN else Parity.EVEN


class LatticeContext(NamedTuple):
    m: int
    parity: Parity


class ContextMismatchError(ValueError):
    """Two classes from different lattices were combined; a caller bug."""


@dataclass(frozen=True, slots=True)
class DivisorClass:
    ctx: LatticeContext
    coeffs: tuple[int, ...]

    def __post_init__(self) -> None:
        if len(self.coeffs) != self.ctx.m + 2:
            raise ValueError(
                f"coefficient vector has length {len(self.coeffs)}, "
                f"expected {self.ctx.m + 2}"
            )

    @property
    def m(self) -> int:
        return self.ctx.m

    @property
    def parity(self) -> Parity:
        return self.ctx.parity

    @property
    def n(self) -> int:
        """Coefficient of s; equals D.f, the degree along the ruling."""
        return self.coeffs[0]

    @property
    def d(self) -> int:
        return self.coeffs[1]

    @property
    def r(self) -> tuple[int, ...]:
        """Exceptional multiplicities r_i of D = n s + d f - sum r_i e_i."""
        return self.coeffs[2:]

    def signed_coefficient(self, index: int) -> int:
        """Coefficient of the basis vector: s, f for index 0, 1; e_i carry -r_i."""
        c = self.coeffs[index]
        return c if index < 2 else -c

    def check_same_context(self, other: "DivisorClass") -> None:
        if self.ctx != other.ctx:
            raise ContextMismatchError(f"{self.ctx} vs {other.ctx}")

    def __add__(self, other: "DivisorClass") -> "DivisorClass":
        self.check_same_context(other)
        return DivisorClass(self.ctx, tuple(a + b for a, b in zip(self.coeffs, other.coeffs)))

    def __sub__(self, other: "DivisorClass") -> "DivisorClass":
        self.check_same_context(other)
        return DivisorClass(self.ctx, tuple(a - b for a, b in zip(self.coeffs, other.coeffs)))

    def __neg__(self) -> "DivisorClass":
        return DivisorClass(self.ctx, tuple(-a for a in self.coeffs))

    def __mul__(self, k: int) -> "DivisorClass":
        return DivisorClass(self.ctx, tuple(k * a for a in self.coeffs))

    __rmul__ = __mul__

    def dot(self, other: "DivisorClass") -> int:
        return intersect(self, other)

    def is_zero(self) -> bool:
        return all(c == 0 for c in self.coeffs)

    def l1_norm(self) -> int:
        return sum(abs(c) for c in self.coeffs)

    def __repr__(self) -> str:
        return f"DivisorClass({self.parity.value}, {list(self.coeffs)})"


def divisor(ctx: LatticeContext, coeffs: Iterable[int]) -> DivisorClass:
    return DivisorClass(ctx, tuple(int(c) for c in coeffs))


def zero(ctx: LatticeContext) -> DivisorClass:
    return DivisorClass(ctx, (0,) * (ctx.m + 2))


def basis_s(ctx: LatticeContext) -> DivisorClass:
    return divisor(ctx, [1, 0] + [0] * ctx.m)


def basis_f(ctx: LatticeContext) -> DivisorClass:
    return divisor(ctx, [0, 1] + [0] * ctx.m)


def basis_e(ctx: LatticeContext, i: int) -> DivisorClass:
    """The exceptional class e_i, 1-indexed; stored as r_i = -1."""
    if not 1 <= i <= ctx.m:
        raise ValueError(f"e_{i} does not exist for m={ctx.m}")
    coeffs = [0] * (ctx.m + 2)
    coeffs[1 + i] = -1
    return divisor(ctx, coeffs)


def intersect(a: DivisorClass, b: DivisorClass) -> int:
    """Symmetric bilinear intersection pairing."""
    a.check_same_context(b)
    total = a.coeffs[0] * b.coeffs[1] + a.coeffs[1] * b.coeffs[0]
    if a.parity is Parity.ODD:
        total -= a.coeffs[0] * b.coeffs[0]
    for x, y in zip(a.coeffs[2:], b.coeffs[2:]):
        total -= x * y
    return total


def self_intersection(a: DivisorClass) -> int:
    return intersect(a, a)


def canonical_class(ctx: LatticeContext) -> DivisorClass:
    """K = -2s-2f+sum(e_i) (even) or -2s-3f+sum(e_i) (odd); K^2 = 8-m."""
    d = -2 if ctx.parity is Parity.EVEN else -3
    return divisor(ctx, [-2, d] + [-1] * ctx.m)


def anticanonical_class(ctx: LatticeContext) -> DivisorClass:
    return -canonical_class(ctx)


def euler_characteristic(a: DivisorClass) -> int:
    """chi(L(D)) = 1 + D.(D-K)/2 by Riemann-Roch."""
    k = canonical_class(a.ctx)
    twice = intersect(a, a - k)
    assert twice % 2 == 0
    return 1 + twice // 2


def elementary_transform(a: DivisorClass) -> DivisorClass:
    """Re-express a class through the elementary transformation at e_1.

    The new basis is s' = s-e_1 (even input) or s' = s+f-e_1 (odd input),
    f' = f, e_1' = f-e_1, e_i' = e_i; the output parity is flipped and the
    operation is an involution.
    """
    ctx = a.ctx
    if ctx.m < 1:
        raise ValueError("elementary transformation needs m >= 1")
    n, d, r1 = a.coeffs[0], a.coeffs[1], a.coeffs[2]
    if ctx.parity is Parity.EVEN:
        new = (n, n + d - r1, n - r1) + a.coeffs[3:]
    else:
        new = (n, d - r1, n - r1) + a.coeffs[3:]
    return DivisorClass(LatticeContext(ctx.m, ctx.parity.flipped()), new)
