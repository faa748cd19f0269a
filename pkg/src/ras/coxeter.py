"""Simple roots of E_(m+1), reflections, and root recognition.

For a blowdown basis the simple roots are s-f (even) or s-e_1 (odd),
f-e_1-e_2, and e_(i-1)-e_i; with the negated intersection form they are
the simple roots of a Coxeter group of type E_(m+1).  Only indices that
exist for the given m are returned: m=1 has just the index-0 root and the
odd m=0 lattice has none.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from fractions import Fraction

from .picard import (
    DivisorClass,
    LatticeContext,
    Parity,
    basis_e,
    canonical_class,
    divisor,
    intersect,
    self_intersection,
)

ReflectionWord = tuple[int, ...]


class IterationCapError(RuntimeError):
    """A reflection walk exceeded its step budget.

    Signals either a bug or a non-root/non-effective input that cycles; the
    word walked so far is kept for diagnosis.
    """

    def __init__(self, message: str, witness: ReflectionWord):
        super().__init__(f"{message} (witness word {list(witness)})")
        self.witness = witness


def default_cap(a: DivisorClass) -> int:
    return 10 * (1 + a.l1_norm()) ** 2


def simple_root_count(ctx: LatticeContext) -> int:
    if ctx.m >= 2:
        return ctx.m + 1
    if ctx.m == 1:
        return 1
    return 1 if ctx.parity is Parity.EVEN else 0


def simple_root(i: int, ctx: LatticeContext) -> DivisorClass:
    count = simple_root_count(ctx)
    if not 0 <= i < count:
        raise ValueError(f"simple root index {i} out of range for m={ctx.m} {ctx.parity.value}")
    m = ctx.m
    if i == 0:
        if ctx.parity is Parity.EVEN:
            return divisor(ctx, [1, -1] + [0] * m)
        return divisor(ctx, [1, 0, 1] + [0] * (m - 1))
    if i == 1:
        return divisor(ctx, [0, 1, 1, 1] + [0] * (m - 2))
    coeffs = [0] * (m + 2)
    coeffs[1 + (i - 1)] = -1
    coeffs[1 + i] = 1
    return divisor(ctx, coeffs)


def simple_roots(ctx: LatticeContext) -> list[DivisorClass]:
    return [simple_root(i, ctx) for i in range(simple_root_count(ctx))]


def reflect(a: DivisorClass, root: DivisorClass) -> DivisorClass:
    """Reflection in a (-2)-class: D + (D.root) root."""
    if self_intersection(root) != -2:
        raise ValueError(f"not a (-2)-class: {root}")
    return a + intersect(a, root) * root


def first_negative_root(a: DivisorClass, roots: list[DivisorClass]) -> int | None:
    """Lexicographically smallest index i with a.sigma_i < 0, or None."""
    for i, root in enumerate(roots):
        if intersect(a, root) < 0:
            return i
    return None


class RootKind(enum.Enum):
    REAL_POSITIVE = "real-positive"
    REAL_NEGATIVE = "real-negative"
    IMAGINARY = "imaginary"
    NOT_A_ROOT = "not-a-root"


@dataclass(frozen=True)
class RootClassification:
    kind: RootKind
    witness: ReflectionWord = field(default=())


def expand_in_root_basis(a: DivisorClass) -> tuple[Fraction, ...]:
    """Coordinates of a class in the basis (sigma_0, ..., sigma_m, e_m).

    The basis is unimodular, so integral classes get integer coordinates;
    Fractions are returned so that the solve is exact without an
    integrality assumption on intermediate pivots.  The final coordinate
    (the e_m one) equals D.C_alpha.
    """
    ctx = a.ctx
    if ctx.m < 2:
        raise ValueError("root basis expansion needs m >= 2")
    basis = simple_roots(ctx) + [basis_e(ctx, ctx.m)]
    size = ctx.m + 2
    # Column j of the matrix is the coefficient vector of basis[j].
    rows = [[Fraction(basis[j].coeffs[i]) for j in range(size)] + [Fraction(a.coeffs[i])]
            for i in range(size)]
    for col in range(size):
        pivot = next(r for r in range(col, size) if rows[r][col] != 0)
        rows[col], rows[pivot] = rows[pivot], rows[col]
        inv = 1 / rows[col][col]
        rows[col] = [x * inv for x in rows[col]]
        for r in range(size):
            if r != col and rows[r][col] != 0:
                factor = rows[r][col]
                rows[r] = [x - factor * y for x, y in zip(rows[r], rows[col])]
    return tuple(rows[i][size] for i in range(size))


def rebuild_from_root_basis(coords, ctx: LatticeContext) -> DivisorClass:
    basis = simple_roots(ctx) + [basis_e(ctx, ctx.m)]
    total = [Fraction(0)] * (ctx.m + 2)
    for c, b in zip(coords, basis):
        for i, x in enumerate(b.coeffs):
            total[i] += Fraction(c) * x
    if any(t.denominator != 1 for t in total):
        raise ValueError("non-integral rebuild")
    return divisor(ctx, [int(t) for t in total])


def _support_connected(coords: tuple[Fraction, ...], ctx: LatticeContext) -> bool:
    roots = simple_roots(ctx)
    support = [i for i in range(len(roots)) if coords[i] != 0]
    if not support:
        return False
    seen = {support[0]}
    frontier = [support[0]]
    while frontier:
        i = frontier.pop()
        for j in support:
            if j not in seen and intersect(roots[i], roots[j]) != 0:
                seen.add(j)
                frontier.append(j)
    return len(seen) == len(support)


def _positive_walk(a: DivisorClass, cap: int) -> tuple[RootKind, ReflectionWord]:
    """Reduction walk for a class with a nonnegative root expansion.

    Reflects in the lexicographically smallest simple root with negative
    pairing; stops on reaching a simple root (real) or the fundamental
    chamber (imaginary or junk).
    """
    ctx = a.ctx
    roots = simple_roots(ctx)
    word: list[int] = []
    for _ in range(cap):
        if self_intersection(a) == -2 and a in roots:
            return RootKind.REAL_POSITIVE, tuple(word)
        i = first_negative_root(a, roots)
        if i is None:
            coords = expand_in_root_basis(a)
            nonneg = all(c >= 0 for c in coords[:-1])
            if nonneg and not a.is_zero() and _support_connected(coords, ctx):
                return RootKind.IMAGINARY, tuple(word)
            return RootKind.NOT_A_ROOT, tuple(word)
        a = reflect(a, roots[i])
        word.append(i)
    raise IterationCapError("root classification walk did not settle", tuple(word))


def classify_root(a: DivisorClass, max_iter: int | None = None) -> RootClassification:
    """Decide whether a class is a real root, an imaginary root, or neither.

    Real roots satisfy D^2 = -2, D.K = 0 and reach a simple root under the
    reduction walk; imaginary roots are the classes whose orbit meets the
    fundamental chamber in a nonnegative, connected combination of simple
    roots.  Negative-coefficient inputs are classified through -D, which
    keeps the walk terminating for affine and indefinite m.
    """
    ctx = a.ctx
    if ctx.m < 2:
        raise ValueError("root classification needs m >= 2")
    if a.is_zero() or intersect(a, canonical_class(ctx)) != 0:
        return RootClassification(RootKind.NOT_A_ROOT)
    coords = expand_in_root_basis(a)
    if any(c.denominator != 1 for c in coords):
        return RootClassification(RootKind.NOT_A_ROOT)
    cap = max_iter if max_iter is not None else default_cap(a)
    body = coords[:-1]
    if all(c <= 0 for c in body):
        kind, word = _positive_walk(-a, cap)
        if kind is RootKind.REAL_POSITIVE:
            return RootClassification(RootKind.REAL_NEGATIVE, word)
        # Negatives of imaginary roots do not meet the chamber nonnegatively.
        return RootClassification(RootKind.NOT_A_ROOT, word)
    if all(c >= 0 for c in body):
        kind, word = _positive_walk(a, cap)
        return RootClassification(kind, word)
    return RootClassification(RootKind.NOT_A_ROOT)


def root_orbit(ctx: LatticeContext) -> frozenset[DivisorClass]:
    """All roots of the finite system E_(m+1), m <= 7, by reflection closure."""
    if ctx.m > 7:
        raise ValueError("root orbit is infinite for m >= 8")
    roots = simple_roots(ctx)
    seen: set[DivisorClass] = set(roots) | {-r for r in roots}
    frontier = list(seen)
    while frontier:
        a = frontier.pop()
        for r in roots:
            image = reflect(a, r)
            if image not in seen:
                seen.add(image)
                frontier.append(image)
    return frozenset(seen)
