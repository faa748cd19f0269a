"""Finitely generated abelian groups as computable models of Pic^0(C_alpha).

A group is Z^free_rank + Z/n_1 + ... + Z/n_t with elements stored as
coordinate tuples (free part first, torsion reduced mod n_j).  Quotients by
a cyclic subgroup are computed through the Smith normal form of the
relation matrix, which also yields the coordinate map onto the quotient.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import gcd, lcm

Element = tuple[int, ...]


def smith_normal_form(rows: list[list[int]], ncols: int) -> tuple[list[int], list[list[int]]]:
    """Diagonalize an integer matrix, returning (invariants, V).

    U*A*V is diagonal with nonnegative entries satisfying the divisibility
    chain; only the column transform V is tracked, since for a relation
    matrix A the map x -> x*V carries Z^k / rowspan(A) onto the direct sum
    of Z/d_j.  `invariants` has length ncols, padded with zeros.
    """
    a = [list(r) for r in rows]
    nrows = len(a)
    v = [[int(i == j) for j in range(ncols)] for i in range(ncols)]

    def swap_rows(i, j):
        a[i], a[j] = a[j], a[i]

    def swap_cols(i, j):
        for r in a:
            r[i], r[j] = r[j], r[i]
        for r in v:
            r[i], r[j] = r[j], r[i]

    def add_row(dst, src, q):
        a[dst] = [x + q * y for x, y in zip(a[dst], a[src])]

    def add_col(dst, src, q):
        for r in a:
            r[dst] += q * r[src]
        for r in v:
            r[dst] += q * r[src]

    def negate_col(j):
        for r in a:
            r[j] = -r[j]
        for r in v:
            r[j] = -r[j]

    size = min(nrows, ncols)
    t = 0
    while t < size:
        pivot = None
        best = None
        for i in range(t, nrows):
            for j in range(t, ncols):
                if a[i][j] != 0 and (best is None or abs(a[i][j]) < best):
                    best = abs(a[i][j])
                    pivot = (i, j)
        if pivot is None:
            break
        if pivot[0] != t:
            swap_rows(t, pivot[0])
        if pivot[1] != t:
            swap_cols(t, pivot[1])
        while True:
            dirty = False
            for i in range(t + 1, nrows):
                if a[i][t]:
                    q = a[i][t] // a[t][t]
                    add_row(i, t, -q)
                    if a[i][t]:
                        swap_rows(t, i)
                        dirty = True
            for j in range(t + 1, ncols):
                if a[t][j]:
                    q = a[t][j] // a[t][t]
                    add_col(j, t, -q)
                    if a[t][j]:
                        swap_cols(t, j)
                        dirty = True
            if not dirty:
                break
        if a[t][t] < 0:
            negate_col(t)
        t += 1

    def euclid_block(i):
        # Rows/cols i, i+1 are zero elsewhere, so the 2x2 cleanup is local.
        while a[i + 1][i] != 0 or a[i][i + 1] != 0:
            if a[i + 1][i] != 0:
                q = a[i + 1][i] // a[i][i]
                add_row(i + 1, i, -q)
                if a[i + 1][i]:
                    swap_rows(i, i + 1)
            elif a[i][i + 1] != 0:
                q = a[i][i + 1] // a[i][i]
                add_col(i + 1, i, -q)
                if a[i][i + 1]:
                    swap_cols(i, i + 1)
        for j in (i, i + 1):
            if a[j][j] < 0:
                negate_col(j)

    changed = True
    while changed:
        changed = False
        for i in range(t - 1):
            x, y = a[i][i], a[i + 1][i + 1]
            if x != 0 and y % x != 0:
                add_col(i, i + 1, 1)
                euclid_block(i)
                changed = True

    invariants = [0] * ncols
    for j in range(min(t, ncols)):
        invariants[j] = abs(a[j][j])
    return invariants, v


@dataclass(frozen=True)
class AbGroup:
    free_rank: int
    torsion_orders: tuple[int, ...] = ()

    def __post_init__(self) -> None:
        if self.free_rank < 0 or any(n < 2 for n in self.torsion_orders):
            raise ValueError("invalid presentation")

    @property
    def ngens(self) -> int:
        return self.free_rank + len(self.torsion_orders)

    def zero(self) -> Element:
        return (0,) * self.ngens

    def reduce(self, coords) -> Element:
        coords = list(coords)
        if len(coords) != self.ngens:
            raise ValueError(f"expected {self.ngens} coordinates, got {len(coords)}")
        for j, n in enumerate(self.torsion_orders):
            coords[self.free_rank + j] %= n
        return tuple(coords)

    def generator(self, i: int) -> Element:
        coords = [0] * self.ngens
        coords[i] = 1
        return self.reduce(coords)

    def add(self, a: Element, b: Element) -> Element:
        return self.reduce(x + y for x, y in zip(a, b))

    def sub(self, a: Element, b: Element) -> Element:
        return self.reduce(x - y for x, y in zip(a, b))

    def neg(self, a: Element) -> Element:
        return self.reduce(-x for x in a)

    def scale(self, k: int, a: Element) -> Element:
        return self.reduce(k * x for x in a)

    def is_zero(self, a: Element) -> bool:
        return self.reduce(a) == self.zero()

    def order(self, a: Element) -> int | None:
        """Order of an element; None when infinite."""
        a = self.reduce(a)
        if any(a[: self.free_rank]):
            return None
        result = 1
        for j, n in enumerate(self.torsion_orders):
            x = a[self.free_rank + j]
            if x:
                result = lcm(result, n // gcd(n, x))
        return result

    def quotient_by(self, a: Element) -> tuple["AbGroup", "QuotientMap"]:
        """The quotient by the cyclic subgroup generated by an element.

        Returns the quotient group and the coordinate map; the image of the
        generator is zero in the quotient by construction.
        """
        a = self.reduce(a)
        k = self.ngens
        relations = []
        for j, n in enumerate(self.torsion_orders):
            row = [0] * k
            row[self.free_rank + j] = n
            relations.append(row)
        relations.append(list(a))
        invariants, v = smith_normal_form(relations, k)
        keep_free = [j for j in range(k) if invariants[j] == 0]
        keep_tors = [j for j in range(k) if invariants[j] >= 2]
        group = AbGroup(len(keep_free), tuple(invariants[j] for j in keep_tors))
        return group, QuotientMap(self, group, tuple(map(tuple, v)), tuple(keep_free + keep_tors))


@dataclass(frozen=True)
class QuotientMap:
    source: AbGroup
    target: AbGroup
    column_transform: tuple[tuple[int, ...], ...]
    kept_columns: tuple[int, ...]

    def __call__(self, a: Element) -> Element:
        a = self.source.reduce(a)
        transformed = [
            sum(a[i] * self.column_transform[i][j] for i in range(len(a)))
            for j in range(len(a))
        ]
        return self.target.reduce(transformed[j] for j in self.kept_columns)
