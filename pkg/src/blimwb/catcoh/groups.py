"""Small finite groups given by multiplication tables."""

from __future__ import annotations

from itertools import product
from typing import Sequence

from ..errors import InputError


class FinGroup:
    """Elements are ``0..order-1``; ``0`` is always the identity."""

    def __init__(self, table: Sequence[Sequence[int]], name: str = "", validate: bool = True):
        self.table = [list(r) for r in table]
        self.order = len(self.table)
        self.name = name
        if validate:
            self._validate()
        self.inv = [row.index(0) for row in self.table]

    def _validate(self):
        N = self.order
        T = self.table
        if N == 0:
            raise InputError("a group needs at least one element")
        full = list(range(N))
        if T[0] != full or any(T[i][0] != i for i in range(N)):
            raise InputError("element 0 must be the identity")
        if any(sorted(r) != full for r in T):
            raise InputError("group table rows are not permutations")
        for a, b, c in product(range(N), repeat=3):
            if T[T[a][b]][c] != T[a][T[b][c]]:
                raise InputError(f"group table is not associative at ({a}, {b}, {c})")

    def mul(self, a: int, b: int) -> int:
        return self.table[a][b]

    def is_abelian(self) -> bool:
        T = self.table
        return all(T[a][b] == T[b][a] for a in range(self.order) for b in range(a))

    def center(self) -> list[int]:
        T = self.table
        return [z for z in range(self.order) if all(T[z][g] == T[g][z] for g in range(self.order))]

    def generated(self, elements) -> list[int]:
        """Sorted elements of the subgroup generated by ``elements``."""
        seen = {0}
        frontier = [0]
        gens = [g for g in elements if g]
        while frontier:
            nxt = []
            for x in frontier:
                for g in gens:
                    y = self.table[x][g]
                    if y not in seen:
                        seen.add(y)
                        nxt.append(y)
            frontier = nxt
        return sorted(seen)

    def normal_closure(self, elements) -> list[int]:
        T = self.table
        conj = {T[T[self.inv[h]][g]][h] for g in elements for h in range(self.order)}
        return self.generated(sorted(conj))

    def generators(self) -> list[int]:
        """A small generating set, chosen greedily."""
        gens: list[int] = []
        span = {0}
        for g in range(1, self.order):
            if g not in span:
                gens.append(g)
                span = set(self.generated(gens))
        return gens

    def is_subgroup(self, elements) -> bool:
        s = set(elements)
        return 0 in s and all(self.table[a][b] in s for a in s for b in s)

    def is_normal(self, elements) -> bool:
        s = set(elements)
        T = self.table
        return all(T[T[self.inv[h]][g]][h] in s for g in s for h in range(self.order))

    def is_hom_to(self, target: "FinGroup", f: Sequence[int]) -> bool:
        if len(f) != self.order or any(not 0 <= y < target.order for y in f):
            return False
        T, U = self.table, target.table
        return all(f[T[a][b]] == U[f[a]][f[b]] for a in range(self.order) for b in range(self.order))

    def subgroup(self, elements) -> tuple["FinGroup", list[int]]:
        """The subgroup on ``elements`` as its own table, with the embedding."""
        elems = sorted(set(elements))
        if not elems or elems[0] != 0:
            raise InputError("subgroup must contain the identity")
        pos = {g: i for i, g in enumerate(elems)}
        try:
            table = [[pos[self.table[a][b]] for b in elems] for a in elems]
        except KeyError:
            raise InputError("elements are not closed under multiplication") from None
        return FinGroup(table, validate=False), elems

    def quotient(self, normal) -> tuple["FinGroup", list[int]]:
        """``G/N`` with the projection; cosets are numbered by first appearance."""
        N = sorted(set(normal))
        if not self.is_normal(N) or not self.is_subgroup(N):
            raise InputError("not a normal subgroup")
        proj = [-1] * self.order
        reps = []
        for g in range(self.order):
            if proj[g] < 0:
                for n in N:
                    proj[self.table[g][n]] = len(reps)
                reps.append(g)
        table = [[proj[self.table[a][b]] for b in reps] for a in reps]
        return FinGroup(table, validate=False), proj

    def __repr__(self):
        return f"FinGroup({self.name or self.order})"


def cyclic(n: int) -> FinGroup:
    if n < 1:
        raise InputError("cyclic group order must be positive")
    return FinGroup([[(a + b) % n for b in range(n)] for a in range(n)], f"C{n}", validate=False)


def abelian(orders: Sequence[int]) -> tuple[FinGroup, list[tuple[int, ...]]]:
    """``Z/d1 + ... + Z/dk``; element ``i`` corresponds to the returned tuple."""
    if any(d < 1 for d in orders):
        raise InputError("finite abelian groups need positive orders")
    elems = list(product(*[range(d) for d in orders])) if orders else [()]
    pos = {e: i for i, e in enumerate(elems)}
    table = [[pos[tuple((x + y) % d for x, y, d in zip(a, b, orders))] for b in elems] for a in elems]
    name = "x".join(f"C{d}" for d in orders) or "1"
    return FinGroup(table, name, validate=False), elems


def direct_product(G: FinGroup, H: FinGroup) -> FinGroup:
    n = H.order
    table = [[G.table[a // n][b // n] * n + H.table[a % n][b % n] for b in range(G.order * n)] for a in range(G.order * n)]
    return FinGroup(table, f"{G.name}x{H.name}", validate=False)


def from_permutations(gens: Sequence[Sequence[int]], name: str = "") -> FinGroup:
    """Group generated by permutations (tuples of images); identity first."""
    if not gens:
        return FinGroup([[0]], name or "1", validate=False)
    deg = len(gens[0])
    ident = tuple(range(deg))
    elems = [ident]
    pos = {ident: 0}
    i = 0
    while i < len(elems):
        x = elems[i]
        for g in gens:
            y = tuple(g[x[k]] for k in range(deg))
            if y not in pos:
                pos[y] = len(elems)
                elems.append(y)
        i += 1
    # product a*b means: apply a, then b
    table = [[pos[tuple(b[a[k]] for k in range(deg))] for b in elems] for a in elems]
    return FinGroup(table, name, validate=False)


def symmetric3() -> FinGroup:
    return from_permutations([(1, 0, 2), (1, 2, 0)], "S3")


def dihedral(n: int) -> FinGroup:
    """Symmetries of an ``n``-gon, order ``2n``."""
    rot = tuple((k + 1) % n for k in range(n))
    ref = tuple((-k) % n for k in range(n))
    return from_permutations([rot, ref], f"D{2 * n}")


def quaternion() -> FinGroup:
    # regular representation on 8 points: i, j as permutations of (±1, ±i, ±j, ±k)
    i = (2, 3, 1, 0, 6, 7, 5, 4)
    j = (4, 5, 7, 6, 1, 0, 2, 3)
    return from_permutations([i, j], "Q8")


def automorphism_of_inner(G: FinGroup, g: int) -> list[int]:
    """Conjugation ``x -> g^-1 x g``."""
    return [G.table[G.table[G.inv[g]][x]][g] for x in range(G.order)]


def compose_maps(f: Sequence[int], g: Sequence[int]) -> list[int]:
    """``f ∘ g`` for element maps given as lists."""
    return [f[y] for y in g]
