"""Functors from a finite category to groups and to abelian groups."""

from __future__ import annotations

from typing import Sequence

from ..errors import InputError
from ..intlin import AbelianPresentation, Lattice, matmul, matvec
from .category import FiniteCategory
from .groups import FinGroup, abelian


class FunctorToGroups:
    """``groups[c]`` is a finite group; ``maps[f]`` sends elements of ``F(dom f)`` to ``F(cod f)``."""

    def __init__(self, C: FiniteCategory, groups: Sequence[FinGroup], maps: Sequence[Sequence[int]], validate: bool = True):
        self.C = C
        self.groups = list(groups)
        self.maps = [list(m) for m in maps]
        if validate:
            problems = self.problems()
            if problems:
                raise InputError("invalid functor: " + "; ".join(problems[:5]))

    def act(self, f: int, x: int) -> int:
        """``^f x``."""
        return self.maps[f][x]

    def problems(self) -> list[str]:
        C = self.C
        if len(self.groups) != C.nobj or len(self.maps) != C.nmor:
            return ["functor needs one group per object and one map per morphism"]
        out = []
        for f in range(C.nmor):
            src, dst = self.groups[C.dom[f]], self.groups[C.cod[f]]
            if not src.is_hom_to(dst, self.maps[f]):
                out.append(f"F({C.names[f]}) is not a homomorphism")
        if out:
            return out
        for c, i in enumerate(C.identities):
            if self.maps[i] != list(range(self.groups[c].order)):
                out.append(f"F(id of {C.objects[c]}) is not the identity")
        for (g, f), h in C.compose.items():
            if self.maps[h] != [self.maps[g][y] for y in self.maps[f]]:
                out.append(f"F({C.names[g]}∘{C.names[f]}) differs from F({C.names[g]})∘F({C.names[f]})")
        return out

    # --- subfunctors ---------------------------------------------------------

    def is_subfunctor(self, subsets: Sequence[Sequence[int]]) -> bool:
        C = self.C
        if len(subsets) != C.nobj:
            return False
        sets = [set(s) for s in subsets]
        if not all(G.is_subgroup(s) for G, s in zip(self.groups, sets)):
            return False
        return all(self.maps[f][x] in sets[C.cod[f]] for f in range(C.nmor) for x in sets[C.dom[f]])

    def is_normal_subfunctor(self, subsets) -> bool:
        return self.is_subfunctor(subsets) and all(G.is_normal(s) for G, s in zip(self.groups, subsets))

    def is_central_subfunctor(self, subsets) -> bool:
        return self.is_subfunctor(subsets) and all(set(s) <= set(G.center()) for G, s in zip(self.groups, subsets))

    def subfunctor(self, subsets) -> tuple["FunctorToGroups", list[list[int]]]:
        """Restriction to ``subsets`` with the embeddings (sub element ``i`` is ``emb[c][i]``)."""
        if not self.is_subfunctor(subsets):
            raise InputError("the given subsets do not form a subfunctor")
        groups, embs = [], []
        for G, s in zip(self.groups, subsets):
            H, emb = G.subgroup(s)
            groups.append(H)
            embs.append(emb)
        pos = [{g: i for i, g in enumerate(e)} for e in embs]
        C = self.C
        maps = [[pos[C.cod[f]][self.maps[f][g]] for g in embs[C.dom[f]]] for f in range(C.nmor)]
        return FunctorToGroups(C, groups, maps, validate=False), embs

    def quotient(self, subsets) -> tuple["FunctorToGroups", list[list[int]]]:
        """``F/N`` for a normal subfunctor, with the projections."""
        if not self.is_normal_subfunctor(subsets):
            raise InputError("quotient needs a normal subfunctor")
        groups, projs = [], []
        for G, s in zip(self.groups, subsets):
            Q, p = G.quotient(s)
            groups.append(Q)
            projs.append(p)
        C = self.C
        maps = []
        for f in range(C.nmor):
            src = self.groups[C.dom[f]]
            m = [0] * groups[C.dom[f]].order
            for x in range(src.order):
                m[projs[C.dom[f]][x]] = projs[C.cod[f]][self.maps[f][x]]
            maps.append(m)
        return FunctorToGroups(C, groups, maps, validate=False), projs

    def generated_subfunctor(self, seeds: Sequence[Sequence[int]], normal: bool = False) -> list[list[int]]:
        """Smallest (normal) subfunctor containing the seed elements."""
        C = self.C
        sets = [list(s) for s in seeds]
        while True:
            new = []
            for c, G in enumerate(self.groups):
                elems = set(sets[c])
                for f in range(C.nmor):
                    if C.cod[f] == c:
                        elems.update(self.maps[f][x] for x in sets[C.dom[f]])
                new.append(G.normal_closure(elems) if normal else G.generated(elems))
            if new == sets:
                return new
            sets = new

    # --- serialization -------------------------------------------------------

    def to_json(self) -> dict:
        C = self.C
        return {
            "category": C.to_json(),
            "groups": {C.objects[c]: G.table for c, G in enumerate(self.groups)},
            "maps": {C.names[f]: self.maps[f] for f in range(C.nmor)},
        }

    @classmethod
    def from_json(cls, data: dict, C: FiniteCategory | None = None) -> "FunctorToGroups":
        C = C or FiniteCategory.from_json(data["category"])
        try:
            groups = [FinGroup(data["groups"][o], name=o) for o in C.objects]
            maps = [data["maps"][n] for n in C.names]
        except KeyError as e:
            raise InputError(f"functor JSON is missing an entry for {e}") from None
        return cls(C, groups, maps)


class AbelianFunctor:
    """Values ``Z/d1 + ... + Z/dk`` (``d = 0`` means ``Z``); ``matrices[f]`` is ``cod x dom``."""

    def __init__(self, C: FiniteCategory, orders: Sequence[Sequence[int]], matrices: Sequence[Sequence[Sequence[int]]], validate: bool = True):
        self.C = C
        self.orders = [list(o) for o in orders]
        self.matrices = [[list(r) for r in M] for M in matrices]
        if any(d < 0 for o in self.orders for d in o):
            raise InputError("cyclic orders must be nonnegative")
        # normalize away zero-width rows for empty values
        for f in range(len(self.matrices)):
            if not self.matrices[f] and f < C.nmor:
                self.matrices[f] = [[] for _ in self.orders[C.cod[f]]]
        if validate:
            problems = self.problems()
            if problems:
                raise InputError("invalid abelian functor: " + "; ".join(problems[:5]))

    def presentation(self, c: int) -> AbelianPresentation:
        return AbelianPresentation.cyclic(self.orders[c])

    def rank(self, c: int) -> int:
        return len(self.orders[c])

    def is_finite(self) -> bool:
        return all(d > 0 for o in self.orders for d in o)

    def reduce(self, c: int, v: Sequence[int]) -> tuple[int, ...]:
        return tuple(x % d if d else x for x, d in zip(v, self.orders[c]))

    def act(self, f: int, v: Sequence[int]) -> tuple[int, ...]:
        return self.reduce(self.C.cod[f], matvec(self.matrices[f], v))

    def _same(self, c: int, A, B) -> bool:
        L = self.presentation(c).lattice()
        n = self.rank(c)
        cols = len(A[0]) if A else 0
        return all([A[i][j] - B[i][j] for i in range(n)] in L for j in range(cols))

    def problems(self) -> list[str]:
        C = self.C
        if len(self.orders) != C.nobj or len(self.matrices) != C.nmor:
            return ["functor needs one value per object and one matrix per morphism"]
        out = []
        for f in range(C.nmor):
            M = self.matrices[f]
            a, b = C.dom[f], C.cod[f]
            if len(M) != self.rank(b) or any(len(r) != self.rank(a) for r in M):
                out.append(f"matrix of {C.names[f]} has the wrong shape")
                continue
            L = self.presentation(b).lattice()
            for j, d in enumerate(self.orders[a]):
                if d and [d * M[i][j] for i in range(len(M))] not in L:
                    out.append(f"matrix of {C.names[f]} does not respect the relations of its source")
                    break
        if out:
            return out
        for c, i in enumerate(C.identities):
            n = self.rank(c)
            if not self._same(c, self.matrices[i], [[int(p == q) for q in range(n)] for p in range(n)]):
                out.append(f"F(id of {C.objects[c]}) is not the identity")
        for (g, f), h in C.compose.items():
            if self.rank(C.dom[f]) == 0:
                continue
            prod = matmul(self.matrices[g], self.matrices[f]) if self.rank(C.cod[f]) else [[0] * self.rank(C.dom[f]) for _ in range(self.rank(C.cod[g]))]
            if not self._same(C.cod[g], self.matrices[h], prod):
                out.append(f"F({C.names[g]}∘{C.names[f]}) differs from the product of matrices")
        return out

    def to_group_functor(self) -> tuple[FunctorToGroups, list[list[tuple[int, ...]]]]:
        """Same functor with explicit multiplication tables (finite values only)."""
        if not self.is_finite():
            raise InputError("only finite values have multiplication tables")
        groups, elems = [], []
        for o in self.orders:
            G, e = abelian(o)
            groups.append(G)
            elems.append(e)
        pos = [{e: i for i, e in enumerate(es)} for es in elems]
        C = self.C
        maps = [[pos[C.cod[f]][self.act(f, v)] for v in elems[C.dom[f]]] for f in range(C.nmor)]
        return FunctorToGroups(C, groups, maps, validate=False), elems

    def to_json(self) -> dict:
        C = self.C
        return {
            "category": C.to_json(),
            "abelian": {
                "orders": {C.objects[c]: self.orders[c] for c in range(C.nobj)},
                "matrices": {C.names[f]: self.matrices[f] for f in range(C.nmor)},
            },
        }

    @classmethod
    def from_json(cls, data: dict, C: FiniteCategory | None = None) -> "AbelianFunctor":
        C = C or FiniteCategory.from_json(data["category"])
        block = data["abelian"]
        try:
            orders = [block["orders"][o] for o in C.objects]
            matrices = [block["matrices"][n] for n in C.names]
        except KeyError as e:
            raise InputError(f"abelian functor JSON is missing an entry for {e}") from None
        return cls(C, orders, matrices)


def constant_abelian(C: FiniteCategory, orders: Sequence[int]) -> AbelianFunctor:
    n = len(orders)
    ident = [[int(i == j) for j in range(n)] for i in range(n)]
    return AbelianFunctor(C, [list(orders)] * C.nobj, [ident] * C.nmor)


def constant_group_functor(C: FiniteCategory, G: FinGroup) -> FunctorToGroups:
    return FunctorToGroups(C, [G] * C.nobj, [list(range(G.order))] * C.nmor)


def lattice_of_values(F: AbelianFunctor, objects: Sequence[int]) -> Lattice:
    """Relation lattice of ``⊕ F(c)`` over the listed objects (with repetition)."""
    rows = []
    offset = 0
    total = sum(F.rank(c) for c in objects)
    for c in objects:
        for j, d in enumerate(F.orders[c]):
            if d:
                r = [0] * total
                r[offset + j] = d
                rows.append(r)
        offset += F.rank(c)
    return Lattice(total, rows)
