"""Finite small categories given by an explicit composition table."""

from __future__ import annotations

from itertools import product
from typing import Sequence

from ..errors import InputError
from .groups import FinGroup


class FiniteCategory:
    """Objects ``0..n-1`` and morphisms ``0..m-1``; ``compose[(g, f)]`` is ``g∘f`` (``f`` first)."""

    def __init__(
        self,
        objects: Sequence[str],
        dom: Sequence[int],
        cod: Sequence[int],
        identities: Sequence[int],
        compose: dict[tuple[int, int], int],
        morphism_names: Sequence[str] | None = None,
        validate: bool = True,
    ):
        self.objects = list(objects)
        self.dom = list(dom)
        self.cod = list(cod)
        self.identities = list(identities)
        self.compose = dict(compose)
        self.names = list(morphism_names) if morphism_names is not None else [f"m{i}" for i in range(len(self.dom))]
        for c, i in enumerate(self.identities):
            for f in range(self.nmor):
                if self.cod[f] == c:
                    self.compose.setdefault((i, f), f)
                if self.dom[f] == c:
                    self.compose.setdefault((f, i), f)
        if validate:
            problems = self.problems()
            if problems:
                raise InputError("invalid category: " + "; ".join(problems[:5]))

    @property
    def nobj(self) -> int:
        return len(self.objects)

    @property
    def nmor(self) -> int:
        return len(self.dom)

    def hom(self, a: int, b: int) -> list[int]:
        return [f for f in range(self.nmor) if self.dom[f] == a and self.cod[f] == b]

    def composable(self) -> list[tuple[int, int]]:
        """Pairs ``(g, f)`` with ``dom g = cod f``."""
        return [(g, f) for g in range(self.nmor) for f in range(self.nmor) if self.dom[g] == self.cod[f]]

    def is_identity(self, f: int) -> bool:
        return self.identities[self.dom[f]] == f

    def problems(self) -> list[str]:
        out = []
        n, m = self.nobj, self.nmor
        if len(self.cod) != m or len(self.identities) != n:
            return ["dom, cod and identities have inconsistent lengths"]
        for f in range(m):
            if not (0 <= self.dom[f] < n and 0 <= self.cod[f] < n):
                out.append(f"morphism {self.names[f]} has an unknown endpoint")
        if out:
            return out
        for c, i in enumerate(self.identities):
            if not 0 <= i < m or self.dom[i] != c or self.cod[i] != c:
                out.append(f"identity of object {self.objects[c]} is not an endomorphism of it")
        for g, f in self.composable():
            h = self.compose.get((g, f))
            if h is None:
                out.append(f"missing composite {self.names[g]}∘{self.names[f]}")
            elif self.dom[h] != self.dom[f] or self.cod[h] != self.cod[g]:
                out.append(f"composite {self.names[g]}∘{self.names[f]} = {self.names[h]} has wrong endpoints")
        for (g, f) in self.compose:
            if self.dom[g] != self.cod[f]:
                out.append(f"composite given for non-composable pair ({self.names[g]}, {self.names[f]})")
        if out:
            return out
        for c, i in enumerate(self.identities):
            for f in range(m):
                if self.cod[f] == c and self.compose[(i, f)] != f:
                    out.append(f"identity law fails: id∘{self.names[f]}")
                if self.dom[f] == c and self.compose[(f, i)] != f:
                    out.append(f"identity law fails: {self.names[f]}∘id")
        C = self.compose
        for h, g, f in product(range(m), repeat=3):
            if self.dom[h] == self.cod[g] and self.dom[g] == self.cod[f]:
                if C[(h, C[(g, f)])] != C[(C[(h, g)], f)]:
                    out.append(f"associativity fails at ({self.names[h]}, {self.names[g]}, {self.names[f]})")
        return out

    def __repr__(self):
        return f"FiniteCategory(objects={self.nobj}, morphisms={self.nmor})"

    # --- serialization ------------------------------------------------------------

    def to_json(self) -> dict:
        return {
            "objects": self.objects,
            "morphisms": [{"id": self.names[f], "dom": self.objects[self.dom[f]], "cod": self.objects[self.cod[f]]} for f in range(self.nmor)],
            "identities": {self.objects[c]: self.names[i] for c, i in enumerate(self.identities)},
            "composition": [[self.names[g], self.names[f], self.names[h]] for (g, f), h in sorted(self.compose.items())],
        }

    @classmethod
    def from_json(cls, data: dict) -> "FiniteCategory":
        try:
            objects = [str(o) for o in data["objects"]]
            obj_index = {o: i for i, o in enumerate(objects)}
            mors = data["morphisms"]
            names = [str(m["id"]) for m in mors]
            if len(set(names)) != len(names):
                raise InputError("duplicate morphism ids")
            mor_index = {n: i for i, n in enumerate(names)}
            dom = [obj_index[str(m["dom"])] for m in mors]
            cod = [obj_index[str(m["cod"])] for m in mors]
            ids_raw = data.get("identities")
            if ids_raw is None:
                raise InputError("category JSON needs an 'identities' map")
            identities = [mor_index[str(ids_raw[o])] for o in objects]
            compose = {}
            for triple in data.get("composition", []):
                g, f, h = (mor_index[str(t)] for t in triple)
                compose[(g, f)] = h
        except KeyError as e:
            raise InputError(f"category JSON refers to unknown or missing key {e}") from None
        return cls(objects, dom, cod, identities, compose, names)


# --- constructors --------------------------------------------------------------------


def discrete(n: int) -> FiniteCategory:
    return FiniteCategory([f"o{i}" for i in range(n)], list(range(n)), list(range(n)), list(range(n)), {}, [f"id{i}" for i in range(n)])


def empty_category() -> FiniteCategory:
    return discrete(0)


def classifying(G: FinGroup) -> FiniteCategory:
    """``BG``: one object, one morphism per element, composition is the group law."""
    N = G.order
    compose = {(g, f): G.mul(g, f) for g in range(N) for f in range(N)}
    return FiniteCategory(["*"], [0] * N, [0] * N, [0], compose, [f"g{g}" for g in range(N)], validate=False)


def monoid_category(table: Sequence[Sequence[int]]) -> FiniteCategory:
    """One-object category of a finite monoid with identity ``0``."""
    N = len(table)
    compose = {(g, f): table[g][f] for g in range(N) for f in range(N)}
    return FiniteCategory(["*"], [0] * N, [0] * N, [0], compose, [f"m{g}" for g in range(N)])


def path_category(nobj: int, edges: Sequence[tuple[int, int]]) -> FiniteCategory:
    """Free category on a finite acyclic quiver; morphisms are paths."""
    paths: list[tuple[int, tuple[int, ...], int]] = [(c, (), c) for c in range(nobj)]
    frontier = list(paths)
    while frontier:
        nxt = []
        for s, p, t in frontier:
            for e, (a, b) in enumerate(edges):
                if a == t:
                    if len(p) >= nobj:
                        raise InputError("quiver has a cycle")
                    nxt.append((s, p + (e,), b))
        paths.extend(nxt)
        frontier = nxt
    index = {p: i for i, p in enumerate(paths)}
    dom = [s for s, _, _ in paths]
    cod = [t for _, _, t in paths]
    compose = {}
    for gi, (gs, gp, gt) in enumerate(paths):
        for fi, (fs, fp, ft) in enumerate(paths):
            if gs == ft:
                compose[(gi, fi)] = index[(fs, fp + gp, gt)]
    names = [f"id{s}" if not p else "e" + ".".join(map(str, p)) for s, p, _ in paths]
    return FiniteCategory([f"o{i}" for i in range(nobj)], dom, cod, list(range(nobj)), compose, names)


def poset_category(nobj: int, less: Sequence[tuple[int, int]]) -> FiniteCategory:
    """Poset generated by the relations ``a <= b`` (one morphism ``a -> b`` per comparable pair)."""
    reach = [[i == j for j in range(nobj)] for i in range(nobj)]
    for a, b in less:
        reach[a][b] = True
    for k in range(nobj):
        for i in range(nobj):
            if reach[i][k]:
                for j in range(nobj):
                    if reach[k][j]:
                        reach[i][j] = True
    for i in range(nobj):
        for j in range(i + 1, nobj):
            if reach[i][j] and reach[j][i]:
                raise InputError("relations are not antisymmetric")
    pairs = [(i, i) for i in range(nobj)] + [(i, j) for i in range(nobj) for j in range(nobj) if i != j and reach[i][j]]
    index = {p: k for k, p in enumerate(pairs)}
    compose = {}
    for g, (b, c) in enumerate(pairs):
        for f, (a, b2) in enumerate(pairs):
            if b == b2:
                compose[(g, f)] = index[(a, c)]
    names = [f"{a}<={b}" for a, b in pairs]
    return FiniteCategory([f"o{i}" for i in range(nobj)], [a for a, _ in pairs], [b for _, b in pairs], list(range(nobj)), compose, names)


def product_category(C: FiniteCategory, D: FiniteCategory) -> FiniteCategory:
    m = D.nmor
    dom = [C.dom[f // m] * D.nobj + D.dom[f % m] for f in range(C.nmor * m)]
    cod = [C.cod[f // m] * D.nobj + D.cod[f % m] for f in range(C.nmor * m)]
    ids = [C.identities[c // D.nobj] * m + D.identities[c % D.nobj] for c in range(C.nobj * D.nobj)]
    compose = {}
    for (g1, f1), h1 in C.compose.items():
        for (g2, f2), h2 in D.compose.items():
            compose[(g1 * m + g2, f1 * m + f2)] = h1 * m + h2
    objects = [f"({a},{b})" for a in C.objects for b in D.objects]
    names = [f"({a},{b})" for a in C.names for b in D.names]
    return FiniteCategory(objects, dom, cod, ids, compose, names)
