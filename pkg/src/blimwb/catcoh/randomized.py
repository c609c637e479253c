"""Seed-deterministic random categories, functors and subfunctors."""

from __future__ import annotations

import random
from math import gcd

from .category import (
    FiniteCategory,
    classifying,
    discrete,
    monoid_category,
    path_category,
    poset_category,
    product_category,
)
from .functors import AbelianFunctor, FunctorToGroups
from .groups import FinGroup, abelian, automorphism_of_inner, cyclic, dihedral, quaternion, symmetric3

MAX_OBJECTS = 4
MAX_MORPHISMS = 12


def _topological_height(C: FiniteCategory) -> list[int]:
    """Positions of objects in a linear extension of the reachability order (posets and DAGs)."""
    n = C.nobj
    below = [set() for _ in range(n)]
    for f in range(C.nmor):
        if C.dom[f] != C.cod[f]:
            below[C.cod[f]].add(C.dom[f])
    order, placed = [], set()
    while len(order) < n:
        c = next(c for c in range(n) if c not in placed and below[c] <= placed)
        order.append(c)
        placed.add(c)
    h = [0] * n
    for i, c in enumerate(order):
        h[c] = i
    return h


def random_dag(rng: random.Random) -> FiniteCategory:
    while True:
        n = rng.randint(1, MAX_OBJECTS)
        pairs = [(a, b) for a in range(n) for b in range(a + 1, n)]
        edges = [p for p in pairs if rng.random() < 0.5]
        if rng.random() < 0.3 and pairs:
            edges.append(rng.choice(pairs))  # parallel arrows
        C = path_category(n, edges)
        if C.nmor <= MAX_MORPHISMS:
            return C


def random_poset(rng: random.Random) -> FiniteCategory:
    n = rng.randint(1, MAX_OBJECTS)
    rel = [(a, b) for a in range(n) for b in range(a + 1, n) if rng.random() < 0.5]
    return poset_category(n, rel)


IDEMPOTENT = [[0, 1], [1, 1]]

CATEGORY_KINDS = ("dag", "poset", "bg", "poset_x_bc2", "idempotent", "discrete")


def random_category(rng: random.Random, kind: str | None = None) -> tuple[str, FiniteCategory, dict]:
    """Returns ``(kind, category, extra)``; ``extra`` records the group for ``BG`` kinds."""
    kind = kind or rng.choice(CATEGORY_KINDS)
    if kind == "dag":
        return kind, random_dag(rng), {}
    if kind == "poset":
        return kind, random_poset(rng), {}
    if kind == "bg":
        G = rng.choice([cyclic(2), cyclic(3), cyclic(4), abelian([2, 2])[0], symmetric3()])
        return kind, classifying(G), {"group": G}
    if kind == "poset_x_bc2":
        n = rng.randint(1, 2)
        P = poset_category(n, [(0, 1)] if n == 2 else [])
        return kind, product_category(P, classifying(cyclic(2))), {"poset_objects": n}
    if kind == "idempotent":
        return kind, monoid_category(IDEMPOTENT), {}
    if kind == "discrete":
        return kind, discrete(rng.randint(1, 3)), {}
    raise ValueError(f"unknown category kind {kind!r}")


def _units(m: int) -> list[int]:
    return [u for u in range(1, max(m, 2)) if gcd(u, m) == 1] if m > 1 else [0]


def _random_orders(rng: random.Random, bound: int = 8) -> list[int]:
    return rng.choice([[1], [2], [3], [4], [5], [6], [7], [8], [2, 2], [2, 4], [2, 2, 2]]) if bound >= 8 else [bound]


def _scalar(n: int, s: int) -> list[list[int]]:
    return [[s if i == j else 0 for j in range(n)] for i in range(n)]


def _random_matrix(rng, src: list[int], dst: list[int]) -> list[list[int]]:
    """Random well-defined map ``⊕ Z/src -> ⊕ Z/dst``."""
    M = []
    for e in dst:
        row = []
        for d in src:
            step = e // gcd(e, d) if e else (0 if d else 1)
            row.append(step * rng.randrange(max(e // step, 1)) if step else 0)
        M.append(row)
    return M


def random_abelian_functor(rng: random.Random, kind: str, C: FiniteCategory, extra: dict) -> AbelianFunctor:
    """A functor with finite abelian values of order at most 8."""
    if kind == "dag":
        orders = [_random_orders(rng) for _ in range(C.nobj)]
        edge_maps = {}
        mats = []
        # morphisms are paths; names encode the edge sequence
        for f in range(C.nmor):
            name = C.names[f]
            n_dom, n_cod = orders[C.dom[f]], orders[C.cod[f]]
            if name.startswith("id"):
                mats.append(_scalar(len(n_dom), 1))
                continue
            path = [int(e) for e in name[1:].split(".")]
            M = None
            cur = C.dom[f]
            for e in path:
                if e not in edge_maps:
                    nxt = _edge_target(C, e)
                    edge_maps[e] = _random_matrix(rng, orders[cur], orders[nxt])
                E = edge_maps[e]
                M = E if M is None else [[sum(E[i][k] * M[k][j] for k in range(len(M))) for j in range(len(M[0]))] for i in range(len(E))]
                cur = _edge_target(C, e)
            mats.append(M)
        return AbelianFunctor(C, orders, mats)
    if kind in ("poset", "discrete"):
        h = _topological_height(C)
        m = rng.choice([2, 3, 4, 5, 6, 7, 8])
        # values shrink along the order: Z/m at the bottom, divisors higher up
        divs = [d for d in range(1, m + 1) if m % d == 0]
        by_height = sorted(range(C.nobj), key=lambda c: h[c])
        mods = {}
        cur = m
        for c in by_height:
            if rng.random() < 0.3:
                cur = rng.choice([d for d in divs if cur % d == 0])
            mods[c] = cur
        u = rng.choice(_units(m))
        mats = [[[pow(u, h[C.cod[f]] - h[C.dom[f]], m) % max(mods[C.cod[f]], 1)]] for f in range(C.nmor)]
        return AbelianFunctor(C, [[mods[c]] for c in range(C.nobj)], mats)
    if kind == "bg":
        G: FinGroup = extra["group"]
        return _bg_module(rng, G, C)
    if kind == "poset_x_bc2":
        m = rng.choice([2, 3, 4, 5, 6, 8])
        sign = rng.choice([1, m - 1])
        u = rng.choice(_units(m))
        mats = []
        for f in range(C.nmor):
            pf, gf = divmod(f, 2)
            # poset part: identity morphisms come first, then the unique 0<=1
            lift = u if C.names[f].startswith("(0<=1") else 1
            mats.append([[(lift * (sign if gf else 1)) % m]])
        return AbelianFunctor(C, [[m]] * C.nobj, mats)
    if kind == "idempotent":
        m = 2  # (Z/m)² must stay within order 8
        P = rng.choice([[[1, 0], [0, 0]], [[1, 1], [0, 0]], [[0, 0], [0, 1]], [[1, 0], [0, 1]]])
        return AbelianFunctor(C, [[m, m]], [_scalar(2, 1), P])
    raise ValueError(kind)


def _edge_target(C: FiniteCategory, e: int) -> int:
    f = C.names.index(f"e{e}")
    return C.cod[f]


def _bg_module(rng, G: FinGroup, C: FiniteCategory) -> AbelianFunctor:
    """``G``-module structures on small abelian groups, via characters or permutations."""
    N = G.order
    gens = G.generators()
    choice = rng.randrange(3)
    if choice == 0 or not G.is_abelian():
        # character through the sign of a map to C2, acting by -1
        m = rng.choice([2, 3, 4, 5, 6, 8])
        chi = _random_character_to_c2(rng, G)
        mats = [[[(m - 1) % m if chi[g] else 1]] for g in range(N)]
        return AbelianFunctor(C, [[m]], mats)
    if choice == 1:
        # trivial action on a random finite abelian group
        orders = _random_orders(rng)
        return AbelianFunctor(C, [orders] * 1, [_scalar(len(orders), 1)] * N)
    # cyclic G acting on (Z/2)^2 by a matrix of matching order, else trivially
    if len(gens) == 1 and N in (2, 3):
        A = [[0, 1], [1, 0]] if N == 2 else [[0, 1], [1, 1]]
        mats = [_scalar(2, 1)]
        g = gens[0]
        elems = [0]
        cur = 0
        for _ in range(N - 1):
            cur = G.mul(cur, g)
            elems.append(cur)
            prev = mats[-1]
            mats.append([[sum(A[i][k] * prev[k][j] for k in range(2)) % 2 for j in range(2)] for i in range(2)])
        ordered = [None] * N
        for e, M in zip(elems, mats):
            ordered[e] = M
        return AbelianFunctor(C, [[2, 2]], ordered)
    return AbelianFunctor(C, [[2, 2]], [_scalar(2, 1)] * N)


def _random_character_to_c2(rng, G: FinGroup) -> list[int]:
    """A homomorphism ``G -> Z/2`` as a 0/1 list, chosen among all of them."""
    homs = []
    gens = G.generators()
    for bits in range(1 << len(gens)):
        imgs = {g: (bits >> i) & 1 for i, g in enumerate(gens)}
        h = extend_hom(G, cyclic(2), imgs)
        if h is not None:
            homs.append(h)
    return rng.choice(homs)


def extend_hom(G: FinGroup, H: FinGroup, images: dict[int, int]) -> list[int] | None:
    """Extend generator images to a homomorphism, or ``None`` if they are inconsistent."""
    f = {0: 0}
    frontier = [0]
    while frontier:
        nxt = []
        for x in frontier:
            for g, y in images.items():
                z = G.mul(x, g)
                w = H.mul(f[x], y)
                if z in f:
                    if f[z] != w:
                        return None
                else:
                    f[z] = w
                    nxt.append(z)
        frontier = nxt
    if len(f) != G.order:
        return None
    out = [f[x] for x in range(G.order)]
    return out if G.is_hom_to(H, out) else None


def random_hom(rng: random.Random, G: FinGroup, H: FinGroup, tries: int = 40) -> list[int]:
    gens = G.generators()
    for _ in range(tries):
        h = extend_hom(G, H, {g: rng.randrange(H.order) for g in gens})
        if h is not None:
            return h
    return [0] * G.order


# --- functors to (possibly non-abelian) groups ------------------------------------


SMALL_GROUPS = (
    lambda: cyclic(2),
    lambda: cyclic(3),
    lambda: cyclic(4),
    lambda: abelian([2, 2])[0],
    lambda: symmetric3(),
    lambda: dihedral(4),
    lambda: quaternion(),
)


def random_group_functor(rng: random.Random, kind: str | None = None) -> tuple[str, FunctorToGroups]:
    """A functor to small finite groups; values are non-abelian in most cases."""
    kind = kind or rng.choice(["dag", "bg_inner", "poset"])
    if kind == "bg_inner":
        H = rng.choice(SMALL_GROUPS)()
        n = rng.choice([2, 3, 4])
        G = cyclic(n)
        hs = [h for h in range(H.order) if _power(H, h, n) == 0]
        h = rng.choice(hs)
        conj = automorphism_of_inner(H, h)
        maps = [list(range(H.order))]
        for _ in range(n - 1):
            maps.append([conj[y] for y in maps[-1]])
        return kind, FunctorToGroups(classifying(G), [H], maps)
    if kind == "poset":
        C = random_poset(rng)
        h = _topological_height(C)
        groups = [rng.choice(SMALL_GROUPS)() for _ in range(C.nobj)]
        # functor through the linear extension: random homs between consecutive heights
        by_h = sorted(range(C.nobj), key=lambda c: h[c])
        step = {}
        for a, b in zip(by_h, by_h[1:]):
            step[(a, b)] = random_hom(rng, groups[a], groups[b])
        maps = []
        for f in range(C.nmor):
            a, b = C.dom[f], C.cod[f]
            m = list(range(groups[a].order))
            i = by_h.index(a)
            while by_h[i] != b:
                s = step[(by_h[i], by_h[i + 1])]
                m = [s[y] for y in m]
                i += 1
            maps.append(m)
        return kind, FunctorToGroups(C, groups, maps)
    C = random_dag(rng)
    groups = [rng.choice(SMALL_GROUPS)() for _ in range(C.nobj)]
    edge_maps: dict[int, list[int]] = {}
    maps = []
    for f in range(C.nmor):
        name = C.names[f]
        if name.startswith("id"):
            maps.append(list(range(groups[C.dom[f]].order)))
            continue
        m = list(range(groups[C.dom[f]].order))
        cur = C.dom[f]
        for e in (int(t) for t in name[1:].split(".")):
            nxt = _edge_target(C, e)
            if e not in edge_maps:
                edge_maps[e] = random_hom(rng, groups[cur], groups[nxt])
            m = [edge_maps[e][y] for y in m]
            cur = nxt
        maps.append(m)
    return "dag", FunctorToGroups(C, groups, maps)


def _power(G: FinGroup, g: int, n: int) -> int:
    x = 0
    for _ in range(n):
        x = G.mul(x, g)
    return x


def random_subfunctor(rng: random.Random, F: FunctorToGroups, normal: bool = False) -> list[list[int]]:
    seeds = [[rng.randrange(G.order)] if rng.random() < 0.6 else [] for G in F.groups]
    return F.generated_subfunctor(seeds, normal)


def random_central_subfunctor(rng: random.Random, F: FunctorToGroups, tries: int = 30) -> list[list[int]] | None:
    """A subfunctor inside the centers, or ``None`` if none with nontrivial values was found."""
    for _ in range(tries):
        seeds = [[rng.choice(G.center())] for G in F.groups]
        sub = F.generated_subfunctor(seeds)
        if F.is_central_subfunctor(sub) and any(len(s) > 1 for s in sub):
            return sub
    return None
