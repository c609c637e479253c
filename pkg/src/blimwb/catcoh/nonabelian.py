"""Non-abelian 1-cocycles, the pointed set Lim¹, the connecting map and exactness checks."""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from typing import Sequence

from ..errors import CapExceeded, InputError
from .cochain import lim0_elements
from .functors import FunctorToGroups

DEFAULT_CAP = 10**7

Cocycle = tuple[int, ...]


def _forced_composites(F: FunctorToGroups, order: list[int]):
    """For each position in ``order``, the pairs ``(g, f)`` with ``g∘f`` at that position and both already placed."""
    C = F.C
    rank = {m: i for i, m in enumerate(order)}
    forced = [[] for _ in order]
    checks = [[] for _ in order]
    for (g, f), h in C.compose.items():
        if C.is_identity(g) or C.is_identity(f):
            continue
        last = max(rank[g], rank[f])
        rh = rank.get(h, -1)
        if rh > last:
            forced[rh].append((g, f))
        else:
            checks[last].append((g, f, h))
    return forced, checks


def z1_nonabelian(F: FunctorToGroups, cap: int = DEFAULT_CAP) -> list[Cocycle]:
    """All ``a`` with ``a(g∘f) = a(g) · ^g a(f)``; ``a(id) = 1`` is forced.

    The search space is ``Π F(cod a)`` over non-identity morphisms, bounded by ``cap``.
    """
    C = F.C
    order = [m for m in range(C.nmor) if not C.is_identity(m)]
    space = 1
    for m in order:
        space *= F.groups[C.cod[m]].order
    if space > cap:
        raise CapExceeded(f"cocycle search space has {space} candidates (cap {cap})")
    forced, checks = _forced_composites(F, order)
    a = [0] * C.nmor
    out: list[Cocycle] = []

    def value(g, f):
        return F.groups[C.cod[g]].mul(a[g], F.maps[g][a[f]])

    def go(k):
        if k == len(order):
            out.append(tuple(a))
            return
        m = order[k]
        if forced[k]:
            v = value(*forced[k][0])
            if any(value(g, f) != v for g, f in forced[k][1:]):
                return
            candidates = [v]
        else:
            candidates = range(F.groups[C.cod[m]].order)
        for v in candidates:
            a[m] = v
            if all(value(g, f) == a[h] for g, f, h in checks[k]):
                go(k + 1)
        a[m] = 0

    go(0)
    return out


def act_on_cocycle(F: FunctorToGroups, a: Sequence[int], x: Sequence[int]) -> Cocycle:
    """``(a^x)(α) = x(cod α)⁻¹ · a(α) · ^α x(dom α)``."""
    C = F.C
    out = []
    for m in range(C.nmor):
        G = F.groups[C.cod[m]]
        out.append(G.mul(G.mul(G.inv[x[C.cod[m]]], a[m]), F.maps[m][x[C.dom[m]]]))
    return tuple(out)


def is_cocycle(F: FunctorToGroups, a: Sequence[int]) -> bool:
    C = F.C
    if any(a[i] for i in C.identities):
        return False
    return all(a[h] == F.groups[C.cod[g]].mul(a[g], F.maps[g][a[f]]) for (g, f), h in C.compose.items())


@dataclass
class Lim1:
    """Orbits of ``Π_c F(c)`` on ``Z¹``; ``orbit[i]`` is the orbit id of ``cocycles[i]``, the basepoint has id 0."""

    cocycles: list[Cocycle]
    orbit: list[int]
    index: dict = field(repr=False)

    @property
    def size(self) -> int:
        return max(self.orbit) + 1 if self.orbit else 0

    def class_of(self, a: Sequence[int]) -> int:
        try:
            return self.orbit[self.index[tuple(a)]]
        except KeyError:
            raise InputError("not a cocycle") from None

    def representatives(self) -> list[Cocycle]:
        reps: dict[int, Cocycle] = {}
        for a, o in zip(self.cocycles, self.orbit):
            reps.setdefault(o, a)
        return [reps[o] for o in range(self.size)]


def _object_generators(F: FunctorToGroups) -> list[tuple[int, ...]]:
    gens = []
    n = F.C.nobj
    for c, G in enumerate(F.groups):
        for g in G.generators():
            x = [0] * n
            x[c] = g
            gens.append(tuple(x))
    return gens


def lim1_nonabelian(F: FunctorToGroups, cap: int = DEFAULT_CAP) -> Lim1:
    Z = z1_nonabelian(F, cap)
    index = {a: i for i, a in enumerate(Z)}
    parent = list(range(len(Z)))

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    for x in _object_generators(F):
        for i, a in enumerate(Z):
            j = index[act_on_cocycle(F, a, x)]
            ri, rj = find(i), find(j)
            if ri != rj:
                parent[max(ri, rj)] = min(ri, rj)
    # number orbits by first appearance; the zero cocycle comes first
    ids: dict[int, int] = {}
    orbit = []
    for i in range(len(Z)):
        orbit.append(ids.setdefault(find(i), len(ids)))
    return Lim1(Z, orbit, index)


def lim1_orbits_bruteforce(F: FunctorToGroups, cap: int = DEFAULT_CAP) -> int:
    """Orbit count using the full action of ``Π_c F(c)`` (small cases only)."""
    from itertools import product as iproduct

    Z = z1_nonabelian(F, cap)
    seen: set = set()
    count = 0
    families = list(iproduct(*[range(G.order) for G in F.groups]))
    for a in Z:
        if a in seen:
            continue
        count += 1
        for x in families:
            seen.add(act_on_cocycle(F, a, x))
    return count


# --- cosets and the connecting map ------------------------------------------------


class CosetData:
    """Left cosets ``x·G(c)`` of a subfunctor; a coset is named by its smallest element."""

    def __init__(self, F: FunctorToGroups, subsets: Sequence[Sequence[int]]):
        if not F.is_subfunctor(subsets):
            raise InputError("not a subfunctor")
        self.F = F
        self.subsets = [sorted(s) for s in subsets]
        self.coset = []
        for G, s in zip(F.groups, self.subsets):
            lab = [0] * G.order
            for x in range(G.order):
                lab[x] = min(G.mul(x, h) for h in s)
            self.coset.append(lab)

    def families(self, cap: int = DEFAULT_CAP) -> list[tuple[int, ...]]:
        """Compatible coset families, i.e. elements of ``Lim F/G``."""
        F, C = self.F, self.F.C
        reps = [sorted(set(lab)) for lab in self.coset]
        total = 1
        for r in reps:
            total *= len(r)
        if total > cap:
            raise CapExceeded(f"coset families: {total} candidates (cap {cap})")
        checks: list[list[int]] = [[] for _ in range(C.nobj)]
        for f in range(C.nmor):
            if not C.is_identity(f):
                checks[max(C.dom[f], C.cod[f])].append(f)
        out, x = [], [0] * C.nobj

        def go(c):
            if c == C.nobj:
                out.append(tuple(x))
                return
            for r in reps[c]:
                x[c] = r
                if all(self.coset[C.cod[f]][F.maps[f][x[C.dom[f]]]] == x[C.cod[f]] for f in checks[c]):
                    go(c + 1)

        go(0)
        return out

    def project(self, x: Sequence[int]) -> tuple[int, ...]:
        return tuple(self.coset[c][g] for c, g in enumerate(x))

    def random_lift(self, X: Sequence[int], rng: random.Random) -> tuple[int, ...]:
        return tuple(self.F.groups[c].mul(r, rng.choice(self.subsets[c])) for c, r in enumerate(X))


def delta_cocycle(F: FunctorToGroups, cosets: CosetData, lift: Sequence[int]) -> Cocycle:
    """``d(x̄)(α) = x̄(cod α)⁻¹ · ^α x̄(dom α)``, as elements of ``F``."""
    C = F.C
    out = []
    for m in range(C.nmor):
        G = F.groups[C.cod[m]]
        v = G.mul(G.inv[lift[C.cod[m]]], F.maps[m][lift[C.dom[m]]])
        if v not in cosets.subsets[C.cod[m]]:
            raise InputError("the family is not compatible modulo the subfunctor")
        out.append(v)
    return tuple(out)


class ConnectingMap:
    """``δ : Lim F/G -> Lim¹ G`` with the data needed to evaluate it."""

    def __init__(self, F: FunctorToGroups, subsets: Sequence[Sequence[int]], cap: int = DEFAULT_CAP):
        self.F = F
        self.cosets = CosetData(F, subsets)
        self.G, self.emb = F.subfunctor(subsets)
        self.pos = [{g: i for i, g in enumerate(e)} for e in self.emb]
        self.lim1 = lim1_nonabelian(self.G, cap)

    def to_sub(self, a: Sequence[int]) -> Cocycle:
        C = self.F.C
        return tuple(self.pos[C.cod[m]][a[m]] for m in range(C.nmor))

    def from_sub(self, a: Sequence[int]) -> Cocycle:
        C = self.F.C
        return tuple(self.emb[C.cod[m]][a[m]] for m in range(C.nmor))

    def cocycle(self, lift: Sequence[int]) -> Cocycle:
        return self.to_sub(delta_cocycle(self.F, self.cosets, lift))

    def __call__(self, X: Sequence[int], lift: Sequence[int] | None = None) -> int:
        """Class of ``δ(X)`` in ``Lim¹ G``; ``lift`` defaults to the coset names."""
        if lift is None:
            lift = X
        if self.cosets.project(lift) != tuple(X):
            raise InputError("lift does not project to the given family")
        return self.lim1.class_of(self.cocycle(lift))


def connecting_delta(F: FunctorToGroups, subsets, X, lift=None, cap: int = DEFAULT_CAP) -> int:
    return ConnectingMap(F, subsets, cap)(X, lift)


# --- exactness ---------------------------------------------------------------------


@dataclass
class ExactnessReport:
    sizes: dict
    violations: list[str] = field(default_factory=list)
    checked: list[str] = field(default_factory=list)

    @property
    def exact(self) -> bool:
        return not self.violations

    def to_json(self) -> dict:
        return {"exact": self.exact, "sizes": self.sizes, "checked": self.checked, "violations": self.violations}


def _same_set(report: ExactnessReport, where: str, image: set, kernel: set):
    report.checked.append(where)
    if image != kernel:
        report.violations.append(f"{where}: image has {len(image)} points, kernel has {len(kernel)}")


def check_exact_seq1(
    F: FunctorToGroups,
    subsets: Sequence[Sequence[int]],
    cap: int = DEFAULT_CAP,
    seed: int = 0,
    lifts: int = 10,
    check_additivity: bool | None = None,
) -> ExactnessReport:
    """Exactness of ``1 -> Lim G -> Lim F -> Lim F/G -> Lim¹ G -> Lim¹ F`` by enumeration.

    Also re-evaluates δ on random alternative lifts; for central ``G`` checks that δ is additive.
    """
    rng = random.Random(seed)
    delta = ConnectingMap(F, subsets, cap)
    G, cos = delta.G, delta.cosets
    limG = lim0_elements(G, cap)
    limF = lim0_elements(F, cap)
    quot = cos.families(cap)
    lim1F = lim1_nonabelian(F, cap)
    base_q = cos.project([0] * F.C.nobj)

    rep = ExactnessReport(
        sizes={"lim_G": len(limG), "lim_F": len(limF), "lim_F_mod_G": len(quot), "lim1_G": delta.lim1.size, "lim1_F": lim1F.size}
    )
    image_G = {tuple(delta.emb[c][g] for c, g in enumerate(x)) for x in limG}
    rep.checked.append("Lim G -> Lim F injective")
    if len(image_G) != len(limG):
        rep.violations.append("Lim G -> Lim F is not injective")
    _same_set(rep, "at Lim F", image_G, {x for x in limF if cos.project(x) == base_q})
    delta_vals = {}
    for X in quot:
        d0 = delta(X)
        delta_vals[X] = d0
        for _ in range(lifts):
            if delta(X, cos.random_lift(X, rng)) != d0:
                rep.violations.append(f"δ depends on the lift at {X}")
                break
    rep.checked.append("δ independent of lift")
    _same_set(rep, "at Lim F/G", {cos.project(x) for x in limF}, {X for X, d in delta_vals.items() if d == 0})
    j = [lim1F.class_of(delta.from_sub(a)) for a in delta.lim1.cocycles]
    _same_set(
        rep,
        "at Lim¹ G",
        set(delta_vals.values()),
        {delta.lim1.orbit[i] for i in range(len(j)) if j[i] == 0},
    )
    rep.checked.append("Lim¹ G -> Lim¹ F well defined on orbits")
    by_orbit: dict[int, int] = {}
    for i, o in enumerate(delta.lim1.orbit):
        if by_orbit.setdefault(o, j[i]) != j[i]:
            rep.violations.append("Lim¹ G -> Lim¹ F is not constant on orbits")
            break

    central = F.is_central_subfunctor(subsets) if check_additivity is None else check_additivity
    if central:
        rep.checked.append("δ additive")
        for X1 in quot:
            for X2 in quot:
                x1, x2 = cos.random_lift(X1, rng), cos.random_lift(X2, rng)
                prod = tuple(F.groups[c].mul(a, b) for c, (a, b) in enumerate(zip(x1, x2)))
                a1, a2 = delta.cocycle(x1), delta.cocycle(x2)
                summed = tuple(G.groups[G.C.cod[m]].mul(u, v) for m, (u, v) in enumerate(zip(a1, a2)))
                if delta.lim1.class_of(summed) != delta(cos.project(prod), prod):
                    rep.violations.append(f"δ is not additive at {X1}, {X2}")
    return rep


def check_exact_seq2(F: FunctorToGroups, normal_subsets: Sequence[Sequence[int]], cap: int = DEFAULT_CAP, seed: int = 0, lifts: int = 10) -> ExactnessReport:
    """Six-term sequence ``1 -> Lim F' -> Lim F -> Lim F'' -> Lim¹ F' -> Lim¹ F -> Lim¹ F''``."""
    if not F.is_normal_subfunctor(normal_subsets):
        raise InputError("the kernel of a short exact sequence must be a normal subfunctor")
    rep = check_exact_seq1(F, normal_subsets, cap, seed, lifts)
    Q, proj = F.quotient(normal_subsets)
    delta = ConnectingMap(F, normal_subsets, cap)
    lim1F = lim1_nonabelian(F, cap)
    lim1Q = lim1_nonabelian(Q, cap)
    rep.sizes["lim1_F_quot"] = lim1Q.size
    rep.sizes["lim_F_quot"] = len(lim0_elements(Q, cap))
    rep.checked.append("Lim F/F' equals Lim F''")
    if rep.sizes["lim_F_quot"] != rep.sizes["lim_F_mod_G"]:
        rep.violations.append("compatible coset families do not match the limit of the quotient")
    C = F.C
    image = {lim1F.class_of(delta.from_sub(a)) for a in delta.lim1.cocycles}
    push = [lim1Q.class_of(tuple(proj[C.cod[m]][a[m]] for m in range(C.nmor))) for a in lim1F.cocycles]
    kernel = {lim1F.orbit[i] for i in range(len(push)) if push[i] == 0}
    _same_set(rep, "at Lim¹ F", image, kernel)
    return rep
