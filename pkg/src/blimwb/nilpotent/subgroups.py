"""Subgroups of pc groups as canonical induced sequences.

A subgroup is stored as one generator per *pivot* (its leading pc index),
with positive leading exponent dividing the relative order there, and every
entry reduced at the later pivots.  For a subgroup ``H`` this makes
``H ∩ Q_j`` the span of the entries with pivot ``>= j``; in a weighted
presentation ``Q_j`` is a lower central term.
"""

from __future__ import annotations

import heapq
from itertools import count
from typing import Iterable, Sequence

from ..errors import InputError
from ..intlin import FgAbelian, Lattice, preimage, transpose, xgcd
from .pc import PcHom, PcPresentation, Vec


class PcSubgroup:
    def __init__(self, Q: PcPresentation, table: dict[int, Vec]):
        self.Q = Q
        self.table = dict(sorted(table.items()))

    # --- inspection ------------------------------------------------------------

    @property
    def pivots(self) -> list[int]:
        return list(self.table)

    @property
    def gens(self) -> list[Vec]:
        return list(self.table.values())

    def __len__(self):
        return len(self.table)

    def is_trivial(self) -> bool:
        return not self.table

    def leads(self) -> dict[int, int]:
        return {p: g[p] for p, g in self.table.items()}

    def __eq__(self, other):
        return isinstance(other, PcSubgroup) and self.Q is other.Q and self.table == other.table

    def __hash__(self):
        return hash(tuple(self.table.items()))

    def __repr__(self):
        return f"PcSubgroup(pivots={self.pivots}, leads={list(self.leads().values())})"

    def index(self) -> int | None:
        """``[Q : H]`` or ``None`` when infinite."""
        out = 1
        for p, e in enumerate(self.Q.rel_orders):
            g = self.table.get(p)
            if g is None:
                if e == 0:
                    return None
                out *= e
            else:
                out *= g[p]
        return out

    def order(self) -> int | None:
        out = 1
        for p, g in self.table.items():
            e = self.Q.rel_orders[p]
            if e == 0:
                return None
            out *= e // g[p]
        return out

    # --- membership --------------------------------------------------------------

    def exponents(self, x: Vec) -> list[int] | None:
        """Exponents ``c`` with ``x = prod g_i^c_i`` over the entries in pivot order."""
        Q = self.Q
        x = tuple(x)
        out = []
        for p, g in self.table.items():
            lead = Q.lead(x)
            if lead is None:
                out.extend([0] * (len(self.table) - len(out)))
                return out
            if lead < p:
                return None
            if lead > p:
                out.append(0)
                continue
            q, r = divmod(x[p], g[p])
            if r:
                return None
            out.append(q)
            x = Q.multiply(Q.power(g, -q), x)
        return out if Q.lead(x) is None else None

    def contains(self, x: Vec) -> bool:
        return self.exponents(x) is not None

    __contains__ = contains

    def contains_subgroup(self, other: "PcSubgroup") -> bool:
        return all(g in self for g in other.gens)

    def element(self, coeffs: Sequence[int]) -> Vec:
        Q = self.Q
        return Q.product(Q.power(g, c) for g, c in zip(self.gens, coeffs) if c)

    def intersect_term(self, j: int) -> "PcSubgroup":
        """``H ∩ Q_j`` where ``Q_j`` is spanned by pc generators ``j, j+1, ...``."""
        return PcSubgroup(self.Q, {p: g for p, g in self.table.items() if p >= j})

    def intersect_weight(self, w: int) -> "PcSubgroup":
        """``H ∩ γ_w`` for a weighted presentation."""
        return self.intersect_term(self.Q.first_index_of_weight(w))

    def is_normal(self, conjugators: Iterable[Vec] | None = None) -> bool:
        Q = self.Q
        if conjugators is None:
            conjugators = [Q.gen(i) for i in range(Q.s)]
        conjugators = list(conjugators)
        for g in self.gens:
            for c in conjugators:
                if Q.conjugate(g, c) not in self:
                    return False
        return True


# --- construction --------------------------------------------------------------


class _DeepestFirst:
    """Pending elements, deepest leading generator first, without duplicates.

    Filling the bottom of the table first keeps exponents small: later
    elements are reduced against pivots that already exist.
    """

    def __init__(self, Q: PcPresentation):
        self.Q = Q
        self._heap: list = []
        self._pending: set[Vec] = set()
        self._tick = count()

    def append(self, x: Vec) -> None:
        p = self.Q.lead(x)
        if p is None or x in self._pending:
            return
        self._pending.add(x)
        heapq.heappush(self._heap, (-p, next(self._tick), x))

    def popleft(self) -> Vec:
        x = heapq.heappop(self._heap)[2]
        self._pending.discard(x)
        return x

    def __len__(self) -> int:
        return len(self._heap)


class _Builder:
    """Sifting machinery shared by the closure operations."""

    def __init__(self, Q: PcPresentation, conjugators: Sequence[Vec] = (), table: dict[int, Vec] | None = None):
        self.Q = Q
        self.table: dict[int, Vec] = dict(table or {})
        self.conjugators = [tuple(c) for c in conjugators]
        self.queue = _DeepestFirst(Q)

    def _normalize(self, p: int, g: Vec) -> Vec:
        Q = self.Q
        if g[p] < 0:
            g = Q.inverse(g)
        e = Q.rel_orders[p]
        if e:
            d, u, _ = xgcd(g[p], e)
            if d != g[p]:
                # g^u has leading exponent gcd(g_p, e); g itself is re-sifted
                self.queue.append(g)
                g = Q.power(g, u % e)
        return g

    def _reduce(self, g: Vec, after: int) -> Vec:
        """Reduce ``g`` at the pivots beyond ``after`` to keep exponents small."""
        Q = self.Q
        for q in sorted(self.table):
            if q <= after:
                continue
            h = self.table[q]
            m = g[q] // h[q]
            if m:
                g = Q.multiply(g, Q.power(h, -m))
        return g

    def _insert(self, p: int, g: Vec) -> None:
        Q = self.Q
        g = self._reduce(self._normalize(p, g), p)
        self.table[p] = g
        for q in [q for q in self.table if q < p]:
            h = self.table[q]
            if h[p] // g[p]:
                self.table[q] = self._reduce(h, q)
        e = Q.rel_orders[p]
        if e:
            self.queue.append(Q.power(g, e // g[p]))
        for h in list(self.table.values()):
            if h is not g:
                self.queue.append(Q.commutator(g, h))
        for c in self.conjugators:
            self.queue.append(Q.conjugate(g, c))

    def sift(self, x: Vec) -> None:
        Q = self.Q
        while True:
            p = Q.lead(x)
            if p is None:
                return
            g = self.table.get(p)
            if g is None:
                self._insert(p, x)
                return
            a, b = g[p], x[p]
            if b % a == 0:
                x = Q.multiply(x, Q.power(g, -(b // a)))
                continue
            d, u, v = xgcd(a, b)
            new = Q.multiply(Q.power(g, u), Q.power(x, v))
            del self.table[p]
            self._insert(p, new)
            self.queue.append(g)
            self.queue.append(x)
            return

    def run(self) -> None:
        while True:
            while self.queue:
                self.sift(self.queue.popleft())
            if not self._verify():
                return

    def _verify(self) -> bool:
        """Re-queue every closure condition; returns whether anything was missing."""
        Q = self.Q
        H = PcSubgroup(Q, self.table)
        missing = False
        items = list(self.table.items())
        checks = []
        for a, (p, g) in enumerate(items):
            e = Q.rel_orders[p]
            if e:
                checks.append(Q.power(g, e // g[p]))
            for q, h in items[a + 1:]:
                checks.append(Q.commutator(g, h))
            for c in self.conjugators:
                checks.append(Q.conjugate(g, c))
        for x in checks:
            if x not in H:
                self.queue.append(x)
                missing = True
        return missing

    def canonical(self) -> PcSubgroup:
        Q = self.Q
        table = dict(sorted(self.table.items()))
        pivots = list(table)
        for a, p in enumerate(pivots):
            g = table[p]
            for q in pivots[a + 1:]:
                h = table[q]
                m = g[q] // h[q]
                if m:
                    g = Q.multiply(g, Q.power(h, -m))
            table[p] = g
        return PcSubgroup(Q, table)


def closure(Q: PcPresentation, generators: Iterable[Vec], conjugators: Iterable[Vec] = ()) -> PcSubgroup:
    """Subgroup generated by ``generators`` and closed under conjugation by ``conjugators``.

    ``H^c ⊆ H`` forces ``H^c = H`` in a noetherian group, so inverses of the
    conjugators are not needed.
    """
    B = _Builder(Q, conjugators)
    for g in generators:
        B.queue.append(Q.check_element(g))
    B.run()
    return B.canonical()


def trivial_subgroup(Q: PcPresentation) -> PcSubgroup:
    return PcSubgroup(Q, {})


def whole_group(Q: PcPresentation) -> PcSubgroup:
    return PcSubgroup(Q, {i: Q.gen(i) for i in range(Q.s)})


def weight_term(Q: PcPresentation, w: int) -> PcSubgroup:
    """Span of the pc generators of weight ``>= w``."""
    j = Q.first_index_of_weight(w)
    return closure(Q, [Q.gen(i) for i in range(j, Q.s)])


def normal_closure(Q: PcPresentation, generators: Iterable[Vec], group_generators: Iterable[Vec] | None = None) -> PcSubgroup:
    """Smallest normal subgroup containing ``generators``.

    Conjugation runs over ``group_generators`` when given (any generating set
    of ``Q`` will do), otherwise over all pc generators.
    """
    if group_generators is None:
        group_generators = [Q.gen(i) for i in range(Q.s)]
    return closure(Q, generators, group_generators)


def join(H: PcSubgroup, K: PcSubgroup, conjugators: Iterable[Vec] = ()) -> PcSubgroup:
    return closure(H.Q, H.gens + K.gens, conjugators)


def mutual_commutator(Q: PcPresentation, H: PcSubgroup, K: PcSubgroup) -> PcSubgroup:
    """``[H, K]``: commutators of generators, closed under conjugation by ``<H, K>``."""
    comms = [Q.commutator(h, k) for h in H.gens for k in K.gens]
    return closure(Q, comms, H.gens + K.gens)


def lower_central_term(Q: PcPresentation, i: int) -> PcSubgroup:
    if i < 1:
        raise InputError("lower central index must be >= 1")
    G = whole_group(Q)
    term = G
    for _ in range(i - 1):
        if term.is_trivial():
            break
        term = mutual_commutator(Q, term, G)
    return term


def derived_subgroup(H: PcSubgroup) -> PcSubgroup:
    return mutual_commutator(H.Q, H, H)


def abelian_section_invariants(H: PcSubgroup, K: PcSubgroup) -> FgAbelian:
    """Invariants of ``H/K`` for ``K ⊴ H`` with ``H/K`` abelian."""
    Q = H.Q
    if not H.contains_subgroup(K):
        raise InputError("K is not contained in H")
    hs = H.gens
    for a, g in enumerate(hs):
        for h in hs[a + 1:]:
            if Q.commutator(g, h) not in K:
                raise InputError("section H/K is not abelian")
    for k in K.gens:
        for h in hs:
            if Q.conjugate(k, h) not in K:
                raise InputError("K is not normal in H")
    rows = [H.exponents(k) for k in K.gens]
    m = len(hs)
    for a, (p, g) in enumerate(H.table.items()):
        e = Q.rel_orders[p]
        if e:
            r = e // g[p]
            row = [-c for c in H.exponents(Q.power(g, r))]
            row[a] += r
            rows.append(row)
    return FgAbelian.from_relations(m, rows)


# --- quotients -------------------------------------------------------------------


class QuotientMap:
    """Projection ``Q -> Q/N`` onto the pc presentation of the quotient."""

    def __init__(self, Q: PcPresentation, N: PcSubgroup, kept: list[int]):
        self.Q = Q
        self.N = N
        self.kept = kept
        self.target: PcPresentation | None = None

    def reduce(self, x: Vec) -> Vec:
        """Canonical coset representative of ``xN`` in ``Q``."""
        Q = self.Q
        x = tuple(x)
        for p, g in self.N.table.items():
            q = x[p] // g[p]
            if q:
                x = Q.multiply(x, Q.power(g, -q))
        return x

    def __call__(self, x: Vec) -> Vec:
        r = self.reduce(x)
        return tuple(r[i] for i in self.kept)

    def lift(self, y: Sequence[int]) -> Vec:
        v = [0] * self.Q.s
        for i, c in zip(self.kept, y):
            v[i] = c
        return tuple(v)

    def as_hom(self) -> PcHom:
        Q = self.Q
        return PcHom(Q, self.target, [self(Q.gen(i)) for i in range(Q.s)], validate=False)


def quotient_pc(Q: PcPresentation, N: PcSubgroup, check_normal: bool = True) -> tuple[PcPresentation, QuotientMap]:
    if N.Q is not Q:
        raise InputError("subgroup belongs to a different presentation")
    if check_normal and not N.is_normal():
        raise InputError("subgroup is not normal")
    leads = N.leads()
    kept = [i for i in range(Q.s) if leads.get(i, 0) != 1]
    pi = QuotientMap(Q, N, kept)
    rel_orders = [leads.get(i, Q.rel_orders[i]) for i in kept]
    powers = {}
    for a, i in enumerate(kept):
        if rel_orders[a]:
            powers[a] = pi(Q.power(Q.gen(i), rel_orders[a]))
    conjugates = {}
    for a, i in enumerate(kept):
        for b in range(a + 1, len(kept)):
            j = kept[b]
            rel = Q._conj[i][j]
            if rel is not None:
                conjugates[(b, a)] = pi(rel)
    target = PcPresentation(
        [Q.weights[i] for i in kept],
        rel_orders,
        powers,
        conjugates,
        definitions=[Q.definitions[i] for i in kept],
        num_abstract=Q.num_abstract,
    )
    if getattr(Q, "_abstract_images", None) is not None:
        target.set_abstract_images([pi(v) for v in Q.abstract_images()])
    pi.target = target
    return target, pi


# --- kernels of maps to abelian groups ---------------------------------------------


def kernel_to_abelian(
    Gamma: PcSubgroup,
    images: Sequence[Sequence[int]],
    target: Lattice,
    validate: bool = True,
) -> PcSubgroup:
    """Kernel of the homomorphism ``Gamma -> Z^t / target`` sending entry ``i`` to ``images[i]``.

    Generated by ``[Gamma, Gamma]`` together with lifts of the integer kernel
    of the assignment; any map to an abelian group kills ``Gamma'``.
    """
    Q = Gamma.Q
    gens = Gamma.gens
    t = target.n
    if len(images) != len(gens):
        raise InputError("need one image per subgroup generator")
    images = [list(v) for v in images]

    def value(coeffs):
        out = [0] * t
        for c, v in zip(coeffs, images):
            if c:
                for a in range(t):
                    out[a] += c * v[a]
        return out

    if validate:
        for a, (p, g) in enumerate(Gamma.table.items()):
            e = Q.rel_orders[p]
            if e:
                r = e // g[p]
                lhs = [r * x for x in images[a]]
                rhs = value(Gamma.exponents(Q.power(g, r)))
                if [x - y for x, y in zip(lhs, rhs)] not in target:
                    raise InputError("assignment does not respect a power relation")
            for b in range(a + 1, len(gens)):
                comm = value(Gamma.exponents(Q.commutator(g, gens[b])))
                if comm not in target:
                    raise InputError("assignment does not kill a commutator")
    K = preimage(transpose(images, t), len(gens), target) if gens else Lattice(0)
    lifts = [Gamma.element(row) for row in K.basis]
    comms = [Q.commutator(g, h) for a, g in enumerate(gens) for h in gens[a + 1:]]
    return closure(Q, lifts + comms, gens)


def hom_image(f: PcHom, H: PcSubgroup) -> PcSubgroup:
    return closure(f.target, [f(g) for g in H.gens])


def brute_subgroup(Q: PcPresentation, generators: Iterable[Vec], conjugators: Iterable[Vec] = (), cap: int = 4096) -> set[Vec]:
    """Element set of a generated subgroup in a finite pc group, by orbit closure."""
    gens = [tuple(g) for g in generators]
    conj = [tuple(c) for c in conjugators]
    seen = {Q.identity}
    frontier = [Q.identity]
    while frontier:
        nxt = []
        for x in frontier:
            cands = [Q.multiply(x, g) for g in gens]
            cands += [Q.conjugate(x, c) for c in conj]
            for y in cands:
                if y not in seen:
                    seen.add(y)
                    nxt.append(y)
                    if len(seen) > cap:
                        raise InputError("brute subgroup exceeded cap")
        frontier = nxt
    return seen


def subgroup_elements(H: PcSubgroup, cap: int = 1 << 16) -> set[Vec]:
    """All elements of a finite subgroup, via its canonical sequence."""
    Q = H.Q
    order = H.order()
    if order is None:
        raise InputError("subgroup is infinite")
    if order > cap:
        raise InputError(f"subgroup order {order} exceeds cap {cap}")
    elems = [Q.identity]
    for p, g in reversed(list(H.table.items())):
        r = Q.rel_orders[p] // g[p]
        powers = [Q.power(g, c) for c in range(r)]
        elems = [Q.multiply(gp, x) for gp in powers for x in elems]
    return set(elems)

