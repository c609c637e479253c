"""Nerve, standard cochain complex and higher limits of abelian-valued functors."""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product

from ..errors import CapExceeded
from ..intlin import FgAbelian, Lattice, lattice_quotient, preimage, solve_congruences
from .category import FiniteCategory
from .functors import AbelianFunctor, lattice_of_values

Chain = tuple[int, ...]


def nerve_chains(C: FiniteCategory, n: int) -> list:
    """Composable ``n``-tuples ``(a1, ..., an)`` with ``dom a_i = cod a_{i+1}``.

    For ``n = 0`` the chains are the objects themselves.  Identities are kept.
    """
    if n < 0:
        raise ValueError("chain length must be nonnegative")
    if n == 0:
        return list(range(C.nobj))
    chains: list[Chain] = [(f,) for f in range(C.nmor)]
    for _ in range(n - 1):
        chains = [ch + (f,) for ch in chains for f in range(C.nmor) if C.cod[f] == C.dom[ch[-1]]]
    return chains


def chain_target(C: FiniteCategory, n: int, ch) -> int:
    """Object whose value the cochain takes on ``ch``: ``cod a1``, or the object itself."""
    return ch if n == 0 else C.cod[ch[0]]


def face(C: FiniteCategory, n: int, ch: Chain, i: int):
    """The ``i``-th face of an ``n``-chain (``n >= 1``)."""
    if n == 1:
        return C.dom[ch[0]] if i == 0 else C.cod[ch[0]]
    if i == 0:
        return ch[1:]
    if i == n:
        return ch[:-1]
    return ch[: i - 1] + (C.compose[(ch[i - 1], ch[i])],) + ch[i + 1 :]


@dataclass
class CochainComplex:
    """``C^0 -> C^1 -> ...``; ``d[n]`` is the integer matrix of ``∂^n`` (rows index ``C^{n+1}``)."""

    functor: AbelianFunctor
    chains: list[list]
    offsets: list[dict]
    lattices: list[Lattice]
    d: list[list[list[int]]]

    def rank(self, n: int) -> int:
        return self.lattices[n].n

    def square_zero(self) -> bool:
        """``∂^{n+1} ∂^n`` lands in the relations, for every available ``n``."""
        for n in range(len(self.d) - 1):
            A, B = self.d[n + 1], self.d[n]
            for j in range(self.rank(n)):
                col = [sum(A[i][k] * B[k][j] for k in range(len(B)) if A[i][k] and B[k][j]) for i in range(len(A))]
                if col not in self.lattices[n + 2]:
                    return False
        return True

    def cohomology(self, n: int) -> FgAbelian:
        """``H^n = ker ∂^n / (im ∂^{n-1} + relations)``."""
        if n + 1 > len(self.d):
            raise ValueError(f"complex was built only up to degree {len(self.d) - 1}")
        rank = self.rank(n)
        Z = preimage(self.d[n], rank, self.lattices[n + 1]) if self.d[n] else Lattice.full(rank)
        B = self.lattices[n]
        if n > 0 and self.d[n - 1]:
            B = B.add([[row[j] for row in self.d[n - 1]] for j in range(self.rank(n - 1))])
        return lattice_quotient(Z, B)

    def cocycle_lattice(self, n: int) -> Lattice:
        rank = self.rank(n)
        return preimage(self.d[n], rank, self.lattices[n + 1]) if self.d[n] else Lattice.full(rank)

    def coboundary_lattice(self, n: int) -> Lattice:
        B = self.lattices[n]
        if n > 0 and self.d[n - 1]:
            B = B.add([[row[j] for row in self.d[n - 1]] for j in range(self.rank(n - 1))])
        return B


def cochain_complex(F: AbelianFunctor, max_degree: int, cap: int = 200_000) -> CochainComplex:
    """Matrices of ``∂^0 .. ∂^max_degree`` for the unnormalized standard complex."""
    C = F.C
    chains, offsets, lattices = [], [], []
    for n in range(max_degree + 2):
        chs = nerve_chains(C, n)
        targets = [chain_target(C, n, ch) for ch in chs]
        size = sum(F.rank(t) for t in targets)
        if size > cap:
            raise CapExceeded(f"degree-{n} cochains have {size} generators (cap {cap})")
        off, pos = {}, 0
        for ch, t in zip(chs, targets):
            off[ch] = pos
            pos += F.rank(t)
        chains.append(chs)
        offsets.append(off)
        lattices.append(lattice_of_values(F, targets))
    d = []
    for n in range(max_degree + 1):
        rows, cols = lattices[n + 1].n, lattices[n].n
        M = [[0] * cols for _ in range(rows)]
        for ch in chains[n + 1]:
            r0 = offsets[n + 1][ch]
            t = chain_target(C, n + 1, ch)
            for i in range(n + 2):
                fc = face(C, n + 1, ch, i)
                c0 = offsets[n][fc]
                sign = -1 if i % 2 else 1
                src = chain_target(C, n, fc)
                if i == 0:
                    A = F.matrices[ch[0]]
                    for p in range(F.rank(t)):
                        for q in range(F.rank(src)):
                            if A[p][q]:
                                M[r0 + p][c0 + q] += A[p][q]
                else:
                    for p in range(F.rank(t)):
                        M[r0 + p][c0 + p] += sign
        d.append(M)
    return CochainComplex(F, chains, offsets, lattices, d)


def lim_n(F: AbelianFunctor, n: int) -> FgAbelian:
    """``Lim^n F`` as the ``n``-th cohomology of the standard complex."""
    return cochain_complex(F, n).cohomology(n)


def lim0_lattice(F: AbelianFunctor) -> tuple[Lattice, Lattice]:
    """Compatible families in ``⊕_c F(c)`` as a lattice, with the relation lattice.

    Solved morphism by morphism from ``x(cod a) = ^a x(dom a)``, without the nerve.
    """
    C = F.C
    offs, pos = [], 0
    for c in range(C.nobj):
        offs.append(pos)
        pos += F.rank(c)
    rows, moduli = [], []
    for f in range(C.nmor):
        if C.is_identity(f):
            continue
        a, b = C.dom[f], C.cod[f]
        for p, d in enumerate(F.orders[b]):
            r = [0] * pos
            for q in range(F.rank(a)):
                r[offs[a] + q] += F.matrices[f][p][q]
            r[offs[b] + p] -= 1
            rows.append(r)
            moduli.append(d)
    rel = lattice_of_values(F, range(C.nobj))
    return solve_congruences(rows, moduli, pos), rel


def lim0_direct(F: AbelianFunctor) -> FgAbelian:
    fam, rel = lim0_lattice(F)
    return lattice_quotient(fam, rel)


def lim0_elements(F, cap: int = 10**6) -> list[tuple[int, ...]]:
    """All compatible families of a functor to finite groups, by enumeration."""
    C = F.C
    total = 1
    for G in F.groups:
        total *= G.order
    if total > cap:
        raise CapExceeded(f"product of object groups has {total} elements (cap {cap})")
    arrows = [f for f in range(C.nmor) if not C.is_identity(f)]
    # check each arrow once both endpoints are assigned
    checks: list[list[int]] = [[] for _ in range(C.nobj)]
    for f in arrows:
        checks[max(C.dom[f], C.cod[f])].append(f)
    out = []
    x = [0] * C.nobj

    def go(c):
        if c == C.nobj:
            out.append(tuple(x))
            return
        for g in range(F.groups[c].order):
            x[c] = g
            if all(F.maps[f][x[C.dom[f]]] == x[C.cod[f]] for f in checks[c]):
                go(c + 1)

    go(0)
    return out


def bar_cohomology_trivial_z(G, n: int) -> FgAbelian:
    """``H^n(G; Z)`` with trivial action from the normalized bar complex (a separate oracle)."""
    N = G.order
    nonid = list(range(1, N))

    def cells(k):
        return list(product(nonid, repeat=k))

    def boundary(k):
        # δ: C^k -> C^{k+1}, rows indexed by (k+1)-cells, columns by k-cells
        src = {c: i for i, c in enumerate(cells(k))}
        rows = []
        for cell in cells(k + 1):
            r = [0] * len(src)
            terms = [(1, cell[1:])]
            for i in range(k):
                prod_ = G.mul(cell[i], cell[i + 1])
                terms.append(((-1) ** (i + 1), cell[:i] + (prod_,) + cell[i + 2 :]))
            terms.append(((-1) ** (k + 1), cell[:-1]))
            for s, t in terms:
                if 0 not in t:
                    r[src[t]] += s
            rows.append(r)
        return rows, len(src)

    Dn, cn = boundary(n)
    Z = preimage(Dn, cn, Lattice(len(Dn))) if Dn else Lattice.full(cn)
    if n == 0:
        return lattice_quotient(Z, Lattice(cn))
    Dp, cp = boundary(n - 1)
    B = Lattice(cn, [[row[j] for row in Dp] for j in range(cp)])
    return lattice_quotient(Z, B)
