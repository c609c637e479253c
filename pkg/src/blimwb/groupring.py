"""Truncated integral group rings.

Free side: ``Z[F]/f^n`` is free abelian on noncommutative monomials in
``X_j = x_j - 1`` of degree ``< n``; a word expands through
``x_j -> 1 + X_j``.  Finite side: ``Z[G]`` as integer vectors indexed by G.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from itertools import product
from typing import Iterable, Sequence

from . import fpgroup
from .errors import CapExceeded, InputError
from .intlin import Lattice
from .words import FreePresentation, Word

Monomial = tuple[int, ...]

DEFAULT_GROUP_CAP = 4096


class TruncatedElement:
    """Element of ``Z<X_1..X_k>`` modulo monomials of degree ``>= n``."""

    __slots__ = ("n", "coeffs")

    def __init__(self, n: int, coeffs: dict[Monomial, int] | None = None):
        if n < 1:
            raise InputError("truncation order must be >= 1")
        self.n = n
        self.coeffs = {m: c for m, c in (coeffs or {}).items() if c and len(m) < n}

    @classmethod
    def one(cls, n: int) -> "TruncatedElement":
        return cls(n, {(): 1})

    @classmethod
    def monomial(cls, n: int, m: Monomial, c: int = 1) -> "TruncatedElement":
        return cls(n, {tuple(m): c})

    def _check(self, other: "TruncatedElement"):
        if self.n != other.n:
            raise InputError(f"truncation orders differ: {self.n} vs {other.n}")

    def __add__(self, other: "TruncatedElement") -> "TruncatedElement":
        self._check(other)
        out = dict(self.coeffs)
        for m, c in other.coeffs.items():
            out[m] = out.get(m, 0) + c
        return TruncatedElement(self.n, out)

    def __neg__(self) -> "TruncatedElement":
        return TruncatedElement(self.n, {m: -c for m, c in self.coeffs.items()})

    def __sub__(self, other: "TruncatedElement") -> "TruncatedElement":
        return self + (-other)

    def __mul__(self, other: "TruncatedElement") -> "TruncatedElement":
        self._check(other)
        n = self.n
        out: dict[Monomial, int] = {}
        for m1, c1 in self.coeffs.items():
            room = n - len(m1)
            for m2, c2 in other.coeffs.items():
                if len(m2) < room:
                    m = m1 + m2
                    out[m] = out.get(m, 0) + c1 * c2
        return TruncatedElement(n, out)

    def scale(self, k: int) -> "TruncatedElement":
        return TruncatedElement(self.n, {m: k * c for m, c in self.coeffs.items()})

    def truncate(self, m: int) -> "TruncatedElement":
        return TruncatedElement(m, {mon: c for mon, c in self.coeffs.items() if len(mon) < m})

    def homogeneous(self, d: int) -> dict[Monomial, int]:
        return {m: c for m, c in self.coeffs.items() if len(m) == d}

    def low_degree(self) -> int | None:
        """Smallest degree with a nonzero coefficient."""
        return min((len(m) for m in self.coeffs), default=None)

    def constant(self) -> int:
        return self.coeffs.get((), 0)

    def is_zero(self) -> bool:
        return not self.coeffs

    def __eq__(self, other):
        return isinstance(other, TruncatedElement) and self.n == other.n and self.coeffs == other.coeffs

    def __hash__(self):
        return hash((self.n, frozenset(self.coeffs.items())))

    def __repr__(self):
        terms = sorted(self.coeffs.items(), key=lambda mc: (len(mc[0]), mc[0]))
        return f"TruncatedElement(n={self.n}, {dict(terms)})"


def trunc_multiply(a: TruncatedElement, b: TruncatedElement) -> TruncatedElement:
    return a * b


def _binom(e: int, i: int) -> int:
    num = 1
    for t in range(i):
        num *= e - t
    den = 1
    for t in range(2, i + 1):
        den *= t
    return num // den


@lru_cache(maxsize=None)
def _generator_power(g: int, e: int, n: int) -> TruncatedElement:
    # (1 + X)^e = sum_i binom(e, i) X^i, valid for negative e as a power series
    return TruncatedElement(n, {(g,) * i: _binom(e, i) for i in range(n)})


@lru_cache(maxsize=4096)
def expand_group_element(w: Word, n: int) -> TruncatedElement:
    """Image of ``w`` in ``Z[F]/f^n`` (the full ``1 + (w - 1)``)."""
    if n < 1:
        raise InputError("truncation order must be >= 1")
    out = TruncatedElement.one(n)
    for g, e in w.letters:
        out = out * _generator_power(g, e, n)
    return out


@lru_cache(maxsize=None)
def monomial_basis(k: int, n: int) -> tuple[Monomial, ...]:
    """Monomials of degree ``1..n-1``, graded then lexicographic."""
    return tuple(m for d in range(1, n) for m in product(range(k), repeat=d))


@lru_cache(maxsize=None)
def _basis_index(k: int, n: int) -> dict[Monomial, int]:
    return {m: i for i, m in enumerate(monomial_basis(k, n))}


def augmentation_coordinates(x: TruncatedElement, k: int) -> list[int]:
    """Coordinates of the degree ``>= 1`` part of ``x`` in ``f/f^n``."""
    idx = _basis_index(k, x.n)
    v = [0] * len(idx)
    for m, c in x.coeffs.items():
        if m:
            v[idx[m]] = c
    return v


def from_coordinates(v: Sequence[int], k: int, n: int) -> TruncatedElement:
    basis = monomial_basis(k, n)
    return TruncatedElement(n, {m: c for m, c in zip(basis, v) if c})


@dataclass(frozen=True)
class IdealLattice:
    """A sublattice of ``f/f^n`` in monomial coordinates."""

    n: int
    ngens: int
    lattice: Lattice

    @property
    def ambient_rank(self) -> int:
        return self.lattice.n

    def contains(self, x: TruncatedElement) -> bool:
        return augmentation_coordinates(x, self.ngens) in self.lattice


def _monomials_up_to(k: int, d: int) -> list[Monomial]:
    return [m for deg in range(d + 1) for m in product(range(k), repeat=deg)]


@lru_cache(maxsize=256)
def relator_ideal_lattice(P: FreePresentation, n: int, mode: str = "r") -> IdealLattice:
    """``(r + f^n)/f^n`` (mode ``"r"``) or ``(rf + f^n)/f^n`` (mode ``"rf"``).

    Spanned by ``mL (rho - 1) mR`` over relators ``rho`` and monomials with
    ``deg mL + deg mR <= n - 2`` (``deg mR >= 1`` for ``rf``).
    """
    if n < 2:
        raise InputError("n must be >= 2")
    if mode not in ("r", "rf"):
        raise InputError(f"unknown ideal mode {mode!r}")
    k = P.ngens
    dim = len(monomial_basis(k, n))
    rows = []
    monos = _monomials_up_to(k, n - 2)
    lattice = Lattice(dim)
    for rho in P.relators:
        E = expand_group_element(rho, n) - TruncatedElement.one(n)
        if E.is_zero():
            continue
        low = E.low_degree()
        for mR in monos:
            if mode == "rf" and not mR:
                continue
            right = E * TruncatedElement.monomial(n, mR)
            if right.is_zero():
                continue
            for mL in monos:
                if len(mL) + len(mR) + low >= n:
                    continue
                v = TruncatedElement.monomial(n, mL) * right
                if not v.is_zero():
                    rows.append(augmentation_coordinates(v, k))
        if len(rows) > 4 * dim:
            lattice = lattice.add(rows)
            rows = []
    lattice = lattice.add(rows)
    return IdealLattice(n, k, lattice)


def dimension_membership_free(P: FreePresentation, n: int, w: Word, mode: str = "r") -> bool:
    """Whether ``w - 1`` lies in ``r + f^n`` (resp. ``rf + f^n``)."""
    if w.max_generator() >= P.ngens:
        raise InputError("word uses generators outside the presentation")
    L = relator_ideal_lattice(P, n, mode)
    x = expand_group_element(w, n)
    return augmentation_coordinates(x, P.ngens) in L.lattice


class FiniteGroupRing:
    """``Z[G]`` for a finite group given by its multiplication table."""

    def __init__(self, table: Sequence[Sequence[int]], validate: bool = True):
        self.table = [list(r) for r in table]
        self.order = len(self.table)
        if validate:
            self._validate()
        self.identity = next(i for i in range(self.order) if self.table[i] == list(range(self.order)))
        self.inverse = [row.index(self.identity) for row in self.table]
        self.coset_table: list[list[int]] | None = None

    def _validate(self):
        N = self.order
        T = self.table
        if any(len(r) != N or sorted(r) != list(range(N)) for r in T):
            raise InputError("multiplication table rows are not permutations")
        ids = [i for i in range(N) if T[i] == list(range(N))]
        if not ids or any(T[j][ids[0]] != j for j in range(N)):
            raise InputError("no two-sided identity element")
        cols_ok = all(sorted(T[i][j] for i in range(N)) == list(range(N)) for j in range(N))
        if not cols_ok:
            raise InputError("multiplication table columns are not permutations")
        if N <= 128:
            triples = ((a, b, c) for a in range(N) for b in range(N) for c in range(N))
        else:
            import random

            rng = random.Random(0)
            triples = ((rng.randrange(N), rng.randrange(N), rng.randrange(N)) for _ in range(200_000))
        for a, b, c in triples:
            if T[T[a][b]][c] != T[a][T[b][c]]:
                raise InputError(f"multiplication is not associative at ({a}, {b}, {c})")

    def mul(self, a: int, b: int) -> int:
        return self.table[a][b]

    def augmentation_vector(self, g: int) -> list[int]:
        """``g - 1`` as an integer vector."""
        v = [0] * self.order
        v[g] += 1
        v[self.identity] -= 1
        return v

    def right_multiply(self, v: Sequence[int], g: int) -> list[int]:
        out = [0] * self.order
        T = self.table
        for h, c in enumerate(v):
            if c:
                out[T[h][g]] += c
        return out

    @classmethod
    def from_presentation(cls, P: FreePresentation, cap: int = DEFAULT_GROUP_CAP) -> tuple["FiniteGroupRing", list[Word]]:
        """Enumerate the group of ``P``; returns the ring and a word for each element."""
        try:
            ct = fpgroup.enumerate_cosets(P, max_cosets=max(cap * 50, 1000))
        except CapExceeded:
            raise CapExceeded(f"group {P} is infinite or larger than the cap") from None
        if len(ct) > cap:
            raise CapExceeded(f"group of order {len(ct)} exceeds cap {cap}")
        words = fpgroup.coset_words(ct, P.ngens)
        N = len(ct)
        table = [[fpgroup.act(ct, a, words[b]) for b in range(N)] for a in range(N)]
        ring = cls(table)
        ring.coset_table = ct
        return ring, words

    def element_of(self, w: Word) -> int:
        """Element represented by ``w``; only for rings built from a presentation."""
        if self.coset_table is None:
            raise InputError("ring was not built from a presentation")
        return fpgroup.act(self.coset_table, 0, w)


def augmentation_power_lattice(R: FiniteGroupRing, n: int) -> Lattice:
    """The lattice ``g^n`` inside ``Z^|G|``."""
    if n < 1:
        raise InputError("n must be >= 1")
    N = R.order
    L = Lattice(N, [R.augmentation_vector(g) for g in range(N)])
    for _ in range(n - 1):
        rows = []
        for b in L.basis:
            for g in range(N):
                if g == R.identity:
                    continue
                v = R.right_multiply(b, g)
                rows.append([x - y for x, y in zip(v, b)])
        L = Lattice(N, rows)
    return L


def dimension_subgroup_finite(R: FiniteGroupRing, n: int, cap: int = DEFAULT_GROUP_CAP) -> set[int]:
    """``D_n(G) = G ∩ (1 + g^n)`` as a set of element indices."""
    if R.order > cap:
        raise CapExceeded(f"group order {R.order} exceeds cap {cap}")
    if n <= 1:
        return set(range(R.order))
    L = augmentation_power_lattice(R, n)
    return {g for g in range(R.order) if R.augmentation_vector(g) in L}


def word_coordinates(words: Iterable[Word], k: int, n: int) -> list[list[int]]:
    return [augmentation_coordinates(expand_group_element(w, n), k) for w in words]
