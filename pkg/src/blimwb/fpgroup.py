"""Coset enumeration (HLT strategy) for small finitely presented groups."""

from __future__ import annotations

from collections import deque

from .errors import CapExceeded
from .words import FreePresentation, Word

DEFAULT_MAX_COSETS = 200_000


def _cols(word: Word) -> list[int]:
    # column 2g is x_g, column 2g+1 is x_g^-1
    return [2 * g + (0 if s > 0 else 1) for g, s in word.signed_letters()]


class CosetTable:
    def __init__(self, ngens: int, max_cosets: int):
        self.ncols = 2 * ngens
        self.max_cosets = max_cosets
        self.table: list[list[int | None]] = [[None] * self.ncols]
        self.parent = [0]

    @staticmethod
    def inv(x: int) -> int:
        return x ^ 1

    def define(self, c: int, x: int) -> None:
        if len(self.table) >= self.max_cosets:
            raise CapExceeded(f"coset enumeration exceeded {self.max_cosets} cosets")
        d = len(self.table)
        self.table.append([None] * self.ncols)
        self.parent.append(d)
        self.table[c][x] = d
        self.table[d][x ^ 1] = c

    def rep(self, c: int) -> int:
        root = c
        while self.parent[root] != root:
            root = self.parent[root]
        while self.parent[c] != root:
            self.parent[c], c = root, self.parent[c]
        return root

    def alive(self, c: int) -> bool:
        return self.parent[c] == c

    def _merge(self, k: int, l: int, queue: list[int]) -> None:
        k, l = self.rep(k), self.rep(l)
        if k == l:
            return
        lo, hi = min(k, l), max(k, l)
        self.parent[hi] = lo
        queue.append(hi)

    def coincidence(self, a: int, b: int) -> None:
        queue: list[int] = []
        self._merge(a, b, queue)
        i = 0
        T = self.table
        while i < len(queue):
            e = queue[i]
            i += 1
            for x in range(self.ncols):
                f = T[e][x]
                if f is None:
                    continue
                if T[f][x ^ 1] == e:
                    T[f][x ^ 1] = None
                e1, f1 = self.rep(e), self.rep(f)
                if T[e1][x] is not None:
                    self._merge(f1, T[e1][x], queue)
                elif T[f1][x ^ 1] is not None:
                    self._merge(e1, T[f1][x ^ 1], queue)
                else:
                    T[e1][x] = f1
                    T[f1][x ^ 1] = e1

    def scan_and_fill(self, c: int, w: list[int]) -> None:
        T = self.table
        f = b = c
        i, j = 0, len(w) - 1
        while True:
            while i <= j and T[f][w[i]] is not None:
                f = T[f][w[i]]
                i += 1
            if i > j:
                if f != b:
                    self.coincidence(f, b)
                return
            while j >= i and T[b][w[j] ^ 1] is not None:
                b = T[b][w[j] ^ 1]
                j -= 1
            if j < i:
                self.coincidence(f, b)
                return
            if i == j:
                T[f][w[i]] = b
                T[b][w[i] ^ 1] = f
                return
            self.define(f, w[i])


def enumerate_cosets(P: FreePresentation, subgroup: tuple[Word, ...] = (), max_cosets: int = DEFAULT_MAX_COSETS) -> list[list[int]]:
    """Compact coset table of ``subgroup`` in the group presented by ``P``.

    Row ``c``, column ``2g`` gives ``c * x_g``; column ``2g+1`` gives ``c * x_g^-1``.
    """
    k = P.ngens
    if k == 0:
        return [[]]
    ct = CosetTable(k, max_cosets)
    rels = [_cols(r) for r in P.relators if r]
    for h in subgroup:
        if h:
            ct.scan_and_fill(0, _cols(h))
    c = 0
    while c < len(ct.table):
        if ct.alive(c):
            for r in rels:
                ct.scan_and_fill(c, r)
                if not ct.alive(c):
                    break
            if ct.alive(c):
                for x in range(ct.ncols):
                    if ct.table[c][x] is None:
                        ct.define(c, x)
        c += 1
    live = [c for c in range(len(ct.table)) if ct.alive(c)]
    renum = {c: i for i, c in enumerate(live)}
    return [[renum[ct.rep(ct.table[c][x])] for x in range(ct.ncols)] for c in live]


def coset_words(table: list[list[int]], ngens: int) -> list[Word]:
    """Breadth-first spanning-tree words reaching each coset from coset 0."""
    words: list[Word | None] = [None] * len(table)
    words[0] = Word()
    queue = deque([0])
    while queue:
        c = queue.popleft()
        for x in range(2 * ngens):
            d = table[c][x]
            if words[d] is None:
                words[d] = words[c] * Word.gen(x // 2, -1 if x & 1 else 1)
                queue.append(d)
    return words  # type: ignore[return-value]


def act(table: list[list[int]], c: int, w: Word) -> int:
    for g, s in w.signed_letters():
        c = table[c][2 * g + (0 if s > 0 else 1)]
    return c
