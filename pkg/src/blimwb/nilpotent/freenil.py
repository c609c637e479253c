"""Free nilpotent groups ``F/γ_{c+1}(F)`` as weighted pc presentations.

The pc generators are Hall basic commutators.  Structure constants are read
off the Magnus embedding ``x_j -> 1 + X_j`` into ``Z<X>/(deg > c)``, which is
faithful on ``F/γ_{c+1}``: the element ``[a_j, a_i]`` is peeled weight by
weight, each homogeneous part being solved against the Lie leading terms of
the basic commutators of that weight.
"""

from __future__ import annotations

from functools import lru_cache
from itertools import product

from ..errors import InputError
from ..groupring import TruncatedElement, _generator_power
from ..intlin import RowSolver
from .pc import PcPresentation

MAX_CLASS = 4


def witt_number(k: int, w: int) -> int:
    """Rank of the weight-``w`` layer of the free Lie ring on ``k`` generators."""
    total = 0
    for d in range(1, w + 1):
        if w % d == 0:
            total += _mobius(d) * k ** (w // d)
    return total // w


def _mobius(n: int) -> int:
    out = 1
    p = 2
    while p * p <= n:
        if n % p == 0:
            n //= p
            if n % p == 0:
                return 0
            out = -out
        p += 1
    if n > 1:
        out = -out
    return out


def basic_commutators(k: int, c: int) -> list[tuple]:
    """Hall basic commutators of weight ``<= c`` as definition trees.

    Entries of weight ``w`` are ``('c', u, v)`` with ``u > v`` and, when
    ``u = [u1, u2]``, ``u2 <= v``.  Order is by weight, then by creation.
    """
    basics: list[tuple] = [("g", j) for j in range(k)]
    weight = {b: 1 for b in basics}
    pos = {b: i for i, b in enumerate(basics)}
    for w in range(2, c + 1):
        new = []
        for u in basics:
            for v in basics:
                if weight[u] + weight[v] != w or not pos[u] > pos[v]:
                    continue
                if u[0] == "c" and pos[u[2]] > pos[v]:
                    continue
                new.append(("c", u, v))
        for b in new:
            weight[b] = w
            pos[b] = len(basics)
            basics.append(b)
    return basics


def _weight_of(b) -> int:
    return 1 if b[0] == "g" else _weight_of(b[1]) + _weight_of(b[2])


def _series_inverse(x: TruncatedElement) -> TruncatedElement:
    # (1 + A)^-1 = sum (-A)^i, terminating because A has no constant term
    a = x - TruncatedElement.one(x.n)
    term = TruncatedElement.one(x.n)
    out = TruncatedElement.one(x.n)
    for _ in range(1, x.n):
        term = term * (-a)
        if term.is_zero():
            break
        out = out + term
    return out


class _Magnus:
    """Magnus images of pc elements, with the generators' images cached."""

    def __init__(self, gens: list[tuple], n: int):
        self.n = n
        self.fwd: list[TruncatedElement] = []
        self.inv: list[TruncatedElement] = []
        cache: dict = {}
        for b in gens:
            m = self._tree(b, cache)
            self.fwd.append(m)
            self.inv.append(_series_inverse(m))

    def _tree(self, b, cache):
        if b in cache:
            return cache[b]
        if b[0] == "g":
            m = _generator_power(b[1], 1, self.n)
        else:
            u = self._tree(b[1], cache)
            v = self._tree(b[2], cache)
            m = _series_inverse(v * u) * (u * v)
        cache[b] = m
        return m

    def power(self, i: int, e: int) -> TruncatedElement:
        base = self.fwd[i] if e > 0 else self.inv[i]
        out = TruncatedElement.one(self.n)
        for _ in range(abs(e)):
            out = out * base
        return out


def _homogeneous_vector(x: TruncatedElement, k: int, w: int, index: dict) -> list[int]:
    v = [0] * (k ** w)
    for m, c in x.homogeneous(w).items():
        v[index[m]] = c
    return v


@lru_cache(maxsize=None)
def free_nilpotent_pc(k: int, c: int) -> PcPresentation:
    """``F_k / γ_{c+1}(F_k)`` on Hall basic commutators; abstract generators are ``x_0..x_{k-1}``."""
    if k < 0:
        raise InputError("rank must be nonnegative")
    if not 1 <= c <= MAX_CLASS:
        raise InputError(f"nilpotency class must be between 1 and {MAX_CLASS}, got {c}")
    gens = basic_commutators(k, c)
    s = len(gens)
    weights = [_weight_of(b) for b in gens]
    n = c + 1
    mag = _Magnus(gens, n)

    by_weight: dict[int, list[int]] = {}
    for i, w in enumerate(weights):
        by_weight.setdefault(w, []).append(i)
    solvers = {}
    indices = {}
    for w, idx in by_weight.items():
        indices[w] = {m: t for t, m in enumerate(product(range(k), repeat=w))}
        rows = [_homogeneous_vector(mag.fwd[i], k, w, indices[w]) for i in idx]
        solvers[w] = RowSolver(rows, k ** w)

    conjugates = {}
    for i in range(s):
        for j in range(i + 1, s):
            if weights[i] + weights[j] > c:
                continue
            # Magnus image of [a_j, a_i] = a_j^-1 a_i^-1 a_j a_i
            m = (mag.inv[j] * mag.inv[i]) * (mag.fwd[j] * mag.fwd[i])
            vec = [0] * s
            for w in range(weights[i] + weights[j], c + 1):
                coeffs = solvers[w].solve(_homogeneous_vector(m, k, w, indices[w]))
                if coeffs is None:
                    raise AssertionError(f"Magnus peel failed at weight {w} for ({j}, {i})")
                peeled = TruncatedElement.one(n)
                for g, e in zip(by_weight[w], coeffs):
                    if e:
                        vec[g] = e
                        peeled = peeled * mag.power(g, e)
                m = _series_inverse(peeled) * m
            if m != TruncatedElement.one(n):
                raise AssertionError(f"Magnus peel left a remainder for ({j}, {i})")
            if any(vec):
                vec[j] = 1
                conjugates[(j, i)] = vec
    Q = PcPresentation(weights, [0] * s, conjugates=conjugates, definitions=gens, num_abstract=k)
    Q.set_abstract_images([Q.gen(j) for j in range(k)])
    return Q
