"""Weighted polycyclic presentations with a recursive collector.

Elements are exponent vectors (tuples).  A presentation on ``a_0..a_{s-1}``
stores relative orders (0 = infinite), power relations ``a_i^e_i = w_i`` with
``w_i`` in ``<a_{i+1}, ...>``, and conjugation relations
``a_i^-1 a_j a_i = a_j c_ij`` for ``j > i`` with ``c_ij`` in ``<a_{j+1}, ...>``.

Each generator also carries a *definition*: an expression tree over abstract
generators ``('g', j)`` / ``('c', left, right)`` naming the free-group word it
is the image of.  Homomorphisms out of a presented group are built from
images of the abstract generators.
"""

from __future__ import annotations

import sys
from typing import Iterable, Sequence

from ..errors import InfiniteGroupError, CapExceeded, InputError
from ..words import Word, commutator as word_commutator

INFINITE = 0
Vec = tuple[int, ...]
Definition = tuple

sys.setrecursionlimit(max(sys.getrecursionlimit(), 20000))


def definition_word(d: Definition) -> Word:
    if d[0] == "g":
        return Word.gen(d[1])
    return word_commutator(definition_word(d[1]), definition_word(d[2]))


def definition_weight(d: Definition) -> int:
    if d[0] == "g":
        return 1
    return definition_weight(d[1]) + definition_weight(d[2])


class PcPresentation:
    def __init__(
        self,
        weights: Sequence[int],
        rel_orders: Sequence[int],
        powers: dict[int, Sequence[int]] | None = None,
        conjugates: dict[tuple[int, int], Sequence[int]] | None = None,
        definitions: Sequence[Definition] | None = None,
        num_abstract: int = 0,
    ):
        self.s = s = len(weights)
        self.weights = tuple(weights)
        self.rel_orders = tuple(int(e) for e in rel_orders)
        if len(self.rel_orders) != s:
            raise InputError("weights and relative orders differ in length")
        if any(b < a for a, b in zip(self.weights, self.weights[1:])):
            raise InputError("weights must be nondecreasing")
        if any(e < 0 or e == 1 for e in self.rel_orders):
            raise InputError("relative orders must be 0 (infinite) or >= 2")
        self.identity: Vec = (0,) * s
        self.powers: dict[int, Vec] = {}
        for i, e in enumerate(self.rel_orders):
            if e:
                w = tuple(powers.get(i, self.identity)) if powers else self.identity
                if len(w) != s or any(w[: i + 1]):
                    raise InputError(f"power relation of a_{i} must lie in later generators")
                self.powers[i] = w
        # _conj[i][j]: normal form of a_i^-1 a_j a_i, or None when they commute
        self._conj: list[list[Vec | None]] = [[None] * s for _ in range(s)]
        for (j, i), v in (conjugates or {}).items():
            v = tuple(v)
            if not j > i:
                raise InputError("conjugation relations need j > i")
            if len(v) != s or any(v[:j]) or v[j] != 1:
                raise InputError(f"conjugate of a_{j} by a_{i} must be a_{j} times later generators")
            if any(c and self.weights[t] < self.weights[i] + self.weights[j] for t, c in enumerate(v[j + 1:], j + 1)):
                raise InputError(f"[a_{j}, a_{i}] must lie in weight >= {self.weights[i] + self.weights[j]}")
            if v != self.gen(j):
                self._conj[i][j] = v
        self._conj_inv: list[list[Vec | None] | None] = [None] * s
        self._sigma_cache: dict = {}
        self._torsion_free = not any(self.rel_orders)
        self.definitions = tuple(definitions) if definitions is not None else tuple(("p", i) for i in range(s))
        self.num_abstract = num_abstract

    # --- basic data ----------------------------------------------------------

    @property
    def ngens(self) -> int:
        return self.s

    def gen(self, i: int, e: int = 1) -> Vec:
        v = [0] * self.s
        v[i] = e
        return tuple(v)

    @property
    def class_(self) -> int:
        return max(self.weights, default=0)

    def first_index_of_weight(self, w: int) -> int:
        """Smallest index with weight ``>= w`` (``s`` if none)."""
        for i, wt in enumerate(self.weights):
            if wt >= w:
                return i
        return self.s

    def indices_of_weight(self, w: int) -> list[int]:
        return [i for i, wt in enumerate(self.weights) if wt == w]

    def is_finite(self) -> bool:
        return all(self.rel_orders)

    def order(self) -> int | None:
        if not self.is_finite():
            return None
        out = 1
        for e in self.rel_orders:
            out *= e
        return out

    def conjugate_relation(self, j: int, i: int) -> Vec:
        v = self._conj[i][j]
        return self.gen(j) if v is None else v

    def commutator_relation(self, j: int, i: int) -> Vec:
        """Normal form of ``[a_j, a_i]`` for ``j > i``."""
        return self.multiply(self.inverse(self.gen(j)), self.conjugate_relation(j, i))

    def __repr__(self):
        return f"PcPresentation(s={self.s}, weights={self.weights}, rel_orders={self.rel_orders})"

    # --- collector -----------------------------------------------------------

    def _conj_table_inv(self, i: int) -> list[Vec | None]:
        tab = self._conj_inv[i]
        if tab is not None:
            return tab
        s = self.s
        tab = [None] * s
        self._conj_inv[i] = tab
        fwd = self._conj[i]
        for j in range(s - 1, i, -1):
            v = fwd[j]
            if v is None:
                continue
            # sigma(a_j) = a_j c  =>  sigma^-1(a_j) = a_j sigma^-1(c)^-1
            c = list(v)
            c[j] = 0
            moved = [t for t in range(j + 1, s) if tab[t] is not None]
            u = list(self._inverse(self._apply_table(tuple(c), i, tab, moved)))
            u[j] = 1  # u lies in Q_{j+1}, so a_j u is already normal
            tab[j] = tuple(u)
        return tab

    def _sigma_table(self, i: int, inverse: bool, b: int) -> tuple[list[Vec | None], list[int]]:
        """Images of the generators under ``sigma_i^(+-2^b)`` and the indices they move.

        ``None`` marks a fixed generator.
        """
        key = (i, inverse, b)
        hit = self._sigma_cache.get(key)
        if hit is not None:
            return hit
        if b == 0:
            tab = self._conj_table_inv(i) if inverse else self._conj[i]
        else:
            half, moved = self._sigma_table(i, inverse, b - 1)
            tab = [None] * self.s
            for j in moved:
                v = self._apply_table(half[j], i, half, moved)
                tab[j] = None if v == self.gen(j) else v
        hit = (tab, [j for j, v in enumerate(tab) if v is not None])
        self._sigma_cache[key] = hit
        return hit

    def _apply_table(self, t: Vec, i: int, table: list[Vec | None], moved: list[int]) -> Vec:
        for j0 in moved:
            if t[j0]:
                break
        else:
            return t
        # below the first moved generator that occurs, t is copied unchanged
        res = t[:j0] + (0,) * (self.s - j0)
        for j in range(j0, self.s):
            c = t[j]
            if not c:
                continue
            img = table[j]
            if img is None:
                res = self._mul_pow(res, j, c)
            else:
                res = self._mul(res, self._power(img, c))
        return res

    def _mul_pow(self, x: Vec, i: int, e: int) -> Vec:
        """``x * a_i^e``: head, then ``a_i^(x_i + e)``, then the conjugated tail."""
        s = self.s
        t = None
        if any(x[i + 1:]):
            t = self._conj_power((0,) * (i + 1) + x[i + 1:], i, e)
        xi = x[i] + e
        ro = self.rel_orders[i]
        w = None
        if ro:
            q, xi = divmod(xi, ro)
            if q:
                w = self._power(self.powers[i], q)
                if not any(w):
                    w = None
        if w is not None:
            rest = self._mul(w, t) if t is not None else w
        elif t is not None:
            rest = t
        else:
            return x[:i] + (xi,) + (0,) * (s - i - 1)
        return x[:i] + (xi,) + rest[i + 1:]

    def _conj_power(self, t: Vec, i: int, e: int) -> Vec:
        """``sigma_i^e(t)`` by binary expansion of ``e``, or by interpolation when ``e`` is large."""
        if self._torsion_free and any(t):
            # coordinates of sigma_i^e(t) are polynomials in e of degree <= (class - wt(t)) // wt(a_i)
            d = (self.class_ - self.lead_weight(t)) // self.weights[i]
            if d == 0:
                return t
            if d + 1 < bin(e).count("1"):
                tab, moved = self._sigma_table(i, e < 0, 0)
                vals = [t]
                for _ in range(d):
                    vals.append(self._apply_table(vals[-1], i, tab, moved))
                return _interpolate(vals, abs(e), self.s)
        inverse = e < 0
        e = abs(e)
        b = 0
        while e:
            if e & 1:
                t = self._apply_table(t, i, *self._sigma_table(i, inverse, b))
            e >>= 1
            b += 1
        return t

    def _mul(self, x: Vec, y: Vec) -> Vec:
        res = x
        for j, c in enumerate(y):
            if c:
                res = self._mul_pow(res, j, c)
        return res

    def _inverse(self, x: Vec) -> Vec:
        res = self.identity
        for j in range(self.s - 1, -1, -1):
            if x[j]:
                res = self._mul_pow(res, j, -x[j])
        return res

    def _power(self, x: Vec, k: int) -> Vec:
        if self._torsion_free and k and any(x):
            # coordinates of x^k are polynomials in k of degree <= class // lead weight
            d = self.class_ // self.lead_weight(x)
            if d < 2 * abs(k).bit_length() - 1:
                return self._power_by_interpolation(x, k, d)
        if k < 0:
            x = self._inverse(x)
            k = -k
        res = self.identity
        base = x
        while k:
            if k & 1:
                res = self._mul(res, base)
            k >>= 1
            if k:
                base = self._mul(base, base)
        return res

    def _power_by_interpolation(self, x: Vec, k: int, d: int) -> Vec:
        vals = [self.identity, x]
        for _ in range(d - 1):
            vals.append(self._mul(vals[-1], x))
        return _interpolate(vals, k, self.s)

    # --- public arithmetic ---------------------------------------------------

    def check_element(self, x: Sequence[int]) -> Vec:
        x = tuple(int(c) for c in x)
        if len(x) != self.s:
            raise InputError(f"element of length {len(x)} in a group with {self.s} generators")
        for c, e in zip(x, self.rel_orders):
            if e and not 0 <= c < e:
                raise InputError("exponent out of range for a finite relative order")
        return x

    def multiply(self, x: Vec, y: Vec) -> Vec:
        return self._mul(tuple(x), tuple(y))

    def inverse(self, x: Vec) -> Vec:
        return self._inverse(tuple(x))

    def power(self, x: Vec, k: int) -> Vec:
        return self._power(tuple(x), k)

    def lead_weight(self, x: Vec) -> int | None:
        p = self.lead(x)
        return None if p is None else self.weights[p]

    def commute_by_weight(self, x: Vec, y: Vec) -> bool:
        """Whether ``x ∈ γ_a`` and ``y ∈ γ_b`` with ``a + b`` beyond the class."""
        a, b = self.lead_weight(x), self.lead_weight(y)
        return a is None or b is None or a + b > self.class_

    def commutator(self, x: Vec, y: Vec) -> Vec:
        """``x^-1 y^-1 x y``."""
        if self.commute_by_weight(x, y):
            return self.identity
        return self._mul(self._inverse(self._mul(y, x)), self._mul(x, y))

    def conjugate(self, x: Vec, y: Vec) -> Vec:
        """``y^-1 x y``."""
        if self.commute_by_weight(x, y):
            return tuple(x)
        return self._mul(self._mul(self._inverse(y), x), y)

    def product(self, elements: Iterable[Vec]) -> Vec:
        res = self.identity
        for x in elements:
            res = self._mul(res, x)
        return res

    def collect(self, letters: Iterable[tuple[int, int]]) -> Vec:
        """Normal form of a word in the pc generators given as ``(index, exponent)``."""
        res = self.identity
        for i, e in letters:
            if not 0 <= i < self.s:
                raise InputError(f"pc generator {i} out of range")
            if e:
                res = self._mul_pow(res, i, e)
        return res

    def lead(self, x: Vec) -> int | None:
        for i, c in enumerate(x):
            if c:
                return i
        return None

    # --- abstract generators ---------------------------------------------------

    def evaluate_definitions(self, images: Sequence[Vec], target: "PcPresentation") -> list[Vec]:
        """Images in ``target`` of every pc generator, given abstract generator images."""
        cache: dict = {}

        def ev(d):
            if d in cache:
                return cache[d]
            if d[0] == "g":
                v = tuple(images[d[1]])
            elif d[0] == "c":
                v = target.commutator(ev(d[1]), ev(d[2]))
            else:
                raise InputError("generator has no abstract definition")
            cache[d] = v
            return v

        return [ev(d) for d in self.definitions]

    def element_word(self, x: Vec) -> Word:
        """A free-group word mapping to ``x`` (via the generator definitions)."""
        out = Word()
        for i, c in enumerate(x):
            if c:
                out = out * (definition_word(self.definitions[i]) ** c)
        return out

    def evaluate_word(self, w: Word, images: Sequence[Vec] | None = None) -> Vec:
        """Image of a free-group word; abstract generators map to ``images``."""
        if images is None:
            images = self.abstract_images()
        res = self.identity
        for g, e in w.letters:
            if g >= len(images):
                raise InputError(f"word uses abstract generator {g} beyond {len(images)}")
            res = self._mul(res, self._power(tuple(images[g]), e))
        return res

    def abstract_images(self) -> list[Vec]:
        """Normal forms of the abstract generators (for groups built from a free group)."""
        imgs = getattr(self, "_abstract_images", None)
        if imgs is None:
            raise InputError("presentation does not record abstract generator images")
        return imgs

    def set_abstract_images(self, images: Sequence[Vec]) -> None:
        self._abstract_images = [tuple(v) for v in images]

    # --- validation ------------------------------------------------------------

    def consistency_failures(self, limit: int | None = None) -> list[str]:
        """Run the standard overlap tests; returns a description of each failure."""
        s = self.s
        g = self.gen
        mul = self.multiply
        bad: list[str] = []
        ro = self.rel_orders

        def check(lhs, rhs, label):
            if lhs != rhs:
                bad.append(label)

        for k in range(s):
            for j in range(k):
                for i in range(j):
                    check(mul(mul(g(k), g(j)), g(i)), mul(g(k), mul(g(j), g(i))), f"assoc({k},{j},{i})")
                    if limit and len(bad) >= limit:
                        return bad
        for j in range(s):
            if ro[j]:
                pw = self.powers[j]
                for i in range(j):
                    check(mul(pw, g(i)), mul(g(j, ro[j] - 1), mul(g(j), g(i))), f"power_left({j},{i})")
                check(mul(g(j), pw), mul(pw, g(j)), f"power_self({j})")
                for k in range(j + 1, s):
                    check(mul(g(k), pw), mul(mul(g(k), g(j)), g(j, ro[j] - 1)), f"power_right({k},{j})")
            else:
                for k in range(j + 1, s):
                    check(g(k), mul(mul(g(k), self.inverse(g(j))), g(j)), f"inverse({k},{j})")
        return bad

    def is_consistent(self) -> bool:
        return not self.consistency_failures(limit=1)


class PcHom:
    """Homomorphism from a pc-presented group, given by images of its pc generators."""

    def __init__(self, source: PcPresentation, target: PcPresentation, images: Sequence[Vec], validate: bool = True):
        if len(images) != source.s:
            raise InputError("need one image per source pc generator")
        self.source = source
        self.target = target
        self.images = [target.check_element(v) for v in images]
        if validate:
            problems = self.failures()
            if problems:
                raise InputError(f"generator images do not define a homomorphism: {problems[:3]}")

    @classmethod
    def from_abstract(cls, source: PcPresentation, target: PcPresentation, abstract_images: Sequence[Vec], validate: bool = True) -> "PcHom":
        return cls(source, target, source.evaluate_definitions(abstract_images, target), validate)

    def __call__(self, x: Vec) -> Vec:
        T = self.target
        res = T.identity
        for img, c in zip(self.images, x):
            if c:
                res = T.multiply(res, T.power(img, c))
        return res

    def failures(self) -> list[str]:
        S, T = self.source, self.target
        bad = []
        for i, e in enumerate(S.rel_orders):
            if e and T.power(self.images[i], e) != self(S.powers[i]):
                bad.append(f"power({i})")
        for i in range(S.s):
            for j in range(i + 1, S.s):
                lhs = T.conjugate(self.images[j], self.images[i])
                if lhs != self(S.conjugate_relation(j, i)):
                    bad.append(f"conj({j},{i})")
        return bad


def enumerate_finite(Q: PcPresentation, cap: int = 1 << 20) -> list[Vec]:
    """All normal forms of a finite pc group."""
    if not Q.is_finite():
        raise InfiniteGroupError("group has an infinite relative order")
    order = Q.order()
    if order > cap:
        raise CapExceeded(f"group order {order} exceeds cap {cap}")
    out: list[Vec] = [()]
    for e in Q.rel_orders:
        out = [v + (c,) for v in out for c in range(e)]
    return out


def _interpolate(vals: list[Vec], k: int, s: int) -> Vec:
    """Value at ``k`` of the coordinatewise polynomials taking ``vals[m]`` at ``m``."""
    out = list(vals[0])
    row = vals
    binom = 1
    for m in range(1, len(vals)):
        row = [tuple(b - a for a, b in zip(u, v)) for u, v in zip(row, row[1:])]
        binom = binom * (k - m + 1) // m
        if binom:
            out = [o + binom * c for o, c in zip(out, row[0])]
    return tuple(out)
