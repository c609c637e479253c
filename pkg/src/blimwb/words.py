"""Free-group words, free presentations and homomorphisms between free groups.

Words are stored run-length encoded as tuples of ``(generator, exponent)``
pairs.  Generators are integer indices; names only live on
:class:`FreePresentation`.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

from .errors import InputError


def _free_reduce(raw: Iterable[tuple[int, int]]) -> tuple[tuple[int, int], ...]:
    stack: list[list[int]] = []
    for gen, exp in raw:
        if exp == 0:
            continue
        if stack and stack[-1][0] == gen:
            stack[-1][1] += exp
            if stack[-1][1] == 0:
                stack.pop()
        else:
            stack.append([gen, exp])
    return tuple((g, e) for g, e in stack)


class Word:
    """A freely reduced word in a free group."""

    __slots__ = ("letters",)

    def __init__(self, letters: Iterable[tuple[int, int]] = ()):
        self.letters = _free_reduce((int(g), int(e)) for g, e in letters)

    @classmethod
    def gen(cls, index: int, exp: int = 1) -> "Word":
        return cls(((index, exp),))

    def __mul__(self, other: "Word") -> "Word":
        return Word(self.letters + other.letters)

    def __invert__(self) -> "Word":
        return Word((g, -e) for g, e in reversed(self.letters))

    inverse = __invert__

    def __pow__(self, k: int) -> "Word":
        base = self if k >= 0 else ~self
        out = Word()
        for _ in range(abs(k)):
            out = out * base
        return out

    def __eq__(self, other):
        return isinstance(other, Word) and self.letters == other.letters

    def __hash__(self):
        return hash(self.letters)

    def __bool__(self):
        return bool(self.letters)

    def __len__(self):
        """Letter length (sum of absolute exponents)."""
        return sum(abs(e) for _, e in self.letters)

    def __iter__(self):
        return iter(self.letters)

    def max_generator(self) -> int:
        return max((g for g, _ in self.letters), default=-1)

    def signed_letters(self) -> list[tuple[int, int]]:
        """Letter-by-letter expansion as ``(generator, +-1)`` pairs."""
        out = []
        for g, e in self.letters:
            s = 1 if e > 0 else -1
            out.extend([(g, s)] * abs(e))
        return out

    def exponent_sums(self, ngens: int) -> list[int]:
        sums = [0] * ngens
        for g, e in self.letters:
            sums[g] += e
        return sums

    def __repr__(self):
        return f"Word({list(self.letters)!r})"

    def format(self, names: Sequence[str] | None = None) -> str:
        if not self.letters:
            return "1"
        parts = []
        for g, e in self.letters:
            name = names[g] if names is not None else f"x{g}"
            parts.append(name if e == 1 else f"{name}^{e}")
        return "*".join(parts)


def reduce(raw: Iterable[tuple[int, int]], ngens: int | None = None) -> Word:
    """Freely reduce a sequence of signed letters ``(generator, exponent)``."""
    raw = list(raw)
    if ngens is not None:
        for g, _ in raw:
            if not 0 <= g < ngens:
                raise InputError(f"unknown generator index {g} (have {ngens})")
    return Word(raw)


def multiply(u: Word, v: Word) -> Word:
    return u * v


def inverse(u: Word) -> Word:
    return ~u


def conjugate(u: Word, v: Word) -> Word:
    """``v^-1 u v``."""
    return ~v * u * v


def commutator(u: Word, v: Word) -> Word:
    """``[u, v] = u^-1 v^-1 u v``."""
    return ~u * ~v * u * v


def left_normed(words: Sequence[Word]) -> Word:
    """Left-normed commutator ``[[w1, w2], w3], ...``."""
    out = words[0]
    for w in words[1:]:
        out = commutator(out, w)
    return out


_OPS = {"multiply": multiply, "conjugate": conjugate, "commutator": commutator}


def word_arith(op: str, u: Word, v: Word | None = None) -> Word:
    if op == "inverse":
        return ~u
    try:
        fn = _OPS[op]
    except KeyError:
        raise InputError(f"unknown word operation {op!r}") from None
    if v is None:
        raise InputError(f"{op} needs two words")
    return fn(u, v)


@dataclass(frozen=True)
class FreePresentation:
    """A presentation ``F -> G`` by generators and relators."""

    generator_names: tuple[str, ...]
    relators: tuple[Word, ...] = ()
    name: str = ""

    def __post_init__(self):
        names = tuple(self.generator_names)
        object.__setattr__(self, "generator_names", names)
        object.__setattr__(self, "relators", tuple(self.relators))
        if len(set(names)) != len(names):
            raise InputError(f"duplicate generator names in {names}")
        for r in self.relators:
            if r.max_generator() >= len(names):
                raise InputError(f"relator {r!r} uses an undeclared generator")

    @property
    def ngens(self) -> int:
        return len(self.generator_names)

    def index(self, name: str) -> int:
        try:
            return self.generator_names.index(name)
        except ValueError:
            raise InputError(f"unknown generator {name!r}") from None

    def __str__(self):
        rels = ", ".join(r.format(self.generator_names) for r in self.relators)
        return f"<{', '.join(self.generator_names)} | {rels}>"


@dataclass(frozen=True)
class GroupMap:
    """Homomorphism of free groups given by images of source generators."""

    images: tuple[Word, ...]
    target_ngens: int

    def __post_init__(self):
        object.__setattr__(self, "images", tuple(self.images))
        for w in self.images:
            if w.max_generator() >= self.target_ngens:
                raise InputError("image word uses a generator outside the target")

    @classmethod
    def identity(cls, ngens: int) -> "GroupMap":
        return cls(tuple(Word.gen(i) for i in range(ngens)), ngens)

    @property
    def source_ngens(self) -> int:
        return len(self.images)

    def __call__(self, w: Word) -> Word:
        return apply_map(self, w)

    def compose(self, first: "GroupMap") -> "GroupMap":
        """The map ``self o first``."""
        return GroupMap(tuple(self(w) for w in first.images), self.target_ngens)


def apply_map(m: GroupMap, w: Word) -> Word:
    if w.max_generator() >= m.source_ngens:
        raise InputError("word has more generators than the map's source")
    out: list[tuple[int, int]] = []
    for g, e in w.letters:
        img = m.images[g].letters
        if e < 0:
            img = tuple((h, -f) for h, f in reversed(img))
        out.extend(img * abs(e))
    return Word(out)


def coproduct(P: FreePresentation) -> tuple[FreePresentation, GroupMap, GroupMap]:
    """Coproduct ``c ⊔ c`` in the category of presentations of G.

    The new group is free on ``x_j, x'_j``; relators are the old ones, their
    primed copies, and ``x_j x'_j^-1``.
    """
    k = P.ngens
    names = P.generator_names + tuple(n + "'" for n in P.generator_names)
    iota1 = GroupMap(tuple(Word.gen(j) for j in range(k)), 2 * k)
    iota2 = GroupMap(tuple(Word.gen(k + j) for j in range(k)), 2 * k)
    rels = list(P.relators)
    rels += [iota2(r) for r in P.relators]
    rels += [Word(((j, 1), (k + j, -1))) for j in range(k)]
    name = f"{P.name}+{P.name}" if P.name else ""
    return FreePresentation(names, tuple(rels), name), iota1, iota2


def fold_map(P: FreePresentation) -> GroupMap:
    """``x_j, x'_j -> x_j`` from the coproduct back to ``P``."""
    k = P.ngens
    return GroupMap(tuple(Word.gen(j) for j in range(k)) * 2, k)
