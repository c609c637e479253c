import random

import pytest

from blimwb.fpgroup import coset_words, enumerate_cosets
from blimwb.groupring import (
    FiniteGroupRing,
    TruncatedElement,
    augmentation_coordinates,
    dimension_membership_free,
    dimension_subgroup_finite,
    expand_group_element,
    monomial_basis,
    relator_ideal_lattice,
)
from blimwb.intlin import Lattice
from blimwb.nilpotent import basic_commutators, definition_word
from blimwb.presfile import load_corpus
from blimwb.words import FreePresentation, Word, commutator

x, y = Word.gen(0), Word.gen(1)
X, Y = (0,), (1,)

# |D_n(G)| for n = 2, 3, 4; each equals |γ_n(G)| found by brute-force commutator closure
DIMENSION_SUBGROUP_ORDERS = {
    "C2": (1, 1, 1),
    "C4": (1, 1, 1),
    "C2xC2": (1, 1, 1),
    "Q8": (2, 1, 1),
    "D4": (2, 1, 1),
    "S3": (3, 3, 3),
}
GROUP_ORDERS = {"C2": 2, "C4": 4, "C2xC2": 4, "Q8": 8, "D4": 8, "S3": 6}


def t(n, d):
    return TruncatedElement(n, d)


def test_truncated_products():
    assert t(3, {X: 1}) * t(3, {Y: 1}) == t(3, {(0, 1): 1})
    assert t(3, {(): 1, X: 1}) * t(3, {(): 1, X: -1, (0, 0): 1}) == TruncatedElement.one(3)
    assert (t(3, {(0, 0): 1}) * t(3, {X: 1})).is_zero()


def test_expansions():
    assert expand_group_element(x, 3) == t(3, {(): 1, X: 1})
    assert expand_group_element(~x, 3) == t(3, {(): 1, X: -1, (0, 0): 1})
    # the four factors multiplied out by hand
    assert expand_group_element(commutator(x, y), 3) == t(3, {(): 1, (0, 1): 1, (1, 0): -1})


def random_word(rng, k=2, length=8):
    return Word((rng.randrange(k), rng.choice((-2, -1, 1, 3))) for _ in range(length))


def test_expansion_multiplicative_and_coherent():
    rng = random.Random(1)
    for _ in range(500):
        u, v = random_word(rng), random_word(rng)
        assert expand_group_element(u * v, 4) == expand_group_element(u, 4) * expand_group_element(v, 4)
    for _ in range(50):
        u = random_word(rng)
        for m in (1, 2, 3):
            assert expand_group_element(u, 4).truncate(m) == expand_group_element(u, m)


def test_relator_lattice_examples():
    free = FreePresentation(("x",))
    assert relator_ideal_lattice(free, 3).lattice.rank == 0
    C2 = FreePresentation(("x",), (x**2,))
    assert relator_ideal_lattice(C2, 2).lattice == Lattice(1, [[2]])
    trivial = FreePresentation(("x",), (x,))
    for n in (2, 3, 4):
        L = relator_ideal_lattice(trivial, n).lattice
        assert L == Lattice.full(len(monomial_basis(1, n)))
    assert len(monomial_basis(2, 4)) == 2 + 4 + 8


def test_rf_inside_r():
    for P in load_corpus():
        for n in (2, 3, 4):
            r = relator_ideal_lattice(P, n, "r").lattice
            rf = relator_ideal_lattice(P, n, "rf").lattice
            assert r.contains_lattice(rf)


def test_membership_examples():
    C2 = FreePresentation(("x",), (x**2,))
    assert not dimension_membership_free(C2, 2, x)
    assert dimension_membership_free(C2, 2, Word())
    assert dimension_membership_free(FreePresentation(("x", "y")), 2, commutator(x, y))
    assert not dimension_membership_free(FreePresentation(("x", "y")), 3, commutator(x, y))


def test_finite_ring_examples():
    trivial = FiniteGroupRing([[0]])
    assert dimension_subgroup_finite(trivial, 3) == {0}
    c2 = FiniteGroupRing([[0, 1], [1, 0]])
    assert dimension_subgroup_finite(c2, 2) == {0}
    c4 = FiniteGroupRing([[(a + b) % 4 for b in range(4)] for a in range(4)])
    assert dimension_subgroup_finite(c4, 2) == {0}


def test_coset_enumeration_orders():
    for P in load_corpus():
        table = enumerate_cosets(P)
        assert len(table) == GROUP_ORDERS[P.name]
        words = coset_words(table, P.ngens)
        assert len(set(words)) == len(words)


@pytest.mark.parametrize("P", load_corpus(), ids=lambda P: P.name)
def test_oracle_agreement(P):
    R, words = FiniteGroupRing.from_presentation(P)
    for n, expected in zip((2, 3, 4), DIMENSION_SUBGROUP_ORDERS[P.name]):
        D = dimension_subgroup_finite(R, n)
        assert len(D) == expected
        free = {g for g in range(R.order) if dimension_membership_free(P, n, words[g], "r")}
        assert free == D


def test_lower_central_words_pass():
    rng = random.Random(9)
    presentations = [FreePresentation(("x", "y", "z"))] + [P for P in load_corpus() if P.ngens > 1]
    for n in (2, 3, 4):
        for _ in range(67):
            P = rng.choice(presentations)
            basics = [b for b in basic_commutators(P.ngens, n) if _weight(b) == n]
            w = Word()
            for _ in range(rng.randint(1, 3)):
                w = w * definition_word(rng.choice(basics)) ** rng.choice((-1, 1, 2))
            assert dimension_membership_free(P, n, w)


def _weight(b):
    return 1 if b[0] == "g" else _weight(b[1]) + _weight(b[2])


def test_augmentation_coordinates_have_no_constant():
    v = augmentation_coordinates(expand_group_element(x * y, 3), 2)
    assert len(v) == len(monomial_basis(2, 3))
