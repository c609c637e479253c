import json
import random
from itertools import product

import pytest

from blimwb.catcoh import (
    AbelianFunctor,
    CosetData,
    FiniteCategory,
    FunctorToGroups,
    bar_cohomology_trivial_z,
    check_exact_seq1,
    check_exact_seq2,
    classifying,
    cochain_complex,
    connecting_delta,
    constant_abelian,
    constant_group_functor,
    cyclic,
    dihedral,
    discrete,
    empty_category,
    is_cocycle,
    lim0_direct,
    lim0_elements,
    lim1_nonabelian,
    lim1_orbits_bruteforce,
    lim_n,
    nerve_chains,
    path_category,
    poset_category,
    product_category,
    symmetric3,
    z1_nonabelian,
)
from blimwb.catcoh.groups import abelian
from blimwb.catcoh.randomized import (
    random_abelian_functor,
    random_category,
    random_central_subfunctor,
    random_group_functor,
    random_subfunctor,
)
from blimwb.errors import CapExceeded, InputError
from blimwb.intlin import FgAbelian, lattice_quotient
from blimwb.presfile import CORPUS_DIR

BC2 = classifying(cyclic(2))
ARROW = path_category(2, [(0, 1)])
Z = FgAbelian((), 1)
TRIVIAL = FgAbelian((), 0)


# --- categories and functors ---------------------------------------------------------


def test_valid_categories():
    assert discrete(1).problems() == []
    assert classifying(symmetric3()).problems() == []
    assert product_category(poset_category(2, [(0, 1)]), BC2).problems() == []


def test_broken_composition_names_the_triple():
    C3 = classifying(cyclic(3))
    table = dict(C3.compose)
    table[(1, 1)] = 1
    with pytest.raises(InputError, match="associativity fails at"):
        FiniteCategory(C3.objects, C3.dom, C3.cod, C3.identities, table, C3.names)
    bad = FiniteCategory(C3.objects, C3.dom, C3.cod, C3.identities, table, C3.names, validate=False)
    assert any(C3.names[1] in p for p in bad.problems())


def test_broken_functor_rejected():
    G = cyclic(4)
    with pytest.raises(InputError):
        # g∘g = id, but x -> 2x composed with itself is zero
        FunctorToGroups(BC2, [G], [[0, 1, 2, 3], [0, 2, 0, 2]])
    with pytest.raises(InputError):
        FunctorToGroups(BC2, [G], [[0, 1, 2, 3], [0, 2, 1, 3]])


def test_json_round_trip():
    data = json.loads((CORPUS_DIR / "d8_bc2_center.json").read_text())
    F = FunctorToGroups.from_json(data)
    again = FunctorToGroups.from_json(json.loads(json.dumps(F.to_json())))
    assert again.maps == F.maps and [G.table for G in again.groups] == [G.table for G in F.groups]


# --- nerve and cochains ----------------------------------------------------------------


def test_nerve_counts():
    for n in range(5):
        assert len(nerve_chains(discrete(1), n)) == 1
        assert len(nerve_chains(BC2, n)) == 2 ** n
    assert len(nerve_chains(ARROW, 1)) == 3
    # each composable pair in a → b: (id_b,f), (f,id_a), (id_a,id_a), (id_b,id_b)
    assert len(nerve_chains(ARROW, 2)) == 4


def test_arrow_coboundary_pattern():
    F = constant_abelian(ARROW, [0])
    d0 = cochain_complex(F, 0).d[0]
    arrow = [f for f in range(ARROW.nmor) if not ARROW.is_identity(f)][0]
    row = d0[nerve_chains(ARROW, 1).index((arrow,))]
    assert row == [1, -1]
    for i in ARROW.identities:
        assert d0[nerve_chains(ARROW, 1).index((i,))] == [0, 0]


def test_bc2_trivial_integers():
    F = constant_abelian(BC2, [0])
    cc = cochain_complex(F, 3)
    assert cc.square_zero()
    got = [cc.cohomology(n) for n in range(4)]
    assert got == [Z, TRIVIAL, FgAbelian([2]), TRIVIAL]
    assert got == [bar_cohomology_trivial_z(cyclic(2), n) for n in range(4)]


def test_bar_oracle_other_groups():
    assert bar_cohomology_trivial_z(cyclic(3), 2) == FgAbelian([3])
    V4 = abelian([2, 2])[0]
    assert bar_cohomology_trivial_z(V4, 2) == FgAbelian([2, 2])
    F = constant_abelian(classifying(V4), [0])
    assert lim_n(F, 2) == FgAbelian([2, 2])


def test_identity_category_has_no_higher_limits():
    F = constant_abelian(discrete(1), [4, 0])
    assert lim_n(F, 0) == FgAbelian([4], 1)
    for n in (1, 2, 3):
        assert lim_n(F, n) == TRIVIAL


def test_lim0_direct_examples():
    assert lim0_direct(constant_abelian(discrete(1), [6])) == FgAbelian([6])
    assert lim0_direct(AbelianFunctor(empty_category(), [], [])) == TRIVIAL
    # parallel pair of maps Z/4 -> Z/4, multiplication by 1 and by 3
    C = path_category(2, [(0, 1), (0, 1)])
    mats = []
    for f in range(C.nmor):
        mats.append([[3]] if C.names[f] == "e1" else [[1]])
    F = AbelianFunctor(C, [[4], [4]], mats)
    assert lim0_direct(F) == FgAbelian([2])
    assert lim_n(F, 1) == FgAbelian([2])


def random_abelian_instances(seed, count):
    rng = random.Random(seed)
    for _ in range(count):
        kind, C, extra = random_category(rng)
        yield kind, random_abelian_functor(rng, kind, C, extra)


def test_degree_zero_matches_direct_limit():
    for kind, F in random_abelian_instances(1, 20):
        cc = cochain_complex(F, 1)
        assert cc.square_zero()
        assert cc.cohomology(0) == lim0_direct(F), kind
        if F.is_finite():
            GF, _ = F.to_group_functor()
            assert len(lim0_elements(GF)) == cc.cohomology(0).order()


# --- non-abelian Z¹ and Lim¹ ----------------------------------------------------------------


def test_z1_identity_category():
    F = constant_group_functor(discrete(1), symmetric3())
    assert z1_nonabelian(F) == [(0,)]
    assert lim1_nonabelian(F).size == 1


def brute_homs(G, A):
    return {
        f
        for f in product(range(A.order), repeat=G.order)
        if all(f[G.mul(a, b)] == A.mul(f[a], f[b]) for a in range(G.order) for b in range(G.order))
    }


@pytest.mark.parametrize(
    "G,A",
    [(abelian([2, 2])[0], cyclic(2)), (symmetric3(), cyclic(2)), (symmetric3(), cyclic(3)), (cyclic(4), cyclic(4))],
)
def test_z1_of_trivial_bg_module_is_hom(G, A):
    F = constant_group_functor(classifying(G), A)
    assert set(z1_nonabelian(F)) == brute_homs(G, A)


def test_lim1_bc2_mod_two():
    F = constant_group_functor(BC2, cyclic(2))
    L = lim1_nonabelian(F)
    assert L.size == 2 == lim1_orbits_bruteforce(F)
    assert L.class_of((0, 0)) == 0 and L.class_of((0, 1)) == 1
    with pytest.raises(InputError):
        L.class_of((1, 0))


def test_z1_cap():
    F = constant_group_functor(classifying(symmetric3()), symmetric3())
    with pytest.raises(CapExceeded):
        z1_nonabelian(F, cap=100)


def test_nonabelian_lim1_matches_cochains():
    for kind, F in random_abelian_instances(5, 25):
        if not F.is_finite():
            continue
        cc = cochain_complex(F, 1)
        GF, _ = F.to_group_functor()
        Z1 = z1_nonabelian(GF)
        assert all(is_cocycle(GF, a) for a in Z1)
        assert len(Z1) == lattice_quotient(cc.cocycle_lattice(1), cc.lattices[1]).order()
        L = lim1_nonabelian(GF)
        assert L.size == cc.cohomology(1).order(), kind


def test_orbits_against_full_action():
    rng = random.Random(3)
    for _ in range(8):
        kind, F = random_group_functor(rng)
        assert lim1_nonabelian(F).size == lim1_orbits_bruteforce(F)


# --- connecting map and exactness ----------------------------------------------------------


def d8_on_bc2():
    data = json.loads((CORPUS_DIR / "d8_bc2_center.json").read_text())
    F = FunctorToGroups.from_json(data)
    return F, [data["subfunctor"][o] for o in F.C.objects]


def test_delta_examples():
    F, center = d8_on_bc2()
    for x in lim0_elements(F):
        # a lift from Lim F lands on the basepoint
        X = CosetData(F, center).project(x)
        assert connecting_delta(F, center, X, lift=x) == 0
    G = constant_group_functor(discrete(1), cyclic(4))
    assert connecting_delta(G, [[0, 2]], (0,)) == 0
    assert connecting_delta(G, [[0, 2]], (1,)) == 0


def test_delta_on_bc2_sign_character():
    # C4 with the generator of C2 acting by inversion, subfunctor 2·C4
    C4 = cyclic(4)
    F = FunctorToGroups(BC2, [C4], [[0, 1, 2, 3], [0, 3, 2, 1]])
    rep = check_exact_seq1(F, [[0, 2]], seed=1)
    assert rep.exact, rep.violations
    assert "δ additive" in rep.checked


def test_exactness_degenerate_cases():
    rng = random.Random(9)
    for _ in range(4):
        kind, F = random_group_functor(rng)
        whole = [list(range(G.order)) for G in F.groups]
        trivial = [[0] for _ in F.groups]
        r = check_exact_seq1(F, whole)
        assert r.exact and r.sizes["lim_F_mod_G"] == 1
        r = check_exact_seq1(F, trivial)
        assert r.exact and r.sizes["lim_F"] == r.sizes["lim_F_mod_G"] and r.sizes["lim1_G"] == 1
        r = check_exact_seq2(F, whole)
        assert r.exact and r.sizes["lim1_F_quot"] == 1


def test_seq1_random():
    rng = random.Random(7)
    for i in range(12):
        kind, F = random_group_functor(rng)
        rep = check_exact_seq1(F, random_subfunctor(rng, F), seed=i)
        assert rep.exact, (kind, rep.violations)


def test_seq2_random():
    rng = random.Random(8)
    for i in range(12):
        kind, F = random_group_functor(rng)
        rep = check_exact_seq2(F, random_subfunctor(rng, F, normal=True), seed=i)
        assert rep.exact, (kind, rep.violations)


def test_central_subfunctors_and_additivity():
    rng = random.Random(4)
    found = 0
    for i in range(40):
        kind, F = random_group_functor(rng)
        sub = random_central_subfunctor(rng, F)
        if sub is None:
            continue
        rep = check_exact_seq1(F, sub, seed=i)
        assert "δ additive" in rep.checked
        assert rep.exact, rep.violations
        found += 1
        if found == 4:
            break
    assert found >= 3


def test_dihedral_center_on_bc2():
    F, center = d8_on_bc2()
    assert F.groups[0].order == dihedral(4).order == 8
    assert F.is_central_subfunctor(center)
    assert check_exact_seq2(F, center).exact


def test_seq2_needs_normal_kernel():
    S3 = symmetric3()
    F = constant_group_functor(discrete(1), S3)
    order_two = [g for g in range(6) if g and S3.mul(g, g) == 0][0]
    with pytest.raises(InputError):
        check_exact_seq2(F, [[0, order_two]])
