import random

import pytest

from blimwb.errors import InfiniteGroupError, InputError
from blimwb.intlin import AbelianPresentation, FgAbelian, lie_cube
from blimwb.limits import (
    blim_F,
    blim_subgroup,
    colim_F,
    defect,
    dimension_quotient_subgroup,
    equalizer_subgroup,
    evaluate_F,
    lim_F,
    two_coproduct_maps,
    verify_identity,
    verify_inclusion,
    verify_main_theorem,
    verify_monoadditive_vanishing,
    verify_sym_sequence,
)
from blimwb.nilpotent import (
    PcHom,
    enumerate_finite,
    free_nilpotent_pc,
    kernel_to_abelian,
    layer_coordinates,
    layer_presentation,
    nilpotent_quotient_of_presentation,
    subgroup_elements,
    whole_group,
)
from blimwb.presfile import load_corpus, parse_presentation
from blimwb.words import FreePresentation

CORPUS = {P.name: P for P in load_corpus()}


def pres(text):
    return parse_presentation(text)


FREE1 = pres("gens: x")
TRIVIAL_X = pres("gens: x\nrels: x")
C2 = pres("gens: x\nrels: x^2")
EMPTY = FreePresentation((), ())


def test_evaluate_examples():
    V = evaluate_F(pres("gens: x, y"), 4)
    F = free_nilpotent_pc(2, 3)
    assert V.Q.weights == F.weights and V.Q.rel_orders == F.rel_orders
    for P in CORPUS.values():
        Q = evaluate_F(P, 2).Q
        assert Q.rel_orders == (0,) * P.ngens
    assert evaluate_F(TRIVIAL_X, 4).Q.rel_orders == (0,)
    with pytest.raises(InputError):
        evaluate_F(C2, 6)
    with pytest.raises(InputError):
        evaluate_F(C2, 1)


def test_coproduct_maps():
    M = two_coproduct_maps(EMPTY, 3)
    assert M.value.Q.s == 0 and M.coproduct_value.Q.s == 0
    M = two_coproduct_maps(FREE1, 2)
    assert M.phi.images == [(1, 0)] and M.psi.images == [(0, 1)]
    # both maps respect every relation of the source value
    M = two_coproduct_maps(CORPUS["C4"], 4)
    assert M.phi.failures() == [] and M.psi.failures() == []
    V, T = M.value.Q, M.coproduct_value.Q
    x = V.abstract_images()[0]
    assert M.phi(x) == T.abstract_images()[0]
    assert M.psi(x) == T.abstract_images()[1]


def test_equalizer_examples():
    Q = free_nilpotent_pc(2, 3)
    ident = PcHom(Q, Q, [Q.gen(i) for i in range(Q.s)])
    assert equalizer_subgroup(ident, ident).subgroup == whole_group(Q)
    # ψ trivial: the equalizer is the kernel of φ
    Z = free_nilpotent_pc(1, 1)
    phi = PcHom(Q, Z, [(1,), (0,)] + [(0,)] * (Q.s - 2))
    psi = PcHom(Q, Z, [(0,)] * Q.s)
    E = equalizer_subgroup(phi, psi).subgroup
    assert not E.contains(Q.gen(0)) and E.contains(Q.gen(1)) and E.contains(Q.gen(2))
    M = two_coproduct_maps(FREE1, 4)
    res = equalizer_subgroup(M.phi, M.psi)
    assert res.subgroup.is_trivial()
    assert [t["weight"] for t in res.trace] == [1, 2, 3]


def test_lim_examples():
    assert lim_F(TRIVIAL_X, 4).is_trivial()
    assert lim_F(FREE1, 4).is_trivial()
    for P in CORPUS.values():
        assert lim_F(P, 2).is_trivial()


def finite_groups():
    out = []
    for text, c in [("gens: x, y\nrels: x^4, y^4", 2), ("gens: x, y\nrels: x^2, y^2", 3), ("gens: x, y\nrels: x^4, y^2", 3)]:
        out.append(nilpotent_quotient_of_presentation(pres(text), c)[0])
    return out


def random_hom(rng, S, T):
    elems = enumerate_finite(T)
    for _ in range(200):
        imgs = [rng.choice(elems) for _ in range(S.num_abstract)]
        try:
            return PcHom.from_abstract(S, T, imgs)
        except InputError:
            continue
    return None


def test_equalizer_against_brute_force():
    rng = random.Random(11)
    checked = 0
    for Q in finite_groups():
        elems = enumerate_finite(Q)
        for _ in range(5):
            phi, psi = random_hom(rng, Q, Q), random_hom(rng, Q, Q)
            if phi is None or psi is None:
                continue
            res = equalizer_subgroup(phi, psi, validate=True)
            assert res.check(phi, psi)
            assert subgroup_elements(res.subgroup) == {x for x in elems if phi(x) == psi(x)}
            checked += 1
    assert checked >= 10


def test_defect_is_additive_on_each_stage():
    rng = random.Random(2)
    M = two_coproduct_maps(CORPUS["D4"], 4)
    phi, psi = M.phi, M.psi
    S, T = phi.source, phi.target
    E = whole_group(S)
    for w in range(1, T.class_ + 1):
        idx, L = layer_presentation(T, w)

        def delta(x):
            return layer_coordinates(T, defect(phi, psi, x), w)

        gens = E.gens
        for _ in range(20):
            x = S.product(S.power(rng.choice(gens), rng.randrange(-2, 3)) for _ in range(3)) if gens else S.identity
            y = S.product(S.power(rng.choice(gens), rng.randrange(-2, 3)) for _ in range(3)) if gens else S.identity
            diff = [a - b - c for a, b, c in zip(delta(S.multiply(x, y)), delta(x), delta(y))]
            assert diff in L
        E = kernel_to_abelian(E, [delta(g) for g in gens], L)


def test_colimit_examples():
    assert colim_F(TRIVIAL_X, 4).group.order() == 1
    col = colim_F(pres("gens: x, y"), 3)
    assert col.group.s == col.source.Q.s
    col = colim_F(C2, 4)
    assert col.group.order() == 2


def test_blim_examples():
    assert blim_F(TRIVIAL_X, 4) == {()}
    assert blim_subgroup(FREE1, 4).is_trivial()
    with pytest.raises(InfiniteGroupError):
        blim_F(FREE1, 4)
    for P in CORPUS.values():
        C = colim_F(P, 3).group
        assert blim_F(P, 3) == {C.identity}


def test_dimension_quotient_examples():
    assert dimension_quotient_subgroup(C2, 4) == {(0,)}
    for P in CORPUS.values():
        C = colim_F(P, 3).group
        assert C.identity in dimension_quotient_subgroup(P, 3)


def test_main_theorem_examples():
    r = verify_main_theorem(C2)
    assert r.equal and r.blim == r.dimension_quotient == {(0,)}
    r = verify_main_theorem(CORPUS["C2xC2"])
    assert r.equal and r.exponent_two
    r = verify_main_theorem(EMPTY)
    assert r.equal and r.colimit_order == 1
    assert set(r.to_json()) >= {"blim", "dimension_quotient", "equal", "exponent_two"}


def test_naturality_spot_check():
    other = pres("gens: x, y\nrels: x^2, y")
    assert len(blim_F(C2, 4)) == len(blim_F(other, 4))
    assert colim_F(C2, 4).group.order() == colim_F(other, 4).group.order()


@pytest.mark.parametrize("n", [2, 3])
def test_inclusion_small_n(n):
    for P in CORPUS.values():
        assert verify_inclusion(P, n)


def test_sym_sequence_examples():
    for k in (1, 2, 3):
        r = verify_sym_sequence(FreePresentation(tuple("abc"[:k]), ()))
        assert r.ok
        assert r.source == lie_cube(AbelianPresentation.free(k))[0]
    r = verify_sym_sequence(EMPTY)
    assert r.ok and r.source == FgAbelian((), 0)
    r = verify_sym_sequence(C2)
    assert r.injective and r.cokernel == r.sym_cube == FgAbelian([2])


def test_monoadditive_examples():
    assert verify_monoadditive_vanishing(EMPTY, 3)
    assert verify_monoadditive_vanishing(C2, 3)
    assert verify_monoadditive_vanishing(FREE1, 4)


def test_well_known_identity():
    for P in CORPUS.values():
        assert verify_identity(P).equal
