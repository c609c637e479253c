"""Limits of ``F/R'γ_n(F)`` over presentations of a group, and the checks built on them.

``Lim`` is computed as the equalizer of the two maps induced by the
coproduct inclusions ``c -> c ⊔ c``; ``Colim`` is ``G/γ_n(G)``; ``Blim`` is
the image of the former in the latter.  The dimension quotient
``D_n(G)/γ_n(G)`` is decided independently through the free group ring.
"""

from __future__ import annotations

import random
import time
from dataclasses import dataclass, field
from functools import lru_cache

from .errors import CapExceeded, InfiniteGroupError, InputError
from .groupring import DEFAULT_GROUP_CAP, dimension_membership_free, monomial_basis, relator_ideal_lattice, _basis_index
from .intlin import (
    AbelianMap,
    AbelianPresentation,
    FgAbelian,
    Lattice,
    lattice_quotient,
    multiplication_map,
    preimage,
    sym_power,
    tensor_presentation,
    transpose,
)
from .nilpotent import (
    PcHom,
    PcPresentation,
    PcSubgroup,
    QuotientMap,
    abelian_section_invariants,
    closure,
    derived_subgroup,
    enumerate_finite,
    free_nilpotent_pc,
    kernel_to_abelian,
    layer_coordinates,
    layer_presentation,
    mutual_commutator,
    normal_closure,
    quotient_pc,
    subgroup_elements,
    trivial_subgroup,
    weight_term,
    whole_group,
)
from .nilpotent.freenil import MAX_CLASS
from .nilpotent.pc import Vec
from .words import FreePresentation, Word, coproduct, left_normed

MAX_N = MAX_CLASS + 1


def _check_n(n: int) -> None:
    if not 2 <= n <= MAX_N:
        raise InputError(f"n must be between 2 and {MAX_N}, got {n}")


@dataclass
class FunctorValue:
    """``F/R'γ_n(F)`` for one presentation, with the data it was built from."""

    presentation: FreePresentation
    n: int
    Q: PcPresentation
    free: PcPresentation
    relator_closure: PcSubgroup
    projection: QuotientMap

    @property
    def labels(self) -> list[Vec]:
        """Images of the presentation generators."""
        return self.Q.abstract_images()


@lru_cache(maxsize=64)
def evaluate_F(P: FreePresentation, n: int) -> FunctorValue:
    _check_n(n)
    F = free_nilpotent_pc(P.ngens, n - 1)
    Rbar = normal_closure(F, [F.evaluate_word(r) for r in P.relators])
    Rd = derived_subgroup(Rbar)
    Q, pi = quotient_pc(F, Rd, check_normal=False)
    return FunctorValue(P, n, Q, F, Rbar, pi)


@dataclass
class CoproductMaps:
    value: FunctorValue
    coproduct_value: FunctorValue
    phi: PcHom
    psi: PcHom


@lru_cache(maxsize=64)
def two_coproduct_maps(P: FreePresentation, n: int) -> CoproductMaps:
    P2, iota1, iota2 = coproduct(P)
    V = evaluate_F(P, n)
    V2 = evaluate_F(P2, n)
    T = V2.Q
    phi = PcHom.from_abstract(V.Q, T, [T.evaluate_word(w) for w in iota1.images])
    psi = PcHom.from_abstract(V.Q, T, [T.evaluate_word(w) for w in iota2.images])
    return CoproductMaps(V, V2, phi, psi)


@dataclass
class EqualizerResult:
    subgroup: PcSubgroup
    trace: list[dict] = field(default_factory=list)

    def check(self, phi: PcHom, psi: PcHom) -> bool:
        return all(phi(e) == psi(e) for e in self.subgroup.gens)


def defect(phi: PcHom, psi: PcHom, x: Vec) -> Vec:
    """``φ(x) ψ(x)^-1``."""
    T = phi.target
    return T.multiply(phi(x), T.inverse(psi(x)))


def equalizer_subgroup(phi: PcHom, psi: PcHom, validate: bool = False) -> EqualizerResult:
    """``{x : φ(x) = ψ(x)}`` by descent along the lower central series of the target.

    ``E_w`` collects the ``x`` whose defect lies in ``γ_{w+1}``; on ``E_{w-1}``
    the defect read in the weight-``w`` layer is a homomorphism.
    """
    if phi.source is not psi.source or phi.target is not psi.target:
        raise InputError("maps need a common source and target")
    T = phi.target
    E = whole_group(phi.source)
    trace = []
    for w in range(1, T.class_ + 1):
        idx, L = layer_presentation(T, w)
        images = [layer_coordinates(T, defect(phi, psi, g), w) for g in E.gens]
        before = len(E)
        E = kernel_to_abelian(E, images, L, validate=validate)
        trace.append({"weight": w, "layer_rank": len(idx), "generators_in": before, "generators_out": len(E)})
    return EqualizerResult(E, trace)


def lim_F(P: FreePresentation, n: int) -> PcSubgroup:
    maps = two_coproduct_maps(P, n)
    return equalizer_subgroup(maps.phi, maps.psi).subgroup


@dataclass
class Colimit:
    """``G/γ_n(G)`` as a quotient of ``F/R'γ_n(F)``."""

    group: PcPresentation
    source: FunctorValue
    quotient: QuotientMap

    def project(self, x: Vec) -> Vec:
        return self.quotient(x)


@lru_cache(maxsize=64)
def colim_F(P: FreePresentation, n: int) -> Colimit:
    V = evaluate_F(P, n)
    image = closure(V.Q, [V.projection(r) for r in V.relator_closure.gens])
    C, q = quotient_pc(V.Q, image, check_normal=False)
    return Colimit(C, V, q)


def _require_finite(C: PcPresentation, cap: int) -> None:
    if not C.is_finite():
        raise InfiniteGroupError("G/γ_n(G) is infinite")
    if C.order() > cap:
        raise CapExceeded(f"G/γ_n(G) has order {C.order()} > cap {cap}")


def blim_subgroup(P: FreePresentation, n: int) -> PcSubgroup:
    col = colim_F(P, n)
    E = lim_F(P, n)
    return closure(col.group, [col.project(e) for e in E.gens])


def blim_F(P: FreePresentation, n: int, cap: int = DEFAULT_GROUP_CAP) -> set[Vec]:
    col = colim_F(P, n)
    _require_finite(col.group, cap)
    return subgroup_elements(blim_subgroup(P, n))


def _random_word(rng: random.Random, k: int, length: int) -> Word:
    return Word((rng.randrange(k), rng.choice((-1, 1))) for _ in range(length))


def alternative_lift(P: FreePresentation, n: int, w: Word, rng: random.Random) -> Word:
    """``w`` times a conjugate of a relator times an ``n``-fold commutator."""
    k = P.ngens
    if k == 0:
        return w
    out = w
    if P.relators:
        r = rng.choice(P.relators)
        u = _random_word(rng, k, 3)
        out = out * (~u * r * u)
    out = out * left_normed([_random_word(rng, k, 2) or Word.gen(0) for _ in range(n)])
    return out


def dimension_quotient_subgroup(
    P: FreePresentation, n: int, cap: int = DEFAULT_GROUP_CAP, seed: int = 0, check_lifts: bool = True
) -> set[Vec]:
    """Elements of ``G/γ_n(G)`` lying in ``D_n(G)``, decided in ``Z[F]/f^n``."""
    col = colim_F(P, n)
    C = col.group
    _require_finite(C, cap)
    rng = random.Random(seed)
    out = set()
    for y in enumerate_finite(C, cap):
        w = C.element_word(y)
        inside = dimension_membership_free(P, n, w, "r")
        if check_lifts:
            alt = alternative_lift(P, n, w, rng)
            if dimension_membership_free(P, n, alt, "r") != inside:
                raise AssertionError(f"membership of {y} depends on the chosen lift")
        if inside:
            out.add(y)
    return out


def _invariants_if_abelian(C: PcPresentation, elements: set[Vec]) -> FgAbelian | None:
    H = closure(C, list(elements))
    try:
        return abelian_section_invariants(H, trivial_subgroup(C))
    except InputError:
        return None


@dataclass
class TheoremReport:
    presentation: str
    n: int
    blim: set
    dimension_quotient: set
    equal: bool
    exponent_two: bool
    blim_invariants: FgAbelian | None
    dimension_invariants: FgAbelian | None
    colimit_order: int
    timings: dict

    def to_json(self) -> dict:
        def inv(a):
            return None if a is None else a.to_json()

        return {
            "presentation": self.presentation,
            "n": self.n,
            "colimit_order": self.colimit_order,
            "blim": sorted(list(x) for x in self.blim),
            "dimension_quotient": sorted(list(x) for x in self.dimension_quotient),
            "equal": self.equal,
            "exponent_two": self.exponent_two,
            "blim_invariants": inv(self.blim_invariants),
            "dimension_invariants": inv(self.dimension_invariants),
            "timings": {k: round(v, 4) for k, v in self.timings.items()},
        }


def verify_main_theorem(P: FreePresentation, n: int = 4, cap: int = DEFAULT_GROUP_CAP, seed: int = 0) -> TheoremReport:
    """Compare ``Blim F/R'γ_n(F)`` with ``D_n(G)/γ_n(G)`` as subsets of ``G/γ_n(G)``."""
    t0 = time.perf_counter()
    col = colim_F(P, n)
    _require_finite(col.group, cap)
    C = col.group
    t1 = time.perf_counter()
    B = blim_F(P, n, cap)
    t2 = time.perf_counter()
    D = dimension_quotient_subgroup(P, n, cap, seed)
    t3 = time.perf_counter()
    exp2 = all(C.power(x, 2) == C.identity for x in D)
    return TheoremReport(
        presentation=str(P),
        n=n,
        blim=B,
        dimension_quotient=D,
        equal=B == D,
        exponent_two=exp2,
        blim_invariants=_invariants_if_abelian(C, B),
        dimension_invariants=_invariants_if_abelian(C, D),
        colimit_order=C.order(),
        timings={"colimit": t1 - t0, "blim": t2 - t1, "dimension_quotient": t3 - t2},
    )


def verify_inclusion(P: FreePresentation, n: int, cap: int = DEFAULT_GROUP_CAP) -> bool:
    return blim_F(P, n, cap) <= dimension_quotient_subgroup(P, n, cap)


# --- the symmetric-power sequence --------------------------------------------------


@dataclass
class SymSequenceReport:
    source: FgAbelian
    well_defined: bool
    injective: bool
    exact_middle: bool
    cokernel: FgAbelian
    sym_cube: FgAbelian

    @property
    def ok(self) -> bool:
        return self.well_defined and self.injective and self.exact_middle and self.cokernel == self.sym_cube

    def to_json(self) -> dict:
        return {
            "source": self.source.to_json(),
            "well_defined": self.well_defined,
            "injective": self.injective,
            "exact_middle": self.exact_middle,
            "cokernel": self.cokernel.to_json(),
            "sym_cube": self.sym_cube.to_json(),
            "ok": self.ok,
        }


def abelianized_presentation(P: FreePresentation) -> AbelianPresentation:
    return AbelianPresentation(P.ngens, tuple(tuple(r.exponent_sums(P.ngens)) for r in P.relators))


def verify_sym_sequence(P: FreePresentation) -> SymSequenceReport:
    """Check ``γ_3(F)/[R,F']γ_4(F) -> S²(G_ab)⊗F_ab -> S³(G_ab)`` is short exact.

    The first map sends ``[[a, b], c]`` to ``ac⊗b - bc⊗a``.
    """
    k = P.ngens
    F = free_nilpotent_pc(k, 3)
    Rbar = normal_closure(F, [F.evaluate_word(r) for r in P.relators])
    RF2 = mutual_commutator(F, Rbar, weight_term(F, 2))
    idx3 = F.indices_of_weight(3)
    rel_lattice = Lattice(len(idx3), [layer_coordinates(F, g, 3) for g in RF2.gens])
    source = lattice_quotient(Lattice.full(len(idx3)), rel_lattice)

    Gab = abelianized_presentation(P)
    S2, basis2 = sym_power(Gab, 2)
    target = tensor_presentation(S2, AbelianPresentation.free(k))
    m_index = {m: i for i, m in enumerate(basis2)}

    def sq(a, c):
        return m_index[tuple(sorted((a, c)))]

    columns = []
    for j in idx3:
        d = F.definitions[j]
        a, b, c = d[1][1][1], d[1][2][1], d[2][1]
        col = [0] * target.ngens
        col[sq(a, c) * k + b] += 1
        col[sq(b, c) * k + a] -= 1
        columns.append(col)
    M = transpose(columns, target.ngens) if columns else [[] for _ in range(target.ngens)]
    pre = preimage(M, len(idx3), target.lattice())
    well_defined = pre.contains_lattice(rel_lattice)
    injective = pre == rel_lattice

    mult, _ = multiplication_map(Gab)
    S3 = mult.target
    mult_free = AbelianMap(target, S3, mult.matrix)
    image = target.lattice().add(columns)
    exact = image == mult_free.kernel_lattice()
    cokernel = lattice_quotient(Lattice.full(target.ngens), image)
    return SymSequenceReport(source, well_defined, injective, exact, cokernel, S3.invariants())


# --- vanishing of Lim f/(rf + f^n) ---------------------------------------------------


def verify_monoadditive_vanishing(P: FreePresentation, n: int) -> bool:
    """Equalizer of ``f/(rf+f^n)`` at ``c ⇉ c⊔c`` is zero."""
    _check_n(n)
    k = P.ngens
    if k == 0:
        return True
    P2, _, _ = coproduct(P)
    L = relator_ideal_lattice(P, n, "rf").lattice
    L2 = relator_ideal_lattice(P2, n, "rf").lattice
    basis = monomial_basis(k, n)
    index2 = _basis_index(2 * k, n)
    # X_j -> X_j and X_j -> X_{k+j}; the difference on monomials
    D = [[0] * len(basis) for _ in range(L2.n)]
    for col, m in enumerate(basis):
        D[index2[m]][col] += 1
        D[index2[tuple(g + k for g in m)]][col] -= 1
    return preimage(D, len(basis), L2) == L


# --- R' ∩ γ_3 = [R ∩ F', R] ----------------------------------------------------------


@dataclass
class IdentityReport:
    lhs_rank: int
    rhs_rank: int
    equal: bool


def verify_identity(P: FreePresentation) -> IdentityReport:
    """Inside ``F/γ_4(F)``: ``[R̄∩γ_2, R̄] = R̄' ∩ γ_3``."""
    F = free_nilpotent_pc(P.ngens, 3)
    Rbar = normal_closure(F, [F.evaluate_word(r) for r in P.relators])
    lhs = mutual_commutator(F, Rbar.intersect_weight(2), Rbar)
    rhs = derived_subgroup(Rbar).intersect_weight(3)
    return IdentityReport(len(lhs), len(rhs), lhs == rhs)
