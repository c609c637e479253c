"""Higher limits over finite categories: nerve cochains and non-abelian Lim¹."""

from .category import (
    FiniteCategory,
    classifying,
    discrete,
    empty_category,
    monoid_category,
    path_category,
    poset_category,
    product_category,
)
from .cochain import (
    CochainComplex,
    bar_cohomology_trivial_z,
    chain_target,
    cochain_complex,
    face,
    lim0_direct,
    lim0_elements,
    lim0_lattice,
    lim_n,
    nerve_chains,
)
from .functors import AbelianFunctor, FunctorToGroups, constant_abelian, constant_group_functor
from .groups import FinGroup, abelian, cyclic, dihedral, direct_product, quaternion, symmetric3
from .nonabelian import (
    DEFAULT_CAP,
    ConnectingMap,
    CosetData,
    ExactnessReport,
    Lim1,
    act_on_cocycle,
    check_exact_seq1,
    check_exact_seq2,
    connecting_delta,
    is_cocycle,
    lim1_nonabelian,
    lim1_orbits_bruteforce,
    z1_nonabelian,
)
