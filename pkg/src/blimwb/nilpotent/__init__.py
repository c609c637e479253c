"""Nilpotent groups of small class as weighted polycyclic presentations."""

from .pc import INFINITE, PcHom, PcPresentation, definition_word, enumerate_finite
from .freenil import MAX_CLASS, basic_commutators, free_nilpotent_pc, witt_number
from .subgroups import (
    PcSubgroup,
    QuotientMap,
    abelian_section_invariants,
    brute_subgroup,
    closure,
    derived_subgroup,
    hom_image,
    join,
    kernel_to_abelian,
    lower_central_term,
    mutual_commutator,
    normal_closure,
    quotient_pc,
    subgroup_elements,
    trivial_subgroup,
    weight_term,
    whole_group,
)
from .quotients import nilpotent_quotient_of_presentation, layer_presentation, layer_coordinates
