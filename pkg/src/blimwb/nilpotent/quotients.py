"""Nilpotent quotients of finite presentations and lower-central layers."""

from __future__ import annotations

from ..errors import InputError
from ..intlin import Lattice
from ..words import FreePresentation
from .freenil import free_nilpotent_pc
from .pc import PcPresentation, Vec
from .subgroups import QuotientMap, normal_closure, quotient_pc


def nilpotent_quotient_of_presentation(P: FreePresentation, c: int) -> tuple[PcPresentation, QuotientMap]:
    """``F/R γ_{c+1}(F)`` for ``P = <X | R>``; abstract images are those of ``X``."""
    F = free_nilpotent_pc(P.ngens, c)
    rels = [F.evaluate_word(r) for r in P.relators]
    N = normal_closure(F, rels)
    return quotient_pc(F, N, check_normal=False)


def layer_presentation(Q: PcPresentation, w: int) -> tuple[list[int], Lattice]:
    """Indices of the weight-``w`` generators and the relation lattice of ``γ_w/γ_{w+1}``."""
    idx = Q.indices_of_weight(w)
    rows = []
    for a, j in enumerate(idx):
        e = Q.rel_orders[j]
        if e:
            row = [-Q.powers[j][i] for i in idx]
            row[a] += e
            rows.append(row)
    return idx, Lattice(len(idx), rows)


def layer_coordinates(Q: PcPresentation, x: Vec, w: int) -> list[int]:
    """Coordinates of ``x ∈ γ_w`` in the weight-``w`` layer."""
    start = Q.first_index_of_weight(w)
    if any(x[:start]):
        raise InputError(f"element does not lie in the weight-{w} term")
    return [x[i] for i in Q.indices_of_weight(w)]
