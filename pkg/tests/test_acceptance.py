"""Acceptance checks, one per criterion.

Each ``criterion_k`` returns ``(passed, detail)``.  The pytest wrappers assert on
the blocking criteria and record every outcome; ``conftest.py`` prints one
PASS/FAIL line per criterion at the end of the session.  Running this file as a
script prints the same lines directly.

Criterion 13 is an exploratory n = 5 run.  It is reported but never fails the
suite.  Each case gets ``BLIMWB_STRETCH_SECONDS`` (default 600) in a child process.
"""

import math
import multiprocessing as mp
import os
import random
import sys
import time

import pytest

from blimwb.catcoh import (
    bar_cohomology_trivial_z,
    check_exact_seq1,
    check_exact_seq2,
    classifying,
    cochain_complex,
    constant_abelian,
    cyclic,
    lim0_direct,
    lim1_nonabelian,
    lim_n,
)
from blimwb.catcoh.randomized import (
    random_abelian_functor,
    random_category,
    random_central_subfunctor,
    random_group_functor,
    random_subfunctor,
)
from blimwb.groupring import FiniteGroupRing, dimension_membership_free, dimension_subgroup_finite
from blimwb.intlin import FgAbelian
from blimwb.limits import (
    verify_identity,
    verify_inclusion,
    verify_main_theorem,
    verify_monoadditive_vanishing,
    verify_sym_sequence,
)
from blimwb.nilpotent import basic_commutators, definition_word
from blimwb.presfile import FREE_CORPUS, load_corpus
from blimwb.words import FreePresentation, Word

CORPUS = load_corpus()
RESULTS: dict[int, tuple[bool, str]] = {}
_theorem_reports = {}


def theorem_reports():
    if not _theorem_reports:
        t0 = time.perf_counter()
        for P in CORPUS:
            _theorem_reports[P.name] = verify_main_theorem(P, 4)
        _theorem_reports["_seconds"] = time.perf_counter() - t0
    return _theorem_reports


def criterion_1():
    reps = theorem_reports()
    secs = reps["_seconds"]
    bad = [P.name for P in CORPUS if not reps[P.name].equal]
    sizes = ", ".join(f"{P.name}:{len(reps[P.name].blim)}" for P in CORPUS)
    return not bad and secs < 300, f"Blim = D4/γ4 on 6 groups ({sizes}) in {secs:.1f}s" + (f"; differ on {bad}" if bad else "")


def criterion_2():
    bad = []
    for P in CORPUS:
        R, words = FiniteGroupRing.from_presentation(P)
        for n in (2, 3, 4):
            ring = dimension_subgroup_finite(R, n)
            free = {g for g in range(R.order) if dimension_membership_free(P, n, words[g], "r")}
            if ring != free:
                bad.append((P.name, n))
    return not bad, "free vs group-ring D_n agree for n = 2, 3, 4 on 6 groups" if not bad else f"disagree on {bad}"


def criterion_3():
    bad = [(P.name, n) for n in (2, 3, 4) for P in CORPUS if not verify_inclusion(P, n)]
    return not bad, "Blim ⊆ D_n/γ_n for n = 2, 3, 4" if not bad else f"fails on {bad}"


def _weight(b):
    return 1 if b[0] == "g" else _weight(b[1]) + _weight(b[2])


def criterion_4():
    rng = random.Random(2024)
    presentations = [FreePresentation(("x", "y", "z"))] + [P for P in CORPUS if P.ngens > 1]
    checked, bad = 0, []
    for n in (2, 3, 4):
        for _ in range(200):
            P = rng.choice(presentations)
            basics = [b for b in basic_commutators(P.ngens, n) if _weight(b) == n]
            w = Word()
            for _ in range(rng.randint(1, 3)):
                w = w * definition_word(rng.choice(basics)) ** rng.choice((-2, -1, 1, 2))
            checked += 1
            if not dimension_membership_free(P, n, w):
                bad.append((P.name, n, str(w)))
    return not bad, f"{checked} products of weight-n basic commutators lie in D_n" if not bad else f"{len(bad)} failures, e.g. {bad[0]}"


def criterion_5():
    reps = theorem_reports()
    bad = [P.name for P in CORPUS if not reps[P.name].exponent_two]
    return not bad, "every element of D4/γ4 squares to 1" if not bad else f"fails on {bad}"


def criterion_6():
    bad = [P.name for P in CORPUS if not verify_identity(P).equal]
    return not bad, "R'∩γ3 = [R∩F', R] mod γ4 on 6 groups" if not bad else f"fails on {bad}"


def criterion_7():
    pres = CORPUS + load_corpus(FREE_CORPUS)
    bad = [P.name for P in pres if not verify_sym_sequence(P).ok]
    return not bad, f"injective with cokernel S³(G_ab) on {len(pres)} presentations" if not bad else f"fails on {bad}"


def criterion_8():
    bad = [(P.name, n) for n in (3, 4) for P in CORPUS if not verify_monoadditive_vanishing(P, n)]
    return not bad, "equalizer of f/(rf+fⁿ) vanishes for n = 3, 4" if not bad else f"fails on {bad}"


def abelian_instances(seed, count):
    rng = random.Random(seed)
    for _ in range(count):
        kind, C, extra = random_category(rng)
        yield kind, random_abelian_functor(rng, kind, C, extra)


def _within_size_bounds(F):
    sizes = [math.prod(o) if all(o) else None for o in F.orders]
    return F.C.nobj <= 4 and F.C.nmor <= 12 and all(s is not None and s <= 8 for s in sizes)


def criterion_9():
    t0 = time.perf_counter()
    count, bad = 0, []
    for kind, F in abelian_instances(2024, 30):
        if not _within_size_bounds(F):
            bad.append(f"{kind} out of bounds")
            continue
        cc = cochain_complex(F, 2)
        if not cc.square_zero() or cc.cohomology(0) != lim0_direct(F):
            bad.append(kind)
        count += 1
    secs = time.perf_counter() - t0
    ok = not bad and count >= 20 and secs < 60
    return ok, f"{count} instances, H⁰ = lim and ∂∂ = 0, {secs:.1f}s" + (f"; failures {bad}" if bad else "")


def criterion_10():
    F = constant_abelian(classifying(cyclic(2)), [0])
    got = [lim_n(F, n) for n in range(4)]
    oracle = [bar_cohomology_trivial_z(cyclic(2), n) for n in range(4)]
    ok = got == oracle and got[1] == FgAbelian((), 0) and got[2] == FgAbelian([2])
    return ok, "BC2, trivial Z: Lim¹ = 0, Lim² = Z/2, equal to bar resolution in degrees 0..3"


def criterion_11():
    count, bad = 0, []
    for kind, F in abelian_instances(11, 30):
        if not F.is_finite():
            continue
        GF, _ = F.to_group_functor()
        if lim1_nonabelian(GF).size != cochain_complex(F, 1).cohomology(1).order():
            bad.append(kind)
        count += 1
    return not bad and count > 0, f"orbits = |Z¹/B¹| on {count} abelian-valued instances" + (f"; failures {bad}" if bad else "")


def criterion_12():
    rng = random.Random(12)
    violations = []
    for i in range(12):
        kind, F = random_group_functor(rng)
        rep = check_exact_seq1(F, random_subfunctor(rng, F), seed=i)
        violations += rep.violations
    for i in range(12):
        kind, F = random_group_functor(rng)
        rep = check_exact_seq2(F, random_subfunctor(rng, F, normal=True), seed=i)
        violations += rep.violations
    central = 0
    for i in range(60):
        kind, F = random_group_functor(rng)
        sub = random_central_subfunctor(rng, F)
        if sub is None:
            continue
        rep = check_exact_seq1(F, sub, seed=i)
        if "δ additive" not in rep.checked:
            violations.append("δ additivity not checked on a central subfunctor")
        violations += rep.violations
        central += 1
        if central == 5:
            break
    ok = not violations and central >= 3
    return ok, f"12 + 12 sequences, {central} central, {len(violations)} violations"


def _inclusion_child(name, queue):
    P = {P.name: P for P in load_corpus()}[name]
    t0 = time.perf_counter()
    r = verify_main_theorem(P, 5)
    queue.put((r.blim <= r.dimension_quotient, len(r.blim), len(r.dimension_quotient), time.perf_counter() - t0))


def criterion_13():
    budget = float(os.environ.get("BLIMWB_STRETCH_SECONDS", "600"))
    outcomes = []
    done_all = True
    for P in CORPUS:
        if P.ngens > 2:
            continue
        queue = mp.Queue()
        proc = mp.Process(target=_inclusion_child, args=(P.name, queue))
        proc.start()
        proc.join(budget)
        if proc.is_alive():
            proc.terminate()
            proc.join()
            outcomes.append(f"{P.name}: timeout")
            done_all = False
            continue
        if proc.exitcode != 0 or queue.empty():
            outcomes.append(f"{P.name}: error")
            done_all = False
            continue
        held, nb, nd, secs = queue.get()
        outcomes.append(f"{P.name}: {'holds' if held else 'FAILS'} |Blim|={nb} |D5/γ5|={nd} {secs:.0f}s")
        done_all = done_all and held
    return done_all, "n = 5 inclusion (exploratory): " + ", ".join(outcomes)


CRITERIA = {k: globals()[f"criterion_{k}"] for k in range(1, 14)}
BLOCKING = set(range(1, 13))


@pytest.mark.parametrize("k", sorted(CRITERIA))
def test_criterion(k):
    ok, detail = CRITERIA[k]()
    RESULTS[k] = (ok, detail)
    if k in BLOCKING:
        assert ok, detail


def summary_lines():
    lines = []
    for k in sorted(CRITERIA):
        if k not in RESULTS:
            continue
        ok, detail = RESULTS[k]
        tag = "PASS" if ok else "FAIL"
        note = " (stretch, non-blocking)" if k not in BLOCKING else ""
        lines.append(f"criterion {k:2d}: {tag}{note}  {detail}")
    return lines


if __name__ == "__main__":
    for k in [int(a) for a in sys.argv[1:]] or sorted(CRITERIA):
        RESULTS[k] = CRITERIA[k]()
        print(summary_lines()[-1] if k == max(RESULTS) else "", flush=True)
