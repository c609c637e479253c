"""Command-line entry point ``blimwb``.

Exit codes: 0 success, 1 verification failure, 2 input error, 3 resource cap.
"""

from __future__ import annotations

import argparse
import json
import os
import random
import sys
import time
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path

from .errors import CapExceeded, InfiniteGroupError, InputError
from .groupring import DEFAULT_GROUP_CAP

SCHEMA = "1"
EXIT_OK, EXIT_FAIL, EXIT_INPUT, EXIT_CAP = 0, 1, 2, 3


def _cap(args, default: int) -> int:
    if args.cap is not None:
        return args.cap
    env = os.environ.get("BLIMWB_CAP")
    if env:
        try:
            return int(env)
        except ValueError:
            raise InputError(f"BLIMWB_CAP must be an integer, got {env!r}") from None
    return default


def _emit(payload: dict, out: str | None) -> None:
    text = json.dumps({"schema": SCHEMA, **payload}, indent=2, sort_keys=True, ensure_ascii=False) + "\n"
    if out:
        Path(out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)


def _elements(s) -> list[list[int]]:
    return sorted(list(x) for x in s)


def _inv(a):
    return None if a is None else a.to_json()


# --- presentation commands ----------------------------------------------------------


def _verify_case(path: str, n: int, cap: int, seed: int, timings: bool) -> dict:
    from .limits import verify_main_theorem
    from .presfile import load_presentation

    P = load_presentation(path)
    t0 = time.perf_counter()
    rep = verify_main_theorem(P, n, cap, seed)
    inclusion = rep.blim <= rep.dimension_quotient
    case = {
        "name": P.name,
        "path": str(path),
        "presentation": str(P),
        "n": n,
        "colimit_order": rep.colimit_order,
        "blim": {"elements": _elements(rep.blim), "invariants": _inv(rep.blim_invariants)},
        "dimension_quotient": {"elements": _elements(rep.dimension_quotient), "invariants": _inv(rep.dimension_invariants)},
        "equal": rep.equal,
        "inclusion": inclusion,
        "exponent_two": rep.exponent_two,
    }
    if timings:
        case["timings_ms"] = {k: round(1000 * v, 1) for k, v in rep.timings.items()}
        case["timings_ms"]["total"] = round(1000 * (time.perf_counter() - t0), 1)
    return case


def cmd_verify(args) -> int:
    cap = _cap(args, DEFAULT_GROUP_CAP)
    jobs = max(1, args.jobs)
    work = [(p, args.n, cap, args.seed, args.timings) for p in args.paths]
    if jobs > 1 and len(work) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            cases = list(pool.map(_verify_case, *zip(*work)))
    else:
        cases = [_verify_case(*w) for w in work]
    cases.sort(key=lambda c: (c["name"], c["path"]))
    passed = all(c["equal"] and c["inclusion"] and (c["exponent_two"] or args.n > 4) for c in cases)
    _emit({"command": "verify", "n": args.n, "seed": args.seed, "cap": cap, "cases": cases, "passed": passed}, args.out)
    return EXIT_OK if passed else EXIT_FAIL


def cmd_dimq(args) -> int:
    from .limits import _invariants_if_abelian, colim_F, dimension_quotient_subgroup
    from .presfile import load_presentation

    P = load_presentation(args.path)
    cap = _cap(args, DEFAULT_GROUP_CAP)
    D = dimension_quotient_subgroup(P, args.n, cap, args.seed)
    C = colim_F(P, args.n).group
    _emit(
        {
            "command": "dimq",
            "name": P.name,
            "n": args.n,
            "colimit_order": C.order(),
            "elements": _elements(D),
            "invariants": _inv(_invariants_if_abelian(C, D)),
        },
        args.out,
    )
    return EXIT_OK


def cmd_blim(args) -> int:
    from .limits import _invariants_if_abelian, blim_F, colim_F
    from .presfile import load_presentation

    P = load_presentation(args.path)
    cap = _cap(args, DEFAULT_GROUP_CAP)
    B = blim_F(P, args.n, cap)
    C = colim_F(P, args.n).group
    _emit(
        {
            "command": "blim",
            "name": P.name,
            "n": args.n,
            "colimit_order": C.order(),
            "elements": _elements(B),
            "invariants": _inv(_invariants_if_abelian(C, B)),
        },
        args.out,
    )
    return EXIT_OK


def cmd_props(args) -> int:
    from . import limits
    from .presfile import load_presentation

    P = load_presentation(args.path)
    cap = _cap(args, DEFAULT_GROUP_CAP)
    result: dict = {"command": "props", "which": args.which, "name": P.name}
    if args.which == "inclusion":
        ns = [args.n] if args.n else [2, 3, 4]
        checks = {str(n): limits.verify_inclusion(P, n, cap) for n in ns}
        ok = all(checks.values())
    elif args.which == "mono":
        ns = [args.n] if args.n else [3, 4]
        checks = {str(n): limits.verify_monoadditive_vanishing(P, n) for n in ns}
        ok = all(checks.values())
    elif args.which == "sym":
        rep = limits.verify_sym_sequence(P)
        checks = rep.to_json()
        ok = rep.ok
    else:
        rep = limits.verify_identity(P)
        checks = {"lhs_generators": rep.lhs_rank, "rhs_generators": rep.rhs_rank, "equal": rep.equal}
        ok = rep.equal
    result["checks"] = checks
    result["passed"] = ok
    _emit(result, args.out)
    return EXIT_OK if ok else EXIT_FAIL


# --- category commands -------------------------------------------------------------


def _load_json(path: str) -> dict:
    try:
        return json.loads(Path(path).read_text(encoding="utf-8"))
    except OSError as e:
        raise InputError(f"cannot read {path}: {e.strerror}") from None
    except json.JSONDecodeError as e:
        raise InputError(f"{path}: invalid JSON at line {e.lineno}, column {e.colno}: {e.msg}") from None


def _load_functor(data: dict):
    """Returns ``(abelian functor or None, group functor or None)``."""
    from .catcoh import AbelianFunctor, FiniteCategory, FunctorToGroups

    if "category" not in data:
        raise InputError("catlim input needs a 'category' block")
    C = FiniteCategory.from_json(data["category"])
    A = AbelianFunctor.from_json(data, C) if "abelian" in data else None
    if "groups" in data:
        G = FunctorToGroups.from_json(data, C)
    elif A is not None and A.is_finite():
        G = A.to_group_functor()[0]
    else:
        G = None
    if A is None and G is None:
        raise InputError("catlim input needs a 'groups'/'maps' or an 'abelian' block")
    return A, G


def _object_lists(data: dict, key: str, C) -> list[list[int]]:
    block = data.get(key)
    if block is None:
        raise InputError(f"this command needs a {key!r} block")
    try:
        return [list(block[o]) if isinstance(block[o], list) else [block[o]] for o in C.objects]
    except KeyError as e:
        raise InputError(f"{key!r} has no entry for object {e}") from None


def _random_instances(kind: str, count: int, seed: int):
    from .catcoh.randomized import random_central_subfunctor, random_group_functor, random_subfunctor

    rng = random.Random(seed)
    out = []
    while len(out) < count:
        fkind, F = random_group_functor(rng)
        if kind == "central":
            sub = random_central_subfunctor(rng, F)
            if sub is None:
                continue
        else:
            sub = random_subfunctor(rng, F, normal=(kind == "seq2"))
        out.append((fkind, F, sub))
    return out


def _catlim_random(args, cap: int) -> dict:
    from .catcoh import check_exact_seq1, check_exact_seq2

    if args.cmd not in ("seq1", "seq2"):
        raise InputError("--random is available for seq1 and seq2 only")
    results = []
    for i, (fkind, F, sub) in enumerate(_random_instances(args.cmd, args.random, args.seed)):
        check = check_exact_seq1 if args.cmd == "seq1" else check_exact_seq2
        rep = check(F, sub, cap, seed=args.seed + i)
        results.append({"index": i, "kind": fkind, "objects": F.C.nobj, "morphisms": F.C.nmor, **rep.to_json()})
    return {"random": args.random, "instances": results, "exact": all(r["exact"] for r in results)}


def cmd_catlim(args) -> int:
    from .catcoh import ConnectingMap, check_exact_seq1, check_exact_seq2, cochain_complex, lim0_direct, lim1_nonabelian

    cap = _cap(args, 10**7)
    payload: dict = {"command": "catlim", "cmd": args.cmd, "seed": args.seed}
    if args.random:
        payload.update(_catlim_random(args, cap))
        _emit(payload, args.out)
        return EXIT_OK if payload["exact"] else EXIT_FAIL
    if not args.file:
        raise InputError("catlim needs a FILE or --random")
    data = _load_json(args.file)
    A, G = _load_functor(data)
    C = (A or G).C
    payload["file"] = str(args.file)
    ok = True
    if args.cmd == "limn":
        if A is None:
            raise InputError("limn needs an 'abelian' block")
        cc = cochain_complex(A, args.degree)
        payload["lim"] = {str(n): cc.cohomology(n).to_json() for n in range(args.degree + 1)}
        payload["square_zero"] = cc.square_zero()
        payload["lim0_direct"] = lim0_direct(A).to_json()
        ok = payload["square_zero"] and payload["lim0_direct"] == payload["lim"]["0"]
    elif args.cmd == "lim1":
        if G is None:
            raise InputError("lim1 needs finite values")
        L = lim1_nonabelian(G, cap)
        payload["cocycles"] = len(L.cocycles)
        payload["orbits"] = L.size
        payload["representatives"] = [list(a) for a in L.representatives()]
    elif args.cmd == "delta":
        if G is None:
            raise InputError("delta needs finite values")
        sub = _object_lists(data, "subfunctor", C)
        delta = ConnectingMap(G, sub, cap)
        if "family" in data:
            lift = [x[0] for x in _object_lists(data, "family", C)]
            X = delta.cosets.project(lift)
            if X not in set(delta.cosets.families(cap)):
                raise InputError("the family is not an element of Lim F/G")
            cls = delta(X, lift)
            payload["family"] = list(X)
            payload["class"] = cls
            payload["basepoint"] = cls == 0
        else:
            payload["values"] = [{"family": list(X), "class": delta(X)} for X in delta.cosets.families(cap)]
        payload["lim1_size"] = delta.lim1.size
    else:
        if G is None:
            raise InputError(f"{args.cmd} needs finite values")
        sub = _object_lists(data, "subfunctor", C)
        rep = (check_exact_seq1 if args.cmd == "seq1" else check_exact_seq2)(G, sub, cap, seed=args.seed)
        payload.update(rep.to_json())
        ok = rep.exact
    payload["passed"] = ok
    _emit(payload, args.out)
    return EXIT_OK if ok else EXIT_FAIL


# --- argument parsing --------------------------------------------------------------


def _n_arg(p, default=None, required=False):
    p.add_argument("--n", type=int, default=default, required=required, help="nilpotency degree (2..5)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="blimwb", description="Dimension quotients and boundary limits workbench")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--seed", type=int, default=0)
        p.add_argument("--cap", type=int, default=None, help="enumeration cap (also BLIMWB_CAP)")
        p.add_argument("--out", default=None, help="write JSON here instead of stdout")

    p = sub.add_parser("verify", help="compare Blim with the dimension quotient")
    _n_arg(p, default=4)
    common(p)
    p.add_argument("--jobs", type=int, default=1, help="worker processes")
    p.add_argument("--timings", action="store_true", help="include wall-clock timings (not reproducible)")
    p.add_argument("paths", nargs="+")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("dimq", help="elements of D_n(G)/γ_n(G)")
    _n_arg(p, required=True)
    common(p)
    p.add_argument("path")
    p.set_defaults(func=cmd_dimq)

    p = sub.add_parser("blim", help="elements of the boundary limit")
    _n_arg(p, required=True)
    common(p)
    p.add_argument("path")
    p.set_defaults(func=cmd_blim)

    p = sub.add_parser("props", help="structural checks on one presentation")
    p.add_argument("--which", choices=["inclusion", "sym", "identity", "mono"], required=True)
    _n_arg(p)
    common(p)
    p.add_argument("path")
    p.set_defaults(func=cmd_props)

    p = sub.add_parser("catlim", help="higher limits over a finite category")
    p.add_argument("--cmd", choices=["limn", "lim1", "delta", "seq1", "seq2"], required=True)
    p.add_argument("--degree", type=int, default=2, help="top degree for limn")
    p.add_argument("--random", type=int, default=0, help="run N seeded random instances instead of FILE")
    common(p)
    p.add_argument("file", nargs="?")
    p.set_defaults(func=cmd_catlim)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if getattr(args, "n", None) is not None and not 2 <= args.n <= 5:
        return _fail(args, EXIT_INPUT, "InputError", f"n must be between 2 and 5, got {args.n}")
    if getattr(args, "degree", 0) < 0:
        return _fail(args, EXIT_INPUT, "InputError", "degree must be nonnegative")
    try:
        return args.func(args)
    except InputError as e:
        return _fail(args, EXIT_INPUT, type(e).__name__, str(e))
    except (CapExceeded, InfiniteGroupError) as e:
        return _fail(args, EXIT_CAP, type(e).__name__, str(e))


def _fail(args, code: int, kind: str, message: str) -> int:
    print(f"blimwb: {message}", file=sys.stderr)
    _emit({"command": args.command, "error": {"type": kind, "message": message}, "exit_code": code}, getattr(args, "out", None))
    return code


if __name__ == "__main__":
    sys.exit(main())
