"""Command-line front door.

Structure arguments accept a built-in name or a structure file path:
``chainN``, ``setN``, ``KN`` (complete graph), ``PN`` (path), ``CN`` (cycle),
``emptyN`` (edgeless graph), ``twoA+B`` (two-class equivalence, blocks) and
``twoA+Bi`` (interleaved classes).  Fragment arguments accept ``chainsN``,
``setsN``, ``graphsN``, ``two_classA+B``, each optionally prefixed by
``ordered_``, or a manifest path / fragment directory.

Exit codes: 0 holds or succeeded, 1 fails (counterexample written with
``--out``), 2 undecided within the fragment or no host, 3 input error,
4 resource guard tripped.  Resource guards are read from the environment
variables documented in :mod:`structramsey.config`.
"""

from __future__ import annotations

import argparse
import json
import re
import shlex
import sys
from pathlib import Path

from structramsey import catalog, fileformat
from structramsey.arrows import ArrowStatement, check_arrow, degree_bounds, export_cnf, min_t
from structramsey.errors import InputError, NoHostError, ResourceGuardError
from structramsey.expansions import (
    ClassFragment,
    check_expansion_property,
    check_lower_bound,
    check_precompactness,
    check_ramsey_property,
    check_reasonability,
    check_rigidity,
    expand_by_partition,
)
from structramsey.kriz import EquivRelation, kriz_reduce
from structramsey.koenig import LevelChain, branch_report, build_tree, find_branch, verify_branch
from structramsey.partitions import rgs_from_string
from structramsey.structures import FiniteStructure, enumerate_copies

EXIT_OK, EXIT_FAILS, EXIT_UNDECIDED, EXIT_INPUT, EXIT_GUARD = 0, 1, 2, 3, 4

_STRUCTURE_NAMES = [
    (r"chain(\d+)", lambda m: catalog.chain(int(m[1]))),
    (r"set(\d+)", lambda m: catalog.pure_set(int(m[1]))),
    (r"K(\d+)", lambda m: catalog.complete_graph(int(m[1]))),
    (r"P(\d+)", lambda m: catalog.path_graph(int(m[1]))),
    (r"C(\d+)", lambda m: catalog.cycle_graph(int(m[1]))),
    (r"empty(\d+)", lambda m: catalog.graph(int(m[1]), [])),
    (r"two(\d+)\+(\d+)(i?)", lambda m: catalog.two_class(int(m[1]), int(m[2]), interleaved=bool(m[3]))),
]

_FAMILY_NAMES = [
    (r"chains(\d+)", "chains"),
    (r"(?:pure_)?sets(\d+)", "pure_sets"),
    (r"graphs(\d+)", "graphs"),
    (r"two_class(\d+)\+(\d+)", "two_class_equivalence"),
]


def resolve_structure(text: str) -> FiniteStructure:
    for pattern, make in _STRUCTURE_NAMES:
        m = re.fullmatch(pattern, text)
        if m:
            return make(m)
    path = Path(text)
    if not path.is_file():
        raise InputError(f"{text!r} is neither a built-in structure name nor a file")
    return fileformat.read_structure(path)


def resolve_fragment(text: str) -> ClassFragment:
    ordered = text.startswith("ordered_")
    core = text[len("ordered_"):] if ordered else text
    for pattern, family in _FAMILY_NAMES:
        m = re.fullmatch(pattern, core)
        if m:
            return catalog.generate_fragment(catalog.FamilySpec(family, tuple(int(g) for g in m.groups()), ordered))
    if not Path(text).exists():
        raise InputError(f"{text!r} is neither a built-in fragment name nor a manifest")
    return fileformat.read_fragment(text)


def _int_list(text: str) -> list[int]:
    try:
        return [int(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise InputError(f"expected a comma-separated integer list, got {text!r}") from None


def _pairs(text: str) -> list[tuple[int, int]]:
    out = []
    for item in text.split(","):
        a, sep, b = item.partition(":")
        if not sep:
            raise InputError(f"pairs are written A:B, got {item!r}")
        out.append((int(a), int(b)))
    return out


def _write(path, text: str):
    Path(path).parent.mkdir(parents=True, exist_ok=True)
    Path(path).write_text(text)


# each handler returns (exit code, report text)


def cmd_copies(a):
    A, C = resolve_structure(a.A), resolve_structure(a.C)
    cs = enumerate_copies(A, C)
    lines = [f"copies: {len(cs)}"] + [f"  {i}: {list(s)}" for i, s in enumerate(cs.subsets)]
    if a.out:
        _write(a.out, fileformat.dump_json({"copies": [list(s) for s in cs.subsets]}))
    return EXIT_OK, "\n".join(lines)


def cmd_arrow(a):
    s = ArrowStatement(resolve_structure(a.C), resolve_structure(a.B), resolve_structure(a.A), a.k, a.t)
    v = check_arrow(s, workers=a.workers)
    if v.holds:
        return EXIT_OK, v.report()
    if a.out:
        _write(a.out, fileformat.dump_json(v.counterexample.to_json()))
    return EXIT_FAILS, v.report()


def cmd_min_t(a):
    res = min_t(resolve_structure(a.C), resolve_structure(a.B), resolve_structure(a.A), k=a.k, workers=a.workers)
    if a.out and res.witness is not None:
        _write(a.out, fileformat.dump_json(res.witness.to_json()))
    return EXIT_OK, res.report()


def cmd_degree(a):
    ks = tuple(_int_list(a.k)) if a.k else (2,)
    res = degree_bounds(resolve_structure(a.A), resolve_fragment(a.fragment), a.size_limit, k_values=ks, workers=a.workers)
    return (EXIT_OK if res.upper is not None else EXIT_UNDECIDED), res.report()


def cmd_kriz(a):
    res = kriz_reduce(resolve_structure(a.C), resolve_structure(a.B), resolve_structure(a.A), a.t, k=a.k, workers=a.workers)
    if res.success:
        if a.out:
            _write(a.out, fileformat.dump_json(res.relation.to_json()))
        return EXIT_OK, res.report()
    if a.out:
        _write(a.out, fileformat.dump_json(res.coloring.to_json()))
    return EXIT_FAILS, res.report()


def cmd_koenig(a):
    F = resolve_structure(a.F)
    enum = _int_list(a.enumeration) if a.enumeration else list(range(F.size))
    lc = LevelChain.from_enumeration(F, enum, _int_list(a.sizes), resolve_structure(a.A), resolve_structure(a.ambient))
    tree = build_tree(lc, a.t, k=a.k, workers=a.workers)
    branch = find_branch(tree)
    text = branch_report(tree, branch)
    if branch is None:
        return EXIT_UNDECIDED, text
    text += f"\nbranch re-verified: {verify_branch(lc, branch)}"
    if a.out:
        _write(a.out, fileformat.dump_json({"branch": [E.rgs() for E in branch]}))
    return EXIT_OK, text


def cmd_expand(a):
    F, A = resolve_structure(a.F), resolve_structure(a.A)
    base = enumerate_copies(A, F)
    E = EquivRelation.from_labels(base, rgs_from_string(a.rgs))
    order = None
    if a.order:
        order = "lex" if a.order == "lex" else _int_list(a.order)
    X = expand_by_partition(F, A, E, order=order, t=a.t)
    K_star = ClassFragment.age(X)
    lines = [f"relation: {E.rgs()} on {len(base)} copies", f"signature: {list(X.signature.full.relations)}"]
    for p, ext in zip(X.signature.class_predicates, X.predicates):
        subs = sorted({tuple(sorted(tup)) for tup in ext})
        lines.append(f"  {p.name}: {[list(s) for s in subs]}")
    lines.append(f"age members: {len(K_star)}")
    if a.out:
        fileformat.write_fragment(K_star, a.out)
    return EXIT_OK, "\n".join(lines)


def cmd_precompact(a):
    res = check_precompactness(resolve_fragment(a.K), resolve_fragment(a.Kstar), bound=a.bound)
    return (EXIT_OK if res.ok else EXIT_FAILS), res.report()


def cmd_lower_bound(a):
    res = check_lower_bound(resolve_structure(a.A), resolve_structure(a.B), resolve_fragment(a.Kstar), a.t)
    return (EXIT_OK if res.holds else EXIT_FAILS), res.report()


def cmd_expansion_property(a):
    res = check_expansion_property(resolve_fragment(a.K), resolve_fragment(a.Kstar))
    return (EXIT_OK if res.all_witnessed else EXIT_UNDECIDED), res.report()


def cmd_reasonability(a):
    res = check_reasonability(resolve_fragment(a.K), resolve_fragment(a.Kstar))
    return (EXIT_OK if res.holds else EXIT_FAILS), res.report()


def cmd_ramsey(a):
    pairs = _pairs(a.pairs) if a.pairs else None
    res = check_ramsey_property(
        resolve_fragment(a.Kstar), a.host_limit, k=a.k, pairs=pairs, pattern_limit=a.pattern_limit, workers=a.workers
    )
    ok = all(r.host is not None for r in res.rows)
    return (EXIT_OK if ok else EXIT_UNDECIDED), res.report()


def cmd_rigidity(a):
    res = check_rigidity(resolve_fragment(a.fragment))
    return (EXIT_OK if res.holds else EXIT_FAILS), res.report()


def cmd_generate(a):
    spec = catalog.FamilySpec(a.family, tuple(_int_list(a.sizes)), a.ordered)
    K = catalog.generate_fragment(spec)
    text = f"fragment {spec.name}: {len(K)} members"
    if a.out:
        path = fileformat.write_fragment(K, a.out)
        text += f"\nmanifest: {path.name}"
    return EXIT_OK, text


def cmd_validate(a):
    res = catalog.validate_fragment(resolve_fragment(a.fragment))
    if not res.hereditary:
        return EXIT_FAILS, res.report()
    return (EXIT_OK if res.jep_within_fragment else EXIT_UNDECIDED), res.report()


def cmd_export_cnf(a):
    s = ArrowStatement(resolve_structure(a.C), resolve_structure(a.B), resolve_structure(a.A), a.k, a.t)
    exp = export_cnf(s)
    text = f"cnf: {exp.cnf.num_vars} variables, {len(exp.cnf.clauses)} clauses"
    if a.out:
        _write(a.out, exp.dimacs())
        _write(str(a.out) + ".legend.json", exp.legend_json())
        return EXIT_OK, text
    return EXIT_OK, exp.dimacs().rstrip("\n") + "\n" + text


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="structramsey", description="Finite structural Ramsey computations.")
    sub = p.add_subparsers(dest="verb", required=True)

    def verb(name, fn, *args):
        sp = sub.add_parser(name)
        sp.set_defaults(fn=fn)
        sp.add_argument("--workers", type=int, default=1, help="worker processes (does not change output)")
        sp.add_argument("--out", help="output path")
        for flag, kw in args:
            sp.add_argument(flag, **kw)
        return sp

    req = {"required": True}
    CBA = [("--C", req), ("--B", req), ("--A", req)]
    verb("copies", cmd_copies, ("--A", req), ("--C", req))
    verb("arrow", cmd_arrow, *CBA, ("--k", {"type": int, **req}), ("--t", {"type": int, **req}))
    verb("min-t", cmd_min_t, *CBA, ("--k", {"type": int}))
    verb("degree", cmd_degree, ("--A", req), ("--fragment", req), ("--size-limit", {"type": int, **req}),
         ("--k", {"help": "comma-separated color counts (default 2)"}))
    verb("kriz", cmd_kriz, *CBA, ("--t", {"type": int, **req}), ("--k", {"type": int}))
    verb("koenig", cmd_koenig, ("--F", req), ("--sizes", req), ("--A", req), ("--ambient", req),
         ("--t", {"type": int, **req}), ("--k", {"type": int}), ("--enumeration", {}))
    verb("expand", cmd_expand, ("--F", req), ("--A", req), ("--rgs", req), ("--t", {"type": int}), ("--order", {}))
    verb("precompact", cmd_precompact, ("--K", req), ("--Kstar", req), ("--bound", {"type": int}))
    verb("lower-bound", cmd_lower_bound, ("--A", req), ("--B", req), ("--Kstar", req), ("--t", {"type": int, **req}))
    verb("expansion-property", cmd_expansion_property, ("--K", req), ("--Kstar", req))
    verb("reasonability", cmd_reasonability, ("--K", req), ("--Kstar", req))
    verb("ramsey", cmd_ramsey, ("--Kstar", req), ("--host-limit", {"type": int, **req}), ("--k", {"type": int, "default": 2}),
         ("--pairs", {"help": "member index pairs A:B,A:B"}), ("--pattern-limit", {"type": int}))
    verb("rigidity", cmd_rigidity, ("--fragment", req))
    verb("generate", cmd_generate, ("--family", {"choices": catalog.FAMILIES, **req}), ("--sizes", req),
         ("--ordered", {"action": "store_true"}))
    verb("validate", cmd_validate, ("--fragment", req))
    verb("export-cnf", cmd_export_cnf, *CBA, ("--k", {"type": int, **req}), ("--t", {"type": int, **req}))
    return p


def replay_line(argv: list[str]) -> str:
    """The command line without ``--workers``, which never affects output."""
    kept = []
    skip = False
    for tok in argv:
        if skip:
            skip = False
            continue
        if tok == "--workers":
            skip = True
            continue
        if tok.startswith("--workers="):
            continue
        kept.append(tok)
    return shlex.join(["structramsey"] + kept)


def run(argv: list[str]) -> tuple[int, str]:
    """Execute one command; returns the exit code and the full report."""
    args = build_parser().parse_args(argv)
    try:
        if args.workers < 1:
            raise InputError("--workers must be at least 1")
        code, text = args.fn(args)
    except NoHostError as exc:
        code, text = EXIT_UNDECIDED, f"no host: {exc}"
    except ResourceGuardError as exc:
        code, text = EXIT_GUARD, f"resource guard: {exc}"
    except (InputError, ValueError, OSError, json.JSONDecodeError, KeyError) as exc:
        code, text = EXIT_INPUT, f"input error: {exc}"
    return code, f"{text}\nexit: {code}\nreplay: {replay_line(argv)}\n"


def main(argv: list[str] | None = None) -> int:
    argv = sys.argv[1:] if argv is None else list(argv)
    try:
        code, text = run(argv)
    except SystemExit as exc:  # argparse usage errors
        return EXIT_INPUT if exc.code not in (0, None) else 0
    sys.stdout.write(text)
    return code


if __name__ == "__main__":
    sys.exit(main())
