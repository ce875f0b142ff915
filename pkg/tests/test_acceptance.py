"""Acceptance criteria, each at its stated tolerance and time budget.

Every criterion is a function of the worker count that returns
``(passed, report)``; the report is a deterministic text transcript used by
the determinism criterion.
"""

import random
import time

import pytest

import oracles
from acceptance_log import record
from structramsey.arrows import ArrowStatement, check_arrow, colors_on_copy, decode_model, export_cnf
from structramsey.catalog import FamilySpec, chain, generate_fragment, two_class
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
from structramsey.koenig import LevelChain, branch_report, build_tree, find_branch, verify_branch
from structramsey.kriz import (
    EquivRelation,
    WitnessFamily,
    check_E_ramsey,
    find_defeating_coloring,
    induced_relation,
    kriz_reduce,
    product_coloring,
)
from structramsey.partitions import iter_rgs, rgs_to_string
from structramsey.sat import check_model, solve
from structramsey.structures import (
    Embedding,
    FiniteStructure,
    Signature,
    enumerate_copies,
    iter_embeddings,
)

POINT = two_class(1, 0)
GRAPH = Signature((("E", 2),))
DIGRAPH = Signature((("R", 2), ("U", 1)))


def random_structure(rng: random.Random, sig: Signature, n: int) -> FiniteStructure:
    if sig == GRAPH:
        edges = [(i, j) for i in range(n) for j in range(i + 1, n) if rng.random() < 0.5]
        return FiniteStructure.build(sig, n, {"E": edges + [(j, i) for i, j in edges]})
    arcs = [(i, j) for i in range(n) for j in range(n) if i != j and rng.random() < 0.3]
    marks = [(i,) for i in range(n) if rng.random() < 0.5]
    return FiniteStructure.build(sig, n, {"R": arcs, "U": marks})


def random_arrow_instances(seed: int, count: int, max_copies: int = 12, max_raw: int = 2 ** 13):
    """Arrow statements with 4 to ``max_copies`` A-copies and ``k^n <= max_raw``.

    Holding and failing statements are drawn in equal numbers.
    """
    rng = random.Random(seed)
    out = {True: [], False: []}
    while len(out[True]) + len(out[False]) < count:
        sig = rng.choice([GRAPH, DIGRAPH])
        A = random_structure(rng, sig, rng.randint(1, 2))
        B = random_structure(rng, sig, rng.randint(A.size + 1, 4))
        C = random_structure(rng, sig, rng.randint(4, 7))
        k = rng.randint(2, 3)
        t = rng.randint(1, k - 1)
        n = len(enumerate_copies(A, C))
        if not 4 <= n <= max_copies or k ** n > max_raw or not len(enumerate_copies(B, C)):
            continue
        s = ArrowStatement(C, B, A, k, t)
        verdict, _ = oracles.arrow_holds(C, B, A, k, t)
        if len(out[verdict]) < count // 2:
            out[verdict].append(s)
    return [s for pair in zip(out[True], out[False]) for s in pair]


# ---------------------------------------------------------------- criteria


def criterion_1(workers: int):
    lines = []
    ok = True
    for C, expect in ((chain(6), True), (chain(5), False)):
        v = check_arrow(ArrowStatement(C, chain(3), chain(2), 2, 1), workers=workers)
        raw, _ = oracles.arrow_holds(C, chain(3), chain(2), 2, 1)
        ok &= v.holds == raw == expect
        if not v.holds:
            chi = v.counterexample
            ok &= all(len(colors_on_copy(chi, b, chain(2))) == 2 for b in enumerate_copies(chain(3), C))
            ok &= chi.assignment == oracles.least_defeating(C, chain(3), chain(2), 2, 1)
        lines.append(v.report())
    return ok, "\n".join(lines)


def criterion_2(workers: int):
    insts = random_arrow_instances(seed=2, count=200)
    agree = 0
    holds = 0
    lines = []
    for i, s in enumerate(insts):
        v = check_arrow(s, workers=workers)
        raw, _ = oracles.arrow_holds(s.C, s.B, s.A, s.k, s.t)
        agree += v.holds == raw
        holds += v.holds
        cx = rgs_to_string(v.counterexample.assignment) if v.counterexample else "-"
        lines.append(f"{i} k={s.k} t={s.t} {'holds' if v.holds else 'fails'} {cx}")
    lines.append(f"agree {agree}/{len(insts)}, holding {holds}")
    return agree == len(insts), "\n".join(lines)


def same_side(B: FiniteStructure) -> EquivRelation:
    base = enumerate_copies(POINT, B)
    eq = B.rel("eq")
    return EquivRelation.from_labels(base, [min(y for y in range(B.size) if (s[0], y) in eq) for s in base.subsets])


def criterion_3(workers: int):
    C, B = two_class(3, 3), two_class(1, 1)
    fail = kriz_reduce(C, B, POINT, t=1, workers=workers)
    ok = not fail.success
    ok &= fail.coloring is not None and all(
        len(colors_on_copy(fail.coloring, b, POINT)) >= 2 for b in enumerate_copies(B, C)
    )
    win = kriz_reduce(C, B, POINT, t=2, workers=workers)
    ok &= win.success and win.relation == same_side(B)
    ok &= check_E_ramsey(C, B, POINT, win.relation, workers=workers).holds
    return ok, fail.report() + "\n" + win.report()


def random_product_instances(seed: int, count: int, workers: int):
    """Instances where every relation with at most t blocks has a defeating coloring."""
    rng = random.Random(seed)
    found = []
    while len(found) < count:
        sig = rng.choice([GRAPH, DIGRAPH])
        A = random_structure(rng, sig, rng.randint(1, 2))
        B = random_structure(rng, sig, rng.randint(3, 4))
        C = random_structure(rng, sig, rng.randint(4, 7))
        t = rng.randint(1, 3)
        base = enumerate_copies(A, B)
        if len(base) <= t or len(base) > 6 or len(enumerate_copies(A, C)) > 10:
            continue
        if next(iter_embeddings(B, C), None) is None:
            continue
        rels = [EquivRelation(base, r) for r in iter_rgs(len(base), t)]
        wits = [find_defeating_coloring(C, B, A, E, workers=workers, k_max=4) for E in rels]
        if any(w is None for w in wits):
            continue
        found.append((C, B, A, t, rels, wits))
    return found


def criterion_4(workers: int):
    ok = True
    lines = []
    for i, (C, B, A, t, rels, wits) in enumerate(random_product_instances(seed=4, count=100, workers=workers)):
        chi = product_coloring(WitnessFamily(C, B, A, tuple(zip(rels, wits))))
        ok &= all(len(colors_on_copy(chi, b, A)) >= t + 1 for b in enumerate_copies(B, C))
        m = len(rels[0].base)
        for f in iter_embeddings(B, C):
            induced = induced_relation(Embedding(B, C, f), chi)
            for E in rels:
                ok &= any(E.related(x, y) and not induced.related(x, y) for x in range(m) for y in range(m))
        lines.append(f"{i} |C|={C.size} t={t} relations={len(rels)} product={rgs_to_string(chi.assignment)}")
    return ok, "\n".join(lines)


def criterion_5(workers: int):
    F = two_class(3, 3, interleaved=True)
    lc = LevelChain.from_enumeration(F, range(6), [2, 4, 6], POINT, two_class(5, 5))
    tree = build_tree(lc, t=2, k=2, workers=workers)
    branch = find_branch(tree)
    ok = branch is not None and len(branch) == 3 and verify_branch(lc, branch)

    def broken(level, B_m, E):
        return E.num_blocks == 1 if level == 0 else E.num_blocks == 2 and E.labels[:2] == (0, 1)

    bad_tree = build_tree(lc, t=2, admissibility=broken)
    ok &= find_branch(bad_tree) is None
    return ok, branch_report(tree, branch) + "\n" + branch_report(bad_tree, None)


def side_expansion(order=None, workers: int = 1):
    F = two_class(3, 3, interleaved=True)
    lc = LevelChain.from_enumeration(F, range(6), [2, 4, 6], POINT, two_class(5, 5))
    top = find_branch(build_tree(lc, t=2, k=2, workers=workers))[-1]
    return expand_by_partition(F, POINT, top, order=order, t=2)


def criterion_6(workers: int):
    K = generate_fragment(FamilySpec("two_class_equivalence", (3, 3)))
    K_star = ClassFragment.age(side_expansion(workers=workers))
    lb = check_lower_bound(POINT, two_class(1, 1), K_star, 2)
    pre = check_precompactness(K, K_star)
    ep = check_expansion_property(K, K_star)
    rs = check_reasonability(K, K_star)
    rg = check_rigidity(ClassFragment.age(side_expansion(order="lex", workers=workers)))
    point = K.index_of(POINT)
    ok = lb.holds and pre.rows[point][1] == 2
    ok &= K.members[ep.witness(point)] == two_class(1, 1)
    ok &= rs.holds and rg.holds
    return ok, "\n".join(r.report() for r in (lb, pre, ep, rs, rg))


def criterion_7(workers: int):
    K_star = generate_fragment(FamilySpec("pure_sets", (6,), ordered=True))
    idx = {m.size: i for i, m in enumerate(K_star.members)}
    res = check_ramsey_property(K_star, host_limit=6, k=2, pairs=[(idx[1], idx[2]), (idx[2], idx[3])], workers=workers)
    hosts = [None if r.host is None else K_star.members[r.host].size for r in res.rows]
    return hosts == [3, 6], res.report()


def criterion_8(workers: int):
    ok = True
    lines = []
    for i, s in enumerate(random_arrow_instances(seed=8, count=20)):
        exp = export_cnf(s)
        model = solve(exp.cnf)
        v = check_arrow(s, workers=workers)
        ok &= (model is None) == v.holds
        if model is not None:
            ok &= check_model(exp.cnf, model)
            chi = decode_model(model, exp.legend, enumerate_copies(s.A, s.C))
            ok &= all(len(colors_on_copy(chi, b, s.A)) > s.t for b in enumerate_copies(s.B, s.C))
        lines.append(f"{i} vars={exp.cnf.num_vars} clauses={len(exp.cnf.clauses)} {'UNSAT' if model is None else 'SAT'}")
    return ok, "\n".join(lines)


CRITERIA = {
    1: (criterion_1, 5, "arrow correctness on short chains"),
    2: (criterion_2, 120, "partition search equals raw enumeration"),
    3: (criterion_3, 30, "reduction on the two-class family"),
    4: (criterion_4, 120, "product-coloring guarantee"),
    5: (criterion_5, 30, "coherent branch and broken-oracle failure"),
    6: (criterion_6, 60, "expansion pipeline"),
    7: (criterion_7, 5, "Ramsey property of ordered sets"),
    8: (criterion_8, 120, "CNF cross-validation"),
}

_REPORTS: dict[int, str] = {}


@pytest.mark.parametrize("number", sorted(CRITERIA))
def test_criterion(number):
    fn, budget, label = CRITERIA[number]
    start = time.perf_counter()
    ok, report = fn(1)
    elapsed = time.perf_counter() - start
    _REPORTS[number] = report
    passed = ok and elapsed < budget
    record(f"criterion {number} ({label}): {'PASS' if passed else 'FAIL'} in {elapsed:.2f}s (budget {budget}s)")
    assert ok, report
    assert elapsed < budget


def test_criterion_9_determinism():
    mismatched = []
    start = time.perf_counter()
    for number, (fn, _, _) in sorted(CRITERIA.items()):
        one = _REPORTS.get(number) or fn(1)[1]
        eight = fn(8)[1]
        if one != eight:
            mismatched.append(number)
    elapsed = time.perf_counter() - start
    record(
        f"criterion 9 (byte-identical reports at 1 and 8 workers): {'PASS' if not mismatched else 'FAIL'} in {elapsed:.2f}s"
        + (f" mismatched {mismatched}" if mismatched else "")
    )
    assert not mismatched
