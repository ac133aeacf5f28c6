"""Acceptance gate: one test per criterion, each reporting a PASS/FAIL line.

Every check is exact; the randomized suites are seeded and deterministic.
"""

import random
from math import lcm

import pytest

from ultragraph import (
    BinaryWord, GraphBuilder, GraphVertex, UPSet, condition_k,
    edge_split_graph, enumerate_admissible_pairs, enumerate_first_returns,
    first_return_count, quotient_graph, verify_ideal_correspondence,
    verify_path_bijection, verify_set_identities,
)
from ultragraph.cli import make_builder
from ultragraph.dsl import example_fig1
from ultragraph.fuzz import fuzz_instances
from ultragraph.model import FiniteUltragraph


@pytest.fixture(scope="module")
def builder() -> GraphBuilder:
    return make_builder(example_fig1(), 64)


def report(capsys, label: str, ok: bool, detail: str = ""):
    with capsys.disabled():
        tail = f" {detail}" if detail else ""
        print(f"\n{'PASS' if ok else 'FAIL'} [{label}]{tail}")
    assert ok, f"{label}: {detail}"


def test_criterion_1_gamma0_prefix(builder, capsys):
    got = {str(w) for w in builder.gamma0_words(29)}
    want = {"0" * z + "1" for z in (0, 2, 4, 8, 16, 20, 28)}
    report(capsys, "1 gamma0 prefix", got == want,
           f"{len(got)} spine words up to length 29")


def test_criterion_2_w0_prefix(builder, capsys):
    got = []
    v = 0
    while len(got) < 10:
        v += 1
        if not builder.classify(v).in_w_plus:
            got.append(v)
    want = [1, 2, 7, 11, 13, 14, 17, 19, 22, 23]
    report(capsys, "2 w0 prefix", got == want, f"ten smallest: {got}")


def test_criterion_3_sigma_table(builder, capsys):
    want = {3: "100", 4: "001", 5: "00001", 6: "10000", 8: "001",
            9: "10000", 10: "0000100", 12: "101", 15: "1000100",
            16: "0010", 18: "100000100", 20: "00101"}
    got = {}
    for v in range(1, 21):
        word = builder.sigma(v)
        if word is not None:
            got[v] = str(word)
    empties = sorted(set(range(1, 21)) - set(got))
    ok = got == want and empties == [1, 2, 7, 11, 13, 14, 17, 19]
    report(capsys, "3 sigma table", ok,
           f"{len(got)} nonempty values, {len(empties)} empty")


def test_criterion_4_x_sets(builder, capsys):
    want = {
        1: ([], ["1"]),
        2: ([1], []),
        3: ([], ["001", "101"]),
        4: ([1, 2, 3], []),
        5: ([], ["00001", "00101", "10001", "10101"]),
        6: ([1, 2, 3, 5, 6, 7, 9], []),
        7: ([6, 12, 24], ["1000001", "1000101", "1010001", "1010101"]),
        8: ([1, 2, 3, 5, 6, 7, 9, 10, 11, 13, 14, 15], []),
    }
    ok = True
    for n, (wv, ww) in want.items():
        verts, words = builder.x_set(n)
        if verts != wv or [str(w) for w in words] != ww:
            ok = False
            break
    report(capsys, "4 x-sets", ok, "X(1)..X(8) exact")


def _delta_characterization(bits: tuple) -> bool:
    """Independent membership test for the worked instance's words:
    some letter is 1, every even position is 0, and for every 0 at an odd
    position 2k-1 the number k+2 does not divide the lcm of l+2 over the
    1-positions 2l-1."""
    n = len(bits)
    if not any(bits):
        return False
    if any(bits[i - 1] for i in range(2, n + 1, 2)):
        return False
    ones = [l for l in range(1, (n + 1) // 2 + 1)
            if 2 * l - 1 <= n and bits[2 * l - 2]]
    bound = lcm(*(l + 2 for l in ones))
    for k in range(1, (n + 1) // 2 + 1):
        if 2 * k - 1 <= n and not bits[2 * k - 2]:
            if bound % (k + 2) == 0:
                return False
    return True


def test_criterion_5_delta_characterization(builder, capsys):
    checked = 0
    ok = True
    for n in range(1, 8):
        for mask in range(1, 1 << n):
            bits = tuple(mask >> i & 1 for i in range(n))
            word = BinaryWord(bits)
            if builder.in_delta(word) != _delta_characterization(bits):
                ok = False
                break
            checked += 1
        if not ok:
            break
    report(capsys, "5 delta characterization", ok,
           f"{checked} words of length <= 7")


def test_criterion_6_identity_suite(builder, capsys):
    rep = verify_set_identities(builder, depth=7, edge_horizon=7, window=120)
    failures = [] if rep.ok else [c.name for c in rep.failures()]
    for graph in fuzz_instances(seed=1106, count=200):
        b = GraphBuilder(graph)
        r = verify_set_identities(b, depth=graph.edge_count,
                                  edge_horizon=graph.edge_count,
                                  window=graph.universe_size)
        if not r.ok:
            failures.extend(c.name for c in r.failures())
            break
    report(capsys, "6 identity suite", not failures,
           "example at depth 7 + 200 random instances"
           + (f"; failing: {failures}" if failures else ""))


def test_criterion_7_path_bijection(capsys):
    bad = 0
    pairs = 0
    for graph in fuzz_instances(seed=1107, count=200):
        b = GraphBuilder(graph)
        built = b.build_e(graph.edge_count, graph.universe_size,
                          graph.edge_count)
        for v in range(1, graph.universe_size + 1):
            for w in range(1, graph.universe_size + 1):
                rep = verify_path_bijection(b, built, v, w, 3)
                pairs += 1
                if not rep.ok:
                    bad += 1
    report(capsys, "7 path bijection", bad == 0,
           f"{pairs} vertex pairs over 200 instances, eps<=3")


def test_criterion_8_condition_k_equivalence(capsys):
    bad = []
    for i, graph in enumerate(fuzz_instances(seed=1107, count=200)):
        b = GraphBuilder(graph)
        built = b.build_e(graph.edge_count, graph.universe_size,
                          graph.edge_count)
        bound = len(built.edges) + 1
        for v in range(1, graph.universe_size + 1):
            analysed = first_return_count(graph, v)
            brute = len(enumerate_first_returns(graph, v, bound))
            kinds = ("zero", "one", "at_least_two")
            if analysed.kind != kinds[min(brute, 2)]:
                bad.append(f"instance {i} v{v} count")
        kg, ke = condition_k(graph), condition_k(built)
        if kg.kind != ke.kind or kg.kind == "unknown":
            bad.append(f"instance {i} verdict {kg!r}/{ke!r}")
    report(capsys, "8 condition-k equivalence", not bad,
           "200 instances, both sides decided equal"
           + (f"; {bad[:3]}" if bad else ""))


def test_criterion_9_ideal_correspondence(capsys):
    two = FiniteUltragraph(2, [(1, {2})])
    rep = verify_ideal_correspondence(two)
    bad = []
    if not (rep.ok and rep.ultragraph_pairs == 2 and rep.graph_pairs == 2
            and rep.surjective):
        bad.append("two-vertex instance")
    for i, graph in enumerate(fuzz_instances(seed=1109, count=100,
                                             max_vertices=4, max_edges=3)):
        r = verify_ideal_correspondence(graph)
        if not r.ok:
            bad.append(f"instance {i}")
    report(capsys, "9 ideal correspondence", not bad,
           "100 instances + two-vertex instance (2 <-> 2 pairs)"
           + (f"; {bad[:3]}" if bad else ""))


def test_criterion_10_degeneracy(capsys):
    bad = []
    for i, graph in enumerate(fuzz_instances(seed=1110, count=50)):
        b = GraphBuilder(graph)
        d = graph.edge_count
        built = b.build_e(d, graph.universe_size, graph.edge_count)
        split = edge_split_graph(graph, d, graph.universe_size,
                                 graph.edge_count)
        same = (set(built.vertices) == set(split.vertices)
                and set(built.edges) == set(split.edges)
                and built.source == split.source
                and built.target == split.target)
        if not same:
            bad.append(f"instance {i} split")
        if quotient_graph(built, frozenset()) != built:
            bad.append(f"instance {i} quotient")
    report(capsys, "10 degeneracy", not bad,
           "50 all-finite-range instances: edge-split equality and "
           "trivial quotient" + (f"; {bad[:3]}" if bad else ""))


def _random_expr(rng: random.Random, depth: int):
    if depth == 0 or rng.random() < 0.4:
        t = rng.randint(0, 6)
        transient = tuple(m for m in range(1, t + 1) if rng.random() < 0.5)
        p = rng.randint(1, 8)
        residues = tuple(r for r in range(p) if rng.random() < 0.4)
        return ("leaf", t, transient, p, residues)
    op = rng.choice(("union", "intersect", "difference", "complement"))
    if op == "complement":
        return (op, _random_expr(rng, depth - 1))
    return (op, _random_expr(rng, depth - 1), _random_expr(rng, depth - 1))


def _expr_upset(expr) -> UPSet:
    if expr[0] == "leaf":
        _, t, transient, p, residues = expr
        return UPSet.from_data(t, transient, p, residues)
    if expr[0] == "complement":
        return _expr_upset(expr[1]).complement()
    return getattr(_expr_upset(expr[1]), expr[0])(_expr_upset(expr[2]))


def _expr_member(expr, m: int) -> bool:
    """Independent pointwise model: no canonical forms, no arrays."""
    if expr[0] == "leaf":
        _, t, transient, p, residues = expr
        return m in transient if m <= t else m % p in residues
    if expr[0] == "complement":
        return not _expr_member(expr[1], m)
    a, b = _expr_member(expr[1], m), _expr_member(expr[2], m)
    return {"union": a or b, "intersect": a and b,
            "difference": a and not b}[expr[0]]


def _expr_bound(expr) -> tuple[int, int]:
    """(lcm of leaf periods, sum of leaf thresholds)."""
    if expr[0] == "leaf":
        return expr[3], expr[1]
    parts = [_expr_bound(sub) for sub in expr[1:]]
    return (lcm(*(p for p, _ in parts)), sum(t for _, t in parts))


def test_criterion_11_upset_oracle(capsys):
    rng = random.Random(1111)
    bad = 0
    for _ in range(1000):
        expr = _random_expr(rng, rng.randint(1, 4))
        ups = _expr_upset(expr)
        period, threshold = _expr_bound(expr)
        bound = 4 * period + threshold
        want = {m for m in range(1, bound + 1) if _expr_member(expr, m)}
        got = set(ups.enumerate(bound))
        if got != want:
            bad += 1
    report(capsys, "11 upset oracle", bad == 0,
           "1000 random expressions vs the pointwise bitmask model")
