"""Seeded random finite instances and the randomized property harness.

Finite ultragraphs make every statement in scope exactly decidable, so the
harness checks each instance end to end: identity suite, regular-vertex
profile, path bijection, first-return counting against brute enumeration,
the two-sided Condition (K) verdicts, degeneracy against the edge-split
construction, quotient identity, and the ideal correspondence.
"""

import random
from dataclasses import dataclass, field

from .builder import GraphBuilder, edge_split_graph, verify_set_identities
from .ideals import quotient_graph, verify_ideal_correspondence
from .model import FiniteUltragraph, GraphVertex
from .paths import (condition_k, enumerate_first_returns, first_return_count,
                    verify_path_bijection)
from .upset import UPSet


def random_finite_ultragraph(rng: random.Random, max_vertices: int = 5,
                             max_edges: int = 4) -> FiniteUltragraph:
    """One random instance: sources uniform, ranges uniform over nonempty
    subsets of the vertex set."""
    n = rng.randint(1, max_vertices)
    k = rng.randint(1, max_edges)
    edges = []
    for _ in range(k):
        src = rng.randint(1, n)
        mask = rng.randrange(1, 1 << n)
        members = [j + 1 for j in range(n) if mask >> j & 1]
        edges.append((src, UPSet.from_members(members)))
    return FiniteUltragraph(n, edges)


def fuzz_instances(seed: int, count: int, max_vertices: int = 5,
                   max_edges: int = 4) -> list[FiniteUltragraph]:
    """Deterministic instance stream for a seed."""
    rng = random.Random(seed)
    return [random_finite_ultragraph(rng, max_vertices, max_edges)
            for _ in range(count)]


def describe_instance(graph: FiniteUltragraph) -> str:
    parts = [f"{graph.universe_size} vertices"]
    for n in range(1, graph.edge_count + 1):
        members = ",".join(map(str, sorted(graph.erange(n).members())))
        parts.append(f"e{n}: v{graph.source(n)} -> {{{members}}}")
    return "; ".join(parts)


@dataclass
class InstanceResult:
    index: int
    description: str
    failures: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.failures


@dataclass
class FuzzReport:
    seed: int
    results: list

    @property
    def ok(self) -> bool:
        return all(r.ok for r in self.results)

    def render(self) -> str:
        lines = []
        for r in sorted(self.results, key=lambda r: r.index):
            status = "PASS" if r.ok else "FAIL"
            lines.append(f"{status} instance {r.index} ({r.description})")
            lines.extend(f"  {f}" for f in r.failures)
        failed = sum(1 for r in self.results if not r.ok)
        lines.append(f"{'PASS' if not failed else 'FAIL'} fuzz "
                     f"seed={self.seed}: {len(self.results) - failed}/"
                     f"{len(self.results)} instances clean")
        return "\n".join(lines)


def check_instance(graph: FiniteUltragraph, max_eps: int = 3,
                   check_ideals: bool = True) -> list[str]:
    """Every decidable property of one finite instance; [] when clean."""
    failures = []
    builder = GraphBuilder(graph)
    depth = graph.edge_count
    built = builder.build_e(depth, graph.universe_size, graph.edge_count)
    if built.frontier:
        return [f"unexpected frontier: {sorted(map(repr, built.frontier))}"]

    report = verify_set_identities(builder, depth=depth,
                                   edge_horizon=graph.edge_count,
                                   window=graph.universe_size)
    for c in report.failures():
        failures.append(f"identity {c.name}: {c.detail}")

    for problem in builder.check_regular(built):
        failures.append(f"regular profile: {problem}")

    for v in range(1, graph.universe_size + 1):
        for w in range(1, graph.universe_size + 1):
            rep = verify_path_bijection(builder, built, v, w, max_eps)
            if not rep.ok:
                failures.append(rep.render())

    # first-return analysis vs brute enumeration, and the two-sided verdicts
    bound = len(built.edges) + 1
    for v in range(1, graph.universe_size + 1):
        analysed = first_return_count(graph, v)
        brute = enumerate_first_returns(graph, v, bound)
        brute_kind = ("zero", "one", "at_least_two")[min(len(brute), 2)]
        if analysed.kind != brute_kind:
            failures.append(
                f"first-return mismatch at v{v}: {analysed!r} vs "
                f"{len(brute)} enumerated")
        e_side = first_return_count(built, GraphVertex(v))
        if e_side.kind != analysed.kind:
            failures.append(
                f"first-return sides disagree at v{v}: "
                f"{analysed!r} vs {e_side!r}")
    kg = condition_k(graph)
    ke = condition_k(built)
    if kg.kind != ke.kind:
        failures.append(f"Condition (K) disagrees: {kg!r} vs {ke!r}")
    if kg.kind == "unknown":
        failures.append("Condition (K) undecided on a finite instance")

    # degeneracy: the built graph is exactly the edge-split graph here
    split = edge_split_graph(graph, depth, graph.universe_size,
                             graph.edge_count)
    if (sorted(built.vertices, key=repr) != sorted(split.vertices, key=repr)
            or sorted(built.edges, key=repr) != sorted(split.edges, key=repr)
            or built.source != split.source or built.target != split.target):
        failures.append("built graph differs from the edge-split graph")
    if quotient_graph(built, frozenset()) != built:
        failures.append("trivial quotient is not the identity")

    if check_ideals:
        rep = verify_ideal_correspondence(graph)
        if not rep.ok:
            failures.append("ideal correspondence: " + rep.render())

    return failures


def run_fuzz(seed: int, count: int, max_vertices: int = 5,
             max_edges: int = 4, max_eps: int = 3) -> FuzzReport:
    """The full harness over a deterministic instance stream.

    Ideal enumeration is exponential in the graph size, so it is applied
    only to instances within the small-profile bound (4 vertices, 3 edges).
    """
    results = []
    for i, graph in enumerate(fuzz_instances(seed, count,
                                             max_vertices, max_edges)):
        small = graph.universe_size <= 4 and graph.edge_count <= 3
        failures = check_instance(graph, max_eps=max_eps, check_ideals=small)
        results.append(InstanceResult(i, describe_instance(graph), failures))
    return FuzzReport(seed, results)
