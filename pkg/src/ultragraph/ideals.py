"""Ideal combinatorics of an ultragraph and its constructed graph.

Admissible pairs of a finite ultragraph, saturated hereditary pairs of the
constructed graph, the theta translation between them, quotient graphs, and
the {0,1}-matrix front-end.
"""

from dataclasses import dataclass, field
from itertools import combinations
from math import lcm

from .builder import GraphBuilder
from .dsl import (ConcreteEdge, EmptyRangeError, FamilyClause,
                  SpecUltragraph, UltragraphSpec, parse_affine,
                  parse_range_expr)
from .model import (INFINITE_EMITTER, BuiltGraph, FiniteUltragraph,
                    GraphVertex, TildeEdge, TildeVertex, Ultragraph,
                    WordVertex, g0_rg_membership, vertex_sort_key)
from .upset import UPSet


class InfiniteUniverse(ValueError):
    """The requested computation needs an explicit, finite vertex set."""


class ZeroRow(ValueError):
    """A matrix row with no ones yields an empty edge range."""


# ---------------------------------------------------------------------------
# the set algebra on the vertex set


@dataclass(frozen=True)
class SetAlgebraG0:
    """The smallest algebra of vertex sets containing all singletons and all
    edge ranges; closed under union, intersection and relative complement."""

    universe_size: int
    members: tuple  # sorted frozensets
    atoms: tuple    # minimal nonempty members (pairwise disjoint)

    def __contains__(self, subset) -> bool:
        return frozenset(subset) in self._member_set

    @property
    def _member_set(self):
        cached = getattr(self, "_cache", None)
        if cached is None:
            cached = frozenset(self.members)
            object.__setattr__(self, "_cache", cached)
        return cached


def _sorted_sets(sets):
    return tuple(sorted(sets, key=lambda s: (len(s), sorted(s))))


def g0_algebra(graph: Ultragraph) -> SetAlgebraG0:
    """Closure fixpoint of the singletons and edge ranges under the three
    set operations.  Needs a finite graph."""
    if graph.universe_size is None:
        raise InfiniteUniverse("the set algebra needs a finite vertex set")
    if graph.edge_count is None:
        raise InfiniteUniverse("the set algebra needs a finite edge list")
    members = {frozenset()}
    members.update(frozenset({v}) for v in range(1, graph.universe_size + 1))
    for n in range(1, graph.edge_count + 1):
        members.add(frozenset(graph.erange(n).members()))
    changed = True
    while changed:
        changed = False
        current = list(members)
        for a in current:
            for b in current:
                for c in (a | b, a & b, a - b):
                    if c not in members:
                        members.add(c)
                        changed = True
    ordered = _sorted_sets(members)
    nonempty = [m for m in ordered if m]
    atoms = tuple(m for m in nonempty
                  if not any(o < m for o in nonempty))
    return SetAlgebraG0(graph.universe_size, ordered, atoms)


@dataclass(frozen=True)
class IdealG0:
    """An ideal of the set algebra: all members contained in a fixed top set.

    Every ideal of a finite algebra has this form, since the union of all
    its members is again a member.
    """

    algebra: SetAlgebraG0
    top: frozenset

    def __contains__(self, subset) -> bool:
        s = frozenset(subset)
        return s <= self.top and s in self.algebra

    def members(self) -> list[frozenset]:
        return [m for m in self.algebra.members if m <= self.top]

    def __repr__(self):
        return f"ideal(top={{{','.join(map(str, sorted(self.top)))}}})"


@dataclass(frozen=True)
class AdmissiblePair:
    """(ideal, breaking vertices) for an ultragraph."""

    h: IdealG0
    v: frozenset

    def __repr__(self):
        return f"({self.h!r}, {{{','.join(map(str, sorted(self.v)))}}})"


@dataclass(frozen=True)
class GraphIdealPair:
    """(saturated hereditary vertex set, breaking vertices) for a graph."""

    h: frozenset
    b: frozenset


# ---------------------------------------------------------------------------
# admissibility on the ultragraph side


def is_hereditary(graph: Ultragraph, ideal: IdealG0) -> bool:
    """Every edge emitted from inside the ideal keeps its range inside."""
    for n in range(1, graph.edge_count + 1):
        if {graph.source(n)} in ideal:
            if frozenset(graph.erange(n).members()) not in ideal:
                return False
    return True


def is_saturated(graph: Ultragraph, ideal: IdealG0) -> bool:
    """Regular vertices all of whose edge ranges lie inside belong inside."""
    for v in range(1, graph.universe_size + 1):
        if not g0_rg_membership(graph, v):
            continue
        out = graph.out_edges(v)
        if all(frozenset(graph.erange(n).members()) in ideal for n in out):
            if {v} not in ideal:
                return False
    return True


def fin_inf_vertices(graph: Ultragraph, ideal: IdealG0) -> frozenset:
    """Vertices emitting infinitely many edges of which a finite, nonzero
    number have range outside the ideal.  Empty for finite graphs."""
    for v in range(1, graph.universe_size + 1):
        if graph.out_edges(v) == INFINITE_EMITTER:
            raise InfiniteUniverse(
                "fin-infinity data needs a finite out-edge list")
    # a finite emitter never has infinitely many edges, so the defining
    # condition is unsatisfiable here
    return frozenset()


def check_admissible(graph: Ultragraph, pair: AdmissiblePair) -> list[str]:
    """Direct iteration over all four defining conditions; [] when valid."""
    problems = []
    members = pair.h.members()
    mset = set(members)
    for a in members:
        for b in members:
            if a | b not in mset:
                problems.append(f"not union-closed at {sorted(a)},{sorted(b)}")
    for a in members:
        for m in pair.h.algebra.members:
            if m <= a and m not in mset:
                problems.append(f"not downward-closed at {sorted(m)}")
    if not is_hereditary(graph, pair.h):
        problems.append("not hereditary")
    if not is_saturated(graph, pair.h):
        problems.append("not saturated")
    if not pair.v <= fin_inf_vertices(graph, pair.h):
        problems.append("breaking vertices outside fin-infinity set")
    return problems


def enumerate_admissible_pairs(graph: Ultragraph) -> list[AdmissiblePair]:
    """All admissible pairs of a finite ultragraph, invariant-checked.

    Ideals correspond to subsets of the algebra's atoms (the top set is the
    union of the chosen atoms), so enumeration walks the atom subsets.
    """
    alg = g0_algebra(graph)
    pairs = []
    for size in range(len(alg.atoms) + 1):
        for combo in combinations(alg.atoms, size):
            top = frozenset().union(*combo) if combo else frozenset()
            ideal = IdealG0(alg, top)
            if not (is_hereditary(graph, ideal)
                    and is_saturated(graph, ideal)):
                continue
            fin = fin_inf_vertices(graph, ideal)
            for vsize in range(len(fin) + 1):
                for vs in combinations(sorted(fin), vsize):
                    pair = AdmissiblePair(ideal, frozenset(vs))
                    bad = check_admissible(graph, pair)
                    if bad:
                        raise AssertionError(
                            f"enumerated pair fails invariants: {bad}")
                    pairs.append(pair)
    seen = set()
    unique = []
    for p in pairs:
        key = (p.h.top, p.v)
        if key not in seen:
            seen.add(key)
            unique.append(p)
    return unique


# ---------------------------------------------------------------------------
# saturated hereditary pairs on the graph side


def graph_is_hereditary(built: BuiltGraph, h: frozenset) -> bool:
    return all(built.target[e] in h
               for e in built.edges if built.source[e] in h)


def graph_is_saturated(built: BuiltGraph, h: frozenset) -> bool:
    for x in built.vertices:
        if built.is_frontier(x) or x in h:
            continue
        out = built.out_edges(x)
        if out and all(built.target[e] in h for e in out):
            return False
    return True


def graph_fin_inf(built: BuiltGraph, h: frozenset) -> frozenset:
    """Infinite-emitter data of the graph; empty when every out-edge set is
    complete (no frontier), which is the only case enumerated exactly."""
    if built.frontier:
        raise ValueError("fin-infinity data needs a frontier-free graph")
    return frozenset()


def enumerate_graph_pairs(built: BuiltGraph) -> list[GraphIdealPair]:
    """All saturated hereditary pairs of a finite, frontier-free graph."""
    if built.frontier:
        raise ValueError("exact enumeration needs a frontier-free graph")
    verts = sorted(built.vertices, key=vertex_sort_key)
    if len(verts) > 20:
        raise ValueError(f"vertex count {len(verts)} too large to enumerate")
    pairs = []
    for mask in range(1 << len(verts)):
        h = frozenset(v for i, v in enumerate(verts) if mask >> i & 1)
        if graph_is_hereditary(built, h) and graph_is_saturated(built, h):
            pairs.append(GraphIdealPair(h, graph_fin_inf(built, h)))
    return pairs


# ---------------------------------------------------------------------------
# theta: translating an ultragraph ideal to a graph vertex set


def theta(builder: GraphBuilder, ideal: IdealG0, word_depth: int) -> frozenset:
    """{v : {v} in the ideal} together with the words whose surviving range
    lies in the ideal, cut off at the word depth (exact for finite graphs)."""
    graph = builder.graph
    if graph.universe_size is None:
        raise InfiniteUniverse("theta over an ideal needs a finite vertex set")
    out = {GraphVertex(v) for v in range(1, graph.universe_size + 1)
           if {v} in ideal}
    for w in builder.delta_words(word_depth):
        surviving = frozenset(builder.r_prime(w).members())
        if surviving in ideal:
            out.add(WordVertex(w))
    return frozenset(out)


def check_range_xset_equivalence(builder: GraphBuilder, top: UPSet,
                                 word_depth: int, edge_horizon: int) -> list[str]:
    """For each edge: range inside the ideal iff its target set lies inside
    the translated vertex set.  The ideal is given by its top set, so this
    also applies to schematic instances at a truncation."""
    problems = []
    for n in range(1, edge_horizon + 1):
        range_inside = builder.graph.erange(n).difference(top).is_empty()
        verts, words = builder.x_set(n)
        target_inside = all(top.contains(v) for v in verts) and all(
            builder.r_prime(w).difference(top).is_empty() for w in words
            if len(w) <= word_depth)
        if range_inside != target_inside:
            problems.append(
                f"edge {n}: range inside={range_inside} "
                f"but target set inside={target_inside}")
    return problems


# ---------------------------------------------------------------------------
# the correspondence report


@dataclass
class IdealCorrespondenceReport:
    ultragraph_pairs: int
    graph_pairs: int
    injective: bool
    surjective: bool
    problems: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.problems and self.injective

    def render(self) -> str:
        lines = [
            f"{'PASS' if not self.problems else 'FAIL'} pair-validity "
            f"{self.ultragraph_pairs} pairs -> {self.graph_pairs} graph pairs",
            f"{'PASS' if self.injective else 'FAIL'} injectivity",
            f"surjective: {'yes' if self.surjective else 'no'}",
        ]
        lines.extend(f"  {p}" for p in self.problems)
        return "\n".join(lines)


def verify_ideal_correspondence(graph: Ultragraph) -> IdealCorrespondenceReport:
    """Map every admissible pair through theta and validate the image."""
    if graph.universe_size is None or graph.edge_count is None:
        raise InfiniteUniverse("the correspondence is checked exactly on "
                               "finite instances")
    builder = GraphBuilder(graph)
    depth = graph.edge_count
    built = builder.build_e(depth, graph.universe_size, graph.edge_count)
    if built.frontier:
        raise AssertionError("finite instance produced a frontier")
    g_pairs = enumerate_admissible_pairs(graph)
    e_pairs = enumerate_graph_pairs(built)
    e_keys = {(p.h, p.b) for p in e_pairs}
    problems = []
    images = []
    for pair in g_pairs:
        h = theta(builder, pair.h, depth)
        if not graph_is_hereditary(built, h):
            problems.append(f"theta of {pair!r} is not hereditary")
        if not graph_is_saturated(built, h):
            problems.append(f"theta of {pair!r} is not saturated")
        fin_g = frozenset(GraphVertex(v)
                          for v in fin_inf_vertices(graph, pair.h))
        fin_e = graph_fin_inf(built, h)
        if fin_g != fin_e:
            problems.append(f"fin-infinity mismatch at {pair!r}")
        image = (h, frozenset(GraphVertex(v) for v in pair.v))
        if image not in e_keys:
            problems.append(f"image of {pair!r} is not a graph pair")
        images.append(image)
    injective = len(set(images)) == len(images)
    surjective = set(images) == e_keys
    return IdealCorrespondenceReport(
        ultragraph_pairs=len(g_pairs), graph_pairs=len(e_pairs),
        injective=injective, surjective=surjective, problems=problems)


# ---------------------------------------------------------------------------
# quotient graphs


def quotient_graph(built: BuiltGraph, theta_set,
                   fin_inf=frozenset(), v_set=frozenset()) -> BuiltGraph:
    """The graph left after deleting the translated vertex set, with a tilde
    copy receiving the edges into each unbroken fin-infinity vertex.

    theta_set: graph vertices deleted (the theta image of the ideal).
    fin_inf: the ideal's fin-infinity vertices, as graph vertices.
    v_set: the breaking vertices (kept whole; no tilde copy).
    """
    th = frozenset(theta_set)
    tilded = frozenset(fin_inf) - frozenset(v_set)
    for x in th | tilded:
        if not built.has_vertex(x):
            raise ValueError(f"{x!r} is not covered by this graph")
    if tilded & th:
        raise ValueError("fin-infinity vertices must survive the quotient")
    vertices = [x for x in built.vertices if x not in th]
    vertices += [TildeVertex(x) for x in sorted(tilded, key=vertex_sort_key)]
    edges = []
    source = {}
    target = {}
    for e in built.edges:
        tgt = built.target[e]
        if tgt in th:
            continue
        src = built.source[e]
        if src in th:
            raise ValueError(
                f"deleted set is not hereditary: {e!r} leaves it")
        edges.append(e)
        source[e] = src
        target[e] = tgt
        if tgt in tilded:
            te = TildeEdge(e)
            edges.append(te)
            source[te] = src
            target[te] = TildeVertex(tgt)
    frontier = {x for x in built.frontier if x not in th}
    return BuiltGraph(vertices=vertices, edges=edges,
                      source=source, target=target,
                      word_depth=built.word_depth,
                      vertex_horizon=built.vertex_horizon,
                      edge_horizon=built.edge_horizon, frontier=frontier)


# ---------------------------------------------------------------------------
# {0,1}-matrix front-end


def matrix_to_ultragraph(rows) -> FiniteUltragraph:
    """Square 0/1 matrix to the ultragraph having it as edge matrix:
    one edge per row, emitted by the row's vertex, ranging over the ones."""
    rows = [list(r) for r in rows]
    n = len(rows)
    edges = []
    for i, row in enumerate(rows, start=1):
        if len(row) != n:
            raise ValueError(f"row {i} has length {len(row)}, expected {n}")
        if any(a not in (0, 1) for a in row):
            raise ValueError(f"row {i} has entries outside 0/1")
        members = {j for j, a in enumerate(row, start=1) if a}
        if not members:
            raise ZeroRow(f"row {i} is all zeros")
        edges.append((i, UPSet.from_members(members)))
    return FiniteUltragraph(n, edges)


def parse_matrix_file(text: str) -> Ultragraph:
    """Matrix input: dense 0/1 rows, or schematic ``row <index>: <range>``
    lines with ``i`` as the row parameter."""
    lines = []
    for raw in text.splitlines():
        line = raw.split("#", 1)[0].strip()
        if line:
            lines.append(line)
    if not lines:
        raise ValueError("empty matrix input")
    if lines[0].startswith("row"):
        return _parse_schematic_rows(lines)
    rows = []
    for line in lines:
        tokens = line.split() if " " in line else list(line)
        rows.append([int(t) for t in tokens])
    return matrix_to_ultragraph(rows)


def _parse_schematic_rows(lines) -> SpecUltragraph:
    clauses = []
    for line in lines:
        if not line.startswith("row") or ":" not in line:
            raise ValueError(f"malformed schematic line: {line!r}")
        head, rng_text = line[3:].split(":", 1)
        head = head.strip()
        if head.isdigit():
            index = int(head)
            expr = parse_range_expr(rng_text.strip())
            clauses.append(ConcreteEdge(index, index, expr))
        else:
            poly = parse_affine(head, "i")
            expr = parse_range_expr(rng_text.strip(), "i")
            clauses.append(FamilyClause("i", poly, poly, expr))
    spec = UltragraphSpec(name="matrix", universe_size=None,
                          winf_expr=None, clauses=tuple(clauses))
    spec.validate_coverage()
    graph = SpecUltragraph(spec)
    fams = [c for c in clauses if isinstance(c, FamilyClause)]
    concrete = [c.index for c in clauses if isinstance(c, ConcreteEdge)]
    if fams:
        period = lcm(*(c.index.c1 for c in fams))
        horizon = max([c.index(1) for c in fams] + concrete + [1]) + 2 * period
    else:
        horizon = max(concrete, default=0)
    for n in range(1, horizon + 1):
        try:
            graph.erange(n)
        except EmptyRangeError as exc:
            raise ZeroRow(f"row {n} yields an empty range") from exc
    return graph
