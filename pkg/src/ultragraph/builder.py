"""Construction of the directed graph E associated with an ultragraph.

Given an ultragraph with its fixed edge listing, this module computes the
word tables Delta_n (words whose range sets are infinite), classifies each
vertex into W0 / W+ / Winf, evaluates the depth function sigma, enumerates
the finite target sets X(n), and assembles the graph E whose vertices are
the original vertices together with the Delta words.

Everything here is exact: range sets are UPSets, so "is this set infinite"
is a decidable query, and the identity checks at the bottom compare sets
structurally rather than by sampling.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

from .model import (
    INFINITE_EMITTER, AllZeroWord, BarEdge, BinaryWord, BuiltGraph, EpsEdge,
    GraphVertex, UncoveredIndex, UndecidableAtHorizon, Ultragraph, WordVertex,
    g0_rg_membership,
)
from .upset import UPSet

__all__ = [
    "VertexClass", "VertexOracle", "FiniteEdgeOracle", "DeclaredOracle",
    "GraphBuilder", "IdentityCheck", "IdentityReport",
    "verify_set_identities", "edge_split_graph",
]


class VertexClass(enum.Enum):
    W0 = "W0"          # in no infinite-range word set
    WPLUS = "W+"       # in some infinite-range word set, finitely many
    WINF = "Winf"      # in infinitely many infinite-range word sets

    @property
    def in_w_plus(self) -> bool:
        """Winf is a subset of W+; this tests membership in W+ proper."""
        return self is not VertexClass.W0


class VertexOracle:
    """Supplies the set Winf, which is not computable from finite probes."""

    def winf(self) -> UPSet:
        raise NotImplementedError


class FiniteEdgeOracle(VertexOracle):
    """Correct whenever the edge supply is finite: Winf is empty."""

    def winf(self) -> UPSet:
        return UPSet.empty()


class DeclaredOracle(VertexOracle):
    """Winf given up front (e.g. from a ``winf:`` clause in a description)."""

    def __init__(self, declared: UPSet):
        self._declared = declared

    def winf(self) -> UPSet:
        return self._declared


class GraphBuilder:
    """Exact computations over one ultragraph with one fixed edge listing.

    ``sigma_cap`` bounds the word length explored when evaluating sigma;
    ``first_hit_cap`` bounds the scan for the first edge range containing a
    vertex.  Exceeding either raises UndecidableAtHorizon rather than
    silently guessing.
    """

    def __init__(self, graph: Ultragraph, oracle: VertexOracle | None = None,
                 sigma_cap: int = 64, first_hit_cap: int = 100_000):
        if oracle is None:
            if graph.edge_count is None:
                raise ValueError(
                    "an infinite edge supply needs an explicit Winf oracle")
            oracle = FiniteEdgeOracle()
        if graph.universe_size is None and graph.edge_count is not None:
            if any(not graph.erange(n).is_finite()
                   for n in range(1, graph.edge_count + 1)):
                raise ValueError(
                    "an infinite edge range with a finite edge listing has "
                    "no depth function with finite fibers")
        self.graph = graph
        self.oracle = oracle
        self.sigma_cap = sigma_cap
        self.first_hit_cap = first_hit_cap
        self._winf = oracle.winf()
        self._resid_cache: dict[tuple, UPSet] = {}
        self._delta_levels: list[list[BinaryWord]] = []  # levels 1, 2, ...
        self._sigma_cache: dict[int, BinaryWord | None] = {}
        self._class_cache: dict[int, VertexClass] = {}

    # -- word ranges and Delta tables -------------------------------------

    def _resid(self, bits: tuple) -> UPSet:
        """Intersection/difference chain over the first len(bits) ranges.

        Unlike the range of a word, this is defined for all-zero prefixes
        too (it is then the complement of the union of the ranges so far),
        which makes the recursion uniform.
        """
        if not bits:
            return UPSet.naturals()
        hit = self._resid_cache.get(bits)
        if hit is None:
            parent = self._resid(bits[:-1])
            rng = self.graph.erange(len(bits))
            hit = parent.intersect(rng) if bits[-1] else parent.difference(rng)
            self._resid_cache[bits] = hit
        return hit

    def range_of(self, word: BinaryWord) -> UPSet:
        """The range set of a word (undefined on all-zero words)."""
        if word.is_all_zero:
            raise AllZeroWord(str(word))
        return self._resid(word.bits)

    def in_delta(self, word: BinaryWord) -> bool:
        """Whether the word's range set is infinite."""
        if word.is_all_zero:
            return False
        if self.graph.edge_count is not None and len(word) > self.graph.edge_count:
            return False
        return not self.range_of(word).is_finite()

    def delta_level(self, n: int) -> list[BinaryWord]:
        """All Delta words of length n, in lexicographic order."""
        if self.graph.edge_count is not None and n > self.graph.edge_count:
            return []
        while len(self._delta_levels) < n:
            depth = len(self._delta_levels) + 1
            level = []
            if depth > 1:
                for w in self._delta_levels[-1]:
                    for bit in (0, 1):
                        child = w.child(bit)
                        if self.in_delta(child):
                            level.append(child)
            tip = BinaryWord.zeros_one(depth - 1)
            if self.in_delta(tip):
                level.append(tip)
            self._delta_levels.append(sorted(level))
        return self._delta_levels[n - 1]

    def delta_words(self, max_len: int) -> list[BinaryWord]:
        """All Delta words of length at most max_len."""
        out = []
        for n in range(1, max_len + 1):
            out.extend(self.delta_level(n))
        return out

    def gamma0_words(self, max_len: int) -> list[BinaryWord]:
        """Words 0^k 1 in Delta with length at most max_len.

        Scans only the 0^k 1 spine, so it is much cheaper than a full
        Delta table at the same depth.
        """
        out = []
        for length in range(1, max_len + 1):
            if self.graph.edge_count is not None and length > self.graph.edge_count:
                break
            word = BinaryWord.zeros_one(length - 1)
            if self.in_delta(word):
                out.append(word)
        return out

    @staticmethod
    def is_gamma0(word: BinaryWord) -> bool:
        return word.bits[-1] == 1 and not any(word.bits[:-1])

    # -- vertex classification and sigma ----------------------------------

    def membership_word(self, v: int, n: int) -> BinaryWord:
        """The length-n word recording which of the first n ranges hold v."""
        return BinaryWord(tuple(
            1 if v in self.graph.erange(i) else 0 for i in range(1, n + 1)))

    def first_hit(self, v: int) -> int | None:
        """Least n with v in the range of e_n, or None if there is none."""
        cap = self.graph.edge_count
        bound = cap if cap is not None else self.first_hit_cap
        for n in range(1, bound + 1):
            if v in self.graph.erange(n):
                return n
        if cap is not None:
            return None
        raise UndecidableAtHorizon(
            f"no edge range contains v{v} among the first {bound} edges")

    def classify(self, v: int) -> VertexClass:
        hit = self._class_cache.get(v)
        if hit is not None:
            return hit
        if v in self._winf:
            cls = VertexClass.WINF
        else:
            m0 = self.first_hit(v)
            if m0 is None:
                cls = VertexClass.W0
            else:
                # the only 0^k 1 range that can contain v is the one at the
                # first hit, and v is in W+ iff that range is infinite
                cls = (VertexClass.WPLUS
                       if self.in_delta(BinaryWord.zeros_one(m0 - 1))
                       else VertexClass.W0)
        self._class_cache[v] = cls
        return cls

    def classify_witness(self, v: int) -> BinaryWord | None:
        """The unique 0^k 1 word whose range contains v, for v in W+."""
        if not self.classify(v).in_w_plus:
            return None
        return BinaryWord.zeros_one(self.first_hit(v) - 1)

    def winf_rank(self, v: int) -> int:
        """1-based position of v in the increasing ordering of Winf."""
        if v not in self._winf:
            raise ValueError(f"v{v} is not in Winf")
        return len(self._winf.enumerate(v))

    def winf_prefix(self, count: int) -> list[int]:
        """The first ``count`` elements of Winf (fewer if Winf is smaller)."""
        if count <= 0 or self._winf.is_empty():
            return []
        limit = 64
        while True:
            got = self._winf.enumerate(limit)
            if len(got) >= count or self._winf.is_finite():
                return got[:count]
            limit *= 2

    def sigma(self, v: int) -> BinaryWord | None:
        """The word assigned to v, or None for v in W0.

        Outside Winf this is the longest membership word with an infinite
        range; for the k-th element of Winf it is the shortest such word of
        length at least k.
        """
        if v in self._sigma_cache:
            return self._sigma_cache[v]
        cls = self.classify(v)
        if cls is VertexClass.W0:
            word = None
        elif cls is VertexClass.WINF:
            k = self.winf_rank(v)
            word = None
            for n in range(max(k, 1), max(k, 1) + self.sigma_cap + 1):
                cand = self.membership_word(v, n)
                if self.in_delta(cand):
                    word = cand
                    break
            if word is None:
                raise UndecidableAtHorizon(
                    f"sigma(v{v}) not found within {self.sigma_cap} letters")
        else:
            m0 = self.first_hit(v)
            word = BinaryWord.zeros_one(m0 - 1)
            n = m0
            while True:
                if self.graph.edge_count is not None and n >= self.graph.edge_count:
                    break
                if n >= self.sigma_cap:
                    raise UndecidableAtHorizon(
                        f"sigma(v{v}) exceeds the cap of {self.sigma_cap}")
                nxt = word.child(1 if v in self.graph.erange(n + 1) else 0)
                if not self.in_delta(nxt):
                    break
                word, n = nxt, n + 1
        self._sigma_cache[v] = word
        return word

    def sigma_len(self, v: int) -> int:
        word = self.sigma(v)
        return 0 if word is None else len(word)

    def sigma_fiber(self, word: BinaryWord) -> list[int]:
        """All v with sigma(v) == word, in increasing order.

        Candidates outside Winf sit in a finite-range child of the word;
        candidates inside Winf have rank at most the word length.  Both
        candidate pools are finite, so the fiber is enumerable exactly.
        """
        if not self.in_delta(word):
            return []
        candidates = set(self.winf_prefix(len(word)))
        for bit in (0, 1):
            child = word.child(bit)
            rng = self.range_of(child)
            if rng.is_finite():
                candidates.update(rng.members())
        return sorted(v for v in candidates if self.sigma(v) == word)

    # -- X(n) and r' -------------------------------------------------------

    def x_set(self, n: int) -> tuple[list[int], list[BinaryWord]]:
        """The target set X(n): (vertex members, word members).

        Vertex members are those v in the range of e_n whose sigma word is
        shorter than n; word members are the Delta words of length n whose
        final letter is 1.
        """
        rng = self.graph.erange(n)
        words = [w for w in self.delta_level(n) if w[n] == 1]
        if rng.is_finite():
            candidates = rng.members()
        else:
            leftover = rng
            for w in words:
                leftover = leftover.difference(self.range_of(w))
            if not leftover.is_finite():
                raise AssertionError(
                    f"non-word part of the range of e_{n} is infinite")
            candidates = set(leftover.members())
            candidates.update(
                v for v in self.winf_prefix(n - 1) if v in rng)
            candidates = sorted(candidates)
        verts = [v for v in candidates if self.sigma_len(v) < n]
        return verts, words

    def r_prime(self, word: BinaryWord) -> UPSet:
        """{v in the word's range : |sigma(v)| >= |word|} as a UPSet."""
        n = len(word)
        if not self.in_delta(word):
            if word.is_all_zero:
                raise AllZeroWord(str(word))
            rng = self.range_of(word)
            return UPSet.from_members(
                v for v in rng.members() if self.sigma_len(v) >= n)
        rng = self.range_of(word)
        # only Winf vertices of rank below n can fall short of depth n here
        exceptions = [v for v in self.winf_prefix(n - 1)
                      if v in rng and self.sigma_len(v) < n]
        return rng.difference(UPSet.from_members(exceptions))

    # -- assembling E -------------------------------------------------------

    def build_e(self, word_depth: int, vertex_horizon: int,
                edge_horizon: int) -> BuiltGraph:
        """A truncated copy of E with closure of edge endpoints.

        Vertices: original vertices up to ``vertex_horizon`` and Delta words
        up to ``word_depth``, plus any vertex needed as an endpoint of a
        listed edge.  Frontier vertices are those whose out-edge set may be
        incomplete at this truncation.
        """
        graph = self.graph
        vertices: dict = {}
        frontier: set = set()

        def ensure(x, beyond: bool):
            if x not in vertices:
                vertices[x] = True
                if beyond:
                    frontier.add(x)

        top_v = (vertex_horizon if graph.universe_size is None
                 else min(vertex_horizon, graph.universe_size))
        for m in range(1, top_v + 1):
            ensure(GraphVertex(m), beyond=False)
        words = self.delta_words(word_depth)
        for w in words:
            ensure(WordVertex(w), beyond=False)

        edges: dict = {}

        def add_edge(e, src, tgt):
            if e not in edges:
                edges[e] = (src, tgt)

        # tree edges into Gamma+ words: source is the parent word
        for w in words:
            if not self.is_gamma0(w):
                parent = w.restrict(len(w) - 1)
                add_edge(BarEdge(WordVertex(w)),
                         WordVertex(parent), WordVertex(w))

        # tree edges into W+ vertices, emitted by their sigma words
        for w in words:
            for v in self.sigma_fiber(w):
                ensure(GraphVertex(v), beyond=v > top_v)
                add_edge(BarEdge(GraphVertex(v)),
                         WordVertex(w), GraphVertex(v))
        for m in range(1, top_v + 1):
            if self.classify(m).in_w_plus:
                sw = self.sigma(m)
                if len(sw) > word_depth:
                    ensure(WordVertex(sw), beyond=True)
                    add_edge(BarEdge(GraphVertex(m)),
                             WordVertex(sw), GraphVertex(m))

        # edges encoding each ultraedge into its target set
        top_e = (edge_horizon if graph.edge_count is None
                 else min(edge_horizon, graph.edge_count))
        for n in range(1, top_e + 1):
            src = GraphVertex(graph.source(n))
            ensure(src, beyond=src.m > top_v)
            verts, wvs = self.x_set(n)
            for v in verts:
                ensure(GraphVertex(v), beyond=v > top_v)
                add_edge(EpsEdge(n, GraphVertex(v)), src, GraphVertex(v))
            for w in wvs:
                ensure(WordVertex(w), beyond=len(w) > word_depth)
                add_edge(EpsEdge(n, WordVertex(w)), src, WordVertex(w))

        # frontier marking for in-horizon vertices
        for x in vertices:
            if isinstance(x, GraphVertex) and x.m <= top_v:
                out = graph.out_edges(x.m)
                if out == INFINITE_EMITTER or any(i > top_e for i in out):
                    frontier.add(x)
            elif isinstance(x, WordVertex) and len(x.word) <= word_depth:
                if len(x.word) == word_depth and (
                        graph.edge_count is None
                        or len(x.word) < graph.edge_count):
                    frontier.add(x)

        source = {e: st[0] for e, st in edges.items()}
        target = {e: st[1] for e, st in edges.items()}
        return BuiltGraph(vertices=list(vertices), edges=list(edges),
                          source=source, target=target,
                          word_depth=word_depth,
                          vertex_horizon=vertex_horizon,
                          edge_horizon=edge_horizon, frontier=frontier)

    # -- structural checks --------------------------------------------------

    def check_regular(self, built: BuiltGraph) -> list[str]:
        """Mismatches against: regular vertices of E are the regular
        original vertices together with all words.  Only non-frontier
        vertices are conclusive under a truncation."""
        problems = []
        for x in built.vertices:
            if built.is_frontier(x):
                continue
            degree = len(built.out_edges(x))
            regular_in_e = degree > 0
            if isinstance(x, GraphVertex):
                expected = g0_rg_membership(self.graph, x.m)
            else:
                expected = True
            if regular_in_e != expected:
                problems.append(
                    f"{x!r}: out-degree {degree}, expected "
                    f"{'regular' if expected else 'singular'}")
        return problems


# ---------------------------------------------------------------------------
# identity verification


@dataclass(frozen=True)
class IdentityCheck:
    name: str
    ok: bool
    detail: str


@dataclass(frozen=True)
class IdentityReport:
    checks: tuple

    @property
    def ok(self) -> bool:
        return all(c.ok for c in self.checks)

    def failures(self) -> list[IdentityCheck]:
        return [c for c in self.checks if not c.ok]

    def render(self) -> str:
        return "\n".join(
            f"{'PASS' if c.ok else 'FAIL'} {c.name} {c.detail}"
            for c in self.checks)


def _pairwise_disjoint(sets: list[UPSet]) -> bool:
    for i, a in enumerate(sets):
        for b in sets[i + 1:]:
            if not a.intersect(b).is_empty():
                return False
    return True


def verify_set_identities(builder: GraphBuilder, depth: int = 6,
                          edge_horizon: int = 6,
                          window: int = 60) -> IdentityReport:
    """Exact structural identities relating ranges, words, sigma and X(n).

    All equalities are checked as UPSet identities, not by sampling, except
    for the classification cross-check which runs over ``window`` vertices.
    """
    g = builder.graph
    checks = []

    def check(name, ok, detail):
        checks.append(IdentityCheck(name, ok, detail))

    top_e = (edge_horizon if g.edge_count is None
             else min(edge_horizon, g.edge_count))

    # each edge range is the disjoint union of the ranges of the length-n
    # words ending in 1
    ok, detail = True, f"edges 1..{top_e}"
    for n in range(1, top_e + 1):
        words = [BinaryWord(bits + (1,))
                 for bits in _all_bits(n - 1)]
        parts = [builder.range_of(w) for w in words]
        union = UPSet.empty()
        for p in parts:
            union = union.union(p)
        if not _pairwise_disjoint(parts) or union != g.erange(n):
            ok, detail = False, f"failed at edge {n}"
            break
    check("range-partition", ok, detail)

    # a word's range splits as the disjoint union of its two children
    ok, detail = True, f"words up to length {depth - 1}"
    for n in range(1, depth):
        if g.edge_count is not None and n + 1 > g.edge_count:
            break
        for w in builder.delta_level(n):
            left, right = builder.range_of(w.child(0)), builder.range_of(w.child(1))
            if (not left.intersect(right).is_empty()
                    or left.union(right) != builder.range_of(w)):
                ok, detail = False, f"failed at {w}"
    check("child-split", ok, detail)

    # the 0^k 1 ranges are pairwise disjoint and their union is exactly the
    # set of vertices classified into W+ (checked on a window)
    gamma0 = builder.gamma0_words(max(depth, 8))
    parts = [builder.range_of(w) for w in gamma0]
    ok = _pairwise_disjoint(parts)
    detail = f"{len(gamma0)} spine words, window 1..{window}"
    if ok:
        for v in range(1, window + 1):
            if g.universe_size is not None and v > g.universe_size:
                break
            in_union = any(v in p for p in parts)
            in_wplus = builder.classify(v).in_w_plus
            if in_union and not in_wplus:
                ok, detail = False, f"v{v} covered by a spine word but not in W+"
                break
            if in_wplus and not in_union and builder.sigma_len(v) <= len(gamma0[-1]) + 2:
                # membership via a spine word longer than those scanned is
                # legitimate; only flag clear contradictions
                first = builder.first_hit(v)
                if first is not None and first <= len(gamma0[-1]):
                    ok, detail = False, f"v{v} in W+ but in no spine word range"
                    break
    check("spine-partition", ok, detail)

    # the range of e_n is its X(n) vertices plus the depth-filtered ranges
    # of its X(n) words, disjointly
    ok, detail = True, f"edges 1..{top_e}"
    for n in range(1, top_e + 1):
        verts, words = builder.x_set(n)
        parts = [UPSet.from_members(verts)] + [builder.r_prime(w) for w in words]
        union = UPSet.empty()
        for p in parts:
            union = union.union(p)
        if not _pairwise_disjoint(parts) or union != g.erange(n):
            ok, detail = False, f"failed at edge {n}"
            break
        if not verts and not words:
            ok, detail = False, f"X({n}) is empty"
            break
    check("x-partition", ok, detail)

    # depth-filtered ranges split into the two children plus the sigma fiber
    ok, detail = True, f"words up to length {depth - 1}"
    for n in range(1, depth):
        if g.edge_count is not None and n + 1 > g.edge_count:
            break
        for w in builder.delta_level(n):
            fiber = UPSet.from_members(builder.sigma_fiber(w))
            parts = [builder.r_prime(w.child(0)), builder.r_prime(w.child(1)), fiber]
            union = UPSet.empty()
            for p in parts:
                union = union.union(p)
            if not _pairwise_disjoint(parts) or union != builder.r_prime(w):
                ok, detail = False, f"failed at {w}"
    check("rprime-split", ok, detail)

    # a word's range is its depth-filtered part plus the short-sigma part,
    # and finite-range words have empty depth-filtered part
    ok, detail = True, f"words up to length {depth}"
    for n in range(1, depth + 1):
        if g.edge_count is not None and n > g.edge_count:
            break
        level = (builder.delta_level(n)
                 + [w for w in (BinaryWord(bits) for bits in _all_bits(n))
                    if not w.is_all_zero and not builder.in_delta(w)])
        for w in level if n <= 5 else builder.delta_level(n):
            rng = builder.range_of(w)
            rp = builder.r_prime(w)
            if rng.is_finite():
                if not rp.is_empty() and not builder.in_delta(w):
                    ok, detail = False, f"finite-range word {w} has nonempty r'"
                    break
                short = UPSet.from_members(
                    v for v in rng.members() if builder.sigma_len(v) < n)
            else:
                short = rng.difference(rp)
                if any(builder.sigma_len(v) >= n for v in short.members()):
                    ok, detail = False, f"short-sigma part of {w} is wrong"
                    break
            if rp.union(short) != rng or not rp.intersect(short).is_empty():
                ok, detail = False, f"failed at {w}"
                break
        if not ok:
            break
    check("depth-filter-split", ok, detail)

    # sigma lands in Delta and its word range contains the vertex
    ok, detail = True, f"window 1..{window}"
    for v in range(1, window + 1):
        if g.universe_size is not None and v > g.universe_size:
            break
        word = builder.sigma(v)
        if word is None:
            continue
        if not builder.in_delta(word) or v not in builder.range_of(word):
            ok, detail = False, f"sigma(v{v}) = {word} is inconsistent"
            break
    check("sigma-consistency", ok, detail)

    return IdentityReport(tuple(checks))


def edge_split_graph(graph: Ultragraph, word_depth: int, vertex_horizon: int,
                     edge_horizon: int) -> BuiltGraph:
    """Direct edge-split construction: one graph edge per (ultraedge, range
    member) pair.  Coincides with the built graph exactly when every range
    is finite, since no word then has an infinite range."""
    if graph.universe_size is None or graph.edge_count is None:
        raise ValueError("the edge-split construction needs a finite graph")
    for n in range(1, graph.edge_count + 1):
        if not graph.erange(n).is_finite():
            raise ValueError(f"edge {n} has an infinite range")
    vertices = [GraphVertex(v) for v in range(1, graph.universe_size + 1)]
    edges = []
    source = {}
    target = {}
    for n in range(1, graph.edge_count + 1):
        src = GraphVertex(graph.source(n))
        for v in sorted(graph.erange(n).members()):
            e = EpsEdge(n, GraphVertex(v))
            edges.append(e)
            source[e] = src
            target[e] = GraphVertex(v)
    return BuiltGraph(vertices=vertices, edges=edges, source=source,
                      target=target, word_depth=word_depth,
                      vertex_horizon=vertex_horizon,
                      edge_horizon=edge_horizon, frontier=set())


def _all_bits(n: int):
    """All bit tuples of length n."""
    if n == 0:
        yield ()
        return
    for bits in _all_bits(n - 1):
        yield bits + (0,)
        yield bits + (1,)
