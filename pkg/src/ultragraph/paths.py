"""Path structure of the constructed graph and of the underlying ultragraph.

Covers the tree subgraph F (all bar edges), the canonical tree path f_x into
each vertex, the unique factorization of a path into F-blocks separated by
eps edges, the bijection between paths of E and paths of the ultragraph,
first-return counting, and Condition (K) for both structures.
"""

from __future__ import annotations

from dataclasses import dataclass

from .builder import GraphBuilder, VertexClass
from .model import (
    INFINITE_EMITTER, BarEdge, BuiltGraph, EpsEdge, GraphVertex, Ultragraph,
    WordVertex,
)

__all__ = [
    "EPath", "Factorization", "HorizonTooSmall", "ReturnCount", "KVerdict",
    "f_path", "factorize", "recompose", "enumerate_e_paths",
    "enumerate_g_paths", "verify_path_bijection", "PathBijectionReport",
    "first_return_count", "enumerate_first_returns", "condition_k",
]


class HorizonTooSmall(RuntimeError):
    """An enumeration needed structure beyond the built truncation."""


# ---------------------------------------------------------------------------
# paths in E


@dataclass(frozen=True)
class EPath:
    """A composable edge sequence in E; the empty sequence is the path at
    ``start``."""

    start: object  # GraphVertex | WordVertex
    edges: tuple

    def __len__(self) -> int:
        return len(self.edges)

    @property
    def eps_count(self) -> int:
        return sum(1 for e in self.edges if isinstance(e, EpsEdge))

    @property
    def max_edge_index(self) -> int:
        return max((e.n for e in self.edges if isinstance(e, EpsEdge)),
                   default=0)

    def eps_indices(self) -> tuple[int, ...]:
        return tuple(e.n for e in self.edges if isinstance(e, EpsEdge))

    def concat(self, other: "EPath") -> "EPath":
        return EPath(self.start, self.edges + other.edges)

    def __repr__(self):
        if not self.edges:
            return f"({self.start!r})"
        return "*".join(repr(e) for e in self.edges)


def path_target(built: BuiltGraph, path: EPath):
    return built.target[path.edges[-1]] if path.edges else path.start


def is_composable(built: BuiltGraph, path: EPath) -> bool:
    at = path.start
    for e in path.edges:
        if built.source[e] != at:
            return False
        at = built.target[e]
    return True


@dataclass(frozen=True)
class Factorization:
    """g0 then blocks (n_i, x_i, g_i): an eps edge followed by an F-path."""

    g0: EPath
    blocks: tuple  # of (n, x, EPath)

    @property
    def eps_count(self) -> int:
        return len(self.blocks)

    def edge_indices(self) -> tuple[int, ...]:
        return tuple(n for n, _x, _g in self.blocks)


def factorize(path: EPath) -> Factorization:
    """Split a path at its eps edges; the pieces between them are F-paths."""
    blocks = []
    bar_run: list = []
    run_start = path.start
    pending = None  # (n, x) of the eps edge opening the current block
    for e in path.edges:
        if isinstance(e, BarEdge):
            bar_run.append(e)
        else:
            g = EPath(run_start, tuple(bar_run))
            if pending is None:
                g0 = g
            else:
                blocks.append((*pending, g))
            pending = (e.n, e.target)
            bar_run, run_start = [], e.target
    g = EPath(run_start, tuple(bar_run))
    if pending is None:
        g0 = g
    else:
        blocks.append((*pending, g))
    if pending is None:
        return Factorization(g, ())
    return Factorization(g0, tuple(blocks))


def recompose(fact: Factorization) -> EPath:
    edges = list(fact.g0.edges)
    for n, x, g in fact.blocks:
        edges.append(EpsEdge(n, x))
        edges.extend(g.edges)
    return EPath(fact.g0.start, tuple(edges))


def f_path(builder: GraphBuilder, x) -> EPath:
    """The unique F-path into x starting at a tree root (W0 or a 0^k 1 word).

    Three cases: a root is its own trivial path; a non-root word is reached
    by the bar chain along its prefixes; a W+ vertex is reached through its
    sigma word followed by its own bar edge.
    """
    if isinstance(x, WordVertex):
        word = x.word
        if builder.is_gamma0(word):
            return EPath(x, ())
        m = word.first_one()
        edges = tuple(BarEdge(WordVertex(word.restrict(i)))
                      for i in range(m + 1, len(word) + 1))
        return EPath(WordVertex(word.restrict(m)), edges)
    if isinstance(x, GraphVertex):
        if builder.classify(x.m) is VertexClass.W0:
            return EPath(x, ())
        head = f_path(builder, WordVertex(builder.sigma(x.m)))
        return EPath(head.start, head.edges + (BarEdge(x),))
    raise TypeError(f"not an E vertex: {x!r}")


def enumerate_e_paths(built: BuiltGraph, v, w, max_eps: int) -> list[EPath]:
    """All paths in E from v to w using at most max_eps eps edges.

    Bar edges are free: the bar subgraph is a forest, so only eps edges can
    close cycles and the enumeration terminates.  Raises HorizonTooSmall if
    it would need the out-edges of a frontier vertex.
    """
    if not built.has_vertex(v) or not built.has_vertex(w):
        raise HorizonTooSmall(f"{v!r} or {w!r} is not in the built graph")
    out: list[EPath] = []

    def walk(at, eps_left: int, acc: list):
        if at == w:
            out.append(EPath(v, tuple(acc)))
        if built.is_frontier(at):
            raise HorizonTooSmall(f"needed the out-edges of frontier {at!r}")
        for e in built.out_edges(at):
            if isinstance(e, EpsEdge):
                if eps_left == 0:
                    continue
                acc.append(e)
                walk(built.target[e], eps_left - 1, acc)
                acc.pop()
            else:
                acc.append(e)
                walk(built.target[e], eps_left, acc)
                acc.pop()

    walk(v, max_eps, [])
    return out


# ---------------------------------------------------------------------------
# paths in the ultragraph


def enumerate_g_paths(graph: Ultragraph, v: int, w: int, max_len: int,
                      vertex_horizon: int = 64,
                      edge_horizon: int = 64) -> list[tuple[int, ...]]:
    """Edge-id sequences from v whose final range contains w, length <= max_len.

    The empty sequence stands for the trivial path and is included exactly
    when v == w.  Raises HorizonTooSmall when continuation sources would lie
    beyond the horizons.
    """
    out: list[tuple[int, ...]] = []
    if v == w:
        out.append(())

    def outgoing(u: int) -> list[int]:
        ids = graph.out_edges(u)
        if ids == INFINITE_EMITTER or any(n > edge_horizon for n in ids):
            raise HorizonTooSmall(f"out-edges of v{u} exceed the horizon")
        return ids

    def walk(last_range, depth: int, acc: list):
        if depth == 0:
            return
        if last_range is None:
            sources = [v]
        else:
            if not last_range.is_finite():
                members = last_range.enumerate(vertex_horizon)
                raise_beyond = True
            else:
                members = last_range.members()
                raise_beyond = any(m > vertex_horizon for m in members)
                members = [m for m in members if m <= vertex_horizon]
            if raise_beyond:
                # a source beyond the horizon may emit edges we cannot see
                raise HorizonTooSmall(
                    "range reaches vertices beyond the vertex horizon")
            sources = members
        for u in sources:
            for n in outgoing(u):
                acc.append(n)
                rng = graph.erange(n)
                if w in rng:
                    out.append(tuple(acc))
                walk(rng, depth - 1, acc)
                acc.pop()

    walk(None, max_len, [])
    return out


@dataclass(frozen=True)
class PathBijectionReport:
    v: int
    w: int
    max_eps: int
    e_count: int
    g_count: int
    ok: bool
    detail: str

    def render(self) -> str:
        status = "PASS" if self.ok else "FAIL"
        return (f"{status} path-bijection v{self.v}->v{self.w} "
                f"eps<={self.max_eps}: {self.e_count} E-paths, "
                f"{self.g_count} ultragraph paths ({self.detail})")


def verify_path_bijection(builder: GraphBuilder, built: BuiltGraph, v: int,
                          w: int, max_eps: int,
                          vertex_horizon: int | None = None,
                          edge_horizon: int | None = None
                          ) -> PathBijectionReport:
    """Check that dropping F-blocks is a bijection from E-paths v -> w onto
    ultragraph paths from v whose final range contains w."""
    vh = vertex_horizon if vertex_horizon is not None else built.vertex_horizon
    eh = edge_horizon if edge_horizon is not None else built.edge_horizon
    e_paths = enumerate_e_paths(built, GraphVertex(v), GraphVertex(w), max_eps)
    g_paths = enumerate_g_paths(builder.graph, v, w, max_eps,
                                vertex_horizon=vh, edge_horizon=eh)
    seqs = [factorize(p).edge_indices() for p in e_paths]
    ok, detail = True, "bijective"
    if len(set(seqs)) != len(seqs):
        ok, detail = False, "two E-paths share an edge-index sequence"
    elif sorted(seqs) != sorted(g_paths):
        ok, detail = False, "index-sequence sets differ"
    else:
        # round-trip sanity on the factorizations
        for p in e_paths:
            back = recompose(factorize(p))
            if back != p or not is_composable(built, back):
                ok, detail = False, f"factorization round-trip failed on {p!r}"
                break
    return PathBijectionReport(v, w, max_eps, len(e_paths), len(g_paths),
                               ok, detail)


# ---------------------------------------------------------------------------
# first-return counting


@dataclass(frozen=True)
class ReturnCount:
    """0, 1, at least two, or unknown at the configured horizon."""

    kind: str  # "zero" | "one" | "at_least_two" | "unknown"

    @property
    def exact(self) -> int | None:
        return {"zero": 0, "one": 1}.get(self.kind)

    def __repr__(self):
        return {"zero": "0", "one": "1", "at_least_two": "AtLeast(2)",
                "unknown": "UnknownAtCap"}[self.kind]


ZERO = ReturnCount("zero")
ONE = ReturnCount("one")
AT_LEAST_TWO = ReturnCount("at_least_two")
UNKNOWN = ReturnCount("unknown")


class _EWalk:
    """Edge-level walk view of a built graph for first-return analysis."""

    def __init__(self, built: BuiltGraph):
        self.built = built

    def bases(self):
        return list(self.built.vertices)

    def starts(self, v):
        if not self.built.has_vertex(v):
            return [], True
        return list(self.built.out_edges(v)), not self.built.is_frontier(v)

    def hits(self, node, v) -> bool:
        return self.built.target[node] == v

    def successors(self, node, v):
        u = self.built.target[node]
        if u == v:
            return [], True
        return list(self.built.out_edges(u)), not self.built.is_frontier(u)


class _GWalk:
    """Edge-level walk view of an ultragraph, horizon-bounded."""

    def __init__(self, graph: Ultragraph, vertex_horizon: int,
                 edge_horizon: int):
        self.graph = graph
        self.vh = (vertex_horizon if graph.universe_size is None
                   else min(vertex_horizon, graph.universe_size))
        self.eh = (edge_horizon if graph.edge_count is None
                   else min(edge_horizon, graph.edge_count))
        self.truncated = (graph.universe_size is None
                          or graph.universe_size > self.vh
                          or graph.edge_count is None
                          or graph.edge_count > self.eh)

    def bases(self):
        return list(range(1, self.vh + 1))

    def _out(self, u):
        ids = self.graph.out_edges(u)
        if ids == INFINITE_EMITTER:
            return [], False
        return [n for n in ids if n <= self.eh], all(n <= self.eh for n in ids)

    def starts(self, v):
        return self._out(v)

    def hits(self, node, v) -> bool:
        return v in self.graph.erange(node)

    def successors(self, node, v):
        rng = self.graph.erange(node)
        complete = True
        if rng.is_finite():
            members = [m for m in rng.members() if m <= self.vh]
            if len(members) != len(rng.members()):
                complete = False
        else:
            members = rng.enumerate(self.vh)
            complete = False
        nodes = []
        for u in members:
            if u == v:
                continue
            out, c = self._out(u)
            nodes.extend(out)
            complete = complete and c
        return nodes, complete


def _first_return_analysis(view, v) -> ReturnCount:
    """Count walks in the edge-state graph from the out-edges of v to the
    edges hitting v, with intermediate sources != v.  A cycle among the
    relevant states pumps to infinitely many walks."""
    starts, complete = view.starts(v)
    seen = set(starts)
    frontier_hit = not complete
    order = list(starts)
    succ: dict = {}
    i = 0
    while i < len(order):
        node = order[i]
        i += 1
        nxt, c = view.successors(node, v)
        frontier_hit = frontier_hit or not c
        succ[node] = nxt
        for b in nxt:
            if b not in seen:
                seen.add(b)
                order.append(b)

    # co-reachability to an accepting state
    accepting = {node for node in seen if view.hits(node, v)}
    rev: dict = {node: [] for node in seen}
    for a, bs in succ.items():
        for b in bs:
            rev[b].append(a)
    co = set(accepting)
    stack = list(accepting)
    while stack:
        node = stack.pop()
        for a in rev[node]:
            if a not in co:
                co.add(a)
                stack.append(a)
    relevant = co  # reachable by construction

    # cycle among relevant states -> pumping -> infinitely many walks
    indeg = {node: 0 for node in relevant}
    for a in relevant:
        for b in succ[a]:
            if b in relevant:
                indeg[b] += 1
    queue = [n for n, d in indeg.items() if d == 0]
    removed = 0
    while queue:
        node = queue.pop()
        removed += 1
        for b in succ[node]:
            if b in relevant:
                indeg[b] -= 1
                if indeg[b] == 0:
                    queue.append(b)
    if removed < len(relevant):
        return AT_LEAST_TWO

    # acyclic: saturating path count, walks = paths here
    memo: dict = {}

    def count(node) -> int:
        if node in memo:
            return memo[node]
        total = 1 if node in accepting else 0
        for b in succ[node]:
            if b in relevant:
                total += count(b)
                if total >= 2:
                    break
        memo[node] = min(total, 2)
        return memo[node]

    total = 0
    for s in starts:
        if s in relevant:
            total += count(s)
        if total >= 2:
            return AT_LEAST_TWO
    if frontier_hit:
        return UNKNOWN
    return ONE if total == 1 else ZERO


def _walk_view(structure, vertex_horizon, edge_horizon):
    if isinstance(structure, BuiltGraph):
        return _EWalk(structure)
    if isinstance(structure, Ultragraph):
        return _GWalk(structure, vertex_horizon, edge_horizon)
    raise TypeError(f"unsupported structure: {structure!r}")


def first_return_count(structure, base, vertex_horizon: int = 64,
                       edge_horizon: int = 64) -> ReturnCount:
    """Number of first-return paths based at ``base``: 0, 1, AtLeast(2),
    or UnknownAtCap.  ``base`` is an E vertex for a built graph and a
    vertex id for an ultragraph."""
    view = _walk_view(structure, vertex_horizon, edge_horizon)
    return _first_return_analysis(view, base)


def enumerate_first_returns(structure, base, max_len: int,
                            vertex_horizon: int = 64,
                            edge_horizon: int = 64) -> list[tuple]:
    """Brute-force enumeration of first-return paths up to a length bound;
    the independent cross-check for the analysis above."""
    view = _walk_view(structure, vertex_horizon, edge_horizon)
    out: list[tuple] = []
    starts, _ = view.starts(base)

    def walk(node, acc: list):
        if view.hits(node, base):
            out.append(tuple(acc))
        if len(acc) >= max_len:
            return
        nxt, _ = view.successors(node, base)
        for b in nxt:
            acc.append(b)
            walk(b, acc)
            acc.pop()

    for s in starts:
        walk(s, [s])
    return out


# ---------------------------------------------------------------------------
# Condition (K)


@dataclass(frozen=True)
class KVerdict:
    kind: str  # "holds" | "fails" | "unknown"
    witness: object = None

    def __repr__(self):
        if self.kind == "fails":
            return f"Fails({self.witness!r})"
        return {"holds": "Holds", "unknown": "UnknownTruncated"}[self.kind]


def condition_k(structure, vertex_horizon: int = 64,
                edge_horizon: int = 64) -> KVerdict:
    """No base vertex has exactly one first-return path.

    Exact for finite structures; truncated structures yield a definite
    Fails when a certain witness exists, otherwise UnknownTruncated.
    """
    view = _walk_view(structure, vertex_horizon, edge_horizon)
    truncated = getattr(view, "truncated", False)
    if isinstance(structure, BuiltGraph):
        truncated = bool(structure.frontier)
    saw_unknown = False
    for base in view.bases():
        verdict = _first_return_analysis(view, base)
        if verdict is ONE:
            return KVerdict("fails", base)
        if verdict is UNKNOWN:
            saw_unknown = True
    if truncated or saw_unknown:
        return KVerdict("unknown")
    return KVerdict("holds")
