"""Core domain types: ultragraphs, binary words, and the constructed graph.

An ultragraph is a directed-graph generalization in which every edge has a
single source vertex but a nonempty *set* of range vertices.  Vertices are
indexed 1, 2, 3, ... and edges carry a fixed total ordering e_1, e_2, ...;
ranges are UPSets so that infinite ranges stay computable.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

from .upset import UPSet

__all__ = [
    "BinaryWord", "Ultragraph", "FiniteUltragraph",
    "GraphVertex", "WordVertex", "TildeVertex",
    "BarEdge", "EpsEdge", "TildeEdge", "BuiltGraph",
    "r_lambda_mu", "r_omega", "g0_rg_membership", "regular_vertices",
    "AllZeroWord", "InvalidIndexSets", "UncoveredIndex", "UndecidableAtHorizon",
    "INFINITE_EMITTER",
]


class AllZeroWord(ValueError):
    """r(omega) is undefined for the all-zeros word."""


class InvalidIndexSets(ValueError):
    """lambda/mu index sets overlap, or lambda is empty."""


class UncoveredIndex(KeyError):
    """Edge index beyond the supply of a finite ultragraph."""


class UndecidableAtHorizon(RuntimeError):
    """A query needs edges beyond the configured horizon."""


# ---------------------------------------------------------------------------
# binary words


@dataclass(frozen=True, order=True)
class BinaryWord:
    """A nonempty word over {0,1}; written like ``001``."""

    bits: tuple[int, ...]

    def __post_init__(self):
        if not self.bits or any(b not in (0, 1) for b in self.bits):
            raise ValueError(f"bad word bits: {self.bits}")

    @classmethod
    def from_string(cls, text: str) -> "BinaryWord":
        return cls(tuple(int(c) for c in text))

    @classmethod
    def zeros_one(cls, zeros: int) -> "BinaryWord":
        """The word 0^zeros 1."""
        return cls((0,) * zeros + (1,))

    def __len__(self) -> int:
        return len(self.bits)

    def __getitem__(self, i: int) -> int:
        """1-based coordinate access (omega_i)."""
        return self.bits[i - 1]

    def __str__(self) -> str:
        return "".join(str(b) for b in self.bits)

    def __iter__(self):
        return iter(self.bits)

    @property
    def is_all_zero(self) -> bool:
        return not any(self.bits)

    def restrict(self, m: int) -> "BinaryWord":
        """The prefix omega|_m, 1 <= m <= |omega|."""
        if not 1 <= m <= len(self.bits):
            raise ValueError(f"restriction length {m} out of range")
        return BinaryWord(self.bits[:m])

    def child(self, bit: int) -> "BinaryWord":
        """(omega, bit)."""
        return BinaryWord(self.bits + (bit,))

    def ones(self) -> list[int]:
        """1-based positions carrying a 1."""
        return [i + 1 for i, b in enumerate(self.bits) if b]

    def first_one(self) -> int:
        """min{k : omega_k = 1}; raises on the all-zeros word."""
        for i, b in enumerate(self.bits):
            if b:
                return i + 1
        raise AllZeroWord(str(self))

    def is_prefix_of(self, other: "BinaryWord") -> bool:
        return len(self) <= len(other) and other.bits[:len(self)] == self.bits


# ---------------------------------------------------------------------------
# ultragraphs

INFINITE_EMITTER = "infinite"


class Ultragraph:
    """Interface shared by explicit and schematic (DSL-backed) ultragraphs.

    ``universe_size`` / ``edge_count`` are None for infinite supplies.
    Edge ids are 1-based and follow the fixed ordering of the edge set.
    """

    universe_size: int | None
    edge_count: int | None

    def source(self, n: int) -> int:
        raise NotImplementedError

    def erange(self, n: int) -> UPSet:
        raise NotImplementedError

    def out_edges(self, v: int):
        """Edge ids emitted by v (increasing), or INFINITE_EMITTER."""
        raise NotImplementedError

    def edge_ids(self, horizon: int) -> list[int]:
        last = horizon if self.edge_count is None else min(horizon, self.edge_count)
        return list(range(1, last + 1))

    def vertex_ids(self, horizon: int) -> list[int]:
        last = horizon if self.universe_size is None else min(horizon, self.universe_size)
        return list(range(1, last + 1))


class FiniteUltragraph(Ultragraph):
    """Ultragraph given by an explicit, finite edge list."""

    def __init__(self, universe_size: int, edges):
        """edges: iterable of (source vertex, range) with range a UPSet or iterable."""
        self.universe_size = universe_size
        self._edges = []
        for src, rng in edges:
            if not isinstance(rng, UPSet):
                rng = UPSet.from_members(rng)
            if rng.is_empty():
                raise ValueError("edge range must be nonempty")
            if not 1 <= src <= universe_size:
                raise ValueError(f"source {src} outside universe")
            if not rng.is_finite():
                raise ValueError("infinite range inside a finite universe")
            if any(m > universe_size for m in rng.members()):
                raise ValueError("range member outside universe")
            self._edges.append((src, rng))
        self.edge_count = len(self._edges)

    def source(self, n: int) -> int:
        self._check(n)
        return self._edges[n - 1][0]

    def erange(self, n: int) -> UPSet:
        self._check(n)
        return self._edges[n - 1][1]

    def out_edges(self, v: int) -> list[int]:
        return [n for n in range(1, self.edge_count + 1) if self._edges[n - 1][0] == v]

    def _check(self, n: int):
        if not 1 <= n <= self.edge_count:
            raise UncoveredIndex(n)


# ---------------------------------------------------------------------------
# range combinatorics


def r_lambda_mu(graph: Ultragraph, lam, mu) -> UPSet:
    """Intersection of the lambda-ranges minus the union of the mu-ranges."""
    lam, mu = set(lam), set(mu)
    if not lam or lam & mu:
        raise InvalidIndexSets(f"lambda={sorted(lam)} mu={sorted(mu)}")
    acc = None
    for n in sorted(lam):
        rng = graph.erange(n)
        acc = rng if acc is None else acc.intersect(rng)
    for n in sorted(mu):
        acc = acc.difference(graph.erange(n))
    return acc


def r_omega(graph: Ultragraph, word: BinaryWord) -> UPSet:
    """The range set of a binary word: keep 1-positions, remove 0-positions."""
    if word.is_all_zero:
        raise AllZeroWord(str(word))
    lam = {i + 1 for i, b in enumerate(word.bits) if b}
    mu = {i + 1 for i, b in enumerate(word.bits) if not b}
    return r_lambda_mu(graph, lam, mu)


def g0_rg_membership(graph: Ultragraph, v: int) -> bool:
    """Regular vertex: emits a finite, nonzero number of edges."""
    out = graph.out_edges(v)
    if out == INFINITE_EMITTER:
        return False
    return len(out) > 0


def regular_vertices(graph: Ultragraph, horizon: int) -> set[int]:
    return {v for v in graph.vertex_ids(horizon) if g0_rg_membership(graph, v)}


# ---------------------------------------------------------------------------
# vertices and edges of the constructed graph


@dataclass(frozen=True)
class GraphVertex:
    """A vertex of the original ultragraph, carried over into E."""

    m: int

    def __repr__(self):
        return f"v{self.m}"


@dataclass(frozen=True)
class WordVertex:
    """A Delta-word vertex of E."""

    word: BinaryWord

    def __repr__(self):
        return str(self.word)


@dataclass(frozen=True)
class TildeVertex:
    """Breaking-vertex copy used by quotient graphs."""

    base: "GraphVertex | WordVertex"

    def __repr__(self):
        return f"~{self.base!r}"


@dataclass(frozen=True)
class BarEdge:
    """The unique tree edge into target (target in W_+ or Gamma_+)."""

    target: "GraphVertex | WordVertex"

    def __repr__(self):
        return f"bar({self.target!r})"


@dataclass(frozen=True)
class EpsEdge:
    """The edge encoding ultraedge e_n into target x in X(n)."""

    n: int
    target: "GraphVertex | WordVertex"

    def __repr__(self):
        return f"eps({self.n},{self.target!r})"


@dataclass(frozen=True)
class TildeEdge:
    """Quotient-graph copy of an E-edge, rerouted to a tilde vertex."""

    base: "BarEdge | EpsEdge"

    def __repr__(self):
        return f"~{self.base!r}"


def vertex_sort_key(x):
    if isinstance(x, GraphVertex):
        return (0, x.m, ())
    if isinstance(x, WordVertex):
        return (1, len(x.word), x.word.bits)
    return (2,) + vertex_sort_key(x.base)[:2]


def edge_sort_key(e):
    if isinstance(e, BarEdge):
        return (0, 0) + vertex_sort_key(e.target)
    if isinstance(e, EpsEdge):
        return (1, e.n) + vertex_sort_key(e.target)
    return (2,) + edge_sort_key(e.base)


# ---------------------------------------------------------------------------
# the constructed graph


@dataclass
class BuiltGraph:
    """A horizon-bounded view of the directed graph built from an ultragraph.

    ``frontier`` marks vertices whose out-edge set may be incomplete under
    the truncation; every listed edge has both endpoints listed, and
    non-frontier regular vertices carry their complete out-edge set.
    """

    vertices: list
    edges: list
    source: dict
    target: dict
    word_depth: int
    vertex_horizon: int
    edge_horizon: int
    frontier: set = field(default_factory=set)

    def __post_init__(self):
        vset = set(self.vertices)
        for e in self.edges:
            if self.source[e] not in vset or self.target[e] not in vset:
                raise ValueError(f"dangling edge {e!r}")
        self._out = {v: [] for v in self.vertices}
        self._in = {v: [] for v in self.vertices}
        for e in self.edges:
            self._out[self.source[e]].append(e)
            self._in[self.target[e]].append(e)

    def has_vertex(self, v) -> bool:
        return v in self._out

    def out_edges(self, v) -> list:
        return self._out[v]

    def in_edges(self, v) -> list:
        return self._in[v]

    def is_frontier(self, v) -> bool:
        return v in self.frontier

    def graph_vertices(self) -> list[GraphVertex]:
        return [v for v in self.vertices if isinstance(v, GraphVertex)]

    def word_vertices(self) -> list[WordVertex]:
        return [v for v in self.vertices if isinstance(v, WordVertex)]

    # -- exports -----------------------------------------------------------

    @staticmethod
    def _vertex_json(x):
        if isinstance(x, GraphVertex):
            return {"kind": "v", "m": x.m}
        if isinstance(x, WordVertex):
            return {"kind": "w", "bits": str(x.word)}
        return {"kind": "tilde", "base": BuiltGraph._vertex_json(x.base)}

    @staticmethod
    def _edge_json(e, source, target):
        base = e.base if isinstance(e, TildeEdge) else e
        out = {"source": BuiltGraph._vertex_json(source),
               "target": BuiltGraph._vertex_json(target)}
        if isinstance(base, BarEdge):
            out["kind"] = "bar"
        else:
            out["kind"] = "eps"
            out["n"] = base.n
        if isinstance(e, TildeEdge):
            out["tilde"] = True
        return out

    def to_json(self) -> str:
        doc = {
            "params": {"word_depth": self.word_depth,
                       "vertex_horizon": self.vertex_horizon,
                       "edge_horizon": self.edge_horizon},
            "vertices": [dict(self._vertex_json(v),
                              frontier=self.is_frontier(v))
                         for v in sorted(self.vertices, key=vertex_sort_key)],
            "edges": [self._edge_json(e, self.source[e], self.target[e])
                      for e in sorted(self.edges, key=edge_sort_key)],
        }
        return json.dumps(doc, sort_keys=True, indent=2)

    def to_dot(self) -> str:
        def name(x):
            if isinstance(x, GraphVertex):
                return f"v{x.m}"
            if isinstance(x, WordVertex):
                return f"w{x.word}"
            return "t_" + name(x.base)

        lines = ["digraph E {", "  rankdir=LR;"]
        for v in sorted(self.vertices, key=vertex_sort_key):
            label = repr(v)
            shape = "circle" if isinstance(v, GraphVertex) else "box"
            style = ', style=dashed' if self.is_frontier(v) else ""
            lines.append(f'  {name(v)} [label="{label}", shape={shape}{style}];')
        for e in sorted(self.edges, key=edge_sort_key):
            s, t = name(self.source[e]), name(self.target[e])
            base = e.base if isinstance(e, TildeEdge) else e
            if isinstance(base, BarEdge):
                # double-headed rendering for the tree edges
                lines.append(f"  {s} -> {t} [arrowhead=vee, color=black, penwidth=2];")
            else:
                lines.append(f'  {s} -> {t} [label="{base.n}"];')
        lines.append("}")
        return "\n".join(lines) + "\n"
