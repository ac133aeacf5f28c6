"""Parser and elaborator for the ultragraph description language.

A description names a vertex universe (finite or infinite) and an ordered
edge supply, given as explicit edges and/or schematic edge families indexed
by a parameter k.  Ranges are predicate expressions over the vertex index m
(divisibility, comparisons against integer polynomials in k, and/or/not)
which elaborate to UPSets.  Example::

    ultragraph fig1 {
      vertices: infinite;
      winf: 4 | m;
      edges:
        family k in 1..: e[2*k-1] { s: v[2*k-1], r: (k+2) | m };
        family k in 1..: e[2*k]   { s: v[2*k],   r: m <= k^2 and not (4 | m) };
    }

Edge-index and source-index expressions are affine in k; bound polynomials
may be quadratic.  Comments run from ``#`` to end of line.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from functools import lru_cache
from math import lcm

from .model import INFINITE_EMITTER, Ultragraph, UncoveredIndex
from .upset import UPSet

__all__ = [
    "parse", "pretty_print", "UltragraphSpec", "SpecUltragraph",
    "ConcreteEdge", "FamilyClause",
    "DslSyntaxError", "CoverageError", "EmptyRangeError",
]


class DslSyntaxError(ValueError):
    def __init__(self, message, line, col):
        super().__init__(f"{line}:{col}: {message}")
        self.line, self.col = line, col


class CoverageError(ValueError):
    """Edge indices overlap or leave gaps."""


class EmptyRangeError(ValueError):
    """A range elaborated to the empty set."""


# ---------------------------------------------------------------------------
# range-expression AST


@dataclass(frozen=True)
class Poly:
    """c0 + c1*k + c2*k^2 with integer coefficients."""

    c0: int
    c1: int = 0
    c2: int = 0

    def __call__(self, k: int | None) -> int:
        if self.c1 == 0 and self.c2 == 0:
            return self.c0
        if k is None:
            raise ValueError("parameter-dependent value without a parameter")
        return self.c0 + self.c1 * k + self.c2 * k * k

    @property
    def is_affine(self) -> bool:
        return self.c2 == 0

    @property
    def is_constant(self) -> bool:
        return self.c1 == 0 and self.c2 == 0

    def text(self, param: str) -> str:
        parts = []
        if self.c2:
            parts.append(f"{self.c2}*{param}^2" if self.c2 != 1 else f"{param}^2")
        if self.c1:
            parts.append(f"{self.c1}*{param}" if self.c1 != 1 else param)
        if self.c0 or not parts:
            parts.append(str(self.c0))
        out = parts[0]
        for p in parts[1:]:
            out += f" - {p[1:]}" if p.startswith("-") else f" + {p}"
        return out

    def _binop(self, other, f):
        return Poly(f(self.c0, other.c0), f(self.c1, other.c1), f(self.c2, other.c2))


@dataclass(frozen=True)
class Divides:
    divisor: Poly

    def text(self, param):
        return f"({self.divisor.text(param)}) | m"


@dataclass(frozen=True)
class Cmp:
    op: str  # "<=", ">=", "=="
    bound: Poly

    def text(self, param):
        return f"m {self.op} ({self.bound.text(param)})"


@dataclass(frozen=True)
class Not:
    arg: "RangeExpr"

    def text(self, param):
        return f"not ({self.arg.text(param)})"


@dataclass(frozen=True)
class BoolOp:
    op: str  # "and" / "or"
    args: tuple

    def text(self, param):
        return f" {self.op} ".join(f"({a.text(param)})" for a in self.args)


RangeExpr = Divides | Cmp | Not | BoolOp


def eval_range(expr: RangeExpr, k: int | None) -> UPSet:
    """Elaborate a range expression at parameter value k."""
    if isinstance(expr, Divides):
        d = expr.divisor(k)
        if d < 1:
            raise EmptyRangeError(f"nonpositive divisor {d}")
        return UPSet.multiples(d)
    if isinstance(expr, Cmp):
        b = expr.bound(k)
        if expr.op == "<=":
            return UPSet.at_most(b)
        if expr.op == ">=":
            return UPSet.at_least(max(b, 1))
        return UPSet.singleton(b) if b >= 1 else UPSet.empty()
    if isinstance(expr, Not):
        return eval_range(expr.arg, k).complement()
    acc = eval_range(expr.args[0], k)
    for a in expr.args[1:]:
        nxt = eval_range(a, k)
        acc = acc.union(nxt) if expr.op == "or" else acc.intersect(nxt)
    return acc


def eval_predicate(expr: RangeExpr, k: int | None, m: int) -> bool:
    """Direct truth-value of the predicate at vertex m (brute-force oracle)."""
    if isinstance(expr, Divides):
        return m % expr.divisor(k) == 0
    if isinstance(expr, Cmp):
        b = expr.bound(k)
        return {"<=": m <= b, ">=": m >= b, "==": m == b}[expr.op]
    if isinstance(expr, Not):
        return not eval_predicate(expr.arg, k, m)
    vals = [eval_predicate(a, k, m) for a in expr.args]
    return any(vals) if expr.op == "or" else all(vals)


# ---------------------------------------------------------------------------
# clauses and specs


@dataclass(frozen=True)
class ConcreteEdge:
    index: int
    source: int
    range_expr: RangeExpr


@dataclass(frozen=True)
class FamilyClause:
    param: str
    index: Poly   # affine, positive stride
    source: Poly  # affine
    range_expr: RangeExpr

    def index_for(self, k: int) -> int:
        return self.index(k)

    def k_for_index(self, n: int) -> int | None:
        a, b = self.index.c1, self.index.c0
        if a == 0:
            return 1 if n == b else None
        k, rem = divmod(n - b, a)
        return k if rem == 0 and k >= 1 else None


@dataclass(frozen=True)
class UltragraphSpec:
    name: str
    universe_size: int | None
    winf_expr: RangeExpr | None
    clauses: tuple

    @property
    def has_families(self) -> bool:
        return any(isinstance(c, FamilyClause) for c in self.clauses)

    def clause_for(self, n: int):
        """(clause, k-or-None) covering edge index n."""
        for c in self.clauses:
            if isinstance(c, ConcreteEdge):
                if c.index == n:
                    return c, None
            else:
                k = c.k_for_index(n)
                if k is not None:
                    return c, k
        raise UncoveredIndex(n)

    def validate_coverage(self):
        """Every index 1, 2, ... covered exactly once (gap- and overlap-free)."""
        concrete = [c.index for c in self.clauses if isinstance(c, ConcreteEdge)]
        fams = [c for c in self.clauses if isinstance(c, FamilyClause)]
        for c in fams:
            if c.index.c1 < 1:
                raise CoverageError(
                    f"family index {c.index.text(c.param)} must increase with {c.param}")
        if fams:
            period = lcm(*(c.index.c1 for c in fams))
            first = [c.index(1) for c in fams] + concrete + [1]
            horizon = max(first) + 2 * period
        else:
            horizon = max(concrete, default=0)
        for n in range(1, horizon + 1):
            hits = sum(1 for i in concrete if i == n)
            hits += sum(1 for c in fams if c.k_for_index(n) is not None)
            if hits == 0:
                raise CoverageError(f"edge index {n} is not covered")
            if hits > 1:
                raise CoverageError(f"edge index {n} is covered {hits} times")
        # beyond the horizon the family pattern repeats with the lcm period,
        # so the window check above settles all larger indices too

    def max_index(self) -> int | None:
        if self.has_families:
            return None
        return max((c.index for c in self.clauses), default=0)


# ---------------------------------------------------------------------------
# tokenizer / parser

_TOKEN_RE = re.compile(r"""
    (?P<ws>\s+|\#[^\n]*)
  | (?P<int>\d+)
  | (?P<id>[A-Za-z_][A-Za-z_0-9]*)
  | (?P<sym><=|>=|==|\.\.|[{}\[\]():;,|^*+-])
""", re.VERBOSE)

_KEYWORDS = {"ultragraph", "vertices", "finite", "infinite", "winf",
             "edges", "edge", "family", "in", "and", "or", "not"}


@dataclass(frozen=True)
class _Tok:
    kind: str  # "int" | "id" | "sym" | "eof"
    text: str
    line: int
    col: int


def _tokenize(text: str) -> list[_Tok]:
    toks, pos, line, bol = [], 0, 1, 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if not m:
            raise DslSyntaxError(f"bad character {text[pos]!r}", line, pos - bol + 1)
        kind = m.lastgroup
        if kind != "ws":
            toks.append(_Tok(kind, m.group(), line, m.start() - bol + 1))
        line += m.group().count("\n")
        if "\n" in m.group():
            bol = m.start() + m.group().rindex("\n") + 1
        pos = m.end()
    toks.append(_Tok("eof", "", line, 1))
    return toks


class _Parser:
    def __init__(self, text: str):
        self.toks = _tokenize(text)
        self.i = 0

    # -- token helpers --

    def peek(self) -> _Tok:
        return self.toks[self.i]

    def next(self) -> _Tok:
        t = self.toks[self.i]
        self.i += 1
        return t

    def error(self, message):
        t = self.peek()
        raise DslSyntaxError(message + f" (got {t.text!r})", t.line, t.col)

    def expect(self, text):
        t = self.next()
        if t.text != text:
            self.i -= 1
            self.error(f"expected {text!r}")
        return t

    def accept(self, text) -> bool:
        if self.peek().text == text:
            self.i += 1
            return True
        return False

    def expect_int(self) -> int:
        t = self.next()
        if t.kind != "int":
            self.i -= 1
            self.error("expected an integer")
        return int(t.text)

    def expect_ident(self) -> str:
        t = self.next()
        if t.kind != "id" or t.text in _KEYWORDS:
            self.i -= 1
            self.error("expected an identifier")
        return t.text

    # -- grammar --

    def spec(self) -> UltragraphSpec:
        self.expect("ultragraph")
        name = self.expect_ident()
        self.expect("{")
        self.expect("vertices")
        self.expect(":")
        if self.accept("infinite"):
            universe = None
        else:
            self.expect("finite")
            universe = self.expect_int()
        self.expect(";")
        winf = None
        if self.accept("winf"):
            self.expect(":")
            winf = self.range_expr(param=None)
            self.expect(";")
        self.expect("edges")
        self.expect(":")
        clauses = []
        while not self.accept("}"):
            clauses.append(self.clause())
        if self.peek().kind != "eof":
            self.error("trailing input after spec")
        spec = UltragraphSpec(name, universe, winf, tuple(clauses))
        spec.validate_coverage()
        return spec

    def clause(self):
        if self.accept("edge"):
            self.expect("e")
            self.expect("[")
            index = self.expect_int()
            self.expect("]")
            src, rng = self.edge_body(param=None)
            self.expect(";")
            return ConcreteEdge(index, src(None), rng)
        self.expect("family")
        param = self.expect_ident()
        self.expect("in")
        self.expect_int()
        self.expect("..")
        self.expect(":")
        self.expect("e")
        self.expect("[")
        index = self.poly(param)
        self.expect("]")
        if not index.is_affine:
            self.error("edge index must be affine in the parameter")
        src, rng = self.edge_body(param)
        self.expect(";")
        if not src.is_affine:
            self.error("source index must be affine in the parameter")
        return FamilyClause(param, index, src, rng)

    def edge_body(self, param):
        self.expect("{")
        self.expect("s")
        self.expect(":")
        self.expect("v")
        self.expect("[")
        src = self.poly(param) if param else Poly(self.expect_int())
        self.expect("]")
        self.expect(",")
        self.expect("r")
        self.expect(":")
        rng = self.range_expr(param)
        self.expect("}")
        if param is None:
            return (lambda _k, s=src: s(None)), rng
        return src, rng

    # range expressions ---------------------------------------------------

    def range_expr(self, param) -> RangeExpr:
        return self.or_expr(param)

    def or_expr(self, param):
        args = [self.and_expr(param)]
        while self.accept("or"):
            args.append(self.and_expr(param))
        return args[0] if len(args) == 1 else BoolOp("or", tuple(args))

    def and_expr(self, param):
        args = [self.unary_expr(param)]
        while self.accept("and"):
            args.append(self.unary_expr(param))
        return args[0] if len(args) == 1 else BoolOp("and", tuple(args))

    def unary_expr(self, param):
        if self.accept("not"):
            return Not(self.unary_expr(param))
        return self.primary_expr(param)

    def primary_expr(self, param):
        # divisibility atoms start with a polynomial, so try that first and
        # backtrack into a parenthesized range expression on failure
        mark = self.i
        try:
            d = self.poly(param)
            self.expect("|")
            self.expect("m")
            return Divides(d)
        except DslSyntaxError:
            self.i = mark
        if self.accept("("):
            inner = self.range_expr(param)
            self.expect(")")
            return inner
        if self.accept("m"):
            t = self.next()
            if t.text not in ("<=", ">=", "=="):
                self.i -= 1
                self.error("expected <=, >= or ==")
            bound = self.poly(param)
            return Cmp(t.text, bound)
        self.error("expected a range atom")

    # integer polynomials in the family parameter -------------------------

    def poly(self, param) -> Poly:
        acc = self.poly_term(param)
        while self.peek().text in ("+", "-"):
            op = self.next().text
            rhs = self.poly_term(param)
            acc = acc._binop(rhs, (lambda a, b: a + b) if op == "+" else (lambda a, b: a - b))
        return acc

    def poly_term(self, param) -> Poly:
        acc = self.poly_factor(param)
        while self.accept("*"):
            rhs = self.poly_factor(param)
            c2 = acc.c0 * rhs.c2 + acc.c1 * rhs.c1 + acc.c2 * rhs.c0
            if acc.c2 * rhs.c1 or acc.c1 * rhs.c2 or acc.c2 * rhs.c2:
                self.error("polynomial degree exceeds 2")
            acc = Poly(acc.c0 * rhs.c0, acc.c0 * rhs.c1 + acc.c1 * rhs.c0, c2)
        return acc

    def poly_factor(self, param) -> Poly:
        if self.accept("-"):
            inner = self.poly_factor(param)
            return Poly(-inner.c0, -inner.c1, -inner.c2)
        if self.accept("("):
            inner = self.poly(param)
            self.expect(")")
            return inner
        t = self.peek()
        if t.kind == "int":
            return Poly(self.expect_int())
        if t.kind == "id" and param is not None and t.text == param:
            self.next()
            if self.accept("^"):
                exp = self.expect_int()
                if exp == 1:
                    return Poly(0, 1)
                if exp == 2:
                    return Poly(0, 0, 1)
                self.error("exponent must be 1 or 2")
            return Poly(0, 1)
        self.error("expected an integer or the family parameter")


def parse(text: str) -> UltragraphSpec:
    """Parse an ultragraph description; raises on malformed or invalid input."""
    return _Parser(text).spec()


def parse_range_expr(text: str, param: str | None = None) -> RangeExpr:
    """Parse a bare range expression, optionally over a family parameter."""
    p = _Parser(text)
    expr = p.range_expr(param)
    if p.peek().kind != "eof":
        p.error("trailing input after range expression")
    return expr


def parse_affine(text: str, param: str) -> Poly:
    """Parse a bare affine expression in the given parameter."""
    p = _Parser(text)
    poly = p.poly(param)
    if p.peek().kind != "eof":
        p.error("trailing input after expression")
    if not poly.is_affine:
        p.error("expression must be affine in the parameter")
    return poly


def pretty_print(spec: UltragraphSpec) -> str:
    lines = [f"ultragraph {spec.name} {{"]
    uni = "infinite" if spec.universe_size is None else f"finite {spec.universe_size}"
    lines.append(f"  vertices: {uni};")
    if spec.winf_expr is not None:
        lines.append(f"  winf: {spec.winf_expr.text('_')};")
    lines.append("  edges:")
    for c in spec.clauses:
        if isinstance(c, ConcreteEdge):
            lines.append(f"    edge e[{c.index}] {{ s: v[{c.source}], "
                         f"r: {c.range_expr.text('_')} }};")
        else:
            lines.append(
                f"    family {c.param} in 1..: e[{c.index.text(c.param)}] "
                f"{{ s: v[{c.source.text(c.param)}], "
                f"r: {c.range_expr.text(c.param)} }};")
    lines.append("}")
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# spec-backed ultragraph


class SpecUltragraph(Ultragraph):
    """Lazily instantiated ultragraph backed by a parsed description."""

    def __init__(self, spec: UltragraphSpec):
        self.spec = spec
        self.universe_size = spec.universe_size
        self.edge_count = spec.max_index()
        self._memo: dict[int, tuple[int, UPSet]] = {}

    def instantiate(self, n: int) -> tuple[int, UPSet]:
        """(source vertex, canonical range UPSet) of edge e_n."""
        if n < 1:
            raise UncoveredIndex(n)
        hit = self._memo.get(n)
        if hit is not None:
            return hit
        clause, k = self.spec.clause_for(n)
        if isinstance(clause, ConcreteEdge):
            src, rng = clause.source, eval_range(clause.range_expr, None)
        else:
            src, rng = clause.source(k), eval_range(clause.range_expr, k)
        if self.universe_size is not None:
            rng = rng.intersect(UPSet.at_most(self.universe_size))
        if rng.is_empty():
            raise EmptyRangeError(f"range of e_{n} is empty")
        if src < 1 or (self.universe_size is not None and src > self.universe_size):
            raise ValueError(f"source v_{src} of e_{n} outside the universe")
        self._memo[n] = (src, rng)
        return src, rng

    def source(self, n: int) -> int:
        return self.instantiate(n)[0]

    def erange(self, n: int) -> UPSet:
        return self.instantiate(n)[1]

    def out_edges(self, v: int):
        out = []
        for c in self.spec.clauses:
            if isinstance(c, ConcreteEdge):
                if c.source == v:
                    out.append(c.index)
            else:
                a, b = c.source.c1, c.source.c0
                if a == 0:
                    if v == b:
                        return INFINITE_EMITTER
                else:
                    k, rem = divmod(v - b, a)
                    if rem == 0 and k >= 1:
                        out.append(c.index(k))
        return sorted(out)

    def winf_upset(self) -> UPSet | None:
        if self.spec.winf_expr is None:
            return None
        return eval_range(self.spec.winf_expr, None)


@lru_cache(maxsize=None)
def _example_text() -> str:
    from importlib import resources

    return resources.files("ultragraph.data").joinpath("example_fig1.ug").read_text()


def example_fig1() -> SpecUltragraph:
    """The bundled two-family schematic instance used throughout the tests."""
    return SpecUltragraph(parse(_example_text()))
