"""Command-line front door.

Parses ultragraph descriptions, runs the construction and the verification
suites, exports DOT/JSON, reproduces the bundled worked instance, and
drives the randomized property harness.
"""

import argparse
import sys
from importlib import resources
from pathlib import Path

from .builder import (DeclaredOracle, GraphBuilder, edge_split_graph,
                      verify_set_identities)
from .dsl import SpecUltragraph, example_fig1, parse, pretty_print
from .fuzz import run_fuzz
from .ideals import (IdealG0, check_admissible, AdmissiblePair, g0_algebra,
                     enumerate_admissible_pairs, parse_matrix_file,
                     quotient_graph, theta, verify_ideal_correspondence,
                     fin_inf_vertices)
from .model import FiniteUltragraph, GraphVertex, Ultragraph
from .paths import condition_k, first_return_count, verify_path_bijection


# ---------------------------------------------------------------------------
# loading and shared options


def load_graph(path: str) -> Ultragraph:
    """An ultragraph from a description file; "example" is the bundled one."""
    if path == "example":
        return example_fig1()
    return SpecUltragraph(parse(Path(path).read_text()))


def make_builder(graph: Ultragraph, sigma_cap: int) -> GraphBuilder:
    oracle = None
    if isinstance(graph, SpecUltragraph):
        declared = graph.winf_upset()
        if declared is not None:
            oracle = DeclaredOracle(declared)
    return GraphBuilder(graph, oracle, sigma_cap=sigma_cap)


def is_degenerate(graph: Ultragraph) -> bool:
    """All-finite-range, finitely many edges: E is the edge-split graph."""
    if graph.edge_count is None:
        return False
    return all(graph.erange(n).is_finite()
               for n in range(1, graph.edge_count + 1))


def add_common(sub, spec_arg=True):
    if spec_arg:
        sub.add_argument("spec", help="description file, or 'example'")
    sub.add_argument("-D", "--word-depth", type=int, default=7)
    sub.add_argument("-M", "--vertex-horizon", type=int, default=8)
    sub.add_argument("-N", "--edge-horizon", type=int, default=8)
    sub.add_argument("--sigma-cap", type=int, default=64)
    sub.add_argument("--format", choices=("text", "json", "dot"),
                     default="text")
    sub.add_argument("--output", help="write json/dot to this file")


def clamp_horizons(graph: Ultragraph, args):
    d, m, n = args.word_depth, args.vertex_horizon, args.edge_horizon
    if d < 0 or m < 1 or n < 1:
        raise ValueError("horizons must be positive")
    if graph.universe_size is not None:
        m = min(m, graph.universe_size)
    if graph.edge_count is not None:
        d = min(d, graph.edge_count)
        n = min(n, graph.edge_count)
    return d, m, n


def emit(args, built, summary_lines):
    if args.format == "json":
        payload = built.to_json()
    elif args.format == "dot":
        payload = built.to_dot()
    else:
        payload = "\n".join(summary_lines)
    if args.output:
        Path(args.output).write_text(payload + "\n")
    else:
        print(payload)


# ---------------------------------------------------------------------------
# table rendering (shared by build, demo, and the golden files)


def render_gamma0(builder: GraphBuilder, max_len: int) -> list[str]:
    return [str(w) for w in builder.gamma0_words(max_len)]


def render_w0(builder: GraphBuilder, count: int) -> list[str]:
    out = []
    v = 0
    cap = builder.graph.universe_size or builder.first_hit_cap
    while len(out) < count and v < cap:
        v += 1
        if not builder.classify(v).in_w_plus:
            out.append(str(v))
    return out


def render_sigma(builder: GraphBuilder, upto: int) -> list[str]:
    lines = []
    cap = builder.graph.universe_size
    for v in range(1, upto + 1):
        if cap is not None and v > cap:
            break
        word = builder.sigma(v)
        lines.append(f"v{v} {word if word is not None else '-'}")
    return lines


def render_xsets(builder: GraphBuilder, upto: int) -> list[str]:
    lines = []
    cap = builder.graph.edge_count
    for n in range(1, upto + 1):
        if cap is not None and n > cap:
            break
        verts, words = builder.x_set(n)
        items = [f"v{v}" for v in verts] + [str(w) for w in words]
        lines.append(f"X({n}) = {' '.join(items)}")
    return lines


def render_delta_sizes(builder: GraphBuilder, depth: int) -> list[str]:
    return [f"|Delta_{n}| = {len(builder.delta_level(n))}"
            for n in range(1, depth + 1)]


# ---------------------------------------------------------------------------
# commands


def cmd_build(args) -> int:
    graph = load_graph(args.spec)
    builder = make_builder(graph, args.sigma_cap)
    d, m, n = clamp_horizons(graph, args)
    built = builder.build_e(d, m, n)
    lines = [f"vertices: {len(built.vertices)}  edges: {len(built.edges)}  "
             f"frontier: {len(built.frontier)}"]
    if is_degenerate(graph):
        lines.append("degenerate: edge-split graph")
    lines.extend(render_delta_sizes(builder, d))
    lines.append("Gamma0: " + " ".join(render_gamma0(builder, d)))
    lines.append("W0: " + " ".join(render_w0(builder, m)))
    lines.append("sigma:")
    lines.extend("  " + s for s in render_sigma(builder, m))
    lines.extend(render_xsets(builder, n))
    emit(args, built, lines)
    return 0


def cmd_verify(args) -> int:
    graph = load_graph(args.spec)
    builder = make_builder(graph, args.sigma_cap)
    d, m, n = clamp_horizons(graph, args)
    window = min(m * 8, 200)
    report = verify_set_identities(builder, depth=d, edge_horizon=n,
                                   window=window)
    print(report.render())
    failed = not report.ok
    built = builder.build_e(d, m, n)
    problems = builder.check_regular(built)
    print(f"{'FAIL' if problems else 'PASS'} regular-profile "
          f"{len(built.vertices)} vertices")
    for p in problems:
        print("  " + p)
    failed = failed or bool(problems)

    finite = graph.universe_size is not None and graph.edge_count is not None
    if finite:
        bad_pairs = 0
        for v in range(1, graph.universe_size + 1):
            for w in range(1, graph.universe_size + 1):
                rep = verify_path_bijection(builder, built, v, w, 2)
                if not rep.ok:
                    bad_pairs += 1
                    print(rep.render())
        print(f"{'FAIL' if bad_pairs else 'PASS'} path-bijection "
              f"all pairs, eps<=2")
        kg, ke = condition_k(graph), condition_k(built)
        agree = kg.kind == ke.kind
        print(f"{'PASS' if agree else 'FAIL'} condition-k "
              f"ultragraph={kg!r} graph={ke!r}")
        ideal_rep = verify_ideal_correspondence(graph)
        print(ideal_rep.render())
        failed = failed or bad_pairs or not agree or not ideal_rep.ok
    else:
        ke = condition_k(built)
        print(f"INFO condition-k on the truncation: {ke!r}")
    return 1 if failed else 0


def cmd_demo(args) -> int:
    builder = make_builder(example_fig1(), 64)
    produced = {
        "gamma0.txt": render_gamma0(builder, 29),
        "w0.txt": render_w0(builder, 10),
        "sigma.txt": render_sigma(builder, 20),
        "xsets.txt": render_xsets(builder, 8),
    }
    golden_dir = resources.files("ultragraph.data").joinpath("golden")
    failed = False
    for name, lines in sorted(produced.items()):
        expected = golden_dir.joinpath(name).read_text().splitlines()
        if lines == expected:
            print(f"PASS {name} ({len(lines)} lines)")
        else:
            failed = True
            print(f"FAIL {name}")
            for got, want in zip(lines + ["<missing>"] * len(expected),
                                 expected + ["<missing>"] * len(lines)):
                if got != want:
                    print(f"  got {got!r}, want {want!r}")
    return 1 if failed else 0


def cmd_paths(args) -> int:
    graph = load_graph(args.spec)
    builder = make_builder(graph, args.sigma_cap)
    d, m, n = clamp_horizons(graph, args)
    built = builder.build_e(d, m, n)
    rep = verify_path_bijection(builder, built, args.v, args.w, args.max_eps)
    print(rep.render())
    return 0 if rep.ok else 1


def cmd_check_k(args) -> int:
    graph = load_graph(args.spec)
    builder = make_builder(graph, args.sigma_cap)
    d, m, n = clamp_horizons(graph, args)
    built = builder.build_e(d, m, n)
    for v in graph.vertex_ids(m):
        print(f"v{v}: first returns {first_return_count(graph, v, m, n)!r}")
    kg = condition_k(graph, m, n)
    ke = condition_k(built)
    print(f"ultragraph: {kg!r}")
    print(f"graph: {ke!r}")
    agree = kg.kind == ke.kind or "unknown" in (kg.kind, ke.kind)
    print(f"{'PASS' if agree else 'FAIL'} verdicts compatible")
    return 0 if agree else 1


def cmd_sigma(args) -> int:
    graph = load_graph(args.spec)
    builder = make_builder(graph, args.sigma_cap)
    _, m, _ = clamp_horizons(graph, args)
    for line in render_sigma(builder, m):
        print(line)
    return 0


def cmd_xsets(args) -> int:
    graph = load_graph(args.spec)
    builder = make_builder(graph, args.sigma_cap)
    _, _, n = clamp_horizons(graph, args)
    for line in render_xsets(builder, n):
        print(line)
    return 0


def cmd_ideals(args) -> int:
    graph = load_graph(args.spec)
    if args.mode == "enumerate":
        pairs = enumerate_admissible_pairs(graph)
        for p in pairs:
            print(repr(p))
        print(f"{len(pairs)} admissible pairs")
        return 0
    rep = verify_ideal_correspondence(graph)
    print(rep.render())
    return 0 if rep.ok else 1


def cmd_quotient(args) -> int:
    graph = load_graph(args.spec)
    builder = make_builder(graph, args.sigma_cap)
    d, m, n = clamp_horizons(graph, args)
    built = builder.build_e(d, m, n)
    top = frozenset(int(t) for t in args.H.split(",") if t)
    v_set = frozenset(int(t) for t in args.V.split(",") if t)
    alg = g0_algebra(graph)
    if top not in alg:
        print(f"error: {{{args.H}}} is not in the vertex-set algebra",
              file=sys.stderr)
        return 1
    ideal = IdealG0(alg, top)
    bad = check_admissible(graph, AdmissiblePair(ideal, v_set))
    if bad:
        print("error: pair is not admissible: " + "; ".join(bad),
              file=sys.stderr)
        return 1
    th = theta(builder, ideal, d)
    fin = frozenset(GraphVertex(v)
                    for v in fin_inf_vertices(graph, ideal))
    quot = quotient_graph(built, th, fin,
                          frozenset(GraphVertex(v) for v in v_set))
    lines = [f"removed {len(th)} vertices; quotient has "
             f"{len(quot.vertices)} vertices, {len(quot.edges)} edges"]
    emit(args, quot, lines)
    return 0


def cmd_import_matrix(args) -> int:
    graph = parse_matrix_file(Path(args.file).read_text())
    if isinstance(graph, SpecUltragraph):
        print(pretty_print(graph.spec), end="")
    else:
        print(f"vertices: {graph.universe_size}")
        for n in range(1, graph.edge_count + 1):
            members = ",".join(
                map(str, sorted(graph.erange(n).members())))
            print(f"e{n}: v{graph.source(n)} -> {{{members}}}")
    return 0


def cmd_fuzz(args) -> int:
    rep = run_fuzz(args.seed, args.count, max_eps=args.max_eps)
    print(rep.render())
    return 0 if rep.ok else 1


# ---------------------------------------------------------------------------
# argument parsing


def build_parser() -> argparse.ArgumentParser:
    top = argparse.ArgumentParser(
        prog="ultragraph",
        description="Exact combinatorics of ultragraphs and their graphs")
    subs = top.add_subparsers(dest="command", required=True)

    sub = subs.add_parser("build", help="construct the graph and summarize")
    add_common(sub)
    sub.set_defaults(func=cmd_build)

    sub = subs.add_parser("verify", help="run every decidable check")
    add_common(sub)
    sub.set_defaults(func=cmd_verify)

    sub = subs.add_parser("demo",
                          help="reproduce the bundled worked instance")
    sub.set_defaults(func=cmd_demo)

    sub = subs.add_parser("paths", help="check the path bijection for a pair")
    add_common(sub)
    sub.add_argument("v", type=int)
    sub.add_argument("w", type=int)
    sub.add_argument("--max-eps", type=int, default=2)
    sub.set_defaults(func=cmd_paths)

    sub = subs.add_parser("check-k", help="first returns and Condition (K)")
    add_common(sub)
    sub.set_defaults(func=cmd_check_k)

    sub = subs.add_parser("sigma", help="print the sigma table")
    add_common(sub)
    sub.set_defaults(func=cmd_sigma)

    sub = subs.add_parser("xsets", help="print the target sets X(n)")
    add_common(sub)
    sub.set_defaults(func=cmd_xsets)

    sub = subs.add_parser("ideals", help="admissible-pair combinatorics")
    sub.add_argument("mode", choices=("enumerate", "correspond"))
    add_common(sub)
    sub.set_defaults(func=cmd_ideals)

    sub = subs.add_parser("quotient", help="quotient by an admissible pair")
    add_common(sub)
    sub.add_argument("--H", default="", help="top set, comma-separated")
    sub.add_argument("--V", default="", help="breaking vertices")
    sub.set_defaults(func=cmd_quotient)

    sub = subs.add_parser("import-matrix",
                          help="ultragraph of a {0,1}-matrix")
    sub.add_argument("file")
    sub.set_defaults(func=cmd_import_matrix)

    sub = subs.add_parser("fuzz", help="randomized property harness")
    sub.add_argument("--seed", type=int, default=42)
    sub.add_argument("--count", type=int, default=200)
    sub.add_argument("--max-eps", type=int, default=3)
    sub.set_defaults(func=cmd_fuzz)

    return top


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except Exception as exc:  # argparse handles its own errors
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
