"""Exact combinatorics of ultragraphs and their associated directed graphs."""

from .builder import (
    DeclaredOracle, FiniteEdgeOracle, GraphBuilder, IdentityCheck,
    IdentityReport, VertexClass, VertexOracle, edge_split_graph,
    verify_set_identities,
)
from .dsl import (
    CoverageError, DslSyntaxError, EmptyRangeError, SpecUltragraph,
    UltragraphSpec, example_fig1, parse, pretty_print,
)
from .model import (
    INFINITE_EMITTER, AllZeroWord, BarEdge, BinaryWord, BuiltGraph, EpsEdge,
    FiniteUltragraph, GraphVertex, InvalidIndexSets, TildeEdge, TildeVertex,
    UncoveredIndex, UndecidableAtHorizon, Ultragraph, WordVertex,
    r_lambda_mu, r_omega,
)
from .fuzz import fuzz_instances, random_finite_ultragraph, run_fuzz
from .ideals import (
    AdmissiblePair, GraphIdealPair, IdealG0, InfiniteUniverse,
    SetAlgebraG0, ZeroRow, check_admissible, enumerate_admissible_pairs,
    enumerate_graph_pairs, g0_algebra, matrix_to_ultragraph,
    parse_matrix_file, quotient_graph, theta, verify_ideal_correspondence,
)
from .paths import (
    EPath, Factorization, HorizonTooSmall, KVerdict, PathBijectionReport,
    ReturnCount, condition_k, enumerate_e_paths, enumerate_first_returns,
    enumerate_g_paths, f_path, factorize, first_return_count, recompose,
    verify_path_bijection,
)
from .upset import Cardinality, UPSet

__version__ = "0.1.0"
