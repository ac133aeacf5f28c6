"""Unit tests for the command-line interface."""

import json

import pytest

from ultragraph.cli import main

FINITE = """
ultragraph two {
  vertices: finite 2;
  edges:
    edge e[1] { s: v[1], r: m == 2 };
}
"""


@pytest.fixture
def finite_spec(tmp_path):
    path = tmp_path / "two.ug"
    path.write_text(FINITE)
    return str(path)


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


class TestBuild:
    def test_example_summary(self, capsys):
        code, out, _ = run(capsys, "build", "example", "-D", "7",
                           "-M", "8", "-N", "8")
        assert code == 0
        assert "Gamma0: 1 001 00001" in out
        assert "X(7) = v6 v12 v24 1000001 1000101 1010001 1010101" in out

    def test_degenerate_report(self, capsys, finite_spec):
        code, out, _ = run(capsys, "build", finite_spec)
        assert code == 0
        assert "degenerate: edge-split graph" in out

    def test_bad_spec_exits_nonzero(self, capsys, tmp_path):
        bad = tmp_path / "bad.ug"
        bad.write_text("ultragraph g { vertices: finite 2; edges: "
                       "edge e[1] { s: v[1], r: m >= 9 }; }")
        code, _, err = run(capsys, "build", str(bad))
        assert code == 1 and "EmptyRangeError" in err

    def test_missing_file(self, capsys):
        code, _, err = run(capsys, "build", "/nonexistent.ug")
        assert code == 1 and err

    def test_json_deterministic(self, capsys):
        _, first, _ = run(capsys, "build", "example", "--format", "json")
        _, second, _ = run(capsys, "build", "example", "--format", "json")
        assert first == second
        json.loads(first)

    def test_dot_renders_tree_edges(self, capsys):
        code, out, _ = run(capsys, "build", "example", "--format", "dot")
        assert code == 0 and "arrowhead=vee" in out


class TestVerify:
    def test_finite_instance_all_pass(self, capsys, finite_spec):
        code, out, _ = run(capsys, "verify", finite_spec)
        assert code == 0
        assert "FAIL" not in out

    def test_example_truncation(self, capsys):
        code, out, _ = run(capsys, "verify", "example", "-D", "6",
                           "-N", "6")
        assert code == 0
        assert "PASS sigma-consistency" in out


class TestDemo:
    def test_matches_goldens(self, capsys):
        code, out, _ = run(capsys, "demo")
        assert code == 0
        assert out.count("PASS") == 4


class TestOtherCommands:
    def test_paths(self, capsys):
        code, out, _ = run(capsys, "paths", "example", "4", "3",
                           "--max-eps", "1")
        assert code == 0 and "PASS" in out

    def test_check_k(self, capsys, finite_spec):
        code, out, _ = run(capsys, "check-k", finite_spec)
        assert code == 0 and "Holds" in out

    def test_sigma(self, capsys):
        code, out, _ = run(capsys, "sigma", "example", "-M", "5")
        assert code == 0 and "v3 100" in out

    def test_xsets(self, capsys, finite_spec):
        code, out, _ = run(capsys, "xsets", finite_spec)
        assert code == 0 and "X(1) = v2" in out

    def test_ideals_enumerate(self, capsys, finite_spec):
        code, out, _ = run(capsys, "ideals", "enumerate", finite_spec)
        assert code == 0 and "2 admissible pairs" in out

    def test_ideals_correspond(self, capsys, finite_spec):
        code, out, _ = run(capsys, "ideals", "correspond", finite_spec)
        assert code == 0 and "surjective: yes" in out

    def test_quotient_full(self, capsys, finite_spec):
        code, out, _ = run(capsys, "quotient", finite_spec, "--H", "1,2")
        assert code == 0 and "0 vertices" in out

    def test_quotient_inadmissible(self, capsys, finite_spec):
        code, _, err = run(capsys, "quotient", finite_spec, "--H", "2")
        assert code == 1 and "not admissible" in err

    def test_import_matrix(self, capsys, tmp_path):
        f = tmp_path / "m.txt"
        f.write_text("1 0\n0 1\n")
        code, out, _ = run(capsys, "import-matrix", str(f))
        assert code == 0 and "e1: v1 -> {1}" in out

    def test_import_matrix_schematic(self, capsys, tmp_path):
        f = tmp_path / "m.txt"
        f.write_text("row 2*i-1: (i+2) | m\nrow 2*i: m <= i^2\n")
        code, out, _ = run(capsys, "import-matrix", str(f))
        assert code == 0 and "family i in 1.." in out

    def test_fuzz(self, capsys):
        code, out, _ = run(capsys, "fuzz", "--seed", "7", "--count", "10")
        assert code == 0
        assert "10/10 instances clean" in out
