import json

import pytest

from app.cli import EXIT_ASSERTION, EXIT_BUDGET, EXIT_OK, EXIT_USAGE, main
from app.graphs.colored_graph import ColoredGraph
from app.graphs.graph_io import parse_graph, parse_sequence, render_graph, render_sequence
from app.graphs.isomorphism import is_isomorphic
from app.graphs.trigraph import ContractionSequence
from app.schemas.experiment_dto import SampleOutcome
from app.services import experiment_service
from tests.utils.graph_factory import GraphFactory


@pytest.fixture
def write_graph(tmp_path):
    def write(name: str, g: ColoredGraph) -> str:
        path = tmp_path / f"{name}.graph"
        path.write_text(render_graph(g), encoding="utf-8")
        return str(path)

    return write


class TestGenerate:
    """Test the gen subcommands"""

    def test_halfgraph(self, capsys, p4: ColoredGraph):
        """Test that H_2 is printed in the graph format"""
        assert main(["gen", "halfgraph", "-t", "2"]) == EXIT_OK
        assert is_isomorphic(parse_graph(capsys.readouterr().out), p4)

    def test_halfgraph_schedule(self, capsys):
        """Test that the schedule prints merge lines"""
        assert main(["gen", "halfgraph", "-t", "3", "--schedule"]) == EXIT_OK
        s = parse_sequence(capsys.readouterr().out)
        assert s.is_full

    def test_cfi_json(self, capsys):
        """Test the JSON document for a CFI graph"""
        assert main(["--json", "gen", "cfi", "--base", "K4", "--odd"]) == EXIT_OK
        document = json.loads(capsys.readouterr().out)
        assert (document["n"], document["m"]) == (40, 60)

    def test_out_directory(self, capsys, tmp_path):
        """Test that --out keeps the generated graphs"""
        out = tmp_path / "out"
        assert main(["--out", str(out), "gen", "cfi"]) == EXIT_OK
        assert (out / "cfi-even.graph").is_file()
        assert (out / "cfi-odd.graph").is_file()
        assert (out / "cfi.graph").is_file()

    def test_tww1_with_sequence(self, capsys):
        """Test that a generated sequence file verifies"""
        assert main(["gen", "tww1", "-n", "8", "--seed", "3", "--with-sequence"]) == EXIT_OK
        assert len(parse_sequence(capsys.readouterr().out)) == 7

    def test_subdivide(self, capsys, write_graph, k4: ColoredGraph):
        """Test subdividing a graph file"""
        assert main(["gen", "subdivide", write_graph("k4", k4), "-s", "1"]) == EXIT_OK
        assert parse_graph(capsys.readouterr().out).n == 10


class TestTwinWidthCommands:
    """Test tww and canon subcommands"""

    def test_exact(self, capsys, write_graph, c5: ColoredGraph):
        """Test the exact twin-width of C5"""
        assert main(["tww", write_graph("c5", c5)]) == EXIT_OK
        assert capsys.readouterr().out.strip() == "twin-width 2"

    def test_exhausted_budget(self, capsys, write_graph, c5: ColoredGraph):
        """Test exit code 3 with bounds when the node cap is hit"""
        assert main(["tww", write_graph("c5", c5), "--max-nodes", "1"]) == EXIT_BUDGET
        assert "bounds [1, 2]" in capsys.readouterr().out

    def test_naive_guard(self, capsys, write_graph):
        """Test exit code 3 when the enumeration oracle refuses"""
        assert main(["tww", write_graph("p9", GraphFactory.path(9)), "--naive"]) == EXIT_BUDGET
        assert "refused" in capsys.readouterr().err

    def test_verify(self, capsys, tmp_path, p4: ColoredGraph):
        """Test sequence verification"""
        path = tmp_path / "p4.seq"
        path.write_text(render_sequence(ContractionSequence(p4, [(0, 1), (2, 3), (4, 5)])))
        assert main(["--json", "tww", str(path), "--verify"]) == EXIT_OK
        assert json.loads(capsys.readouterr().out)["width"] == 1

    def test_canon_and_iso(self, capsys, write_graph, p4: ColoredGraph):
        """Test canonical forms and the isomorphism test"""
        reversed_p4 = ColoredGraph(4, [(3, 2), (2, 1), (1, 0)])
        g, h = write_graph("g", p4), write_graph("h", ColoredGraph(4, [(1, 3), (3, 0), (0, 2)]))
        assert main(["canon", g]) == EXIT_OK
        first = capsys.readouterr().out
        assert main(["canon", write_graph("r", reversed_p4)]) == EXIT_OK
        assert capsys.readouterr().out == first
        assert main(["iso", g, h]) == EXIT_OK
        assert capsys.readouterr().out.strip() == "isomorphic"

    def test_cs_failure(self, capsys, write_graph, p4: ColoredGraph):
        """Test the cs string of a failing start pair"""
        assert main(["canon", write_graph("p4", p4), "--cs", "0", "3"]) == EXIT_OK
        assert capsys.readouterr().out.strip() == "Failure"

    def test_cs_needs_two_vertices(self, capsys, write_graph, p4: ColoredGraph):
        """Test the --cs arity check"""
        assert main(["canon", write_graph("p4", p4), "--cs", "0"]) == EXIT_USAGE

    def test_canon_rejects_c5(self, capsys, write_graph, c5: ColoredGraph):
        """Test that twin-width 2 is an input error for canon"""
        assert main(["canon", write_graph("c5", c5)]) == EXIT_USAGE

    def test_recognize_and_modtree(self, capsys, write_graph, p4: ColoredGraph, c5: ColoredGraph):
        """Test recognition answers and the tree document"""
        assert main(["recognize-tww1", write_graph("c5", c5)]) == EXIT_OK
        assert capsys.readouterr().out.strip() == "no"
        assert main(["modtree", write_graph("p4", p4)]) == EXIT_OK
        assert json.loads(capsys.readouterr().out)["label"] == "prime"


class TestWlCommands:
    """Test wl, pebble and analyze subcommands"""

    def test_wl_distinguish(self, capsys, write_graph, p4, p3_plus_k1):
        """Test the 1-WL verdict on P4 and P3 + K1"""
        argv = ["--json", "wl", "distinguish", write_graph("g", p4), write_graph("h", p3_plus_k1)]
        assert main(argv) == EXIT_OK
        assert json.loads(capsys.readouterr().out)["distinguished"] is True

    def test_wl_refine(self, capsys, write_graph, p4):
        """Test the refine summary"""
        assert main(["--json", "wl", "refine", write_graph("p4", p4), "-k", "1"]) == EXIT_OK
        assert json.loads(capsys.readouterr().out)["classes"] == 2

    def test_pebble(self, capsys, write_graph, p4, p3_plus_k1):
        """Test the pebble game winner"""
        assert main(["pebble", write_graph("g", p4), write_graph("h", p3_plus_k1), "-k", "2"]) == EXIT_OK
        assert capsys.readouterr().out.strip() == "Spoiler"

    def test_rank_connectivity(self, capsys, write_graph, p4):
        """Test rank and rank-connectivity of P4"""
        path = write_graph("p4", p4)
        assert main(["analyze", "rank", path, "-A", "0,1", "-B", "2,3"]) == EXIT_OK
        assert capsys.readouterr().out.strip() == "1"
        assert main(["analyze", "rank", path, "-A", "0", "-B", "3", "--connectivity"]) == EXIT_OK
        assert capsys.readouterr().out.strip() == "1"

    def test_analyze_bipartite(self, capsys, write_graph):
        """Test half-graph analysis with the right side defaulted"""
        path = write_graph("h3", ColoredGraph(6, [(0, 3), (0, 4), (0, 5), (1, 4), (1, 5), (2, 5)]))
        assert main(["analyze", "halfgraph", path, "--left", "0,1,2"]) == EXIT_OK
        assert capsys.readouterr().out.strip() == "3"
        assert main(["analyze", "chain", path, "--left", "0,1,2"]) == EXIT_OK
        assert capsys.readouterr().out.strip() == "partial half-graph"


class TestExitCodes:
    """Test the exit code contract"""

    def test_usage_errors(self, capsys, tmp_path):
        """Test unknown commands, missing files and malformed input"""
        assert main(["frobnicate"]) == EXIT_USAGE
        assert main(["tww", str(tmp_path / "missing.graph")]) == EXIT_USAGE
        bad = tmp_path / "bad.graph"
        bad.write_text("p graph 2 1\ne 0 5\n")
        assert main(["tww", str(bad)]) == EXIT_USAGE
        assert "line 2" in capsys.readouterr().err

    def test_experiment_validation(self, capsys):
        """Test that invalid experiment parameters are usage errors"""
        assert main(["experiment", "nope"]) == EXIT_USAGE
        assert main(["experiment", "tww1-wl-dimension", "--max-n", "3"]) == EXIT_USAGE

    def test_experiment_pass(self, capsys, tmp_path):
        """Test a passing experiment and its report file"""
        out = tmp_path / "reports"
        argv = ["--out", str(out), "experiment", "lemma21-suite", "--samples", "5", "--max-n", "6"]
        assert main(argv) == EXIT_OK
        assert "PASS" in capsys.readouterr().out
        assert (out / "lemma21-suite.json").is_file()

    def test_experiment_failure(self, capsys, monkeypatch, tmp_path, p4):
        """Test exit code 2 and the bundle path on a failing sample"""

        def worker(spec, index, seed):
            return SampleOutcome(
                index=index,
                seed=seed,
                passed=False,
                details={"cuts_checked": 0, "violations": 1},
                graphs={"g": render_graph(p4)},
            )

        monkeypatch.setitem(experiment_service.WORKERS, "red-cut-audit", worker)
        argv = ["--out", str(tmp_path), "experiment", "red-cut-audit", "--samples", "1"]
        assert main(argv) == EXIT_ASSERTION
        assert "counterexample bundle" in capsys.readouterr().out
        assert (tmp_path / "red-cut-audit-counterexample-0" / "g.graph").is_file()
