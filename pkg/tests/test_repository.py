import json

from app.graphs.colored_graph import ColoredGraph
from app.graphs.trigraph import ContractionSequence
from app.repositories.graph_file_repository import GraphFileRepository
from app.schemas.analysis_dto import MatchingResult


class TestGraphFileRepository:
    """Test graph, sequence, report and bundle files"""

    def test_default_directory(self, output_dir):
        """Test that the base directory comes from settings"""
        repository = GraphFileRepository()
        assert repository.base_dir == str(output_dir)
        assert repository.get_file_path("x.graph") == str(output_dir / "x.graph")

    def test_graph_round_trip(self, tmp_path):
        """Test that colors and edges survive a save and load"""
        repository = GraphFileRepository(str(tmp_path))
        g = ColoredGraph(5, [(0, 1), (3, 4)], [0, 2, 0, 1, 0])
        path = repository.save_graph("nested/g", g)
        assert path.endswith("nested/g.graph")
        assert repository.load_graph("nested/g") == g

    def test_sequence_round_trip(self, tmp_path, p4: ColoredGraph):
        """Test merge lines after the graph"""
        repository = GraphFileRepository(str(tmp_path))
        s = ContractionSequence(p4, [(0, 1), (2, 3), (4, 5)])
        repository.save_sequence("p4", s)
        loaded = repository.load_sequence("p4")
        assert loaded.base == p4
        assert loaded.merges == s.merges

    def test_report(self, tmp_path):
        """Test that reports are written as JSON"""
        repository = GraphFileRepository(str(tmp_path))
        path = repository.save_report("matching", MatchingResult(size=1, pairs=[(0, 1)]))
        with open(path, encoding="utf-8") as handle:
            assert json.load(handle) == {"size": 1, "pairs": [[0, 1]]}

    def test_bundles(self, tmp_path, p4: ColoredGraph, c5: ColoredGraph):
        """Test writing, listing and loading bundles"""
        repository = GraphFileRepository(str(tmp_path))
        assert repository.list_bundles() == []
        repository.save_bundle("case-b", {"g": p4, "h": c5}, {"seed": 4})
        repository.save_bundle("case-a", {"g": c5}, {"seed": 1})
        repository.save_graph("loose", p4)
        assert repository.list_bundles() == ["case-a", "case-b"]
        bundle = repository.load_bundle("case-b")
        assert bundle["graphs"] == {"g": p4, "h": c5}
        assert bundle["params"] == {"seed": 4}
