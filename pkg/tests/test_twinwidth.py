import pytest

from app.core.errors import BudgetRefusedError
from app.graphs.colored_graph import ColoredGraph, induced_subgraph
from app.schemas.contraction_dto import SearchBudget
from app.services.contraction_service import verify_sequence
from app.services.generator_service import (
    half_graph,
    random_cograph,
    random_graph,
    random_tww1,
)
from app.services.twinwidth_service import (
    NotFound,
    SearchExhausted,
    TwinWidth,
    best_effort_sequence,
    exact_component_twinwidth,
    exact_twinwidth,
    heuristic_sequence,
    naive_twinwidth,
)
from tests.utils.graph_factory import GraphFactory


def _checked_width(g: ColoredGraph) -> int:
    result = exact_twinwidth(g)
    assert isinstance(result, TwinWidth)
    assert result.certificate.is_full
    assert verify_sequence(g, result.certificate).width == result.width
    return result.width


class TestExactTwinWidth:
    """Test exact twin-width search"""

    def test_small_known_values(self, p4: ColoredGraph, c5: ColoredGraph, k4: ColoredGraph):
        """Test tww(K4) = 0, tww(P4) = 1 and tww(C5) = 2"""
        assert _checked_width(k4) == 0
        assert _checked_width(p4) == 1
        assert _checked_width(c5) == 2

    def test_trivial_graphs(self):
        """Test the empty graph and a single vertex"""
        assert _checked_width(ColoredGraph(0)) == 0
        assert _checked_width(ColoredGraph(1)) == 0

    @pytest.mark.parametrize("seed", range(5))
    def test_cographs_have_width_zero(self, seed: int):
        """Test that random cographs have twin-width 0"""
        assert _checked_width(random_cograph(8, seed)) == 0

    @pytest.mark.parametrize("seed", range(5))
    def test_tww1_samples(self, seed: int):
        """Test that grown twin-width-1 graphs have width at most 1"""
        assert _checked_width(random_tww1(7, seed)) <= 1

    def test_half_graph(self):
        """Test that half-graphs have twin-width at most 1"""
        assert _checked_width(half_graph(4).graph) <= 1

    def test_budget_exhaustion_reports_bounds(self, c5: ColoredGraph):
        """Test that a tiny node cap yields bounds instead of a width"""
        result = exact_twinwidth(c5, SearchBudget(max_nodes=1))
        assert isinstance(result, SearchExhausted)
        assert result.lower_bound == 1
        assert result.upper_bound == 2
        assert verify_sequence(c5, result.certificate).width == 2

    @pytest.mark.parametrize("n", [2, 3, 4, 5])
    def test_agrees_with_naive_enumeration(self, n: int):
        """Test exact search against full enumeration on all connected graphs"""
        for g in GraphFactory.connected_graphs(n):
            assert exact_twinwidth(g).width == naive_twinwidth(g).width

    @pytest.mark.slow
    def test_agrees_with_naive_enumeration_n6_and_random_n7(self, rng):
        """Test exact search against full enumeration on n = 6 and random n = 7"""
        for g in GraphFactory.connected_graphs(6):
            assert exact_twinwidth(g).width == naive_twinwidth(g).width
        for _ in range(20):
            g = random_graph(7, rng.random(), rng.getrandbits(32))
            assert exact_twinwidth(g).width == naive_twinwidth(g).width


class TestComponentTwinWidth:
    """Test the red-component objective"""

    def test_p4(self, p4: ColoredGraph):
        """Test that every P4 sequence has a red component of two parts"""
        result = exact_component_twinwidth(p4)
        assert result.width == 2
        assert verify_sequence(p4, result.certificate).max_red_component == 2

    def test_cograph(self):
        """Test that twins keep every red component trivial"""
        result = exact_component_twinwidth(random_cograph(6, seed=1))
        assert result.width == 1


class TestNaiveTwinWidth:
    """Test the enumeration oracle"""

    def test_values(self, p4: ColoredGraph, c5: ColoredGraph):
        """Test known values"""
        assert naive_twinwidth(p4).width == 1
        assert naive_twinwidth(c5).width == 2

    def test_size_guard(self):
        """Test that large inputs are refused"""
        with pytest.raises(BudgetRefusedError):
            naive_twinwidth(GraphFactory.path(8))
        assert naive_twinwidth(GraphFactory.path(3), max_vertices=3).width == 0


class TestHeuristic:
    """Test the beam heuristic"""

    def test_reaches_target_on_p4(self, p4: ColoredGraph):
        """Test that P4 gets a width-1 sequence"""
        s = heuristic_sequence(p4, 1)
        assert not isinstance(s, NotFound)
        assert verify_sequence(p4, s).width <= 1

    def test_reports_best_width_when_missing_target(self, c5: ColoredGraph):
        """Test that a missed target still reports what was achieved"""
        outcome = heuristic_sequence(c5, 1)
        assert isinstance(outcome, NotFound)
        assert outcome.best_width == 2
        assert verify_sequence(c5, outcome.best).width == 2

    def test_best_effort_is_verified(self, rng):
        """Test that the reported width is the verified width"""
        g = random_graph(14, 0.3, rng.getrandbits(32))
        result = best_effort_sequence(g, SearchBudget(beam=2))
        assert result.complete
        assert verify_sequence(g, result.sequence).width == result.width

    def test_many_disjoint_edges(self):
        """Test a graph whose parts become isolated once more than 40 are live"""
        g = ColoredGraph(82, [(2 * i, 2 * i + 1) for i in range(41)])
        s = heuristic_sequence(g, 0)
        assert not isinstance(s, NotFound)
        assert s.is_full
        assert verify_sequence(g, s).width == 0

    def test_edgeless_graph_above_pairing_threshold(self):
        """Test that isolated parts are still paired"""
        g = ColoredGraph(41)
        s = heuristic_sequence(g, 0)
        assert not isinstance(s, NotFound)
        assert verify_sequence(g, s).width == 0

    def test_exact_search_seeds_on_disjoint_edges(self):
        """Test that the exact search starts from the heuristic on such graphs"""
        g = ColoredGraph(82, [(2 * i, 2 * i + 1) for i in range(41)])
        assert _checked_width(g) == 0

    def test_node_cap_stops_the_beam(self):
        """Test that max_nodes ends the beam search early"""
        g = GraphFactory.path(9)
        result = best_effort_sequence(g, SearchBudget(max_nodes=1))
        assert not result.complete
        assert result.nodes > 1
        outcome = heuristic_sequence(g, 1, SearchBudget(max_nodes=1))
        assert isinstance(outcome, NotFound)
        assert outcome.best_width is None
        assert outcome.best is None


class TestTwinWidthProperties:
    """Test structural properties of exact twin-width"""

    def test_monotone_on_induced_subgraphs(self, rng):
        """Test tww(G[S]) <= tww(G) on random graphs and vertex subsets"""
        for _ in range(30):
            n = rng.randint(3, 7)
            g = random_graph(n, rng.random(), rng.getrandbits(32))
            whole = _checked_width(g)
            subset = [v for v in range(n) if rng.random() < 0.6]
            sub, _ = induced_subgraph(g, subset)
            assert _checked_width(sub) <= whole

    def test_monotone_on_vertex_deletions(self, c5: ColoredGraph):
        """Test that deleting a vertex of C5 leaves a path of width 1"""
        sub, _ = induced_subgraph(c5, range(4))
        assert _checked_width(sub) == 1 <= _checked_width(c5)
