import pytest

from app.core.errors import PreconditionError
from app.graphs.colored_graph import ColoredGraph, induced_subgraph, is_connected, complement
from app.graphs.isomorphism import is_isomorphic
from app.schemas.modular_dto import ModTree
from app.services.modular_service import (
    is_module,
    is_prime,
    maximal_modules,
    mod_tree,
    module_levels,
    quotient_star,
    twins_partition,
)
from tests.utils.graph_factory import GraphFactory


def _tree_modules(tree: ModTree):
    return {frozenset(m) for m in tree.modules()}


def _check_labels(g: ColoredGraph, tree: ModTree):
    for node in tree.walk():
        sub, _ = induced_subgraph(g, node.module)
        if node.label == "single":
            assert len(node.module) == 1
        elif node.label == "parallel":
            assert not is_connected(sub)
        elif node.label == "series":
            assert not is_connected(complement(sub))
        else:
            assert is_connected(sub) and is_connected(complement(sub))
            assert len(node.children) >= 4


class TestMaximalModules:
    """Test the partition into maximal modules"""

    def test_p4_is_all_singletons(self, p4: ColoredGraph):
        """Test that P4 has only trivial modules"""
        assert maximal_modules(p4) == [[0], [1], [2], [3]]

    def test_twin_pair_is_one_module(self):
        """Test the bull with a true twin of an endpoint"""
        g = GraphFactory.bull_with_twin()
        assert maximal_modules(g) == [[0, 4], [1], [2], [3]]

    def test_requires_connected_and_coconnected(self, p3_plus_k1: ColoredGraph, k4: ColoredGraph):
        """Test the precondition"""
        with pytest.raises(PreconditionError):
            maximal_modules(p3_plus_k1)
        with pytest.raises(PreconditionError):
            maximal_modules(k4)


class TestModTree:
    """Test the modular decomposition tree"""

    def test_p4(self, p4: ColoredGraph):
        """Test that P4 is a prime root over four leaves"""
        tree = mod_tree(p4)
        assert tree.label == "prime"
        assert [child.module for child in tree.children] == [[0], [1], [2], [3]]
        assert all(child.label == "single" for child in tree.children)

    def test_series_and_parallel(self, k4: ColoredGraph, p3_plus_k1: ColoredGraph):
        """Test complete and disconnected roots"""
        assert mod_tree(k4).label == "series"
        assert len(mod_tree(k4).children) == 4
        tree = mod_tree(p3_plus_k1)
        assert tree.label == "parallel"
        assert [child.module for child in tree.children] == [[0, 1, 2], [3]]
        assert tree.children[0].label == "series"

    def test_single_vertex(self):
        """Test the one-vertex tree"""
        assert mod_tree(ColoredGraph(1)) == ModTree(module=[0], label="single")

    def test_empty_graph_rejected(self):
        """Test that the empty graph has no tree"""
        with pytest.raises(PreconditionError):
            mod_tree(ColoredGraph(0))

    @pytest.mark.parametrize("n", [1, 2, 3, 4, 5, 6])
    def test_matches_strong_modules(self, n: int):
        """Test the tree nodes against brute-force strong modules"""
        for g in GraphFactory.atlas(n):
            if g.n != n:
                continue
            tree = mod_tree(g)
            assert _tree_modules(tree) == {frozenset(m) for m in GraphFactory.strong_modules(g)}
            _check_labels(g, tree)

    @pytest.mark.slow
    def test_matches_strong_modules_n7(self):
        """Test the tree nodes against brute-force strong modules on n = 7"""
        for g in GraphFactory.atlas(7):
            if g.n == 7:
                assert _tree_modules(mod_tree(g)) == {
                    frozenset(m) for m in GraphFactory.strong_modules(g)
                }

    def test_prime_nodes(self):
        """Test that prime nodes are reported"""
        tree = mod_tree(GraphFactory.bull_with_twin())
        assert [node.module for node in tree.prime_nodes()] == [[0, 1, 2, 3, 4]]


class TestModulePredicates:
    """Test module, primality and twin helpers"""

    def test_is_module(self):
        """Test module membership on the twin example"""
        g = GraphFactory.bull_with_twin()
        assert is_module(g, [0, 4])
        assert not is_module(g, [0, 1])
        assert is_module(g, range(5))

    def test_is_prime(self, p4: ColoredGraph, c5: ColoredGraph, k4: ColoredGraph):
        """Test primality"""
        assert is_prime(p4)
        assert is_prime(c5)
        assert not is_prime(k4)
        assert not is_prime(GraphFactory.bull_with_twin())
        assert is_prime(ColoredGraph(2))

    def test_twins_partition(self, k4: ColoredGraph):
        """Test false and true twin classes"""
        assert twins_partition(k4) == [[0, 1, 2, 3]]
        assert twins_partition(GraphFactory.path(3)) == [[0, 2], [1]]
        assert twins_partition(GraphFactory.cycle(4)) == [[0, 2], [1, 3]]
        assert twins_partition(GraphFactory.path(4)) == [[0], [1], [2], [3]]

    def test_module_levels(self, rng):
        """Test that every level part is a module and levels coarsen to V"""
        for _ in range(10):
            g = GraphFactory.random_pair(rng, 9)[0]
            levels = module_levels(g)
            assert levels[0] == [[v] for v in range(9)]
            assert levels[-1] == [list(range(9))]
            strong = _tree_modules(mod_tree(g))
            for level in levels:
                for part in level:
                    assert is_module(g, part)
            assert all(len(a) > len(b) for a, b in zip(levels, levels[1:]))
            assert strong >= {frozenset(p) for p in levels[-1]}


class TestQuotientStar:
    """Test the colored quotient by maximal modules"""

    def test_p4_single_color(self, p4: ColoredGraph):
        """Test that singleton modules share one color"""
        q, modules = quotient_star(p4)
        assert q == ColoredGraph(4, p4.edges, [0, 0, 0, 0])
        assert modules == [[0], [1], [2], [3]]

    def test_twin_module_gets_its_own_color(self, p4: ColoredGraph):
        """Test that the K2 module is colored apart from the singletons"""
        q, modules = quotient_star(GraphFactory.bull_with_twin())
        assert modules[0] == [0, 4]
        assert q.colors[0] != q.colors[1]
        assert q.colors[1] == q.colors[2] == q.colors[3]
        assert is_isomorphic(ColoredGraph(4, q.edges), p4)
