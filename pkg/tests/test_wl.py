import random
import time

import numpy as np
import pytest

from app.core.errors import BudgetRefusedError, InvariantViolationError, PreconditionError
from app.graphs.colored_graph import ColoredGraph, random_relabel
from app.services import wl_service
from app.services.generator_service import cfi_pair, complete_graph, named_base, random_graph
from app.services.wl_service import (
    color_refinement,
    pebble_game,
    wl_distinguish,
    wl_refine,
)
from tests.utils.graph_factory import GraphFactory


@pytest.fixture(scope="module")
def cfi_k4():
    """CFI pair over K4"""
    return cfi_pair(complete_graph(4))


class TestWlRefine:
    """Test stable k-WL colorings"""

    def test_k2_single_class(self):
        """Test that both vertices of K2 share a color"""
        coloring = wl_refine(ColoredGraph(2, [(0, 1)]), 1)
        assert coloring.classes() == 1

    def test_p4_ends_and_middles(self, p4: ColoredGraph):
        """Test the two classes of P4"""
        coloring = wl_refine(p4, 1)
        assert coloring.classes() == 2
        assert coloring.partition() == (0, 1, 1, 0)
        assert sorted(coloring.histogram().values()) == [2, 2]

    def test_initial_colors_are_respected(self, p4: ColoredGraph):
        """Test that vertex colors seed the refinement"""
        colored = ColoredGraph(4, p4.edges, [1, 0, 0, 0])
        assert wl_refine(colored, 1).classes() == 4

    def test_regular_graph_is_stable_at_once(self, c5: ColoredGraph):
        """Test that a vertex-transitive graph needs no splitting round"""
        coloring = wl_refine(c5, 1)
        assert coloring.classes() == 1
        assert coloring.rounds == 0

    def test_pair_coloring_shape(self, p4: ColoredGraph):
        """Test the shape and diagonal of a 2-WL coloring"""
        coloring = wl_refine(p4, 2)
        assert coloring.colors.shape == (4, 4)
        diagonal = {int(coloring.colors[v, v]) for v in range(4)}
        off_diagonal = {int(coloring.colors[u, v]) for u in range(4) for v in range(4) if u != v}
        assert not diagonal & off_diagonal

    def test_isomorphism_invariance(self, rng):
        """Test that relabeling permutes the stable coloring"""
        g = random_graph(9, 0.4, rng.getrandbits(32))
        h, perm = random_relabel(g, rng.getrandbits(32))
        both = wl_service._refine_lockstep([g, h], 2)[0]
        for u in range(9):
            for v in range(9):
                assert both[0][u, v] == both[1][perm[u], perm[v]]

    def test_guard(self):
        """Test the n^k guard and the dimension check"""
        with pytest.raises(BudgetRefusedError):
            wl_refine(GraphFactory.path(10), 3, max_tuples=100)
        with pytest.raises(PreconditionError):
            wl_refine(GraphFactory.path(3), 0)

    def test_empty_graph(self):
        """Test the empty graph"""
        coloring = wl_refine(ColoredGraph(0), 1)
        assert coloring.n == 0
        assert coloring.classes() == 0


class TestColorRefinement:
    """Test the worklist 1-WL path"""

    def test_p4(self, p4: ColoredGraph):
        """Test P4 classes and first-appearance ids"""
        coloring = color_refinement(p4)
        assert coloring.colors.tolist() == [0, 1, 1, 0]
        assert coloring.rounds is None

    def test_matches_dense_engine(self, rng):
        """Test partition equality with wl_refine(g, 1) on random graphs"""
        for _ in range(200):
            n = rng.randint(1, 14)
            g = random_graph(n, rng.random(), rng.getrandbits(32))
            colors = [rng.randrange(2) for _ in range(n)]
            colored = ColoredGraph(n, g.edges, colors)
            assert color_refinement(g).partition() == wl_refine(g, 1).partition()
            assert color_refinement(colored).partition() == wl_refine(colored, 1).partition()

    def test_long_path(self):
        """Test that refinement propagates from the ends of a long path"""
        coloring = color_refinement(GraphFactory.path(9))
        assert coloring.classes() == 5

    def test_worklist_finishes_hashed_rounds(self, monkeypatch):
        """Test that a partition left unequitable by the hashed rounds is completed"""
        monkeypatch.setattr(wl_service, "HASHED_ROUNDS", 1)
        g = GraphFactory.path(30)
        coloring = color_refinement(g)
        assert coloring.classes() == 15
        assert coloring.partition() == wl_refine(g, 1).partition()

    @pytest.mark.slow
    def test_million_edges(self):
        """Test 1-WL on 10^5 vertices and 10^6 edges within five seconds"""
        gen = np.random.default_rng(7)
        n, m = 100_000, 1_000_000
        u = gen.integers(0, n, size=3 * m)
        v = gen.integers(0, n, size=3 * m)
        keep = u < v
        pairs = np.unique(np.stack([u[keep], v[keep]], axis=1), axis=0)[:m]
        g = ColoredGraph(n, [tuple(e) for e in pairs.tolist()])
        started = time.monotonic()
        coloring = color_refinement(g)
        assert time.monotonic() - started < 5.0
        assert coloring.n == n


class TestWlDistinguish:
    """Test pairwise k-WL comparison"""

    def test_p4_vs_p3_plus_k1(self, p4: ColoredGraph, p3_plus_k1: ColoredGraph):
        """Test that differing degree multisets are caught at once"""
        verdict = wl_distinguish(p4, p3_plus_k1, 1)
        assert verdict.distinguished
        counts = verdict.witness_counts
        assert counts[0] != counts[1]

    def test_identical_graphs(self, p4: ColoredGraph):
        """Test that a graph is not distinguished from itself"""
        verdict = wl_distinguish(p4, p4, 2)
        assert not verdict.distinguished
        assert verdict.histogram_g == verdict.histogram_h

    def test_cycle_vs_two_triangles(self):
        """Test the classic 1-WL blind spot that 2-WL resolves"""
        c6, triangles = GraphFactory.cycle(6), GraphFactory.two_triangles()
        assert not wl_distinguish(c6, triangles, 1).distinguished
        assert wl_distinguish(c6, triangles, 2).distinguished

    def test_cfi_pair_is_1wl_equivalent(self, cfi_k4):
        """Test identical color multisets on the CFI pair"""
        verdict = wl_distinguish(cfi_k4.even, cfi_k4.odd, 1)
        assert not verdict.distinguished
        assert verdict.histogram_g == verdict.histogram_h

    def test_cfi_pair_is_2wl_equivalent(self, cfi_k4):
        """Test that two dimensions do not separate a treewidth-3 base"""
        assert not wl_distinguish(cfi_k4.even, cfi_k4.odd, 2).distinguished

    def test_union_path_for_large_inputs(self, monkeypatch, p4, p3_plus_k1, cfi_k4):
        """Test the worklist path used above the dense threshold"""
        monkeypatch.setattr(wl_service, "DENSE_K1_MAX_VERTICES", 3)
        assert wl_distinguish(p4, p3_plus_k1, 1).distinguished
        verdict = wl_distinguish(cfi_k4.even, cfi_k4.odd, 1)
        assert not verdict.distinguished
        assert verdict.rounds is None

    def test_different_orders(self, p4: ColoredGraph):
        """Test graphs of different order"""
        assert wl_distinguish(p4, GraphFactory.path(5), 1).distinguished

    @pytest.mark.slow
    def test_cfi_pair_is_3wl_distinguished(self, cfi_k4):
        """Test that three dimensions separate the CFI pair over K4"""
        assert wl_distinguish(cfi_k4.even, cfi_k4.odd, 3).distinguished


class TestPebbleGame:
    """Test the bijective pebble game"""

    @pytest.mark.parametrize("k", [2, 3])
    def test_identical_graphs(self, p4: ColoredGraph, k: int):
        """Test that Duplicator wins on G = H"""
        verdict = pebble_game(p4, p4, k)
        assert verdict.winner == "Duplicator"
        assert verdict.surviving_positions > 0

    def test_p4_vs_p3_plus_k1(self, p4: ColoredGraph, p3_plus_k1: ColoredGraph):
        """Test that two pebbles see the degree difference"""
        assert pebble_game(p4, p3_plus_k1, 2).winner == "Spoiler"

    def test_needs_two_pebbles(self, p4: ColoredGraph):
        """Test that fewer than two pebbles are rejected"""
        with pytest.raises(PreconditionError):
            pebble_game(p4, p4, 1)
        with pytest.raises(PreconditionError):
            pebble_game(p4, p4, 0)

    def test_cycle_vs_two_triangles(self):
        """Test that three pebbles separate C6 from two triangles"""
        c6, triangles = GraphFactory.cycle(6), GraphFactory.two_triangles()
        assert pebble_game(c6, triangles, 2).winner == "Duplicator"
        assert pebble_game(c6, triangles, 3).winner == "Spoiler"

    def test_different_orders(self, p4: ColoredGraph):
        """Test that Spoiler wins at once on different orders"""
        verdict = pebble_game(p4, GraphFactory.path(5), 2)
        assert verdict.winner == "Spoiler"
        assert verdict.rounds == 0

    def test_guard(self, p4: ColoredGraph):
        """Test the position-space guard"""
        with pytest.raises(BudgetRefusedError):
            pebble_game(p4, p4, 3, max_positions=100)

    @pytest.mark.parametrize("k", [2, 3])
    def test_matches_wl(self, rng, k: int):
        """Test Spoiler wins BP_k iff (k-1)-WL distinguishes"""
        for _ in range(25):
            g, h = GraphFactory.random_pair(rng, rng.randint(2, 5))
            spoiler = pebble_game(g, h, k).winner == "Spoiler"
            assert spoiler == wl_distinguish(g, h, k - 1).distinguished

    def test_matches_wl_on_regular_pairs(self):
        """Test the correspondence where degree counting is not enough"""
        c6, triangles = GraphFactory.cycle(6), GraphFactory.two_triangles()
        for k in (2, 3):
            spoiler = pebble_game(c6, triangles, k).winner == "Spoiler"
            assert spoiler == wl_distinguish(c6, triangles, k - 1).distinguished

    @pytest.mark.slow
    def test_cfi_pair_two_pebbles(self, cfi_k4):
        """Test that Duplicator survives two pebbles on the CFI pair"""
        assert pebble_game(cfi_k4.even, cfi_k4.odd, 2).winner == "Duplicator"

    @pytest.mark.slow
    @pytest.mark.parametrize("k", [2, 3])
    def test_matches_wl_on_many_pairs(self, k: int):
        """Test the game against (k-1)-WL on 300 random pairs with n <= 6"""
        rng = random.Random(k)
        for _ in range(300):
            g, h = GraphFactory.random_pair(rng, rng.randint(2, 6))
            spoiler = pebble_game(g, h, k).winner == "Spoiler"
            assert spoiler == wl_distinguish(g, h, k - 1).distinguished


class TestHashedRefinement:
    """Test the hashed k-WL rounds and their exact check"""

    def test_footprint_guard(self, monkeypatch):
        """Test that the memory estimate is checked next to the tuple count"""
        wl_service._guard(300, 3, None, graphs=2)
        monkeypatch.setattr(wl_service.settings, "WL_MAX_MEMORY_MB", 1)
        with pytest.raises(BudgetRefusedError):
            wl_refine(GraphFactory.path(40), 3)
        with pytest.raises(BudgetRefusedError):
            wl_distinguish(GraphFactory.path(40), GraphFactory.path(40), 3)

    def test_unstable_hash_is_retried(self, monkeypatch, p4: ColoredGraph):
        """Test that a failed exact check triggers a fresh salt"""
        calls = []
        stable = wl_service._is_stable

        def once_unstable(space, colors):
            calls.append(1)
            return len(calls) > 1 and stable(space, colors)

        monkeypatch.setattr(wl_service, "_is_stable", once_unstable)
        assert wl_refine(p4, 2).partition() == wl_refine(p4, 2).partition()
        assert wl_refine(p4, 1).classes() == 2
        assert len(calls) >= 2

    def test_persistent_instability_raises(self, monkeypatch, p4: ColoredGraph):
        """Test that every attempt failing the exact check is an invariant violation"""
        monkeypatch.setattr(wl_service, "_is_stable", lambda space, colors: False)
        with pytest.raises(InvariantViolationError):
            wl_refine(p4, 1)

    def test_difference_needs_no_check(self, monkeypatch, p4: ColoredGraph, p3_plus_k1: ColoredGraph):
        """Test that differing histograms decide without the stability check"""
        monkeypatch.setattr(wl_service, "_is_stable", lambda space, colors: False)
        assert wl_distinguish(p4, p3_plus_k1, 1).distinguished

    def test_chunking_does_not_change_the_result(self, monkeypatch, rng):
        """Test that tiny chunks give the same stable coloring"""
        g = random_graph(8, 0.4, rng.getrandbits(32))
        expected = wl_refine(g, 2).partition()
        monkeypatch.setattr(wl_service, "CHUNK_CELLS", 5)
        assert wl_refine(g, 2).partition() == expected

    @pytest.mark.slow
    def test_three_dimensions_at_120_vertices(self):
        """Test that 3-WL runs on 1.7 million tuples"""
        g = random_graph(120, 0.1, seed=11)
        coloring = wl_refine(g, 3)
        assert coloring.colors.shape == (120, 120, 120)
        assert coloring.classes() > 1

    @pytest.mark.slow
    def test_cfi_over_petersen_is_3wl_equivalent(self):
        """Test that three dimensions do not separate a treewidth-4 base"""
        pair = cfi_pair(named_base("Petersen"))
        assert not wl_distinguish(pair.even, pair.odd, 3).distinguished
