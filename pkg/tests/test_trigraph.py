import pytest

from app.core.errors import ContractionError, InvalidPartitionError
from app.graphs.colored_graph import ColoredGraph
from app.graphs.trigraph import (
    BLACK,
    RED,
    ContractionSequence,
    Trigraph,
    contract,
    max_red_component,
    quotient,
    red_components,
)
from app.services.contraction_service import (
    partitions,
    replay,
    sequence_from_partition_merges,
    verify_sequence,
)
from app.services.generator_service import random_cograph, random_tww1_with_sequence
from app.services.twinwidth_service import exact_twinwidth


P4_SEQUENCE = [(0, 1), (2, 3), (4, 5)]


class TestQuotient:
    """Test quotient trigraphs"""

    def test_p4_quotient(self, p4: ColoredGraph):
        """Test the red and black edges of P4 by {ab}, {c}, {d}"""
        t = quotient(p4, [[0, 1], [2], [3]])
        assert t.n == 3
        assert t.part_of(4) == frozenset({0, 1})
        assert t.edge(4, 2) == RED
        assert t.edge(2, 3) == BLACK
        assert t.edge(4, 3) == 0
        assert t.red == frozenset({(2, 4)})

    def test_discrete_partition_is_the_graph(self, c5: ColoredGraph):
        """Test that the discrete quotient has no red edge"""
        t = quotient(c5, [[v] for v in range(5)])
        assert t.red == frozenset()
        assert len(t.black) == 5
        assert t.same_as(Trigraph.from_graph(c5))

    def test_k4_two_parts(self, k4: ColoredGraph):
        """Test that two complete parts give a single black edge"""
        t = quotient(k4, [[0, 1], [2, 3]])
        assert t.black == frozenset({(4, 5)})
        assert t.red == frozenset()

    @pytest.mark.parametrize(
        "partition",
        [
            [[0, 1], [1, 2], [3]],
            [[0, 1], [2]],
            [[0, 1, 2, 3], []],
        ],
    )
    def test_invalid_partition(self, p4: ColoredGraph, partition):
        """Test that overlapping, missing or empty parts are rejected"""
        with pytest.raises(InvalidPartitionError):
            quotient(p4, partition)


class TestContract:
    """Test single contractions"""

    def test_contract_p4_endpoint_pair(self, p4: ColoredGraph):
        """Test contracting a and b in P4"""
        t = contract(Trigraph.from_graph(p4), 0, 1)
        assert t.live() == [2, 3, 4]
        assert t.edge(4, 2) == RED
        assert t.edge(2, 3) == BLACK
        assert t.max_red_degree() == 1

    def test_contract_twins_creates_no_red(self, k4: ColoredGraph):
        """Test that contracting twins keeps everything black"""
        t = contract(Trigraph.from_graph(k4), 0, 1)
        assert t.red == frozenset()
        assert t.black == frozenset({(2, 3), (2, 4), (3, 4)})

    def test_contract_c5_adjacent(self, c5: ColoredGraph):
        """Test that both outside neighbors become red"""
        t = contract(Trigraph.from_graph(c5), 0, 1)
        assert sorted(t.red_neighbors(5)) == [2, 4]
        assert t.red_degree(5) == 2

    def test_input_is_not_modified(self, p4: ColoredGraph):
        """Test persistence of the input trigraph"""
        start = Trigraph.from_graph(p4)
        contract(start, 0, 1)
        assert start.live() == [0, 1, 2, 3]
        assert start.red == frozenset()

    def test_contract_errors(self, p4: ColoredGraph):
        """Test same-part and dead-part merges"""
        start = Trigraph.from_graph(p4)
        with pytest.raises(ContractionError):
            contract(start, 2, 2)
        with pytest.raises(ContractionError):
            contract(contract(start, 0, 1), 0, 2)

    def test_red_components(self, c5: ColoredGraph):
        """Test red components after one contraction"""
        t = contract(Trigraph.from_graph(c5), 0, 1)
        assert [2, 4, 5] in red_components(t)
        assert max_red_component(t) == 3


class TestVerifySequence:
    """Test replaying and verifying contraction sequences"""

    def test_p4_width_one(self, p4: ColoredGraph):
        """Test the width of the P4 sequence"""
        report = verify_sequence(p4, ContractionSequence(p4, P4_SEQUENCE))
        assert report.width == 1
        assert report.max_red_component == 2
        assert [s.red_degree for s in report.steps] == [1, 1, 0]
        assert [s.part for s in report.steps] == [4, 5, 6]
        assert report.parts == {6: [0, 1, 2, 3]}

    def test_partitions(self, p4: ColoredGraph):
        """Test the partition after every merge"""
        assert partitions(p4, ContractionSequence(p4, P4_SEQUENCE)) == [
            [[0], [1], [2], [3]],
            [[0, 1], [2], [3]],
            [[0, 1], [2, 3]],
            [[0, 1, 2, 3]],
        ]

    def test_replay_matches_quotients(self, rng):
        """Test that every replayed trigraph equals the quotient by its partition"""
        g, s = random_tww1_with_sequence(9, rng.getrandbits(32))
        for _, t in replay(g, s):
            assert t.same_as(quotient(g, t.partition()))

    def test_dead_part_reports_step(self, p4: ColoredGraph):
        """Test that a merge of a dead part names its step"""
        with pytest.raises(ContractionError) as exc:
            verify_sequence(p4, ContractionSequence(p4, [(0, 1), (0, 2)]))
        assert exc.value.step == 1

    def test_sequence_graph_mismatch(self, p4: ColoredGraph, c5: ColoredGraph):
        """Test that a sequence over another graph is rejected"""
        with pytest.raises(ContractionError):
            verify_sequence(c5, ContractionSequence(p4, P4_SEQUENCE))

    def test_empty_sequence(self, p4: ColoredGraph):
        """Test a sequence with no merges"""
        report = verify_sequence(p4, ContractionSequence(p4, []))
        assert report.width == 0
        assert report.max_red_component == 1

    def test_cograph_has_width_zero_sequence(self):
        """Test that a cograph's optimal sequence verifies at width 0"""
        g = random_cograph(7, seed=3)
        result = exact_twinwidth(g)
        assert result.width == 0
        assert verify_sequence(g, result.certificate).width == 0

    def test_sequence_from_partition_merges(self, p4: ColoredGraph):
        """Test translating representative merges into part ids"""
        s = sequence_from_partition_merges(p4, [(0, 1), (2, 3), (1, 3)])
        assert s.merges == P4_SEQUENCE
        with pytest.raises(ContractionError):
            sequence_from_partition_merges(p4, [(0, 1), (1, 0)])
