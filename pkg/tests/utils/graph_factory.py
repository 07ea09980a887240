"""
Test graph factory: small named graphs, seeded pools and brute-force
oracles the tests compare the services against.
"""

from itertools import combinations, permutations
from typing import Iterator, List, Sequence, Set, Tuple

import networkx as nx

from app.graphs.colored_graph import BipartiteView, ColoredGraph, from_networkx
from app.graphs.graph_io import render_graph
from app.services import generator_service


class GraphFactory:
    """Utility class for building test graphs"""

    @staticmethod
    def path(n: int) -> ColoredGraph:
        return generator_service.path_graph(n)

    @staticmethod
    def cycle(n: int) -> ColoredGraph:
        return generator_service.cycle_graph(n)

    @staticmethod
    def complete(n: int) -> ColoredGraph:
        return generator_service.complete_graph(n)

    @staticmethod
    def two_triangles() -> ColoredGraph:
        return ColoredGraph(6, [(0, 1), (1, 2), (0, 2), (3, 4), (4, 5), (3, 5)])

    @staticmethod
    def bull_with_twin() -> ColoredGraph:
        """P4 0-1-2-3 plus vertex 4, a true twin of endpoint 0"""
        return ColoredGraph(5, [(0, 1), (1, 2), (2, 3), (0, 4), (1, 4)])

    @staticmethod
    def bipartite(left: Sequence[int], right: Sequence[int], edges) -> BipartiteView:
        """Bipartite view on vertices 0..max id with the given cross edges"""
        n = max(list(left) + list(right)) + 1
        return BipartiteView(ColoredGraph(n, edges), tuple(left), tuple(right))

    @staticmethod
    def text(g: ColoredGraph) -> str:
        return render_graph(g)

    @staticmethod
    def all_graphs(n: int) -> Iterator[ColoredGraph]:
        """Every labeled graph on n vertices"""
        pairs = list(combinations(range(n), 2))
        for mask in range(1 << len(pairs)):
            yield ColoredGraph(n, [p for i, p in enumerate(pairs) if (mask >> i) & 1])

    @staticmethod
    def connected_graphs(n: int) -> List[ColoredGraph]:
        """Connected graphs on n vertices, one per isomorphism class"""
        return [
            from_networkx(graph)
            for graph in nx.graph_atlas_g()
            if graph.number_of_nodes() == n and (n == 0 or nx.is_connected(graph))
        ]

    @staticmethod
    def atlas(max_n: int) -> List[ColoredGraph]:
        """All graphs up to isomorphism with 1..max_n vertices (max_n <= 7)"""
        return [
            from_networkx(graph)
            for graph in nx.graph_atlas_g()
            if 1 <= graph.number_of_nodes() <= max_n
        ]

    @staticmethod
    def tww1_pool(sizes: Sequence[int], seeds: Sequence[int]) -> List[ColoredGraph]:
        return [generator_service.random_tww1(n, seed) for n in sizes for seed in seeds]

    @staticmethod
    def brute_force_modules(g: ColoredGraph) -> List[Set[int]]:
        """Every nonempty module of g"""
        modules = []
        for size in range(1, g.n + 1):
            for subset in combinations(range(g.n), size):
                inside = set(subset)
                if all(
                    len({g.has_edge(z, x) for x in inside}) == 1
                    for z in range(g.n)
                    if z not in inside
                ):
                    modules.append(inside)
        return modules

    @staticmethod
    def strong_modules(g: ColoredGraph) -> List[Set[int]]:
        """Modules overlapping no other module"""
        modules = GraphFactory.brute_force_modules(g)
        return [
            m
            for m in modules
            if not any(m & x and not m <= x and not x <= m for x in modules)
        ]

    @staticmethod
    def brute_force_biclique(b: BipartiteView) -> int:
        """Largest t with a K_{t,t} between the sides"""
        best = 0
        for size in range(1, min(len(b.left), len(b.right)) + 1):
            for lefts in combinations(b.left, size):
                common = [w for w in b.right if all(b.has_edge(v, w) for v in lefts)]
                if len(common) >= size:
                    best = size
        return best

    @staticmethod
    def embeds_in_half_graph(b: BipartiteView, t: int) -> bool:
        """Brute-force search for an induced embedding into H_t"""
        for lefts in permutations(range(t), len(b.left)):
            for rights in permutations(range(t), len(b.right)):
                if all(
                    b.has_edge(v, w) == (lefts[i] <= rights[j])
                    for i, v in enumerate(b.left)
                    for j, w in enumerate(b.right)
                ):
                    return True
        return False

    @staticmethod
    def random_pair(rng, n: int) -> Tuple[ColoredGraph, ColoredGraph]:
        p = rng.random()
        return (
            generator_service.random_graph(n, p, rng.getrandbits(32)),
            generator_service.random_graph(n, p, rng.getrandbits(32)),
        )
