"""
Core graph values shared by every service.

ColoredGraph is an immutable simple undirected graph on the dense vertex set
0..n-1 with a nonnegative integer color per vertex. Adjacency is kept both as
frozensets (neighborhood iteration and pair queries) and, built on first use,
as Python-int bitsets for the set algebra of the decomposition and rank
kernels.
"""

import random
from dataclasses import dataclass
from typing import Dict, Iterable, List, NamedTuple, Optional, Sequence, Tuple

import networkx as nx

from app.constants import Constants
from app.core.errors import PreconditionError

Edge = Tuple[int, int]


class ColoredGraph:
    __slots__ = ("n", "colors", "edges", "adj", "_rows", "_hash")

    def __init__(
        self,
        n: int,
        edges: Iterable[Sequence[int]] = (),
        colors: Optional[Sequence[int]] = None,
    ):
        if n < 0:
            raise PreconditionError(Constants.INVALID_PARAMETER)
        normalized = set()
        for e in edges:
            u, v = int(e[0]), int(e[1])
            if u == v:
                raise PreconditionError(f"{Constants.SELF_LOOP}: {u}")
            if not (0 <= u < n and 0 <= v < n):
                raise PreconditionError(f"{Constants.VERTEX_OUT_OF_RANGE}: ({u}, {v})")
            normalized.add((u, v) if u < v else (v, u))
        if colors is None:
            colors = (0,) * n
        colors = tuple(int(c) for c in colors)
        if len(colors) != n:
            raise PreconditionError("color sequence length must equal n")
        if any(c < 0 for c in colors):
            raise PreconditionError(Constants.NEGATIVE_COLOR)

        neighbors: List[set] = [set() for _ in range(n)]
        for u, v in normalized:
            neighbors[u].add(v)
            neighbors[v].add(u)

        self.n = n
        self.colors = colors
        self.edges: Tuple[Edge, ...] = tuple(sorted(normalized))
        self.adj: Tuple[frozenset, ...] = tuple(frozenset(s) for s in neighbors)
        self._rows: Optional[Tuple[int, ...]] = None
        self._hash = None

    @property
    def rows(self) -> Tuple[int, ...]:
        """Neighborhood bitsets, bit w of rows[v] set iff vw is an edge"""
        if self._rows is None:
            self._rows = tuple(sum(1 << w for w in nbrs) for nbrs in self.adj)
        return self._rows

    @property
    def m(self) -> int:
        return len(self.edges)

    def vertices(self) -> range:
        return range(self.n)

    def has_edge(self, u: int, v: int) -> bool:
        return v in self.adj[u]

    def neighbors(self, v: int) -> frozenset:
        return self.adj[v]

    def degree(self, v: int) -> int:
        return len(self.adj[v])

    def color(self, v: int) -> int:
        return self.colors[v]

    def is_colored(self) -> bool:
        return any(self.colors)

    def __eq__(self, other) -> bool:
        if not isinstance(other, ColoredGraph):
            return NotImplemented
        return (
            self.n == other.n
            and self.edges == other.edges
            and self.colors == other.colors
        )

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self.n, self.edges, self.colors))
        return self._hash

    def __repr__(self) -> str:
        return f"ColoredGraph(n={self.n}, m={self.m})"


class AtomicType(NamedTuple):
    """
    Isomorphism type of an ordered tuple of vertices.

    equality[i] is the first index holding the same vertex as position i,
    adjacency lists the pairs i < j (by position) that are edges.
    """

    arity: int
    equality: Tuple[int, ...]
    adjacency: Tuple[Tuple[int, int], ...]
    colors: Tuple[int, ...]


@dataclass(frozen=True)
class BipartiteView:
    """Bipartite graph between disjoint vertex sets of a parent graph"""

    graph: ColoredGraph
    left: Tuple[int, ...]
    right: Tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "left", tuple(sorted(self.left)))
        object.__setattr__(self, "right", tuple(sorted(self.right)))
        if set(self.left) & set(self.right):
            raise PreconditionError(Constants.NOT_DISJOINT)

    @property
    def right_mask(self) -> int:
        mask = 0
        for r in self.right:
            mask |= 1 << r
        return mask

    @property
    def left_mask(self) -> int:
        mask = 0
        for v in self.left:
            mask |= 1 << v
        return mask

    def neighborhood(self, v: int) -> frozenset:
        """Neighbors of v on the opposite side"""
        other = self.right if v in self.left else self.left
        return frozenset(w for w in other if self.graph.has_edge(v, w))

    def has_edge(self, a: int, b: int) -> bool:
        return self.graph.has_edge(a, b)

    def edges(self) -> List[Edge]:
        return [(a, b) for a in self.left for b in self.right if self.graph.has_edge(a, b)]

    def swapped(self) -> "BipartiteView":
        return BipartiteView(self.graph, self.right, self.left)

    def as_graph(self) -> Tuple[ColoredGraph, List[int]]:
        """Standalone graph of the view (left first, then right) and the index map"""
        order = list(self.left) + list(self.right)
        index = {v: i for i, v in enumerate(order)}
        edges = [(index[a], index[b]) for a, b in self.edges()]
        return ColoredGraph(len(order), edges, [self.graph.colors[v] for v in order]), order


def atomic_type(g: ColoredGraph, vs: Sequence[int]) -> AtomicType:
    for v in vs:
        if not 0 <= v < g.n:
            raise PreconditionError(f"{Constants.VERTEX_OUT_OF_RANGE}: {v}")
    k = len(vs)
    first: Dict[int, int] = {}
    equality = tuple(first.setdefault(v, i) for i, v in enumerate(vs))
    adjacency = tuple(
        (i, j) for i in range(k) for j in range(i + 1, k) if g.has_edge(vs[i], vs[j])
    )
    return AtomicType(k, equality, adjacency, tuple(g.colors[v] for v in vs))


def complement(g: ColoredGraph) -> ColoredGraph:
    edges = [
        (u, v) for u in range(g.n) for v in range(u + 1, g.n) if not g.has_edge(u, v)
    ]
    return ColoredGraph(g.n, edges, g.colors)


def induced_subgraph(
    g: ColoredGraph, vertices: Iterable[int]
) -> Tuple[ColoredGraph, List[int]]:
    """
    Subgraph induced by a vertex set.

    Args:
        g (ColoredGraph): The parent graph
        vertices (Iterable[int]): Vertex set S

    Returns:
        Tuple[ColoredGraph, List[int]]: The subgraph on 0..|S|-1 and the index
        map, index_map[i] being the parent vertex of new vertex i
    """
    order = sorted(set(vertices))
    for v in order:
        if not 0 <= v < g.n:
            raise PreconditionError(f"{Constants.VERTEX_OUT_OF_RANGE}: {v}")
    index = {v: i for i, v in enumerate(order)}
    edges = []
    for v in order:
        for w in g.adj[v]:
            if v < w and w in index:
                edges.append((index[v], index[w]))
    return ColoredGraph(len(order), edges, [g.colors[v] for v in order]), order


def relabel(g: ColoredGraph, perm: Sequence[int]) -> ColoredGraph:
    """Rename vertex v to perm[v]"""
    if sorted(perm) != list(range(g.n)):
        raise PreconditionError(Constants.INVALID_PERMUTATION)
    colors = [0] * g.n
    for v in range(g.n):
        colors[perm[v]] = g.colors[v]
    return ColoredGraph(g.n, [(perm[u], perm[v]) for u, v in g.edges], colors)


def random_relabel(g: ColoredGraph, seed: int) -> Tuple[ColoredGraph, List[int]]:
    rng = random.Random(seed)
    perm = list(range(g.n))
    rng.shuffle(perm)
    return relabel(g, perm), perm


def disjoint_union(g: ColoredGraph, h: ColoredGraph) -> ColoredGraph:
    """g on 0..n-1 followed by h shifted by g.n"""
    shift = g.n
    edges = list(g.edges) + [(u + shift, v + shift) for u, v in h.edges]
    return ColoredGraph(g.n + h.n, edges, g.colors + h.colors)


def with_colors(g: ColoredGraph, colors: Sequence[int]) -> ColoredGraph:
    return ColoredGraph(g.n, g.edges, colors)


def connected_components(g: ColoredGraph) -> List[List[int]]:
    """Components as sorted vertex lists, ordered by smallest vertex"""
    seen = [False] * g.n
    components = []
    for s in range(g.n):
        if seen[s]:
            continue
        seen[s] = True
        stack, comp = [s], [s]
        while stack:
            x = stack.pop()
            for y in g.adj[x]:
                if not seen[y]:
                    seen[y] = True
                    stack.append(y)
                    comp.append(y)
        components.append(sorted(comp))
    return components


def is_connected(g: ColoredGraph) -> bool:
    return g.n <= 1 or len(connected_components(g)) == 1


def to_networkx(g: ColoredGraph) -> nx.Graph:
    graph = nx.Graph()
    graph.add_nodes_from((v, {"color": g.colors[v]}) for v in range(g.n))
    graph.add_edges_from(g.edges)
    return graph


def from_networkx(graph: nx.Graph, color_attr: str = "color") -> ColoredGraph:
    """Import a networkx graph; nodes are relabeled in sorted order"""
    order = sorted(graph.nodes())
    index = {v: i for i, v in enumerate(order)}
    colors = [int(graph.nodes[v].get(color_attr, 0)) for v in order]
    return ColoredGraph(
        len(order), [(index[u], index[v]) for u, v in graph.edges() if u != v], colors
    )
