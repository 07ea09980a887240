"""
Trigraphs and contraction sequences.

A Trigraph is the quotient of a base graph by a partition: each live part
has an id and an original-vertex set, and two parts are joined by a black
edge (complete), a red edge (mixed) or nothing (anticomplete). Singleton
parts of the discrete partition use the vertex id; every merge creates a
fresh id starting at n, so replay logs are unambiguous.
"""

from dataclasses import dataclass, field
from typing import Dict, FrozenSet, Iterable, List, Optional, Sequence, Tuple

from app.constants import Constants
from app.core.errors import ContractionError, InvalidPartitionError
from app.graphs.colored_graph import ColoredGraph

BLACK = 1
RED = 2


@dataclass
class ContractionSequence:
    base: ColoredGraph
    merges: List[Tuple[int, int]] = field(default_factory=list)

    def __post_init__(self):
        self.merges = [(int(a), int(b)) for a, b in self.merges]

    def __len__(self) -> int:
        return len(self.merges)

    @property
    def is_full(self) -> bool:
        return len(self.merges) == max(self.base.n - 1, 0)

    def prefix(self, length: int) -> "ContractionSequence":
        return ContractionSequence(self.base, self.merges[:length])


class Trigraph:
    __slots__ = ("base", "parts", "adj", "next_id")

    def __init__(
        self,
        base: ColoredGraph,
        parts: Dict[int, FrozenSet[int]],
        adj: Dict[int, Dict[int, int]],
        next_id: int,
    ):
        self.base = base
        self.parts = parts
        self.adj = adj
        self.next_id = next_id

    @classmethod
    def from_graph(cls, g: ColoredGraph) -> "Trigraph":
        parts = {v: frozenset((v,)) for v in range(g.n)}
        adj = {v: {w: BLACK for w in g.adj[v]} for v in range(g.n)}
        return cls(g, parts, adj, g.n)

    @property
    def n(self) -> int:
        return len(self.parts)

    def live(self) -> List[int]:
        return sorted(self.parts)

    def is_live(self, p: int) -> bool:
        return p in self.parts

    def part_of(self, p: int) -> FrozenSet[int]:
        return self.parts[p]

    def edge(self, p: int, q: int) -> int:
        """0 for no edge, BLACK or RED"""
        return self.adj[p].get(q, 0)

    def red_neighbors(self, p: int) -> List[int]:
        return [q for q, c in self.adj[p].items() if c == RED]

    def red_degree(self, p: int) -> int:
        return sum(1 for c in self.adj[p].values() if c == RED)

    def max_red_degree(self) -> int:
        return max((self.red_degree(p) for p in self.parts), default=0)

    @property
    def black(self) -> FrozenSet[Tuple[int, int]]:
        return frozenset(
            (p, q) for p, row in self.adj.items() for q, c in row.items() if p < q and c == BLACK
        )

    @property
    def red(self) -> FrozenSet[Tuple[int, int]]:
        return frozenset(
            (p, q) for p, row in self.adj.items() for q, c in row.items() if p < q and c == RED
        )

    def merged_row(self, u: int, v: int) -> Dict[int, int]:
        """Adjacency the merged part of u and v would get"""
        row: Dict[int, int] = {}
        au, av = self.adj[u], self.adj[v]
        for x in set(au) | set(av):
            if x == u or x == v:
                continue
            row[x] = BLACK if au.get(x) == BLACK and av.get(x) == BLACK else RED
        return row

    def signature(self) -> FrozenSet:
        """Id-independent description: parts as vertex sets and colored edges between them"""
        edges = frozenset(
            (frozenset((self.parts[p], self.parts[q])), c)
            for p, row in self.adj.items()
            for q, c in row.items()
            if p < q
        )
        return frozenset((frozenset(self.parts.values()), edges))

    def same_as(self, other: "Trigraph") -> bool:
        return self.signature() == other.signature()

    def partition(self) -> List[List[int]]:
        return sorted(sorted(s) for s in self.parts.values())

    def __repr__(self) -> str:
        return f"Trigraph(parts={self.n}, red={len(self.red)}, black={len(self.black)})"


def _check_partition(g: ColoredGraph, partition: Sequence[Iterable[int]]) -> List[FrozenSet[int]]:
    parts = [frozenset(p) for p in partition]
    seen = set()
    for p in parts:
        if not p:
            raise InvalidPartitionError(f"{Constants.NOT_A_PARTITION}: empty part")
        if seen & p:
            raise InvalidPartitionError(f"{Constants.NOT_A_PARTITION}: overlapping parts")
        seen |= p
    if seen != set(range(g.n)):
        raise InvalidPartitionError(Constants.NOT_A_PARTITION)
    return parts


def quotient(g: ColoredGraph, partition: Sequence[Iterable[int]]) -> Trigraph:
    """
    Quotient trigraph G/P.

    Singleton parts keep their vertex id; larger parts get ids n, n+1, ...
    ordered by smallest member.

    Raises:
        InvalidPartitionError: If P does not partition V(g)
    """
    parts = sorted(_check_partition(g, partition), key=min)
    ids: Dict[int, FrozenSet[int]] = {}
    fresh = g.n
    for p in parts:
        if len(p) == 1:
            ids[next(iter(p))] = p
        else:
            ids[fresh] = p
            fresh += 1
    owner = {}
    for pid, p in ids.items():
        for v in p:
            owner[v] = pid

    counts: Dict[Tuple[int, int], int] = {}
    for u, v in g.edges:
        a, b = owner[u], owner[v]
        if a != b:
            key = (a, b) if a < b else (b, a)
            counts[key] = counts.get(key, 0) + 1

    adj: Dict[int, Dict[int, int]] = {pid: {} for pid in ids}
    for (a, b), c in counts.items():
        color = BLACK if c == len(ids[a]) * len(ids[b]) else RED
        adj[a][b] = color
        adj[b][a] = color
    return Trigraph(g, ids, adj, fresh)


def contract(t: Trigraph, u: int, v: int, step: Optional[int] = None) -> Trigraph:
    """
    Merge live parts u and v into a fresh part.

    The input trigraph is left untouched; only the rows touched by the merge
    are copied.

    Raises:
        ContractionError: If u == v or either part is not live
    """
    if u == v:
        raise ContractionError(f"{Constants.SAME_PART}: {u}", step)
    for p in (u, v):
        if p not in t.parts:
            raise ContractionError(f"{Constants.DEAD_PART}: {p}", step)

    z = t.next_id
    row = t.merged_row(u, v)
    parts = dict(t.parts)
    merged = parts.pop(u) | parts.pop(v)
    parts[z] = merged

    adj = dict(t.adj)
    del adj[u]
    del adj[v]
    for x in set(t.adj[u]) | set(t.adj[v]):
        if x == u or x == v:
            continue
        new_row = dict(adj[x])
        new_row.pop(u, None)
        new_row.pop(v, None)
        new_row[z] = row[x]
        adj[x] = new_row
    adj[z] = row
    return Trigraph(t.base, parts, adj, z + 1)


def red_components(t: Trigraph) -> List[List[int]]:
    """Connected components of the red graph, as sorted part-id lists"""
    seen = set()
    components = []
    for s in t.live():
        if s in seen:
            continue
        seen.add(s)
        stack, comp = [s], [s]
        while stack:
            x = stack.pop()
            for y in t.red_neighbors(x):
                if y not in seen:
                    seen.add(y)
                    stack.append(y)
                    comp.append(y)
        components.append(sorted(comp))
    return components


def max_red_component(t: Trigraph) -> int:
    """Largest red component, measured in parts"""
    return max((len(c) for c in red_components(t)), default=0)
