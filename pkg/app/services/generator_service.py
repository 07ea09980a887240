"""
Instance families: half-graphs, CFI pairs, subdivisions, cographs, random
twin-width-1 graphs, random chain graphs and a small base-graph library.

Every sampler draws from `random.Random(seed)` only, so outputs are a pure
function of (parameters, seed).
"""

import logging
import random
from dataclasses import dataclass
from itertools import combinations
from typing import Dict, List, Optional, Sequence, Tuple

from app.constants import Constants
from app.core.errors import InvariantViolationError, PreconditionError
from app.graphs.colored_graph import (
    BipartiteView,
    ColoredGraph,
    disjoint_union,
    is_connected,
    relabel,
)
from app.graphs.trigraph import BLACK, RED, ContractionSequence
from app.services.canon_service import CsTrace, cs_trace
from app.services.contraction_service import sequence_from_partition_merges

logger = logging.getLogger(__name__)

NONE = 0
PRIME_STEP_ATTEMPTS = 500


def _require(condition: bool, detail: str) -> None:
    if not condition:
        raise PreconditionError(f"{Constants.INVALID_PARAMETER}: {detail}")


# -- base library ----------------------------------------------------------


def empty_graph(n: int) -> ColoredGraph:
    return ColoredGraph(n)


def path_graph(n: int) -> ColoredGraph:
    return ColoredGraph(n, [(i, i + 1) for i in range(n - 1)])


def cycle_graph(n: int) -> ColoredGraph:
    _require(n >= 3, "a cycle needs at least 3 vertices")
    return ColoredGraph(n, [(i, (i + 1) % n) for i in range(n)])


def complete_graph(n: int) -> ColoredGraph:
    return ColoredGraph(n, combinations(range(n), 2))


def complete_bipartite(a: int, b: int) -> ColoredGraph:
    """K_{a,b} with sides 0..a-1 and a..a+b-1"""
    return ColoredGraph(a + b, [(i, a + j) for i in range(a) for j in range(b)])


def cubic_circulant(n: int, jump: int = 1) -> ColoredGraph:
    """
    Circulant graph on Z_n with connection set {±jump, n/2}.

    cubic_circulant(4) is K4, cubic_circulant(2t) the Möbius ladder.
    """
    _require(n >= 4 and n % 2 == 0, "n must be even and at least 4")
    _require(0 < jump < n // 2, "jump must lie in 1..n/2-1")
    edges = set()
    for i in range(n):
        for j in ((i + jump) % n, (i + n // 2) % n):
            edges.add((min(i, j), max(i, j)))
    g = ColoredGraph(n, edges)
    if any(g.degree(v) != 3 for v in range(n)):
        raise PreconditionError(Constants.NOT_CUBIC)
    return g


def petersen_graph() -> ColoredGraph:
    """Outer 5-cycle 0..4, inner pentagram 5..9, spokes i ~ i+5; cubic with treewidth 4"""
    outer = [(i, (i + 1) % 5) for i in range(5)]
    inner = [(5 + i, 5 + (i + 2) % 5) for i in range(5)]
    spokes = [(i, i + 5) for i in range(5)]
    return ColoredGraph(10, outer + inner + spokes)


def named_base(name: str) -> ColoredGraph:
    """CFI base by name: K4, Petersen or circulant:<n>:<jump>"""
    if name == "K4":
        return complete_graph(4)
    if name == "Petersen":
        return petersen_graph()
    kind, _, rest = name.partition(":")
    n, _, jump = rest.partition(":")
    _require(kind == "circulant" and n.isdigit() and jump.isdigit(), f"unknown base {name}")
    return cubic_circulant(int(n), int(jump))


def random_graph(n: int, p: float, seed: int) -> ColoredGraph:
    """Erdős-Rényi G(n, p)"""
    _require(0.0 <= p <= 1.0, "p must lie in [0, 1]")
    rng = random.Random(seed)
    return ColoredGraph(n, [e for e in combinations(range(n), 2) if rng.random() < p])


# -- half-graphs -----------------------------------------------------------


def half_graph(t: int) -> BipartiteView:
    """
    H_t with v_i = i-1 and w_j = t+j-1, v_i ~ w_j iff i <= j.

    Returns:
        BipartiteView: left side (v_1..v_t), right side (w_1..w_t)
    """
    _require(t >= 1, "t must be at least 1")
    edges = [(i, t + j) for i in range(t) for j in range(i, t)]
    return BipartiteView(ColoredGraph(2 * t, edges), tuple(range(t)), tuple(range(t, 2 * t)))


def half_graph_schedule(t: int) -> ContractionSequence:
    """
    Width-1 contraction sequence of H_t ending with the two sides.

    Merges w_{t-1} into w_t, then v_{t-1} into v_t, and so on down to index 1;
    the last merge joins the two sides.
    """
    h = half_graph(t)
    v_last, w_last = t - 1, 2 * t - 1
    merges = []
    for j in range(t - 2, -1, -1):
        merges.append((w_last, t + j))
        merges.append((v_last, j))
    merges.append((v_last, w_last))
    return sequence_from_partition_merges(h.graph, merges)


def random_chain_graph(a: int, b: int, density: float, seed: int) -> BipartiteView:
    """
    Random partial half-graph with a left and b right vertices.

    The right side gets a random linear order; every left vertex is adjacent
    to a suffix of it whose length is Binomial(b, density). Vertex ids are
    shuffled.
    """
    _require(a >= 1 and b >= 1, "a and b must be at least 1")
    _require(0.0 <= density <= 1.0, "density must lie in [0, 1]")
    rng = random.Random(seed)
    right = list(range(a, a + b))
    rng.shuffle(right)
    edges = []
    for v in range(a):
        size = sum(rng.random() < density for _ in range(b))
        edges.extend((v, w) for w in right[b - size :])
    perm = list(range(a + b))
    rng.shuffle(perm)
    g = relabel(ColoredGraph(a + b, edges), perm)
    return BipartiteView(g, tuple(perm[v] for v in range(a)), tuple(perm[w] for w in range(a, a + b)))


# -- CFI -------------------------------------------------------------------


@dataclass(frozen=True)
class CfiPair:
    base: ColoredGraph
    even: ColoredGraph
    odd: ColoredGraph
    twisted_edge: Tuple[int, int]


def _cfi_graph(base: ColoredGraph, twisted: Optional[Tuple[int, int]]) -> ColoredGraph:
    # gadget of x occupies 10x..10x+9: four inner vertices for the even
    # subsets of its edges, then an endpoint pair (bit 0, bit 1) per edge
    edges = []
    colors = []
    endpoint: Dict[Tuple[int, int], int] = {}
    for x in range(base.n):
        start = 10 * x
        incident = sorted(base.adj[x])
        colors.extend([2 * x + 1] * 4 + [2 * x + 2] * 6)
        for idx, y in enumerate(incident):
            endpoint[(x, y)] = start + 4 + 2 * idx
        subsets = [()] + list(combinations(range(3), 2))
        for s, subset in enumerate(subsets):
            for idx, y in enumerate(incident):
                bit = 1 if idx in subset else 0
                edges.append((start + s, endpoint[(x, y)] + bit))
    for x, y in base.edges:
        flip = 1 if (x, y) == twisted else 0
        for bit in (0, 1):
            edges.append((endpoint[(x, y)] + bit, endpoint[(y, x)] + (bit ^ flip)))
    return ColoredGraph(10 * base.n, edges, colors)


def cfi_pair(base: ColoredGraph) -> CfiPair:
    """
    CFI graphs over a connected cubic base.

    Each base vertex becomes 4 inner vertices (even subsets of its three
    edges) and 2 endpoint vertices per incident edge; an inner vertex meets
    the endpoint carrying its membership bit. Endpoints of a base edge are
    joined bit to bit, except on the twisted edge (the smallest one) of the
    odd graph. Vertices are colored by gadget, so both graphs have
    10|V(base)| vertices and 12|V(base)| + 2|E(base)| edges.

    Raises:
        PreconditionError: If base is not 3-regular or not connected
    """
    if base.n == 0 or any(base.degree(v) != 3 for v in range(base.n)):
        raise PreconditionError(Constants.NOT_CUBIC)
    if not is_connected(base):
        raise PreconditionError(Constants.NOT_CONNECTED)
    twisted = base.edges[0]
    pair = CfiPair(base, _cfi_graph(base, None), _cfi_graph(base, twisted), twisted)
    logger.debug("cfi_pair base n=%d -> n=%d m=%d", base.n, pair.even.n, pair.even.m)
    return pair


# -- subdivisions ----------------------------------------------------------


def subdivide(g: ColoredGraph, s: int, order: Optional[Sequence[int]] = None) -> ColoredGraph:
    """
    The (s, order)-subdivision of g.

    Edge e = vw with v before w in `order` (default: vertex ids) becomes the
    path v, x_1, ..., x_s, w. The x_i of the e-th edge (in sorted edge order)
    get ids n + e*s + i - 1 and color 0; original vertices keep their colors.
    """
    _require(s >= 0, "s must be nonnegative")
    if order is None:
        order = range(g.n)
    rank = {v: i for i, v in enumerate(order)}
    if sorted(rank) != list(range(g.n)):
        raise PreconditionError(Constants.INVALID_PERMUTATION)
    if s == 0:
        return g
    edges = []
    for e, (u, v) in enumerate(g.edges):
        if rank[u] > rank[v]:
            u, v = v, u
        path = [u] + [g.n + e * s + i for i in range(s)] + [v]
        edges.extend(zip(path, path[1:]))
    colors = list(g.colors) + [0] * (s * g.m)
    return ColoredGraph(g.n + s * g.m, edges, colors)


def desubdivide(g: ColoredGraph) -> Tuple[ColoredGraph, List[int]]:
    """
    Recover the base of a subdivided graph of minimum degree 3.

    Branch vertices are those of degree at least 3; every other vertex must
    have degree 2 and lie on a path between two branch vertices.

    Returns:
        Tuple[ColoredGraph, List[int]]: The base on the branch vertices (in id
        order, colors kept) and the branch vertex of each base vertex

    Raises:
        PreconditionError: If g is not a subdivision of a simple graph with
        minimum degree 3
    """
    branch = [v for v in range(g.n) if g.degree(v) >= 3]
    index = {v: i for i, v in enumerate(branch)}
    if any(g.degree(v) != 2 for v in range(g.n) if v not in index):
        raise PreconditionError(f"{Constants.INVALID_PARAMETER}: not a subdivision")
    edges = set()
    visited = set()
    for b in branch:
        for first in g.adj[b]:
            prev, cur = b, first
            while cur not in index:
                visited.add(cur)
                prev, cur = cur, next(x for x in g.adj[cur] if x != prev)
            if cur == b:
                raise PreconditionError(f"{Constants.INVALID_PARAMETER}: loop in base")
            edges.add((min(index[b], index[cur]), max(index[b], index[cur])))
    if len(visited) + len(branch) != g.n or 2 * len(edges) != sum(g.degree(v) for v in branch):
        raise PreconditionError(f"{Constants.INVALID_PARAMETER}: not a subdivision")
    return ColoredGraph(len(branch), edges, [g.colors[v] for v in branch]), branch


# -- cographs --------------------------------------------------------------


def random_cograph(n: int, seed: int) -> ColoredGraph:
    """
    Cograph from a random binary cotree.

    Sizes split uniformly; each internal node is a join or a disjoint union
    with probability 1/2. Vertex ids are shuffled.
    """
    _require(n >= 1, "n must be at least 1")
    rng = random.Random(seed)

    def build(size: int) -> ColoredGraph:
        if size == 1:
            return ColoredGraph(1)
        left = rng.randint(1, size - 1)
        a, b = build(left), build(size - left)
        union = disjoint_union(a, b)
        if rng.random() < 0.5:
            return union
        joins = [(u, a.n + v) for u in range(a.n) for v in range(b.n)]
        return ColoredGraph(union.n, list(union.edges) + joins)

    g = build(n)
    perm = list(range(n))
    rng.shuffle(perm)
    return relabel(g, perm)


# -- twin-width 1 ----------------------------------------------------------


class _Grower:
    """
    Builds a trigraph top-down by splitting parts.

    Splitting z into (z1, z2) is the inverse of contracting them: black
    neighbors stay black for both, non-neighbors stay non-neighbors, and the
    red neighbor (at most one) is seen differently by z1 and z2, or red by
    exactly one of them. Red degrees stay at most 1 throughout; the final
    trigraph has n parts and no red edge, so read bottom-up the splits form a
    contraction sequence of width at most 1.
    """

    def __init__(self, n: int, rng: random.Random):
        self.n = n
        self.rng = rng
        self.adj: Dict[int, Dict[int, int]] = {0: {}}
        self.children: Dict[int, Tuple[int, int]] = {}
        self.splits: List[int] = []
        self.next_id = 1

    def reds(self) -> int:
        return sum(c == RED for row in self.adj.values() for c in row.values()) // 2

    def red_neighbor(self, z: int) -> Optional[int]:
        return next((y for y, c in self.adj[z].items() if c == RED), None)

    def options(self, z: int) -> List[Tuple[int, int, int]]:
        """(color z1-y, color z2-y, color z1-z2) choices keeping red degree <= 1"""
        y = self.red_neighbor(z)
        remaining = self.n - len(self.adj) - 1
        reds_now = self.reds()
        choices = []
        pairs = [(RED, BLACK), (RED, NONE), (BLACK, RED), (NONE, RED), (BLACK, NONE), (NONE, BLACK)]
        for a, b in pairs if y is not None else [(None, None)]:
            for inner in (NONE, BLACK, RED):
                if inner == RED and RED in (a, b):
                    continue
                after = reds_now - (y is not None) + (a == RED) + (b == RED) + (inner == RED)
                if after > remaining:
                    continue
                choices.append((a, b, inner))
        return choices

    def split(self, z: int, choice: Tuple[int, int, int]) -> None:
        a, b, inner = choice
        z1, z2 = self.next_id, self.next_id + 1
        self.next_id += 2
        y = self.red_neighbor(z)
        row = self.adj.pop(z)
        self.adj[z1], self.adj[z2] = {}, {}
        for x, color in row.items():
            del self.adj[x][z]
            if x == y:
                pieces = ((z1, a), (z2, b))
            else:
                pieces = ((z1, color), (z2, color))
            for part, c in pieces:
                if c != NONE:
                    self.adj[part][x] = c
                    self.adj[x][part] = c
        if inner != NONE:
            self.adj[z1][z2] = inner
            self.adj[z2][z1] = inner
        self.children[z] = (z1, z2)
        self.splits.append(z)

    def grow(self) -> None:
        while len(self.adj) < self.n:
            candidates = sorted(self.adj)
            self.rng.shuffle(candidates)
            for z in candidates:
                choices = self.options(z)
                if choices:
                    self.split(z, self.rng.choice(choices))
                    break
            else:
                raise PreconditionError(f"{Constants.INVALID_PARAMETER}: no admissible split")

    def result(self) -> Tuple[ColoredGraph, List[Tuple[int, int]]]:
        leaves = sorted(self.adj)
        self.rng.shuffle(leaves)
        vertex = {leaf: i for i, leaf in enumerate(leaves)}
        edges = [(vertex[x], vertex[y]) for x in self.adj for y, c in self.adj[x].items() if x < y]

        def some_leaf(z: int) -> int:
            while z in self.children:
                z = self.children[z][0]
            return vertex[z]

        merges = [
            (some_leaf(self.children[z][0]), some_leaf(self.children[z][1]))
            for z in reversed(self.splits)
        ]
        return ColoredGraph(self.n, edges), merges


def _grow(n: int, seed: int) -> Tuple[ColoredGraph, ContractionSequence]:
    grower = _Grower(n, random.Random(seed))
    grower.grow()
    g, merges = grower.result()
    return g, sequence_from_partition_merges(g, merges)


def random_tww1_with_sequence(n: int, seed: int) -> Tuple[ColoredGraph, ContractionSequence]:
    """
    Random graph of twin-width at most 1 with its generating sequence.

    Grown from a single part by random splits that keep every red degree at
    most 1 and leave no red edge at the end.
    """
    _require(n >= 2, "n must be at least 2")
    return _grow(n, seed)


def random_tww1(n: int, seed: int) -> ColoredGraph:
    return random_tww1_with_sequence(n, seed)[0]


def _graph_from_rows(rows: Sequence[int]) -> ColoredGraph:
    n = len(rows)
    return ColoredGraph(n, [(u, v) for u in range(n) for v in range(u + 1, n) if (rows[u] >> v) & 1])


def _parts_before(merges: Sequence[Tuple[int, int]], size: int) -> Tuple[List[int], Dict[int, int]]:
    """Owner of every vertex and owner -> vertex bitset after replaying the merges"""
    owner = list(range(size))
    parts = {v: 1 << v for v in range(size)}
    for a, b in merges:
        keep, gone = owner[a], owner[b]
        mask = parts.pop(gone)
        for v in range(size):
            if (mask >> v) & 1:
                owner[v] = keep
        parts[keep] |= mask
    return owner, parts


def _keeps_prime(rows: Sequence[int], mask: int) -> bool:
    """
    Whether a prime graph plus a vertex with neighborhood mask is prime.

    A module of the extension meets the old vertices in a module of the
    prime graph, so the only candidates are twins and the old vertex set.
    """
    if mask == 0 or mask == (1 << len(rows)) - 1:
        return False
    return all(mask & ~(1 << x) != row for x, row in enumerate(rows))


def _prime_extension(rows: List[int], trace: CsTrace, rng: random.Random) -> Optional[List[int]]:
    """
    One more vertex, inserted as a near-twin of a canonical run's endpoint.

    The run from (0, 1) is replayed up to a random merge; the new vertex
    copies one endpoint part's adjacency towards the remaining vertices and
    is complete or anticomplete to each endpoint part. Earlier phases and
    red steps see it like the parts it is homogeneous to, so the run from
    (0, 1) usually still succeeds; that is checked.
    """
    size = len(rows)
    j = rng.randrange(1, len(trace.vertex_merges))
    owner, parts = _parts_before(trace.vertex_merges[:j], size)
    ends = trace.endpoints[j]
    side = rng.randrange(2)
    near, other = parts[owner[ends[side]]], parts[owner[ends[1 - side]]]
    rest = ((1 << size) - 1) & ~near & ~other
    mask = rows[ends[side]] & rest
    if rng.random() < 0.5:
        mask |= near
    if rng.random() < 0.5:
        mask |= other
    if not _keeps_prime(rows, mask):
        return None
    grown = [row | (1 << size) if (mask >> v) & 1 else row for v, row in enumerate(rows)] + [mask]
    return None if cs_trace(_graph_from_rows(grown), 0, 1).failed else grown


def random_prime_tww1(n: int, seed: int) -> ColoredGraph:
    """
    Random prime graph of twin-width at most 1.

    Grown from P4 one vertex at a time. Every intermediate graph is prime
    and its canonical run from (0, 1) succeeds, which certifies width 1.

    Raises:
        InvariantViolationError: If no extension is found for some size
    """
    _require(n >= 4, "prime graphs with a nontrivial edge need at least 4 vertices")
    rng = random.Random(seed)
    rows = [0b0010, 0b0101, 0b1010, 0b0100]
    while len(rows) < n:
        trace = cs_trace(_graph_from_rows(rows), 0, 1)
        for _ in range(PRIME_STEP_ATTEMPTS):
            grown = _prime_extension(rows, trace, rng)
            if grown is not None:
                rows = grown
                break
        else:
            raise InvariantViolationError(
                f"no prime extension of size {len(rows) + 1} in {PRIME_STEP_ATTEMPTS} attempts"
            )
    perm = list(range(n))
    rng.shuffle(perm)
    return relabel(_graph_from_rows(rows), perm)
