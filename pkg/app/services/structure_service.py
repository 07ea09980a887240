"""
Bipartite structure: GF(2) biadjacency rank, partial half-graphs, matchings,
balanced bicliques, rank-connectivity and red-cut audits of width-1
contraction sequences.
"""

import logging
from itertools import combinations
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

import networkx as nx
import numpy as np

from app.constants import Constants
from app.core.config import settings
from app.core.errors import BudgetRefusedError, PreconditionError
from app.graphs.colored_graph import BipartiteView, ColoredGraph
from app.graphs.trigraph import ContractionSequence
from app.schemas.analysis_dto import (
    BicliqueResult,
    HalfGraphCheck,
    HalfGraphWitness,
    MatchingResult,
    RedCutAudit,
    RedCutViolation,
)
from app.services.contraction_service import partitions, verify_sequence

logger = logging.getLogger(__name__)

WORD = 64


class Gf2Matrix:
    """
    Dense matrix over GF(2) with rows packed into little-endian uint64 words.

    Column j of a row is bit j % 64 of word j // 64.
    """

    def __init__(self, dense, row_labels: Optional[Sequence[int]] = None, col_labels: Optional[Sequence[int]] = None):
        bits = np.asarray(dense, dtype=bool)
        if bits.ndim != 2:
            bits = bits.reshape(len(bits), -1)
        self.shape: Tuple[int, int] = bits.shape
        rows, cols = bits.shape
        self.row_labels = list(row_labels) if row_labels is not None else list(range(rows))
        self.col_labels = list(col_labels) if col_labels is not None else list(range(cols))
        width = -(-cols // WORD) * WORD
        padded = np.zeros((rows, width), dtype=bool)
        padded[:, :cols] = bits
        self.words = np.packbits(padded, axis=1, bitorder="little").view("<u8")

    def entry(self, i: int, j: int) -> int:
        return int((self.words[i, j // WORD] >> np.uint64(j % WORD)) & np.uint64(1))

    def to_dense(self) -> np.ndarray:
        rows, cols = self.shape
        unpacked = np.unpackbits(self.words.view(np.uint8), axis=1, bitorder="little")
        return unpacked[:, :cols].astype(np.uint8)

    def rank(self) -> int:
        return gf2_rank(self)


def gf2_rank(m: Gf2Matrix) -> int:
    """Rank over GF(2) by elimination on packed rows, one XOR per row batch"""
    rows, cols = m.shape
    if rows == 0 or cols == 0:
        return 0
    work = m.words.copy()
    rank = 0
    for col in range(cols):
        word = col // WORD
        mask = np.uint64(1) << np.uint64(col % WORD)
        hits = np.nonzero(work[rank:, word] & mask)[0]
        if hits.size == 0:
            continue
        pivot = rank + int(hits[0])
        if pivot != rank:
            work[[rank, pivot]] = work[[pivot, rank]]
        below = rank + 1 + np.nonzero(work[rank + 1 :, word] & mask)[0]
        work[below] ^= work[rank]
        rank += 1
        if rank == rows:
            break
    return rank


def _xor_rank(rows: Iterable[int]) -> int:
    """Rank of int-bitset rows (basis keyed by leading bit)"""
    basis: Dict[int, int] = {}
    for r in rows:
        while r:
            top = r.bit_length() - 1
            if top not in basis:
                basis[top] = r
                break
            r ^= basis[top]
    return len(basis)


def biadjacency(g: ColoredGraph, rows: Iterable[int], cols: Iterable[int]) -> Gf2Matrix:
    """Adj_G(A, B): entry (a, b) is 1 iff ab is an edge"""
    a, b = sorted(set(rows)), sorted(set(cols))
    if set(a) & set(b):
        raise PreconditionError(Constants.NOT_DISJOINT)
    dense = np.zeros((len(a), len(b)), dtype=bool)
    col_index = {v: j for j, v in enumerate(b)}
    for i, v in enumerate(a):
        for w in g.adj[v]:
            j = col_index.get(w)
            if j is not None:
                dense[i, j] = True
    return Gf2Matrix(dense, a, b)


def cut_rank(g: ColoredGraph, side: Iterable[int]) -> int:
    """rk_G(X, V minus X)"""
    inside = 0
    for v in side:
        inside |= 1 << v
    outside = ((1 << g.n) - 1) & ~inside
    return _xor_rank(g.rows[v] & outside for v in range(g.n) if (inside >> v) & 1)


def _neighborhoods(b: BipartiteView) -> Dict[int, int]:
    right = b.right_mask
    return {v: b.graph.rows[v] & right for v in b.left}


def reduce_bipartite(b: BipartiteView) -> BipartiteView:
    """Drop isolated vertices and keep the smallest vertex of each twin class per side"""

    def keep(side: Sequence[int], other: int) -> List[int]:
        seen = set()
        kept = []
        for v in side:
            row = b.graph.rows[v] & other
            if row and row not in seen:
                seen.add(row)
                kept.append(v)
        return kept

    return BipartiteView(b.graph, keep(b.left, b.right_mask), keep(b.right, b.left_mask))


def is_partial_half_graph(b: BipartiteView) -> HalfGraphCheck:
    """
    Recognise induced subgraphs of half-graphs.

    Left neighborhoods sorted by size must form an inclusion chain; the right
    side then nests as well. On success the check carries an embedding into
    H_N (left vertex at rank r plays v_{(r+1)(|R|+1)}, a right vertex with d
    left neighbors plays w_{d(|R|+1)+k} for a distinct k in 1..|R|);
    otherwise two left vertices with incomparable neighborhoods.
    """
    rows = _neighborhoods(b)
    order = sorted(b.left, key=lambda v: (-bin(rows[v]).count("1"), v))
    for x, y in zip(order, order[1:]):
        if rows[y] & ~rows[x]:
            return HalfGraphCheck(is_partial_half_graph=False, incomparable=(x, y))

    spread = len(b.right) + 1
    left_index = {v: (r + 1) * spread for r, v in enumerate(order)}
    right_index = {}
    for k, w in enumerate(b.right, start=1):
        degree = sum(1 for v in b.left if (rows[v] >> w) & 1)
        right_index[w] = degree * spread + k
    return HalfGraphCheck(
        is_partial_half_graph=True,
        left_order=order,
        left_index=left_index,
        right_index=right_index,
        host_size=max(list(left_index.values()) + list(right_index.values()) + [0]),
    )


def _require_chain(b: BipartiteView) -> HalfGraphCheck:
    check = is_partial_half_graph(b)
    if not check.is_partial_half_graph:
        raise PreconditionError(f"{Constants.NOT_PARTIAL_HALF_GRAPH}: {check.incomparable}")
    return check


def max_induced_half_graph(b: BipartiteView) -> HalfGraphWitness:
    """
    Largest t such that b contains H_t semi-induced.

    The distinct nonempty left neighborhoods N_1 > N_2 > ... > N_t give
    v_i = a vertex with neighborhood N_i and w_i any vertex of N_i minus
    N_{i+1}; t is the GF(2) rank of the reduced biadjacency matrix.

    Raises:
        PreconditionError: If b is not a partial half-graph
    """
    check = _require_chain(b)
    rows = _neighborhoods(b)
    chain: List[int] = []
    reps: List[int] = []
    for v in check.left_order:
        if rows[v] and (not chain or rows[v] != chain[-1]):
            chain.append(rows[v])
            reps.append(v)
    pairs = []
    for i, row in enumerate(chain):
        rest = row & ~(chain[i + 1] if i + 1 < len(chain) else 0)
        pairs.append((reps[i], (rest & -rest).bit_length() - 1))
    return HalfGraphWitness(t=len(pairs), pairs=pairs)


def max_matching(b: BipartiteView) -> MatchingResult:
    """Maximum matching by Hopcroft-Karp"""
    graph = nx.Graph()
    graph.add_nodes_from(b.left, bipartite=0)
    graph.add_nodes_from(b.right, bipartite=1)
    graph.add_edges_from(b.edges())
    matching = nx.bipartite.hopcroft_karp_matching(graph, top_nodes=b.left)
    pairs = sorted((v, matching[v]) for v in b.left if v in matching)
    return MatchingResult(size=len(pairs), pairs=pairs)


def max_balanced_biclique_chain(b: BipartiteView) -> BicliqueResult:
    """
    Largest K_{t,t} in a partial half-graph.

    With left vertices in inclusion-descending order l_1, l_2, ..., the first
    i of them share N(l_i), so t = max_i min(i, |N(l_i)|).

    Raises:
        PreconditionError: If b is not a partial half-graph
    """
    check = _require_chain(b)
    rows = _neighborhoods(b)
    best, at = 0, 0
    for i, v in enumerate(check.left_order, start=1):
        t = min(i, bin(rows[v]).count("1"))
        if t > best:
            best, at = t, i
    if not best:
        return BicliqueResult(t=0)
    shared = sorted(w for w in b.right if (rows[check.left_order[at - 1]] >> w) & 1)
    return BicliqueResult(t=best, left=sorted(check.left_order[:best]), right=shared[:best])


def rank_connectivity(
    g: ColoredGraph, a: Iterable[int], b: Iterable[int], max_vertices: Optional[int] = None
) -> int:
    """
    min over A <= X <= V minus B of rk_G(X, V minus X), by cut enumeration.

    Raises:
        PreconditionError: If A and B intersect
        BudgetRefusedError: Above RANK_CONNECTIVITY_MAX_VERTICES
    """
    limit = max_vertices if max_vertices is not None else settings.RANK_CONNECTIVITY_MAX_VERTICES
    a, b = set(a), set(b)
    if a & b:
        raise PreconditionError(Constants.NOT_DISJOINT)
    if g.n > limit:
        raise BudgetRefusedError(f"{Constants.RANK_CONNECTIVITY_TOO_LARGE} ({g.n} > {limit})")
    free = [v for v in range(g.n) if v not in a and v not in b]
    best = None
    for size in range(len(free) + 1):
        for extra in combinations(free, size):
            r = cut_rank(g, a.union(extra))
            if best is None or r < best:
                best = r
                if best == 0:
                    return 0
    return best or 0


def audit_red_cuts(g: ColoredGraph, s: ContractionSequence) -> RedCutAudit:
    """
    Check that every two parts of every partition of a width-1 sequence
    induce a partial half-graph.

    Raises:
        PreconditionError: If the sequence has width above 1
    """
    report = verify_sequence(g, s)
    if report.width > 1:
        raise PreconditionError(f"{Constants.WIDTH_ABOVE_ONE}: {report.width}")
    violations = []
    checked = 0
    for step, partition in enumerate(partitions(g, s), start=-1):
        for p, q in combinations(partition, 2):
            checked += 1
            check = is_partial_half_graph(BipartiteView(g, tuple(p), tuple(q)))
            if not check.is_partial_half_graph:
                violations.append(
                    RedCutViolation(step=step, part_p=p, part_q=q, incomparable=check.incomparable)
                )
    if violations:
        logger.warning("red-cut audit: %d violations", len(violations))
    return RedCutAudit(width=report.width, steps=len(s), cuts_checked=checked, violations=violations)
