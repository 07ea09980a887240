"""
Weisfeiler-Leman refinement and the bijective pebble game.

The k-WL engine keeps one flat int64 color per k-tuple, graph after graph,
each graph's tuples in row-major order of their coordinates. A round walks
the tuples in chunks; for a tuple v and a vertex w it forms the cell
(color of w, then per position i the code 4 * C(v[w/i]) + 2 * [v_i ~ w] +
[v_i = w]), hashes every cell and sums the hashes over w. New ids are ranks
of the sorted pairs (old color, hash sum). Several graphs are refined in
lockstep over one palette, which makes their ids directly comparable.

Hashing may merge classes that exact refinement keeps apart, never the
reverse, so a histogram difference is final. A coloring the rounds report
as stable is checked against the exact sorted cell multisets; a failed check
reruns the refinement with fresh salts.

Peak memory is a constant number of words per tuple plus one chunk of cells.

The pebble game computes Duplicator's surviving positions as a greatest
fixed point over boolean arrays; bijection existence is a perfect matching
on the compatibility matrix.
"""

import logging
from dataclasses import dataclass
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import maximum_bipartite_matching

from app.constants import Constants
from app.core.config import settings
from app.core.errors import BudgetRefusedError, InvariantViolationError, PreconditionError
from app.graphs.colored_graph import ColoredGraph, disjoint_union
from app.schemas.wl_dto import GameVerdict, WlVerdict

logger = logging.getLogger(__name__)

# Above this size 1-WL comparisons use color_refinement on the union
DENSE_K1_MAX_VERTICES = 2000
# Cells (tuple, w) materialized at once
CHUNK_CELLS = 1 << 20
# Peak bytes per tuple and graph: colors, hash sums and ranking scratch
TUPLE_BYTES = 64
HASH_ATTEMPTS = 3
# Hashed rounds color_refinement runs before finishing with the worklist
HASHED_ROUNDS = 64

_M1 = np.uint64(0xBF58476D1CE4E5B9)
_M2 = np.uint64(0x94D049BB133111EB)


@dataclass
class WlColoring:
    k: int
    colors: np.ndarray
    rounds: Optional[int] = None

    @property
    def n(self) -> int:
        return self.colors.shape[0] if self.colors.ndim else 0

    def classes(self) -> int:
        return int(np.unique(self.colors).size)

    def histogram(self) -> Dict[int, int]:
        return class_histogram(self)

    def partition(self) -> Tuple[int, ...]:
        """Colors renamed by first appearance in tuple order; equal iff same partition"""
        seen: Dict[int, int] = {}
        return tuple(seen.setdefault(int(c), len(seen)) for c in self.colors.reshape(-1))


def class_histogram(coloring: WlColoring) -> Dict[int, int]:
    ids, counts = np.unique(coloring.colors, return_counts=True)
    return {int(i): int(c) for i, c in zip(ids, counts)}


def _adjacency(g: ColoredGraph) -> np.ndarray:
    a = np.zeros((g.n, g.n), dtype=bool)
    if g.edges:
        e = np.array(g.edges, dtype=np.int64)
        a[e[:, 0], e[:, 1]] = True
        a[e[:, 1], e[:, 0]] = True
    return a


def _grids(n: int, ndim: int) -> List[np.ndarray]:
    """grids[a] has length n along axis a and length 1 elsewhere"""
    return [np.arange(n).reshape([n if b == a else 1 for b in range(ndim)]) for a in range(ndim)]


def _mix(x: np.ndarray) -> np.ndarray:
    """splitmix64 finalizer, elementwise on uint64"""
    x = x ^ (x >> np.uint64(30))
    x = x * _M1
    x = x ^ (x >> np.uint64(27))
    x = x * _M2
    return x ^ (x >> np.uint64(31))


def _rank(columns: Sequence[np.ndarray]) -> Tuple[np.ndarray, int]:
    """Dense ranks of the rows (columns[0][t], columns[1][t], ...), first column primary"""
    size = columns[0].size
    if size == 0:
        return np.zeros(0, dtype=np.int64), 0
    order = np.lexsort(list(columns)[::-1])
    boundary = np.zeros(size - 1, dtype=bool)
    for col in columns:
        ordered = col[order]
        boundary |= ordered[1:] != ordered[:-1]
    ranks = np.empty(size, dtype=np.int64)
    ranks[order] = np.concatenate(([0], np.cumsum(boundary)))
    return ranks, int(ranks[order[-1]]) + 1


class _Tuples:
    """The k-tuple space of several graphs of one order"""

    def __init__(self, graphs: Sequence[ColoredGraph], k: int, color_rank: Dict[int, int]):
        self.n = graphs[0].n
        self.k = k
        self.size = self.n**k
        self.total = self.size * len(graphs)
        self.adj = np.stack([_adjacency(g) for g in graphs])
        self.color = np.array(
            [[color_rank[c] for c in g.colors] for g in graphs], dtype=np.int64
        ).reshape(len(graphs), self.n)
        self.strides = [self.n ** (k - 1 - i) for i in range(k)]

    def chunks(self):
        step = max(1, CHUNK_CELLS // max(self.n, 1))
        for start in range(0, self.total, step):
            yield np.arange(start, min(start + step, self.total), dtype=np.int64)

    def split(self, index: np.ndarray) -> Tuple[np.ndarray, List[np.ndarray]]:
        graph, local = np.divmod(index, self.size)
        return graph, [(local // s) % self.n for s in self.strides]

    def atomic(self, index: np.ndarray) -> List[np.ndarray]:
        """Vertex colors per position, then 2 * adjacency + equality per position pair"""
        graph, coords = self.split(index)
        cols = [self.color[graph, v].astype(np.int32) for v in coords]
        for i in range(self.k):
            for j in range(i + 1, self.k):
                pair = self.adj[graph, coords[i], coords[j]] * 2 + (coords[i] == coords[j])
                cols.append(pair.astype(np.int8))
        return cols

    def cells(self, index: np.ndarray, colors: np.ndarray) -> List[np.ndarray]:
        """[color of w, code_1, ..., code_k], each of shape (len(index), n)"""
        graph, coords = self.split(index)
        w = np.arange(self.n, dtype=np.int64)
        rows = graph[:, None]
        out = [self.color[rows, w]]
        for v, stride in zip(coords, self.strides):
            v = v[:, None]
            moved = colors[index[:, None] + (w - v) * stride]
            out.append(moved * 4 + self.adj[rows, v, w] * 2 + (v == w))
        return out


def _atomic_coloring(spaces: Sequence[_Tuples]) -> Tuple[List[np.ndarray], int]:
    """Atomic-type ids over one palette for every space"""
    k = spaces[0].k
    dtypes = [np.int32] * k + [np.int8] * (k * (k - 1) // 2)
    joined = [np.empty(sum(s.total for s in spaces), dtype=d) for d in dtypes]
    start = 0
    for space in spaces:
        for index in space.chunks():
            for col, block in zip(joined, space.atomic(index)):
                col[start + index] = block
        start += space.total
    ids, palette = _rank(joined)
    out, start = [], 0
    for space in spaces:
        out.append(ids[start : start + space.total])
        start += space.total
    return out, palette


def _hash_round(space: _Tuples, colors: np.ndarray, salts: np.ndarray) -> Tuple[np.ndarray, int]:
    sums = np.empty(space.total, dtype=np.uint64)
    for index in space.chunks():
        cells = space.cells(index, colors)
        h = np.full(cells[0].shape, salts[0], dtype=np.uint64)
        for code, salt in zip(cells, salts[1:]):
            h = _mix(h ^ (code.astype(np.uint64) + salt))
        sums[index] = h.sum(axis=1, dtype=np.uint64)
    return _rank([colors, sums])


def _is_stable(space: _Tuples, colors: np.ndarray) -> bool:
    """Equal colors have equal sorted cell multisets, compared exactly"""
    order = np.argsort(colors, kind="stable")
    step = max(1, CHUNK_CELLS // max(space.n, 1))
    for start in range(0, order.size, step):
        index = order[max(start - 1, 0) : start + step]
        if index.size < 2:
            continue
        cells = np.stack(space.cells(index, colors))
        perm = np.lexsort(cells[::-1], axis=-1)
        cells = np.take_along_axis(cells, perm[None], axis=-1)
        same_class = colors[index[1:]] == colors[index[:-1]]
        same_cells = (cells[:, 1:] == cells[:, :-1]).all(axis=(0, 2))
        if (same_class & ~same_cells).any():
            return False
    return True


def _histograms(space: _Tuples, colors: np.ndarray, palette: int) -> List[np.ndarray]:
    return [
        np.bincount(colors[start : start + space.size], minlength=palette)
        for start in range(0, space.total, space.size)
    ]


def _differs(hists: Sequence[np.ndarray]) -> bool:
    return any(not np.array_equal(hists[0], h) for h in hists[1:])


def _refine_lockstep(
    graphs: Sequence[ColoredGraph], k: int, stop_on_difference: bool = False
) -> Tuple[List[np.ndarray], int, int]:
    """
    Refine several graphs to stability over one palette.

    Graphs of different orders are only compared on atomic types, which
    requires stop_on_difference.

    Returns:
        Tuple[List[np.ndarray], int, int]: Color arrays of shape (n,)*k,
        rounds that split a class, palette size

    Raises:
        InvariantViolationError: If no salt yields a verified stable coloring
    """
    all_colors = sorted({c for g in graphs for c in g.colors})
    rank = {c: i for i, c in enumerate(all_colors)}
    shapes = [(g.n,) * k for g in graphs]

    if len({g.n for g in graphs}) > 1:
        if not stop_on_difference:
            raise PreconditionError(f"{Constants.INVALID_PARAMETER}: lockstep graphs must have one order")
        ids, palette = _atomic_coloring([_Tuples([g], k, rank) for g in graphs])
        return [i.reshape(s) for i, s in zip(ids, shapes)], 0, palette
    if graphs[0].n == 0:
        return [np.zeros(s, dtype=np.int64) for s in shapes], 0, 0

    space = _Tuples(graphs, k, rank)
    for attempt in range(HASH_ATTEMPTS):
        (colors,), palette = _atomic_coloring([space])
        rounds = 0
        decided = stop_on_difference and _differs(_histograms(space, colors, palette))
        rng = np.random.default_rng(attempt)
        while not decided:
            salts = np.frombuffer(rng.bytes(8 * (k + 2)), dtype=np.uint64)
            new, new_palette = _hash_round(space, colors, salts)
            if new_palette == palette:
                break
            colors, palette = new, new_palette
            rounds += 1
            logger.debug("k=%d round %d: %d classes", k, rounds, palette)
            decided = stop_on_difference and _differs(_histograms(space, colors, palette))
        if decided or _is_stable(space, colors):
            out = [colors[i * space.size : (i + 1) * space.size].reshape(s) for i, s in enumerate(shapes)]
            return out, rounds, palette
        logger.warning(
            "k=%d: hashed refinement merged distinct classes, retrying (attempt %d)", k, attempt + 1
        )
    raise InvariantViolationError(f"{Constants.WL_UNSTABLE} after {HASH_ATTEMPTS} attempts")


def _guard(n: int, k: int, max_tuples: Optional[int], graphs: int = 1) -> None:
    if k < 1:
        raise PreconditionError(f"{Constants.INVALID_PARAMETER}: k must be at least 1")
    limit = max_tuples if max_tuples is not None else settings.WL_MAX_TUPLES
    if n**k > limit:
        raise BudgetRefusedError(f"{Constants.WL_TOO_LARGE} ({n}^{k} > {limit})")
    footprint = graphs * n**k * TUPLE_BYTES / 2**20
    if footprint > settings.WL_MAX_MEMORY_MB:
        raise BudgetRefusedError(
            f"{Constants.WL_MEMORY_TOO_LARGE} ({footprint:.0f} MB > {settings.WL_MAX_MEMORY_MB} MB)"
        )


def wl_refine(g: ColoredGraph, k: int, max_tuples: Optional[int] = None) -> WlColoring:
    """
    Stable k-WL coloring of V(g)^k.

    Raises:
        BudgetRefusedError: If n^k exceeds WL_MAX_TUPLES or the estimated
            footprint exceeds WL_MAX_MEMORY_MB
    """
    _guard(g.n, k, max_tuples)
    if g.n == 0:
        return WlColoring(k, np.zeros((0,) * k, dtype=np.int64), 0)
    colors, rounds, _ = _refine_lockstep([g], k)
    return WlColoring(k, colors[0], rounds)


# -- 1-WL on adjacency lists ----------------------------------------------


def _csr(g: ColoredGraph) -> Tuple[np.ndarray, np.ndarray]:
    """Row pointers and neighbor ids, rows in vertex order"""
    indptr = np.zeros(g.n + 1, dtype=np.int64)
    if not g.edges:
        return indptr, np.zeros(0, dtype=np.int64)
    e = np.array(g.edges, dtype=np.int64)
    src = np.concatenate([e[:, 0], e[:, 1]])
    dst = np.concatenate([e[:, 1], e[:, 0]])
    np.cumsum(np.bincount(src, minlength=g.n), out=indptr[1:])
    return indptr, dst[np.argsort(src, kind="stable")]


def _hashed_rounds(indptr: np.ndarray, indices: np.ndarray, colors: np.ndarray) -> Tuple[np.ndarray, int]:
    degree = np.diff(indptr)
    busy = degree > 0
    starts = indptr[:-1][busy]
    palette = int(colors.max()) + 1
    rng = np.random.default_rng(0)
    for _ in range(HASHED_ROUNDS):
        salt = np.frombuffer(rng.bytes(8), dtype=np.uint64)[0]
        sums = np.zeros(colors.size, dtype=np.uint64)
        if indices.size:
            sums[busy] = np.add.reduceat(_mix(colors[indices].astype(np.uint64) ^ salt), starts)
        new, new_palette = _rank([colors, sums])
        if new_palette == palette:
            break
        colors, palette = new, new_palette
    return colors, palette


def _is_equitable(indptr: np.ndarray, indices: np.ndarray, colors: np.ndarray) -> bool:
    """Vertices of one class see equal multisets of neighbor classes"""
    degree = np.diff(indptr)
    src = np.repeat(np.arange(colors.size), degree)
    seen = colors[indices]
    seen = seen[np.lexsort((seen, src))]
    order = np.argsort(colors, kind="stable")
    same = colors[order[1:]] == colors[order[:-1]]
    a, b = order[:-1][same], order[1:][same]
    if (degree[a] != degree[b]).any():
        return False
    d = degree[a]
    total = int(d.sum())
    if total == 0:
        return True
    offsets = np.arange(total) - np.repeat(np.cumsum(d) - d, d)
    return bool((seen[np.repeat(indptr[a], d) + offsets] == seen[np.repeat(indptr[b], d) + offsets]).all())


def _worklist(g: ColoredGraph, cls: List[int]) -> List[int]:
    """
    Coarsest equitable refinement of the partition cls.

    A class is split by neighbor counts into the splitter, and when the
    split class is not queued, all pieces but the largest are.
    """
    members: Dict[int, set] = {}
    for v, c in enumerate(cls):
        members.setdefault(c, set()).add(v)
    work = list(members)
    queued = set(work)
    next_id = max(members) + 1

    while work:
        splitter = work.pop()
        queued.discard(splitter)
        counts: Dict[int, int] = {}
        for x in members[splitter]:
            for y in g.adj[x]:
                counts[y] = counts.get(y, 0) + 1
        touched: Dict[int, List[int]] = {}
        for y in counts:
            touched.setdefault(cls[y], []).append(y)
        for c, ys in touched.items():
            groups: Dict[int, List[int]] = {}
            for y in ys:
                groups.setdefault(counts[y], []).append(y)
            rest = len(members[c]) - len(ys)
            if rest == 0 and len(groups) == 1:
                continue
            pieces = [(rest, c)] if rest else []
            was_queued = c in queued
            for key in sorted(groups):
                group = groups[key]
                if not rest and not pieces:
                    # the first group keeps the old id
                    members[c] = set(group)
                    pieces.append((len(group), c))
                    continue
                members[c].difference_update(group)
                members[next_id] = set(group)
                for y in group:
                    cls[y] = next_id
                pieces.append((len(group), next_id))
                next_id += 1
            if was_queued:
                adds = [p for _, p in pieces if p != c]
            else:
                largest = max(pieces)[1]
                adds = [p for _, p in pieces if p != largest]
            for p in adds:
                if p not in queued:
                    queued.add(p)
                    work.append(p)
    return cls


def color_refinement(g: ColoredGraph) -> WlColoring:
    """
    Coarsest equitable partition refining the vertex colors.

    Hashed rounds over CSR adjacency give a partition no finer than the
    answer; when it is not yet equitable (a hash collision or a slow
    propagation such as a long path), the worklist refinement finishes from
    it. Ids are dense by first appearance; the partition equals
    wl_refine(g, 1).
    """
    if g.n == 0:
        return WlColoring(1, np.zeros(0, dtype=np.int64), None)
    rank = {c: i for i, c in enumerate(sorted(set(g.colors)))}
    colors = np.array([rank[c] for c in g.colors], dtype=np.int64)
    indptr, indices = _csr(g)
    colors, palette = _hashed_rounds(indptr, indices, colors)
    if palette < g.n and not _is_equitable(indptr, indices, colors):
        logger.debug("color refinement on n=%d: finishing with the worklist", g.n)
        colors = np.array(_worklist(g, colors.tolist()), dtype=np.int64)
    _, first, inverse = np.unique(colors, return_index=True, return_inverse=True)
    dense = np.argsort(np.argsort(first))[inverse.reshape(-1)]
    return WlColoring(1, dense.astype(np.int64), None)


def wl_distinguish(
    g: ColoredGraph, h: ColoredGraph, k: int, max_tuples: Optional[int] = None
) -> WlVerdict:
    """
    Decide whether k-WL tells g and h apart.

    Both graphs are refined over one palette (equivalent to refining their
    disjoint union). Large 1-WL inputs use color_refinement on the union.

    Returns:
        WlVerdict: distinguished with a witness color of unequal class sizes,
        or not distinguished
    """
    _guard(max(g.n, h.n), k, max_tuples, graphs=2)
    if k == 1 and max(g.n, h.n) > DENSE_K1_MAX_VERTICES:
        coloring = color_refinement(disjoint_union(g, h))
        left, right = coloring.colors[: g.n], coloring.colors[g.n :]
        palette = coloring.classes()
        hg = np.bincount(left, minlength=palette)
        hh = np.bincount(right, minlength=palette)
        rounds = None
    else:
        colors, rounds, palette = _refine_lockstep([g, h], k, stop_on_difference=True)
        hg = np.bincount(colors[0].reshape(-1), minlength=palette)
        hh = np.bincount(colors[1].reshape(-1), minlength=palette)

    diff = np.nonzero(hg != hh)[0]
    verdict = WlVerdict(
        k=k,
        distinguished=bool(diff.size),
        witness_color=int(diff[0]) if diff.size else None,
        witness_counts=[int(hg[diff[0]]), int(hh[diff[0]])] if diff.size else None,
        rounds=rounds,
        histogram_g={int(i): int(c) for i, c in enumerate(hg) if c},
        histogram_h={int(i): int(c) for i, c in enumerate(hh) if c},
    )
    logger.info("%d-WL on n=%d/%d: distinguished=%s", k, g.n, h.n, verdict.distinguished)
    return verdict


def _atp_mask(g: ColoredGraph, h: ColoredGraph, ag, ah, length: int) -> np.ndarray:
    """Positions of `length` pebble pairs whose atomic types agree; axes alternate g, h"""
    n = g.n
    if length == 0:
        return np.array(True)
    grids = _grids(n, 2 * length)
    cg, ch = np.array(g.colors), np.array(h.colors)
    mask = np.ones((n,) * (2 * length), dtype=bool)
    for i in range(length):
        mask &= cg[grids[2 * i]] == ch[grids[2 * i + 1]]
        for j in range(i + 1, length):
            gi, gj = grids[2 * i], grids[2 * j]
            hi, hj = grids[2 * i + 1], grids[2 * j + 1]
            mask &= (gi == gj) == (hi == hj)
            mask &= ag[gi, gj] == ah[hi, hj]
    return mask


def _good(extended: np.ndarray, atp: np.ndarray, n: int) -> np.ndarray:
    """good[q]: some bijection f keeps q + (v, f(v)) surviving for every v"""
    positions = extended.reshape(-1, n, n)
    flags = np.zeros(positions.shape[0], dtype=bool)
    allowed = atp.reshape(-1)
    for p in range(positions.shape[0]):
        if not allowed[p]:
            continue
        m = positions[p]
        if not m.any(axis=1).all() or not m.any(axis=0).all():
            continue
        match = maximum_bipartite_matching(csr_matrix(m), perm_type="column")
        flags[p] = bool((match >= 0).all())
    return flags.reshape(atp.shape)


def pebble_game(
    g: ColoredGraph, h: ColoredGraph, k: int, max_positions: Optional[int] = None
) -> GameVerdict:
    """
    Solve the bijective k-pebble game on (g, h).

    A position of length l survives iff its atomic types agree, Duplicator
    has a good bijection for a fresh pebble (l < k) and for every pebble
    Spoiler may lift. Spoiler wins iff the empty position does not survive.

    Raises:
        BudgetRefusedError: If the position space exceeds PEBBLE_MAX_POSITIONS
    """
    if k < 2:
        raise PreconditionError(f"{Constants.INVALID_PARAMETER}: k must be at least 2")
    if g.n != h.n:
        return GameVerdict(k=k, winner="Spoiler", rounds=0)
    n = g.n
    limit = max_positions if max_positions is not None else settings.PEBBLE_MAX_POSITIONS
    total = sum(n ** (2 * length) for length in range(k + 1))
    if total > limit:
        raise BudgetRefusedError(f"{Constants.PEBBLE_TOO_LARGE} ({total} > {limit})")
    if n == 0:
        return GameVerdict(k=k, winner="Duplicator", surviving_positions=1, rounds=0)

    ag, ah = _adjacency(g), _adjacency(h)
    atp = [_atp_mask(g, h, ag, ah, length) for length in range(k + 1)]
    survive = [a.copy() for a in atp]
    rounds = 0
    while True:
        rounds += 1
        good = [_good(survive[length + 1], atp[length], n) for length in range(k)]
        changed = False
        for length in range(k + 1):
            new = survive[length].copy()
            if length < k:
                new &= good[length]
            for i in range(length):
                new &= np.expand_dims(good[length - 1], axis=(2 * i, 2 * i + 1))
            if not np.array_equal(new, survive[length]):
                survive[length] = new
                changed = True
        if not changed or not bool(survive[0]):
            break

    duplicator = bool(survive[0])
    logger.info("BP_%d on n=%d: %s after %d rounds", k, n, "Duplicator" if duplicator else "Spoiler", rounds)
    return GameVerdict(
        k=k,
        winner="Duplicator" if duplicator else "Spoiler",
        surviving_positions=int(sum(int(s.sum()) for s in survive)) if duplicator else None,
        rounds=rounds,
    )
