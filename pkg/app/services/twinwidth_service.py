"""
Twin-width search.

exact_twinwidth runs iterative deepening over the width bound w: a depth
first search over merge orders that never creates a trigraph of red degree
above w, memoizing partitions already known to fail for a bound. The beam
heuristic supplies the initial upper bound and the fallback certificate when
the budget runs out.
"""

import logging
import time
from dataclasses import dataclass, field
from itertools import combinations
from typing import Dict, List, Optional, Tuple, Union

from app.constants import Constants
from app.core.config import settings
from app.core.errors import BudgetRefusedError
from app.graphs.colored_graph import ColoredGraph
from app.graphs.trigraph import (
    RED,
    ContractionSequence,
    Trigraph,
    contract,
    max_red_component,
)
from app.schemas.contraction_dto import SearchBudget

logger = logging.getLogger(__name__)

Merge = Tuple[int, int]


@dataclass
class TwinWidth:
    width: int
    certificate: ContractionSequence
    nodes: int = 0
    elapsed: float = 0.0


@dataclass
class SearchExhausted:
    """Budget ran out; bounds are the best known so far"""

    lower_bound: int
    upper_bound: Optional[int]
    certificate: Optional[ContractionSequence]
    nodes: int = 0
    elapsed: float = 0.0


@dataclass
class NotFound:
    """Heuristic missed the target; this does not refute it"""

    target: int
    best_width: Optional[int] = None
    best: Optional[ContractionSequence] = None
    nodes: int = 0
    elapsed: float = 0.0


class _OutOfBudget(Exception):
    pass


def default_budget() -> SearchBudget:
    return SearchBudget(
        max_nodes=settings.EXACT_TWW_MAX_NODES,
        time_cap=settings.EXACT_TWW_TIME_CAP,
        beam=settings.HEURISTIC_BEAM,
    )


def heuristic_budget() -> SearchBudget:
    """Defaults for the beam search, whose node count is candidate merges evaluated"""
    return default_budget().model_copy(update={"max_nodes": settings.HEURISTIC_MAX_NODES})


def _merge_red_degree(t: Trigraph, a: int, b: int) -> Tuple[int, Dict[int, int]]:
    """Largest red degree among parts touched by merging a and b, and the merged row"""
    row = t.merged_row(a, b)
    worst = sum(1 for c in row.values() if c == RED)
    for x, c in row.items():
        if c != RED:
            continue
        ax = t.adj[x]
        deg = t.red_degree(x) + 1
        if ax.get(a) == RED:
            deg -= 1
        if ax.get(b) == RED:
            deg -= 1
        worst = max(worst, deg)
    return worst, row


def _partition_key(t: Trigraph) -> Tuple[Tuple[int, ...], ...]:
    return tuple(sorted(tuple(sorted(p)) for p in t.parts.values()))


class _Search:
    def __init__(self, g: ColoredGraph, budget: SearchBudget, objective: str):
        self.g = g
        self.budget = budget
        self.objective = objective
        self.nodes = 0
        self.started = time.monotonic()
        # partition -> largest bound it is known to fail for
        self.failed: Dict[Tuple, int] = {}

    def elapsed(self) -> float:
        return time.monotonic() - self.started

    def _tick(self):
        self.nodes += 1
        if self.nodes > self.budget.max_nodes:
            raise _OutOfBudget()
        if self.nodes % 1024 == 0 and self.elapsed() > self.budget.time_cap:
            raise _OutOfBudget()

    def _children(self, t: Trigraph, w: int):
        live = t.live()
        scored = []
        for a, b in combinations(live, 2):
            if self.objective == "red_degree":
                worst, row = _merge_red_degree(t, a, b)
                if worst > w:
                    continue
                reds = sum(1 for c in row.values() if c == RED)
                scored.append((worst, reds, a, b))
            else:
                scored.append((0, 0, a, b))
        scored.sort()
        for _, _, a, b in scored:
            child = contract(t, a, b)
            if self.objective == "red_component" and max_red_component(child) > w:
                continue
            yield (a, b), child

    def solve(self, t: Trigraph, w: int, path: List[Merge]) -> bool:
        if t.n <= 1:
            return True
        key = _partition_key(t)
        if self.failed.get(key, -1) >= w:
            return False
        self._tick()
        for merge, child in self._children(t, w):
            path.append(merge)
            if self.solve(child, w, path):
                return True
            path.pop()
        self.failed[key] = w
        return False


def _start_value(g: ColoredGraph, objective: str) -> int:
    return 0 if objective == "red_degree" else min(g.n, 1)


def _exact(
    g: ColoredGraph, budget: Optional[SearchBudget], objective: str
) -> Union[TwinWidth, SearchExhausted]:
    budget = budget or default_budget()
    search = _Search(g, budget, objective)
    start = Trigraph.from_graph(g)

    upper: Optional[int] = None
    upper_seq: Optional[ContractionSequence] = None
    if objective == "red_degree":
        # max_nodes bounds the exact tree; the seed runs under the heuristic cap
        seed_budget = budget.model_copy(
            update={"max_nodes": max(budget.max_nodes, settings.HEURISTIC_MAX_NODES)}
        )
        best = best_effort_sequence(g, seed_budget)
        if best.complete:
            upper, upper_seq = best.width, best.sequence

    lower = _start_value(g, objective)
    try:
        w = lower
        while upper is None or w < upper:
            path: List[Merge] = []
            logger.debug("exact search: trying bound %d", w)
            if search.solve(start, w, path):
                logger.info("exact twin-width %d after %d nodes", w, search.nodes)
                return TwinWidth(w, ContractionSequence(g, path), search.nodes, search.elapsed())
            w += 1
            lower = w
    except _OutOfBudget:
        logger.warning(
            "search budget exhausted: bounds [%d, %s] after %d nodes", lower, upper, search.nodes
        )
        return SearchExhausted(lower, upper, upper_seq, search.nodes, search.elapsed())
    return TwinWidth(upper, upper_seq, search.nodes, search.elapsed())


def exact_twinwidth(
    g: ColoredGraph, budget: Optional[SearchBudget] = None
) -> Union[TwinWidth, SearchExhausted]:
    """
    Minimum width over all contraction sequences of g.

    Args:
        g (ColoredGraph): The graph; colors are ignored by twin-width
        budget (Optional[SearchBudget]): Node and time caps

    Returns:
        Union[TwinWidth, SearchExhausted]: The optimum with a certificate, or
        the bounds reached when the budget ran out
    """
    return _exact(g, budget, "red_degree")


def exact_component_twinwidth(
    g: ColoredGraph, budget: Optional[SearchBudget] = None
) -> Union[TwinWidth, SearchExhausted]:
    """Same search with the largest red component order as the objective"""
    return _exact(g, budget, "red_component")


def naive_twinwidth(g: ColoredGraph, max_vertices: Optional[int] = None) -> TwinWidth:
    """
    Twin-width by enumerating every merge order, without pruning or memo.

    Raises:
        BudgetRefusedError: Above NAIVE_TWW_MAX_VERTICES vertices
    """
    limit = max_vertices if max_vertices is not None else settings.NAIVE_TWW_MAX_VERTICES
    if g.n > limit:
        raise BudgetRefusedError(f"{Constants.NAIVE_TOO_LARGE} ({g.n} > {limit})")

    def best(t: Trigraph) -> Tuple[int, List[Merge]]:
        if t.n <= 1:
            return 0, []
        result: Tuple[int, List[Merge]] = (g.n, [])
        for a, b in combinations(t.live(), 2):
            child = contract(t, a, b)
            rest, tail = best(child)
            value = max(child.max_red_degree(), rest)
            if value < result[0]:
                result = (value, [(a, b)] + tail)
        return result

    width, merges = best(Trigraph.from_graph(g))
    return TwinWidth(width, ContractionSequence(g, merges))


@dataclass
class BeamResult:
    width: int
    sequence: ContractionSequence
    complete: bool
    nodes: int = 0
    elapsed: float = 0.0


@dataclass(order=True)
class _BeamState:
    score: Tuple
    trigraph: Trigraph = field(compare=False)
    merges: List[Merge] = field(compare=False)
    width: int = field(compare=False)
    reds: int = field(compare=False)


def _candidate_pairs(t: Trigraph, all_pairs_below: int = 40):
    live = t.live()
    if len(live) <= all_pairs_below:
        yield from combinations(live, 2)
        return
    seen = set()
    for a in live:
        near = set(t.adj[a])
        for x in list(near):
            near.update(t.adj[x])
        near.discard(a)
        for b in near:
            pair = (a, b) if a < b else (b, a)
            if pair not in seen:
                seen.add(pair)
                yield pair
    # isolated parts merge at red degree 0
    isolated = [a for a in live if not t.adj[a]]
    if len(isolated) >= 2:
        yield isolated[0], isolated[1]


def _red_count_after(t: Trigraph, a: int, b: int, reds: int, row: Dict[int, int]) -> int:
    removed = t.red_degree(a) + t.red_degree(b)
    if t.adj[a].get(b) == RED:
        removed -= 1
    return reds - removed + sum(1 for c in row.values() if c == RED)


def best_effort_sequence(g: ColoredGraph, budget: Optional[SearchBudget] = None) -> BeamResult:
    """
    Beam search for a low-width full contraction sequence.

    Merges are scored by (resulting max red degree, number of red edges,
    merged part size, part ids). Once more than 40 parts are live, only
    parts at distance at most 2 are paired, plus two isolated parts when
    there are any.

    The search stops with an incomplete result once the candidate merges
    evaluated exceed budget.max_nodes or the elapsed time exceeds
    budget.time_cap; both caps are checked after each step.
    """
    budget = budget or heuristic_budget()
    started = time.monotonic()
    nodes = 0
    beam = [_BeamState((0,), Trigraph.from_graph(g), [], 0, 0)]
    while beam[0].trigraph.n > 1:
        candidates = []
        for index, state in enumerate(beam):
            t = state.trigraph
            for a, b in _candidate_pairs(t):
                nodes += 1
                worst, row = _merge_red_degree(t, a, b)
                reds = _red_count_after(t, a, b, state.reds, row)
                size = len(t.parts[a]) + len(t.parts[b])
                candidates.append(((max(state.width, worst), reds, size, a, b), index))
        candidates.sort()

        next_beam: List[_BeamState] = []
        keys = set()
        for score, index in candidates:
            if len(next_beam) >= budget.beam:
                break
            state = beam[index]
            a, b = score[3], score[4]
            child = contract(state.trigraph, a, b)
            if budget.beam > 1:
                key = _partition_key(child)
                if key in keys:
                    continue
                keys.add(key)
            next_beam.append(
                _BeamState(score, child, state.merges + [(a, b)], score[0], score[1])
            )
        if not next_beam:
            break
        beam = next_beam
        if nodes > budget.max_nodes:
            logger.warning("heuristic stopped by node cap with %d parts left", beam[0].trigraph.n)
            break
        if time.monotonic() - started > budget.time_cap:
            logger.warning("heuristic stopped by time cap with %d parts left", beam[0].trigraph.n)
            break

    best = min(beam, key=lambda s: (s.width, s.score))
    complete = best.trigraph.n <= 1
    logger.info("heuristic width %d on n=%d (complete=%s)", best.width, g.n, complete)
    return BeamResult(
        width=best.width,
        sequence=ContractionSequence(g, best.merges),
        complete=complete,
        nodes=nodes,
        elapsed=time.monotonic() - started,
    )


def heuristic_sequence(
    g: ColoredGraph, target: int, budget: Optional[SearchBudget] = None
) -> Union[ContractionSequence, NotFound]:
    """
    Find a contraction sequence of width at most target.

    Args:
        g (ColoredGraph): The graph
        target (int): Width to reach
        budget (Optional[SearchBudget]): Beam width and time cap

    Returns:
        Union[ContractionSequence, NotFound]: A full sequence whose verified
        width is at most target, or NotFound carrying the best width achieved
    """
    result = best_effort_sequence(g, budget)
    if result.complete and result.width <= target:
        return result.sequence
    return NotFound(
        target=target,
        best_width=result.width if result.complete else None,
        best=result.sequence if result.complete else None,
        nodes=result.nodes,
        elapsed=result.elapsed,
    )
