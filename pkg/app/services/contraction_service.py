import logging
from typing import Iterator, List, Tuple

from app.graphs.colored_graph import ColoredGraph
from app.graphs.trigraph import (
    ContractionSequence,
    Trigraph,
    contract,
    max_red_component,
)
from app.schemas.contraction_dto import StepWidth, WidthReport
from app.constants import Constants
from app.core.errors import ContractionError

logger = logging.getLogger(__name__)


def replay(g: ColoredGraph, s: ContractionSequence) -> Iterator[Tuple[int, Trigraph]]:
    """
    Yield (step, trigraph) for the discrete start (step -1) and after every merge.

    Raises:
        ContractionError: On the first merge naming a dead or repeated part
    """
    if s.base != g:
        raise ContractionError(Constants.SEQUENCE_GRAPH_MISMATCH)
    t = Trigraph.from_graph(g)
    yield -1, t
    for i, (a, b) in enumerate(s.merges):
        t = contract(t, a, b, step=i)
        yield i, t


def verify_sequence(g: ColoredGraph, s: ContractionSequence) -> WidthReport:
    """
    Replay a contraction sequence and report its width.

    Args:
        g (ColoredGraph): The base graph
        s (ContractionSequence): Merges over part ids (fresh ids from g.n on)

    Returns:
        WidthReport: Max red degree and red-component order per step and overall

    Raises:
        ContractionError: If a merge names a dead or equal part; carries the step index
    """
    steps: List[StepWidth] = []
    last = None
    for i, t in replay(g, s):
        last = t
        if i < 0:
            continue
        a, b = s.merges[i]
        steps.append(
            StepWidth(
                step=i,
                merged=(a, b),
                part=t.next_id - 1,
                red_degree=t.max_red_degree(),
                red_component=max_red_component(t),
            )
        )
    width = max((st.red_degree for st in steps), default=0)
    component = max((st.red_component for st in steps), default=min(g.n, 1))
    logger.debug("verified %d merges on n=%d: width %d", len(steps), g.n, width)
    return WidthReport(
        width=width,
        max_red_component=component,
        steps=steps,
        parts={p: sorted(vs) for p, vs in sorted(last.parts.items())},
    )


def partitions(g: ColoredGraph, s: ContractionSequence) -> List[List[List[int]]]:
    """The partition of V(g) before the first merge and after each merge"""
    return [t.partition() for _, t in replay(g, s)]


def sequence_from_partition_merges(
    g: ColoredGraph, vertex_merges: List[Tuple[int, int]]
) -> ContractionSequence:
    """
    Translate merges named by representative original vertices into part ids.

    Each (x, y) merges the current parts containing x and y.
    """
    owner = {v: v for v in range(g.n)}
    members = {v: [v] for v in range(g.n)}
    merges = []
    fresh = g.n
    for x, y in vertex_merges:
        a, b = owner[x], owner[y]
        if a == b:
            raise ContractionError(Constants.SAME_PART, len(merges))
        merges.append((a, b))
        joined = members.pop(a) + members.pop(b)
        for v in joined:
            owner[v] = fresh
        members[fresh] = joined
        fresh += 1
    return ContractionSequence(g, merges)
