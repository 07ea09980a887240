"""
Line-oriented graph text format.

    p graph <n> <m>     header, exactly once, before everything else
    c <v> <color>       optional, at most once per vertex
    e <u> <v>           m edge lines
    m <a> <b>           merge lines (contraction sequence files only)

'#' starts a comment. Vertex ids are 0-based.
"""

from typing import List, Tuple

from app.constants import Constants
from app.core.errors import GraphParseError
from app.graphs.colored_graph import ColoredGraph
from app.graphs.trigraph import ContractionSequence


def _tokens(text: str):
    for number, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if line:
            yield number, line.split()


def _int(token: str, line: int) -> int:
    try:
        return int(token)
    except ValueError:
        raise GraphParseError(f"{Constants.MALFORMED_LINE}: {token!r}", line)


def _parse(text: str, allow_merges: bool) -> Tuple[ColoredGraph, List[Tuple[int, int]]]:
    n = m = None
    colors: List[int] = []
    color_seen = set()
    edges = set()
    merges: List[Tuple[int, int]] = []

    for line, parts in _tokens(text):
        kind = parts[0]
        if kind == "p":
            if n is not None:
                raise GraphParseError(Constants.DUPLICATE_HEADER, line)
            if len(parts) != 4 or parts[1] != "graph":
                raise GraphParseError(Constants.MALFORMED_LINE, line)
            n, m = _int(parts[2], line), _int(parts[3], line)
            if n < 0 or m < 0:
                raise GraphParseError(Constants.MALFORMED_LINE, line)
            colors = [0] * n
            continue
        if n is None:
            raise GraphParseError(Constants.MISSING_HEADER, line)
        if len(parts) != 3:
            raise GraphParseError(Constants.MALFORMED_LINE, line)
        a, b = _int(parts[1], line), _int(parts[2], line)
        if kind == "c":
            if not 0 <= a < n:
                raise GraphParseError(f"{Constants.VERTEX_OUT_OF_RANGE}: {a}", line)
            if a in color_seen:
                raise GraphParseError(f"{Constants.DUPLICATE_COLOR} {a}", line)
            if b < 0:
                raise GraphParseError(Constants.NEGATIVE_COLOR, line)
            color_seen.add(a)
            colors[a] = b
        elif kind == "e":
            if not (0 <= a < n and 0 <= b < n):
                raise GraphParseError(f"{Constants.VERTEX_OUT_OF_RANGE}: ({a}, {b})", line)
            if a == b:
                raise GraphParseError(Constants.SELF_LOOP, line)
            key = (min(a, b), max(a, b))
            if key in edges:
                raise GraphParseError(f"{Constants.DUPLICATE_EDGE} {key}", line)
            edges.add(key)
        elif kind == "m" and allow_merges:
            merges.append((a, b))
        else:
            raise GraphParseError(f"{Constants.MALFORMED_LINE}: unknown kind {kind!r}", line)

    if n is None:
        raise GraphParseError(Constants.EMPTY_INPUT)
    if len(edges) != m:
        raise GraphParseError(f"{Constants.EDGE_COUNT_MISMATCH} ({len(edges)} != {m})")
    return ColoredGraph(n, edges, colors), merges


def parse_graph(text: str) -> ColoredGraph:
    """
    Parse the graph text format.

    Raises:
        GraphParseError: With the offending line number where one exists
    """
    graph, _ = _parse(text, allow_merges=False)
    return graph


def render_graph(g: ColoredGraph) -> str:
    """Canonical rendering: sorted edge lines, only nonzero colors"""
    lines = [f"p graph {g.n} {g.m}"]
    lines += [f"c {v} {c}" for v, c in enumerate(g.colors) if c]
    lines += [f"e {u} {v}" for u, v in g.edges]
    return "\n".join(lines) + "\n"


def parse_sequence(text: str) -> ContractionSequence:
    base, merges = _parse(text, allow_merges=True)
    return ContractionSequence(base, merges)


def render_sequence(s: ContractionSequence) -> str:
    return render_graph(s.base) + "".join(f"m {a} {b}\n" for a, b in s.merges)
