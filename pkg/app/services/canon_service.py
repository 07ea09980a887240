"""
Canonical contraction sequences for twin-width 1.

Starting from an ordered vertex pair (u, v) of a prime colored graph, the
procedure contracts u and v, then alternates two steps while more than two
parts remain:

* phase: repeatedly contract every near-twin into its red-edge endpoint,
  recording per sub-round the size of each (type pair, endpoint, color)
  class of near-twins of that endpoint;
* red step: the unique vertex adjacent to exactly one endpoint becomes the
  new v-side, the two old endpoints merge into the u-side. A red step with
  zero or several candidates fails.

The token string is an isomorphism invariant of (G, u, v); its lex-min over
all ordered pairs is a complete invariant of prime twin-width-1 graphs. The
order in which vertices are absorbed gives a canonical vertex order.

Vertex sets inside the procedure are Python-int bitsets. Apart from the two
endpoint parts, every live vertex is an original vertex, and all of them are
homogeneous to both endpoint parts.
"""

import logging
import struct
from dataclasses import dataclass, field
from itertools import permutations
from typing import Dict, Iterator, List, NamedTuple, Optional, Tuple, Union

from app.constants import Constants
from app.core.errors import (
    InvariantViolationError,
    PreconditionError,
)
from app.graphs.colored_graph import ColoredGraph, relabel
from app.graphs.isomorphism import is_isomorphism
from app.graphs.trigraph import RED, ContractionSequence, Trigraph
from app.schemas.modular_dto import ModTree
from app.services.contraction_service import sequence_from_partition_merges
from app.services.modular_service import module_quotient, mod_tree

logger = logging.getLogger(__name__)

NONEDGE = 0
EDGE = 1
TO_V = 0
TO_U = 1
SIDE_U = 0
SIDE_V = 1

# Type pairs (atp(u, w), atp(v, w)) in their fixed enumeration order
TYPE_PAIRS = ((NONEDGE, NONEDGE), (NONEDGE, EDGE), (EDGE, NONEDGE), (EDGE, EDGE))


class Init(NamedTuple):
    edge: int
    color_u: int
    color_v: int


class PhaseCounts(NamedTuple):
    """Nonzero class sizes of one contraction sub-round: (pair index, side, color, count)"""

    counts: Tuple[Tuple[int, int, int, int], ...]


class RedStep(NamedTuple):
    side: int
    color: int


class Leaf(NamedTuple):
    color: int


Token = Union[Init, PhaseCounts, RedStep, Leaf]

_RANK = {Init: 0, PhaseCounts: 1, RedStep: 2, Leaf: 3}


def token_key(token: Token) -> Tuple:
    return (_RANK[type(token)], tuple(token))


class Failure:
    """The procedure found no width-1 continuation"""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self) -> str:
        return "Failure"


FAILURE = Failure()


@dataclass(frozen=True)
class CsString:
    tokens: Tuple[Token, ...]

    def key(self) -> Tuple:
        return tuple(token_key(t) for t in self.tokens)


CsResult = Union[CsString, Failure]


def cs_sort_key(s: CsResult) -> Tuple:
    """Total order: strings token-wise then by length, Failure above everything"""
    if isinstance(s, Failure):
        return (1,)
    return (0, s.key())


class NearTwinQuery(NamedTuple):
    t: int
    t_prime: int
    x: int
    color: int


@dataclass
class CsTrace:
    """Result of one run: string, absorption order and the implied merges"""

    u: int
    v: int
    string: CsResult
    order: List[int] = field(default_factory=list)
    vertex_merges: List[Tuple[int, int]] = field(default_factory=list)
    # endpoint representatives right before each vertex merge
    endpoints: List[Tuple[int, int]] = field(default_factory=list)

    @property
    def failed(self) -> bool:
        return isinstance(self.string, Failure)


def _members(mask: int) -> List[int]:
    out = []
    while mask:
        low = mask & -mask
        out.append(low.bit_length() - 1)
        mask ^= low
    return out


def _run(g: ColoredGraph, u: int, v: int, trace: CsTrace) -> Iterator[Token]:
    """
    Yield the tokens of cs(g, u, v), filling trace as absorption happens.

    Yields FAILURE as the last item when the procedure fails.
    """
    rows = g.rows
    colors = g.colors
    trace.order.extend((u, v))
    yield Init(EDGE if g.has_edge(u, v) else NONEDGE, colors[u], colors[v])

    rest = ((1 << g.n) - 1) & ~(1 << u) & ~(1 << v)
    rep_u, rep_v = u, v
    parts = g.n

    while True:
        # red step
        if parts == 2:
            trace.endpoints.append((rep_u, rep_v))
            trace.vertex_merges.append((rep_u, rep_v))
            return
        nu = rows[rep_u] & rest
        nv = rows[rep_v] & rest
        w_set = nu ^ nv
        if w_set == 0 or w_set & (w_set - 1):
            yield FAILURE
            return
        w = w_set.bit_length() - 1
        yield RedStep(TO_V if (nv >> w) & 1 else TO_U, colors[w])
        trace.endpoints.append((rep_u, rep_v))
        trace.vertex_merges.append((rep_u, rep_v))
        trace.order.append(w)
        rest &= ~w_set
        parts -= 1
        # the merged part keeps rep_u as representative; vertices outside W
        # see rep_u and rep_v alike
        rep_v = w

        # contraction phase
        while True:
            nu = rows[rep_u] & rest
            nv = rows[rep_v] & rest
            to_u: List[Tuple[int, int, int]] = []
            to_v: List[Tuple[int, int, int]] = []
            for z in _members(rest):
                others = rest & ~(1 << z)
                own = rows[z] & others
                pair = TYPE_PAIRS.index(((nu >> z) & 1, (nv >> z) & 1))
                if own == nu & others:
                    to_u.append((pair, colors[z], z))
                if own == nv & others:
                    to_v.append((pair, colors[z], z))
            classes: Dict[Tuple[int, int, int], int] = {}
            for side, found in ((SIDE_U, to_u), (SIDE_V, to_v)):
                for pair, color, _ in found:
                    classes[(pair, side, color)] = classes.get((pair, side, color), 0) + 1
            counts = tuple((p, s, c, k) for (p, s, c), k in sorted(classes.items()))
            yield PhaseCounts(counts)
            if not counts:
                break
            # a near-twin of both endpoints is counted on both sides, contracted into u
            shared = {z for _, _, z in to_u}
            absorbed = sorted(
                [(p, SIDE_U, c, z) for p, c, z in to_u]
                + [(p, SIDE_V, c, z) for p, c, z in to_v if z not in shared]
            )
            for _, side, _, z in absorbed:
                trace.order.append(z)
                trace.endpoints.append((rep_u, rep_v))
                trace.vertex_merges.append((rep_u if side == SIDE_U else rep_v, z))
                rest &= ~(1 << z)
                parts -= 1
            if parts == 2:
                break


def cs_trace(g: ColoredGraph, u: int, v: int) -> CsTrace:
    """
    Run the canonical contraction procedure from (u, v).

    Args:
        g (ColoredGraph): A prime colored graph
        u (int): First start vertex
        v (int): Second start vertex, distinct from u

    Returns:
        CsTrace: The string (or Failure), the vertex absorption order and the
        implied merges named by representative vertices
    """
    if g.n == 1:
        return CsTrace(0, 0, CsString((Leaf(g.colors[0]),)), order=[0])
    if u == v or not (0 <= u < g.n and 0 <= v < g.n):
        raise PreconditionError(f"{Constants.INVALID_PARAMETER}: start pair ({u}, {v})")
    trace = CsTrace(u, v, FAILURE)
    tokens = []
    for token in _run(g, u, v, trace):
        if token is FAILURE:
            return trace
        tokens.append(token)
    trace.string = CsString(tuple(tokens))
    return trace


def cs(g: ColoredGraph, u: int, v: int) -> CsResult:
    return cs_trace(g, u, v).string


def implied_sequence(g: ColoredGraph, trace: CsTrace) -> ContractionSequence:
    """The full contraction sequence a successful run describes"""
    return sequence_from_partition_merges(g, trace.vertex_merges)


def _best_trace(g: ColoredGraph) -> CsTrace:
    """First ordered pair achieving the lex-min string; a Failure trace if none succeeds"""
    if g.n == 1:
        return cs_trace(g, 0, 0)
    best: Optional[CsTrace] = None
    best_key: Optional[Tuple] = None
    for u, v in permutations(range(g.n), 2):
        trace = CsTrace(u, v, FAILURE)
        tokens: List[Token] = []
        keys: List[Tuple] = []
        # tied: every key so far equals the best's; otherwise already smaller
        tied = best_key is not None
        abandoned = False
        for token in _run(g, u, v, trace):
            if token is FAILURE:
                abandoned = True
                break
            key = token_key(token)
            if tied:
                i = len(keys)
                if i >= len(best_key) or key > best_key[i]:
                    abandoned = True
                    break
                if key < best_key[i]:
                    tied = False
            tokens.append(token)
            keys.append(key)
        if abandoned or (tied and len(keys) == len(best_key)):
            continue
        trace.string = CsString(tuple(tokens))
        best, best_key = trace, tuple(keys)
    if best is None:
        return CsTrace(0, 1, FAILURE)
    return best


def cs_invariant(g: ColoredGraph) -> CsResult:
    """
    Lexicographically least non-Failure string over all ordered start pairs.

    Runs whose prefix already exceeds the current best are abandoned early.

    Returns:
        CsResult: The invariant, or Failure when every pair fails (for a prime
        graph this means twin-width above 1)
    """
    result = _best_trace(g).string
    logger.debug("cs_invariant n=%d failed=%s", g.n, isinstance(result, Failure))
    return result


def reconstruct_isomorphism(
    g: ColoredGraph, u: int, v: int, h: ColoredGraph, u2: int, v2: int
) -> Dict[int, int]:
    """
    Isomorphism g -> h following two runs with equal strings.

    Raises:
        PreconditionError: If the strings differ or are Failure
        InvariantViolationError: If the zipped order is not an isomorphism
    """
    a = cs_trace(g, u, v)
    b = cs_trace(h, u2, v2)
    if a.failed or b.failed or a.string != b.string:
        raise PreconditionError(Constants.CS_MISMATCH)
    f = dict(zip(a.order, b.order))
    if len(f) != g.n or not is_isomorphism(g, h, f):
        raise InvariantViolationError("reconstructed map is not an isomorphism")
    return f


def near_twins(t: Trigraph, q: NearTwinQuery, u: int) -> List[int]:
    """
    Near-twins of endpoint q.x in a trigraph whose only red edge is u-v.

    w qualifies when atp(u, w) = q.t, atp(v, w) = q.t_prime, w is an original
    vertex of color q.color and contracting w into q.x changes nothing but
    deleting w.

    Raises:
        PreconditionError: If there is not exactly one red edge, or u or q.x is not on it
    """
    red = t.red
    if len(red) != 1:
        raise PreconditionError(Constants.SINGLE_RED_EDGE_REQUIRED)
    ends = next(iter(red))
    if u not in ends or q.x not in ends:
        raise PreconditionError(Constants.ENDPOINT_REQUIRED)
    v = ends[0] if ends[1] == u else ends[1]
    x = q.x
    out = []
    for w in t.live():
        if w in (u, v) or len(t.parts[w]) != 1:
            continue
        if t.base.colors[next(iter(t.parts[w]))] != q.color:
            continue
        if (1 if t.edge(u, w) else 0) != q.t or (1 if t.edge(v, w) else 0) != q.t_prime:
            continue
        if all(
            t.edge(x, z) == RED or t.edge(x, z) == t.edge(w, z)
            for z in t.live()
            if z not in (w, x)
        ):
            out.append(w)
    return out


def _prime_quotient(g: ColoredGraph, node: ModTree, colors: Optional[List[int]] = None) -> ColoredGraph:
    masks = []
    for child in node.children:
        m = 0
        for x in child.module:
            m |= 1 << x
        masks.append(m)
    q = module_quotient(g, masks)
    return ColoredGraph(q.n, q.edges, colors) if colors is not None else q


def _first_success(q: ColoredGraph) -> Optional[CsTrace]:
    for u, v in permutations(range(q.n), 2):
        trace = cs_trace(q, u, v)
        if not trace.failed:
            return trace
    return None


def is_twinwidth_le1(g: ColoredGraph) -> Tuple[bool, Optional[ContractionSequence]]:
    """
    Decide twin-width at most 1 through the modular decomposition.

    Every prime node's quotient must admit a start pair whose run succeeds.
    The certificate contracts each module bottom-up: children first, then
    the node's quotient (the run's merges for prime nodes, any order for
    series and parallel nodes).

    Returns:
        Tuple[bool, Optional[ContractionSequence]]: The verdict and, when
        true, a full sequence of width at most 1
    """
    if g.n == 0:
        return True, ContractionSequence(g, [])
    merges: List[Tuple[int, int]] = []

    def visit(node: ModTree) -> bool:
        if node.label == "single":
            return True
        for child in node.children:
            if not visit(child):
                return False
        reps = [child.module[0] for child in node.children]
        if node.label == "prime":
            trace = _first_success(_prime_quotient(g, node))
            if trace is None:
                return False
            merges.extend((reps[a], reps[b]) for a, b in trace.vertex_merges)
        else:
            merges.extend((reps[0], r) for r in reps[1:])
        return True

    ok = visit(mod_tree(g))
    logger.info("twin-width <= 1 check on n=%d: %s", g.n, ok)
    if not ok:
        return False, None
    return True, sequence_from_partition_merges(g, merges)


@dataclass
class CanonicalForm:
    encoding: bytes
    order: List[int]

    def hex(self) -> str:
        return self.encoding.hex()


def _chunk(data: bytes) -> bytes:
    return struct.pack(">I", len(data)) + data


def _num(x: int) -> bytes:
    return struct.pack(">Q", x)


def _canon(g: ColoredGraph, node: ModTree) -> CanonicalForm:
    if node.label == "single":
        v = node.module[0]
        return CanonicalForm(b"S" + _num(g.colors[v]), [v])

    kids = [_canon(g, child) for child in node.children]
    if node.label in ("parallel", "series"):
        kids.sort(key=lambda k: k.encoding)
        tag = b"P" if node.label == "parallel" else b"Q"
        body = _num(len(kids)) + b"".join(_chunk(k.encoding) for k in kids)
        return CanonicalForm(tag + body, [x for k in kids for x in k.order])

    palette = sorted({k.encoding for k in kids})
    rank = {e: i for i, e in enumerate(palette)}
    q = _prime_quotient(g, node, [rank[k.encoding] for k in kids])
    best = _best_trace(q)
    if best.failed:
        raise PreconditionError(Constants.NOT_TWW1)
    order = best.order
    bits = 0
    bit = 0
    for i in range(q.n):
        for j in range(i + 1, q.n):
            if q.has_edge(order[i], order[j]):
                bits |= 1 << bit
            bit += 1
    adjacency = bits.to_bytes((bit + 7) // 8, "big")
    body = (
        _num(len(palette))
        + b"".join(_chunk(e) for e in palette)
        + _num(q.n)
        + b"".join(_num(q.colors[x]) for x in order)
        + _chunk(adjacency)
    )
    return CanonicalForm(b"R" + body, [x for i in order for x in kids[i].order])


def canonical_form(g: ColoredGraph) -> CanonicalForm:
    """
    Canonical encoding and vertex order of a colored graph of twin-width at most 1.

    Equal encodings hold exactly for isomorphic inputs. Relabeling g along
    the returned order yields the same graph for every isomorphic input.

    Raises:
        PreconditionError: If some prime node has no successful run
    """
    if g.n == 0:
        return CanonicalForm(b"E", [])
    form = _canon(g, mod_tree(g))
    logger.debug("canonical form n=%d: %d bytes", g.n, len(form.encoding))
    return form


def canonical_graph(g: ColoredGraph) -> ColoredGraph:
    """g relabeled along its canonical order"""
    form = canonical_form(g)
    perm = [0] * g.n
    for i, v in enumerate(form.order):
        perm[v] = i
    return relabel(g, perm)


def are_isomorphic_tww1(g: ColoredGraph, h: ColoredGraph) -> bool:
    return canonical_form(g).encoding == canonical_form(h).encoding
