"""
Modular decomposition.

Vertex sets are Python-int bitsets over the vertices of the input graph.
The smallest module containing two vertices a and b is found by closure:
any outside vertex that treats some member differently from a must join.
In a connected and coconnected graph the maximal modules partition V, and
the one containing a is the union of all proper closures M(a, b).
"""

import logging
from typing import Dict, List, Sequence, Tuple

from app.constants import Constants
from app.core.errors import PreconditionError
from app.graphs.colored_graph import ColoredGraph, induced_subgraph
from app.schemas.modular_dto import ModTree

logger = logging.getLogger(__name__)


def _mask(vertices) -> int:
    mask = 0
    for v in vertices:
        mask |= 1 << v
    return mask


def _members(mask: int) -> List[int]:
    out = []
    while mask:
        low = mask & -mask
        out.append(low.bit_length() - 1)
        mask ^= low
    return out


def _components(rows: Sequence[int], scope: int) -> List[int]:
    """Connected components of the graph given by rows, restricted to scope"""
    comps = []
    left = scope
    while left:
        start = left & -left
        comp = start
        frontier = start
        while frontier:
            reach = 0
            for x in _members(frontier):
                reach |= rows[x]
            frontier = reach & scope & ~comp
            comp |= frontier
        comps.append(comp)
        left &= ~comp
    return comps


def _co_rows(g: ColoredGraph, scope: int) -> List[int]:
    return [(scope & ~g.rows[v] & ~(1 << v)) if (scope >> v) & 1 else 0 for v in range(g.n)]


def _closure(g: ColoredGraph, scope: int, a: int, b: int) -> int:
    """Smallest module of g[scope] containing a and b"""
    module = (1 << a) | (1 << b)
    pending = [b]
    row_a = g.rows[a]
    while pending:
        x = pending.pop()
        splitters = (g.rows[x] ^ row_a) & scope & ~module
        if splitters:
            module |= splitters
            if module == scope:
                return module
            pending.extend(_members(splitters))
    return module


def _maximal_modules(g: ColoredGraph, scope: int) -> List[int]:
    assigned = 0
    result = []
    for a in _members(scope):
        if (assigned >> a) & 1:
            continue
        best = 1 << a
        for b in _members(scope & ~best):
            if (best >> b) & 1:
                continue
            m = _closure(g, scope, a, b)
            if m != scope:
                best |= m
        result.append(best)
        assigned |= best
    return result


def maximal_modules(g: ColoredGraph) -> List[List[int]]:
    """
    The partition M_G of a connected and coconnected graph into maximal modules.

    Raises:
        PreconditionError: If g has fewer than 2 vertices, is disconnected or
        its complement is disconnected
    """
    scope = (1 << g.n) - 1
    if g.n < 2 or len(_components(g.rows, scope)) > 1 or len(_components(_co_rows(g, scope), scope)) > 1:
        raise PreconditionError(Constants.NOT_CONNECTED_COCONNECTED)
    return sorted((_members(m) for m in _maximal_modules(g, scope)), key=lambda p: p[0])


def _build(g: ColoredGraph, scope: int) -> ModTree:
    members = _members(scope)
    if len(members) == 1:
        return ModTree(module=members, label="single")
    parts = _components(g.rows, scope)
    if len(parts) > 1:
        label = "parallel"
    else:
        parts = _components(_co_rows(g, scope), scope)
        if len(parts) > 1:
            label = "series"
        else:
            label = "prime"
            parts = _maximal_modules(g, scope)
    parts.sort(key=lambda m: m & -m)
    return ModTree(module=members, label=label, children=[_build(g, p) for p in parts])


def mod_tree(g: ColoredGraph) -> ModTree:
    """
    Modular decomposition tree of g.

    Children are ordered by smallest vertex. Parallel children are the
    connected components, series children the co-components and prime
    children the maximal modules.

    Raises:
        PreconditionError: For the empty graph
    """
    if g.n < 1:
        raise PreconditionError(f"{Constants.INVALID_PARAMETER}: empty graph")
    tree = _build(g, (1 << g.n) - 1)
    logger.debug("mod_tree n=%d root=%s", g.n, tree.label)
    return tree


def is_module(g: ColoredGraph, vertices) -> bool:
    inside = _mask(vertices)
    for z in range(g.n):
        if (inside >> z) & 1:
            continue
        seen = g.rows[z] & inside
        if seen and seen != inside:
            return False
    return True


def is_prime(g: ColoredGraph) -> bool:
    """True iff every module of g is trivial (empty, a singleton or V)"""
    if g.n <= 2:
        return True
    scope = (1 << g.n) - 1
    if len(_components(g.rows, scope)) > 1 or len(_components(_co_rows(g, scope), scope)) > 1:
        return False
    return all(m & (m - 1) == 0 for m in _maximal_modules(g, scope))


def twins_partition(g: ColoredGraph) -> List[List[int]]:
    """
    Classes of the is-twin relation: u, v twins iff N(u) minus v equals N(v) minus u.

    False twins share the open neighborhood, true twins the closed one; a
    class never mixes the two kinds once it has three members.
    """
    parent = list(range(g.n))

    def find(x: int) -> int:
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for key in (lambda v: g.rows[v], lambda v: g.rows[v] | (1 << v)):
        first: Dict[int, int] = {}
        for v in range(g.n):
            k = key(v)
            if k in first:
                parent[find(v)] = find(first[k])
            else:
                first[k] = v
    classes: Dict[int, List[int]] = {}
    for v in range(g.n):
        classes.setdefault(find(v), []).append(v)
    return sorted(classes.values(), key=lambda c: c[0])


def module_quotient(g: ColoredGraph, parts: List[int]) -> ColoredGraph:
    """Plain graph on the parts of a module partition (parts are modules)"""
    reps = [p & -p for p in parts]
    edges = [
        (i, j)
        for i in range(len(parts))
        for j in range(i + 1, len(parts))
        if g.rows[reps[i].bit_length() - 1] & parts[j]
    ]
    return ColoredGraph(len(parts), edges)


def module_levels(g: ColoredGraph) -> List[List[List[int]]]:
    """
    Bottom-up level construction of the modular decomposition.

    Starting from singletons, each level either merges the twin classes of
    the current quotient or, when it is twin-free, merges the maximal
    modules of every connected and coconnected piece (the whole piece when
    it is prime). Every part of every level is a module of g and a union of
    siblings in mod_tree(g).

    Returns:
        List[List[List[int]]]: Level partitions, from singletons up to {V}
    """
    if g.n < 1:
        return []
    level = [1 << v for v in range(g.n)]
    levels = [level]
    while len(level) > 1:
        q = module_quotient(g, level)
        twins = twins_partition(q)
        if len(twins) < q.n:
            groups = twins
        else:
            groups = []
            scope = (1 << q.n) - 1
            for comp in _components(q.rows, scope):
                for piece in _components(_co_rows(q, comp), comp):
                    if piece & (piece - 1) == 0:
                        groups.append(_members(piece))
                        continue
                    modules = _maximal_modules(q, piece)
                    if all(m & (m - 1) == 0 for m in modules):
                        groups.append(_members(piece))
                    else:
                        groups.extend(_members(m) for m in modules)
        merged = []
        for group in groups:
            union = 0
            for i in group:
                union |= level[i]
            merged.append(union)
        level = sorted(merged, key=lambda m: m & -m)
        levels.append(level)
    return [[_members(p) for p in lvl] for lvl in levels]


def quotient_star(gc: ColoredGraph) -> Tuple[ColoredGraph, List[List[int]]]:
    """
    The colored quotient G* of a connected and coconnected graph.

    Vertices are the maximal modules (ordered by smallest vertex); a vertex's
    color is the rank of its module's canonical encoding among the distinct
    encodings of all modules, so isomorphic modules share a color.

    Returns:
        Tuple[ColoredGraph, List[List[int]]]: G* and the module of each vertex

    Raises:
        PreconditionError: If G/M_G is not prime, or a module is not of twin-width at most 1
    """
    from app.services.canon_service import canonical_form

    modules = maximal_modules(gc)
    encodings = [canonical_form(induced_subgraph(gc, m)[0]).encoding for m in modules]
    rank = {e: i for i, e in enumerate(sorted(set(encodings)))}
    q = module_quotient(gc, [_mask(m) for m in modules])
    if not is_prime(q):
        raise PreconditionError(Constants.NOT_PRIME_QUOTIENT)
    return ColoredGraph(q.n, q.edges, [rank[e] for e in encodings]), modules
