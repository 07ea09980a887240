"""Color-preserving isomorphism oracle backed by networkx VF2++."""

from typing import Dict, Optional, Sequence, Union

from networkx import vf2pp_is_isomorphic, vf2pp_isomorphism

from app.graphs.colored_graph import ColoredGraph, to_networkx

Mapping = Union[Dict[int, int], Sequence[int]]


def _quick_reject(g: ColoredGraph, h: ColoredGraph) -> bool:
    return (
        g.n != h.n
        or g.m != h.m
        or sorted(g.colors) != sorted(h.colors)
        or sorted(g.degree(v) for v in g.vertices()) != sorted(h.degree(v) for v in h.vertices())
    )


def is_isomorphic(g: ColoredGraph, h: ColoredGraph) -> bool:
    if _quick_reject(g, h):
        return False
    if g.n == 0:
        return True
    return vf2pp_is_isomorphic(to_networkx(g), to_networkx(h), node_label="color")


def find_isomorphism(g: ColoredGraph, h: ColoredGraph) -> Optional[Dict[int, int]]:
    """An isomorphism g -> h as a vertex dict, or None"""
    if _quick_reject(g, h):
        return None
    if g.n == 0:
        return {}
    return vf2pp_isomorphism(to_networkx(g), to_networkx(h), node_label="color")


def is_isomorphism(g: ColoredGraph, h: ColoredGraph, f: Mapping) -> bool:
    """Check that f is a color-preserving bijection V(g) -> V(h) preserving edges and non-edges"""
    if g.n != h.n:
        return False
    image = [f[v] for v in range(g.n)]
    if sorted(image) != list(range(h.n)):
        return False
    if any(g.colors[v] != h.colors[image[v]] for v in range(g.n)):
        return False
    if g.m != h.m:
        return False
    return all(h.has_edge(image[u], image[v]) for u, v in g.edges)
