"""Subgraph containment, F-free and F-saturated predicates, chromatic number."""

import logging
from collections.abc import Sequence
from concurrent.futures import Executor
from dataclasses import dataclass

from .errors import CapacityError, LabArgumentError, PreconditionError
from .graph import Graph, iter_bits

logger = logging.getLogger(__name__)

DEFAULT_CHROMATIC_CAP = 16


@dataclass(frozen=True)
class EmbeddingWitness:
    """Injective map V(F) -> V(G); ``mapping[i]`` is the image of F-vertex i."""

    mapping: tuple[int, ...]

    def is_valid(self, g: Graph, f: Graph) -> bool:
        if len(self.mapping) != f.n or len(set(self.mapping)) != f.n:
            return False
        return all(g.has_edge(self.mapping[u], self.mapping[v]) for u, v in f.edges())


def _search_order(f: Graph, allowed: Sequence[int]) -> list[int]:
    """Most placed neighbours first, then the narrowest domain, then highest degree."""
    degrees = f.degrees()
    order: list[int] = []
    placed = 0
    remaining = set(range(f.n))
    while remaining:
        v = max(
            remaining,
            key=lambda u: ((f.adj[u] & placed).bit_count(), -allowed[u].bit_count(), degrees[u], -u),
        )
        order.append(v)
        placed |= 1 << v
        remaining.remove(v)
    return order


def contains(
    g: Graph,
    f: Graph,
    domains: Sequence[int] | None = None,
) -> EmbeddingWitness | None:
    """Find a (not necessarily induced) copy of ``f`` in ``g``.

    Args:
        g: Host graph.
        f: Pattern graph with at least one vertex.
        domains: Optional per-F-vertex bitmask of allowed G-vertices, for
            class-respecting searches.

    Returns:
        A witness mapping F-vertices to G-vertices, or None when g is F-free.

    Raises:
        LabArgumentError: If ``f`` is empty or ``domains`` has the wrong length.
    """
    if f.n < 1:
        raise LabArgumentError("forbidden graph needs at least one vertex")
    if domains is not None and len(domains) != f.n:
        raise LabArgumentError(f"expected {f.n} domains, got {len(domains)}")
    if f.n > g.n or f.num_edges > g.num_edges:
        return None

    g_degrees = g.degrees()
    f_degrees = f.degrees()
    full = (1 << g.n) - 1
    allowed = []
    for u in range(f.n):
        mask = full if domains is None else domains[u] & full
        wide_enough = 0
        for c in iter_bits(mask):
            if g_degrees[c] >= f_degrees[u]:
                wide_enough |= 1 << c
        if not wide_enough:
            return None
        allowed.append(wide_enough)

    order = _search_order(f, allowed)
    image = [-1] * f.n

    def extend(depth: int, used: int) -> bool:
        if depth == f.n:
            return True
        u = order[depth]
        candidates = allowed[u] & ~used
        for w in iter_bits(f.adj[u]):
            if image[w] >= 0:
                candidates &= g.adj[image[w]]
        for c in iter_bits(candidates):
            image[u] = c
            if extend(depth + 1, used | (1 << c)):
                return True
        image[u] = -1
        return False

    if extend(0, 0):
        return EmbeddingWitness(tuple(image))
    return None


def contains_through(
    g: Graph, f: Graph, v: int, anchors: Sequence[int] | None = None
) -> EmbeddingWitness | None:
    """Find a copy of ``f`` in ``g`` that uses vertex ``v``.

    Args:
        g: Host graph.
        f: Pattern graph.
        v: Vertex of ``g`` the copy must cover.
        anchors: F-vertices tried as preimage of ``v``; one per automorphism
            orbit of F suffices. All of F when None.

    Returns:
        A witness through ``v``, or None.
    """
    if not 0 <= v < g.n:
        raise LabArgumentError(f"vertex {v} outside 0..{g.n - 1}")
    others = ((1 << g.n) - 1) & ~(1 << v)
    candidates = range(f.n) if anchors is None else anchors
    for u in sorted(candidates, key=f.degree, reverse=True):
        if f.degree(u) > g.degree(v):
            continue
        domains = [others] * f.n
        domains[u] = 1 << v
        witness = contains(g, f, domains)
        if witness is not None:
            return witness
    return None


def is_f_free(g: Graph, f: Graph) -> bool:
    return contains(g, f) is None


def _creates_copy(task: tuple[Graph, Graph, int, int, Sequence[int] | None]) -> bool:
    g, f, u, v, anchors = task
    return contains_through(g.add_edge(u, v), f, u, anchors) is not None


def is_saturated(
    g: Graph,
    f: Graph,
    executor: Executor | None = None,
    *,
    anchors: Sequence[int] | None = None,
    known_free: bool = False,
) -> bool:
    """True iff ``g`` is F-free and every added non-edge creates a copy of ``f``.

    Args:
        g: Host graph.
        f: Forbidden graph.
        executor: Optional pool that tests non-edges in parallel.
        anchors: One F-vertex per automorphism orbit; speeds up the through-edge search.
        known_free: Skip the F-free precondition when the caller already guarantees it.

    Returns:
        Whether ``g`` is maximal F-free.

    Raises:
        PreconditionError: If ``g`` already contains ``f``.
    """
    if not known_free:
        witness = contains(g, f)
        if witness is not None:
            raise PreconditionError(f"graph already contains the forbidden graph via {witness.mapping}")
    tasks = [(g, f, u, v, anchors) for u, v in g.non_edges()]
    if executor is None:
        return all(_creates_copy(t) for t in tasks)
    return all(executor.map(_creates_copy, tasks))


def _colorable(g: Graph, k: int) -> bool:
    colors = [-1] * g.n
    degrees = g.degrees()

    def pick() -> int:
        best, best_key = -1, (-1, -1)
        for v in range(g.n):
            if colors[v] >= 0:
                continue
            seen = {colors[u] for u in iter_bits(g.adj[v]) if colors[u] >= 0}
            key = (len(seen), degrees[v])
            if key > best_key:
                best, best_key = v, key
        return best

    def assign(colored: int, in_use: int) -> bool:
        if colored == g.n:
            return True
        v = pick()
        forbidden = {colors[u] for u in iter_bits(g.adj[v]) if colors[u] >= 0}
        for c in range(min(k, in_use + 1)):
            if c in forbidden:
                continue
            colors[v] = c
            if assign(colored + 1, max(in_use, c + 1)):
                return True
        colors[v] = -1
        return False

    return assign(0, 0)


def chromatic_number(g: Graph, cap: int = DEFAULT_CHROMATIC_CAP) -> int:
    """Exact chromatic number by saturation-ordered backtracking.

    Args:
        g: Graph on at most ``cap`` vertices.
        cap: Vertex limit of the exact search.

    Returns:
        chi(g); 0 for the empty graph on no vertices.

    Raises:
        CapacityError: If ``g`` has more than ``cap`` vertices.
    """
    if g.n > cap:
        raise CapacityError(f"exact chromatic number limited to {cap} vertices, got {g.n}")
    if g.n == 0:
        return 0
    if g.num_edges == 0:
        return 1
    k = 2
    while not _colorable(g, k):
        k += 1
    return k


def is_color_critical(g: Graph, cap: int = DEFAULT_CHROMATIC_CAP) -> bool:
    """True iff deleting some edge lowers the chromatic number."""
    chi = chromatic_number(g, cap)
    return any(chromatic_number(g.remove_edge(u, v), cap) == chi - 1 for u, v in g.edges())


def forbidden_r(f: Graph, cap: int = DEFAULT_CHROMATIC_CAP) -> int:
    """r = chi(F) - 1, the part count of the Turán graphs that govern ex(n, F)."""
    return chromatic_number(f, cap) - 1
