"""Named graph families with their edge-count formulas.

Parts of multipartite constructions occupy consecutive label blocks, largest
part first; embedded cliques sit on the lowest labels of the first part.
"""

import logging
import math
from collections.abc import Sequence
from dataclasses import dataclass

from .errors import LabArgumentError
from .graph import Graph, join
from .graph6 import graph6_decode, graph6_encode
from .spectral import turan_edges, turan_sizes

logger = logging.getLogger(__name__)


def complete_multipartite(sizes: Sequence[int]) -> Graph:
    """K_{n_1..n_r} with parts laid out consecutively from vertex 0.

    Args:
        sizes: Positive part sizes.

    Returns:
        The complete multipartite graph.

    Raises:
        LabArgumentError: If a size is not positive or none is given.
    """
    parts = [int(s) for s in sizes]
    if not parts or any(s < 1 for s in parts):
        raise LabArgumentError(f"part sizes must be positive, got {parts}")
    n = sum(parts)
    rows = [0] * n
    start = 0
    full = (1 << n) - 1
    for size in parts:
        block = ((1 << size) - 1) << start
        for v in range(start, start + size):
            rows[v] = full & ~block
        start += size
    return Graph(n, tuple(rows))


def turan(r: int, n: int) -> Graph:
    """T_r(n), the balanced complete r-partite graph."""
    return complete_multipartite(turan_sizes(n, r))


def turan_edge_window(n: int, r: int) -> tuple[float, float]:
    """The window ((1-1/r)n^2/2 - r/8, (1-1/r)n^2/2) that always contains t_r(n)."""
    top = (1 - 1 / r) * n * n / 2
    return top - r / 8, top


def clique(k: int) -> Graph:
    if k < 1:
        raise LabArgumentError(f"clique order must be positive, got {k}")
    return Graph.complete(k)


def cycle(m: int) -> Graph:
    if m < 3:
        raise LabArgumentError(f"a cycle needs at least 3 vertices, got {m}")
    return Graph.from_edges(m, ((i, (i + 1) % m) for i in range(m)))


def odd_cycle(k: int) -> Graph:
    """C_{2k+1}."""
    if k < 1:
        raise LabArgumentError(f"odd_cycle needs k >= 1, got {k}")
    return cycle(2 * k + 1)


def fan(k: int, t: int) -> Graph:
    """F_{k,t}: k copies of K_t sharing only vertex 0."""
    if k < 1 or t < 2:
        raise LabArgumentError(f"fan needs k >= 1 and t >= 2, got k={k}, t={t}")
    n = (t - 1) * k + 1
    edges = []
    for c in range(k):
        members = [0] + list(range(1 + c * (t - 1), 1 + (c + 1) * (t - 1)))
        edges.extend((u, v) for i, u in enumerate(members) for v in members[i + 1 :])
    return Graph.from_edges(n, edges)


def book(k: int) -> Graph:
    """B_k = K_2 ∨ K̄_k: k triangles on the common edge 01."""
    if k < 1:
        raise LabArgumentError(f"book needs k >= 1, got {k}")
    return join(Graph.complete(2), Graph.empty(k))


def complete_split(a: int, n: int) -> Graph:
    """K_a ∨ K̄_{n-a}."""
    if not 0 <= a < n:
        raise LabArgumentError(f"complete split graph needs 0 <= a < n, got a={a}, n={n}")
    return join(Graph.complete(a), Graph.empty(n - a))


def efgg_embedded_edges(k: int) -> tuple[int, list[tuple[int, int]]]:
    """Graph planted in one side of T_2(n) for the F_k extremal construction.

    Odd k: two disjoint K_k on 2k vertices. Even k: a circulant on 2k-1
    vertices with distances 1..(k-2)/2 plus the matching (i, i+k-1),
    i = 0..k-2, giving k^2 - 3k/2 edges and maximum degree k-1.
    """
    if k < 2:
        raise LabArgumentError(f"need k >= 2, got {k}")
    if k % 2:
        edges = []
        for base in (0, k):
            edges.extend((base + i, base + j) for i in range(k) for j in range(i + 1, k))
        return 2 * k, edges
    m = 2 * k - 1
    pairs = set()
    for i in range(m):
        for d in range(1, (k - 2) // 2 + 1):
            j = (i + d) % m
            pairs.add((min(i, j), max(i, j)))
    pairs.update((i, i + k - 1) for i in range(k - 1))
    return m, sorted(pairs)


def efgg_extremal(n: int, k: int) -> Graph:
    """T_2(n) with the F_k-extremal graph planted in its larger side.

    Args:
        n: Vertex count, at least 4k - 1 for odd k and 4k - 3 for even k.
        k: Fan size, at least 2.

    Returns:
        The edge-extremal F_k-free construction on n vertices.
    """
    threshold = 4 * k - 1 if k % 2 else 4 * k - 3
    if k < 2 or n < threshold:
        raise LabArgumentError(f"efgg_extremal(n={n}, k={k}) needs k >= 2 and n >= {threshold}")
    base = turan(2, n)
    _, planted = efgg_embedded_edges(k)
    rows = list(base.adj)
    for u, v in planted:
        rows[u] |= 1 << v
        rows[v] |= 1 << u
    g = Graph(n, tuple(rows))
    expected = turan_edges(n, 2) + (2 * math.comb(k, 2) if k % 2 else k * k - 3 * k // 2)
    if g.num_edges != expected:
        raise LabArgumentError(f"planted construction has {g.num_edges} edges, expected {expected}")
    return g


_ARITY = {
    "turan": 2,
    "fan": 2,
    "book": 1,
    "odd-cycle": 1,
    "cycle": 1,
    "clique": 1,
    "turan-clique": 1,
    "complete-split": 2,
    "efgg": 2,
    "g1": 2,
    "g2": 2,
    "empty": 1,
}


@dataclass(frozen=True)
class FamilySpec:
    """A named family member in compact text form, e.g. ``turan:3,7`` or ``fan:2,4``."""

    kind: str
    params: tuple[int, ...]

    @classmethod
    def parse(cls, text: str) -> "FamilySpec":
        """Parse ``kind:p1,p2,...``.

        Args:
            text: Family spec such as ``fan:2,4``.

        Returns:
            The spec; the graph is built lazily by ``build``.

        Raises:
            LabArgumentError: On an unknown kind or malformed parameters.
        """
        kind, sep, raw = text.strip().partition(":")
        kind = kind.lower()
        if not sep or not raw:
            raise LabArgumentError(f"family spec {text!r} must look like kind:params")
        try:
            params = tuple(int(p) for p in raw.replace(" ", "").split(","))
        except ValueError as e:
            raise LabArgumentError(f"family spec {text!r} has non-integer parameters") from e
        if kind != "multipartite" and kind not in _ARITY:
            raise LabArgumentError(f"unknown family {kind!r}; known: multipartite, {', '.join(sorted(_ARITY))}")
        if kind in _ARITY and len(params) != _ARITY[kind]:
            raise LabArgumentError(f"family {kind!r} takes {_ARITY[kind]} parameter(s), got {len(params)}")
        return cls(kind, params)

    def build(self) -> Graph:
        p = self.params
        if self.kind == "turan":
            return turan(p[0], p[1])
        if self.kind == "multipartite":
            return complete_multipartite(p)
        if self.kind == "fan":
            return fan(p[0], p[1])
        if self.kind == "book":
            return book(p[0])
        if self.kind == "odd-cycle":
            return odd_cycle(p[0])
        if self.kind == "cycle":
            return cycle(p[0])
        if self.kind in ("clique", "turan-clique"):
            return clique(p[0])
        if self.kind == "complete-split":
            return complete_split(p[0], p[1])
        if self.kind == "empty":
            return Graph.empty(p[0])
        if self.kind == "g1" and p[1] % 2 == 0:
            raise LabArgumentError("g1 is the odd-k construction")
        if self.kind == "g2" and p[1] % 2 == 1:
            raise LabArgumentError("g2 is the even-k construction")
        return efgg_extremal(p[0], p[1])

    def __str__(self) -> str:
        return f"{self.kind}:{','.join(str(x) for x in self.params)}"


@dataclass(frozen=True)
class GraphSpec:
    """A graph given either by family spec or by graph6 text, with a display label."""

    label: str
    graph: Graph

    @property
    def graph6(self) -> str:
        return graph6_encode(self.graph)


def parse_graph_spec(text: str) -> GraphSpec:
    """Accept ``family:<kind>:<params>``, ``g6:<graph6>`` or a bare ``<kind>:<params>``."""
    raw = text.strip()
    if raw.startswith("g6:"):
        code = raw[3:]
        return GraphSpec(f"g6:{code}", graph6_decode(code))
    if raw.startswith("family:"):
        raw = raw[len("family:") :]
    spec = FamilySpec.parse(raw)
    return GraphSpec(str(spec), spec.build())
