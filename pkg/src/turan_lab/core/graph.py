"""Labeled simple graphs on at most 64 vertices, stored as bitset rows.

A neighbourhood is one Python int whose bit ``u`` is set when ``u`` is adjacent,
so set algebra on neighbourhoods is plain integer arithmetic.
"""

import logging
from collections.abc import Iterable, Iterator, Sequence
from dataclasses import dataclass, field
from functools import cached_property
from typing import Any

import networkx as nx
import numpy as np

from .errors import CapacityError, LabArgumentError

logger = logging.getLogger(__name__)

MAX_VERTICES = 64


def iter_bits(mask: int) -> Iterator[int]:
    """Yield the set bit positions of ``mask`` in increasing order."""
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def popcount(mask: int) -> int:
    return mask.bit_count()


@dataclass(frozen=True)
class VertexSet:
    """A subset of ``{0, ..., n-1}`` as a bitmask."""

    n: int
    members: int = 0

    def __post_init__(self) -> None:
        if self.members < 0 or self.members >> self.n:
            raise LabArgumentError(f"vertex set {self.members:#x} escapes 0..{self.n - 1}")

    @classmethod
    def of(cls, n: int, vertices: Iterable[int]) -> "VertexSet":
        mask = 0
        for v in vertices:
            if not 0 <= v < n:
                raise LabArgumentError(f"vertex {v} outside 0..{n - 1}")
            mask |= 1 << v
        return cls(n, mask)

    @classmethod
    def full(cls, n: int) -> "VertexSet":
        return cls(n, (1 << n) - 1)

    def __iter__(self) -> Iterator[int]:
        return iter_bits(self.members)

    def __len__(self) -> int:
        return popcount(self.members)

    def __contains__(self, v: object) -> bool:
        return isinstance(v, int) and 0 <= v < self.n and bool(self.members >> v & 1)

    def __bool__(self) -> bool:
        return self.members != 0

    def _same_universe(self, other: "VertexSet") -> None:
        if self.n != other.n:
            raise LabArgumentError(f"vertex sets over different universes ({self.n} vs {other.n})")

    def __or__(self, other: "VertexSet") -> "VertexSet":
        self._same_universe(other)
        return VertexSet(self.n, self.members | other.members)

    def __and__(self, other: "VertexSet") -> "VertexSet":
        self._same_universe(other)
        return VertexSet(self.n, self.members & other.members)

    def __sub__(self, other: "VertexSet") -> "VertexSet":
        self._same_universe(other)
        return VertexSet(self.n, self.members & ~other.members)

    def isdisjoint(self, other: "VertexSet") -> bool:
        self._same_universe(other)
        return not self.members & other.members

    def complement(self) -> "VertexSet":
        return VertexSet(self.n, ((1 << self.n) - 1) & ~self.members)

    def to_list(self) -> list[int]:
        return list(iter_bits(self.members))


@dataclass(frozen=True)
class Graph:
    """Immutable labeled simple graph; ``adj[v]`` is the neighbourhood bitmask of ``v``."""

    n: int
    adj: tuple[int, ...]

    def __post_init__(self) -> None:
        if not 0 <= self.n <= MAX_VERTICES:
            raise CapacityError(f"graph on {self.n} vertices exceeds the {MAX_VERTICES}-vertex cap")
        if len(self.adj) != self.n:
            raise LabArgumentError(f"expected {self.n} adjacency rows, got {len(self.adj)}")
        full = (1 << self.n) - 1
        for v, row in enumerate(self.adj):
            if row < 0 or row & ~full:
                raise LabArgumentError(f"row {v} references vertices outside 0..{self.n - 1}")
            if row >> v & 1:
                raise LabArgumentError(f"loop at vertex {v}")
            for u in iter_bits(row):
                if not self.adj[u] >> v & 1:
                    raise LabArgumentError(f"asymmetric adjacency between {v} and {u}")

    @classmethod
    def trusted(cls, n: int, adj: Sequence[int]) -> "Graph":
        """Build without validation; callers guarantee symmetry and no loops."""
        g = object.__new__(cls)
        object.__setattr__(g, "n", n)
        object.__setattr__(g, "adj", tuple(adj))
        return g

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[tuple[int, int]]) -> "Graph":
        """Build a graph from an edge list; repeated edges collapse.

        Args:
            n: Vertex count, at most 64.
            edges: Pairs of distinct vertices in 0..n-1.

        Returns:
            The graph.

        Raises:
            LabArgumentError: On a loop or an endpoint outside 0..n-1.
        """
        rows = [0] * n
        for u, v in edges:
            if u == v:
                raise LabArgumentError(f"loop at vertex {u}")
            if not (0 <= u < n and 0 <= v < n):
                raise LabArgumentError(f"edge {u}{v} outside 0..{n - 1}")
            rows[u] |= 1 << v
            rows[v] |= 1 << u
        return cls(n, tuple(rows))

    @classmethod
    def empty(cls, n: int) -> "Graph":
        return cls(n, (0,) * n)

    @classmethod
    def complete(cls, n: int) -> "Graph":
        full = (1 << n) - 1
        return cls(n, tuple(full & ~(1 << v) for v in range(n)))

    @classmethod
    def from_networkx(cls, nxg: nx.Graph) -> "Graph":
        nodes = sorted(nxg.nodes())
        index = {v: i for i, v in enumerate(nodes)}
        return cls.from_edges(len(nodes), ((index[u], index[v]) for u, v in nxg.edges()))

    @cached_property
    def num_edges(self) -> int:
        return sum(popcount(row) for row in self.adj) // 2

    def degree(self, v: int) -> int:
        return popcount(self.adj[v])

    def degrees(self) -> list[int]:
        return [popcount(row) for row in self.adj]

    def min_degree(self) -> int:
        return min(self.degrees(), default=0)

    def max_degree(self) -> int:
        return max(self.degrees(), default=0)

    def neighbors(self, v: int) -> VertexSet:
        return VertexSet(self.n, self.adj[v])

    def has_edge(self, u: int, v: int) -> bool:
        return bool(self.adj[u] >> v & 1)

    def edges(self) -> list[tuple[int, int]]:
        return [(u, v) for u in range(self.n) for v in iter_bits(self.adj[u] >> (u + 1) << (u + 1))]

    def non_edges(self) -> list[tuple[int, int]]:
        full = (1 << self.n) - 1
        result = []
        for u in range(self.n):
            missing = full & ~self.adj[u] & ~((1 << (u + 1)) - 1)
            result.extend((u, v) for v in iter_bits(missing))
        return result

    def add_edge(self, u: int, v: int) -> "Graph":
        if u == v or not (0 <= u < self.n and 0 <= v < self.n):
            raise LabArgumentError(f"cannot add edge {u}{v} to a graph on {self.n} vertices")
        rows = list(self.adj)
        rows[u] |= 1 << v
        rows[v] |= 1 << u
        return Graph.trusted(self.n, rows)

    def remove_edge(self, u: int, v: int) -> "Graph":
        rows = list(self.adj)
        rows[u] &= ~(1 << v)
        rows[v] &= ~(1 << u)
        return Graph.trusted(self.n, rows)

    def relabel(self, perm: Sequence[int]) -> "Graph":
        """Return the graph with old vertex ``v`` renamed ``perm[v]``."""
        if sorted(perm) != list(range(self.n)):
            raise LabArgumentError("relabeling is not a permutation")
        rows = [0] * self.n
        for v, row in enumerate(self.adj):
            image = 0
            for u in iter_bits(row):
                image |= 1 << perm[u]
            rows[perm[v]] = image
        return Graph.trusted(self.n, rows)

    def components(self) -> list[VertexSet]:
        """Connected components, ordered by least vertex."""
        seen = 0
        found = []
        for start in range(self.n):
            if seen >> start & 1:
                continue
            comp = frontier = 1 << start
            while frontier:
                reach = 0
                for v in iter_bits(frontier):
                    reach |= self.adj[v]
                frontier = reach & ~comp
                comp |= frontier
            seen |= comp
            found.append(VertexSet(self.n, comp))
        return found

    def is_connected(self) -> bool:
        return len(self.components()) <= 1

    def to_numpy(self) -> np.ndarray:
        a = np.zeros((self.n, self.n), dtype=float)
        for u, v in self.edges():
            a[u, v] = a[v, u] = 1.0
        return a

    def to_networkx(self) -> nx.Graph:
        nxg = nx.Graph()
        nxg.add_nodes_from(range(self.n))
        nxg.add_edges_from(self.edges())
        return nxg

    def __repr__(self) -> str:
        return f"Graph(n={self.n}, e={self.num_edges})"


@dataclass(frozen=True)
class EdgeCounts:
    """Edge tallies of a graph against a vertex partition."""

    internal: tuple[int, ...]
    cross: dict[tuple[int, int], int]
    cross_missing: dict[tuple[int, int], int]

    @property
    def total(self) -> int:
        return sum(self.internal) + sum(self.cross.values())


@dataclass(frozen=True)
class PartitionVec:
    """Assignment of vertices to classes ``0..r-1``; empty classes are allowed."""

    assignment: tuple[int, ...]
    r: int
    tallies: EdgeCounts | None = field(default=None, compare=False, hash=False)

    def __post_init__(self) -> None:
        if self.r < 1:
            raise LabArgumentError(f"a partition needs at least one class, got r={self.r}")
        bad = [c for c in self.assignment if not 0 <= c < self.r]
        if bad:
            raise LabArgumentError(f"class labels {sorted(set(bad))} outside 0..{self.r - 1}")

    @classmethod
    def from_classes(cls, n: int, classes: Sequence[Iterable[int]]) -> "PartitionVec":
        """Build from explicit classes; they must cover ``0..n-1`` exactly once."""
        assignment = [-1] * n
        for c, members in enumerate(classes):
            for v in members:
                if not 0 <= v < n:
                    raise LabArgumentError(f"vertex {v} outside 0..{n - 1}")
                if assignment[v] != -1:
                    raise LabArgumentError(f"vertex {v} appears in two classes")
                assignment[v] = c
        uncovered = [v for v, c in enumerate(assignment) if c == -1]
        if uncovered:
            raise LabArgumentError(f"vertices {uncovered} are not covered by any class")
        return cls(tuple(assignment), max(len(classes), 1))

    @property
    def n(self) -> int:
        return len(self.assignment)

    def masks(self) -> list[int]:
        masks = [0] * self.r
        for v, c in enumerate(self.assignment):
            masks[c] |= 1 << v
        return masks

    def classes(self) -> list[VertexSet]:
        return [VertexSet(self.n, m) for m in self.masks()]

    @property
    def sizes(self) -> tuple[int, ...]:
        return tuple(popcount(m) for m in self.masks())

    @property
    def balance_gap(self) -> int:
        sizes = self.sizes
        return max(sizes) - min(sizes) if sizes else 0

    def with_tallies(self, g: Graph) -> "PartitionVec":
        return PartitionVec(self.assignment, self.r, edge_counts(g, self))

    def to_dict(self) -> dict[str, Any]:
        data: dict[str, Any] = {"assignment": list(self.assignment), "r": self.r, "sizes": list(self.sizes)}
        if self.tallies is not None:
            data["internal_edges"] = list(self.tallies.internal)
            data["cross_missing"] = {f"{i},{j}": m for (i, j), m in self.tallies.cross_missing.items()}
        return data


def join(g1: Graph, g2: Graph) -> Graph:
    """``g1 ∨ g2``: g1 on labels ``0..n1-1``, g2 shifted after it, all cross edges added."""
    n1, n2 = g1.n, g2.n
    if n1 + n2 > MAX_VERTICES:
        raise CapacityError(f"join would have {n1 + n2} vertices (cap {MAX_VERTICES})")
    block1 = (1 << n1) - 1
    block2 = ((1 << n2) - 1) << n1
    rows = [row | block2 for row in g1.adj] + [(row << n1) | block1 for row in g2.adj]
    return Graph(n1 + n2, tuple(rows))


def disjoint_union(g1: Graph, g2: Graph) -> Graph:
    n1, n2 = g1.n, g2.n
    if n1 + n2 > MAX_VERTICES:
        raise CapacityError(f"union would have {n1 + n2} vertices (cap {MAX_VERTICES})")
    return Graph(n1 + n2, tuple(g1.adj) + tuple(row << n1 for row in g2.adj))


def complement(g: Graph) -> Graph:
    full = (1 << g.n) - 1
    return Graph(g.n, tuple(full & ~row & ~(1 << v) for v, row in enumerate(g.adj)))


def induced(g: Graph, s: VertexSet) -> Graph:
    """Induced subgraph on ``s``, relabeled ``0..|s|-1`` in increasing vertex order."""
    if s.n != g.n:
        raise LabArgumentError(f"vertex set universe {s.n} does not match graph order {g.n}")
    members = s.to_list()
    if not members:
        raise LabArgumentError("induced subgraph of an empty vertex set")
    position = {v: i for i, v in enumerate(members)}
    rows = []
    for v in members:
        row = 0
        for u in iter_bits(g.adj[v] & s.members):
            row |= 1 << position[u]
        rows.append(row)
    return Graph(len(members), tuple(rows))


def edge_counts(g: Graph, parts: PartitionVec) -> EdgeCounts:
    """Internal edges per class and present/missing cross pairs per class pair."""
    if parts.n != g.n:
        raise LabArgumentError(f"partition covers {parts.n} vertices, graph has {g.n}")
    masks = parts.masks()
    internal = []
    for mask in masks:
        internal.append(sum(popcount(g.adj[v] & mask) for v in iter_bits(mask)) // 2)
    cross: dict[tuple[int, int], int] = {}
    missing: dict[tuple[int, int], int] = {}
    for i in range(parts.r):
        for j in range(i + 1, parts.r):
            present = sum(popcount(g.adj[v] & masks[j]) for v in iter_bits(masks[i]))
            cross[(i, j)] = present
            missing[(i, j)] = popcount(masks[i]) * popcount(masks[j]) - present
    counts = EdgeCounts(tuple(internal), cross, missing)
    if counts.total != g.num_edges:
        raise LabArgumentError("partition tallies do not account for every edge")
    return counts
