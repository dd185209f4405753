"""Exact epsilon-regularity checks and counting-lemma premises at desk scale.

Sub-pairs qualify when |A| >= ceil(eps |U|) and |B| >= ceil(eps |W|), each at
least 1. Partition irregularity sums |V_i||V_j| over unordered irregular pairs
i < j and divides by n^2, so a one-class partition scores 0.
"""

import logging
import math
from collections.abc import Iterator, Sequence
from concurrent.futures import Executor
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any

import aiofiles

from ..core.containment import contains
from ..core.errors import CapacityError, InvariantViolation, LabArgumentError
from ..core.graph import Graph, PartitionVec, VertexSet, iter_bits, popcount
from ..core.graph6 import graph6_decode

logger = logging.getLogger(__name__)

DEFAULT_SIDE_CAP = 14
DEFAULT_SEARCH_CAP = 10
_SLACK = 1e-12


@dataclass(frozen=True)
class RegularityParams:
    epsilon: float
    parts: PartitionVec

    def __post_init__(self) -> None:
        if not 0 < self.epsilon <= 1:
            raise LabArgumentError(f"epsilon must lie in (0, 1], got {self.epsilon}")


def _check_pair(g: Graph, u: VertexSet, w: VertexSet) -> None:
    if u.n != g.n or w.n != g.n:
        raise LabArgumentError("vertex sets must live on the graph's vertex set")
    if not u or not w:
        raise LabArgumentError("density needs two nonempty sets")
    if not u.isdisjoint(w):
        raise LabArgumentError("density needs disjoint sets")


def cross_edges(g: Graph, u: VertexSet, w: VertexSet) -> int:
    return sum(popcount(g.adj[v] & w.members) for v in u)


def density(g: Graph, u: VertexSet, w: VertexSet) -> float:
    """d(U, W) = e(U, W) / (|U| |W|)."""
    _check_pair(g, u, w)
    return cross_edges(g, u, w) / (len(u) * len(w))


def _min_size(eps: float, size: int) -> int:
    return max(1, math.ceil(eps * size - _SLACK))


@dataclass
class SubPairWitness:
    a: list[int]
    b: list[int]
    density: float
    deviation: float

    def to_dict(self) -> dict[str, Any]:
        return dict(self.__dict__)


@dataclass
class PairVerdict:
    regular: bool
    pair_density: float
    worst: SubPairWitness | None
    epsilon: float

    def to_dict(self) -> dict[str, Any]:
        return {
            "regular": self.regular,
            "pair_density": self.pair_density,
            "epsilon": self.epsilon,
            "worst": self.worst.to_dict() if self.worst else None,
        }


def _scan(task: tuple[tuple[int, ...], list[int], list[int], int, float]) -> tuple[float, int, list[int]]:
    """Largest deviation over sub-pairs whose A-side is one of the given masks."""
    adj, a_masks, w_list, b_min, d = task
    best_dev, best_a, best_b = -1.0, 0, []
    for a_mask in a_masks:
        size_a = popcount(a_mask)
        # extreme B of each size: the top or bottom deg_A over W
        ranked = sorted(((popcount(adj[x] & a_mask), x) for x in w_list), reverse=True)
        degrees = [deg for deg, _ in ranked]
        top = 0
        prefix_top = [0]
        for deg in degrees:
            top += deg
            prefix_top.append(top)
        total = prefix_top[-1]
        for k in range(b_min, len(w_list) + 1):
            bottom = total - prefix_top[len(w_list) - k]
            high = prefix_top[k] / (size_a * k)
            low = bottom / (size_a * k)
            if high - d > best_dev:
                best_dev, best_a, best_b = high - d, a_mask, [x for _, x in ranked[:k]]
            if d - low > best_dev:
                best_dev, best_a, best_b = d - low, a_mask, [x for _, x in ranked[len(w_list) - k :]]
    return best_dev, best_a, best_b


def is_regular_pair(
    g: Graph,
    u: VertexSet,
    w: VertexSet,
    eps: float,
    *,
    side_cap: int = DEFAULT_SIDE_CAP,
    executor: Executor | None = None,
) -> PairVerdict:
    """Exhaustive sub-pair scan; the worst witness maximizes |d(A, B) - d(U, W)|.

    Sub-pairs range over A in U, B in W with |A| >= max(1, ceil(eps |U|)) and
    |B| >= max(1, ceil(eps |W|)).

    Args:
        g: Host graph.
        u: First side, nonempty and disjoint from ``w``.
        w: Second side.
        eps: Regularity parameter in (0, 1].
        side_cap: Largest side the exhaustive scan accepts.
        executor: Optional pool that splits the scan over subsets of ``u``.

    Returns:
        Verdict with the pair density, the worst deviation and its witness.

    Raises:
        CapacityError: If a side exceeds ``side_cap``.
    """
    _check_pair(g, u, w)
    if not 0 < eps <= 1:
        raise LabArgumentError(f"epsilon must lie in (0, 1], got {eps}")
    if len(u) > side_cap or len(w) > side_cap:
        raise CapacityError(f"exhaustive pair scan limited to sides of {side_cap}, got {len(u)} x {len(w)}")

    d = density(g, u, w)
    a_min = _min_size(eps, len(u))
    b_min = _min_size(eps, len(w))
    a_masks = []
    sub = u.members
    while sub:
        if popcount(sub) >= a_min:
            a_masks.append(sub)
        sub = (sub - 1) & u.members
    a_masks.reverse()
    w_list = w.to_list()

    if executor is None:
        results = [_scan((g.adj, a_masks, w_list, b_min, d))]
    else:
        chunk = max(1, len(a_masks) // 32)
        tasks = [(g.adj, a_masks[i : i + chunk], w_list, b_min, d) for i in range(0, len(a_masks), chunk)]
        results = list(executor.map(_scan, tasks))

    best_dev, best_a, best_b = max(results, key=lambda t: t[0])
    witness = None
    if best_a:
        a_list = list(iter_bits(best_a))
        sub_d = sum(popcount(g.adj[x] & best_a) for x in best_b) / (len(a_list) * len(best_b))
        witness = SubPairWitness(a_list, sorted(best_b), sub_d, best_dev)
    return PairVerdict(best_dev <= eps + _SLACK, d, witness, eps)


def irregular_pairs(
    g: Graph, parts: PartitionVec, eps: float, *, side_cap: int = DEFAULT_SIDE_CAP
) -> list[tuple[int, int]]:
    classes = parts.classes()
    found = []
    for i in range(parts.r):
        for j in range(i + 1, parts.r):
            if not classes[i] or not classes[j]:
                continue
            if not is_regular_pair(g, classes[i], classes[j], eps, side_cap=side_cap).regular:
                found.append((i, j))
    return found


def partition_irregularity(g: Graph, parts: PartitionVec, eps: float, *, side_cap: int = DEFAULT_SIDE_CAP) -> float:
    """Irregular mass sum |V_i||V_j| / n^2; the partition is eps-regular iff this is <= eps.

    Args:
        g: Host graph.
        parts: Partition of V(g); empty classes are skipped.
        eps: Regularity parameter.
        side_cap: Largest class the pair scan accepts.

    Returns:
        The irregular mass as a fraction of n^2.
    """
    if parts.n != g.n:
        raise LabArgumentError(f"partition covers {parts.n} vertices, graph has {g.n}")
    sizes = parts.sizes
    mass = sum(sizes[i] * sizes[j] for i, j in irregular_pairs(g, parts, eps, side_cap=side_cap))
    return mass / (g.n * g.n)


@dataclass
class RegularPartitionSearch:
    """Outcome of the exhaustive search for an eps-regular partition with few parts."""

    partition: PartitionVec | None
    irregularity: float | None
    partitions_tried: int

    def to_dict(self) -> dict[str, Any]:
        return {
            "partition": self.partition.to_dict() if self.partition else None,
            "irregularity": self.irregularity,
            "partitions_tried": self.partitions_tried,
        }


def _set_partitions(n: int, k: int) -> Iterator[tuple[int, ...]]:
    """Restricted-growth strings of length n using exactly k classes."""
    assignment = [0] * n

    def extend(v: int, used: int) -> Iterator[tuple[int, ...]]:
        if v == n:
            if used == k:
                yield tuple(assignment)
            return
        if n - v < k - used:
            return
        for c in range(min(used + 1, k)):
            assignment[v] = c
            yield from extend(v + 1, max(used, c + 1))

    return extend(0, 0)


def search_regular_partition(
    g: Graph, eps: float, max_parts: int, *, cap: int = DEFAULT_SEARCH_CAP
) -> RegularPartitionSearch:
    """Fewest-part eps-regular partition into 2..max_parts nonempty classes (diagnostic, tiny n only)."""
    if g.n > cap:
        raise CapacityError(f"regular-partition search limited to {cap} vertices, got {g.n}")
    if max_parts < 2:
        raise LabArgumentError(f"need max_parts >= 2, got {max_parts}")
    tried = 0
    for k in range(2, min(max_parts, g.n) + 1):
        for candidate in _set_partitions(g.n, k):
            tried += 1
            parts = PartitionVec(candidate, k)
            value = partition_irregularity(g, parts, eps)
            if value <= eps + _SLACK:
                logger.info(f"eps-regular partition into {k} parts after {tried} candidates")
                return RegularPartitionSearch(parts, value, tried)
    return RegularPartitionSearch(None, None, tried)


@dataclass
class EdgePremise:
    edge: tuple[int, int]
    regular: bool
    density: float
    density_ok: bool

    def to_dict(self) -> dict[str, Any]:
        return {"edge": list(self.edge), "regular": self.regular, "density": self.density, "density_ok": self.density_ok}


@dataclass
class CountingPremiseReport:
    """Premises of the counting lemma per F-edge and F-vertex, plus a class-respecting embedding search."""

    epsilon: float
    max_degree: int
    density_threshold: float
    size_threshold: float
    edges: list[EdgePremise] = field(default_factory=list)
    class_sizes: list[int] = field(default_factory=list)
    embedding: list[int] | None = None

    @property
    def threshold_feasible(self) -> bool:
        return self.density_threshold <= 1

    @property
    def sizes_ok(self) -> bool:
        return all(s >= self.size_threshold for s in self.class_sizes)

    @property
    def premises_hold(self) -> bool:
        return self.sizes_ok and all(e.regular and e.density_ok for e in self.edges)

    def to_dict(self) -> dict[str, Any]:
        return {
            "epsilon": self.epsilon,
            "max_degree": self.max_degree,
            "density_threshold": self.density_threshold,
            "threshold_feasible": self.threshold_feasible,
            "size_threshold": self.size_threshold,
            "class_sizes": self.class_sizes,
            "sizes_ok": self.sizes_ok,
            "edges": [e.to_dict() for e in self.edges],
            "premises_hold": self.premises_hold,
            "embedding": self.embedding,
        }


def counting_premise(
    g: Graph,
    class_map: Sequence[VertexSet],
    eps: float,
    f: Graph,
    *,
    side_cap: int = DEFAULT_SIDE_CAP,
) -> CountingPremiseReport:
    """Evaluate regularity, density and size premises, then search for an embedding X_i -> F-vertex i.

    Args:
        g: Host graph.
        class_map: One nonempty class of V(g) per F-vertex.
        eps: Regularity parameter.
        f: Pattern graph.
        side_cap: Largest class the pair scan accepts.

    Returns:
        Per-edge pair verdicts, the density threshold, the size premise and the
        class-respecting embedding found, if any.
    """
    if len(class_map) != f.n:
        raise LabArgumentError(f"need one class per F-vertex ({f.n}), got {len(class_map)}")
    if not 0 < eps <= 1:
        raise LabArgumentError(f"epsilon must lie in (0, 1], got {eps}")
    for i, x in enumerate(class_map):
        if x.n != g.n or not x:
            raise LabArgumentError(f"class {i} must be a nonempty vertex set of the graph")
        for j in range(i):
            if not x.isdisjoint(class_map[j]):
                raise LabArgumentError(f"classes {j} and {i} overlap")
    delta = f.max_degree()
    if delta < 1:
        raise LabArgumentError("forbidden graph needs at least one edge")

    report = CountingPremiseReport(
        epsilon=eps,
        max_degree=delta,
        density_threshold=(delta + 1) * eps ** (1 / delta),
        size_threshold=f.n / eps,
        class_sizes=[len(x) for x in class_map],
    )
    for i, j in f.edges():
        verdict = is_regular_pair(g, class_map[i], class_map[j], eps, side_cap=side_cap)
        report.edges.append(
            EdgePremise((i, j), verdict.regular, verdict.pair_density, verdict.pair_density >= report.density_threshold)
        )

    witness = contains(g, f, [x.members for x in class_map])
    report.embedding = list(witness.mapping) if witness else None
    if report.premises_hold and witness is None:
        raise InvariantViolation("counting premises hold but no class-respecting embedding exists")
    logger.debug(f"counting premises hold={report.premises_hold}, embedding={report.embedding}")
    return report


async def load_fixture(graph_path: Path, classes_path: Path) -> tuple[Graph, list[VertexSet]]:
    """Read a graph6 file (first nonblank line) and a class file of space-separated vertex indices."""
    async with aiofiles.open(graph_path) as f:
        graph_text = await f.read()
    lines = [line.strip() for line in graph_text.splitlines() if line.strip()]
    if not lines:
        raise LabArgumentError(f"{graph_path} holds no graph6 line")
    g = graph6_decode(lines[0])

    async with aiofiles.open(classes_path) as f:
        class_text = await f.read()
    classes = []
    for lineno, line in enumerate(class_text.splitlines(), start=1):
        if not line.strip():
            continue
        try:
            members = [int(tok) for tok in line.split()]
        except ValueError as e:
            raise LabArgumentError(f"{classes_path}:{lineno}: vertex indices must be integers") from e
        classes.append(VertexSet.of(g.n, members))
    logger.info(f"Loaded fixture {graph_path.name}: n={g.n}, {len(classes)} classes")
    return g, classes
