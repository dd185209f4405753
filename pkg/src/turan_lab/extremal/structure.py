"""Optimal r-partitions and the in/out decomposition of near-Turán graphs.

For a partition V_1..V_r of V(G), G_in holds the edges inside classes and
G_out the missing edges between classes. A_i are the vertices of V_i with a
neighbour inside V_i and B_i = V_i minus A_i.
"""

import logging
import math
from collections.abc import Sequence
from concurrent.futures import Executor
from dataclasses import dataclass, field
from typing import Any

from ..core.config import Settings, get_settings
from ..core.containment import contains
from ..core.errors import CapacityError, InvariantViolation, LabArgumentError, PreconditionError, RecordMismatchError
from ..core.graph import Graph, PartitionVec, VertexSet, edge_counts, iter_bits, popcount
from ..core.spectral import q_radius, turan_edges, turan_perron_min
from .enumeration import ExtremalRecord, canonical_graph6

logger = logging.getLogger(__name__)

_Task = tuple[tuple[int, ...], int, int, tuple[int, ...], tuple[int, ...], bool]


@dataclass
class InequalityCheck:
    name: str
    statement: str
    passed: bool
    lhs: float
    rhs: float

    @property
    def margin(self) -> float:
        return self.rhs - self.lhs

    def to_dict(self) -> dict[str, Any]:
        return {
            "name": self.name,
            "statement": self.statement,
            "passed": self.passed,
            "lhs": self.lhs,
            "rhs": self.rhs,
        }


def _le(name: str, statement: str, lhs: float, rhs: float) -> InequalityCheck:
    return InequalityCheck(name, statement, lhs <= rhs, float(lhs), float(rhs))


@dataclass
class OptimalPartition:
    """A partition minimizing the total number of edges inside classes."""

    partition: PartitionVec
    internal_edges: int
    minimizers: int
    method: str

    @property
    def unique(self) -> bool:
        return self.minimizers == 1

    def to_dict(self) -> dict[str, Any]:
        return {
            "partition": self.partition.to_dict(),
            "internal_edges": self.internal_edges,
            "minimizers": self.minimizers,
            "unique": self.unique,
            "method": self.method,
        }


def _branch(task: _Task) -> tuple[float, int, tuple[int, ...] | None]:
    """Best cost, minimizer count and first minimizer below one fixed prefix."""
    adj, n, r, order, prefix, look_ahead = task
    assign = [-1] * n
    masks = [0] * r
    cost = used = 0
    for depth, c in enumerate(prefix):
        v = order[depth]
        cost += popcount(adj[v] & masks[c])
        masks[c] |= 1 << v
        assign[v] = c
        used = max(used, c + 1)

    best_cost: float = math.inf
    best_count = 0
    best_assign: tuple[int, ...] | None = None

    def descend(depth: int, cost: int, used: int) -> None:
        nonlocal best_cost, best_count, best_assign
        if look_ahead and used == r:
            bound = cost
            for d in range(depth, n):
                w = order[d]
                bound += min(popcount(adj[w] & m) for m in masks)
                if bound > best_cost:
                    return
        if depth == n:
            if cost < best_cost:
                best_cost, best_count, best_assign = cost, 1, tuple(assign)
            elif cost == best_cost:
                best_count += 1
            return
        v = order[depth]
        for c in range(min(used + 1, r)):
            step = cost + popcount(adj[v] & masks[c])
            if step > best_cost:
                continue
            masks[c] |= 1 << v
            assign[v] = c
            descend(depth + 1, step, max(used, c + 1))
            masks[c] &= ~(1 << v)
        assign[v] = -1

    descend(len(prefix), cost, used)
    return best_cost, best_count, best_assign


def _prefixes(length: int, r: int) -> list[tuple[int, ...]]:
    """Restricted-growth strings of the given length over r classes."""
    out: list[tuple[int, ...]] = [()]
    for _ in range(length):
        out = [p + (c,) for p in out for c in range(min(max(p, default=-1) + 2, r))]
    return out


def _relabel_by_least_vertex(assignment: Sequence[int]) -> tuple[int, ...]:
    mapping: dict[int, int] = {}
    for c in assignment:
        if c not in mapping:
            mapping[c] = len(mapping)
    return tuple(mapping[c] for c in assignment)


def min_internal_partition(
    g: Graph,
    r: int,
    *,
    settings: Settings | None = None,
    executor: Executor | None = None,
) -> OptimalPartition:
    """Exact max-r-cut: minimize the sum of e(V_i), counting minimizers up to class relabeling.

    Small graphs are searched exhaustively over restricted-growth labelings;
    above ``exhaustive_partition_cap`` a branch-and-bound with the same
    counting rule takes over.

    Args:
        g: Graph with at least one vertex.
        r: Class count, at least 2.
        settings: Caps for the search; the process settings when None.
        executor: Optional pool that splits the search by the first labels.

    Returns:
        The optimum, the number of minimizers and the method used.

    Raises:
        CapacityError: Above ``partition_vertex_cap`` vertices.
    """
    settings = settings or get_settings()
    if r < 2:
        raise LabArgumentError(f"need r >= 2 classes, got {r}")
    if g.n < 1:
        raise LabArgumentError("cannot partition an empty vertex set")
    if g.n > settings.partition_vertex_cap:
        raise CapacityError(f"exact partition search limited to {settings.partition_vertex_cap} vertices, got {g.n}")

    look_ahead = g.n > settings.exhaustive_partition_cap
    method = "branch-and-bound" if look_ahead else "exhaustive"
    order = tuple(sorted(range(g.n), key=lambda v: (-g.degree(v), v)))

    if executor is None:
        results = [_branch((g.adj, g.n, r, order, (), look_ahead))]
    else:
        depth = -(-g.n // 2)
        tasks = [(g.adj, g.n, r, order, p, look_ahead) for p in _prefixes(depth, r)]
        results = list(executor.map(_branch, tasks, chunksize=16))

    best = min(cost for cost, _, _ in results)
    count = sum(k for cost, k, _ in results if cost == best)
    first = next(a for cost, _, a in results if cost == best and a is not None)
    assignment = _relabel_by_least_vertex(first)
    counts = edge_counts(g, PartitionVec(assignment, r))
    partition = PartitionVec(assignment, r, counts)
    if sum(counts.internal) != best:
        raise InvariantViolation("partition tallies disagree with the search cost")
    logger.debug(f"max-{r}-cut on n={g.n}: internal={best}, minimizers={count} ({method})")
    return OptimalPartition(partition, int(best), count, method)


def partitions_within(g: Graph, r: int, c0: int, cap: int) -> int:
    """Number of partitions (up to relabeling) with every e(V_i) <= c0."""
    if g.n > cap:
        raise CapacityError(f"partition counting limited to {cap} vertices, got {g.n}")
    masks = [0] * r
    internal = [0] * r
    found = 0

    def descend(v: int, used: int) -> None:
        nonlocal found
        if v == g.n:
            found += 1
            return
        for c in range(min(used + 1, r)):
            extra = popcount(g.adj[v] & masks[c])
            if internal[c] + extra > c0:
                continue
            masks[c] |= 1 << v
            internal[c] += extra
            descend(v + 1, max(used, c + 1))
            internal[c] -= extra
            masks[c] &= ~(1 << v)

    descend(0, 0)
    return found


@dataclass
class StabilityFindings:
    """Desk-scale readings of the stability chain for one spectral extremal graph."""

    q: float
    ex_ssp: float
    balanced: bool
    perron_min: float
    c3_fitted: float
    turan_perron_min: float | None
    edges_equal_ex: bool
    in_ex: bool
    c2: int | None
    c2_window_ok: bool | None
    saturated: bool | None

    def to_dict(self) -> dict[str, Any]:
        return dict(self.__dict__)


@dataclass
class StructureReport:
    """In/out decomposition of one graph against one partition."""

    n: int
    r: int
    e: int
    c0: int
    partition: PartitionVec
    class_internal: tuple[int, ...]
    e_in: int
    e_out: int
    cross_present: int
    balance_gap: int
    a_sets: list[list[int]]
    b_sets: list[list[int]]
    max_out_degree: int
    min_degree: int
    q: float
    perron_min: float
    checks: list[InequalityCheck] = field(default_factory=list)
    c0_partitions: int | None = None
    stability: StabilityFindings | None = None

    @property
    def all_passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def to_dict(self) -> dict[str, Any]:
        return {
            "n": self.n,
            "r": self.r,
            "e": self.e,
            "c0": self.c0,
            "partition": self.partition.to_dict(),
            "class_internal": list(self.class_internal),
            "e_in": self.e_in,
            "e_out": self.e_out,
            "cross_present": self.cross_present,
            "balance_gap": self.balance_gap,
            "a_sets": self.a_sets,
            "b_sets": self.b_sets,
            "max_out_degree": self.max_out_degree,
            "min_degree": self.min_degree,
            "q": self.q,
            "perron_min": self.perron_min,
            "checks": [c.to_dict() for c in self.checks],
            "c0_partitions": self.c0_partitions,
            "stability": self.stability.to_dict() if self.stability else None,
        }


def decompose(
    g: Graph,
    p: PartitionVec,
    c0: int,
    *,
    settings: Settings | None = None,
    count_partitions: bool = True,
) -> StructureReport:
    """Populate G_in/G_out tallies, A_i/B_i and the c0 inequalities for ``p``.

    Args:
        g: Host graph.
        p: Partition of V(g).
        c0: Nonnegative constant of the edge excess.
        settings: Caps for the partition count; the process settings when None.
        count_partitions: Also count partitions with every e(V_i) <= c0.

    Returns:
        The report with its named checks.
    """
    settings = settings or get_settings()
    if p.n != g.n:
        raise LabArgumentError(f"partition covers {p.n} vertices, graph has {g.n}")
    if c0 < 0:
        raise LabArgumentError(f"c0 must be nonnegative, got {c0}")
    counts = edge_counts(g, p)
    masks = p.masks()
    r = p.r
    n = g.n
    full = (1 << n) - 1

    e_in = sum(counts.internal)
    e_out = sum(counts.cross_missing.values())
    cross_present = sum(counts.cross.values())
    sizes = p.sizes
    all_cross_pairs = sum(sizes[i] * sizes[j] for i in range(r) for j in range(i + 1, r))

    a_sets: list[list[int]] = []
    b_sets: list[list[int]] = []
    b_joined = True
    out_degrees = []
    for c, mask in enumerate(masks):
        a_mask = 0
        for v in iter_bits(mask):
            if g.adj[v] & mask:
                a_mask |= 1 << v
        b_mask = mask & ~a_mask
        a_sets.append(list(iter_bits(a_mask)))
        b_sets.append(list(iter_bits(b_mask)))
        outside = full & ~mask
        for v in iter_bits(mask):
            missing = popcount(outside & ~g.adj[v])
            out_degrees.append(missing)
            if b_mask >> v & 1 and missing:
                b_joined = False

    max_out = max(out_degrees, default=0)
    min_deg = g.min_degree()
    spectral = q_radius(g, settings.spectral_tol)

    checks = [
        _le("class_internal", "e(V_i) <= c0 for every class", max(counts.internal, default=0), c0),
        _le("in_minus_out", "e(G_in) - e(G_out) <= c0", e_in - e_out, c0),
        _le("a_set_size", "|A_i| <= 2 c0 for every class", max((len(a) for a in a_sets), default=0), 2 * c0),
        _le("out_edges", "e(G_out) <= 2 (r-1) r c0^2", e_out, 2 * (r - 1) * r * c0 * c0),
        _le("out_degree", "d_{G_out}(v) <= c0 + 1 for every vertex", max_out, c0 + 1),
        InequalityCheck("b_joined", "every B_i vertex is adjacent to all of V minus V_i", b_joined, 0.0, 0.0),
        _le("min_degree", "floor((1 - 1/r) n) <= minimum degree", (r - 1) * n // r, min_deg),
    ]
    if e_in + cross_present != g.num_edges or cross_present + e_out != all_cross_pairs:
        raise InvariantViolation("edge tallies do not reconcile with e(G) and the cross-pair total")

    c0_partitions = None
    if count_partitions and n <= settings.exhaustive_partition_cap:
        c0_partitions = partitions_within(g, r, c0, settings.exhaustive_partition_cap)

    return StructureReport(
        n=n,
        r=r,
        e=g.num_edges,
        c0=c0,
        partition=PartitionVec(p.assignment, r, counts),
        class_internal=counts.internal,
        e_in=e_in,
        e_out=e_out,
        cross_present=cross_present,
        balance_gap=p.balance_gap,
        a_sets=a_sets,
        b_sets=b_sets,
        max_out_degree=max_out,
        min_degree=min_deg,
        q=spectral.radius,
        perron_min=spectral.perron_min,
        checks=checks,
        c0_partitions=c0_partitions,
    )


@dataclass
class FurediResult:
    h0: Graph
    t: int
    partition: OptimalPartition
    bound_ok: bool

    def to_dict(self) -> dict[str, Any]:
        return {
            "t": self.t,
            "h0_edges": self.h0.num_edges,
            "bound_ok": self.bound_ok,
            "partition": self.partition.to_dict(),
        }


def furedi_subgraph(g: Graph, p: int, *, settings: Settings | None = None) -> FurediResult:
    """Keep only the cross edges of a max-p-cut and compare with e(G) - (t_p(n) - e(G))."""
    if p < 2:
        raise LabArgumentError(f"need p >= 2, got {p}")
    witness = contains(g, Graph.complete(p + 1))
    if witness is not None:
        raise PreconditionError(f"graph contains K_{p + 1} at {witness.mapping}")
    t = turan_edges(g.n, min(p, g.n)) - g.num_edges
    if t < 0:
        raise InvariantViolation(f"K_{p + 1}-free graph with {g.num_edges} edges exceeds the Turán number")
    optimum = min_internal_partition(g, p, settings=settings)
    masks = optimum.partition.masks()
    rows = list(g.adj)
    for mask in masks:
        for v in iter_bits(mask):
            rows[v] &= ~mask
    h0 = Graph(g.n, tuple(rows))
    return FurediResult(h0, t, optimum, h0.num_edges >= g.num_edges - t)


def intersection_bound_check(sets: Sequence[VertexSet]) -> bool:
    """|V_1 ∩ ... ∩ V_p| >= sum |V_i| - (p-1) |V_1 ∪ ... ∪ V_p|."""
    if not sets:
        raise LabArgumentError("need at least one set")
    common = sets[0]
    union = sets[0]
    for s in sets[1:]:
        common = common & s
        union = union | s
    return len(common) >= sum(len(s) for s in sets) - (len(sets) - 1) * len(union)


def c2_constant(n: int, r: int, c0: int) -> int:
    """Smallest integer above ceil(3 sqrt((r+1)^2/2 + 2 r c0 (r^8-r^7+r^4)/(r^3-2)^2)) with r | n + c2."""
    if r < 2:
        raise LabArgumentError(f"need r >= 2, got {r}")
    inner = (r + 1) ** 2 / 2 + 2 * r * c0 * (r**8 - r**7 + r**4) / (r**3 - 2) ** 2
    c2 = math.ceil(3 * math.sqrt(inner)) + 1
    while (n + c2) % r:
        c2 += 1
    return c2


def c2_window(n: int, r: int, c2: int) -> tuple[float, float]:
    """Open lower and closed upper limits for the class sizes: ((n-(r-1)c2)/r, (n+(r-1)^2 c2)/r)."""
    return (n - (r - 1) * c2) / r, (n + (r - 1) ** 2 * c2) / r


def stability_chain(
    g: Graph,
    f: Graph,
    record: ExtremalRecord,
    *,
    c0: int | None = None,
    settings: Settings | None = None,
) -> StructureReport:
    """Check a member of Ex_ssp(n, F) for balance, Perron spread, edge count and Ex membership.

    Args:
        g: Graph on record.n vertices.
        f: Forbidden graph of the record.
        record: Exact record for (n, F).
        c0: Edge excess constant; max(record.c0_term, 0) when None.
        settings: Process settings when None.

    Returns:
        The decomposition of the optimal partition with stability findings attached.

    Raises:
        RecordMismatchError: If g or f does not belong to the record.
    """
    settings = settings or get_settings()
    if g.n != record.n:
        raise RecordMismatchError(f"graph has {g.n} vertices, record is for n={record.n}")
    if canonical_graph6(f) != record.f_g6:
        raise RecordMismatchError("forbidden graph does not match the record")
    code = canonical_graph6(g)
    if code not in record.ex_ssp_graphs:
        raise RecordMismatchError(f"{code} is not a spectral extremal graph of the record")
    r = record.r
    if r < 2:
        raise LabArgumentError(f"stability chain needs chi(F) >= 3, got r={r}")
    if c0 is None:
        c0 = max(record.c0_term or 0, 0)

    optimum = min_internal_partition(g, r, settings=settings)
    report = decompose(g, optimum.partition, c0, settings=settings)

    sizes = optimum.partition.sizes
    c2 = c2_constant(g.n, r, c0) if r <= g.n else None
    window_ok = None
    if c2 is not None:
        low, high = c2_window(g.n, r, c2)
        window_ok = low < min(sizes) and max(sizes) <= high
    report.stability = StabilityFindings(
        q=report.q,
        ex_ssp=record.ex_ssp,
        balanced=report.balance_gap <= 1,
        perron_min=report.perron_min,
        c3_fitted=g.n * (1 - report.perron_min),
        turan_perron_min=turan_perron_min(g.n, r) if r <= g.n else None,
        edges_equal_ex=g.num_edges == record.ex,
        in_ex=code in record.ex_graphs,
        c2=c2,
        c2_window_ok=window_ok,
        saturated=record.ex_ssp_saturated.get(code),
    )
    logger.info(
        f"stability chain n={g.n}: gap={report.balance_gap}, e={g.num_edges} vs ex={record.ex}, "
        f"in Ex={report.stability.in_ex}"
    )
    return report
