"""Isomorph-free generation of F-free graphs and exact Turán records.

Graphs grow one vertex at a time. A child is kept only when its canonical
labeling (nauty, via pynauty) names a vertex in the orbit of the new vertex as
the one to delete, so each isomorphism class has exactly one parent class.
"""

import logging
from collections.abc import Iterator, Sequence
from concurrent.futures import Executor
from dataclasses import asdict, dataclass, field
from typing import Any

import pynauty

from ..core.config import ENUMERATION_HARD_CAP, Settings, get_settings
from ..core.containment import contains, contains_through, forbidden_r, is_saturated
from ..core.errors import BudgetExhaustedError, CapacityError, InvariantViolation, LabArgumentError
from ..core.graph import Graph, iter_bits
from ..core.graph6 import graph6_decode, graph6_encode
from ..core.spectral import is_spectral_tie, q_radius, turan_edges

logger = logging.getLogger(__name__)


def nauty_graph(g: Graph) -> pynauty.Graph:
    return pynauty.Graph(
        g.n,
        directed=False,
        adjacency_dict={v: list(iter_bits(g.adj[v])) for v in range(g.n)},
    )


def canonical_form(g: Graph) -> Graph:
    """Relabel ``g`` so that canonical position i holds vertex ``lab[i]``."""
    if g.n <= 1:
        return g
    lab = pynauty.canon_label(nauty_graph(g))
    perm = [0] * g.n
    for position, v in enumerate(lab):
        perm[v] = position
    return g.relabel(perm)


def canonical_graph6(g: Graph) -> str:
    return graph6_encode(canonical_form(g))


def orbit_representatives(f: Graph) -> tuple[int, ...]:
    """One vertex per automorphism orbit of ``f``."""
    if f.n < 2:
        return tuple(range(f.n))
    orbits = pynauty.autgrp(nauty_graph(f))[3]
    return tuple(sorted(set(orbits)))


def _expand_parent(task: tuple[Graph, Graph | None, tuple[int, ...]]) -> tuple[list[Graph], int]:
    """All accepted children of one parent, canonically labeled and deduplicated."""
    parent, f, anchors = task
    m = parent.n + 1
    new = m - 1
    accepted: dict[bytes, Graph] = {}
    expansions = 0
    for subset in range(1 << parent.n):
        expansions += 1
        rows = [row | ((subset >> v & 1) << new) for v, row in enumerate(parent.adj)]
        rows.append(subset)
        child = Graph.trusted(m, rows)
        if f is not None and contains_through(child, f, new, anchors) is not None:
            continue
        if m == 1:
            accepted[b""] = child
            continue
        ng = nauty_graph(child)
        orbits = pynauty.autgrp(ng)[3]
        lab = pynauty.canon_label(ng)
        if orbits[new] != orbits[lab[-1]]:
            continue
        certificate = pynauty.certificate(ng)
        if certificate in accepted:
            continue
        perm = [0] * m
        for position, v in enumerate(lab):
            perm[v] = position
        accepted[certificate] = child.relabel(perm)
    return list(accepted.values()), expansions


def _grow_levels(
    n: int,
    f: Graph | None,
    budget: int,
    executor: Executor | None,
) -> Iterator[list[Graph]]:
    anchors = orbit_representatives(f) if f is not None else ()
    parents = [Graph.empty(0)]
    yield parents
    expansions = 0
    for m in range(1, n + 1):
        tasks = [(p, f, anchors) for p in parents]
        results = executor.map(_expand_parent, tasks) if executor is not None else map(_expand_parent, tasks)
        children: list[Graph] = []
        for done, (accepted, spent) in enumerate(results, start=1):
            children.extend(accepted)
            expansions += spent
            if expansions > budget:
                raise BudgetExhaustedError(
                    f"enumeration budget of {budget} expansions exhausted at order {m}",
                    {
                        "order": m,
                        "parents_done": done,
                        "parents_total": len(parents),
                        "expansions": expansions,
                        "classes_so_far": len(children),
                    },
                )
        keyed = sorted(((graph6_encode(c), c) for c in children), key=lambda item: item[0])
        for (code, _), (following, _) in zip(keyed, keyed[1:]):
            if code == following:
                raise InvariantViolation(f"duplicate canonical form {code} at order {m}")
        logger.debug(f"order {m}: {len(keyed)} classes from {len(parents)} parents")
        parents = [c for _, c in keyed]
        yield parents


def enumerate_levels(
    n: int,
    f: Graph | None = None,
    *,
    budget: int | None = None,
    max_n: int | None = None,
    executor: Executor | None = None,
) -> Iterator[list[Graph]]:
    """Stream the F-free classes of every order 0..n, one level at a time.

    Only the level being extended is held; each yielded level is sorted by
    canonical graph6. Arguments are checked before the first level is built.

    Args:
        n: Largest order to generate.
        f: Forbidden graph, or None for all graphs.
        budget: Node expansion budget over the whole run; defaults to the settings value.
        max_n: Order cap; defaults to ``max_enumeration_n``.
        executor: Optional pool that expands parents in parallel.

    Returns:
        An iterator yielding n + 1 levels, level m holding the order-m classes.

    Raises:
        CapacityError: If n exceeds the cap.
        BudgetExhaustedError: While iterating, once the budget is spent.
    """
    settings = get_settings()
    cap = settings.max_enumeration_n if max_n is None else max_n
    budget = settings.enumeration_budget if budget is None else budget
    if n < 0:
        raise LabArgumentError(f"vertex count must be nonnegative, got {n}")
    if n > min(cap, ENUMERATION_HARD_CAP):
        raise CapacityError(f"enumeration limited to n <= {min(cap, ENUMERATION_HARD_CAP)}, got {n}")
    if f is not None and f.n < 1:
        raise LabArgumentError("forbidden graph needs at least one vertex")
    return _grow_levels(n, f, budget, executor)


def enumerate_ffree(
    n: int,
    f: Graph | None = None,
    *,
    budget: int | None = None,
    max_n: int | None = None,
    executor: Executor | None = None,
) -> Iterator[Graph]:
    """One canonical representative per isomorphism class of F-free graphs on n vertices."""
    level: list[Graph] = []
    for level in enumerate_levels(n, f, budget=budget, max_n=max_n, executor=executor):
        pass
    yield from level


def count_classes(n: int, f: Graph | None = None, **kwargs: Any) -> int:
    return sum(1 for _ in enumerate_ffree(n, f, **kwargs))


@dataclass
class ExtremalRecord:
    """Exact Turán and spectral Turán data for one (n, F) pair."""

    n: int
    f_g6: str
    r: int
    ex: int
    ex_graphs: list[str]
    ex_ssp: float
    ex_ssp_graphs: list[str]
    c0_term: int | None
    class_count: int
    f_label: str = ""
    q_values: dict[str, float] = field(default_factory=dict)
    near_ties: list[dict[str, Any]] = field(default_factory=list)
    ex_ssp_saturated: dict[str, bool] = field(default_factory=dict)
    min_degree_eps: float = 0.1
    min_degree_count: int = 0
    min_degree_q: float | None = None
    saturated_count: int = 0
    saturated_min_edges: int | None = None
    saturated_max_edges: int | None = None

    @property
    def ex_ssp_within_ex(self) -> bool:
        return set(self.ex_ssp_graphs) <= set(self.ex_graphs)

    @property
    def turan_density(self) -> float:
        return 1 - 1 / self.r if self.r >= 1 else 0.0

    def ex_graph_objects(self) -> list[Graph]:
        return [graph6_decode(code) for code in self.ex_graphs]

    def ex_ssp_graph_objects(self) -> list[Graph]:
        return [graph6_decode(code) for code in self.ex_ssp_graphs]

    def to_dict(self) -> dict[str, Any]:
        return asdict(self)

    @classmethod
    def from_dict(cls, data: dict[str, Any]) -> "ExtremalRecord":
        fields = {k: v for k, v in data.items() if k in cls.__dataclass_fields__}
        return cls(**fields)


def _verify_record(record: ExtremalRecord, f: Graph, tol: float) -> None:
    listed = set(record.ex_graphs) | set(record.ex_ssp_graphs)
    for code in listed:
        g = graph6_decode(code)
        if contains(g, f) is not None:
            raise InvariantViolation(f"listed extremal graph {code} contains the forbidden graph")
    for code in record.ex_graphs:
        if graph6_decode(code).num_edges != record.ex:
            raise InvariantViolation(f"{code} does not have ex={record.ex} edges")
    if record.saturated_max_edges is not None and record.saturated_max_edges > record.ex:
        raise InvariantViolation(
            f"an F-saturated graph has {record.saturated_max_edges} edges, above ex={record.ex}"
        )
    if record.n and record.ex_ssp < 4 * record.ex / record.n - tol:
        raise InvariantViolation(f"ex_ssp={record.ex_ssp} below 4 ex / n = {4 * record.ex / record.n}")


def extremal_record(
    n: int,
    f: Graph,
    *,
    settings: Settings | None = None,
    executor: Executor | None = None,
    f_label: str = "",
) -> ExtremalRecord:
    """ex, Ex, ex_ssp and Ex_ssp for (n, F) from the F-free stream.

    The same pass counts the F-saturated graphs and the minimum-degree class.

    Args:
        n: Vertex count.
        f: Forbidden graph with at least one edge.
        settings: Budget, tolerances and epsilon; the process settings when None.
        executor: Optional pool for the enumeration.
        f_label: Human-readable name stored with the record.

    Returns:
        The verified record.

    Raises:
        BudgetExhaustedError: If the enumeration runs out of budget.
    """
    settings = settings or get_settings()
    r = forbidden_r(f, settings.chromatic_vertex_cap)
    graphs = list(
        enumerate_ffree(
            n,
            f,
            budget=settings.enumeration_budget,
            max_n=settings.max_enumeration_n,
            executor=executor,
        )
    )
    if not graphs:
        raise LabArgumentError(f"no F-free graph on {n} vertices; F must have at least one edge")

    ex = max(g.num_edges for g in graphs)
    radii: list[float] = [q_radius(g, settings.spectral_tol).radius if n else 0.0 for g in graphs]
    ex_ssp = max(radii)
    codes = [graph6_encode(g) for g in graphs]

    ex_graphs = [code for code, g in zip(codes, graphs) if g.num_edges == ex]
    ex_ssp_graphs = []
    near_ties = []
    for code, q in zip(codes, radii):
        if is_spectral_tie(q, ex_ssp, settings.tie_rel_tol):
            ex_ssp_graphs.append(code)
        elif is_spectral_tie(q, ex_ssp, settings.near_tie_rel_tol):
            near_ties.append({"graph6": code, "q": q, "gap": ex_ssp - q})
    if near_ties:
        logger.warning(f"n={n}: {len(near_ties)} graph(s) within the near-tie window of ex_ssp")

    pi = 1 - 1 / r if r >= 1 else 0.0
    threshold = (pi - settings.min_degree_eps) * n
    dense = [q for g, q in zip(graphs, radii) if g.min_degree() > threshold]

    listed = set(ex_graphs) | set(ex_ssp_graphs)
    q_values = {code: q for code, q in zip(codes, radii) if code in listed}
    anchors = orbit_representatives(f)
    saturated_edges = [
        g.num_edges for g in graphs if is_saturated(g, f, anchors=anchors, known_free=True)
    ]
    saturated = {code: is_saturated(graph6_decode(code), f) for code in ex_ssp_graphs}

    record = ExtremalRecord(
        n=n,
        f_g6=canonical_graph6(f),
        r=r,
        ex=ex,
        ex_graphs=ex_graphs,
        ex_ssp=ex_ssp,
        ex_ssp_graphs=ex_ssp_graphs,
        c0_term=ex - turan_edges(n, r) if 1 <= r <= n else None,
        class_count=len(graphs),
        f_label=f_label,
        q_values=q_values,
        near_ties=near_ties,
        ex_ssp_saturated=saturated,
        min_degree_eps=settings.min_degree_eps,
        min_degree_count=len(dense),
        min_degree_q=max(dense) if dense else None,
        saturated_count=len(saturated_edges),
        saturated_min_edges=min(saturated_edges, default=None),
        saturated_max_edges=max(saturated_edges, default=None),
    )
    _verify_record(record, f, settings.spectral_tol)
    logger.info(
        f"n={n}: {record.class_count} F-free classes, ex={ex}, ex_ssp={ex_ssp:.9f}, "
        f"|Ex|={len(ex_graphs)}, |Ex_ssp|={len(ex_ssp_graphs)}"
    )
    return record


@dataclass
class C0Sequence:
    """Finite prefix of ex(n, F) - t_r(n) and its supremum over the window."""

    r: int
    terms: list[tuple[int, int]]

    @property
    def window_sup(self) -> int | None:
        return max((t for _, t in self.terms), default=None)

    def to_dict(self) -> dict[str, Any]:
        return {"r": self.r, "terms": [list(t) for t in self.terms], "window_sup": self.window_sup}


def _records(
    f: Graph,
    ns: Sequence[int],
    settings: Settings,
    executor: Executor | None,
    known: dict[int, ExtremalRecord] | None,
) -> dict[int, ExtremalRecord]:
    records = dict(known or {})
    for n in ns:
        if n not in records:
            records[n] = extremal_record(n, f, settings=settings, executor=executor)
    return records


def c0_sequence(
    f: Graph,
    n_range: Sequence[int],
    *,
    settings: Settings | None = None,
    executor: Executor | None = None,
    known: dict[int, ExtremalRecord] | None = None,
) -> C0Sequence:
    """Terms ex(n, F) - t_r(n), r = chi(F) - 1, for each n in range with n >= r."""
    settings = settings or get_settings()
    r = forbidden_r(f, settings.chromatic_vertex_cap)
    ns = [n for n in n_range if n >= max(r, 1)]
    skipped = sorted(set(n_range) - set(ns))
    if skipped:
        logger.info(f"c0 sequence skips n={skipped} below r={r}")
    records = _records(f, ns, settings, executor, known)
    return C0Sequence(r, [(n, records[n].ex - turan_edges(n, r)) for n in ns])


@dataclass
class DensityHypothesisRow:
    """Both left-hand quantities of the density-growth hypotheses at one n."""

    n: int
    ex: int
    ex_prev: int
    pi: float
    increment_gap: float
    min_degree_q: float | None
    spectral_gap: float | None

    def to_dict(self) -> dict[str, Any]:
        return asdict(self)


def density_hypothesis_check(
    f: Graph,
    n_range: Sequence[int],
    *,
    settings: Settings | None = None,
    executor: Executor | None = None,
    known: dict[int, ExtremalRecord] | None = None,
) -> list[DensityHypothesisRow]:
    """|ex(n) - ex(n-1) - pi n| and |q(G_n) - 4 ex(n)/n| for each n; observed, never asserted."""
    settings = settings or get_settings()
    ns = sorted(n for n in set(n_range) if n >= 1)
    needed = sorted(set(ns) | {n - 1 for n in ns})
    records = _records(f, needed, settings, executor, known)
    rows = []
    for n in ns:
        current, previous = records[n], records[n - 1]
        pi = current.turan_density
        q = current.min_degree_q
        rows.append(
            DensityHypothesisRow(
                n=n,
                ex=current.ex,
                ex_prev=previous.ex,
                pi=pi,
                increment_gap=abs(current.ex - previous.ex - pi * n),
                min_degree_q=q,
                spectral_gap=None if q is None else abs(q - 4 * current.ex / n),
            )
        )
    return rows

