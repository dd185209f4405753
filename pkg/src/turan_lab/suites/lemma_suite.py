"""Inequality and identity sweeps behind ``verify-lemmas``.

Each sweep visits many instances and contributes one assert row carrying the
instance count, the number of violations, the worst margin (positive means
the statement held with room to spare) and graph6 codes of failing instances.
Asymptotic estimates are reported as observe rows.
"""

import logging
import math
import time
from collections.abc import Iterator
from concurrent.futures import Executor
from dataclasses import dataclass, field
from itertools import combinations, islice

import numpy as np

from ..core.config import Settings
from ..core.errors import InvariantViolation, LabError
from ..core.families import complete_multipartite, turan, turan_edge_window
from ..core.graph import Graph, PartitionVec, VertexSet, join
from ..core.graph6 import graph6_encode
from ..core.spectral import (
    a_radius,
    balancing_gap_bound,
    cai_fan_turan_q,
    eigencomponent_ratio,
    join_bound_terms,
    q_radius,
    quotient_left_perron,
    quotient_multipartite,
    rayleigh_q,
    rayleigh_split,
    spectral_upper_estimate,
    turan_edges,
    turan_perron_min,
    turan_q_lower_estimate,
    two_class_quotient_q,
    two_class_quotient_upper,
)
from ..extremal.enumeration import enumerate_levels
from ..extremal.structure import furedi_subgraph, intersection_bound_check
from .report import ExperimentConfig, LabReport

logger = logging.getLogger(__name__)

AGREEMENT = 1e-8
STRICT = 1e-12
MAX_FAILING_GRAPHS = 20

DEFAULT_MAX_N = 40
COMPOSITION_CAP = 24
MONOTONICITY_CAP = 8
FUREDI_CAPS = {2: 8, 3: 7}
RANDOM_JOIN_INSTANCES = 500
RANDOM_TRIPLES = 10_000


@dataclass
class Sweep:
    """Running tally of one inequality over many instances."""

    name: str
    anchor: str
    instances: int = 0
    violations: int = 0
    worst: float = math.inf
    failing: list[str] = field(default_factory=list)

    def add(self, margin: float, ok: bool, graph: Graph | None = None) -> None:
        self.instances += 1
        self.worst = min(self.worst, margin)
        if not ok:
            self.violations += 1
            if graph is not None and len(self.failing) < MAX_FAILING_GRAPHS:
                self.failing.append(graph6_encode(graph))

    def emit(self, report: LabReport, **values: object) -> None:
        if self.violations:
            logger.warning(f"{self.name}: {self.violations} of {self.instances} instances violate {self.anchor}")
        report.require(
            self.name,
            self.anchor,
            self.violations == 0,
            margin=self.worst if self.instances else None,
            graphs=self.failing,
            instances=self.instances,
            violations=self.violations,
            **values,
        )


def compositions(n: int, r: int) -> Iterator[tuple[int, ...]]:
    """Part sizes n_1 >= ... >= n_r >= 1 summing to n."""

    def extend(remaining: int, parts: int, cap: int) -> Iterator[tuple[int, ...]]:
        if parts == 0:
            if remaining == 0:
                yield ()
            return
        for first in range(min(cap, remaining - parts + 1), 0, -1):
            if first * parts < remaining:
                break
            for rest in extend(remaining - first, parts - 1, first):
                yield (first,) + rest

    return extend(n, r, n)


def _closed_form_turan(report: LabReport, max_n: int, tol: float) -> None:
    sweep = Sweep("closed_form_turan", "q(T_r(n)) matches its closed form, and equals 2(1-1/r)n when r | n")
    for r in range(2, 7):
        for n in range(r, max_n + 1):
            g = turan(r, n)
            closed = cai_fan_turan_q(n, r)
            gap = abs(q_radius(g, tol).radius - closed)
            if n % r == 0:
                gap = max(gap, abs(closed - 2 * (1 - 1 / r) * n))
            sweep.add(AGREEMENT - gap, gap <= AGREEMENT, g)
    sweep.emit(report, max_n=max_n)


def _bipartite_identity(report: LabReport, max_n: int, tol: float) -> None:
    sweep = Sweep("bipartite_identity", "q(K_{s,n-s}) = n")
    for n in range(2, max_n + 1):
        for s in range(1, n):
            g = complete_multipartite((s, n - s))
            gap = abs(q_radius(g, tol).radius - n)
            sweep.add(AGREEMENT - gap, gap <= AGREEMENT, g)
    sweep.emit(report, max_n=max_n)


def _quotient_sweeps(report: LabReport, max_n: int, tol: float) -> None:
    radius = Sweep("quotient_radius", "the quotient matrix of K_{n_1..n_r} has the same spectral radius")
    ratio = Sweep("perron_ratio", "Perron entries satisfy x_i / x_j = (q - n + 2 n_j) / (q - n + 2 n_i)")
    left = Sweep("left_perron", "left Perron vector of the quotient sums to 1 with every entry below 1/2 when q > n")
    for r in range(2, 6):
        for n in range(r, max_n + 1):
            for sizes in compositions(n, r):
                g = complete_multipartite(sizes)
                spectral = q_radius(g, tol)
                q = spectral.radius
                gap = abs(quotient_multipartite(sizes).radius() - q)
                radius.add(AGREEMENT - gap, gap <= AGREEMENT, g)

                starts = np.cumsum((0,) + sizes[:-1])
                worst = 0.0
                for i, j in combinations(range(r), 2):
                    observed = spectral.perron[starts[i]] / spectral.perron[starts[j]]
                    worst = max(worst, abs(observed - eigencomponent_ratio(sizes, i, j, q)))
                ratio.add(AGREEMENT - worst, worst <= AGREEMENT, g)

                if q > n + tol:
                    y = quotient_left_perron(sizes, q)
                    slack = min(0.5 - float(y.max()), AGREEMENT - abs(float(y.sum()) - 1))
                    left.add(slack, slack > 0, g)
    for sweep in (radius, ratio, left):
        sweep.emit(report, max_n=max_n)


def _balancing(report: LabReport, max_n: int) -> None:
    moves = Sweep(
        "balancing_increases_q",
        "moving a vertex from a part of size n_i to one of size n_j <= n_i - 2 strictly increases q",
    )
    gap = Sweep("turan_gap", "q(T_r(n)) > q(K_{n_1..n_r}) + 2(r-2)/(r^2 n) for every unbalanced partition")
    for r in (3, 4):
        for n in range(r, max_n + 1):
            q_turan = cai_fan_turan_q(n, r)
            bound = balancing_gap_bound(r, n)
            for sizes in compositions(n, r):
                if sizes[0] - sizes[-1] < 2:
                    continue
                q = quotient_multipartite(sizes).radius()
                g = complete_multipartite(sizes)
                for i, j in combinations(range(r), 2):
                    if sizes[i] - sizes[j] < 2:
                        continue
                    moved = list(sizes)
                    moved[i] -= 1
                    moved[j] += 1
                    margin = quotient_multipartite(sorted(moved, reverse=True)).radius() - q
                    moves.add(margin, margin > STRICT, g)
                margin = q_turan - q - bound
                gap.add(margin, margin > 0, g)
    moves.emit(report, max_n=max_n)
    gap.emit(report, max_n=max_n)


def _random_graph(n: int, p: float, rng: np.random.Generator) -> Graph:
    pairs = [(u, v) for u in range(n) for v in range(u + 1, n)]
    keep = rng.random(len(pairs)) < p
    return Graph.from_edges(n, (e for e, k in zip(pairs, keep) if k))


def _join_bound(report: LabReport, max_n: int, instances: int, rng: np.random.Generator, tol: float) -> None:
    bound = Sweep("join_bound", "q(G_1 ∨ G_2) < q(K̄_a ∨ G_2) + 4 c_1 (1-alpha) n / (q(G) - (1-alpha) n - 2 c_1)^2")
    order = Sweep("join_bound_order", "the q(G)-based join slack never exceeds the alpha n-based one")
    for _ in range(instances):
        a = int(rng.integers(2, 7))
        n = int(rng.integers(a + 1, max(max_n, a + 1) + 1))
        pairs = list(combinations(range(a), 2))
        e1 = int(rng.integers(0, min(3, (a - 1) // 2) + 1))
        chosen = rng.choice(len(pairs), size=e1, replace=False) if e1 else []
        g1 = Graph.from_edges(a, (pairs[k] for k in chosen))
        c1 = float(e1) if e1 else 0.5
        g2 = _random_graph(n - a, float(rng.uniform(0.2, 0.9)), rng)
        g = join(g1, g2)
        q_g = q_radius(g, tol).radius
        q_base = q_radius(join(Graph.empty(a), g2), tol).radius
        sharp, loose = join_bound_terms(q_g, c1, a, n)
        margin = q_base + sharp - q_g
        bound.add(margin, margin > 0, g)
        order.add(loose - sharp, sharp <= loose + STRICT, g)
    bound.emit(report)
    order.emit(report)


def _furedi(report: LabReport, max_n: int, settings: Settings, executor: Executor | None) -> None:
    sweep = Sweep("furedi_subgraph", "the cross edges H_0 of a max-p-cut satisfy e(H_0) >= e(G) - t")
    for p, cap in FUREDI_CAPS.items():
        levels = enumerate_levels(
            min(cap, max_n), Graph.complete(p + 1), budget=settings.enumeration_budget, executor=executor
        )
        for graphs in islice(levels, 2, None):
            for g in graphs:
                result = furedi_subgraph(g, p, settings=settings)
                margin = result.h0.num_edges - (g.num_edges - result.t)
                sweep.add(float(margin), result.bound_ok, g)
    sweep.emit(report, caps={f"K_{p + 1}": min(cap, max_n) for p, cap in FUREDI_CAPS.items()})


def _small_graph_properties(
    report: LabReport, max_n: int, rng: np.random.Generator, settings: Settings, executor: Executor | None
) -> None:
    mono = Sweep("edge_monotonicity", "adding an edge never decreases q")
    sandwich = Sweep("radius_sandwich", "2 lambda(G) <= q(G) <= 2 Delta(G)")
    rayleigh = Sweep("rayleigh_identity", "x^T Q x = sum over edges (x_i + x_j)^2")
    tol = settings.spectral_tol
    levels = enumerate_levels(max_n, budget=settings.enumeration_budget, executor=executor)
    for graphs in islice(levels, 1, None):
        for g in graphs:
            q = q_radius(g, tol).radius
            lam = a_radius(g, tol).radius
            slack = min(q - 2 * lam, 2 * g.max_degree() - q)
            sandwich.add(slack, slack >= -AGREEMENT, g)

            missing = g.non_edges()
            if missing:
                u, v = missing[int(rng.integers(len(missing)))]
                margin = q_radius(g.add_edge(u, v), tol).radius - q
                mono.add(margin, margin >= -AGREEMENT, g)

            x = rng.uniform(-1.0, 1.0, g.n)
            if np.any(x):
                edge_form = sum((x[i] + x[j]) ** 2 for i, j in g.edges()) / float(x @ x)
                gap = abs(rayleigh_q(g, x) - edge_form)
                rayleigh.add(AGREEMENT - gap, gap <= AGREEMENT, g)
    for sweep in (mono, sandwich, rayleigh):
        sweep.emit(report, max_n=max_n)


def _intersections(report: LabReport, count: int, rng: np.random.Generator) -> None:
    sweep = Sweep("intersection_bound", "|V_1 ∩ ... ∩ V_p| >= sum |V_i| - (p-1) |V_1 ∪ ... ∪ V_p|")
    universe = 12
    for _ in range(count):
        sets = [VertexSet(universe, int(rng.integers(0, 1 << universe))) for _ in range(3)]
        common, union = sets[0], sets[0]
        for s in sets[1:]:
            common, union = common & s, union | s
        margin = len(common) - (sum(len(s) for s in sets) - 2 * len(union))
        sweep.add(float(margin), intersection_bound_check(sets))
    sweep.emit(report, universe=universe, sets_per_instance=3)


def _edge_window(report: LabReport, max_n: int) -> None:
    sweep = Sweep("turan_edge_window", "(1-1/r) n^2/2 - r/8 <= t_r(n) <= (1-1/r) n^2/2")
    for r in range(2, 7):
        for n in range(r, max_n + 1):
            low, high = turan_edge_window(n, r)
            t = turan_edges(n, r)
            sweep.add(min(t - low, high - t), low - STRICT <= t <= high + STRICT)
    sweep.emit(report, max_n=max_n)


def _supplements(report: LabReport, max_n: int, rng: np.random.Generator, tol: float) -> None:
    two_class = Sweep("two_class_quotient", "closed form of q(K_{(n-(r-1)c2)/r, (n+c2)/r, ...}) and its upper estimate")
    for r in range(3, 6):
        for c2 in range(1, 4):
            for n in range((r - 1) * c2 + r, max_n + 1):
                if (n + c2) % r:
                    continue
                sizes = [(n - (r - 1) * c2) // r] + [(n + c2) // r] * (r - 1)
                g = complete_multipartite(sizes)
                closed = two_class_quotient_q(n, r, c2)
                gap = abs(q_radius(g, tol).radius - closed)
                margin = min(AGREEMENT - gap, two_class_quotient_upper(n, r, c2) - closed + STRICT)
                two_class.add(margin, margin >= 0, g)
    two_class.emit(report, max_n=max_n)

    perron = Sweep("turan_perron_min", "min Perron entry of T_r(n) matches its closed form and is at least 1 - 2/n")
    for r in range(2, 7):
        for n in range(r, min(max_n, 30) + 1):
            g = turan(r, n)
            closed = turan_perron_min(n, r)
            gap = abs(q_radius(g, tol).perron_min - closed)
            margin = min(AGREEMENT - gap, closed - (1 - 2 / n) + STRICT)
            perron.add(margin, margin >= 0, g)
    perron.emit(report, max_n=min(max_n, 30))

    split = Sweep("rayleigh_split", "x^T Q(G) x splits into the multipartite part plus G_in minus G_out")
    for _ in range(200):
        n = int(rng.integers(4, 15))
        r = int(rng.integers(2, 5))
        g = _random_graph(n, float(rng.uniform(0.3, 0.9)), rng)
        parts = PartitionVec(tuple(int(c) for c in rng.integers(0, r, n)), r)
        try:
            terms = rayleigh_split(g, parts, rng.uniform(0.0, 1.0, n))
        except InvariantViolation:
            split.add(-1.0, False, g)
        else:
            gap = abs(terms["total"] - (terms["multipartite"] + terms["inside"] - terms["missing"]))
            split.add(AGREEMENT - gap, True)
    split.emit(report)

    for r in range(2, 7):
        rows = []
        for n in (10, 20, 40, 80):
            if n > 64:
                q = cai_fan_turan_q(n, r)
            else:
                q = q_radius(turan(r, n), tol).radius
            estimate = turan_q_lower_estimate(n, r)
            rows.append({"n": n, "q": q, "estimate": estimate, "holds": q >= estimate})
        report.observe("turan_q_lower_estimate", "q(T_r(n)) >= 2(1-1/r)n - (r+1)^2/(n-2) for large n", r=r, rows=rows)

    for r in range(3, 5):
        rows = []
        for c0 in range(0, 3):
            for n in (20, 40, 80):
                rows.append({"n": n, "c0": c0, "estimate": spectral_upper_estimate(n, r, c0)})
        report.observe(
            "spectral_upper_estimate",
            "q(G) <= q(T_r(n)) + 4 r c0 (n - floor(n/r)) / (floor(n/r) - 2 c0)^2 near the extremal regime",
            r=r,
            rows=rows,
        )


def cmd_verify(
    config: ExperimentConfig,
    settings: Settings,
    *,
    executor: Executor | None = None,
) -> LabReport:
    """Run every inequality suite and record one row per suite."""
    report = LabReport("verify-lemmas", config.echo())
    max_n = max(config.n_values) if config.n_values else DEFAULT_MAX_N
    rng = np.random.default_rng(config.seed if "seed" in config.model_fields_set else settings.random_seed)
    tol = settings.spectral_tol
    timings: dict[str, float] = {}

    stages = [
        ("closed_form_turan", lambda: _closed_form_turan(report, max_n, tol)),
        ("bipartite_identity", lambda: _bipartite_identity(report, max_n, tol)),
        ("quotients", lambda: _quotient_sweeps(report, min(max_n, COMPOSITION_CAP), tol)),
        ("balancing", lambda: _balancing(report, min(max_n, COMPOSITION_CAP))),
        (
            "join_bound",
            lambda: _join_bound(
                report,
                min(max_n, COMPOSITION_CAP),
                int(config.params.get("instances", RANDOM_JOIN_INSTANCES)),
                rng,
                tol,
            ),
        ),
        ("furedi", lambda: _furedi(report, max_n, settings, executor)),
        (
            "small_graphs",
            lambda: _small_graph_properties(report, min(max_n, MONOTONICITY_CAP), rng, settings, executor),
        ),
        ("intersections", lambda: _intersections(report, int(config.params.get("triples", RANDOM_TRIPLES)), rng)),
        ("edge_window", lambda: _edge_window(report, max(max_n, 60))),
        ("supplements", lambda: _supplements(report, max_n, rng, tol)),
    ]
    for name, run in stages:
        started = time.perf_counter()
        try:
            run()
        except LabError as e:
            logger.error(f"verify-lemmas stage {name} stopped: {type(e).__name__}: {e}")
            report.error = f"{name}: {type(e).__name__}: {e}"
            break
        timings[name] = time.perf_counter() - started
        logger.info(f"stage {name} done in {timings[name]:.2f}s")
    report.sections["timings"] = timings
    return report.finish()
