"""Commands that work from exhaustive records or a single graph: extremal, structure, regularity."""

import logging
import math
from concurrent.futures import Executor
from pathlib import Path

from ..core.config import Settings
from ..core.errors import BudgetExhaustedError, ConfigError, LabArgumentError, LabError
from ..core.families import complete_multipartite, complete_split, parse_graph_spec, turan
from ..core.graph import Graph, PartitionVec
from ..core.spectral import q_radius, rayleigh_split, turan_edges, turan_perron_min
from ..extremal.enumeration import (
    ExtremalRecord,
    c0_sequence,
    canonical_graph6,
    density_hypothesis_check,
    extremal_record,
)
from ..extremal.record_store import RecordStore
from ..extremal.regularity import (
    counting_premise,
    is_regular_pair,
    load_fixture,
    partition_irregularity,
    search_regular_partition,
)
from ..extremal.structure import StructureReport, decompose, min_internal_partition, stability_chain
from .report import ExperimentConfig, LabReport

logger = logging.getLogger(__name__)

SPECTRAL_AGREEMENT = 1e-8

TRIANGLE_NOTE = (
    "chi(F) = 3: spectral extremal graphs need not be edge extremal. For the triangle, "
    "Ex_ssp(n, K_3) = {K_{s,n-s}} strictly contains Ex(n, K_3) = {T_2(n)} once n >= 4; "
    "for C_{2k+1} the spectral maximizers tend to K_k ∨ K̄_{n-k}."
)


def _fail(report: LabReport, error: LabError) -> None:
    logger.error(f"{report.command} stopped: {type(error).__name__}: {error}")
    report.error = f"{type(error).__name__}: {error}"
    if isinstance(error, BudgetExhaustedError):
        report.sections["budget_progress"] = error.progress


def _require_forbid(config: ExperimentConfig) -> str:
    if not config.forbid:
        raise ConfigError(f"{config.command} needs --forbid")
    return config.forbid


async def load_record(
    n: int,
    f: Graph,
    *,
    settings: Settings,
    store: RecordStore,
    executor: Executor | None = None,
    f_label: str = "",
) -> ExtremalRecord:
    """Record for (n, F) from the store, enumerating and storing it on a miss."""
    f_g6 = canonical_graph6(f)
    cached = await store.get(n, f_g6, settings.min_degree_eps)
    if cached is not None:
        return cached
    record = extremal_record(n, f, settings=settings, executor=executor, f_label=f_label)
    await store.put(record)
    return record


def _is_clique(f: Graph) -> bool:
    return f.n >= 2 and f.num_edges == math.comb(f.n, 2)


def _odd_cycle_k(f: Graph) -> int | None:
    if f.n >= 3 and f.n % 2 == 1 and f.is_connected() and all(d == 2 for d in f.degrees()):
        return (f.n - 1) // 2
    return None


def _clique_rows(report: LabReport, record: ExtremalRecord) -> None:
    """Exact statements known for every n when F = K_{r+1}."""
    n, r = record.n, record.r
    ex_set, ssp_set = set(record.ex_graphs), set(record.ex_ssp_graphs)
    expected = canonical_graph6(turan(min(r, n), n))
    report.require(
        "turan_theorem",
        "ex(n, K_{r+1}) = t_r(n) and Ex(n, K_{r+1}) = {T_r(n)}",
        record.ex == turan_edges(n, min(r, n)) and ex_set == {expected},
        graphs=sorted(ex_set),
        n=n,
        ex=record.ex,
        t_r=turan_edges(n, min(r, n)),
    )
    if r >= 3:
        report.require(
            "clique_spectral_extremal",
            "Ex_ssp(n, K_{r+1}) = {T_r(n)} for r >= 3",
            ssp_set == {expected},
            graphs=sorted(ssp_set),
            n=n,
            ex_ssp=record.ex_ssp,
        )
    elif r == 2 and n >= 3:
        stars = {canonical_graph6(complete_multipartite((s, n - s))) for s in range(1, n // 2 + 1)}
        gap = abs(record.ex_ssp - n)
        report.require(
            "triangle_spectral_extremal",
            "Ex_ssp(n, K_3) = {K_{s,n-s} : 1 <= s <= n/2}, each with q = n, strictly containing Ex(n, K_3) for n >= 4",
            ssp_set == stars and gap <= SPECTRAL_AGREEMENT and (n < 4 or ex_set < ssp_set),
            margin=SPECTRAL_AGREEMENT - gap,
            graphs=sorted(ssp_set),
            n=n,
            ex_ssp=record.ex_ssp,
            members=len(ssp_set),
        )


def _record_rows(report: LabReport, record: ExtremalRecord, f: Graph, tol: float) -> None:
    n = record.n
    report.observe(
        "record",
        "ex(n, F), ex_ssp(n, F) and the extremal families at this n",
        graphs=sorted(set(record.ex_graphs) | set(record.ex_ssp_graphs)),
        n=n,
        r=record.r,
        ex=record.ex,
        ex_ssp=record.ex_ssp,
        ex_count=len(record.ex_graphs),
        ex_ssp_count=len(record.ex_ssp_graphs),
        class_count=record.class_count,
        saturated_count=record.saturated_count,
        c0_term=record.c0_term,
    )
    if n:
        floor = 4 * record.ex / n
        report.require(
            "rayleigh_floor",
            "ex_ssp(n, F) >= 4 ex(n, F) / n",
            record.ex_ssp >= floor - tol,
            margin=record.ex_ssp - floor,
            n=n,
        )

    within = record.ex_ssp_within_ex
    anchor = "Ex_ssp(n, F) ⊆ Ex(n, F) for sufficiently large n"
    outside = sorted(set(record.ex_ssp_graphs) - set(record.ex_graphs))
    if _is_clique(f) and record.r >= 3:
        report.require("containment", anchor, within, graphs=outside, n=n, r=record.r)
    else:
        report.observe("containment", anchor, graphs=outside, n=n, r=record.r, holds=within)
        if not within:
            logger.warning(f"n={n}: {len(outside)} spectral extremal graph(s) outside Ex(n, F)")

    if _is_clique(f):
        _clique_rows(report, record)

    k = _odd_cycle_k(f)
    if k is not None and k < n:
        split = canonical_graph6(complete_split(k, n))
        report.observe(
            "odd_cycle_split",
            "Ex_ssp(n, C_{2k+1}) = {K_k ∨ K̄_{n-k}} for large n",
            graphs=[split],
            n=n,
            k=k,
            split_in_ex_ssp=split in record.ex_ssp_graphs,
        )

    unsaturated = sorted(code for code, sat in record.ex_ssp_saturated.items() if not sat)
    report.observe(
        "ex_ssp_saturated",
        "members of Ex_ssp(n, F) are F-saturated",
        graphs=unsaturated,
        n=n,
        saturated=len(record.ex_ssp_saturated) - len(unsaturated),
        unsaturated=len(unsaturated),
    )
    report.require(
        "saturated_bound",
        "e(G) <= ex(n, F) for every F-saturated G on n vertices",
        record.saturated_max_edges is None or record.saturated_max_edges <= record.ex,
        n=n,
        saturated=record.saturated_count,
        min_edges=record.saturated_min_edges,
        max_edges=record.saturated_max_edges,
        ex=record.ex,
    )
    if record.near_ties:
        report.observe(
            "near_ties",
            "graphs whose q lies just below ex_ssp(n, F)",
            graphs=[t["graph6"] for t in record.near_ties],
            n=n,
            gaps=[t["gap"] for t in record.near_ties],
        )
    report.observe(
        "min_degree_class",
        "q over F-free graphs with minimum degree above (1 - 1/r - eps) n",
        n=n,
        eps=record.min_degree_eps,
        members=record.min_degree_count,
        q=record.min_degree_q,
    )


async def cmd_extremal(
    config: ExperimentConfig,
    settings: Settings,
    *,
    store: RecordStore,
    executor: Executor | None = None,
) -> LabReport:
    """Exact Turán and spectral Turán records over a range of n, with containment verdicts."""
    report = LabReport("extremal", config.echo())
    if "eps" in config.model_fields_set:
        settings = settings.model_copy(update={"min_degree_eps": config.eps})
    try:
        spec = parse_graph_spec(_require_forbid(config))
    except LabArgumentError as e:
        raise ConfigError(f"invalid --forbid: {e}") from e
    f = spec.graph
    report.add_graph(f"F {spec.label}", spec.graph6)
    records: dict[int, ExtremalRecord] = {}
    try:
        for n in config.n_values:
            record = await load_record(n, f, settings=settings, store=store, executor=executor, f_label=spec.label)
            records[n] = record
            _record_rows(report, record, f, settings.spectral_tol)
        if records and next(iter(records.values())).r == 2:
            report.notes.append(TRIANGLE_NOTE)

        if records:
            sequence = c0_sequence(f, sorted(records), settings=settings, executor=executor, known=records)
            report.observe(
                "c0_sequence",
                "ex(n, F) - t_r(n) stays bounded by a constant c0",
                **sequence.to_dict(),
            )
            report.sections["c0_sequence"] = sequence.to_dict()

            for n in sorted(records):
                if n >= 1 and n - 1 not in records:
                    records[n - 1] = await load_record(
                        n - 1, f, settings=settings, store=store, executor=executor, f_label=spec.label
                    )
            rows = density_hypothesis_check(
                f, sorted(config.n_values), settings=settings, executor=executor, known=records
            )
            for row in rows:
                report.observe(
                    "density_hypotheses",
                    "|ex(n) - ex(n-1) - pi n| and |q(G_n) - 4 ex(n)/n| stay small",
                    **row.to_dict(),
                )
            report.sections["density_hypotheses"] = [row.to_dict() for row in rows]
    except LabError as e:
        _fail(report, e)
    logger.info(f"extremal {spec.label}: {report.summary()}")
    return report.finish()


def _structure_rows(report: LabReport, structure: StructureReport, g: Graph, *, asserted: bool) -> None:
    for check in structure.checks:
        if asserted:
            report.require(check.name, check.statement, check.passed, margin=check.margin, lhs=check.lhs, rhs=check.rhs)
        else:
            report.observe(check.name, check.statement, lhs=check.lhs, rhs=check.rhs, holds=check.passed)
    split = rayleigh_split(g, structure.partition, q_radius(g).perron)
    report.require(
        "rayleigh_split",
        "x^T Q(G) x = x^T Q(K_{n_1..n_r}) x + sum over G_in - sum over G_out",
        True,
        **split,
    )
    report.sections["structure"] = structure.to_dict()


async def cmd_structure(
    config: ExperimentConfig,
    settings: Settings,
    *,
    store: RecordStore,
    executor: Executor | None = None,
) -> LabReport:
    """In/out decomposition of one graph; with --forbid, the stability chain of an Ex_ssp member."""
    report = LabReport("structure", config.echo())
    try:
        spec = parse_graph_spec(str(config.params["graph"]))
        g = spec.graph
        report.add_graph(f"G {spec.label}", canonical_graph6(g))
        if config.forbid:
            f_spec = parse_graph_spec(config.forbid)
            report.add_graph(f"F {f_spec.label}", f_spec.graph6)
            record = await load_record(
                g.n, f_spec.graph, settings=settings, store=store, executor=executor, f_label=f_spec.label
            )
            c0 = config.params.get("c0")
            structure = stability_chain(g, f_spec.graph, record, c0=c0, settings=settings)
            _structure_rows(report, structure, g, asserted=False)
            findings = structure.stability
            if findings is not None:
                report.observe(
                    "stability_chain",
                    "spectral extremal graphs are balanced, nearly Perron-flat and edge extremal",
                    **findings.to_dict(),
                )
                if findings.turan_perron_min is not None:
                    report.require(
                        "turan_perron_floor",
                        "min Perron entry of T_r(n) is at least 1 - 2/n",
                        findings.turan_perron_min >= 1 - 2 / g.n - 1e-12,
                        margin=findings.turan_perron_min - (1 - 2 / g.n),
                        n=g.n,
                    )
        else:
            r = int(config.params["r"])
            optimum = min_internal_partition(g, r, settings=settings, executor=executor)
            report.observe("optimal_partition", "partition minimizing edges inside classes", **optimum.to_dict())
            structure = decompose(g, optimum.partition, int(config.params.get("c0", 0)), settings=settings)
            _structure_rows(report, structure, g, asserted=False)
            if r <= g.n:
                report.observe(
                    "perron_spread",
                    "minimum Perron entry against that of T_r(n)",
                    perron_min=structure.perron_min,
                    turan_perron_min=turan_perron_min(g.n, r),
                )
    except LabError as e:
        _fail(report, e)
    return report.finish()


async def cmd_regularity(config: ExperimentConfig, settings: Settings) -> LabReport:
    """Pair regularity of a fixture's classes; with --forbid, the counting-lemma premises."""
    report = LabReport("regularity", config.echo())
    eps = config.eps
    try:
        g, classes = await load_fixture(Path(config.params["graph"]), Path(config.params["classes"]))
        report.add_graph("G", canonical_graph6(g))
        for i in range(len(classes)):
            for j in range(i + 1, len(classes)):
                verdict = is_regular_pair(g, classes[i], classes[j], eps, side_cap=settings.regularity_side_cap)
                report.observe(
                    "pair_regularity",
                    "every large sub-pair density is within eps of the pair density",
                    pair=[i, j],
                    **verdict.to_dict(),
                )

        covered = sum(len(c) for c in classes)
        if covered == g.n and len(classes) >= 1:
            parts = PartitionVec.from_classes(g.n, [c.to_list() for c in classes])
            value = partition_irregularity(g, parts, eps, side_cap=settings.regularity_side_cap)
            report.observe(
                "partition_irregularity",
                "irregular mass sum |V_i||V_j| / n^2 is at most eps",
                irregularity=value,
                regular=value <= eps,
            )
        if g.n <= settings.regular_partition_search_cap:
            search = search_regular_partition(
                g, eps, int(config.params.get("max_parts", 4)), cap=settings.regular_partition_search_cap
            )
            report.observe("regular_partition_search", "fewest-part eps-regular partition", **search.to_dict())

        if config.forbid:
            f_spec = parse_graph_spec(config.forbid)
            premise = counting_premise(g, classes, eps, f_spec.graph, side_cap=settings.regularity_side_cap)
            report.require(
                "counting_lemma",
                "regular, dense, large class pairs along every F-edge force a copy of F",
                not premise.premises_hold or premise.embedding is not None,
                **premise.to_dict(),
            )
            report.sections["counting_premise"] = premise.to_dict()
    except LabError as e:
        _fail(report, e)
    return report.finish()
