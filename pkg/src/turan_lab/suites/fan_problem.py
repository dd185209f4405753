"""Complete split graph against the Turán graph for the (k, t)-fan."""

import logging
from concurrent.futures import Executor

from ..core.config import Settings
from ..core.containment import contains
from ..core.errors import ConfigError, LabError
from ..core.families import complete_split, fan, turan
from ..core.spectral import cai_fan_turan_q, complete_split_q, is_spectral_tie, q_radius
from ..extremal.enumeration import canonical_graph6
from ..extremal.record_store import RecordStore
from .extremal_suite import SPECTRAL_AGREEMENT, load_record
from .report import ExperimentConfig, LabReport

logger = logging.getLogger(__name__)


async def cmd_fan_problem(
    config: ExperimentConfig,
    settings: Settings,
    *,
    store: RecordStore,
    executor: Executor | None = None,
) -> LabReport:
    """Compare q(K_{k(t-2)} ∨ K̄_{n-k(t-2)}) with q(T_{t-1}(n)) and, optionally, the true ex_ssp(n, F_{k,t})."""
    report = LabReport("fan-problem", config.echo())
    k = int(config.params.get("k", 1))
    t = int(config.params.get("t", 4))
    if k < 1 or t < 3:
        raise ConfigError(f"fan problem needs k >= 1 and t >= 3, got k={k}, t={t}")
    if len(config.n_values) != 1:
        raise ConfigError("fan problem takes a single --n")
    n = config.n_values[0]
    a = k * (t - 2)
    r = t - 1
    if not (a < n and r <= n):
        raise ConfigError(f"need k(t-2) < n and t-1 <= n, got k={k}, t={t}, n={n}")

    tol = settings.spectral_tol
    try:
        f = fan(k, t)
        split = complete_split(a, n)
        turan_graph = turan(r, n)
        split_code = canonical_graph6(split)
        turan_code = canonical_graph6(turan_graph)
        report.add_graph(f"F_{{{k},{t}}}", canonical_graph6(f))
        report.add_graph(f"K_{a} join empty {n - a}", split_code)
        report.add_graph(f"T_{r}({n})", turan_code)

        q_split = q_radius(split, tol).radius
        q_turan = q_radius(turan_graph, tol).radius
        split_closed = complete_split_q(a, n)
        turan_closed = cai_fan_turan_q(n, r)
        for name, solved, closed, code in (
            ("split_quotient", q_split, split_closed, split_code),
            ("turan_closed_form", q_turan, turan_closed, turan_code),
        ):
            gap = abs(solved - closed)
            report.require(
                name,
                "solver radius agrees with the closed or quotient form",
                gap <= SPECTRAL_AGREEMENT,
                margin=SPECTRAL_AGREEMENT - gap,
                graphs=[code],
                solver=solved,
                closed=closed,
            )

        for name, g, code in (("split_is_f_free", split, split_code), ("turan_is_f_free", turan_graph, turan_code)):
            witness = contains(g, f)
            report.require(
                name,
                "construction contains no copy of F_{k,t}",
                witness is None,
                graphs=[code],
                witness=list(witness.mapping) if witness else None,
            )

        if is_spectral_tie(q_turan, q_split, settings.tie_rel_tol):
            larger = "tie"
        else:
            larger = "turan" if q_turan > q_split else "split"
        report.observe(
            "split_vs_turan",
            "q(T_{t-1}(n)) exceeds q(K_{k(t-2)} ∨ K̄_{n-k(t-2)}), so the split graph is not spectral extremal",
            q_split=q_split,
            q_turan=q_turan,
            difference=q_turan - q_split,
            larger=larger,
        )
        logger.info(f"F_{{{k},{t}}}, n={n}: q(split)={q_split:.9f}, q(T_{r})={q_turan:.9f} -> {larger}")

        if config.params.get("enumerate"):
            record = await load_record(
                n, f, settings=settings, store=store, executor=executor, f_label=f"fan:{k},{t}"
            )
            report.observe(
                "true_ex_ssp",
                "the enumerated ex_ssp(n, F_{k,t}) against both constructions",
                graphs=record.ex_ssp_graphs,
                ex_ssp=record.ex_ssp,
                turan_attains=turan_code in record.ex_ssp_graphs,
                split_attains=split_code in record.ex_ssp_graphs,
            )
            report.sections["record"] = record.to_dict()
    except LabError as e:
        logger.error(f"fan-problem stopped: {type(e).__name__}: {e}")
        report.error = f"{type(e).__name__}: {e}"
    return report.finish()
