"""Lab reports, their check rows, and the validated experiment configuration."""

import csv
import io
import json
import logging
import time
from dataclasses import dataclass, field
from datetime import datetime, timezone
from enum import Enum
from pathlib import Path
from typing import Any

import aiofiles
from pydantic import BaseModel, Field, ValidationError, field_validator

from ..core.errors import ConfigError
from ..core.graph import MAX_VERTICES
from ..utils import safe_filename

logger = logging.getLogger(__name__)


class CheckKind(str, Enum):
    """``assert`` rows must hold at desk scale; ``observe`` rows only record a trend."""

    ASSERT = "assert"
    OBSERVE = "observe"


@dataclass
class CheckResult:
    """One verified (or merely observed) claim with the numbers behind it."""

    name: str
    anchor: str
    kind: CheckKind
    passed: bool | None = None
    values: dict[str, Any] = field(default_factory=dict)
    graphs: list[str] = field(default_factory=list)
    margin: float | None = None

    @property
    def status(self) -> str:
        if self.kind is CheckKind.OBSERVE:
            return "observe"
        return "pass" if self.passed else "fail"

    def to_dict(self) -> dict[str, Any]:
        return {
            "name": self.name,
            "anchor": self.anchor,
            "kind": self.kind.value,
            "status": self.status,
            "passed": self.passed,
            "margin": self.margin,
            "values": self.values,
            "graphs": self.graphs,
        }

    @classmethod
    def from_dict(cls, data: dict[str, Any]) -> "CheckResult":
        return cls(
            name=data["name"],
            anchor=data["anchor"],
            kind=CheckKind(data["kind"]),
            passed=data.get("passed"),
            values=data.get("values", {}),
            graphs=data.get("graphs", []),
            margin=data.get("margin"),
        )


@dataclass
class LabReport:
    """Everything one subcommand produced: config echo, check rows, graphs, timing."""

    command: str
    config: dict[str, Any]
    checks: list[CheckResult] = field(default_factory=list)
    artifacts: dict[str, str] = field(default_factory=dict)
    sections: dict[str, Any] = field(default_factory=dict)
    notes: list[str] = field(default_factory=list)
    error: str | None = None
    created_at: str = field(default_factory=lambda: datetime.now(timezone.utc).isoformat())
    duration_s: float = 0.0
    _started: float = field(default_factory=time.perf_counter, repr=False, compare=False)

    def require(
        self,
        name: str,
        anchor: str,
        passed: bool,
        *,
        margin: float | None = None,
        graphs: list[str] | None = None,
        **values: Any,
    ) -> CheckResult:
        """Add an assert row; a failure makes the run exit nonzero."""
        row = CheckResult(name, anchor, CheckKind.ASSERT, bool(passed), values, graphs or [], margin)
        self.checks.append(row)
        if not passed:
            logger.warning(f"[{self.command}] FAILED {name}: {anchor} {values}")
        return row

    def observe(self, name: str, anchor: str, *, graphs: list[str] | None = None, **values: Any) -> CheckResult:
        """Add an observe row; never affects the exit status."""
        row = CheckResult(name, anchor, CheckKind.OBSERVE, None, values, graphs or [])
        self.checks.append(row)
        return row

    def add_graph(self, label: str, graph6: str) -> None:
        self.artifacts[label] = graph6

    @property
    def failures(self) -> list[CheckResult]:
        return [c for c in self.checks if c.kind is CheckKind.ASSERT and not c.passed]

    @property
    def exit_code(self) -> int:
        return 1 if self.failures or self.error else 0

    def finish(self) -> "LabReport":
        self.duration_s = time.perf_counter() - self._started
        return self

    def summary(self) -> dict[str, int]:
        counts = {"pass": 0, "fail": 0, "observe": 0}
        for c in self.checks:
            counts[c.status] += 1
        return counts

    def to_dict(self) -> dict[str, Any]:
        return {
            "command": self.command,
            "config": self.config,
            "created_at": self.created_at,
            "duration_s": self.duration_s,
            "summary": self.summary(),
            "exit_code": self.exit_code,
            "error": self.error,
            "checks": [c.to_dict() for c in self.checks],
            "artifacts": self.artifacts,
            "sections": self.sections,
            "notes": self.notes,
        }

    @classmethod
    def from_dict(cls, data: dict[str, Any]) -> "LabReport":
        return cls(
            command=data["command"],
            config=data.get("config", {}),
            checks=[CheckResult.from_dict(c) for c in data.get("checks", [])],
            artifacts=data.get("artifacts", {}),
            sections=data.get("sections", {}),
            notes=data.get("notes", []),
            error=data.get("error"),
            created_at=data.get("created_at", ""),
            duration_s=data.get("duration_s", 0.0),
        )

    def to_csv(self) -> str:
        buffer = io.StringIO()
        writer = csv.writer(buffer, lineterminator="\n")
        writer.writerow(["name", "kind", "status", "anchor", "margin", "values", "graphs"])
        for c in self.checks:
            writer.writerow(
                [
                    c.name,
                    c.kind.value,
                    c.status,
                    c.anchor,
                    "" if c.margin is None else repr(c.margin),
                    json.dumps(c.values, sort_keys=True, default=str),
                    " ".join(c.graphs),
                ]
            )
        return buffer.getvalue()

    def graph6_lines(self) -> str:
        labelled = dict(self.artifacts)
        for c in self.checks:
            for i, code in enumerate(c.graphs):
                labelled.setdefault(f"{c.name}#{i}", code)
        return "".join(f"{code} {label}\n" for label, code in sorted(labelled.items()))


class ExperimentConfig(BaseModel):
    """Validated parameters of one CLI invocation."""

    command: str
    forbid: str | None = None
    n_values: list[int] = Field(default_factory=list, description="Vertex counts to visit")
    eps: float = Field(default=0.25, gt=0, le=1, description="Regularity epsilon; for extremal, the minimum-degree class epsilon")
    tol: float = Field(default=1e-9, gt=0, description="Spectral residual tolerance")
    budget: int = Field(default=50_000_000, ge=1, description="Enumeration node expansions")
    workers: int = Field(default=1, ge=1, description="Worker processes")
    seed: int = Field(default=20250101, description="Seed for randomized suites")
    out: Path | None = Field(default=None, description="Report directory")
    cache: Path | None = Field(default=None, description="Record store directory")
    params: dict[str, Any] = Field(default_factory=dict, description="Command-specific extras")

    @field_validator("n_values")
    @classmethod
    def _within_vertex_cap(cls, values: list[int]) -> list[int]:
        if any(v < 1 or v > MAX_VERTICES for v in values):
            raise ValueError(f"vertex counts must lie in 1..{MAX_VERTICES}")
        return values

    @classmethod
    def build(cls, **kwargs: Any) -> "ExperimentConfig":
        try:
            return cls(**kwargs)
        except ValidationError as e:
            raise ConfigError(f"invalid configuration: {e}") from e

    def echo(self) -> dict[str, Any]:
        return self.model_dump(mode="json")


async def write_report(report: LabReport, out_dir: Path, markdown: str | None = None) -> dict[str, Path]:
    """Write JSON, CSV, graph6 sidecar and (optionally) Markdown next to each other."""
    out_dir.mkdir(parents=True, exist_ok=True)
    stem = safe_filename(f"{report.command}_{report.created_at[:19].replace(':', '')}")
    paths = {
        "json": out_dir / f"{stem}.json",
        "csv": out_dir / f"{stem}.csv",
        "g6": out_dir / f"{stem}.g6",
    }
    contents = {
        "json": json.dumps(report.to_dict(), indent=2, default=str),
        "csv": report.to_csv(),
        "g6": report.graph6_lines(),
    }
    if markdown is not None:
        paths["md"] = out_dir / f"{stem}.md"
        contents["md"] = markdown
    for kind, path in paths.items():
        async with aiofiles.open(path, "w") as f:
            await f.write(contents[kind])
    logger.info(f"Wrote {report.command} report to {paths['json']}")
    return paths
