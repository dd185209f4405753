"""Report plumbing and the command suites."""

from .report import CheckKind, CheckResult, ExperimentConfig, LabReport, write_report

__all__ = [
    "CheckKind",
    "CheckResult",
    "ExperimentConfig",
    "LabReport",
    "write_report",
]
