"""Spectral Turán lab - exhaustive and spectral checks for Turán-type problems on small graphs."""

from .__about__ import __version__
from .core.config import Settings
from .core.graph import Graph, PartitionVec, VertexSet
from .core.spectral import q_radius
from .extremal.enumeration import ExtremalRecord, extremal_record
from .extremal.record_store import RecordStore
from .suites.report import ExperimentConfig, LabReport

__author__ = "AI Workspace"
__description__ = "A desk-scale laboratory for signless Laplacian spectral Turán problems"

__all__ = [
    "__version__",
    "Settings",
    "Graph",
    "VertexSet",
    "PartitionVec",
    "q_radius",
    "ExtremalRecord",
    "extremal_record",
    "RecordStore",
    "ExperimentConfig",
    "LabReport",
]
