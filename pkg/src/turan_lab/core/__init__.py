"""Core graph, spectral and containment components."""

from .config import Settings, get_settings
from .containment import chromatic_number, contains, is_f_free, is_saturated
from .errors import LabError
from .families import FamilySpec, GraphSpec, parse_graph_spec
from .graph import Graph, PartitionVec, VertexSet
from .graph6 import graph6_decode, graph6_encode
from .spectral import SpectralResult, a_radius, cai_fan_turan_q, q_radius

__all__ = [
    "Settings",
    "get_settings",
    "LabError",
    "Graph",
    "VertexSet",
    "PartitionVec",
    "graph6_encode",
    "graph6_decode",
    "SpectralResult",
    "q_radius",
    "a_radius",
    "cai_fan_turan_q",
    "FamilySpec",
    "GraphSpec",
    "parse_graph_spec",
    "contains",
    "is_f_free",
    "is_saturated",
    "chromatic_number",
]
