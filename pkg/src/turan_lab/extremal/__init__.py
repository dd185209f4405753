"""Exhaustive enumeration, stored records, and structure/regularity analysis."""

from .enumeration import ExtremalRecord, canonical_graph6, enumerate_ffree, extremal_record
from .record_store import RecordStore
from .regularity import counting_premise, is_regular_pair
from .structure import decompose, min_internal_partition, stability_chain

__all__ = [
    "ExtremalRecord",
    "canonical_graph6",
    "enumerate_ffree",
    "extremal_record",
    "RecordStore",
    "decompose",
    "min_internal_partition",
    "stability_chain",
    "is_regular_pair",
    "counting_premise",
]
