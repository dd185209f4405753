"""On-disk memo of extremal records, one JSON document per (n, canonical F) key."""

import json
import logging
from datetime import datetime, timezone
from pathlib import Path
from typing import Any

import aiofiles
import aiofiles.os
import jsonschema

from ..core.config import Settings
from .enumeration import ExtremalRecord

logger = logging.getLogger(__name__)

RECORD_SCHEMA_VERSION = 4

RECORD_SCHEMA: dict[str, Any] = {
    "type": "object",
    "required": ["schema_version", "stored_at", "record"],
    "properties": {
        "schema_version": {"type": "integer"},
        "stored_at": {"type": "string"},
        "record": {
            "type": "object",
            "required": ["n", "f_g6", "r", "ex", "ex_graphs", "ex_ssp", "ex_ssp_graphs", "class_count"],
            "properties": {
                "n": {"type": "integer", "minimum": 0},
                "f_g6": {"type": "string", "minLength": 1},
                "r": {"type": "integer"},
                "ex": {"type": "integer", "minimum": 0},
                "ex_graphs": {"type": "array", "items": {"type": "string"}},
                "ex_ssp": {"type": "number", "minimum": 0},
                "ex_ssp_graphs": {"type": "array", "items": {"type": "string"}},
                "c0_term": {"type": ["integer", "null"]},
                "class_count": {"type": "integer", "minimum": 0},
                "q_values": {"type": "object", "additionalProperties": {"type": "number"}},
                "near_ties": {"type": "array"},
                "ex_ssp_saturated": {"type": "object", "additionalProperties": {"type": "boolean"}},
                "min_degree_eps": {"type": "number"},
                "min_degree_count": {"type": "integer"},
                "min_degree_q": {"type": ["number", "null"]},
                "saturated_count": {"type": "integer", "minimum": 0},
                "saturated_min_edges": {"type": ["integer", "null"]},
                "saturated_max_edges": {"type": ["integer", "null"]},
            },
        },
    },
}


def record_key(n: int, f_g6: str) -> str:
    """File stem for a key; graph6 text is hex-encoded so any character is safe."""
    return f"n{n:02d}_{f_g6.encode('ascii').hex()}"


class RecordStore:
    """Async record cache with version-stamped, schema-checked JSON documents."""

    def __init__(self, settings: Settings, cache_dir: Path | None = None):
        self.settings = settings
        self.cache_dir = Path(cache_dir or settings.cache_dir)

    def _paths(self, n: int, f_g6: str) -> tuple[Path, Path]:
        stem = record_key(n, f_g6)
        return self.cache_dir / f"{stem}.json", self.cache_dir / f"{stem}.g6"

    async def get(self, n: int, f_g6: str, min_degree_eps: float | None = None) -> ExtremalRecord | None:
        """Return the stored record, or None on a miss or an invalidated entry.

        Args:
            n: Vertex count.
            f_g6: Canonical graph6 of F.
            min_degree_eps: Entries computed with another epsilon are invalid.

        Returns:
            The record, or None when absent, unreadable, stale or mismatched.
        """
        path, _ = self._paths(n, f_g6)
        if not path.exists():
            logger.info(f"record store miss: n={n}, F={f_g6}")
            return None
        try:
            async with aiofiles.open(path) as f:
                content = await f.read()
            data = json.loads(content)
            jsonschema.validate(data, RECORD_SCHEMA)
        except (OSError, json.JSONDecodeError, jsonschema.ValidationError) as e:
            logger.warning(f"Discarding unreadable record {path.name}: {e}")
            return None

        if data["schema_version"] != RECORD_SCHEMA_VERSION:
            logger.warning(
                f"Discarding record {path.name}: schema version {data['schema_version']} != {RECORD_SCHEMA_VERSION}"
            )
            return None
        record = ExtremalRecord.from_dict(data["record"])
        if record.n != n or record.f_g6 != f_g6:
            logger.warning(f"Discarding record {path.name}: key does not match its contents")
            return None
        if min_degree_eps is not None and record.min_degree_eps != min_degree_eps:
            logger.info(f"record store stale for n={n}: eps {record.min_degree_eps} != {min_degree_eps}")
            return None
        logger.info(f"record store hit: n={n}, F={f_g6}")
        return record

    async def put(self, record: ExtremalRecord) -> Path:
        """Persist the record and its graph6 sidecar."""
        self.cache_dir.mkdir(parents=True, exist_ok=True)
        path, sidecar = self._paths(record.n, record.f_g6)
        document = {
            "schema_version": RECORD_SCHEMA_VERSION,
            "stored_at": datetime.now(timezone.utc).isoformat(),
            "record": record.to_dict(),
        }
        jsonschema.validate(document, RECORD_SCHEMA)

        async with aiofiles.open(path, "w") as f:
            await f.write(json.dumps(document, indent=2))

        lines = [f"{code} ex\n" for code in record.ex_graphs]
        lines += [f"{code} ex_ssp\n" for code in record.ex_ssp_graphs]
        async with aiofiles.open(sidecar, "w") as f:
            await f.write("".join(lines))

        logger.info(f"Stored record n={record.n}, F={record.f_g6} at {path.name}")
        return path

    async def list_entries(self) -> list[dict[str, Any]]:
        """Summaries of every readable entry, ordered by file name."""
        if not self.cache_dir.exists():
            return []
        entries = []
        for path in sorted(self.cache_dir.glob("*.json")):
            try:
                async with aiofiles.open(path) as f:
                    data = json.loads(await f.read())
                jsonschema.validate(data, RECORD_SCHEMA)
            except (OSError, json.JSONDecodeError, jsonschema.ValidationError) as e:
                logger.warning(f"Skipping unreadable record {path.name}: {e}")
                continue
            record = data["record"]
            entries.append(
                {
                    "key": path.stem,
                    "n": record["n"],
                    "f_g6": record["f_g6"],
                    "ex": record["ex"],
                    "ex_ssp": record["ex_ssp"],
                    "current": data["schema_version"] == RECORD_SCHEMA_VERSION,
                    "stored_at": data["stored_at"],
                }
            )
        return entries

    async def clear(self) -> int:
        """Delete every record document and sidecar; returns the number of records removed."""
        if not self.cache_dir.exists():
            return 0
        removed = 0
        for path in list(self.cache_dir.glob("*.json")) + list(self.cache_dir.glob("*.g6")):
            await aiofiles.os.remove(path)
            removed += path.suffix == ".json"
        logger.info(f"Cleared {removed} records from {self.cache_dir}")
        return removed
