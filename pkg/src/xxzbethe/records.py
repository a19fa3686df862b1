"""Run records: canonical serialization and atomic persistence."""

from __future__ import annotations

import csv
import hashlib
import io
import json
import logging
import math
import re
from datetime import UTC, datetime
from enum import Enum
from pathlib import Path
from typing import Any

from pydantic import BaseModel, Field, field_validator

from ._internal.staging import write_run_directory
from .models import coerce_complex

logger = logging.getLogger(__name__)

RECORD_JSON = "record.json"
RECORD_CSV = "record.csv"

# Keys kept out of the canonical payload so identical runs serialize identically.
META_FIELDS = ("wall_time", "tool_version", "timestamp")

FLOAT_DIGITS = 17
_FLOAT_MARK = "\x00float:"
_FLOAT_TOKEN = re.compile(r'"\\u0000float:([^"]*)"')


class OutputFormat(str, Enum):
    JSON = "json"
    CSV = "csv"


class RunRecord(BaseModel):
    """Everything one CLI command produced.

    Examples:
        >>> record = RunRecord(command="reproduce table1", energies=[-4.56711])
        >>> serialize(record, "json")
    """

    command: str = Field(description="Subcommand that produced the record")
    config_echo: dict[str, Any] = Field(default_factory=dict, description="Resolved configuration")
    energies: list[complex] = Field(default_factory=list, description="Bethe-side energies per level")
    reference_energies: list[complex] = Field(default_factory=list, description="Diagonalization or table values")
    bethe_roots: list[list[complex]] = Field(default_factory=list, description="Roots per level")
    residuals: list[float] = Field(default_factory=list, description="Max Bethe residual per level")
    pairing: list[int] = Field(default_factory=list, description="Reference index matched to each level")
    deviations: list[float] = Field(default_factory=list, description="|E - E_ref| per level")
    max_deviation: float | None = Field(None, description="Largest pair deviation")
    unmatched: list[int] = Field(default_factory=list, description="Reference levels without a Bethe partner")
    checks: dict[str, float] = Field(default_factory=dict, description="Verification residuals by name")
    status: str = Field("ok", description="'ok' or 'error'")
    error: dict[str, Any] | None = Field(None, description="Machine-readable error, if any")
    wall_time: float = Field(0.0, description="Seconds spent")
    tool_version: str = Field("", description="xxzbethe version")
    timestamp: str = Field("", description="UTC completion time")

    @field_validator("energies", "reference_energies", mode="before")
    @classmethod
    def coerce_energy_list(cls, value: Any) -> Any:
        if isinstance(value, (list, tuple)):
            return [coerce_complex(v) for v in value]
        return value

    @field_validator("bethe_roots", mode="before")
    @classmethod
    def coerce_root_lists(cls, value: Any) -> Any:
        if isinstance(value, (list, tuple)):
            return [[coerce_complex(v) for v in level] for level in value]
        return value

    @field_validator("residuals", "deviations", "max_deviation", "checks", mode="before")
    @classmethod
    def null_as_nan(cls, value: Any) -> Any:
        if value is None:
            return None
        if isinstance(value, dict):
            return {key: math.nan if v is None else v for key, v in value.items()}
        if isinstance(value, (list, tuple)):
            return [math.nan if v is None else v for v in value]
        return value

    def stamped(self, *, wall_time: float, tool_version: str) -> RunRecord:
        return self.model_copy(
            update={
                "wall_time": wall_time,
                "tool_version": tool_version,
                "timestamp": datetime.now(UTC).isoformat(timespec="seconds"),
            }
        )


def _jsonable(value: Any) -> Any:
    if isinstance(value, bool) or value is None or isinstance(value, (str, int)):
        return value
    if isinstance(value, float):
        return value if math.isfinite(value) else None
    if isinstance(value, complex):
        return {"re": _jsonable(value.real), "im": _jsonable(value.imag)}
    if isinstance(value, Enum):
        return value.value
    if isinstance(value, dict):
        return {str(k): _jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_jsonable(v) for v in value]
    if hasattr(value, "item"):
        return _jsonable(value.item())
    return str(value)


def format_float(value: float) -> str:
    """17 significant digits; integral values keep a '.0' so they read back as floats."""
    text = format(value, f".{FLOAT_DIGITS}g")
    return text if any(c in text for c in ".en") else text + ".0"


def _mark_floats(value: Any) -> Any:
    if isinstance(value, float):
        return _FLOAT_MARK + format_float(value)
    if isinstance(value, dict):
        return {key: _mark_floats(v) for key, v in value.items()}
    if isinstance(value, list):
        return [_mark_floats(v) for v in value]
    return value


def _dumps(document: dict[str, Any]) -> str:
    """json.dumps with every float written by :func:`format_float`."""
    text = json.dumps(_mark_floats(document), sort_keys=True, indent=2)
    return _FLOAT_TOKEN.sub(lambda match: match.group(1), text)


def canonical_payload(record: RunRecord) -> dict[str, Any]:
    data = {name: getattr(record, name) for name in RunRecord.model_fields if name not in META_FIELDS}
    return _jsonable(data)


def config_hash(config_echo: dict[str, Any]) -> str:
    """Stable short digest of a resolved configuration."""
    text = json.dumps(_jsonable(config_echo), sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(text.encode()).hexdigest()[:16]


def serialize(record: RunRecord, format: OutputFormat | str = OutputFormat.JSON) -> bytes:
    """JSON (sorted keys, complex as {re, im}, 17 significant digits) or CSV (one row per level)."""
    format = OutputFormat(format)
    if format == OutputFormat.JSON:
        document = {
            "payload": canonical_payload(record),
            "meta": {name: _jsonable(getattr(record, name)) for name in META_FIELDS},
        }
        return (_dumps(document) + "\n").encode()

    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(["index", "E_re", "E_im", "deviation"])
    for index, energy in enumerate(record.energies):
        deviation = record.deviations[index] if index < len(record.deviations) else math.nan
        writer.writerow([index, repr(energy.real), repr(energy.imag), repr(float(deviation))])
    return buffer.getvalue().encode()


def deserialize(data: bytes) -> RunRecord:
    """Inverse of the JSON form of :func:`serialize`."""
    document = json.loads(data)
    return RunRecord.model_validate({**document.get("payload", {}), **document.get("meta", {})})


def persist_record(record: RunRecord, out_root: Path) -> Path:
    """Write record.json and record.csv under ``out_root/<config hash>/`` atomically."""
    target = Path(out_root) / config_hash({"command": record.command, **record.config_echo})
    write_run_directory(
        target,
        {RECORD_JSON: serialize(record, OutputFormat.JSON), RECORD_CSV: serialize(record, OutputFormat.CSV)},
    )
    logger.info("Persisted %s record to %s", record.command, target)
    return target
