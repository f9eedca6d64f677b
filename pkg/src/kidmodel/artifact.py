"""On-disk formats: model artifact, event streams and report records.

Events and reports are JSON Lines, one object per line, UTF-8 with LF
endings. Timestamps are ``D:HH:MM:SS`` strings.
"""

from __future__ import annotations

import json
import os
import tempfile
from dataclasses import dataclass
from typing import Any, Dict, Iterable, List, Optional

from .context import (
    FormalContext,
    QualityDimension,
    ReferenceTimeTable,
    Duration,
    NOT_AVAILABLE,
)
from .engine import EndReason, EngineOutput, OutputKind, SensorEvent, Status, Timestamp
from .errors import ParseError, UnknownNameError
from .space import ConceptMemory, DimensionWeights, build_memory

FORMAT_VERSION = "kidmodel/1"


@dataclass(frozen=True)
class ModelArtifact:
    context: FormalContext
    reftimes: ReferenceTimeTable
    weights: DimensionWeights

    def memory(self) -> ConceptMemory:
        return build_memory(self.context, self.weights)

    def to_json(self) -> str:
        ctx = self.context
        doc = {
            "format": FORMAT_VERSION,
            "dimensions": [{"name": d.name, "attributes": list(d.attributes)} for d in ctx.dimensions],
            "basis": [str(a) for a in ctx.attributes],
            "activities": list(ctx.activities),
            "incidence": ["".join(str(c) for c in row) for row in ctx.incidence],
            "reference_times": {
                a: NOT_AVAILABLE if d is None else str(d) for a, d in self.reftimes.durations.items()
            },
            "weights": self.weights.as_dict(ctx),
        }
        return json.dumps(doc, indent=2, ensure_ascii=False) + "\n"

    @classmethod
    def from_json(cls, text: str, *, source: Optional[str] = None) -> "ModelArtifact":
        try:
            doc = json.loads(text)
        except json.JSONDecodeError as exc:
            raise ParseError(f"invalid JSON: {exc.msg}", source=source, line=exc.lineno, column=exc.colno) from None
        if not isinstance(doc, dict):
            raise ParseError("model artifact must be a JSON object", source=source)
        version = doc.get("format")
        if version != FORMAT_VERSION:
            raise ParseError(f"unsupported model format {version!r}, expected {FORMAT_VERSION!r}", source=source)
        try:
            dims = tuple(QualityDimension(d["name"], tuple(d["attributes"])) for d in doc["dimensions"])
            incidence = tuple(tuple(int(c) for c in row) for row in doc["incidence"])
            context = FormalContext(tuple(doc["activities"]), dims, incidence)
            basis = [str(a) for a in context.attributes]
            if doc["basis"] != basis:
                raise ValueError("stored basis does not match the dimension layout")
            raw_times = doc["reference_times"]
            if list(raw_times) != list(context.activities):
                raise ValueError("reference_times must list every activity in context order")
            reftimes = ReferenceTimeTable(
                {a: None if v == NOT_AVAILABLE else Duration.parse(v) for a, v in raw_times.items()}
            )
            weights = DimensionWeights(doc.get("weights", {}))
            weights.validate_for(context)
        except (KeyError, TypeError, ValueError) as exc:
            raise ParseError(f"malformed model artifact: {exc}", source=source) from None
        return cls(context, reftimes, weights)


def atomic_write(path: str, text: str) -> None:
    directory = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".tmp-", suffix=os.path.basename(path))
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def parse_weights(text: str, *, source: Optional[str] = None) -> DimensionWeights:
    """Weights file: a JSON object mapping dimension name to a positive number."""
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"invalid JSON: {exc.msg}", source=source, line=exc.lineno, column=exc.colno) from None
    if not isinstance(doc, dict):
        raise ParseError("weights must be a JSON object of dimension -> weight", source=source)
    try:
        return DimensionWeights(doc)
    except (TypeError, ValueError) as exc:
        raise ParseError(str(exc), source=source) from None


def parse_events(text: str, context: FormalContext, *, source: Optional[str] = None) -> List[SensorEvent]:
    """Read a JSON Lines event stream, checking attributes and time order."""
    events: List[SensorEvent] = []
    for line_no, line in enumerate(text.split("\n"), start=1):
        if not line.strip():
            continue
        try:
            obj = json.loads(line)
            at = Timestamp.parse(obj["time"])
            dim, name = obj["dimension"], obj["attribute"]
            value = obj.get("value", 1)
        except json.JSONDecodeError as exc:
            raise ParseError(f"invalid JSON: {exc.msg}", source=source, line=line_no) from None
        except (KeyError, TypeError, ValueError, AttributeError) as exc:
            raise ParseError(f"malformed event: {exc}", source=source, line=line_no) from None
        if value not in (0, 1) or isinstance(value, bool):
            raise ParseError(f"sensor value must be 0 or 1, got {value!r}", source=source, line=line_no)
        try:
            attr = context.attribute((dim, name))
        except UnknownNameError as exc:
            raise ParseError(str(exc), source=source, line=line_no) from None
        if events and at < events[-1].at:
            raise ParseError(f"event at {at} is earlier than the previous event at {events[-1].at}", source=source, line=line_no)
        events.append(SensorEvent(at, attr, value))
    return events


def format_event(event: SensorEvent) -> str:
    return json.dumps(
        {"time": str(event.at), "dimension": event.attr.dimension, "attribute": event.attr.attribute, "value": event.value}
    )


def render_output(out: EngineOutput) -> str:
    """One report line; keys appear in a fixed order and defaults are omitted."""
    rec: Dict[str, Any] = {"at": str(out.at), "kind": out.kind.value}
    if out.activity is not None:
        rec["activity"] = out.activity
    if out.status is not None:
        rec["status"] = out.status.value
    if out.candidates:
        rec["candidates"] = list(out.candidates)
    if out.deadline is not None:
        rec["deadline"] = str(out.deadline)
    if out.similarity is not None:
        rec["similarity"] = out.similarity
    if out.reason is not None:
        rec["reason"] = out.reason.value
    return json.dumps(rec, ensure_ascii=False)


def parse_output(line: str) -> EngineOutput:
    rec = json.loads(line)
    return EngineOutput(
        at=Timestamp.parse(rec["at"]),
        kind=OutputKind(rec["kind"]),
        activity=rec.get("activity"),
        status=Status(rec["status"]) if "status" in rec else None,
        candidates=tuple(rec.get("candidates", ())),
        deadline=Timestamp.parse(rec["deadline"]) if "deadline" in rec else None,
        similarity=float(rec["similarity"]) if "similarity" in rec else None,
        reason=EndReason(rec["reason"]) if "reason" in rec else None,
    )


def render_report(outputs: Iterable[EngineOutput]) -> str:
    return "".join(render_output(o) + "\n" for o in outputs)


def parse_report(text: str) -> List[EngineOutput]:
    return [parse_output(line) for line in text.split("\n") if line.strip()]
