"""Concept-based activity recognition with deadline alerts for smart-home sensor streams."""

from .context import (
    AttributeId,
    Duration,
    FormalContext,
    QualityDimension,
    ReferenceTimeTable,
    intent_of,
    parse_context,
    parse_reference_times,
    serialize_context,
)
from .engine import (
    Engine,
    EngineConfig,
    EngineOutput,
    Episode,
    OutputKind,
    SensorEvent,
    Status,
    Timestamp,
    new_engine,
)
from .fca import (
    FormalConcept,
    ThreeWayConcept,
    closure,
    derive_extent,
    derive_intent,
    enumerate_concepts,
    three_way_from_activity,
)
from .space import (
    ConceptMemory,
    Cue,
    DimensionWeights,
    MatchKind,
    MatchResult,
    StateVector,
    build_memory,
    candidates_intersecting,
    encode_concept,
    match_cue,
    similarity,
)

__version__ = "0.1.0"

__all__ = [
    "AttributeId",
    "Duration",
    "FormalContext",
    "QualityDimension",
    "ReferenceTimeTable",
    "intent_of",
    "parse_context",
    "parse_reference_times",
    "serialize_context",
    "Engine",
    "EngineConfig",
    "EngineOutput",
    "Episode",
    "OutputKind",
    "SensorEvent",
    "Status",
    "Timestamp",
    "new_engine",
    "FormalConcept",
    "ThreeWayConcept",
    "closure",
    "derive_extent",
    "derive_intent",
    "enumerate_concepts",
    "three_way_from_activity",
    "ConceptMemory",
    "Cue",
    "DimensionWeights",
    "MatchKind",
    "MatchResult",
    "StateVector",
    "build_memory",
    "candidates_intersecting",
    "encode_concept",
    "match_cue",
    "similarity",
]
