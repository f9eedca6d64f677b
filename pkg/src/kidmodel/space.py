"""Concept vectors over the attribute basis and cue matching.

Each activity's contributing attributes become a nonnegative vector over the
canonical attribute basis: the coordinate of an attribute is the weight of its
quality dimension when the attribute contributes and 0 otherwise. Vectors are
scaled to unit norm, so they behave like pure states whose overlap (inner
product) is the similarity between two descriptions.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from typing import Dict, Iterable, List, Mapping, Optional, Tuple, Union

from .context import AttrLike, AttributeId, FormalContext
from .errors import ConfigError, KidModelError
from .fca import ThreeWayConcept, three_way_from_activity

# scores closer than this are treated as tied
TIE_EPSILON = 1e-12
_SORT_DIGITS = 12


class EmptySupportError(KidModelError, ValueError):
    """A vector was requested for an empty attribute set."""


class BasisMismatchError(KidModelError, ValueError):
    pass


@dataclass(frozen=True)
class DimensionWeights:
    """Positive salience weight per quality dimension; unlisted dimensions weigh 1."""

    weights: Tuple[Tuple[str, float], ...] = ()

    def __post_init__(self):
        items = self.weights.items() if isinstance(self.weights, Mapping) else self.weights
        cleaned = []
        for name, w in items:
            w = float(w)
            if not math.isfinite(w) or w <= 0:
                raise ConfigError(f"weight for dimension {name!r} must be a positive number, got {w!r}")
            if w != 1.0:
                cleaned.append((str(name), w))
        object.__setattr__(self, "weights", tuple(sorted(cleaned)))

    @classmethod
    def uniform(cls) -> "DimensionWeights":
        return cls()

    def of(self, dimension: str) -> float:
        for name, w in self.weights:
            if name == dimension:
                return w
        return 1.0

    def scaled(self, factor: float, context: FormalContext) -> "DimensionWeights":
        """Every dimension of ``context`` reweighted by ``factor``, implicit 1s included."""
        return DimensionWeights(tuple((d.name, self.of(d.name) * factor) for d in context.dimensions))

    def validate_for(self, context: FormalContext) -> None:
        known = {d.name for d in context.dimensions}
        for name, _ in self.weights:
            if name not in known:
                raise ConfigError(f"weight given for unknown dimension {name!r}")

    def as_dict(self, context: FormalContext) -> Dict[str, float]:
        return {d.name: self.of(d.name) for d in context.dimensions}


@dataclass(frozen=True)
class StateVector:
    basis: Tuple[AttributeId, ...] = field(repr=False)
    coords: Tuple[float, ...]
    support: frozenset

    @property
    def norm(self) -> float:
        return math.sqrt(math.fsum(c * c for c in self.coords))

    def coordinate(self, attr: AttributeId) -> float:
        return self.coords[self.basis.index(attr)]


def encode_mask(context: FormalContext, attr_mask: int, weights: Optional[DimensionWeights] = None) -> StateVector:
    weights = weights or DimensionWeights()
    if attr_mask == 0:
        raise EmptySupportError("cannot encode an empty attribute set as a unit vector")
    raw = [
        weights.of(a.dimension) if attr_mask >> i & 1 else 0.0
        for i, a in enumerate(context.attributes)
    ]
    norm = math.sqrt(math.fsum(c * c for c in raw))
    coords = tuple(c / norm for c in raw)
    return StateVector(context.attributes, coords, context.mask_to_attrs(attr_mask))


def encode_attrs(context: FormalContext, attrs: Iterable[AttrLike], weights: Optional[DimensionWeights] = None) -> StateVector:
    return encode_mask(context, context.attrs_to_mask(attrs), weights)


def encode_concept(
    context: FormalContext, concept: ThreeWayConcept, weights: Optional[DimensionWeights] = None
) -> StateVector:
    """Unit vector of the concept's contributing attributes.

    Raises:
        EmptySupportError: the concept has no contributing attribute.
    """
    return encode_attrs(context, concept.positive_intent, weights)


def similarity(a: StateVector, b: StateVector) -> float:
    """Overlap of two unit state vectors, in [0, 1]."""
    if a.basis != b.basis:
        raise BasisMismatchError("state vectors are defined over different bases")
    if a.coords == b.coords:
        return 1.0
    s = math.fsum(x * y for x, y in zip(a.coords, b.coords) if x and y)
    return min(1.0, max(0.0, s))


def fidelity(a: StateVector, b: StateVector) -> float:
    """Squared overlap, the transition probability between the two states."""
    return similarity(a, b) ** 2


@dataclass(frozen=True)
class MemoryEntry:
    activity: str
    concept: ThreeWayConcept
    intent_mask: int
    vector: Optional[StateVector]  # None for an activity with no contributing attribute


@dataclass(frozen=True)
class ConceptMemory:
    """The learned concepts of every activity with their state vectors."""

    context: FormalContext
    weights: DimensionWeights
    entries: Tuple[MemoryEntry, ...]

    def entry(self, activity: str) -> MemoryEntry:
        return self.entries[self.context.activity_index(activity)]

    @property
    def basis(self) -> Tuple[AttributeId, ...]:
        return self.context.attributes


def build_memory(context: FormalContext, weights: Optional[DimensionWeights] = None) -> ConceptMemory:
    weights = weights or DimensionWeights()
    weights.validate_for(context)
    entries = []
    for act, mask in zip(context.activities, context.row_masks):
        concept = three_way_from_activity(context, act)
        vec = encode_mask(context, mask, weights) if mask else None
        entries.append(MemoryEntry(act, concept, mask, vec))
    return ConceptMemory(context, weights, tuple(entries))


@dataclass(frozen=True)
class Cue:
    """Attributes observed so far in one episode."""

    attrs: frozenset

    @classmethod
    def of(cls, context: FormalContext, attrs: Iterable[AttrLike]) -> "Cue":
        return cls(context.mask_to_attrs(context.attrs_to_mask(attrs)))


class MatchKind(str, enum.Enum):
    EXACT = "exact"
    SMALLEST_SUPERSET = "smallest_superset"
    LARGEST_SUBSET = "largest_subset"
    OVERLAP = "overlap"
    NONE = "none"


@dataclass(frozen=True)
class MatchResult:
    kind: MatchKind
    candidates: Tuple[str, ...]
    best_similarity: float
    scores: Tuple[float, ...] = ()

    @property
    def unique_top(self) -> Optional[str]:
        """The top candidate when it strictly beats every other, else None."""
        if not self.candidates:
            return None
        if len(self.candidates) > 1 and self.scores[0] - self.scores[1] <= TIE_EPSILON:
            return None
        return self.candidates[0]


def _popcount(x: int) -> int:
    return bin(x).count("1")


def match_cue(
    memory: ConceptMemory,
    cue: Union[Cue, Iterable[AttrLike]],
    weights: Optional[DimensionWeights] = None,
) -> MatchResult:
    """Find the stored descriptions most similar to ``cue``.

    Tiers are tried in order and the first nonempty one wins: intents equal to
    the cue; the smallest intents containing it; the largest intents it
    contains; any intent sharing an attribute, ranked by similarity. Ties are
    kept. Activities with an empty intent never match.
    """
    ctx = memory.context
    attrs = cue.attrs if isinstance(cue, Cue) else cue
    cue_mask = ctx.attrs_to_mask(attrs)
    if cue_mask == 0:
        raise EmptySupportError("cue must contain at least one attribute")

    if weights is None or weights == memory.weights:
        weights = memory.weights
        vectors = [e.vector for e in memory.entries]
    else:
        weights.validate_for(ctx)
        vectors = [encode_mask(ctx, e.intent_mask, weights) if e.intent_mask else None for e in memory.entries]
    cue_vec = encode_mask(ctx, cue_mask, weights)

    live = [k for k, e in enumerate(memory.entries) if e.intent_mask]
    exact = [k for k in live if memory.entries[k].intent_mask == cue_mask]
    if exact:
        kind, chosen = MatchKind.EXACT, exact
    else:
        supers = [k for k in live if memory.entries[k].intent_mask & cue_mask == cue_mask]
        subs = [k for k in live if memory.entries[k].intent_mask & ~cue_mask == 0]
        overlap = [k for k in live if memory.entries[k].intent_mask & cue_mask]
        if supers:
            least = min(_popcount(memory.entries[k].intent_mask) for k in supers)
            kind = MatchKind.SMALLEST_SUPERSET
            chosen = [k for k in supers if _popcount(memory.entries[k].intent_mask) == least]
        elif subs:
            most = max(_popcount(memory.entries[k].intent_mask) for k in subs)
            kind = MatchKind.LARGEST_SUBSET
            chosen = [k for k in subs if _popcount(memory.entries[k].intent_mask) == most]
        elif overlap:
            kind, chosen = MatchKind.OVERLAP, overlap
        else:
            return MatchResult(MatchKind.NONE, (), 0.0, ())

    scored = [(similarity(cue_vec, vectors[k]), k) for k in chosen]
    scored.sort(key=lambda sk: (-round(sk[0], _SORT_DIGITS), sk[1]))
    return MatchResult(
        kind=kind,
        candidates=tuple(memory.entries[k].activity for _, k in scored),
        best_similarity=scored[0][0],
        scores=tuple(s for s, _ in scored),
    )


def candidates_intersecting(memory: ConceptMemory, cue: Union[Cue, Iterable[AttrLike]]) -> frozenset:
    """Activities whose contributing attributes include any cued attribute."""
    ctx = memory.context
    attrs = cue.attrs if isinstance(cue, Cue) else cue
    cue_mask = ctx.attrs_to_mask(attrs)
    return frozenset(e.activity for e in memory.entries if e.intent_mask & cue_mask)


def ordered_candidates(memory: ConceptMemory, acts: Iterable[str]) -> List[str]:
    return memory.context.ordered_acts(acts)
