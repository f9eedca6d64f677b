"""Derivation operators, closure, concept enumeration and three-way concepts.

All set algebra runs on int bitsets in the context's canonical order; the
public functions accept and return frozensets of names so callers never see
bit positions.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Iterator, List

from .context import AttrLike, FormalContext, intent_of
from .errors import LatticeTooLargeError

MAX_ENUMERATION_ATTRIBUTES = 63


@dataclass(frozen=True)
class FormalConcept:
    extent: frozenset
    intent: frozenset


@dataclass(frozen=True)
class ThreeWayConcept:
    """Extent with its contributing and non-contributing attributes."""

    extent: frozenset
    positive_intent: frozenset
    negative_intent: frozenset


# bitset kernels


def extent_mask(context: FormalContext, attr_mask: int) -> int:
    """Activities whose row contains every attribute in ``attr_mask``."""
    ext = context.all_activities_mask
    i = 0
    m = attr_mask
    while m:
        if m & 1:
            ext &= context.column_masks[i]
        m >>= 1
        i += 1
    return ext


def intent_mask(context: FormalContext, act_mask: int) -> int:
    """Attributes shared by every activity in ``act_mask``."""
    common = context.all_attributes_mask
    k = 0
    m = act_mask
    while m:
        if m & 1:
            common &= context.row_masks[k]
        m >>= 1
        k += 1
    return common


def closure_mask(context: FormalContext, attr_mask: int) -> int:
    return intent_mask(context, extent_mask(context, attr_mask))


# name-level operators


def derive_extent(context: FormalContext, attrs: Iterable[AttrLike]) -> frozenset:
    return context.mask_to_acts(extent_mask(context, context.attrs_to_mask(attrs)))


def derive_intent(context: FormalContext, acts: Iterable[str]) -> frozenset:
    return context.mask_to_attrs(intent_mask(context, context.acts_to_mask(acts)))


def closure(context: FormalContext, attrs: Iterable[AttrLike]) -> frozenset:
    return context.mask_to_attrs(closure_mask(context, context.attrs_to_mask(attrs)))


def iter_concept_masks(context: FormalContext) -> Iterator[tuple]:
    """Yield ``(extent_mask, intent_mask)`` for every concept in lectic order of intents.

    Sets are compared at their first differing attribute in file order: the
    set containing it is the larger. Enumeration starts from the closure of
    the empty set and ends at the full attribute set.
    """
    m = context.n_attributes
    if m > MAX_ENUMERATION_ATTRIBUTES:
        raise LatticeTooLargeError(
            f"{m} attributes exceeds the enumeration bound of {MAX_ENUMERATION_ATTRIBUTES}"
        )
    full = context.all_attributes_mask
    current = closure_mask(context, 0)
    while True:
        yield extent_mask(context, current), current
        if current == full:
            return
        nxt = None
        for i in range(m - 1, -1, -1):
            bit = 1 << i
            if current & bit:
                continue
            lower = bit - 1
            candidate = closure_mask(context, (current & lower) | bit)
            if candidate & lower == current & lower:
                nxt = candidate
                break
        if nxt is None:
            return
        current = nxt


def enumerate_concepts(context: FormalContext) -> List[FormalConcept]:
    """Every formal concept exactly once, in lectic order of intents."""
    return [
        FormalConcept(context.mask_to_acts(e), context.mask_to_attrs(i))
        for e, i in iter_concept_masks(context)
    ]


def three_way_from_activity(context: FormalContext, activity: str) -> ThreeWayConcept:
    positive = intent_of(context, activity)
    pos_mask = context.attrs_to_mask(positive)
    return ThreeWayConcept(
        extent=context.mask_to_acts(extent_mask(context, pos_mask)),
        positive_intent=positive,
        negative_intent=context.mask_to_attrs(context.all_attributes_mask & ~pos_mask),
    )


def format_concept(context: FormalContext, concept: FormalConcept) -> str:
    """One-line rendering: extent names, ``|``, intent names, canonical order, ``-`` for empty."""
    ext = ",".join(context.ordered_acts(concept.extent)) or "-"
    itt = ",".join(str(a) for a in context.ordered_attrs(concept.intent)) or "-"
    return f"{ext} | {itt}"
