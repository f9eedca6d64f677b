"""Training context and reference-time table.

A context file is comma-separated text. The first line repeats each
quality dimension name once per attribute column, the second line names the
attributes, and every following line is an activity name followed by one
0/1 cell per attribute::

    ,PIR,PIR,Magnetic
    ,Shower,Basin,Fridge
    Toileting,1,0,0

The reference-time file holds ``activity,H:MM:SS`` pairs, with ``NA`` for an
activity whose duration was never observed.
"""

from __future__ import annotations

import csv
import io
import re
from dataclasses import dataclass, field
from typing import Dict, Iterable, Iterator, List, Mapping, Optional, Tuple, Union

from .errors import ParseError, UnknownNameError

AttrLike = Union["AttributeId", str, Tuple[str, str]]

_DURATION_RE = re.compile(r"^(\d+):([0-5]\d):([0-5]\d)$")
NOT_AVAILABLE = "NA"


@dataclass(frozen=True)
class QualityDimension:
    """A sensor category grouping one or more binary attributes."""

    name: str
    attributes: Tuple[str, ...]

    def __post_init__(self):
        object.__setattr__(self, "attributes", tuple(self.attributes))
        if not self.name:
            raise ValueError("dimension name must be nonempty")
        if not self.attributes:
            raise ValueError(f"dimension {self.name!r} has no attributes")
        seen = set()
        for a in self.attributes:
            if not a:
                raise ValueError(f"dimension {self.name!r} has an empty attribute name")
            if a in seen:
                raise ValueError(f"duplicate attribute {a!r} in dimension {self.name!r}")
            seen.add(a)


@dataclass(frozen=True, order=True)
class AttributeId:
    dimension: str
    attribute: str

    def __str__(self) -> str:
        return f"{self.dimension}.{self.attribute}"


@dataclass(frozen=True)
class FormalContext:
    """Activities x dimension-qualified attributes with a binary incidence.

    Row and column order is the file order and is the canonical basis for
    every bitset and vector built from the context. Attribute ``i`` maps to
    bit ``1 << i``; activity ``k`` maps to bit ``1 << k``.
    """

    activities: Tuple[str, ...]
    dimensions: Tuple[QualityDimension, ...]
    incidence: Tuple[Tuple[int, ...], ...]

    attributes: Tuple[AttributeId, ...] = field(init=False, repr=False, compare=False)
    row_masks: Tuple[int, ...] = field(init=False, repr=False, compare=False)
    column_masks: Tuple[int, ...] = field(init=False, repr=False, compare=False)
    _attr_index: Dict[AttributeId, int] = field(init=False, repr=False, compare=False)
    _bare_index: Dict[str, List[int]] = field(init=False, repr=False, compare=False)
    _act_index: Dict[str, int] = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        activities = tuple(self.activities)
        dimensions = tuple(self.dimensions)
        incidence = tuple(tuple(row) for row in self.incidence)
        object.__setattr__(self, "activities", activities)
        object.__setattr__(self, "dimensions", dimensions)
        object.__setattr__(self, "incidence", incidence)

        if not activities:
            raise ValueError("context needs at least one activity")
        if not dimensions:
            raise ValueError("context needs at least one dimension")
        act_index: Dict[str, int] = {}
        for k, name in enumerate(activities):
            if not name:
                raise ValueError(f"activity {k} has an empty name")
            if name in act_index:
                raise ValueError(f"duplicate activity {name!r}")
            act_index[name] = k
        dim_names = [d.name for d in dimensions]
        if len(set(dim_names)) != len(dim_names):
            raise ValueError("duplicate dimension name")

        attributes = tuple(AttributeId(d.name, a) for d in dimensions for a in d.attributes)
        if len(incidence) != len(activities):
            raise ValueError("incidence row count does not match activity count")
        row_masks = []
        for k, row in enumerate(incidence):
            if len(row) != len(attributes):
                raise ValueError(
                    f"row {activities[k]!r} has {len(row)} cells, expected {len(attributes)}"
                )
            mask = 0
            for i, cell in enumerate(row):
                if cell not in (0, 1) or isinstance(cell, bool):
                    raise ValueError(f"non-binary cell {cell!r} at ({activities[k]!r}, {attributes[i]})")
                if cell:
                    mask |= 1 << i
            row_masks.append(mask)
        column_masks = []
        for i in range(len(attributes)):
            col = 0
            for k, rm in enumerate(row_masks):
                if rm >> i & 1:
                    col |= 1 << k
            column_masks.append(col)
        bare: Dict[str, List[int]] = {}
        for i, a in enumerate(attributes):
            bare.setdefault(a.attribute, []).append(i)

        object.__setattr__(self, "attributes", attributes)
        object.__setattr__(self, "row_masks", tuple(row_masks))
        object.__setattr__(self, "column_masks", tuple(column_masks))
        object.__setattr__(self, "_attr_index", {a: i for i, a in enumerate(attributes)})
        object.__setattr__(self, "_bare_index", bare)
        object.__setattr__(self, "_act_index", act_index)

    @property
    def n_activities(self) -> int:
        return len(self.activities)

    @property
    def n_attributes(self) -> int:
        return len(self.attributes)

    @property
    def all_attributes_mask(self) -> int:
        return (1 << len(self.attributes)) - 1

    @property
    def all_activities_mask(self) -> int:
        return (1 << len(self.activities)) - 1

    def incidence_count(self) -> int:
        return sum(bin(m).count("1") for m in self.row_masks)

    def dimension_of(self, attr: AttributeId) -> QualityDimension:
        for d in self.dimensions:
            if d.name == attr.dimension:
                return d
        raise UnknownNameError("dimension", attr.dimension, [d.name for d in self.dimensions])

    # name resolution

    def attribute(self, ref: AttrLike) -> AttributeId:
        """Resolve ``ref`` to a context attribute.

        Accepts an ``AttributeId``, a ``(dimension, attribute)`` pair, a dotted
        ``"Dimension.attribute"`` string, or a bare attribute name when that
        name occurs under exactly one dimension.
        """
        return self.attributes[self.attribute_index(ref)]

    def attribute_index(self, ref: AttrLike) -> int:
        if isinstance(ref, AttributeId):
            key = ref
        elif isinstance(ref, tuple):
            key = AttributeId(*ref)
        else:
            if "." in ref:
                dim, _, name = ref.partition(".")
                idx = self._attr_index.get(AttributeId(dim, name))
                if idx is not None:
                    return idx
            hits = self._bare_index.get(ref, [])
            if len(hits) == 1:
                return hits[0]
            if len(hits) > 1:
                raise UnknownNameError(
                    "attribute (ambiguous across dimensions)",
                    ref,
                    [str(self.attributes[i]) for i in hits],
                )
            raise UnknownNameError("attribute", ref, [str(a) for a in self.attributes])
        try:
            return self._attr_index[key]
        except KeyError:
            raise UnknownNameError("attribute", str(key), [str(a) for a in self.attributes]) from None

    def activity_index(self, name: str) -> int:
        try:
            return self._act_index[name]
        except KeyError:
            raise UnknownNameError("activity", name, list(self.activities)) from None

    def has_activity(self, name: str) -> bool:
        return name in self._act_index

    # bitset conversions

    def attrs_to_mask(self, attrs: Iterable[AttrLike]) -> int:
        mask = 0
        for a in attrs:
            mask |= 1 << self.attribute_index(a)
        return mask

    def mask_to_attrs(self, mask: int) -> frozenset:
        return frozenset(self.attributes[i] for i in _bits(mask))

    def acts_to_mask(self, acts: Iterable[str]) -> int:
        mask = 0
        for a in acts:
            mask |= 1 << self.activity_index(a)
        return mask

    def mask_to_acts(self, mask: int) -> frozenset:
        return frozenset(self.activities[k] for k in _bits(mask))

    def ordered_attrs(self, attrs: Iterable[AttrLike]) -> List[AttributeId]:
        """Attributes sorted into canonical basis order."""
        return [self.attributes[i] for i in _bits(self.attrs_to_mask(attrs))]

    def ordered_acts(self, acts: Iterable[str]) -> List[str]:
        return [self.activities[k] for k in _bits(self.acts_to_mask(acts))]


def _bits(mask: int) -> Iterator[int]:
    i = 0
    while mask:
        if mask & 1:
            yield i
        mask >>= 1
        i += 1


def intent_of(context: FormalContext, activity: str) -> frozenset:
    """Attributes whose incidence is 1 for ``activity``."""
    return context.mask_to_attrs(context.row_masks[context.activity_index(activity)])


def _read_text(source) -> str:
    if isinstance(source, str):
        return source
    return source.read()


def parse_context(source, *, name: Optional[str] = None) -> FormalContext:
    """Parse the context file format from a string or text stream.

    Every error is a ``ParseError`` carrying 1-based line and column numbers.
    """
    text = _read_text(source)
    rows = [r for r in csv.reader(io.StringIO(text))]
    numbered = [(i + 1, r) for i, r in enumerate(rows) if any(c.strip() for c in r)]
    if len(numbered) < 3:
        raise ParseError("expected a dimension row, an attribute row and at least one activity", source=name)

    (dim_line, dim_row), (attr_line, attr_row) = numbered[0], numbered[1]
    if len(dim_row) != len(attr_row):
        raise ParseError(
            f"dimension row has {len(dim_row)} cells but attribute row has {len(attr_row)}",
            source=name,
            line=attr_line,
        )
    if len(dim_row) < 2:
        raise ParseError("header has no attribute columns", source=name, line=dim_line)

    dims: List[Tuple[str, List[str]]] = []
    for col in range(1, len(dim_row)):
        dname, aname = dim_row[col].strip(), attr_row[col].strip()
        if not dname:
            raise ParseError("empty dimension name", source=name, line=dim_line, column=col + 1)
        if not aname:
            raise ParseError("empty attribute name", source=name, line=attr_line, column=col + 1)
        if dims and dims[-1][0] == dname:
            if aname in dims[-1][1]:
                raise ParseError(
                    f"duplicate attribute {dname}.{aname}", source=name, line=attr_line, column=col + 1
                )
            dims[-1][1].append(aname)
        else:
            if any(d == dname for d, _ in dims):
                raise ParseError(
                    f"dimension {dname!r} columns are not contiguous", source=name, line=dim_line, column=col + 1
                )
            dims.append((dname, [aname]))

    n_cols = len(dim_row) - 1
    activities: List[str] = []
    incidence: List[Tuple[int, ...]] = []
    for line_no, row in numbered[2:]:
        if len(row) != n_cols + 1:
            raise ParseError(f"expected {n_cols + 1} cells, found {len(row)}", source=name, line=line_no)
        act = row[0].strip()
        if not act:
            raise ParseError("empty activity name", source=name, line=line_no, column=1)
        if act in activities:
            raise ParseError(f"duplicate activity {act!r}", source=name, line=line_no, column=1)
        cells = []
        for col, cell in enumerate(row[1:], start=2):
            cell = cell.strip()
            if cell not in ("0", "1"):
                raise ParseError(f"non-binary cell {cell!r}", source=name, line=line_no, column=col)
            cells.append(int(cell))
        activities.append(act)
        incidence.append(tuple(cells))

    return FormalContext(
        activities=tuple(activities),
        dimensions=tuple(QualityDimension(d, tuple(attrs)) for d, attrs in dims),
        incidence=tuple(incidence),
    )


def serialize_context(context: FormalContext) -> str:
    """Canonical text form; ``parse_context`` of the result is the same context."""
    out = io.StringIO()
    w = csv.writer(out, lineterminator="\n")
    w.writerow([""] + [a.dimension for a in context.attributes])
    w.writerow([""] + [a.attribute for a in context.attributes])
    for act, row in zip(context.activities, context.incidence):
        w.writerow([act] + [str(c) for c in row])
    return out.getvalue()


@dataclass(frozen=True, order=True)
class Duration:
    """A whole number of seconds, written ``H:MM:SS``."""

    seconds: int

    def __post_init__(self):
        if isinstance(self.seconds, bool) or not isinstance(self.seconds, int):
            raise TypeError("Duration seconds must be an int")
        if self.seconds < 0:
            raise ValueError("Duration cannot be negative")

    @classmethod
    def parse(cls, text: str) -> "Duration":
        m = _DURATION_RE.match(text.strip())
        if not m:
            raise ValueError(f"invalid duration {text!r}, expected H:MM:SS")
        h, mi, s = (int(g) for g in m.groups())
        return cls(h * 3600 + mi * 60 + s)

    def __str__(self) -> str:
        h, rem = divmod(self.seconds, 3600)
        m, s = divmod(rem, 60)
        return f"{h}:{m:02d}:{s:02d}"


@dataclass(frozen=True)
class ReferenceTimeTable:
    """Per-activity completion durations and the global horizon.

    ``None`` marks an activity whose duration is unavailable. It is kept
    distinct from zero and from the horizon so callers choose the fallback.
    """

    durations: Mapping[str, Optional[Duration]]
    global_horizon: Duration = field(init=False)

    def __post_init__(self):
        durations = dict(self.durations)
        available = [d for d in durations.values() if d is not None]
        if not available:
            raise ValueError("reference table needs at least one available duration")
        object.__setattr__(self, "durations", durations)
        object.__setattr__(self, "global_horizon", max(available))

    def get(self, activity: str) -> Optional[Duration]:
        try:
            return self.durations[activity]
        except KeyError:
            raise UnknownNameError("activity", activity, list(self.durations)) from None

    def covers(self, context: FormalContext) -> bool:
        return set(self.durations) == set(context.activities)


def parse_reference_times(source, context: FormalContext, *, name: Optional[str] = None) -> ReferenceTimeTable:
    text = _read_text(source)
    found: Dict[str, Optional[Duration]] = {}
    for line_no, row in enumerate(csv.reader(io.StringIO(text)), start=1):
        if not any(c.strip() for c in row):
            continue
        if len(row) != 2:
            raise ParseError(f"expected 'activity,duration', found {len(row)} cells", source=name, line=line_no)
        act, raw = row[0].strip(), row[1].strip()
        if not context.has_activity(act):
            raise ParseError(f"unknown activity {act!r}", source=name, line=line_no, column=1)
        if act in found:
            raise ParseError(f"duplicate entry for {act!r}", source=name, line=line_no, column=1)
        if raw == NOT_AVAILABLE:
            found[act] = None
            continue
        try:
            found[act] = Duration.parse(raw)
        except ValueError as exc:
            raise ParseError(str(exc), source=name, line=line_no, column=2) from None
    missing = [a for a in context.activities if a not in found]
    if missing:
        raise ParseError(f"missing reference time for activity {missing[0]!r}", source=name)
    try:
        return ReferenceTimeTable({a: found[a] for a in context.activities})
    except ValueError as exc:
        raise ParseError(str(exc), source=name) from None


def serialize_reference_times(table: ReferenceTimeTable) -> str:
    return "".join(
        f"{act},{NOT_AVAILABLE if d is None else d}\n" for act, d in table.durations.items()
    )
