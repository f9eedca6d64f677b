"""Online, deadline-aware activity recognition over a sensor event stream.

The engine owns at most one episode at a time. Each activated sensor grows
the episode's cue and the cue is matched against the concept memory:

* a unique best match at or above ``theta`` recognizes the activity and sets
  the deadline to the recognition time plus that activity's reference time;
* otherwise the episode is uncertain and its deadline is the episode start
  plus the longest reference time among activities sharing any cued sensor;
* when the clock reaches the deadline an alert is raised and the episode ends.

A new sensor event after recognition closes the episode and opens the next.
"""

from __future__ import annotations

import enum
import re
from dataclasses import dataclass, replace
from typing import List, Optional, Sequence, Tuple

from .context import AttrLike, Duration, ReferenceTimeTable
from .errors import ConfigError, TimeRegressionError
from .space import ConceptMemory, candidates_intersecting, match_cue

SECONDS_PER_DAY = 86400
_TS_RE = re.compile(r"^(\d+):([01]\d|2[0-3]):([0-5]\d):([0-5]\d)$")


@dataclass(frozen=True, order=True)
class Timestamp:
    """Day index plus second of day, written ``D:HH:MM:SS``."""

    day: int
    second_of_day: int

    def __post_init__(self):
        if self.day < 0:
            raise ValueError("day must be nonnegative")
        if not 0 <= self.second_of_day < SECONDS_PER_DAY:
            raise ValueError(f"second_of_day out of range: {self.second_of_day}")

    @classmethod
    def from_seconds(cls, total: int) -> "Timestamp":
        if total < 0:
            raise ValueError("timestamp cannot be negative")
        day, sec = divmod(total, SECONDS_PER_DAY)
        return cls(day, sec)

    @classmethod
    def parse(cls, text: str) -> "Timestamp":
        m = _TS_RE.match(text.strip())
        if not m:
            raise ValueError(f"invalid timestamp {text!r}, expected D:HH:MM:SS")
        d, h, mi, s = (int(g) for g in m.groups())
        return cls(d, h * 3600 + mi * 60 + s)

    @classmethod
    def at(cls, day: int, hours: int, minutes: int = 0, seconds: int = 0) -> "Timestamp":
        return cls(day, hours * 3600 + minutes * 60 + seconds)

    @property
    def total_seconds(self) -> int:
        return self.day * SECONDS_PER_DAY + self.second_of_day

    def end_of_day(self) -> "Timestamp":
        return Timestamp(self.day, SECONDS_PER_DAY - 1)

    def __add__(self, other: Duration) -> "Timestamp":
        if not isinstance(other, Duration):
            return NotImplemented
        return Timestamp.from_seconds(self.total_seconds + other.seconds)

    def __str__(self) -> str:
        h, rem = divmod(self.second_of_day, 3600)
        m, s = divmod(rem, 60)
        return f"{self.day}:{h:02d}:{m:02d}:{s:02d}"


@dataclass(frozen=True)
class SensorEvent:
    at: Timestamp
    attr: AttrLike
    value: int = 1


@dataclass(frozen=True)
class EngineConfig:
    theta: float = 0.6
    tick_seconds: int = 60

    def __post_init__(self):
        if not 0 < self.theta <= 1:
            raise ConfigError(f"theta must lie in (0, 1], got {self.theta!r}")
        if isinstance(self.tick_seconds, Duration):
            object.__setattr__(self, "tick_seconds", self.tick_seconds.seconds)
        if int(self.tick_seconds) != self.tick_seconds or self.tick_seconds < 1:
            raise ConfigError(f"tick_seconds must be a whole number >= 1, got {self.tick_seconds!r}")


class Status(str, enum.Enum):
    RECOGNIZED = "recognized"
    UNCERTAIN = "uncertain"
    UNKNOWN = "unknown"


class OutputKind(str, enum.Enum):
    EPISODE_START = "episode_start"
    STATUS_CHANGE = "status_change"
    RECOGNIZED = "recognized"
    EPISODE_END = "episode_end"
    ALERT = "alert"


class EndReason(str, enum.Enum):
    NEW_ACTIVITY = "new_activity"
    ALERT_RAISED = "alert_raised"


@dataclass(frozen=True)
class Episode:
    started_at: Timestamp
    cue: frozenset
    status: Status
    deadline: Timestamp
    updated_at: Timestamp
    activity: Optional[str] = None
    recognized_at: Optional[Timestamp] = None
    candidates: Tuple[str, ...] = ()
    similarity: float = 0.0


@dataclass(frozen=True)
class EngineOutput:
    """One engine emission. Fields not meaningful for ``kind`` stay at their defaults."""

    at: Timestamp
    kind: OutputKind
    activity: Optional[str] = None
    status: Optional[Status] = None
    candidates: Tuple[str, ...] = ()
    deadline: Optional[Timestamp] = None
    similarity: Optional[float] = None
    reason: Optional[EndReason] = None


class Engine:
    """Single-owner recognition state machine; see the module docstring."""

    def __init__(self, memory: ConceptMemory, reftimes: ReferenceTimeTable, config: Optional[EngineConfig] = None):
        if not reftimes.covers(memory.context):
            missing = [a for a in memory.context.activities if a not in reftimes.durations]
            extra = [a for a in reftimes.durations if not memory.context.has_activity(a)]
            raise ConfigError(
                f"reference table does not match the context (missing: {missing}, unknown: {extra})"
            )
        self.memory = memory
        self.reftimes = reftimes
        self.config = config or EngineConfig()
        self.clock: Optional[Timestamp] = None
        self.episode: Optional[Episode] = None

    @property
    def horizon(self) -> Duration:
        return self.reftimes.global_horizon

    @property
    def idle(self) -> bool:
        return self.episode is None

    def _advance(self, now: Timestamp) -> None:
        if self.clock is not None and now < self.clock:
            raise TimeRegressionError(f"time {now} is earlier than engine clock {self.clock}")
        self.clock = now

    def _expire(self, now: Timestamp) -> List[EngineOutput]:
        ep = self.episode
        if ep is None or now < ep.deadline:
            return []
        # a deadline can fall before the update that set it (unknown -> uncertain)
        at = max(ep.deadline, ep.updated_at)
        self.episode = None
        return [
            EngineOutput(
                at,
                OutputKind.ALERT,
                activity=ep.activity,
                status=ep.status,
                candidates=ep.candidates,
                deadline=ep.deadline,
                similarity=ep.similarity,
            ),
            EngineOutput(at, OutputKind.EPISODE_END, reason=EndReason.ALERT_RAISED),
        ]

    def on_event(self, event: SensorEvent) -> List[EngineOutput]:
        attr = self.memory.context.attribute(event.attr)
        if event.value not in (0, 1):
            raise ValueError(f"sensor value must be 0 or 1, got {event.value!r}")
        self._advance(event.at)
        out = self._expire(event.at)
        if event.value == 0:
            return out

        now = event.at
        ep = self.episode
        if ep is not None and ep.status is Status.RECOGNIZED:
            out.append(EngineOutput(now, OutputKind.EPISODE_END, reason=EndReason.NEW_ACTIVITY))
            ep = self.episode = None
        if ep is None:
            out.append(EngineOutput(now, OutputKind.EPISODE_START))
            started, cue, previous = now, frozenset([attr]), None
        else:
            started, cue, previous = ep.started_at, ep.cue | {attr}, ep
        out.extend(self._evaluate(now, started, cue, previous))
        return out

    def _evaluate(
        self, now: Timestamp, started: Timestamp, cue: frozenset, previous: Optional[Episode]
    ) -> List[EngineOutput]:
        result = match_cue(self.memory, cue)
        top = result.unique_top
        if top is not None and result.best_similarity >= self.config.theta:
            ref = self.reftimes.get(top)
            deadline = now + (ref if ref is not None else self.horizon)
            self.episode = Episode(
                started_at=started,
                cue=cue,
                status=Status.RECOGNIZED,
                deadline=deadline,
                updated_at=now,
                activity=top,
                recognized_at=now,
                candidates=(top,),
                similarity=result.best_similarity,
            )
            return [
                EngineOutput(
                    now,
                    OutputKind.RECOGNIZED,
                    activity=top,
                    candidates=(top,),
                    deadline=deadline,
                    similarity=result.best_similarity,
                )
            ]

        involved = candidates_intersecting(self.memory, cue)
        durations = [d for d in (self.reftimes.get(a) for a in involved) if d is not None]
        deadline = started + (max(durations) if durations else self.horizon)
        status = Status.UNCERTAIN if involved else Status.UNKNOWN
        candidates = tuple(self.memory.context.ordered_acts(involved))
        episode = Episode(
            started_at=started,
            cue=cue,
            status=status,
            deadline=deadline,
            updated_at=now,
            candidates=candidates,
            similarity=result.best_similarity,
        )
        if previous is not None and (previous.status, previous.candidates, previous.deadline) == (
            status,
            candidates,
            deadline,
        ):
            # nothing observable changed; keep the time the current state was announced
            self.episode = replace(episode, updated_at=previous.updated_at)
            return []
        self.episode = episode
        return [
            EngineOutput(
                now,
                OutputKind.STATUS_CHANGE,
                status=status,
                candidates=candidates,
                deadline=deadline,
                similarity=result.best_similarity,
            )
        ]

    def on_tick(self, now: Timestamp) -> List[EngineOutput]:
        self._advance(now)
        return self._expire(now)

    def _first_tick_at_or_after(self, t: Timestamp) -> Timestamp:
        step = int(self.config.tick_seconds)
        return Timestamp.from_seconds(-(-t.total_seconds // step) * step)

    def _ticks_before(self, limit: Optional[Timestamp], inclusive: bool) -> List[EngineOutput]:
        """Emit what the tick grid would emit up to ``limit``.

        Ticks between deadlines cannot produce output, so only the first grid
        point at or after the active deadline is evaluated.
        """
        ep = self.episode
        if ep is None:
            return []
        tick = self._first_tick_at_or_after(max(ep.deadline, self.clock))
        if tick < limit or (inclusive and tick == limit):
            return self.on_tick(tick)
        return []

    def run_stream(self, events: Sequence[SensorEvent], horizon: Timestamp) -> List[EngineOutput]:
        """Replay ``events`` interleaved with clock ticks every ``tick_seconds`` up to ``horizon``.

        Grid ticks sit on multiples of ``tick_seconds`` counted from day 0,
        00:00:00. A final tick is applied at ``horizon`` itself. An event and a
        tick at the same instant are applied event first.
        """
        for i in range(1, len(events)):
            if events[i].at < events[i - 1].at:
                raise TimeRegressionError(f"event {i} at {events[i].at} precedes event {i - 1} at {events[i - 1].at}")
        if events and horizon < events[-1].at:
            raise ConfigError(f"horizon {horizon} is earlier than the last event at {events[-1].at}")
        if self.clock is not None and horizon < self.clock:
            raise TimeRegressionError(f"horizon {horizon} is earlier than engine clock {self.clock}")

        out: List[EngineOutput] = []
        for ev in events:
            # a tick at the event's own instant runs after the event
            while self.episode is not None:
                emitted = self._ticks_before(ev.at, inclusive=False)
                if not emitted:
                    break
                out.extend(emitted)
            out.extend(self.on_event(ev))
        out.extend(self._ticks_before(horizon, inclusive=True))
        out.extend(self.on_tick(horizon))
        return out


def new_engine(memory: ConceptMemory, reftimes: ReferenceTimeTable, config: Optional[EngineConfig] = None) -> Engine:
    return Engine(memory, reftimes, config)


def naive_run_stream(engine: Engine, events: Sequence[SensorEvent], horizon: Timestamp) -> List[EngineOutput]:
    """Reference replay that applies every grid tick one by one.

    Linear in the number of grid ticks; kept as an oracle for ``Engine.run_stream``.
    """
    step = int(engine.config.tick_seconds)
    out: List[EngineOutput] = []
    if not events:
        return out + engine.on_tick(horizon)
    t = -(-events[0].at.total_seconds // step) * step
    i = 0
    while i < len(events) or t <= horizon.total_seconds:
        if i < len(events) and (t > horizon.total_seconds or events[i].at.total_seconds <= t):
            out.extend(engine.on_event(events[i]))
            i += 1
        else:
            out.extend(engine.on_tick(Timestamp.from_seconds(t)))
            t += step
    out.extend(engine.on_tick(horizon))
    return out
