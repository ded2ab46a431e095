"""Events: named atomic occurrences with small scalar payloads.

Events are immutable, hashable, and carry a deterministic total order
(name first, then sorted payload pairs) so that tie-breaking and trace
serialization are reproducible across runs.
"""

from __future__ import annotations

import json
from typing import Iterator, Mapping, Union

Scalar = Union[int, str]

_INT_TAG = 0
_STR_TAG = 1


def _value_key(value: Scalar) -> tuple:
    # ints sort before strings so mixed payloads still order totally
    if isinstance(value, bool):
        raise TypeError("bool payload values are not supported")
    if isinstance(value, int):
        return (_INT_TAG, value, "")
    if isinstance(value, str):
        return (_STR_TAG, 0, value)
    raise TypeError(f"payload values must be int or str, got {type(value).__name__}")


class Event:
    """An atomic occurrence: a name plus an ordered (key, value) payload."""

    __slots__ = ("name", "payload", "_hash", "_key")

    def __init__(self, name: str, payload: Mapping[str, Scalar] | None = None, **kw: Scalar):
        if not isinstance(name, str) or not name:
            raise TypeError("event name must be a nonempty string")
        items = dict(payload or {})
        items.update(kw)
        pairs = []
        for key in sorted(items):
            value = items[key]
            _value_key(value)  # validates the type
            pairs.append((key, value))
        object.__setattr__(self, "name", name)
        object.__setattr__(self, "payload", tuple(pairs))
        object.__setattr__(self, "_key", (name, tuple((k, *_value_key(v)) for k, v in pairs)))
        object.__setattr__(self, "_hash", hash((name, self.payload)))

    def __setattr__(self, *_):
        raise AttributeError("events are immutable")

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, Event)
            and self._hash == other._hash
            and self.name == other.name
            and self.payload == other.payload
        )

    def __hash__(self) -> int:
        return self._hash

    def __lt__(self, other: "Event") -> bool:
        return self.sort_key < other.sort_key

    def __le__(self, other: "Event") -> bool:
        return self.sort_key <= other.sort_key

    def __gt__(self, other: "Event") -> bool:
        return self.sort_key > other.sort_key

    def __ge__(self, other: "Event") -> bool:
        return self.sort_key >= other.sort_key

    @property
    def sort_key(self) -> tuple:
        """Key realizing the deterministic total order over events."""
        return self._key

    def get(self, key: str, default: Scalar | None = None) -> Scalar | None:
        for k, v in self.payload:
            if k == key:
                return v
        return default

    def __getitem__(self, key: str) -> Scalar:
        for k, v in self.payload:
            if k == key:
                return v
        raise KeyError(key)

    def __repr__(self) -> str:
        if not self.payload:
            return self.name
        args = ", ".join(f"{k}={v!r}" for k, v in self.payload)
        return f"{self.name}({args})"

    def to_json_obj(self) -> dict:
        return {"name": self.name, "payload": {k: v for k, v in self.payload}}

    @classmethod
    def from_json_obj(cls, obj: Mapping) -> "Event":
        if "name" not in obj:
            raise ValueError("event object missing 'name'")
        return cls(obj["name"], obj.get("payload") or {})


class Trace:
    """An ordered sequence of events, serializable as JSON Lines."""

    __slots__ = ("events",)

    def __init__(self, events: Iterator[Event] | None = None):
        self.events = tuple(events or ())

    def __iter__(self) -> Iterator[Event]:
        return iter(self.events)

    def __len__(self) -> int:
        return len(self.events)

    def __getitem__(self, i):
        return self.events[i]

    def __eq__(self, other) -> bool:
        return isinstance(other, Trace) and self.events == other.events

    def __hash__(self) -> int:
        return hash(self.events)

    def __repr__(self) -> str:
        return f"Trace({list(self.events)!r})"

    def to_jsonl(self) -> str:
        return "".join(event_to_jsonl_line(e) for e in self.events)

    @classmethod
    def from_jsonl(cls, text: str) -> "Trace":
        events = []
        for lineno, line in enumerate(text.splitlines(), start=1):
            if not line.strip():
                continue
            try:
                events.append(Event.from_json_obj(json.loads(line)))
            except (ValueError, TypeError) as exc:
                raise TraceFormatError(lineno, str(exc)) from exc
        return cls(events)

    def save(self, path) -> None:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(self.to_jsonl())

    @classmethod
    def load(cls, path) -> "Trace":
        with open(path, "r", encoding="utf-8") as fh:
            return cls.from_jsonl(fh.read())


class TraceFormatError(ValueError):
    """A trace file line that does not parse as an event."""

    def __init__(self, lineno: int, reason: str):
        super().__init__(f"line {lineno}: {reason}")
        self.lineno = lineno


def event_to_jsonl_line(event: Event) -> str:
    # payload keys are already sorted at construction
    obj = {"name": event.name, "payload": {k: v for k, v in event.payload}}
    return json.dumps(obj, separators=(",", ":")) + "\n"
