"""Append-only event log backing the registry's audit trail.

Events carry a gapless, strictly increasing sequence and are never modified
or deleted. Persistence is one canonical-JSON event per line; replaying the
file must reconstruct state exactly (the reducers live in `service`).
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from enum import Enum
from pathlib import Path
from typing import Iterable, Sequence

from modelregistry.jsonio import canonical_json


class EventKind(str, Enum):
    SUBMISSION_ACCEPTED = "SubmissionAccepted"
    VERSION_ADDED = "VersionAdded"
    ATTESTATION_RECORDED = "AttestationRecorded"
    STATUS_CHANGED = "StatusChanged"
    VIOLATION_OPENED = "ViolationOpened"
    FINE_ASSESSED = "FineAssessed"
    STAMP_ISSUED = "StampIssued"
    THIRD_PARTY_CHECK_LOGGED = "ThirdPartyCheckLogged"


class CorruptLog(Exception):
    """Sequence gap or malformed event; the service must refuse to start."""


@dataclass(frozen=True)
class RegistryEvent:
    sequence: int
    timestamp: int
    actor: dict
    kind: EventKind
    body: dict

    def to_dict(self) -> dict:
        return {
            "sequence": self.sequence,
            "timestamp": self.timestamp,
            "actor": self.actor,
            "kind": self.kind.value,
            "body": self.body,
        }

    @classmethod
    def from_dict(cls, data: dict) -> "RegistryEvent":
        try:
            return cls(
                sequence=int(data["sequence"]),
                timestamp=int(data["timestamp"]),
                actor=dict(data["actor"]),
                kind=EventKind(data["kind"]),
                body=dict(data["body"]),
            )
        except (KeyError, TypeError, ValueError) as exc:
            raise CorruptLog(f"malformed event: {exc}") from exc


def verify_contiguous(events: Sequence[RegistryEvent]) -> None:
    """Sequences must run 1..n with no gaps."""
    for position, event in enumerate(events, start=1):
        if event.sequence != position:
            raise CorruptLog(
                f"sequence gap: expected {position}, found {event.sequence}"
            )


class EventLog:
    """In-memory event list with optional JSONL persistence."""

    def __init__(self, path: str | Path | None = None):
        self._path = Path(path) if path is not None else None
        self._events: list[RegistryEvent] = []
        if self._path is not None and self._path.exists():
            self._events = list(load_events(self._path))
            verify_contiguous(self._events)

    @property
    def next_sequence(self) -> int:
        return len(self._events) + 1

    def append(self, event: RegistryEvent) -> None:
        if event.sequence != self.next_sequence:
            raise CorruptLog(
                f"out-of-order append: expected {self.next_sequence}, "
                f"got {event.sequence}"
            )
        if self._path is not None:
            with self._path.open("a", encoding="utf-8") as handle:
                handle.write(canonical_json(event.to_dict()) + "\n")
                handle.flush()
        self._events.append(event)

    def events(self) -> tuple[RegistryEvent, ...]:
        return tuple(self._events)


def load_events(path: str | Path) -> Iterable[RegistryEvent]:
    events = []
    for line_number, line in enumerate(
        Path(path).read_text(encoding="utf-8").splitlines(), start=1
    ):
        if not line.strip():
            continue
        try:
            data = json.loads(line)
        except json.JSONDecodeError as exc:
            raise CorruptLog(f"line {line_number}: not valid JSON") from exc
        events.append(RegistryEvent.from_dict(data))
    return events
