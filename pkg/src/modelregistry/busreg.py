"""Business-registry lookups for developer identity checks.

The real national business register is external; this module defines the
client interface plus a fixture-backed stub. An Unavailable answer never
blocks a submission; it is recorded as a pending check.
"""

from __future__ import annotations

import json
from enum import Enum
from pathlib import Path
from typing import Mapping, Protocol


class BusinessCheckResult(str, Enum):
    CONFIRMED = "Confirmed"
    MISMATCH = "Mismatch"
    UNAVAILABLE = "Unavailable"


class BusinessRegistryClient(Protocol):
    def lookup(self, registration_number: str) -> str | None:
        """Registered legal name for the number, or None if unknown."""
        ...


class FixtureBusinessRegistry:
    """Stub client backed by a number -> legal name mapping."""

    def __init__(self, mapping: Mapping[str, str] | None = None):
        self._mapping = dict(mapping or {})

    @classmethod
    def from_file(cls, path: str | Path) -> "FixtureBusinessRegistry":
        data = json.loads(Path(path).read_text(encoding="utf-8"))
        if not isinstance(data, dict):
            raise ValueError("business registry fixture must be a JSON object")
        return cls({str(k): str(v) for k, v in data.items()})

    def lookup(self, registration_number: str) -> str | None:
        return self._mapping.get(registration_number)


def verify_business_registration(
    client: BusinessRegistryClient, registration_number: str, legal_name: str
) -> BusinessCheckResult:
    """Check a declared (number, legal name) pair against the register.

    Name comparison is whitespace-trimmed and case-insensitive. Client
    failures surface as Unavailable, never as faults.
    """
    if not registration_number or not legal_name:
        raise ValueError("registration_number and legal_name must be non-empty")
    try:
        registered_name = client.lookup(registration_number)
    except Exception:
        return BusinessCheckResult.UNAVAILABLE
    if registered_name is None:
        return BusinessCheckResult.UNAVAILABLE
    if registered_name.strip().casefold() == legal_name.strip().casefold():
        return BusinessCheckResult.CONFIRMED
    return BusinessCheckResult.MISMATCH
