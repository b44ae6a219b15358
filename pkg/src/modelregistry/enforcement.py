"""Violations, graduated fines, and the third-party verification ledger.

Fines are turnover-proportional when turnover is known (with a hard cap and
geometric repeat escalation) and a daily fixed amount otherwise. Every
assessment carries a machine-readable computation trace so the amount can be
re-derived exactly.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field
from datetime import date
from enum import Enum
from typing import Callable, Mapping, Sequence

from modelregistry.jsonio import canonical_json


class ViolationSubject(str, Enum):
    DEVELOPER = "Developer"
    THIRD_PARTY_USER = "ThirdPartyUser"


class ViolationKind(str, Enum):
    UNREGISTERED_QUALIFYING_MODEL = "UnregisteredQualifyingModel"
    OVERDUE_ATTESTATION = "OverdueAttestation"
    INACCURATE_REPORT = "InaccurateReport"
    UNVERIFIED_THIRD_PARTY_USE = "UnverifiedThirdPartyUse"


class Severity(str, Enum):
    MINOR = "Minor"
    MAJOR = "Major"
    EGREGIOUS = "Egregious"


SEVERITY_RANK = {Severity.MINOR: 0, Severity.MAJOR: 1, Severity.EGREGIOUS: 2}


class FineBasis(str, Enum):
    TURNOVER_PERCENTAGE = "TurnoverPercentage"
    DAILY_FIXED = "DailyFixed"


class LookupResult(str, Enum):
    REGISTERED = "Registered"
    NOT_FOUND = "NotFound"
    NOT_REQUIRED = "NotRequired"


class MissingNonQualificationDeclaration(Exception):
    """NotRequired claimed without declaring why the model is out of scope."""


@dataclass
class Violation:
    violation_id: str
    subject: ViolationSubject
    subject_ref: str
    kind: ViolationKind
    severity: Severity
    opened_date: date
    resolved_date: date | None = None


def _default_turnover_fractions() -> dict[Severity, float]:
    return {Severity.MINOR: 0.005, Severity.MAJOR: 0.02, Severity.EGREGIOUS: 0.04}


@dataclass(frozen=True)
class FinePolicy:
    turnover_fraction_by_severity: Mapping[Severity, float] = field(
        default_factory=_default_turnover_fractions
    )
    daily_fixed_fine: float = 10_000.0
    turnover_cap_fraction: float = 0.04
    repeat_multiplier: float = 1.5
    effective_date: date | None = None

    def __post_init__(self) -> None:
        if not 0 < self.turnover_cap_fraction <= 1:
            raise ValueError("turnover_cap_fraction must be in (0, 1]")
        for severity in Severity:
            fraction = self.turnover_fraction_by_severity.get(severity)
            if fraction is None:
                raise ValueError(f"missing turnover fraction for {severity.value}")
            if not 0 < fraction <= 1:
                raise ValueError(f"{severity.value} fraction must be in (0, 1]")
            if fraction > self.turnover_cap_fraction:
                raise ValueError(
                    f"{severity.value} fraction exceeds turnover_cap_fraction"
                )
        if self.daily_fixed_fine <= 0:
            raise ValueError("daily_fixed_fine must be > 0")
        if self.repeat_multiplier < 1:
            raise ValueError("repeat_multiplier must be >= 1")


@dataclass(frozen=True)
class FineAssessment:
    violation_ref: str
    basis: FineBasis
    amount: float
    computation_trace: str


def assess_fine(
    violation: Violation,
    annual_turnover: float,
    days_unresolved: int,
    prior_same_kind: int,
    policy: FinePolicy,
) -> FineAssessment:
    """Propose a fine for a violation.

    Known turnover: severity fraction times the repeat multiplier raised to
    the prior count, capped at the turnover cap. Unknown/zero turnover: the
    daily fixed fine times days unresolved. The computation trace is
    canonical JSON of every factor; re-evaluating it reproduces the amount.
    """
    if annual_turnover < 0:
        raise ValueError("annual_turnover must be >= 0")
    if days_unresolved < 0:
        raise ValueError("days_unresolved must be >= 0")
    if prior_same_kind < 0:
        raise ValueError("prior_same_kind must be >= 0")

    if annual_turnover > 0:
        fraction = policy.turnover_fraction_by_severity[violation.severity]
        multiplier = policy.repeat_multiplier**prior_same_kind
        amount = min(
            fraction * multiplier * annual_turnover,
            policy.turnover_cap_fraction * annual_turnover,
        )
        basis = FineBasis.TURNOVER_PERCENTAGE
        trace = {
            "basis": basis.value,
            "severity": violation.severity.value,
            "severity_fraction": fraction,
            "repeat_multiplier": policy.repeat_multiplier,
            "prior_same_kind": prior_same_kind,
            "annual_turnover": annual_turnover,
            "cap_fraction": policy.turnover_cap_fraction,
            "amount": amount,
        }
    else:
        amount = policy.daily_fixed_fine * days_unresolved
        basis = FineBasis.DAILY_FIXED
        trace = {
            "basis": basis.value,
            "daily_fixed_fine": policy.daily_fixed_fine,
            "days_unresolved": days_unresolved,
            "amount": amount,
        }
    return FineAssessment(
        violation_ref=violation.violation_id,
        basis=basis,
        amount=amount,
        computation_trace=canonical_json(trace),
    )


def escalate_severity(history: Sequence[Violation]) -> Severity:
    """Severity for the next violation given priors of the same subject+kind."""
    priors = len(history)
    if priors == 0:
        return Severity.MINOR
    if priors <= 2:
        return Severity.MAJOR
    return Severity.EGREGIOUS


@dataclass(frozen=True)
class ThirdPartyCheckEntry:
    sequence: int
    timestamp: int
    user_ref: str
    claimed_model: str
    identifier_presented: str | None
    lookup_result: LookupResult
    declaration: str | None


def check_entry_to_dict(entry: ThirdPartyCheckEntry) -> dict:
    return {
        "sequence": entry.sequence,
        "timestamp": entry.timestamp,
        "user_ref": entry.user_ref,
        "claimed_model": entry.claimed_model,
        "identifier_presented": entry.identifier_presented,
        "lookup_result": entry.lookup_result.value,
        "declaration": entry.declaration,
    }


class VerificationLedger:
    """Append-only log of third-party registration checks.

    Entries are immutable and never removed; sequence numbers are assigned on
    append. NotRequired entries must carry a declaration that the model does
    not meet inclusion criteria.
    """

    def __init__(self, clock: Callable[[], int] | None = None):
        self._entries: list[ThirdPartyCheckEntry] = []
        self._clock = clock or (lambda: int(time.time()))

    def record_third_party_check(
        self,
        user_ref: str,
        claimed_model: str,
        identifier_presented: str | None,
        lookup_result: LookupResult,
        declaration: str | None = None,
        timestamp: int | None = None,
    ) -> ThirdPartyCheckEntry:
        if not user_ref or not claimed_model:
            raise ValueError("user_ref and claimed_model must be non-empty")
        if lookup_result == LookupResult.NOT_REQUIRED and not declaration:
            raise MissingNonQualificationDeclaration(
                "NotRequired requires a declaration that the model does not meet "
                "inclusion criteria"
            )
        entry = ThirdPartyCheckEntry(
            sequence=len(self._entries) + 1,
            timestamp=self._clock() if timestamp is None else timestamp,
            user_ref=user_ref,
            claimed_model=claimed_model,
            identifier_presented=identifier_presented,
            lookup_result=lookup_result,
            declaration=declaration,
        )
        self._entries.append(entry)
        return entry

    def append_entry(self, entry: ThirdPartyCheckEntry) -> None:
        """Re-insert an existing entry (event replay); sequence must be next."""
        if entry.sequence != len(self._entries) + 1:
            raise ValueError("ledger entries must be appended in sequence")
        self._entries.append(entry)

    def entries(self) -> tuple[ThirdPartyCheckEntry, ...]:
        return tuple(self._entries)

    def export_jsonl(self) -> str:
        """One canonical-JSON entry per line, for audit export."""
        return "\n".join(canonical_json(check_entry_to_dict(e)) for e in self._entries)
