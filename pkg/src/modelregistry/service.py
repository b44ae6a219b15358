"""The authority-operated registry service.

Event-sourced: command handlers validate, bake every computed fact
(identifiers, decisions, timestamps) into an event body, append it, and then
mutate state exclusively through the same reducers used during replay. That
makes `replay_state` over the log byte-identical to live state.

Writes go through one serialized path with per-family optimistic
concurrency; reads are safe under unlimited concurrency.
"""

from __future__ import annotations

import threading
import time
from dataclasses import dataclass, field
from datetime import date, datetime, timedelta, timezone
from typing import Callable, Iterable, Mapping, Sequence

from cryptography.hazmat.primitives.asymmetric import ed25519

from modelregistry import stamps as stamps_mod
from modelregistry.auth import Principal, Role, Unauthorized
from modelregistry.busreg import (
    BusinessCheckResult,
    BusinessRegistryClient,
    FixtureBusinessRegistry,
    verify_business_registration,
)
from modelregistry.config import RegistryPolicy, default_policy
from modelregistry.enforcement import (
    FineAssessment,
    FineBasis,
    LookupResult,
    MissingNonQualificationDeclaration,
    Severity,
    ThirdPartyCheckEntry,
    VerificationLedger,
    Violation,
    ViolationKind,
    ViolationSubject,
    assess_fine,
    check_entry_to_dict,
    escalate_severity,
)
from modelregistry.events import CorruptLog, EventKind, EventLog, RegistryEvent, verify_contiguous
from modelregistry.jsonio import (
    canonical_json,
    date_from_iso,
    date_to_iso,
    metrics_from_dict,
    metrics_to_dict,
    submission_from_dict,
    submission_to_dict,
)
from modelregistry.lifecycle import (
    AttestationOutcome,
    AttestationRecord,
    DimensionMaxima,
    ModelFamily,
    ModelVersion,
    OverdueAttestation,
    RegistrationKind,
    RequirementDecision,
    RequirementReason,
    VersionCandidate,
    VersionRegistrationRequirement,
    apply_version,
    assess_version_registration,
    attestation_schedule,
    attestation_window_opens,
    capability_scores,
    detect_overdue,
)
from modelregistry.openness import AmbiguousOpenness, classify_openness
from modelregistry.qualification import (
    QualificationDecision,
    decision_to_dict,
    evaluate_qualification,
)
from modelregistry.types import (
    REVOKED_STATUSES,
    CapabilityMetrics,
    ModelStatus,
    OpennessClass,
    RegistrationSubmission,
)
from modelregistry.validation import ValidationProblem, validate_submission


class ValidationFailed(Exception):
    def __init__(self, report: Sequence[ValidationProblem]):
        super().__init__(f"{len(report)} validation problem(s)")
        self.report = list(report)


class NotFound(Exception):
    pass


class PreDeploymentRequired(Exception):
    """Initial registrations must arrive before deployment (status PreDeployment)."""


class NewFamilyRequired(Exception):
    def __init__(self, reasons: tuple[RequirementReason, ...]):
        super().__init__("version must be registered as a new family")
        self.reasons = reasons


class FullSubmissionRequired(Exception):
    def __init__(self, reasons: tuple[RequirementReason, ...]):
        super().__init__("version requires a complete registry submission")
        self.reasons = reasons


class StaleFamilySequence(Exception):
    """Retryable optimistic-concurrency conflict on a family write."""


class InvalidStatusTransition(Exception):
    pass


class NoAttestationDue(Exception):
    pass


class InvalidRequest(Exception):
    pass


@dataclass
class DeveloperAccount:
    identifier: str
    business_number: str
    legal_name: str


@dataclass
class RegistrationRecord:
    identifier: str
    family_id: str
    version_name: str
    developer_ref: str
    developer_business_number: str
    developer_legal_name: str
    family_trade_name: str
    status: ModelStatus
    registration_date: date
    deployment_date: date | None
    registration_kind: RegistrationKind
    requirement_decision: RequirementDecision
    business_check: BusinessCheckResult | None = None
    qualification: dict | None = None
    submission: RegistrationSubmission | None = None


# The six public fields; everything else in a record is confidential.
@dataclass(frozen=True)
class PublicRecord:
    identifier: str
    developer_legal_name: str
    family_trade_name: str
    version_name: str
    status: str
    registration_date: date

    def to_dict(self) -> dict:
        return {
            "identifier": self.identifier,
            "developer_legal_name": self.developer_legal_name,
            "family_trade_name": self.family_trade_name,
            "version_name": self.version_name,
            "status": self.status,
            "registration_date": date_to_iso(self.registration_date),
        }


def public_projection(record: RegistrationRecord) -> PublicRecord:
    """Whitelist projection: exactly six fields, never any disclosure content."""
    return PublicRecord(
        identifier=record.identifier,
        developer_legal_name=record.developer_legal_name,
        family_trade_name=record.family_trade_name,
        version_name=record.version_name,
        status=record.status.value,
        registration_date=record.registration_date,
    )


@dataclass
class RegistryState:
    developers: dict[str, DeveloperAccount] = field(default_factory=dict)
    families: dict[str, ModelFamily] = field(default_factory=dict)
    records: dict[str, RegistrationRecord] = field(default_factory=dict)
    attestations: list[AttestationRecord] = field(default_factory=list)
    violations: dict[str, Violation] = field(default_factory=dict)
    fines: list[FineAssessment] = field(default_factory=list)
    ledger: VerificationLedger = field(default_factory=VerificationLedger)
    stamps: dict[str, str] = field(default_factory=dict)
    family_sequence: dict[str, int] = field(default_factory=dict)
    last_sequence: int = 0


# ---------------------------------------------------------------------------
# Serialization (state snapshots are canonical JSON for replay comparison)
# ---------------------------------------------------------------------------


def _version_to_dict(version: ModelVersion) -> dict:
    return {
        "version_name": version.version_name,
        "kind": version.kind.value,
        "recorded_at": date_to_iso(version.recorded_at),
        "status": version.status.value,
        "deployment_date": date_to_iso(version.deployment_date),
        "metrics": None if version.metrics is None else metrics_to_dict(version.metrics),
        "eval_scores": dict(version.eval_scores),
        "submission": None
        if version.submission is None
        else submission_to_dict(version.submission),
    }


def _version_from_dict(data: dict) -> ModelVersion:
    return ModelVersion(
        version_name=data["version_name"],
        kind=RegistrationKind(data["kind"]),
        recorded_at=date_from_iso(data["recorded_at"]),
        status=ModelStatus(data["status"]),
        deployment_date=date_from_iso(data.get("deployment_date")),
        metrics=None if data.get("metrics") is None else metrics_from_dict(data["metrics"]),
        eval_scores={k: float(v) for k, v in (data.get("eval_scores") or {}).items()},
        submission=None
        if data.get("submission") is None
        else submission_from_dict(data["submission"]),
    )


def _maxima_to_dict(maxima: DimensionMaxima) -> dict:
    return {
        "max_total_parameters": maxima.max_total_parameters,
        "max_total_compute": maxima.max_total_compute,
        "max_training_tokens": maxima.max_training_tokens,
        "max_eval_scores": dict(maxima.max_eval_scores),
    }


def _family_to_dict(family: ModelFamily) -> dict:
    return {
        "family_id": family.family_id,
        "trade_name": family.trade_name,
        "developer_ref": family.developer_ref,
        "registered_at": date_to_iso(family.registered_at),
        "openness": family.openness.value,
        "security_tier": family.security_tier,
        "versions": [_version_to_dict(v) for v in family.versions],
        "dimension_maxima": _maxima_to_dict(family.dimension_maxima),
    }


def record_to_dict(record: RegistrationRecord, include_submission: bool = True) -> dict:
    data = {
        "identifier": record.identifier,
        "family_id": record.family_id,
        "version_name": record.version_name,
        "developer_ref": record.developer_ref,
        "developer_business_number": record.developer_business_number,
        "developer_legal_name": record.developer_legal_name,
        "family_trade_name": record.family_trade_name,
        "status": record.status.value,
        "registration_date": date_to_iso(record.registration_date),
        "deployment_date": date_to_iso(record.deployment_date),
        "registration_kind": record.registration_kind.value,
        "requirement_decision": record.requirement_decision.value,
        "business_check": None
        if record.business_check is None
        else record.business_check.value,
        "qualification": record.qualification,
    }
    if include_submission:
        data["submission"] = (
            None if record.submission is None else submission_to_dict(record.submission)
        )
    return data


def _violation_to_dict(violation: Violation) -> dict:
    return {
        "violation_id": violation.violation_id,
        "subject": violation.subject.value,
        "subject_ref": violation.subject_ref,
        "kind": violation.kind.value,
        "severity": violation.severity.value,
        "opened_date": date_to_iso(violation.opened_date),
        "resolved_date": date_to_iso(violation.resolved_date),
    }


def _violation_from_dict(data: dict) -> Violation:
    return Violation(
        violation_id=data["violation_id"],
        subject=ViolationSubject(data["subject"]),
        subject_ref=data["subject_ref"],
        kind=ViolationKind(data["kind"]),
        severity=Severity(data["severity"]),
        opened_date=date_from_iso(data["opened_date"]),
        resolved_date=date_from_iso(data.get("resolved_date")),
    )


def _attestation_to_dict(record: AttestationRecord) -> dict:
    return {
        "family_id": record.family_id,
        "due_date": date_to_iso(record.due_date),
        "completed_date": date_to_iso(record.completed_date),
        "attested_by": record.attested_by,
        "outcome": record.outcome.value,
    }


def _fine_to_dict(fine: FineAssessment) -> dict:
    return {
        "violation_ref": fine.violation_ref,
        "basis": fine.basis.value,
        "amount": fine.amount,
        "computation_trace": fine.computation_trace,
    }


def state_to_dict(state: RegistryState) -> dict:
    return {
        "developers": {
            number: {
                "identifier": acct.identifier,
                "business_number": acct.business_number,
                "legal_name": acct.legal_name,
            }
            for number, acct in state.developers.items()
        },
        "families": {fid: _family_to_dict(f) for fid, f in state.families.items()},
        "records": {rid: record_to_dict(r) for rid, r in state.records.items()},
        "attestations": [_attestation_to_dict(a) for a in state.attestations],
        "violations": {vid: _violation_to_dict(v) for vid, v in state.violations.items()},
        "fines": [_fine_to_dict(f) for f in state.fines],
        "third_party_ledger": [check_entry_to_dict(e) for e in state.ledger.entries()],
        "stamps": dict(state.stamps),
        "family_sequence": dict(state.family_sequence),
        "last_sequence": state.last_sequence,
    }


def state_canonical_bytes(state: RegistryState) -> bytes:
    return canonical_json(state_to_dict(state)).encode("utf-8")


# ---------------------------------------------------------------------------
# Reducers: the only code that mutates state, shared by live path and replay
# ---------------------------------------------------------------------------


def _requirement_to_dict(requirement: VersionRegistrationRequirement) -> dict:
    return {
        "decision": requirement.decision.value,
        "reasons": [
            {"dimension": r.dimension, "detail": r.detail} for r in requirement.reasons
        ],
    }


def _requirement_from_dict(data: dict) -> VersionRegistrationRequirement:
    return VersionRegistrationRequirement(
        decision=RequirementDecision(data["decision"]),
        reasons=tuple(
            RequirementReason(r["dimension"], r["detail"]) for r in data["reasons"]
        ),
    )


def _touch_family(state: RegistryState, family_id: str, sequence: int) -> None:
    state.family_sequence[family_id] = sequence


def _apply_submission_accepted(state: RegistryState, event: RegistryEvent) -> None:
    body = event.body
    account = body.get("developer_account")
    if account is not None and account["business_number"] not in state.developers:
        state.developers[account["business_number"]] = DeveloperAccount(
            identifier=account["identifier"],
            business_number=account["business_number"],
            legal_name=account["legal_name"],
        )

    family_id = body["family_id"]
    if body["family_created"]:
        meta = body["family"]
        state.families[family_id] = ModelFamily(
            family_id=family_id,
            trade_name=meta["trade_name"],
            developer_ref=meta["developer_ref"],
            registered_at=date_from_iso(meta["registered_at"]),
            openness=OpennessClass(meta["openness"]),
            security_tier=meta["security_tier"],
        )

    submission = submission_from_dict(body["submission"])
    registration_date = date_from_iso(body["registration_date"])
    version = ModelVersion(
        version_name=submission.version_name,
        kind=RegistrationKind.FULL_SUBMISSION,
        recorded_at=registration_date,
        status=submission.status,
        deployment_date=submission.deployment_date,
        metrics=submission.metrics,
        eval_scores={k: float(v) for k, v in body["eval_scores"].items()},
        submission=submission,
    )
    requirement = _requirement_from_dict(body["requirement"])
    state.families[family_id] = apply_version(
        state.families[family_id], version, requirement
    )

    state.records[body["identifier"]] = RegistrationRecord(
        identifier=body["identifier"],
        family_id=family_id,
        version_name=submission.version_name,
        developer_ref=body["developer_ref"],
        developer_business_number=submission.developer.business_registration_number,
        developer_legal_name=submission.developer.legal_name,
        family_trade_name=submission.family_trade_name,
        status=submission.status,
        registration_date=registration_date,
        deployment_date=submission.deployment_date,
        registration_kind=RegistrationKind.FULL_SUBMISSION,
        requirement_decision=requirement.decision,
        business_check=BusinessCheckResult(body["business_check"]),
        qualification=body["qualification"],
        submission=submission,
    )
    _touch_family(state, family_id, event.sequence)


def _apply_version_added(state: RegistryState, event: RegistryEvent) -> None:
    body = event.body
    family_id = body["family_id"]
    version = _version_from_dict(body["version"])
    requirement = _requirement_from_dict(body["requirement"])
    state.families[family_id] = apply_version(
        state.families[family_id], version, requirement
    )
    family = state.families[family_id]
    registration_date = date_from_iso(body["registration_date"])
    if version.submission is not None:
        developer_number = version.submission.developer.business_registration_number
        developer_name = version.submission.developer.legal_name
    else:
        developer_number = body["developer_business_number"]
        developer_name = body["developer_legal_name"]
    state.records[body["identifier"]] = RegistrationRecord(
        identifier=body["identifier"],
        family_id=family_id,
        version_name=version.version_name,
        developer_ref=family.developer_ref,
        developer_business_number=developer_number,
        developer_legal_name=developer_name,
        family_trade_name=family.trade_name,
        status=version.status,
        registration_date=registration_date,
        deployment_date=version.deployment_date,
        registration_kind=version.kind,
        requirement_decision=requirement.decision,
        business_check=None,
        qualification=body.get("qualification"),
        submission=version.submission,
    )
    _touch_family(state, family_id, event.sequence)


def _apply_attestation_recorded(state: RegistryState, event: RegistryEvent) -> None:
    body = event.body
    state.attestations.append(
        AttestationRecord(
            family_id=body["family_id"],
            due_date=date_from_iso(body["due_date"]),
            completed_date=date_from_iso(body["completed_date"]),
            attested_by=body["attested_by"],
            outcome=AttestationOutcome(body["outcome"]),
        )
    )
    _touch_family(state, body["family_id"], event.sequence)


def _apply_status_changed(state: RegistryState, event: RegistryEvent) -> None:
    body = event.body
    record = state.records[body["identifier"]]
    record.status = ModelStatus(body["new_status"])
    if body.get("deployment_date") is not None:
        record.deployment_date = date_from_iso(body["deployment_date"])
    family = state.families[record.family_id]
    for version in family.versions:
        if version.version_name == record.version_name:
            version.status = record.status
            version.deployment_date = record.deployment_date
    _touch_family(state, record.family_id, event.sequence)


def _apply_violation_opened(state: RegistryState, event: RegistryEvent) -> None:
    violation = _violation_from_dict(event.body["violation"])
    state.violations[violation.violation_id] = violation


def _apply_fine_assessed(state: RegistryState, event: RegistryEvent) -> None:
    body = event.body
    state.fines.append(
        FineAssessment(
            violation_ref=body["violation_ref"],
            basis=FineBasis(body["basis"]),
            amount=float(body["amount"]),
            computation_trace=body["computation_trace"],
        )
    )


def _apply_stamp_issued(state: RegistryState, event: RegistryEvent) -> None:
    body = event.body
    state.stamps[body["identifier"]] = body["token"]
    record = state.records.get(body["identifier"])
    if record is not None:
        _touch_family(state, record.family_id, event.sequence)


def _apply_third_party_check(state: RegistryState, event: RegistryEvent) -> None:
    entry = event.body["entry"]
    state.ledger.append_entry(
        ThirdPartyCheckEntry(
            sequence=int(entry["sequence"]),
            timestamp=int(entry["timestamp"]),
            user_ref=entry["user_ref"],
            claimed_model=entry["claimed_model"],
            identifier_presented=entry.get("identifier_presented"),
            lookup_result=LookupResult(entry["lookup_result"]),
            declaration=entry.get("declaration"),
        )
    )


_REDUCERS = {
    EventKind.SUBMISSION_ACCEPTED: _apply_submission_accepted,
    EventKind.VERSION_ADDED: _apply_version_added,
    EventKind.ATTESTATION_RECORDED: _apply_attestation_recorded,
    EventKind.STATUS_CHANGED: _apply_status_changed,
    EventKind.VIOLATION_OPENED: _apply_violation_opened,
    EventKind.FINE_ASSESSED: _apply_fine_assessed,
    EventKind.STAMP_ISSUED: _apply_stamp_issued,
    EventKind.THIRD_PARTY_CHECK_LOGGED: _apply_third_party_check,
}


def apply_event(state: RegistryState, event: RegistryEvent) -> None:
    if event.sequence != state.last_sequence + 1:
        raise CorruptLog(
            f"event {event.sequence} applied after {state.last_sequence}"
        )
    try:
        _REDUCERS[event.kind](state, event)
    except CorruptLog:
        raise
    except Exception as exc:
        raise CorruptLog(f"event {event.sequence} failed to apply: {exc}") from exc
    state.last_sequence = event.sequence


def replay_state(events: Iterable[RegistryEvent]) -> RegistryState:
    """Reconstruct materialized state from an ordered event stream."""
    events = list(events)
    verify_contiguous(events)
    state = RegistryState()
    for event in events:
        apply_event(state, event)
    return state


# ---------------------------------------------------------------------------
# Service
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class SubmissionOutcome:
    identifier: str
    family_id: str
    family_created: bool
    requirement: VersionRegistrationRequirement
    qualification: QualificationDecision
    business_check: BusinessCheckResult
    stamp_token: str


@dataclass(frozen=True)
class VersionOutcome:
    identifier: str
    family_id: str
    requirement: VersionRegistrationRequirement
    stamp_token: str


@dataclass(frozen=True)
class AttestationResult:
    family_id: str
    due_date: date
    completed_date: date
    outcome: AttestationOutcome
    reissued_stamps: tuple[str, ...]


_ALLOWED_STATUS_TRANSITIONS = {
    ModelStatus.PRE_DEPLOYMENT: {ModelStatus.ON_MARKET, ModelStatus.WITHDRAWN},
    ModelStatus.ON_MARKET: {ModelStatus.RECALLED, ModelStatus.WITHDRAWN},
    ModelStatus.RECALLED: {ModelStatus.ON_MARKET, ModelStatus.WITHDRAWN},
    ModelStatus.WITHDRAWN: set(),
}

SEARCH_PAGE_SIZE = 20
# How far ahead an attestation may be filed once its window opens.
_ATTESTATION_LOOKAHEAD_DAYS = 184


class RegistryService:
    def __init__(
        self,
        signing_key: ed25519.Ed25519PrivateKey,
        policy: RegistryPolicy | None = None,
        event_log: EventLog | None = None,
        business_registry: BusinessRegistryClient | None = None,
        clock: Callable[[], int] | None = None,
        id_choose: Callable[[str], str] | None = None,
        stamp_validity_days: int = stamps_mod.DEFAULT_VALIDITY_DAYS,
    ):
        self._signing_key = signing_key
        self._policy = policy or default_policy()
        self._log = event_log or EventLog()
        self._business_registry = business_registry or FixtureBusinessRegistry()
        self._clock = clock or (lambda: int(time.time()))
        self._id_choose = id_choose
        self._stamp_validity_days = stamp_validity_days
        self._write_lock = threading.Lock()
        self._state = replay_state(self._log.events())

    # -- helpers ------------------------------------------------------------

    @property
    def state(self) -> RegistryState:
        return self._state

    @property
    def policy(self) -> RegistryPolicy:
        return self._policy

    def verification_key_pem(self) -> str:
        return stamps_mod.verification_key_to_pem(
            self._signing_key.public_key()
        ).decode("ascii")

    def events(self) -> tuple[RegistryEvent, ...]:
        return self._log.events()

    def _now(self) -> int:
        return int(self._clock())

    def _today(self) -> date:
        return datetime.fromtimestamp(self._now(), tz=timezone.utc).date()

    def _identifier_taken(self, identifier: str) -> bool:
        state = self._state
        return (
            identifier in state.records
            or identifier in state.families
            or identifier in state.violations
            or any(a.identifier == identifier for a in state.developers.values())
        )

    def _allocate_identifier(self) -> str:
        return stamps_mod.allocate_identifier(
            self._today().year, self._identifier_taken, choose=self._id_choose
        )

    def _append_and_apply(self, actor: Principal, kind: EventKind, body: dict) -> RegistryEvent:
        event = RegistryEvent(
            sequence=self._log.next_sequence,
            timestamp=self._now(),
            actor=actor.to_dict(),
            kind=kind,
            body=body,
        )
        self._log.append(event)
        apply_event(self._state, event)
        return event

    def _require_role(self, principal: Principal, *roles: Role) -> None:
        if principal.role not in roles:
            raise Unauthorized(f"requires one of: {', '.join(r.value for r in roles)}")

    def _require_family_owner(self, principal: Principal, family: ModelFamily) -> None:
        if principal.role == Role.REGISTRY_ADMIN:
            return
        if principal.role != Role.DEVELOPER:
            raise Unauthorized("requires the owning developer or a registry admin")
        account = self._state.developers.get(principal.entity_ref or "")
        if account is None or account.identifier != family.developer_ref:
            raise Unauthorized("family belongs to a different developer")

    def _check_family_sequence(self, family_id: str, expected: int | None) -> None:
        if expected is None:
            return
        current = self._state.family_sequence.get(family_id, 0)
        if current != expected:
            raise StaleFamilySequence(
                f"family {family_id} is at sequence {current}, caller saw {expected}"
            )

    def _find_family(self, business_number: str, trade_name: str) -> ModelFamily | None:
        account = self._state.developers.get(business_number)
        if account is None:
            return None
        found = None
        for family in self._state.families.values():
            if (
                family.developer_ref == account.identifier
                and family.trade_name == trade_name
            ):
                found = family  # insertion order: the latest-created wins
        return found

    def _issue_stamp_event(
        self, actor: Principal, record: RegistrationRecord
    ) -> str:
        subject = stamps_mod.StampSubject(
            identifier=record.identifier,
            developer_legal_name=record.developer_legal_name,
            family_trade_name=record.family_trade_name,
            version_name=record.version_name,
            status=record.status.value,
            revoked=record.status in REVOKED_STATUSES,
        )
        iat = self._now()
        token = stamps_mod.issue_stamp(
            subject, self._signing_key, self._stamp_validity_days, issued_at=iat
        )
        self._append_and_apply(
            actor,
            EventKind.STAMP_ISSUED,
            {
                "identifier": record.identifier,
                "token": token,
                "iat": iat,
                "exp": iat + self._stamp_validity_days * 86_400,
            },
        )
        return token

    # -- developer operations -------------------------------------------------

    def submit_registration(
        self,
        principal: Principal,
        submission: RegistrationSubmission,
        planned_deployment: date | None = None,
        expected_family_sequence: int | None = None,
    ) -> SubmissionOutcome:
        """Register a model version from a complete submission.

        Creates the family on first contact; otherwise assesses the version
        against family maxima. A version past the family age limit is
        registered into a fresh family automatically. The response always
        echoes the qualification decision, so voluntary registrations of
        non-qualifying models are visible as such.
        """
        with self._write_lock:
            self._require_role(principal, Role.DEVELOPER)
            business_number = submission.developer.business_registration_number
            if principal.entity_ref != business_number:
                raise Unauthorized("developers may only submit for their own entity")

            report = validate_submission(submission)
            if report:
                raise ValidationFailed(report)
            if submission.status != ModelStatus.PRE_DEPLOYMENT:
                raise PreDeploymentRequired(
                    "models must be registered before they are publicly deployed; "
                    "initial status must be PreDeployment"
                )
            try:
                openness = classify_openness(submission.access)
            except AmbiguousOpenness as exc:
                raise ValidationFailed(
                    [ValidationProblem("access", f"openness ambiguous: {exc}")]
                ) from exc

            qualification = evaluate_qualification(
                submission.metrics, submission.risk, self._policy.thresholds
            )
            business_check = verify_business_registration(
                self._business_registry, business_number, submission.developer.legal_name
            )
            eval_scores = capability_scores(submission.evaluations)
            today = self._today()
            planned = planned_deployment or today

            family = self._find_family(business_number, submission.family_trade_name)
            family_created = family is None
            requirement = VersionRegistrationRequirement(
                RequirementDecision.FULL_SUBMISSION,
                (
                    RequirementReason(
                        "initial registration", "first version of a new family"
                    ),
                ),
            )
            if family is not None:
                self._check_family_sequence(family.family_id, expected_family_sequence)
                candidate = VersionCandidate(submission.metrics, eval_scores, planned)
                assessed = assess_version_registration(
                    family, candidate, self._policy.family_policy
                )
                if assessed.decision == RequirementDecision.NEW_FAMILY_REQUIRED:
                    # Past the family age limit: register into a fresh family.
                    family_created = True
                    requirement = VersionRegistrationRequirement(
                        RequirementDecision.FULL_SUBMISSION, assessed.reasons
                    )
                else:
                    # Echo the assessed obligation; a voluntary full submission
                    # satisfies a NameOnly requirement.
                    requirement = assessed

            account = self._state.developers.get(business_number)
            developer_account_body = None
            if account is None:
                developer_account_body = {
                    "identifier": self._allocate_identifier(),
                    "business_number": business_number,
                    "legal_name": submission.developer.legal_name,
                }
                developer_ref = developer_account_body["identifier"]
            else:
                developer_ref = account.identifier

            if family_created:
                family_id = self._allocate_identifier()
                family_meta = {
                    "trade_name": submission.family_trade_name,
                    "developer_ref": developer_ref,
                    "registered_at": date_to_iso(today),
                    "openness": openness.value,
                    "security_tier": submission.security.declared_security_tier,
                }
                target = ModelFamily(
                    family_id=family_id,
                    trade_name=submission.family_trade_name,
                    developer_ref=developer_ref,
                    registered_at=today,
                    openness=openness,
                    security_tier=submission.security.declared_security_tier,
                )
            else:
                family_id = family.family_id
                family_meta = None
                target = family

            # Dry-run: surface duplicate-name and consistency errors before
            # anything is appended to the log.
            version = ModelVersion(
                version_name=submission.version_name,
                kind=RegistrationKind.FULL_SUBMISSION,
                recorded_at=today,
                status=submission.status,
                deployment_date=submission.deployment_date,
                metrics=submission.metrics,
                eval_scores=eval_scores,
                submission=submission,
            )
            apply_version(target, version, requirement)

            identifier = self._allocate_identifier()
            body = {
                "identifier": identifier,
                "family_id": family_id,
                "family_created": family_created,
                "family": family_meta,
                "developer_account": developer_account_body,
                "developer_ref": developer_ref,
                "submission": submission_to_dict(submission),
                "eval_scores": eval_scores,
                "requirement": _requirement_to_dict(requirement),
                "qualification": decision_to_dict(qualification),
                "business_check": business_check.value,
                "registration_date": date_to_iso(today),
            }
            self._append_and_apply(principal, EventKind.SUBMISSION_ACCEPTED, body)
            token = self._issue_stamp_event(
                principal, self._state.records[identifier]
            )
            return SubmissionOutcome(
                identifier=identifier,
                family_id=family_id,
                family_created=family_created,
                requirement=requirement,
                qualification=qualification,
                business_check=business_check,
                stamp_token=token,
            )

    def add_version(
        self,
        principal: Principal,
        family_id: str,
        version_name: str | None = None,
        metrics: CapabilityMetrics | None = None,
        eval_scores: Mapping[str, float] | None = None,
        planned_deployment: date | None = None,
        submission: RegistrationSubmission | None = None,
        expected_family_sequence: int | None = None,
    ) -> VersionOutcome:
        """Add a version to an existing family.

        Name-only additions must still declare candidate metrics so the
        exceedance assessment can run; if the assessment demands a full
        submission and none is attached, the request is rejected with the
        triggering dimensions.
        """
        with self._write_lock:
            family = self._state.families.get(family_id)
            if family is None:
                raise NotFound(f"family {family_id} not found")
            self._require_family_owner(principal, family)
            self._check_family_sequence(family_id, expected_family_sequence)
            today = self._today()
            planned = planned_deployment or today

            if submission is not None:
                report = validate_submission(submission)
                if report:
                    raise ValidationFailed(report)
                if submission.status != ModelStatus.PRE_DEPLOYMENT:
                    raise PreDeploymentRequired(
                        "new versions must be registered before deployment"
                    )
                if submission.family_trade_name != family.trade_name:
                    raise InvalidRequest(
                        f"submission names family {submission.family_trade_name!r}, "
                        f"endpoint targets {family.trade_name!r}"
                    )
                owner = self._state.developers.get(
                    submission.developer.business_registration_number
                )
                if owner is None or owner.identifier != family.developer_ref:
                    raise Unauthorized(
                        "submission developer does not own this family"
                    )
                version_name = submission.version_name
                metrics = submission.metrics
                scores = capability_scores(submission.evaluations)
                kind = RegistrationKind.FULL_SUBMISSION
            else:
                if not version_name:
                    raise InvalidRequest("version_name is required")
                if metrics is None:
                    raise InvalidRequest(
                        "candidate metrics are required to assess a name-only version"
                    )
                scores = dict(eval_scores or {})
                kind = RegistrationKind.NAME_ONLY

            candidate = VersionCandidate(metrics, scores, planned)
            requirement = assess_version_registration(
                family, candidate, self._policy.family_policy
            )
            if requirement.decision == RequirementDecision.NEW_FAMILY_REQUIRED:
                raise NewFamilyRequired(requirement.reasons)
            if (
                requirement.decision == RequirementDecision.FULL_SUBMISSION
                and submission is None
            ):
                raise FullSubmissionRequired(requirement.reasons)

            version = ModelVersion(
                version_name=version_name,
                kind=kind,
                recorded_at=today,
                status=ModelStatus.PRE_DEPLOYMENT,
                deployment_date=None,
                metrics=metrics,
                eval_scores=scores,
                submission=submission,
            )
            apply_version(family, version, requirement)  # dry-run

            account = next(
                (
                    a
                    for a in self._state.developers.values()
                    if a.identifier == family.developer_ref
                ),
                None,
            )
            identifier = self._allocate_identifier()
            body = {
                "identifier": identifier,
                "family_id": family_id,
                "version": _version_to_dict(version),
                "requirement": _requirement_to_dict(requirement),
                "registration_date": date_to_iso(today),
                "developer_business_number": account.business_number if account else "",
                "developer_legal_name": account.legal_name if account else "",
                "qualification": None
                if submission is None
                else decision_to_dict(
                    evaluate_qualification(
                        submission.metrics, submission.risk, self._policy.thresholds
                    )
                ),
            }
            self._append_and_apply(principal, EventKind.VERSION_ADDED, body)
            token = self._issue_stamp_event(principal, self._state.records[identifier])
            return VersionOutcome(
                identifier=identifier,
                family_id=family_id,
                requirement=requirement,
                stamp_token=token,
            )

    def record_attestation(
        self,
        principal: Principal,
        family_id: str,
        outcome: AttestationOutcome,
        attested_by: str = "",
        expected_family_sequence: int | None = None,
    ) -> AttestationResult:
        """File the semiannual attestation for the earliest open due date.

        Fresh stamps are issued for all live records in the family, so a
        stale stamp signals a lapsed attestation.
        """
        with self._write_lock:
            family = self._state.families.get(family_id)
            if family is None:
                raise NotFound(f"family {family_id} not found")
            self._require_family_owner(principal, family)
            self._check_family_sequence(family_id, expected_family_sequence)

            today = self._today()
            horizon = today + timedelta(days=_ATTESTATION_LOOKAHEAD_DAYS)
            completed = {
                (a.family_id, a.due_date)
                for a in self._state.attestations
                if a.completed_date is not None
            }
            open_dues = [
                due
                for due in attestation_schedule(family.registered_at, horizon)
                if attestation_window_opens(due) <= today
                and (family_id, due) not in completed
            ]
            if not open_dues:
                raise NoAttestationDue(
                    f"family {family_id} has no attestation window open"
                )
            due = open_dues[0]
            self._append_and_apply(
                principal,
                EventKind.ATTESTATION_RECORDED,
                {
                    "family_id": family_id,
                    "due_date": date_to_iso(due),
                    "completed_date": date_to_iso(today),
                    "attested_by": attested_by or (principal.entity_ref or ""),
                    "outcome": outcome.value,
                },
            )
            reissued = []
            for record in self._state.records.values():
                if (
                    record.family_id == family_id
                    and record.status not in REVOKED_STATUSES
                ):
                    self._issue_stamp_event(principal, record)
                    reissued.append(record.identifier)
            return AttestationResult(
                family_id=family_id,
                due_date=due,
                completed_date=today,
                outcome=outcome,
                reissued_stamps=tuple(reissued),
            )

    def change_status(
        self,
        principal: Principal,
        identifier: str,
        new_status: ModelStatus,
        deployment_date: date | None = None,
    ) -> RegistrationRecord:
        """Move a registered version through its deployment lifecycle.

        OnMarket is only reachable here, i.e. for versions that already hold
        an accepted registration: the pre-deployment rule.
        """
        with self._write_lock:
            record = self._state.records.get(stamps_mod.normalize_identifier(identifier))
            if record is None:
                raise NotFound(f"no registration {identifier!r}")
            family = self._state.families[record.family_id]
            self._require_family_owner(principal, family)

            if new_status not in _ALLOWED_STATUS_TRANSITIONS[record.status]:
                raise InvalidStatusTransition(
                    f"{record.status.value} -> {new_status.value} is not allowed"
                )
            effective_deployment = None
            if new_status == ModelStatus.ON_MARKET:
                effective_deployment = deployment_date or self._today()
            self._append_and_apply(
                principal,
                EventKind.STATUS_CHANGED,
                {
                    "identifier": record.identifier,
                    "old_status": record.status.value,
                    "new_status": new_status.value,
                    "deployment_date": date_to_iso(effective_deployment),
                    "effective_date": date_to_iso(self._today()),
                },
            )
            return self._state.records[record.identifier]

    # -- admin operations ----------------------------------------------------

    def open_violation(
        self,
        principal: Principal,
        subject: ViolationSubject,
        subject_ref: str,
        kind: ViolationKind,
        severity: Severity | None = None,
        opened_date: date | None = None,
    ) -> Violation:
        with self._write_lock:
            self._require_role(principal, Role.REGISTRY_ADMIN)
            if not subject_ref:
                raise InvalidRequest("subject_ref is required")
            history = sorted(
                (
                    v
                    for v in self._state.violations.values()
                    if v.subject_ref == subject_ref and v.kind == kind
                ),
                key=lambda v: (v.opened_date, v.violation_id),
            )
            effective_severity = severity or escalate_severity(history)
            violation = Violation(
                violation_id=self._allocate_identifier(),
                subject=subject,
                subject_ref=subject_ref,
                kind=kind,
                severity=effective_severity,
                opened_date=opened_date or self._today(),
            )
            self._append_and_apply(
                principal,
                EventKind.VIOLATION_OPENED,
                {"violation": _violation_to_dict(violation)},
            )
            return violation

    def assess_violation_fine(
        self,
        principal: Principal,
        violation_id: str,
        annual_turnover: float,
        days_unresolved: int = 0,
    ) -> FineAssessment:
        with self._write_lock:
            self._require_role(principal, Role.REGISTRY_ADMIN)
            violation = self._state.violations.get(violation_id)
            if violation is None:
                raise NotFound(f"violation {violation_id} not found")
            prior_same_kind = sum(
                1
                for v in self._state.violations.values()
                if v.subject_ref == violation.subject_ref
                and v.kind == violation.kind
                and v.violation_id != violation.violation_id
                and v.opened_date <= violation.opened_date
            )
            assessment = assess_fine(
                violation,
                annual_turnover,
                days_unresolved,
                prior_same_kind,
                self._policy.fine_policy,
            )
            self._append_and_apply(
                principal, EventKind.FINE_ASSESSED, _fine_to_dict(assessment)
            )
            return assessment

    def overdue_attestations(self, as_of: date | None = None) -> list[OverdueAttestation]:
        return detect_overdue(
            self._state.families.values(),
            self._state.attestations,
            as_of or self._today(),
        )

    # -- public surface --------------------------------------------------------

    def log_third_party_check(
        self,
        user_ref: str,
        claimed_model: str,
        identifier_presented: str | None = None,
        declaration: str | None = None,
    ) -> ThirdPartyCheckEntry:
        """Record a third party's registration check in the append-only ledger."""
        with self._write_lock:
            if not user_ref or not claimed_model:
                raise InvalidRequest("user_ref and claimed_model are required")
            if identifier_presented:
                normalized = stamps_mod.normalize_identifier(identifier_presented)
                lookup = (
                    LookupResult.REGISTERED
                    if normalized in self._state.records
                    else LookupResult.NOT_FOUND
                )
                presented = normalized
            else:
                if not declaration:
                    raise MissingNonQualificationDeclaration(
                        "checks without an identifier must declare the model does "
                        "not meet inclusion criteria"
                    )
                lookup = LookupResult.NOT_REQUIRED
                presented = None
            entry = ThirdPartyCheckEntry(
                sequence=len(self._state.ledger.entries()) + 1,
                timestamp=self._now(),
                user_ref=user_ref,
                claimed_model=claimed_model,
                identifier_presented=presented,
                lookup_result=lookup,
                declaration=declaration,
            )
            self._append_and_apply(
                Principal(Role.PUBLIC),
                EventKind.THIRD_PARTY_CHECK_LOGGED,
                {"entry": check_entry_to_dict(entry)},
            )
            return entry

    def read_record(
        self, principal: Principal, identifier: str
    ) -> tuple[str, RegistrationRecord | PublicRecord]:
        """Role-gated view: ("full", record) for privileged readers and the
        owning developer, ("public", projection) for everyone else."""
        record = self._state.records.get(stamps_mod.normalize_identifier(identifier))
        if record is None:
            raise NotFound(f"no registration {identifier!r}")
        if principal.role in (Role.REGISTRY_ADMIN, Role.GOVERNMENT_READER):
            return "full", record
        if (
            principal.role == Role.DEVELOPER
            and principal.entity_ref == record.developer_business_number
        ):
            return "full", record
        return "public", public_projection(record)

    def search_public(
        self, query: str, page: int = 1, page_size: int = SEARCH_PAGE_SIZE
    ) -> tuple[list[PublicRecord], int]:
        """Case-insensitive substring search over the four public text fields.

        An empty query returns nothing: point lookups only, no bulk dump.
        """
        needle = query.strip().casefold()
        if not needle:
            return [], 0
        matches = [
            record
            for record in self._state.records.values()
            if needle in record.developer_legal_name.casefold()
            or needle in record.family_trade_name.casefold()
            or needle in record.version_name.casefold()
            or needle in record.identifier.casefold()
        ]
        matches.sort(key=lambda r: (-r.registration_date.toordinal(), r.identifier))
        page = max(page, 1)
        start = (page - 1) * page_size
        return [public_projection(r) for r in matches[start : start + page_size]], len(
            matches
        )

    def verify_registration(self, identifier: str) -> tuple[bool, PublicRecord | None]:
        record = self._state.records.get(stamps_mod.normalize_identifier(identifier))
        if record is None:
            return False, None
        return True, public_projection(record)

    def current_stamp(self, identifier: str) -> str:
        normalized = stamps_mod.normalize_identifier(identifier)
        record = self._state.records.get(normalized)
        if record is None:
            raise NotFound(f"no registration {identifier!r}")
        if record.status in REVOKED_STATUSES:
            raise stamps_mod.RevokedRegistration(
                f"registration {normalized} is {record.status.value}"
            )
        token = self._state.stamps.get(normalized)
        if token is None:
            raise NotFound(f"no stamp issued for {normalized}")
        return token
