"""Model-family lifecycle: version registration requirements, family
consistency, and semiannual attestation scheduling.

A family is represented by its most capable member along each measurable
dimension. A new version only needs a full resubmission when it exceeds a
family maximum by more than the policy fraction, crosses a capability
threshold, or is deployed past the family age limit (new family required).

Exceedance comparisons run in exact rational arithmetic: a candidate at
exactly (1 + fraction) times the family maximum does not trigger, no matter
how the floats round.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from datetime import date, timedelta
from enum import Enum
from fractions import Fraction
from typing import Iterable, Mapping

from modelregistry.openness import classify_openness
from modelregistry.types import (
    CapabilityMetrics,
    EvalType,
    EvaluationDisclosure,
    ModelStatus,
    OpennessClass,
    RegistrationSubmission,
)


class RegistrationKind(str, Enum):
    FULL_SUBMISSION = "FullSubmission"
    NAME_ONLY = "NameOnly"


class RequirementDecision(str, Enum):
    NAME_ONLY = "NameOnly"
    FULL_SUBMISSION = "FullSubmission"
    NEW_FAMILY_REQUIRED = "NewFamilyRequired"


class AttestationOutcome(str, Enum):
    CONFIRMED_ACCURATE = "ConfirmedAccurate"
    UPDATED = "Updated"


class EmptyFamily(Exception):
    """Family has no full-submission versions; a first version is always full."""


class FamilyConsistencyViolation(Exception):
    """Version's openness class or security tier differs from the family's."""


class DuplicateVersionName(Exception):
    """Version name already registered within the family."""


@dataclass(frozen=True)
class FamilyPolicy:
    exceedance_fraction: float = 0.20
    eval_exceedance_fraction: float = 0.20
    eval_absolute_threshold: float = 0.80
    new_family_age_limit_days: int = 730
    attestation_period: str = "CalendarSemesters"

    def __post_init__(self) -> None:
        if not 0 < self.exceedance_fraction < 1:
            raise ValueError("exceedance_fraction must be in (0, 1)")
        if not 0 < self.eval_exceedance_fraction < 1:
            raise ValueError("eval_exceedance_fraction must be in (0, 1)")
        if not 0 < self.eval_absolute_threshold <= 1:
            raise ValueError("eval_absolute_threshold must be in (0, 1]")
        if self.new_family_age_limit_days <= 0:
            raise ValueError("new_family_age_limit_days must be > 0")


@dataclass(frozen=True)
class RequirementReason:
    dimension: str
    detail: str


@dataclass(frozen=True)
class VersionRegistrationRequirement:
    decision: RequirementDecision
    reasons: tuple[RequirementReason, ...] = ()


@dataclass
class DimensionMaxima:
    max_total_parameters: int = 0
    max_total_compute: float = 0.0
    max_training_tokens: int = 0
    max_eval_scores: dict[str, float] = field(default_factory=dict)


@dataclass
class ModelVersion:
    version_name: str
    kind: RegistrationKind
    recorded_at: date
    status: ModelStatus
    deployment_date: date | None = None
    metrics: CapabilityMetrics | None = None
    eval_scores: dict[str, float] = field(default_factory=dict)
    submission: RegistrationSubmission | None = None


@dataclass
class ModelFamily:
    family_id: str
    trade_name: str
    developer_ref: str
    registered_at: date
    openness: OpennessClass
    security_tier: str
    versions: list[ModelVersion] = field(default_factory=list)
    dimension_maxima: DimensionMaxima = field(default_factory=DimensionMaxima)


@dataclass(frozen=True)
class VersionCandidate:
    metrics: CapabilityMetrics
    eval_scores: Mapping[str, float]
    planned_deployment: date


@dataclass
class AttestationRecord:
    family_id: str
    due_date: date
    attested_by: str
    outcome: AttestationOutcome
    completed_date: date | None = None


@dataclass(frozen=True)
class OverdueAttestation:
    family_id: str
    due_date: date
    days_overdue: int


def capability_scores(evaluations: EvaluationDisclosure) -> dict[str, float]:
    """Extract per-domain capability scores in [0, 1] from evaluation entries.

    Only Capability-type entries feed family maxima; metric values outside
    [0, 1] (perplexities, latencies, ...) are not comparable scores and are
    skipped. Max wins when a name repeats across entries.
    """
    scores: dict[str, float] = {}
    for entry in evaluations.entries:
        if entry.eval_type != EvalType.CAPABILITY:
            continue
        for name, value in entry.metrics.items():
            if 0.0 <= value <= 1.0:
                scores[name] = max(scores.get(name, 0.0), value)
    return scores


def _exceeds_by_fraction(candidate: float, baseline: float, fraction: float) -> bool:
    # Exact rationals: exactly (1+fraction)*baseline must NOT count as exceeding.
    return Fraction(candidate) > Fraction(baseline) * (1 + Fraction(str(fraction)))


def compute_dimension_maxima(versions: Iterable[ModelVersion]) -> DimensionMaxima:
    """Elementwise maxima over the full-submission versions."""
    maxima = DimensionMaxima()
    for version in versions:
        if version.kind != RegistrationKind.FULL_SUBMISSION or version.metrics is None:
            continue
        m = version.metrics
        maxima.max_total_parameters = max(maxima.max_total_parameters, m.total_parameters)
        maxima.max_total_compute = max(maxima.max_total_compute, m.total_compute)
        maxima.max_training_tokens = max(maxima.max_training_tokens, m.training_tokens)
        for domain, score in version.eval_scores.items():
            current = maxima.max_eval_scores.get(domain, 0.0)
            maxima.max_eval_scores[domain] = max(current, score)
    return maxima


def assess_version_registration(
    family: ModelFamily, candidate: VersionCandidate, policy: FamilyPolicy
) -> VersionRegistrationRequirement:
    """Decide what a new version owes the registry: nothing beyond its name,
    a full resubmission, or registration as a new family.

    Metric dimensions use strict exceedance above (1 + fraction) times the
    family maximum; the capability threshold crossing uses >= at the
    absolute threshold. Reasons list every triggering dimension.
    """
    if not any(v.kind == RegistrationKind.FULL_SUBMISSION for v in family.versions):
        raise EmptyFamily(
            f"family {family.family_id} has no full-submission versions; "
            "a first version is always a full submission"
        )

    age_limit = family.registered_at + timedelta(days=policy.new_family_age_limit_days)
    if candidate.planned_deployment > age_limit:
        reason = RequirementReason(
            dimension="deployment age",
            detail=(
                f"planned deployment {candidate.planned_deployment.isoformat()} is more "
                f"than {policy.new_family_age_limit_days} days after family "
                f"registration {family.registered_at.isoformat()}"
            ),
        )
        return VersionRegistrationRequirement(
            RequirementDecision.NEW_FAMILY_REQUIRED, (reason,)
        )

    maxima = family.dimension_maxima
    frac_pct = policy.exceedance_fraction * 100
    reasons: list[RequirementReason] = []
    metric_dimensions = (
        ("model size", candidate.metrics.total_parameters, maxima.max_total_parameters),
        ("training compute", candidate.metrics.total_compute, maxima.max_total_compute),
        ("training data", candidate.metrics.training_tokens, maxima.max_training_tokens),
    )
    for dimension, value, family_max in metric_dimensions:
        if _exceeds_by_fraction(value, family_max, policy.exceedance_fraction):
            reasons.append(
                RequirementReason(
                    dimension=dimension,
                    detail=(
                        f"candidate {value} exceeds family maximum {family_max} "
                        f"by more than {frac_pct:g}%"
                    ),
                )
            )

    for domain in sorted(candidate.eval_scores):
        score = candidate.eval_scores[domain]
        family_max = maxima.max_eval_scores.get(domain, 0.0)
        dimension = f"capability:{domain}"
        if _exceeds_by_fraction(score, family_max, policy.eval_exceedance_fraction):
            reasons.append(
                RequirementReason(
                    dimension=dimension,
                    detail=(
                        f"score {score:g} exceeds family maximum {family_max:g} by more "
                        f"than {policy.eval_exceedance_fraction * 100:g}%"
                    ),
                )
            )
        if score >= policy.eval_absolute_threshold > family_max:
            reasons.append(
                RequirementReason(
                    dimension=dimension,
                    detail=(
                        f"score {score:g} crosses the {policy.eval_absolute_threshold:g} "
                        f"capability threshold (family maximum {family_max:g})"
                    ),
                )
            )

    if reasons:
        return VersionRegistrationRequirement(
            RequirementDecision.FULL_SUBMISSION, tuple(reasons)
        )
    return VersionRegistrationRequirement(RequirementDecision.NAME_ONLY)


def apply_version(
    family: ModelFamily,
    version: ModelVersion,
    requirement: VersionRegistrationRequirement,
) -> ModelFamily:
    """Append a version and recompute family maxima; returns a new family.

    A full-submission version always satisfies a name-only requirement; the
    reverse is rejected. Full versions must match the family's openness class
    and security tier.
    """
    if requirement.decision == RequirementDecision.NEW_FAMILY_REQUIRED:
        raise ValueError("version requires a new family; cannot append to this one")
    if (
        requirement.decision == RequirementDecision.FULL_SUBMISSION
        and version.kind != RegistrationKind.FULL_SUBMISSION
    ):
        raise ValueError("requirement demands a full submission")
    if version.kind == RegistrationKind.FULL_SUBMISSION and version.submission is None:
        raise ValueError("full-submission version must carry its submission")

    if any(v.version_name == version.version_name for v in family.versions):
        raise DuplicateVersionName(
            f"version {version.version_name!r} already exists in family {family.family_id}"
        )

    if version.kind == RegistrationKind.FULL_SUBMISSION:
        declared_openness = classify_openness(version.submission.access)
        if declared_openness != family.openness:
            raise FamilyConsistencyViolation(
                f"version openness {declared_openness.value} differs from family "
                f"openness {family.openness.value}"
            )
        declared_tier = version.submission.security.declared_security_tier
        if declared_tier != family.security_tier:
            raise FamilyConsistencyViolation(
                f"version security tier {declared_tier!r} differs from family "
                f"tier {family.security_tier!r}"
            )

    versions = list(family.versions) + [version]
    return replace(
        family, versions=versions, dimension_maxima=compute_dimension_maxima(versions)
    )


ATTESTATION_GRACE_DAYS = 90


def semester_end_dates(year: int) -> tuple[date, date]:
    return date(year, 6, 30), date(year, 12, 31)


def attestation_window_opens(due: date) -> date:
    """Earliest date an attestation for the given due date may be filed."""
    return date(due.year, 1, 1) if due.month == 6 else date(due.year, 7, 1)


def attestation_schedule(registered_at: date, horizon_end: date) -> list[date]:
    """Semiannual due dates (Jun 30 / Dec 31) in (registered_at + 90d, horizon_end].

    The 90-day grace drops a due date that would land immediately after
    initial registration.
    """
    if registered_at > horizon_end:
        raise ValueError("registered_at must not be after horizon_end")
    earliest_exclusive = registered_at + timedelta(days=ATTESTATION_GRACE_DAYS)
    due_dates = []
    for year in range(registered_at.year, horizon_end.year + 1):
        for due in semester_end_dates(year):
            if earliest_exclusive < due <= horizon_end:
                due_dates.append(due)
    return due_dates


def detect_overdue(
    families: Iterable[ModelFamily],
    attestations: Iterable[AttestationRecord],
    as_of: date,
) -> list[OverdueAttestation]:
    """Every due date at or before as_of lacking a completed attestation,
    most overdue first."""
    completed = {
        (a.family_id, a.due_date) for a in attestations if a.completed_date is not None
    }
    overdue = []
    for family in families:
        if family.registered_at > as_of:
            continue
        for due in attestation_schedule(family.registered_at, as_of):
            if (family.family_id, due) not in completed:
                overdue.append(
                    OverdueAttestation(family.family_id, due, (as_of - due).days)
                )
    overdue.sort(key=lambda o: (-o.days_overdue, o.family_id, o.due_date))
    return overdue
