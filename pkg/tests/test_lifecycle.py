"""Family lifecycle: resubmission assessment, consistency, attestations."""

from __future__ import annotations

from datetime import date, timedelta

import pytest
from hypothesis import given, settings, strategies as st

from modelregistry.lifecycle import (
    AttestationRecord,
    AttestationOutcome,
    DuplicateVersionName,
    EmptyFamily,
    FamilyConsistencyViolation,
    FamilyPolicy,
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
    compute_dimension_maxima,
    detect_overdue,
    semester_end_dates,
)
from modelregistry.types import (
    EvalType,
    EvaluationDisclosure,
    EvaluationEntry,
    ModelStatus,
    OpennessClass,
)

from .conftest import make_metrics, make_submission

POLICY = FamilyPolicy()
FULL_REQ = VersionRegistrationRequirement(
    RequirementDecision.FULL_SUBMISSION,
    (RequirementReason("initial registration", "first version"),),
)


def full_version(name="v1", submission=None, metrics=None, eval_scores=None) -> ModelVersion:
    submission = submission or make_submission(version_name=name)
    return ModelVersion(
        version_name=name,
        kind=RegistrationKind.FULL_SUBMISSION,
        recorded_at=date(2025, 1, 15),
        status=ModelStatus.PRE_DEPLOYMENT,
        metrics=metrics or submission.metrics,
        eval_scores=dict(eval_scores or {}),
        submission=submission,
    )


def make_family(
    max_params=100_000_000_000,
    max_compute=1e25,
    max_tokens=10_000_000_000_000,
    eval_scores=None,
    registered_at=date(2025, 1, 15),
) -> ModelFamily:
    metrics = make_metrics(
        total_parameters=max_params,
        active_parameters_avg=min(max_params, 10_000_000_000),
        training_flop=max_compute,
        post_training_flop=0.0,
        training_tokens=max_tokens,
    )
    submission = make_submission(version_name="v1", metrics=metrics)
    family = ModelFamily(
        family_id="MR-2025-TESTFAMILY-2",
        trade_name="Frontier",
        developer_ref="MR-2025-TESTDEVELO-2",
        registered_at=registered_at,
        openness=OpennessClass.CLOSED_SOURCE,
        security_tier="SL3",
    )
    version = full_version("v1", submission, metrics, eval_scores)
    return apply_version(family, version, FULL_REQ)


def candidate(
    family: ModelFamily,
    params=None,
    compute=None,
    tokens=None,
    eval_scores=None,
    planned=None,
) -> VersionCandidate:
    maxima = family.dimension_maxima
    metrics = make_metrics(
        total_parameters=params if params is not None else maxima.max_total_parameters,
        active_parameters_avg=1_000_000_000,
        training_flop=compute if compute is not None else maxima.max_total_compute,
        post_training_flop=0.0,
        training_tokens=tokens if tokens is not None else maxima.max_training_tokens,
    )
    return VersionCandidate(
        metrics=metrics,
        eval_scores=eval_scores if eval_scores is not None else dict(maxima.max_eval_scores),
        planned_deployment=planned or (family.registered_at + timedelta(days=30)),
    )


# -- assess_version_registration ---------------------------------------------


def test_25_percent_size_exceedance_requires_full_submission():
    family = make_family(max_params=100 * 10**9)
    req = assess_version_registration(family, candidate(family, params=125 * 10**9), POLICY)
    assert req.decision == RequirementDecision.FULL_SUBMISSION
    assert any(r.dimension == "model size" for r in req.reasons)


def test_candidate_equal_to_maxima_is_name_only():
    family = make_family()
    req = assess_version_registration(family, candidate(family), POLICY)
    assert req.decision == RequirementDecision.NAME_ONLY
    assert req.reasons == ()


def test_15_percent_compute_is_name_only():
    family = make_family(max_compute=1e25)
    req = assess_version_registration(family, candidate(family, compute=1.15e25), POLICY)
    assert req.decision == RequirementDecision.NAME_ONLY


def test_exactly_20_percent_is_name_only():
    family = make_family(max_params=100 * 10**9)
    req = assess_version_registration(family, candidate(family, params=120 * 10**9), POLICY)
    assert req.decision == RequirementDecision.NAME_ONLY


def test_just_over_20_percent_requires_full_submission():
    family = make_family(max_params=100 * 10**9)
    req = assess_version_registration(
        family, candidate(family, params=120 * 10**9 + 1), POLICY
    )
    assert req.decision == RequirementDecision.FULL_SUBMISSION


def test_eval_absolute_threshold_crossing():
    family = make_family(eval_scores={"autonomous-replication": 0.70})
    req = assess_version_registration(
        family, candidate(family, eval_scores={"autonomous-replication": 0.82}), POLICY
    )
    assert req.decision == RequirementDecision.FULL_SUBMISSION
    assert any("capability:autonomous-replication" == r.dimension for r in req.reasons)


def test_eval_relative_exceedance():
    family = make_family(eval_scores={"cyber-offense": 0.50})
    # 0.50 * 1.2 = 0.60; 0.61 exceeds relatively but stays under the 0.80 bar.
    req = assess_version_registration(
        family, candidate(family, eval_scores={"cyber-offense": 0.61}), POLICY
    )
    assert req.decision == RequirementDecision.FULL_SUBMISSION


def test_eval_score_at_family_max_is_name_only():
    family = make_family(eval_scores={"cyber-offense": 0.85})
    # Family already above the absolute bar; equal score triggers nothing.
    req = assess_version_registration(
        family, candidate(family, eval_scores={"cyber-offense": 0.85}), POLICY
    )
    assert req.decision == RequirementDecision.NAME_ONLY


def test_deployment_past_age_limit_requires_new_family():
    family = make_family(registered_at=date(2025, 1, 15))
    late = family.registered_at + timedelta(days=731)
    req = assess_version_registration(family, candidate(family, planned=late), POLICY)
    assert req.decision == RequirementDecision.NEW_FAMILY_REQUIRED
    assert req.reasons


def test_deployment_at_age_limit_is_allowed():
    family = make_family(registered_at=date(2025, 1, 15))
    at_limit = family.registered_at + timedelta(days=730)
    req = assess_version_registration(family, candidate(family, planned=at_limit), POLICY)
    assert req.decision == RequirementDecision.NAME_ONLY


def test_empty_family_rejected():
    family = ModelFamily(
        family_id="MR-2025-TESTFAMILY-2",
        trade_name="Frontier",
        developer_ref="dev",
        registered_at=date(2025, 1, 1),
        openness=OpennessClass.CLOSED_SOURCE,
        security_tier="SL3",
    )
    with pytest.raises(EmptyFamily):
        assess_version_registration(family, candidate(make_family()), POLICY)


def test_reasons_list_every_triggering_dimension():
    family = make_family(max_params=100 * 10**9, max_compute=1e25, max_tokens=10**13)
    req = assess_version_registration(
        family,
        candidate(family, params=130 * 10**9, compute=1.3e25, tokens=int(1.3e13)),
        POLICY,
    )
    dims = {r.dimension for r in req.reasons}
    assert dims == {"model size", "training compute", "training data"}


@given(
    base=st.integers(1, 10**12),
    factor=st.fractions(min_value=0, max_value=2),
)
@settings(max_examples=200)
def test_metric_exceedance_monotone(base, factor):
    """Increasing a candidate metric never flips FullSubmission to NameOnly."""
    family = make_family(max_params=base)
    low = assess_version_registration(
        family, candidate(family, params=int(base * factor)), POLICY
    )
    high = assess_version_registration(
        family, candidate(family, params=int(base * factor) + base // 10 + 1), POLICY
    )
    if low.decision == RequirementDecision.FULL_SUBMISSION:
        assert high.decision == RequirementDecision.FULL_SUBMISSION


# -- apply_version ------------------------------------------------------------


def test_apply_full_submission_updates_maxima():
    family = make_family(max_params=100 * 10**9)
    bigger = make_submission(
        version_name="v2", metrics=make_metrics(total_parameters=150 * 10**9)
    )
    updated = apply_version(
        family,
        full_version("v2", bigger),
        VersionRegistrationRequirement(RequirementDecision.NAME_ONLY),
    )
    assert updated.dimension_maxima.max_total_parameters == 150 * 10**9
    # original family untouched
    assert family.dimension_maxima.max_total_parameters == 100 * 10**9


def test_apply_recomputation_matches_scratch():
    family = make_family()
    v2 = full_version("v2", make_submission(version_name="v2"))
    updated = apply_version(
        family, v2, VersionRegistrationRequirement(RequirementDecision.NAME_ONLY)
    )
    assert updated.dimension_maxima == compute_dimension_maxima(updated.versions)


def test_openness_mismatch_rejected():
    family = make_family()  # ClosedSource
    open_sub = make_submission(version_name="v2")
    open_sub.access.weights_public = True
    with pytest.raises(FamilyConsistencyViolation):
        apply_version(
            family,
            full_version("v2", open_sub),
            VersionRegistrationRequirement(RequirementDecision.NAME_ONLY),
        )


def test_security_tier_mismatch_rejected():
    family = make_family()
    sub = make_submission(version_name="v2")
    sub.security.declared_security_tier = "SL1"
    with pytest.raises(FamilyConsistencyViolation):
        apply_version(
            family,
            full_version("v2", sub),
            VersionRegistrationRequirement(RequirementDecision.NAME_ONLY),
        )


def test_duplicate_version_name_rejected():
    family = make_family()
    with pytest.raises(DuplicateVersionName):
        apply_version(
            family,
            full_version("v1"),
            VersionRegistrationRequirement(RequirementDecision.NAME_ONLY),
        )


def test_name_only_version_does_not_move_maxima():
    family = make_family(max_params=100 * 10**9)
    name_only = ModelVersion(
        version_name="v1.1",
        kind=RegistrationKind.NAME_ONLY,
        recorded_at=date(2025, 2, 1),
        status=ModelStatus.PRE_DEPLOYMENT,
        metrics=make_metrics(total_parameters=10**13),
    )
    updated = apply_version(
        family, name_only, VersionRegistrationRequirement(RequirementDecision.NAME_ONLY)
    )
    assert updated.dimension_maxima.max_total_parameters == 100 * 10**9


def test_full_requirement_rejects_name_only_version():
    family = make_family()
    name_only = ModelVersion(
        version_name="v2",
        kind=RegistrationKind.NAME_ONLY,
        recorded_at=date(2025, 2, 1),
        status=ModelStatus.PRE_DEPLOYMENT,
    )
    with pytest.raises(ValueError):
        apply_version(family, name_only, FULL_REQ)


# -- capability_scores ---------------------------------------------------------


def test_capability_scores_extraction():
    evals = EvaluationDisclosure(
        entries=[
            EvaluationEntry(EvalType.CAPABILITY, "m", {"a": 0.5, "raw-perplexity": 8.2}),
            EvaluationEntry(EvalType.CAPABILITY, "m", {"a": 0.7, "b": 0.2}),
            EvaluationEntry(EvalType.SAFETY, "m", {"c": 0.9}),
        ]
    )
    assert capability_scores(evals) == {"a": 0.7, "b": 0.2}


# -- attestation scheduling ----------------------------------------------------


def test_schedule_examples():
    # hand enumeration: grace ends 2025-04-15, both 2025 dues fall after it
    assert attestation_schedule(date(2025, 1, 15), date(2026, 1, 1)) == [
        date(2025, 6, 30),
        date(2025, 12, 31),
    ]
    # grace ends 2025-08-30, so 2025-06-30 is skipped
    assert attestation_schedule(date(2025, 6, 1), date(2026, 1, 1)) == [
        date(2025, 12, 31)
    ]
    assert attestation_schedule(date(2025, 3, 3), date(2025, 3, 3)) == []


def test_schedule_rejects_backwards_window():
    with pytest.raises(ValueError):
        attestation_schedule(date(2025, 3, 3), date(2025, 3, 2))


def test_window_opens():
    assert attestation_window_opens(date(2025, 6, 30)) == date(2025, 1, 1)
    assert attestation_window_opens(date(2025, 12, 31)) == date(2025, 7, 1)


@given(
    registered=st.dates(date(2024, 1, 1), date(2030, 12, 31)),
    start_offset=st.integers(91, 1000),
)
@settings(max_examples=300)
def test_every_12_month_window_has_two_due_dates(registered, start_offset):
    """Any 12-month window starting >= 90 days post-registration holds
    exactly two due dates."""
    window_start = registered + timedelta(days=start_offset)
    try:
        window_end = window_start.replace(year=window_start.year + 1)
    except ValueError:  # Feb 29
        window_end = window_start.replace(year=window_start.year + 1, month=3, day=1)
    horizon = window_end + timedelta(days=400)
    schedule = attestation_schedule(registered, horizon)
    in_window = [d for d in schedule if window_start <= d < window_end]
    assert len(in_window) == 2


def test_semester_ends():
    assert semester_end_dates(2025) == (date(2025, 6, 30), date(2025, 12, 31))


# -- detect_overdue -------------------------------------------------------------


def overdue_family(family_id: str, registered: date) -> ModelFamily:
    family = make_family(registered_at=registered)
    family.family_id = family_id
    return family


def test_detect_overdue_basic():
    family = overdue_family("MR-2025-AAAAAAAAAA-2", date(2025, 1, 15))
    result = detect_overdue([family], [], date(2025, 7, 10))
    assert result == [OverdueAttestation("MR-2025-AAAAAAAAAA-2", date(2025, 6, 30), 10)]


def test_detect_overdue_attested_is_clear():
    family = overdue_family("MR-2025-AAAAAAAAAA-2", date(2025, 1, 15))
    attestation = AttestationRecord(
        family_id=family.family_id,
        due_date=date(2025, 6, 30),
        attested_by="ops",
        outcome=AttestationOutcome.CONFIRMED_ACCURATE,
        completed_date=date(2025, 6, 20),
    )
    assert detect_overdue([family], [attestation], date(2025, 7, 10)) == []


def test_detect_overdue_incomplete_attestation_still_overdue():
    family = overdue_family("MR-2025-AAAAAAAAAA-2", date(2025, 1, 15))
    pending = AttestationRecord(
        family_id=family.family_id,
        due_date=date(2025, 6, 30),
        attested_by="ops",
        outcome=AttestationOutcome.CONFIRMED_ACCURATE,
        completed_date=None,
    )
    assert len(detect_overdue([family], [pending], date(2025, 7, 10))) == 1


def test_detect_overdue_sorted_most_overdue_first():
    family_a = overdue_family("MR-2025-AAAAAAAAAA-2", date(2024, 11, 1))
    family_b = overdue_family("MR-2025-BBBBBBBBBB-2", date(2025, 1, 15))
    result = detect_overdue([family_a, family_b], [], date(2025, 8, 4))
    days = [o.days_overdue for o in result]
    assert days == sorted(days, reverse=True)
    assert result[0].family_id == "MR-2025-AAAAAAAAAA-2"
