"""Submission validation: invariant reporting, determinism, JSON round trip."""

from __future__ import annotations

from datetime import date

from hypothesis import given, strategies as st

from modelregistry.jsonio import submission_from_json, submission_to_json
from modelregistry.types import (
    DataCategory,
    DeploymentMode,
    HighRiskDomain,
    ModelStatus,
    RiskBasis,
)
from modelregistry.validation import validate_submission

from .conftest import make_developer, make_metrics, make_submission


def paths(report):
    return [p.field_path for p in report]


def test_valid_fixture_has_empty_report():
    assert validate_submission(make_submission()) == []


def test_empty_legal_name_reported():
    sub = make_submission(developer=make_developer(legal_name=""))
    report = validate_submission(sub)
    assert ("developer.legal_name", "must be non-empty") in [
        (p.field_path, p.problem) for p in report
    ]


def test_on_market_without_deployment_date_flagged():
    sub = make_submission(status=ModelStatus.ON_MARKET, deployment_date=None)
    assert "deployment_date" in paths(validate_submission(sub))


def test_on_market_with_deployment_date_ok():
    sub = make_submission(
        status=ModelStatus.ON_MARKET, deployment_date=date(2025, 3, 1)
    )
    assert "deployment_date" not in paths(validate_submission(sub))


def test_email_rules():
    for bad in ["", "no-at-sign", "two@@ats", "a@b@c", "@domain", "local@"]:
        sub = make_submission(developer=make_developer(contact_email=bad))
        assert "developer.contact_email" in paths(validate_submission(sub)), bad
    good = make_submission(developer=make_developer(contact_email="x@y"))
    assert "developer.contact_email" not in paths(validate_submission(good))


def test_active_params_must_not_exceed_total():
    sub = make_submission(
        metrics=make_metrics(total_parameters=10, active_parameters_avg=11)
    )
    assert "metrics.active_parameters_avg" in paths(validate_submission(sub))


def test_non_finite_metric_reported():
    sub = make_submission(metrics=make_metrics(training_flop=float("inf")))
    assert "metrics.training_flop" in paths(validate_submission(sub))


def test_risk_basis_must_match_domains():
    sub = make_submission()
    sub.risk.domains = {HighRiskDomain.CYBERSECURITY}
    sub.risk.basis = {HighRiskDomain.CHEMICAL_WEAPONS: RiskBasis.PRIMARY_TRAINING_DATA}
    report = validate_submission(sub)
    assert paths(report).count("risk.basis") == 2


def test_training_data_subcategory_requires_parent():
    sub = make_submission()
    sub.training_data.categories = {DataCategory.IMAGES_LABELED_PEOPLE}
    assert "training_data.categories" in paths(validate_submission(sub))
    sub.training_data.categories = {
        DataCategory.IMAGES_LABELED_PEOPLE,
        DataCategory.IMAGES,
    }
    assert "training_data.categories" not in paths(validate_submission(sub))


def test_cloud_mode_requires_providers():
    sub = make_submission()
    sub.hardware.deployment_mode = DeploymentMode.HYBRID
    sub.hardware.cloud_providers = []
    assert "hardware.cloud_providers" in paths(validate_submission(sub))
    sub.hardware.deployment_mode = DeploymentMode.ON_PREMISES
    assert "hardware.cloud_providers" not in paths(validate_submission(sub))


def test_plain_description_cap():
    sub = make_submission()
    sub.functions.plain_language_description = "x" * 2000
    assert "functions.plain_language_description" not in paths(validate_submission(sub))
    sub.functions.plain_language_description = "x" * 2001
    assert "functions.plain_language_description" in paths(validate_submission(sub))


def test_kpi_thresholds_must_name_monitored_kpis():
    sub = make_submission()
    sub.monitoring.kpi_thresholds[0].kpi = "not-a-kpi"
    assert "monitoring.kpi_thresholds[0].kpi" in paths(validate_submission(sub))


def test_report_sorted_and_pure():
    sub = make_submission(developer=make_developer(legal_name="", contact_email=""))
    sub.architecture.layer_count = 0
    first = validate_submission(sub)
    second = validate_submission(sub)
    assert first == second
    assert paths(first) == sorted(paths(first))


@given(
    legal_name=st.sampled_from(["", "Acme AI Inc"]),
    email=st.sampled_from(["", "a@b", "bad"]),
    layer_count=st.sampled_from([0, 1, 96]),
)
def test_purity_under_field_combinations(legal_name, email, layer_count):
    sub = make_submission(
        developer=make_developer(legal_name=legal_name, contact_email=email)
    )
    sub.architecture.layer_count = layer_count
    assert validate_submission(sub) == validate_submission(sub)


def test_canonical_json_round_trip():
    sub = make_submission(deployment_date=None)
    text = submission_to_json(sub)
    again = submission_from_json(text)
    assert again == sub
    assert submission_to_json(again) == text
