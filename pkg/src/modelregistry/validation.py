"""Submission validation: every invariant violation reported as data.

`validate_submission` never raises on bad content; problems come back as a
deterministically ordered report so the same payload always yields the same
bytes. Structural parse failures are handled upstream (see `jsonio`).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from modelregistry.types import (
    DATA_CATEGORY_PARENTS,
    DEPLOYED_STATUSES,
    PLAIN_DESCRIPTION_MAX_CHARS,
    DeploymentMode,
    DeveloperEntity,
    RegistrationSubmission,
)

NON_EMPTY = "must be non-empty"


@dataclass(frozen=True)
class ValidationProblem:
    field_path: str
    problem: str


ValidationReport = list[ValidationProblem]


def _require_text(report: ValidationReport, path: str, value: str) -> None:
    if not value or not value.strip():
        report.append(ValidationProblem(path, NON_EMPTY))


def _require_finite(report: ValidationReport, path: str, value: float) -> None:
    if not math.isfinite(value):
        report.append(ValidationProblem(path, "must be finite"))


def _require_non_negative(report: ValidationReport, path: str, value: float) -> None:
    _require_finite(report, path, value)
    if math.isfinite(value) and value < 0:
        report.append(ValidationProblem(path, "must be >= 0"))


def _check_email(report: ValidationReport, path: str, value: str) -> None:
    if not value:
        report.append(ValidationProblem(path, NON_EMPTY))
        return
    if value.count("@") != 1:
        report.append(ValidationProblem(path, "must contain exactly one '@'"))
        return
    local, domain = value.split("@")
    if not local or not domain:
        report.append(
            ValidationProblem(path, "must have non-empty local and domain parts")
        )


def _validate_developer(report: ValidationReport, dev: DeveloperEntity) -> None:
    _require_text(report, "developer.legal_name", dev.legal_name)
    _require_text(
        report,
        "developer.business_registration_number",
        dev.business_registration_number,
    )
    _check_email(report, "developer.contact_email", dev.contact_email)
    _require_text(report, "developer.emergency_contact", dev.emergency_contact)


def validate_submission(payload: RegistrationSubmission) -> ValidationReport:
    """Collect every invariant violation across all nested disclosure types.

    Returns an empty report iff every invariant holds. The report is sorted
    by field path (then problem text), so identical payloads yield identical
    reports.
    """
    report: ValidationReport = []

    _validate_developer(report, payload.developer)
    _require_text(report, "family_trade_name", payload.family_trade_name)
    _require_text(report, "version_name", payload.version_name)

    if payload.status in DEPLOYED_STATUSES and payload.deployment_date is None:
        report.append(
            ValidationProblem(
                "deployment_date", f"required when status is {payload.status.value}"
            )
        )

    m = payload.metrics
    _require_non_negative(report, "metrics.total_parameters", m.total_parameters)
    _require_non_negative(
        report, "metrics.active_parameters_avg", m.active_parameters_avg
    )
    _require_non_negative(report, "metrics.training_flop", m.training_flop)
    _require_non_negative(report, "metrics.post_training_flop", m.post_training_flop)
    _require_non_negative(report, "metrics.training_tokens", m.training_tokens)
    if m.active_parameters_avg > m.total_parameters:
        report.append(
            ValidationProblem(
                "metrics.active_parameters_avg", "must not exceed total_parameters"
            )
        )

    risk = payload.risk
    for domain in sorted(risk.domains, key=lambda d: d.value):
        if domain not in risk.basis:
            report.append(
                ValidationProblem("risk.basis", f"missing basis for {domain.value}")
            )
    for domain in sorted(risk.basis, key=lambda d: d.value):
        if domain not in risk.domains:
            report.append(
                ValidationProblem(
                    "risk.basis", f"basis for {domain.value} has no matching domain"
                )
            )

    _require_text(report, "access.license_summary", payload.access.license_summary)

    td = payload.training_data
    _require_non_negative(report, "training_data.token_count", td.token_count)
    for sub, parent in DATA_CATEGORY_PARENTS.items():
        if sub in td.categories and parent not in td.categories:
            report.append(
                ValidationProblem(
                    "training_data.categories",
                    f"{sub.value} requires {parent.value}",
                )
            )

    arch = payload.architecture
    _require_text(report, "architecture.architecture_type", arch.architecture_type)
    if arch.layer_count < 1:
        report.append(
            ValidationProblem("architecture.layer_count", "must be >= 1")
        )

    hw = payload.hardware
    _require_non_negative(
        report, "hardware.cluster_capacity_flops", hw.cluster_capacity_flops
    )
    if hw.deployment_mode in (DeploymentMode.CLOUD, DeploymentMode.HYBRID):
        if not hw.cloud_providers:
            report.append(
                ValidationProblem(
                    "hardware.cloud_providers",
                    f"required when deployment_mode is {hw.deployment_mode.value}",
                )
            )

    sec = payload.security
    _require_text(report, "security.weights_protection", sec.weights_protection)
    _require_text(
        report, "security.training_data_protection", sec.training_data_protection
    )
    _require_text(
        report, "security.source_code_protection", sec.source_code_protection
    )
    _require_text(report, "security.pii_protection", sec.pii_protection)
    _require_text(
        report, "security.declared_security_tier", sec.declared_security_tier
    )

    for i, entry in enumerate(payload.evaluations.entries):
        prefix = f"evaluations.entries[{i}]"
        _require_text(report, f"{prefix}.methodology", entry.methodology)
        for name in sorted(entry.metrics):
            if not math.isfinite(entry.metrics[name]):
                report.append(
                    ValidationProblem(f"{prefix}.metrics.{name}", "must be finite")
                )

    fn = payload.functions
    _require_text(
        report, "functions.plain_language_description", fn.plain_language_description
    )
    if len(fn.plain_language_description) > PLAIN_DESCRIPTION_MAX_CHARS:
        report.append(
            ValidationProblem(
                "functions.plain_language_description",
                f"must be at most {PLAIN_DESCRIPTION_MAX_CHARS} characters",
            )
        )

    mon = payload.monitoring
    if not mon.safety_kpis:
        report.append(ValidationProblem("monitoring.safety_kpis", NON_EMPTY))
    kpis = set(mon.safety_kpis)
    for i, kt in enumerate(mon.kpi_thresholds):
        if kt.kpi not in kpis:
            report.append(
                ValidationProblem(
                    f"monitoring.kpi_thresholds[{i}].kpi",
                    "must name a monitored safety KPI",
                )
            )

    report.sort(key=lambda p: (p.field_path, p.problem))
    return report
