"""Canonical JSON codec for submissions and related records.

The canonical form is UTF-8 JSON with snake_case field names, counts as JSON
integers, FLOP values as JSON numbers, and ISO-8601 dates. `canonical_json`
(sorted keys, no whitespace) is used wherever byte-stable output matters:
event log lines, state snapshots, signed payloads.
"""

from __future__ import annotations

import json
from datetime import date
from typing import Any

from modelregistry.types import (
    AccessDisclosure,
    ArchitectureDisclosure,
    CapabilityMetrics,
    DataCategory,
    DeploymentMode,
    DeveloperEntity,
    EvalType,
    EvaluationDisclosure,
    EvaluationEntry,
    FunctionDisclosure,
    HardwareDisclosure,
    HighRiskDomain,
    HighRiskProfile,
    KpiThreshold,
    LegalStructure,
    ModelStatus,
    MonitoringDisclosure,
    OpenSubcomponent,
    RegistrationSubmission,
    RiskBasis,
    SecurityDisclosure,
    TrainingDataDisclosure,
)


class SubmissionParseError(ValueError):
    """Structurally unparseable payload (missing field, wrong type, bad enum)."""


def canonical_json(value: Any) -> str:
    """Deterministic JSON: sorted keys, no whitespace, raw UTF-8."""
    return json.dumps(value, sort_keys=True, separators=(",", ":"), ensure_ascii=False)


def date_to_iso(value: date | None) -> str | None:
    return None if value is None else value.isoformat()


def date_from_iso(value: str | None, path: str = "date") -> date | None:
    if value is None:
        return None
    try:
        return date.fromisoformat(value)
    except (TypeError, ValueError) as exc:
        raise SubmissionParseError(f"{path}: not an ISO-8601 date: {value!r}") from exc


def _get(data: dict, key: str, path: str) -> Any:
    if not isinstance(data, dict):
        raise SubmissionParseError(f"{path}: expected an object")
    if key not in data:
        raise SubmissionParseError(f"{path}.{key}: missing")
    return data[key]


def _text(data: dict, key: str, path: str) -> str:
    value = _get(data, key, path)
    if not isinstance(value, str):
        raise SubmissionParseError(f"{path}.{key}: expected a string")
    return value

def _opt_text(data: dict, key: str, path: str) -> str | None:
    value = data.get(key) if isinstance(data, dict) else None
    if value is not None and not isinstance(value, str):
        raise SubmissionParseError(f"{path}.{key}: expected a string or null")
    return value


def _integer(data: dict, key: str, path: str) -> int:
    value = _get(data, key, path)
    if isinstance(value, bool) or not isinstance(value, int):
        raise SubmissionParseError(f"{path}.{key}: expected an integer")
    return value


def _number(data: dict, key: str, path: str) -> float:
    value = _get(data, key, path)
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise SubmissionParseError(f"{path}.{key}: expected a number")
    return float(value)


def _boolean(data: dict, key: str, path: str) -> bool:
    value = _get(data, key, path)
    if not isinstance(value, bool):
        raise SubmissionParseError(f"{path}.{key}: expected a boolean")
    return value


def _text_list(data: dict, key: str, path: str) -> list[str]:
    value = data.get(key, []) if isinstance(data, dict) else None
    if not isinstance(value, list) or any(not isinstance(v, str) for v in value):
        raise SubmissionParseError(f"{path}.{key}: expected a list of strings")
    return list(value)


def _enum(cls: type, raw: Any, path: str):
    try:
        return cls(raw)
    except ValueError as exc:
        valid = ", ".join(m.value for m in cls)  # type: ignore[attr-defined]
        raise SubmissionParseError(f"{path}: {raw!r} is not one of: {valid}") from exc


def developer_to_dict(dev: DeveloperEntity) -> dict:
    return {
        "legal_name": dev.legal_name,
        "trade_names": list(dev.trade_names),
        "business_registration_number": dev.business_registration_number,
        "legal_structure": dev.legal_structure.value,
        "legal_structure_detail": dev.legal_structure_detail,
        "registered_address": dev.registered_address,
        "principal_place_of_business": dev.principal_place_of_business,
        "contact_phone": dev.contact_phone,
        "contact_email": dev.contact_email,
        "emergency_contact": dev.emergency_contact,
        "optional_disclosures": dict(dev.optional_disclosures),
    }


def developer_from_dict(data: dict, path: str = "developer") -> DeveloperEntity:
    optional = data.get("optional_disclosures", {}) if isinstance(data, dict) else None
    if not isinstance(optional, dict) or any(
        not isinstance(k, str) or not isinstance(v, str) for k, v in optional.items()
    ):
        raise SubmissionParseError(f"{path}.optional_disclosures: expected a string map")
    return DeveloperEntity(
        legal_name=_text(data, "legal_name", path),
        trade_names=_text_list(data, "trade_names", path),
        business_registration_number=_text(data, "business_registration_number", path),
        legal_structure=_enum(
            LegalStructure, _text(data, "legal_structure", path), f"{path}.legal_structure"
        ),
        legal_structure_detail=data.get("legal_structure_detail", ""),
        registered_address=_text(data, "registered_address", path),
        principal_place_of_business=_text(data, "principal_place_of_business", path),
        contact_phone=_text(data, "contact_phone", path),
        contact_email=_text(data, "contact_email", path),
        emergency_contact=_text(data, "emergency_contact", path),
        optional_disclosures=dict(optional),
    )


def metrics_to_dict(m: CapabilityMetrics) -> dict:
    return {
        "total_parameters": m.total_parameters,
        "active_parameters_avg": m.active_parameters_avg,
        "training_flop": m.training_flop,
        "post_training_flop": m.post_training_flop,
        "training_tokens": m.training_tokens,
    }


def metrics_from_dict(data: dict, path: str = "metrics") -> CapabilityMetrics:
    return CapabilityMetrics(
        total_parameters=_integer(data, "total_parameters", path),
        active_parameters_avg=_integer(data, "active_parameters_avg", path),
        training_flop=_number(data, "training_flop", path),
        post_training_flop=_number(data, "post_training_flop", path),
        training_tokens=_integer(data, "training_tokens", path),
    )


def risk_to_dict(risk: HighRiskProfile) -> dict:
    return {
        "domains": sorted(d.value for d in risk.domains),
        "basis": {d.value: b.value for d, b in sorted(risk.basis.items())},
    }


def risk_from_dict(data: dict, path: str = "risk") -> HighRiskProfile:
    raw_domains = _get(data, "domains", path)
    if not isinstance(raw_domains, list):
        raise SubmissionParseError(f"{path}.domains: expected a list")
    domains = {
        _enum(HighRiskDomain, d, f"{path}.domains") for d in raw_domains
    }
    raw_basis = data.get("basis", {})
    if not isinstance(raw_basis, dict):
        raise SubmissionParseError(f"{path}.basis: expected an object")
    basis = {
        _enum(HighRiskDomain, d, f"{path}.basis"): _enum(RiskBasis, b, f"{path}.basis.{d}")
        for d, b in raw_basis.items()
    }
    return HighRiskProfile(domains=domains, basis=basis)


def access_to_dict(access: AccessDisclosure) -> dict:
    return {
        "license_summary": access.license_summary,
        "weights_public": access.weights_public,
        "training_data_public": access.training_data_public,
        "source_code_public": access.source_code_public,
        "open_subcomponents": [
            {
                "name": sub.name,
                "description": sub.description,
                "weights_public": sub.weights_public,
                "training_data_public": sub.training_data_public,
                "source_code_public": sub.source_code_public,
            }
            for sub in access.open_subcomponents
        ],
    }


def access_from_dict(data: dict, path: str = "access") -> AccessDisclosure:
    raw_subs = data.get("open_subcomponents", [])
    if not isinstance(raw_subs, list):
        raise SubmissionParseError(f"{path}.open_subcomponents: expected a list")
    subs = []
    for i, raw in enumerate(raw_subs):
        sub_path = f"{path}.open_subcomponents[{i}]"
        subs.append(
            OpenSubcomponent(
                name=_text(raw, "name", sub_path),
                description=_text(raw, "description", sub_path),
                weights_public=bool(raw.get("weights_public", False)),
                training_data_public=bool(raw.get("training_data_public", False)),
                source_code_public=bool(raw.get("source_code_public", False)),
            )
        )
    return AccessDisclosure(
        license_summary=_text(data, "license_summary", path),
        weights_public=_boolean(data, "weights_public", path),
        training_data_public=_boolean(data, "training_data_public", path),
        source_code_public=_boolean(data, "source_code_public", path),
        open_subcomponents=subs,
    )


def training_data_to_dict(td: TrainingDataDisclosure) -> dict:
    return {
        "token_count": td.token_count,
        "categories": sorted(c.value for c in td.categories),
        "category_notes": td.category_notes,
    }


def training_data_from_dict(data: dict, path: str = "training_data") -> TrainingDataDisclosure:
    raw = _get(data, "categories", path)
    if not isinstance(raw, list):
        raise SubmissionParseError(f"{path}.categories: expected a list")
    return TrainingDataDisclosure(
        token_count=_integer(data, "token_count", path),
        categories={_enum(DataCategory, c, f"{path}.categories") for c in raw},
        category_notes=data.get("category_notes", ""),
    )


def architecture_to_dict(arch: ArchitectureDisclosure) -> dict:
    return {
        "architecture_type": arch.architecture_type,
        "innovations_summary": arch.innovations_summary,
        "layer_count": arch.layer_count,
        "layer_types": list(arch.layer_types),
        "external_memory_or_retrieval": arch.external_memory_or_retrieval,
        "modalities_in": sorted(arch.modalities_in),
        "modalities_out": sorted(arch.modalities_out),
    }


def architecture_from_dict(data: dict, path: str = "architecture") -> ArchitectureDisclosure:
    return ArchitectureDisclosure(
        architecture_type=_text(data, "architecture_type", path),
        innovations_summary=data.get("innovations_summary", ""),
        layer_count=_integer(data, "layer_count", path),
        layer_types=_text_list(data, "layer_types", path),
        external_memory_or_retrieval=_boolean(data, "external_memory_or_retrieval", path),
        modalities_in=set(_text_list(data, "modalities_in", path)),
        modalities_out=set(_text_list(data, "modalities_out", path)),
    )


def hardware_to_dict(hw: HardwareDisclosure) -> dict:
    return {
        "cluster_capacity_flops": hw.cluster_capacity_flops,
        "deployment_mode": hw.deployment_mode.value,
        "cloud_providers": list(hw.cloud_providers),
        "chip_count": hw.chip_count,
        "chip_models": list(hw.chip_models),
        "significant_changes_note": hw.significant_changes_note,
    }


def hardware_from_dict(data: dict, path: str = "hardware") -> HardwareDisclosure:
    return HardwareDisclosure(
        cluster_capacity_flops=_number(data, "cluster_capacity_flops", path),
        deployment_mode=_enum(
            DeploymentMode, _text(data, "deployment_mode", path), f"{path}.deployment_mode"
        ),
        cloud_providers=_text_list(data, "cloud_providers", path),
        chip_count=_integer(data, "chip_count", path),
        chip_models=_text_list(data, "chip_models", path),
        significant_changes_note=data.get("significant_changes_note", ""),
    )


def security_to_dict(sec: SecurityDisclosure) -> dict:
    return {
        "weights_protection": sec.weights_protection,
        "training_data_protection": sec.training_data_protection,
        "source_code_protection": sec.source_code_protection,
        "pii_protection": sec.pii_protection,
        "framework_reference": sec.framework_reference,
        "declared_security_tier": sec.declared_security_tier,
    }


def security_from_dict(data: dict, path: str = "security") -> SecurityDisclosure:
    return SecurityDisclosure(
        weights_protection=_text(data, "weights_protection", path),
        training_data_protection=_text(data, "training_data_protection", path),
        source_code_protection=_text(data, "source_code_protection", path),
        pii_protection=_text(data, "pii_protection", path),
        framework_reference=data.get("framework_reference", ""),
        declared_security_tier=_text(data, "declared_security_tier", path),
    )


def evaluations_to_dict(evals: EvaluationDisclosure) -> dict:
    return {
        "entries": [
            {
                "eval_type": e.eval_type.value,
                "methodology": e.methodology,
                "metrics": dict(e.metrics),
                "instance_results_uri": e.instance_results_uri,
                "red_team_summary": e.red_team_summary,
                "identified_risks": e.identified_risks,
                "alignment_insights": e.alignment_insights,
            }
            for e in evals.entries
        ]
    }


def evaluations_from_dict(data: dict, path: str = "evaluations") -> EvaluationDisclosure:
    raw_entries = _get(data, "entries", path)
    if not isinstance(raw_entries, list):
        raise SubmissionParseError(f"{path}.entries: expected a list")
    entries = []
    for i, raw in enumerate(raw_entries):
        entry_path = f"{path}.entries[{i}]"
        raw_metrics = raw.get("metrics", {}) if isinstance(raw, dict) else None
        if not isinstance(raw_metrics, dict) or any(
            not isinstance(k, str) or isinstance(v, bool) or not isinstance(v, (int, float))
            for k, v in raw_metrics.items()
        ):
            raise SubmissionParseError(f"{entry_path}.metrics: expected a string->number map")
        entries.append(
            EvaluationEntry(
                eval_type=_enum(
                    EvalType, _text(raw, "eval_type", entry_path), f"{entry_path}.eval_type"
                ),
                methodology=_text(raw, "methodology", entry_path),
                metrics={k: float(v) for k, v in raw_metrics.items()},
                instance_results_uri=_opt_text(raw, "instance_results_uri", entry_path),
                red_team_summary=_opt_text(raw, "red_team_summary", entry_path),
                identified_risks=_opt_text(raw, "identified_risks", entry_path),
                alignment_insights=_opt_text(raw, "alignment_insights", entry_path),
            )
        )
    return EvaluationDisclosure(entries=entries)


def functions_to_dict(fn: FunctionDisclosure) -> dict:
    return {
        "plain_language_description": fn.plain_language_description,
        "primary_purposes": list(fn.primary_purposes),
        "alternative_uses": list(fn.alternative_uses),
        "documentation_links": list(fn.documentation_links),
    }


def functions_from_dict(data: dict, path: str = "functions") -> FunctionDisclosure:
    return FunctionDisclosure(
        plain_language_description=_text(data, "plain_language_description", path),
        primary_purposes=_text_list(data, "primary_purposes", path),
        alternative_uses=_text_list(data, "alternative_uses", path),
        documentation_links=_text_list(data, "documentation_links", path),
    )


def monitoring_to_dict(mon: MonitoringDisclosure) -> dict:
    return {
        "safety_kpis": list(mon.safety_kpis),
        "kpi_thresholds": [
            {"kpi": kt.kpi, "threshold_description": kt.threshold_description}
            for kt in mon.kpi_thresholds
        ],
        "response_protocols": mon.response_protocols,
        "review_policy": mon.review_policy,
    }


def monitoring_from_dict(data: dict, path: str = "monitoring") -> MonitoringDisclosure:
    raw_thresholds = data.get("kpi_thresholds", [])
    if not isinstance(raw_thresholds, list):
        raise SubmissionParseError(f"{path}.kpi_thresholds: expected a list")
    thresholds = []
    for i, raw in enumerate(raw_thresholds):
        kt_path = f"{path}.kpi_thresholds[{i}]"
        thresholds.append(
            KpiThreshold(
                kpi=_text(raw, "kpi", kt_path),
                threshold_description=_text(raw, "threshold_description", kt_path),
            )
        )
    return MonitoringDisclosure(
        safety_kpis=_text_list(data, "safety_kpis", path),
        kpi_thresholds=thresholds,
        response_protocols=data.get("response_protocols", ""),
        review_policy=data.get("review_policy", ""),
    )


def submission_to_dict(sub: RegistrationSubmission) -> dict:
    return {
        "developer": developer_to_dict(sub.developer),
        "family_trade_name": sub.family_trade_name,
        "version_name": sub.version_name,
        "status": sub.status.value,
        "deployment_date": date_to_iso(sub.deployment_date),
        "metrics": metrics_to_dict(sub.metrics),
        "risk": risk_to_dict(sub.risk),
        "access": access_to_dict(sub.access),
        "training_data": training_data_to_dict(sub.training_data),
        "architecture": architecture_to_dict(sub.architecture),
        "hardware": hardware_to_dict(sub.hardware),
        "security": security_to_dict(sub.security),
        "evaluations": evaluations_to_dict(sub.evaluations),
        "functions": functions_to_dict(sub.functions),
        "monitoring": monitoring_to_dict(sub.monitoring),
    }


def submission_from_dict(data: dict) -> RegistrationSubmission:
    if not isinstance(data, dict):
        raise SubmissionParseError("submission: expected a JSON object")
    return RegistrationSubmission(
        developer=developer_from_dict(_get(data, "developer", "submission")),
        family_trade_name=_text(data, "family_trade_name", "submission"),
        version_name=_text(data, "version_name", "submission"),
        status=_enum(ModelStatus, _text(data, "status", "submission"), "submission.status"),
        deployment_date=date_from_iso(data.get("deployment_date"), "submission.deployment_date"),
        metrics=metrics_from_dict(_get(data, "metrics", "submission")),
        risk=risk_from_dict(_get(data, "risk", "submission")),
        access=access_from_dict(_get(data, "access", "submission")),
        training_data=training_data_from_dict(_get(data, "training_data", "submission")),
        architecture=architecture_from_dict(_get(data, "architecture", "submission")),
        hardware=hardware_from_dict(_get(data, "hardware", "submission")),
        security=security_from_dict(_get(data, "security", "submission")),
        evaluations=evaluations_from_dict(_get(data, "evaluations", "submission")),
        functions=functions_from_dict(_get(data, "functions", "submission")),
        monitoring=monitoring_from_dict(_get(data, "monitoring", "submission")),
    )


def submission_to_json(sub: RegistrationSubmission) -> str:
    """Canonical interop serialization of a submission."""
    return canonical_json(submission_to_dict(sub))


def submission_from_json(text: str) -> RegistrationSubmission:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise SubmissionParseError(f"not valid JSON: {exc}") from exc
    return submission_from_dict(data)
