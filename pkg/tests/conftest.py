"""Shared fixtures: a fully valid submission builder and service factories."""

from __future__ import annotations

import itertools

import pytest

from modelregistry import stamps
from modelregistry.auth import developer_principal
from modelregistry.service import RegistryService
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
    HighRiskProfile,
    KpiThreshold,
    LegalStructure,
    ModelStatus,
    MonitoringDisclosure,
    RegistrationSubmission,
    SecurityDisclosure,
    TrainingDataDisclosure,
)


def make_developer(**overrides) -> DeveloperEntity:
    fields = dict(
        legal_name="Acme AI Inc",
        trade_names=["Acme"],
        business_registration_number="BRN-0001",
        legal_structure=LegalStructure.CORPORATION,
        registered_address="1 Research Way, Capital City",
        principal_place_of_business="1 Research Way, Capital City",
        contact_phone="+1 555 0100",
        contact_email="compliance@acme.example",
        emergency_contact="Duty officer +1 555 0199",
        optional_disclosures={},
    )
    fields.update(overrides)
    return DeveloperEntity(**fields)


def make_metrics(**overrides) -> CapabilityMetrics:
    fields = dict(
        total_parameters=200_000_000_000,
        active_parameters_avg=50_000_000_000,
        training_flop=1e25,
        post_training_flop=5e23,
        training_tokens=12_000_000_000_000,
    )
    fields.update(overrides)
    return CapabilityMetrics(**fields)


def make_submission(**overrides) -> RegistrationSubmission:
    fields = dict(
        developer=make_developer(),
        family_trade_name="Frontier",
        version_name="frontier-1",
        status=ModelStatus.PRE_DEPLOYMENT,
        deployment_date=None,
        metrics=make_metrics(),
        risk=HighRiskProfile(),
        access=AccessDisclosure(
            license_summary="Proprietary; no copying, modification, or redistribution.",
            weights_public=False,
            training_data_public=False,
            source_code_public=False,
        ),
        training_data=TrainingDataDisclosure(
            token_count=12_000_000_000_000,
            categories={DataCategory.TEXT, DataCategory.IMAGES},
            category_notes="Web text and licensed image corpora.",
        ),
        architecture=ArchitectureDisclosure(
            architecture_type="transformer",
            innovations_summary="Dense decoder with grouped-query attention.",
            layer_count=96,
            layer_types=["attention", "feed-forward"],
            external_memory_or_retrieval=False,
            modalities_in={"text", "image"},
            modalities_out={"text"},
        ),
        hardware=HardwareDisclosure(
            cluster_capacity_flops=2e18,
            deployment_mode=DeploymentMode.CLOUD,
            cloud_providers=["BigCloud"],
            chip_count=25_000,
            chip_models=["H100"],
            significant_changes_note="",
        ),
        security=SecurityDisclosure(
            weights_protection="HSM-backed storage, two-party access control.",
            training_data_protection="Encrypted at rest, access-logged.",
            source_code_protection="Private monorepo, hardware keys.",
            pii_protection="PII filtered during ingest; DPIA on file.",
            framework_reference="Security-levels framework L3",
            declared_security_tier="SL3",
        ),
        evaluations=EvaluationDisclosure(
            entries=[
                EvaluationEntry(
                    eval_type=EvalType.CAPABILITY,
                    methodology="Public benchmark suite plus in-house agentic tasks.",
                    metrics={"autonomous-replication": 0.40, "cyber-offense": 0.35},
                ),
                EvaluationEntry(
                    eval_type=EvalType.SAFETY,
                    methodology="Structured red-team campaign, 3 external teams.",
                    metrics={"jailbreak-rate": 0.02},
                    red_team_summary="No critical bypasses; prompt-injection gaps noted.",
                ),
            ]
        ),
        functions=FunctionDisclosure(
            plain_language_description=(
                "A general-purpose assistant that reads text and images and "
                "writes text. It answers questions, drafts documents, and "
                "writes code."
            ),
            primary_purposes=["assistant", "coding"],
            alternative_uses=["translation"],
            documentation_links=["https://acme.example/docs/frontier"],
        ),
        monitoring=MonitoringDisclosure(
            safety_kpis=["abuse-report-rate", "jailbreak-detections"],
            kpi_thresholds=[
                KpiThreshold("abuse-report-rate", "weekly rate above 0.5% pages on-call"),
            ],
            response_protocols="Staged rollback; incident bridge within 1 hour.",
            review_policy="Monitoring practices reviewed quarterly.",
        ),
    )
    fields.update(overrides)
    return RegistrationSubmission(**fields)


def make_service(start_epoch: int = 1_750_000_000, **kwargs) -> RegistryService:
    """Service with a deterministic, strictly advancing clock."""
    counter = itertools.count(start_epoch)
    kwargs.setdefault("clock", lambda: next(counter))
    kwargs.setdefault("signing_key", stamps.generate_signing_key())
    return RegistryService(**kwargs)


@pytest.fixture
def submission() -> RegistrationSubmission:
    return make_submission()


@pytest.fixture
def service() -> RegistryService:
    return make_service()


@pytest.fixture
def dev_principal():
    return developer_principal("BRN-0001")
