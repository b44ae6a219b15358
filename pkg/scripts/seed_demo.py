#!/usr/bin/env python3
"""Seed a demo registry data directory: credentials, business-registry
fixture, one registered family with two versions, and a printed stamp.

Usage: python scripts/seed_demo.py [data_dir]
"""

from __future__ import annotations

import json
import sys
from pathlib import Path

from modelregistry.auth import developer_principal
from modelregistry.busreg import FixtureBusinessRegistry
from modelregistry.events import EventLog
from modelregistry.jsonio import submission_to_dict
from modelregistry.service import RegistryService
from modelregistry.stamps import (
    generate_signing_key,
    signing_key_to_pem,
    verification_key_to_pem,
)
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

DEV_TOKEN = "demo-developer-token"
ADMIN_TOKEN = "demo-admin-token"
BRN = "BRN-DEMO-001"


def demo_submission(version: str) -> RegistrationSubmission:
    return RegistrationSubmission(
        developer=DeveloperEntity(
            legal_name="Aurora Cognition Ltd",
            trade_names=["Aurora"],
            business_registration_number=BRN,
            legal_structure=LegalStructure.CORPORATION,
            registered_address="12 Harbor St, Port City",
            principal_place_of_business="12 Harbor St, Port City",
            contact_phone="+1 555 042",
            contact_email="registry@aurora.example",
            emergency_contact="Duty officer +1 555 0943",
        ),
        family_trade_name="Aurora",
        version_name=version,
        status=ModelStatus.PRE_DEPLOYMENT,
        metrics=CapabilityMetrics(
            total_parameters=300_000_000_000,
            active_parameters_avg=60_000_000_000,
            training_flop=4e25,
            post_training_flop=2e24,
            training_tokens=18_000_000_000_000,
        ),
        risk=HighRiskProfile(),
        access=AccessDisclosure(
            license_summary="Commercial API license; no redistribution rights.",
            weights_public=False,
            training_data_public=False,
            source_code_public=False,
        ),
        training_data=TrainingDataDisclosure(
            token_count=18_000_000_000_000,
            categories={DataCategory.TEXT, DataCategory.IMAGES},
        ),
        architecture=ArchitectureDisclosure(
            architecture_type="transformer",
            innovations_summary="Sparse routing in upper decoder blocks.",
            layer_count=120,
            layer_types=["attention", "feed-forward", "router"],
            modalities_in={"text", "image"},
            modalities_out={"text"},
        ),
        hardware=HardwareDisclosure(
            cluster_capacity_flops=3e18,
            deployment_mode=DeploymentMode.CLOUD,
            cloud_providers=["Stratus"],
            chip_count=40_000,
            chip_models=["H100"],
        ),
        security=SecurityDisclosure(
            weights_protection="Hardware-isolated weight storage.",
            training_data_protection="Encrypted, access-audited data lake.",
            source_code_protection="Least-privilege repo access.",
            pii_protection="Ingest-time PII scrubbing.",
            framework_reference="Security-levels framework",
            declared_security_tier="SL3",
        ),
        evaluations=EvaluationDisclosure(
            entries=[
                EvaluationEntry(
                    eval_type=EvalType.CAPABILITY,
                    methodology="Agentic task battery, public benchmarks.",
                    metrics={"autonomous-replication": 0.35},
                )
            ]
        ),
        functions=FunctionDisclosure(
            plain_language_description=(
                "A multimodal assistant that reads text and images and writes "
                "text, used for drafting, analysis, and coding."
            ),
            primary_purposes=["assistant"],
        ),
        monitoring=MonitoringDisclosure(
            safety_kpis=["abuse-report-rate"],
            kpi_thresholds=[KpiThreshold("abuse-report-rate", ">0.5%/week pages on-call")],
            response_protocols="Staged rollback within 4 hours.",
            review_policy="Semiannual review.",
        ),
    )


def main() -> int:
    data_dir = Path(sys.argv[1] if len(sys.argv) > 1 else "registry-data")
    data_dir.mkdir(parents=True, exist_ok=True)

    signing_key = generate_signing_key()
    (data_dir / "signing-key.pem").write_bytes(signing_key_to_pem(signing_key))
    (data_dir / "verification-key.pem").write_bytes(
        verification_key_to_pem(signing_key.public_key())
    )
    (data_dir / "credentials.json").write_text(
        json.dumps(
            {
                DEV_TOKEN: {"role": "Developer", "entity_ref": BRN},
                ADMIN_TOKEN: {"role": "RegistryAdmin", "entity_ref": None},
            },
            indent=2,
        ),
        encoding="utf-8",
    )
    (data_dir / "business-registry.json").write_text(
        json.dumps({BRN: "Aurora Cognition Ltd"}, indent=2), encoding="utf-8"
    )

    service = RegistryService(
        signing_key=signing_key,
        event_log=EventLog(data_dir / "events.log"),
        business_registry=FixtureBusinessRegistry({BRN: "Aurora Cognition Ltd"}),
    )
    dev = developer_principal(BRN)
    first = service.submit_registration(dev, demo_submission("aurora-1"))
    service.change_status(dev, first.identifier, ModelStatus.ON_MARKET)
    second = service.submit_registration(dev, demo_submission("aurora-1.1"))

    (data_dir / "sample-submission.json").write_text(
        json.dumps(submission_to_dict(demo_submission("aurora-2")), indent=2),
        encoding="utf-8",
    )

    print(f"seeded {data_dir}/")
    print(f"  developer token : {DEV_TOKEN}")
    print(f"  admin token     : {ADMIN_TOKEN}")
    print(f"  registered      : {first.identifier} (OnMarket), {second.identifier}")
    print(f"  stamp           : {first.stamp_token[:42]}...")
    print(f"verify offline  : registrar verify-stamp <token> "
          f"--key {data_dir}/verification-key.pem")
    return 0


if __name__ == "__main__":
    sys.exit(main())
