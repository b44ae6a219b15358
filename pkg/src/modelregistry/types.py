"""Domain types for every disclosure category a registration must carry.

These are plain data carriers: they accept whatever a submitter declares,
and `modelregistry.validation` reports invariant violations as data rather
than raising. Operator-facing config types (thresholds, policies) live in
their own modules and *do* validate eagerly.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from datetime import date
from enum import Enum


class LegalStructure(str, Enum):
    CORPORATION = "Corporation"
    LLC = "LLC"
    PARTNERSHIP = "Partnership"
    NONPROFIT = "Nonprofit"
    OTHER = "Other"


class ModelStatus(str, Enum):
    PRE_DEPLOYMENT = "PreDeployment"
    ON_MARKET = "OnMarket"
    RECALLED = "Recalled"
    WITHDRAWN = "Withdrawn"


# Statuses that imply the model has (or had) a deployment date.
DEPLOYED_STATUSES = frozenset(
    {ModelStatus.ON_MARKET, ModelStatus.RECALLED, ModelStatus.WITHDRAWN}
)

# Statuses under which a registration no longer backs a live stamp.
REVOKED_STATUSES = frozenset({ModelStatus.RECALLED, ModelStatus.WITHDRAWN})


class HighRiskDomain(str, Enum):
    NUCLEAR_RADIOLOGICAL = "NuclearRadiological"
    CHEMICAL_WEAPONS = "ChemicalWeapons"
    BIOLOGICAL_WEAPONS_OR_DESIGN_TOOLS = "BiologicalWeaponsOrDesignTools"
    CYBERSECURITY = "Cybersecurity"
    AUTONOMOUS_REPLICATION_ADAPTATION = "AutonomousReplicationAdaptation"


class RiskBasis(str, Enum):
    PRIMARY_TRAINING_DATA = "PrimaryTrainingData"
    DEMONSTRATED_CAPABILITY = "DemonstratedCapability"


class DataCategory(str, Enum):
    TEXT = "Text"
    IMAGES = "Images"
    IMAGES_LABELED_PEOPLE = "ImagesLabeledPeople"
    AUDIO = "Audio"
    AUDIO_ISOLATED_VOICES = "AudioIsolatedVoices"
    VIDEO = "Video"
    GENETIC_BIOLOGICAL_BIOINFORMATICS = "GeneticBiologicalBioinformatics"
    CHEMICAL_BIOLOGICAL_PROPERTIES = "ChemicalBiologicalProperties"


# Subcategory -> required parent category.
DATA_CATEGORY_PARENTS = {
    DataCategory.IMAGES_LABELED_PEOPLE: DataCategory.IMAGES,
    DataCategory.AUDIO_ISOLATED_VOICES: DataCategory.AUDIO,
}


class DeploymentMode(str, Enum):
    ON_PREMISES = "OnPremises"
    CLOUD = "Cloud"
    HYBRID = "Hybrid"


class EvalType(str, Enum):
    CAPABILITY = "Capability"
    SAFETY = "Safety"
    SECURITY = "Security"
    ALIGNMENT = "Alignment"


class OpennessClass(str, Enum):
    CLOSED_SOURCE = "ClosedSource"
    OPEN_WEIGHTS = "OpenWeights"
    OPEN_SOURCE = "OpenSource"


# Less-open to more-open; classification takes the max along this order.
OPENNESS_ORDER = (
    OpennessClass.CLOSED_SOURCE,
    OpennessClass.OPEN_WEIGHTS,
    OpennessClass.OPEN_SOURCE,
)


@dataclass
class DeveloperEntity:
    legal_name: str
    business_registration_number: str
    legal_structure: LegalStructure
    registered_address: str
    principal_place_of_business: str
    contact_phone: str
    contact_email: str
    emergency_contact: str
    trade_names: list[str] = field(default_factory=list)
    # Free text for the Other legal structure (e.g. "trust", "cooperative").
    legal_structure_detail: str = ""
    # Non-vital items (key individuals, revenue, insurance, ...) kept as an
    # unvalidated key-value map.
    optional_disclosures: dict[str, str] = field(default_factory=dict)


@dataclass
class CapabilityMetrics:
    total_parameters: int
    active_parameters_avg: int
    training_flop: float
    post_training_flop: float
    training_tokens: int

    @property
    def total_compute(self) -> float:
        """Initial training plus retraining/fine-tuning/post-training FLOP."""
        return self.training_flop + self.post_training_flop


@dataclass
class HighRiskProfile:
    domains: set[HighRiskDomain] = field(default_factory=set)
    basis: dict[HighRiskDomain, RiskBasis] = field(default_factory=dict)


@dataclass
class OpenSubcomponent:
    name: str
    description: str
    weights_public: bool = False
    training_data_public: bool = False
    source_code_public: bool = False


@dataclass
class AccessDisclosure:
    license_summary: str
    weights_public: bool
    training_data_public: bool
    source_code_public: bool
    open_subcomponents: list[OpenSubcomponent] = field(default_factory=list)


@dataclass
class TrainingDataDisclosure:
    token_count: int
    categories: set[DataCategory] = field(default_factory=set)
    category_notes: str = ""


@dataclass
class ArchitectureDisclosure:
    architecture_type: str
    innovations_summary: str
    layer_count: int
    layer_types: list[str] = field(default_factory=list)
    external_memory_or_retrieval: bool = False
    modalities_in: set[str] = field(default_factory=set)
    modalities_out: set[str] = field(default_factory=set)


@dataclass
class HardwareDisclosure:
    cluster_capacity_flops: float
    deployment_mode: DeploymentMode
    cloud_providers: list[str] = field(default_factory=list)
    chip_count: int = 0
    chip_models: list[str] = field(default_factory=list)
    significant_changes_note: str = ""


@dataclass
class SecurityDisclosure:
    weights_protection: str
    training_data_protection: str
    source_code_protection: str
    pii_protection: str
    framework_reference: str = ""
    declared_security_tier: str = ""


@dataclass
class EvaluationEntry:
    eval_type: EvalType
    methodology: str
    metrics: dict[str, float] = field(default_factory=dict)
    instance_results_uri: str | None = None
    red_team_summary: str | None = None
    identified_risks: str | None = None
    alignment_insights: str | None = None


@dataclass
class EvaluationDisclosure:
    entries: list[EvaluationEntry] = field(default_factory=list)


# "A few sentences of plain language", operationalized as a hard cap.
PLAIN_DESCRIPTION_MAX_CHARS = 2000


@dataclass
class FunctionDisclosure:
    plain_language_description: str
    primary_purposes: list[str] = field(default_factory=list)
    alternative_uses: list[str] = field(default_factory=list)
    documentation_links: list[str] = field(default_factory=list)


@dataclass
class KpiThreshold:
    kpi: str
    threshold_description: str


@dataclass
class MonitoringDisclosure:
    safety_kpis: list[str] = field(default_factory=list)
    kpi_thresholds: list[KpiThreshold] = field(default_factory=list)
    response_protocols: str = ""
    review_policy: str = ""


@dataclass
class RegistrationSubmission:
    developer: DeveloperEntity
    family_trade_name: str
    version_name: str
    status: ModelStatus
    metrics: CapabilityMetrics
    risk: HighRiskProfile
    access: AccessDisclosure
    training_data: TrainingDataDisclosure
    architecture: ArchitectureDisclosure
    hardware: HardwareDisclosure
    security: SecurityDisclosure
    evaluations: EvaluationDisclosure
    functions: FunctionDisclosure
    monitoring: MonitoringDisclosure
    deployment_date: date | None = None
