"""National frontier-AI model registry.

Qualification rules over capability metrics, model-family lifecycle and
semiannual attestations, compliance penalties, signed registration stamps,
and an event-sourced registry service with a public search/verification
surface.
"""

from modelregistry.openness import AmbiguousOpenness, classify_openness
from modelregistry.qualification import (
    QualificationRule,
    ThresholdConfig,
    default_thresholds,
    evaluate_qualification,
)
from modelregistry.tolerance import (
    InvalidAssessment,
    ToleranceMetric,
    check_reported_tolerance,
)
from modelregistry.validation import validate_submission

__all__ = [
    "AmbiguousOpenness",
    "InvalidAssessment",
    "QualificationRule",
    "ThresholdConfig",
    "ToleranceMetric",
    "check_reported_tolerance",
    "classify_openness",
    "default_thresholds",
    "evaluate_qualification",
    "validate_submission",
]

__version__ = "0.1.0"
