"""Reported-value tolerance checks against independent assessments.

Each checkable metric has an allowed relative error; the boundary is
inclusive, and the independently assessed value is the denominator.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum


class ToleranceMetric(str, Enum):
    TOTAL_PARAMETERS = "TotalParameters"
    TRAINING_TOKENS = "TrainingTokens"
    TRAINING_FLOP = "TrainingFlop"


ALLOWED_RELATIVE_ERROR = {
    ToleranceMetric.TOTAL_PARAMETERS: 0.10,
    ToleranceMetric.TRAINING_TOKENS: 0.05,
    ToleranceMetric.TRAINING_FLOP: 0.10,
}


class InvalidAssessment(ValueError):
    """Assessed value unusable as a denominator (non-positive or non-finite)."""


@dataclass(frozen=True)
class ToleranceVerdict:
    metric: ToleranceMetric
    reported: float
    assessed: float
    relative_error: float
    allowed: float
    passed: bool


def check_reported_tolerance(
    metric: ToleranceMetric, reported: float, assessed: float
) -> ToleranceVerdict:
    """Compare a declared value against an independent assessment.

    relative_error = |reported - assessed| / assessed; passes iff the error
    is at or below the metric's allowed fraction (inclusive boundary).
    """
    if not math.isfinite(assessed) or assessed <= 0:
        raise InvalidAssessment(f"assessed value must be finite and > 0, got {assessed}")
    if not math.isfinite(reported) or reported < 0:
        raise ValueError(f"reported value must be finite and >= 0, got {reported}")
    allowed = ALLOWED_RELATIVE_ERROR[metric]
    relative_error = abs(reported - assessed) / assessed
    return ToleranceVerdict(
        metric=metric,
        reported=reported,
        assessed=assessed,
        relative_error=relative_error,
        allowed=allowed,
        passed=relative_error <= allowed,
    )
