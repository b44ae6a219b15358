"""Openness classification from access disclosures.

Three rules cover most disclosure patterns: nothing shared is closed-source,
weights without source code is open-weights, weights plus source code is
open-source. Patterns outside those rules (no weights, but source code or
training data shared) are refused rather than guessed.
"""

from __future__ import annotations

from modelregistry.types import OPENNESS_ORDER, AccessDisclosure, OpennessClass


class AmbiguousOpenness(ValueError):
    """Disclosure pattern not covered by a classification rule; resolve manually."""


def classify_flags(
    weights_public: bool, source_code_public: bool, training_data_public: bool
) -> OpennessClass:
    """Classify a single component's three access flags."""
    if weights_public and source_code_public:
        return OpennessClass.OPEN_SOURCE
    if weights_public:
        return OpennessClass.OPEN_WEIGHTS
    if not source_code_public and not training_data_public:
        return OpennessClass.CLOSED_SOURCE
    raise AmbiguousOpenness(
        "no weights access but source code or training data shared; "
        "classification rules do not cover this pattern"
    )


def classify_openness(access: AccessDisclosure) -> OpennessClass:
    """Classify a model's openness, taking the most-open component into account.

    When open subcomponents are listed, the result is the most open class
    among the model itself and each subcomponent. Raises AmbiguousOpenness
    if any component's flags fall outside the classification rules.
    """
    classes = [
        classify_flags(
            access.weights_public,
            access.source_code_public,
            access.training_data_public,
        )
    ]
    for sub in access.open_subcomponents:
        classes.append(
            classify_flags(
                sub.weights_public, sub.source_code_public, sub.training_data_public
            )
        )
    return max(classes, key=OPENNESS_ORDER.index)
