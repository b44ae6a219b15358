"""Shared JSON policy file: thresholds, family policy, and fine policy.

The service pins exactly one policy at a time; decisions echo the threshold
config version for auditability. Sections missing from the file fall back to
defaults.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path

from modelregistry.enforcement import FinePolicy, Severity
from modelregistry.jsonio import SubmissionParseError, date_from_iso
from modelregistry.lifecycle import FamilyPolicy
from modelregistry.qualification import (
    ThresholdConfig,
    default_thresholds,
    threshold_config_from_dict,
)


@dataclass(frozen=True)
class RegistryPolicy:
    thresholds: ThresholdConfig
    family_policy: FamilyPolicy
    fine_policy: FinePolicy


def default_policy() -> RegistryPolicy:
    return RegistryPolicy(
        thresholds=default_thresholds(),
        family_policy=FamilyPolicy(),
        fine_policy=FinePolicy(),
    )


def family_policy_from_dict(data: dict) -> FamilyPolicy:
    defaults = FamilyPolicy()
    try:
        return FamilyPolicy(
            exceedance_fraction=float(
                data.get("exceedance_fraction", defaults.exceedance_fraction)
            ),
            eval_exceedance_fraction=float(
                data.get("eval_exceedance_fraction", defaults.eval_exceedance_fraction)
            ),
            eval_absolute_threshold=float(
                data.get("eval_absolute_threshold", defaults.eval_absolute_threshold)
            ),
            new_family_age_limit_days=int(
                data.get("new_family_age_limit_days", defaults.new_family_age_limit_days)
            ),
            attestation_period=str(
                data.get("attestation_period", defaults.attestation_period)
            ),
        )
    except (TypeError, ValueError) as exc:
        raise SubmissionParseError(f"family policy: {exc}") from exc


def fine_policy_from_dict(data: dict) -> FinePolicy:
    defaults = FinePolicy()
    raw_fractions = data.get("turnover_fraction_by_severity")
    if raw_fractions is None:
        fractions = dict(defaults.turnover_fraction_by_severity)
    else:
        try:
            fractions = {Severity(k): float(v) for k, v in raw_fractions.items()}
        except (TypeError, ValueError, AttributeError) as exc:
            raise SubmissionParseError(f"fine policy severities: {exc}") from exc
    try:
        return FinePolicy(
            turnover_fraction_by_severity=fractions,
            daily_fixed_fine=float(
                data.get("daily_fixed_fine", defaults.daily_fixed_fine)
            ),
            turnover_cap_fraction=float(
                data.get("turnover_cap_fraction", defaults.turnover_cap_fraction)
            ),
            repeat_multiplier=float(
                data.get("repeat_multiplier", defaults.repeat_multiplier)
            ),
            effective_date=date_from_iso(
                data.get("effective_date"), "fine_policy.effective_date"
            ),
        )
    except (TypeError, ValueError) as exc:
        raise SubmissionParseError(f"fine policy: {exc}") from exc


def policy_from_dict(data: dict) -> RegistryPolicy:
    if not isinstance(data, dict):
        raise SubmissionParseError("policy file: expected a JSON object")
    thresholds = (
        threshold_config_from_dict(data["thresholds"])
        if "thresholds" in data
        else default_thresholds()
    )
    family = family_policy_from_dict(data.get("family_policy", {}))
    fines = fine_policy_from_dict(data.get("fine_policy", {}))
    return RegistryPolicy(thresholds=thresholds, family_policy=family, fine_policy=fines)


def load_policy(path: str | Path) -> RegistryPolicy:
    return policy_from_dict(json.loads(Path(path).read_text(encoding="utf-8")))
