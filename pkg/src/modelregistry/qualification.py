"""Inclusion rules: decide whether a model must register.

Four threshold rules over capability metrics, all inclusive ("at least"):
total training compute, training tokens, average active parameters, and a
lowered compute bar for models with a high-risk profile. Thresholds live in
a versioned config because the criteria are expected to move over time.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from datetime import date
from enum import Enum
from pathlib import Path

from modelregistry.jsonio import SubmissionParseError, date_from_iso, date_to_iso
from modelregistry.types import CapabilityMetrics, HighRiskProfile


class QualificationRule(str, Enum):
    FLOP_RULE = "FlopRule"
    TOKEN_RULE = "TokenRule"
    ACTIVE_PARAM_RULE = "ActiveParamRule"
    HIGH_RISK_FLOP_RULE = "HighRiskFlopRule"


@dataclass(frozen=True)
class ThresholdConfig:
    flop_threshold: float
    token_threshold: float
    active_param_threshold: float
    high_risk_flop_threshold: float
    effective_date: date
    config_version: str

    def __post_init__(self) -> None:
        for name in (
            "flop_threshold",
            "token_threshold",
            "active_param_threshold",
            "high_risk_flop_threshold",
        ):
            if getattr(self, name) <= 0:
                raise ValueError(f"{name} must be > 0")
        if self.high_risk_flop_threshold > self.flop_threshold:
            raise ValueError("high_risk_flop_threshold must not exceed flop_threshold")
        if not self.config_version:
            raise ValueError("config_version must be non-empty")


def default_thresholds() -> ThresholdConfig:
    """The initial threshold set: bars placed just above the pre-2024 frontier."""
    return ThresholdConfig(
        flop_threshold=1e26,
        token_threshold=1e14,
        active_param_threshold=1e12,
        high_risk_flop_threshold=1e23,
        effective_date=date(2024, 1, 1),
        config_version="paper-2024",
    )


def threshold_config_to_dict(config: ThresholdConfig) -> dict:
    return {
        "flop_threshold": config.flop_threshold,
        "token_threshold": config.token_threshold,
        "active_param_threshold": config.active_param_threshold,
        "high_risk_flop_threshold": config.high_risk_flop_threshold,
        "effective_date": date_to_iso(config.effective_date),
        "config_version": config.config_version,
    }


def threshold_config_from_dict(data: dict) -> ThresholdConfig:
    if not isinstance(data, dict):
        raise SubmissionParseError("threshold config: expected a JSON object")
    try:
        return ThresholdConfig(
            flop_threshold=float(data["flop_threshold"]),
            token_threshold=float(data["token_threshold"]),
            active_param_threshold=float(data["active_param_threshold"]),
            high_risk_flop_threshold=float(data["high_risk_flop_threshold"]),
            effective_date=date_from_iso(data["effective_date"], "effective_date"),
            config_version=str(data["config_version"]),
        )
    except KeyError as exc:
        raise SubmissionParseError(f"threshold config: missing {exc.args[0]}") from exc
    except (TypeError, ValueError) as exc:
        raise SubmissionParseError(f"threshold config: {exc}") from exc


def load_threshold_config(path: str | Path) -> ThresholdConfig:
    return threshold_config_from_dict(json.loads(Path(path).read_text(encoding="utf-8")))


@dataclass(frozen=True)
class QualificationDecision:
    qualifies: bool
    triggered_rules: frozenset[QualificationRule]
    metrics_echo: CapabilityMetrics
    risk_echo: HighRiskProfile
    config_version: str


def decision_to_dict(decision: QualificationDecision) -> dict:
    from modelregistry.jsonio import metrics_to_dict, risk_to_dict

    return {
        "qualifies": decision.qualifies,
        "triggered_rules": sorted(r.value for r in decision.triggered_rules),
        "metrics": metrics_to_dict(decision.metrics_echo),
        "risk": risk_to_dict(decision.risk_echo),
        "config_version": decision.config_version,
    }


def evaluate_qualification(
    metrics: CapabilityMetrics, risk: HighRiskProfile, config: ThresholdConfig
) -> QualificationDecision:
    """Fire every inclusion rule the metrics meet; qualifies iff any fired.

    Total training compute is initial training plus post-training FLOP, so
    splitting a run into phases cannot dodge the bar. All comparisons are
    inclusive.
    """
    total_compute = metrics.total_compute
    triggered = set()
    if total_compute >= config.flop_threshold:
        triggered.add(QualificationRule.FLOP_RULE)
    if metrics.training_tokens >= config.token_threshold:
        triggered.add(QualificationRule.TOKEN_RULE)
    if metrics.active_parameters_avg >= config.active_param_threshold:
        triggered.add(QualificationRule.ACTIVE_PARAM_RULE)
    if risk.domains and total_compute >= config.high_risk_flop_threshold:
        triggered.add(QualificationRule.HIGH_RISK_FLOP_RULE)
    return QualificationDecision(
        qualifies=bool(triggered),
        triggered_rules=frozenset(triggered),
        metrics_echo=metrics,
        risk_echo=risk,
        config_version=config.config_version,
    )
