"""Qualification engine: default thresholds, rule firing, properties."""

from __future__ import annotations

import json

import pytest
from hypothesis import given, strategies as st

from modelregistry.qualification import (
    QualificationRule,
    ThresholdConfig,
    default_thresholds,
    evaluate_qualification,
    load_threshold_config,
    threshold_config_to_dict,
)
from modelregistry.types import HighRiskDomain, HighRiskProfile, RiskBasis

from .conftest import make_metrics


def bio_risk() -> HighRiskProfile:
    return HighRiskProfile(
        domains={HighRiskDomain.BIOLOGICAL_WEAPONS_OR_DESIGN_TOOLS},
        basis={
            HighRiskDomain.BIOLOGICAL_WEAPONS_OR_DESIGN_TOOLS: RiskBasis.PRIMARY_TRAINING_DATA
        },
    )


def reference_rules(metrics, risk, config):
    """Independent restatement of the four predicates, used as the oracle."""
    total = metrics.training_flop + metrics.post_training_flop
    fired = set()
    if total >= config.flop_threshold:
        fired.add(QualificationRule.FLOP_RULE)
    if metrics.training_tokens >= config.token_threshold:
        fired.add(QualificationRule.TOKEN_RULE)
    if metrics.active_parameters_avg >= config.active_param_threshold:
        fired.add(QualificationRule.ACTIVE_PARAM_RULE)
    if len(risk.domains) > 0 and total >= config.high_risk_flop_threshold:
        fired.add(QualificationRule.HIGH_RISK_FLOP_RULE)
    return fired


def test_default_threshold_values():
    config = default_thresholds()
    assert config.flop_threshold == 1e26
    assert config.token_threshold == 1e14
    assert config.active_param_threshold == 1e12
    assert config.high_risk_flop_threshold == 1e23
    assert config.config_version == "paper-2024"


def test_config_invariants():
    with pytest.raises(ValueError):
        ThresholdConfig(1e26, 1e14, 1e12, 1e27, default_thresholds().effective_date, "x")
    with pytest.raises(ValueError):
        ThresholdConfig(0, 1e14, 1e12, 0, default_thresholds().effective_date, "x")


def test_gemini_like_compute_does_not_qualify():
    # 1e25 FLOP, everything else below thresholds, no high-risk domains.
    metrics = make_metrics(
        training_flop=1e25, post_training_flop=0.0,
        training_tokens=10**13, active_parameters_avg=10**11,
    )
    decision = evaluate_qualification(metrics, HighRiskProfile(), default_thresholds())
    assert not decision.qualifies


def test_sparse_model_judged_on_active_parameters():
    # 1.6e12 total but only 2e11 active: ActiveParamRule judges active.
    metrics = make_metrics(
        total_parameters=int(1.6e12), active_parameters_avg=int(2e11),
        training_flop=1e24, post_training_flop=0.0, training_tokens=10**13,
    )
    decision = evaluate_qualification(metrics, HighRiskProfile(), default_thresholds())
    assert not decision.qualifies


def test_high_risk_lowers_compute_bar():
    metrics = make_metrics(
        training_flop=1e23, post_training_flop=0.0,
        training_tokens=10**12, active_parameters_avg=10**10,
    )
    decision = evaluate_qualification(metrics, bio_risk(), default_thresholds())
    assert decision.qualifies
    assert decision.triggered_rules == {QualificationRule.HIGH_RISK_FLOP_RULE}


def test_all_zero_does_not_qualify():
    metrics = make_metrics(
        total_parameters=0, active_parameters_avg=0,
        training_flop=0.0, post_training_flop=0.0, training_tokens=0,
    )
    decision = evaluate_qualification(metrics, HighRiskProfile(), default_thresholds())
    assert not decision.qualifies
    assert decision.triggered_rules == frozenset()


def test_exact_threshold_qualifies():
    metrics = make_metrics(training_flop=1e26, post_training_flop=0.0)
    decision = evaluate_qualification(metrics, HighRiskProfile(), default_thresholds())
    assert decision.qualifies
    assert reference_rules(metrics, HighRiskProfile(), default_thresholds()) == set(
        decision.triggered_rules
    )


def test_post_training_compute_counts_toward_total():
    metrics = make_metrics(training_flop=6e25, post_training_flop=4e25)
    decision = evaluate_qualification(metrics, HighRiskProfile(), default_thresholds())
    assert QualificationRule.FLOP_RULE in decision.triggered_rules


def test_high_risk_rule_needs_domains():
    metrics = make_metrics(training_flop=1e30, post_training_flop=0.0)
    decision = evaluate_qualification(metrics, HighRiskProfile(), default_thresholds())
    assert QualificationRule.HIGH_RISK_FLOP_RULE not in decision.triggered_rules


metric_strategy = st.builds(
    make_metrics,
    total_parameters=st.integers(0, 10**13),
    active_parameters_avg=st.integers(0, 10**13),
    training_flop=st.floats(0, 1e27, allow_nan=False),
    post_training_flop=st.floats(0, 1e26, allow_nan=False),
    training_tokens=st.integers(0, 10**15),
)
risk_strategy = st.sampled_from([HighRiskProfile(), bio_risk()])


@given(metrics=metric_strategy, risk=risk_strategy)
def test_engine_matches_reference_rules(metrics, risk):
    decision = evaluate_qualification(metrics, risk, default_thresholds())
    expected = reference_rules(metrics, risk, default_thresholds())
    assert set(decision.triggered_rules) == expected
    assert decision.qualifies == bool(expected)


@given(
    metrics=metric_strategy,
    risk=risk_strategy,
    bump=st.sampled_from(
        ["training_flop", "post_training_flop", "training_tokens", "active_parameters_avg"]
    ),
    factor=st.floats(1.0, 100.0, allow_nan=False),
)
def test_monotone_in_each_metric(metrics, risk, bump, factor):
    config = default_thresholds()
    before = evaluate_qualification(metrics, risk, config)
    raised_value = getattr(metrics, bump)
    raised_value = (
        int(raised_value * factor) if isinstance(raised_value, int) else raised_value * factor
    )
    kwargs = {
        "total_parameters": metrics.total_parameters,
        "active_parameters_avg": metrics.active_parameters_avg,
        "training_flop": metrics.training_flop,
        "post_training_flop": metrics.post_training_flop,
        "training_tokens": metrics.training_tokens,
    }
    kwargs[bump] = raised_value
    if kwargs["active_parameters_avg"] > kwargs["total_parameters"]:
        kwargs["total_parameters"] = kwargs["active_parameters_avg"]
    after = evaluate_qualification(make_metrics(**kwargs), risk, config)
    if before.qualifies:
        assert after.qualifies


@given(metrics=metric_strategy, risk=risk_strategy)
def test_rule_independence(metrics, risk):
    """Combined evaluation equals the union of single-driver evaluations."""
    config = default_thresholds()
    combined = evaluate_qualification(metrics, risk, config).triggered_rules

    compute_only = make_metrics(
        total_parameters=0, active_parameters_avg=0,
        training_flop=metrics.training_flop,
        post_training_flop=metrics.post_training_flop, training_tokens=0,
    )
    tokens_only = make_metrics(
        total_parameters=0, active_parameters_avg=0,
        training_flop=0.0, post_training_flop=0.0,
        training_tokens=metrics.training_tokens,
    )
    active_only = make_metrics(
        total_parameters=metrics.active_parameters_avg,
        active_parameters_avg=metrics.active_parameters_avg,
        training_flop=0.0, post_training_flop=0.0, training_tokens=0,
    )
    no_risk = HighRiskProfile()
    union = set()
    union |= evaluate_qualification(compute_only, no_risk, config).triggered_rules & {
        QualificationRule.FLOP_RULE
    }
    union |= evaluate_qualification(tokens_only, no_risk, config).triggered_rules
    union |= evaluate_qualification(active_only, no_risk, config).triggered_rules
    union |= evaluate_qualification(compute_only, risk, config).triggered_rules & {
        QualificationRule.HIGH_RISK_FLOP_RULE
    }
    assert set(combined) == union


def test_determinism():
    metrics = make_metrics(training_flop=1e26)
    first = evaluate_qualification(metrics, bio_risk(), default_thresholds())
    second = evaluate_qualification(metrics, bio_risk(), default_thresholds())
    assert first == second


def test_config_json_round_trip(tmp_path):
    config = default_thresholds()
    path = tmp_path / "thresholds.json"
    path.write_text(json.dumps(threshold_config_to_dict(config)), encoding="utf-8")
    assert load_threshold_config(path) == config
