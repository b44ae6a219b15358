"""Registrar CLI: exit-code contract, JSON output, offline verification."""

from __future__ import annotations

import json
from datetime import datetime, timezone

import pytest

from modelregistry import cli, stamps
from modelregistry.jsonio import metrics_to_dict, submission_to_dict
from modelregistry.qualification import threshold_config_to_dict, default_thresholds

from .conftest import make_metrics, make_submission
from .test_stamps import subject


def run_cli(capsys, *argv) -> tuple[int, str]:
    code = cli.main(list(argv))
    return code, capsys.readouterr().out


def write_json(tmp_path, name, data) -> str:
    path = tmp_path / name
    path.write_text(json.dumps(data), encoding="utf-8")
    return str(path)


# -- validate ---------------------------------------------------------------


def test_validate_ok(tmp_path, capsys):
    path = write_json(tmp_path, "sub.json", submission_to_dict(make_submission()))
    code, out = run_cli(capsys, "validate", path)
    assert code == cli.EXIT_OK
    assert "valid" in out


def test_validate_reports_problems(tmp_path, capsys):
    payload = submission_to_dict(make_submission())
    payload["developer"]["legal_name"] = ""
    path = write_json(tmp_path, "sub.json", payload)
    code, out = run_cli(capsys, "--json", "validate", path)
    assert code == cli.EXIT_NEGATIVE
    parsed = json.loads(out)
    assert parsed["valid"] is False
    assert parsed["problems"][0]["field_path"] == "developer.legal_name"


def test_validate_unparseable_file(tmp_path, capsys):
    path = tmp_path / "junk.json"
    path.write_text("{not json", encoding="utf-8")
    code, _ = run_cli(capsys, "validate", str(path))
    assert code == cli.EXIT_INPUT_ERROR


def test_validate_missing_file(capsys):
    code, _ = run_cli(capsys, "validate", "/nonexistent/sub.json")
    assert code == cli.EXIT_INPUT_ERROR


# -- qualify -----------------------------------------------------------------


def test_qualify_flop_rule(tmp_path, capsys):
    path = write_json(
        tmp_path,
        "metrics.json",
        {"metrics": metrics_to_dict(make_metrics(training_flop=1e26))},
    )
    code, out = run_cli(capsys, "--json", "qualify", path)
    assert code == cli.EXIT_OK
    parsed = json.loads(out)
    assert parsed["qualifies"] is True
    assert "FlopRule" in parsed["triggered_rules"]
    assert parsed["config_version"] == "paper-2024"


def test_qualify_below_thresholds(tmp_path, capsys):
    path = write_json(
        tmp_path, "metrics.json", {"metrics": metrics_to_dict(make_metrics())}
    )
    code, out = run_cli(capsys, "qualify", path)
    assert code == cli.EXIT_DOES_NOT_QUALIFY
    assert "does not qualify" in out


def test_qualify_accepts_full_submission_file(tmp_path, capsys):
    sub = make_submission(metrics=make_metrics(training_tokens=10**14))
    path = write_json(tmp_path, "sub.json", submission_to_dict(sub))
    code, out = run_cli(capsys, "--json", "qualify", path)
    assert code == cli.EXIT_OK
    assert "TokenRule" in json.loads(out)["triggered_rules"]


def test_qualify_accepts_bare_metrics(tmp_path, capsys):
    path = write_json(
        tmp_path, "metrics.json", metrics_to_dict(make_metrics(training_flop=2e26))
    )
    code, _ = run_cli(capsys, "qualify", path)
    assert code == cli.EXIT_OK


def test_qualify_with_custom_thresholds(tmp_path, capsys):
    config = threshold_config_to_dict(default_thresholds())
    config["flop_threshold"] = 1e24
    config["high_risk_flop_threshold"] = 1e22
    config["config_version"] = "custom-1"
    thresholds = write_json(tmp_path, "thresholds.json", config)
    metrics = write_json(
        tmp_path, "metrics.json",
        {"metrics": metrics_to_dict(make_metrics(training_flop=5e24))},
    )
    code, out = run_cli(capsys, "--json", "qualify", metrics, "--thresholds", thresholds)
    assert code == cli.EXIT_OK
    assert json.loads(out)["config_version"] == "custom-1"


def test_qualify_parse_failure(tmp_path, capsys):
    path = write_json(tmp_path, "metrics.json", {"metrics": {"total_parameters": "x"}})
    code, _ = run_cli(capsys, "qualify", path)
    assert code == cli.EXIT_INPUT_ERROR


# -- verify-stamp -------------------------------------------------------------


@pytest.fixture
def keypair(tmp_path):
    key = stamps.generate_signing_key()
    key_path = tmp_path / "registry.pub"
    key_path.write_bytes(stamps.verification_key_to_pem(key.public_key()))
    return key, str(key_path)


def iso(epoch: int) -> str:
    return datetime.fromtimestamp(epoch, tz=timezone.utc).isoformat()


def test_verify_stamp_valid(keypair, capsys):
    key, key_path = keypair
    token = stamps.issue_stamp(subject(), key, 365, issued_at=1_750_000_000)
    code, out = run_cli(
        capsys, "--json", "verify-stamp", token, "--key", key_path,
        "--at", iso(1_750_000_100),
    )
    assert code == cli.EXIT_OK
    parsed = json.loads(out)
    assert parsed["status"] == "Valid"
    assert parsed["payload"]["fam"] == "Frontier"


def test_verify_stamp_tampered(keypair, capsys):
    key, key_path = keypair
    token = stamps.issue_stamp(subject(), key, 365, issued_at=1_750_000_000)
    tampered = token[:-2] + ("AA" if token[-2:] != "AA" else "BB")
    code, out = run_cli(
        capsys, "verify-stamp", tampered, "--key", key_path, "--at", iso(1_750_000_100)
    )
    assert code == cli.EXIT_NEGATIVE
    assert "Invalid" in out


def test_verify_stamp_expired(keypair, capsys):
    key, key_path = keypair
    token = stamps.issue_stamp(subject(), key, 1, issued_at=1_750_000_000)
    code, out = run_cli(
        capsys, "verify-stamp", token, "--key", key_path,
        "--at", iso(1_750_000_000 + 3 * 86_400),
    )
    assert code == cli.EXIT_NEGATIVE
    assert "Expired" in out


def test_verify_stamp_unreadable_key(capsys):
    code, _ = run_cli(
        capsys, "verify-stamp", "mrs1.x.y", "--key", "/nonexistent/key.pem"
    )
    assert code == cli.EXIT_INPUT_ERROR


def test_verify_stamp_bad_at(keypair, capsys):
    _, key_path = keypair
    code, _ = run_cli(
        capsys, "verify-stamp", "mrs1.x.y", "--key", key_path, "--at", "not-a-time"
    )
    assert code == cli.EXIT_INPUT_ERROR


# -- network commands --------------------------------------------------------


def test_submit_requires_service_url(tmp_path, capsys, monkeypatch):
    monkeypatch.delenv(cli.SERVICE_URL_ENV, raising=False)
    path = write_json(tmp_path, "sub.json", submission_to_dict(make_submission()))
    code, _ = run_cli(capsys, "submit", path)
    assert code == cli.EXIT_INPUT_ERROR


def test_json_outputs_are_parseable(tmp_path, capsys):
    path = write_json(
        tmp_path, "metrics.json", {"metrics": metrics_to_dict(make_metrics())}
    )
    _, out = run_cli(capsys, "--json", "qualify", path)
    assert isinstance(json.loads(out), dict)
