"""Developer-side registrar CLI.

validate / qualify / verify-stamp run fully offline; submit / attest talk to
a registry service. Exit codes are a stable contract:

    0  success / qualifies / stamp valid
    1  negative result (validation problems, invalid or expired stamp,
       rejected submission)
    2  input error (unreadable or unparseable file, unreadable key)
    3  does not qualify
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from datetime import datetime, timezone
from pathlib import Path

from modelregistry import stamps as stamps_mod
from modelregistry.jsonio import (
    SubmissionParseError,
    metrics_from_dict,
    risk_from_dict,
    submission_from_dict,
)
from modelregistry.qualification import (
    default_thresholds,
    evaluate_qualification,
    load_threshold_config,
)
from modelregistry.types import HighRiskProfile
from modelregistry.validation import validate_submission

EXIT_OK = 0
EXIT_NEGATIVE = 1
EXIT_INPUT_ERROR = 2
EXIT_DOES_NOT_QUALIFY = 3

SERVICE_URL_ENV = "MODEL_REGISTRY_URL"
CREDENTIAL_ENV = "MODEL_REGISTRY_CREDENTIAL"
KEY_PATH_ENV = "MODEL_REGISTRY_VERIFICATION_KEY"


def _fail(message: str, code: int) -> int:
    print(f"error: {message}", file=sys.stderr)
    return code


def _read_json_file(path: str):
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise SubmissionParseError(f"cannot read {path}: {exc.strerror}") from exc
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise SubmissionParseError(f"{path} is not valid JSON: {exc}") from exc


def _emit(data: dict, as_json: bool, lines: list[str]) -> None:
    if as_json:
        print(json.dumps(data, indent=2, sort_keys=True))
    else:
        for line in lines:
            print(line)


def cmd_validate(args: argparse.Namespace) -> int:
    try:
        submission = submission_from_dict(_read_json_file(args.file))
    except SubmissionParseError as exc:
        return _fail(str(exc), EXIT_INPUT_ERROR)
    report = validate_submission(submission)
    payload = {
        "valid": not report,
        "problems": [
            {"field_path": p.field_path, "problem": p.problem} for p in report
        ],
    }
    lines = (
        ["valid: all invariants hold"]
        if not report
        else [f"{p.field_path}: {p.problem}" for p in report]
    )
    _emit(payload, args.json, lines)
    return EXIT_OK if not report else EXIT_NEGATIVE


def _load_qualify_inputs(data) -> tuple:
    """Accept a full submission, a {metrics, risk} wrapper, or bare metrics."""
    if not isinstance(data, dict):
        raise SubmissionParseError("metrics file: expected a JSON object")
    if "metrics" in data and "developer" not in data:
        metrics = metrics_from_dict(data["metrics"])
        risk = (
            risk_from_dict(data["risk"]) if data.get("risk") else HighRiskProfile()
        )
        return metrics, risk
    if "developer" in data:
        submission = submission_from_dict(data)
        return submission.metrics, submission.risk
    return metrics_from_dict(data, path="metrics"), HighRiskProfile()


def cmd_qualify(args: argparse.Namespace) -> int:
    try:
        metrics, risk = _load_qualify_inputs(_read_json_file(args.file))
        config = (
            load_threshold_config(args.thresholds)
            if args.thresholds
            else default_thresholds()
        )
    except SubmissionParseError as exc:
        return _fail(str(exc), EXIT_INPUT_ERROR)
    except OSError as exc:
        return _fail(f"cannot read thresholds: {exc}", EXIT_INPUT_ERROR)
    decision = evaluate_qualification(metrics, risk, config)
    rules = sorted(r.value for r in decision.triggered_rules)
    payload = {
        "qualifies": decision.qualifies,
        "triggered_rules": rules,
        "config_version": decision.config_version,
    }
    verdict = "qualifies for mandatory registration" if decision.qualifies else (
        "does not qualify for mandatory registration"
    )
    lines = [f"{verdict} (config {decision.config_version})"]
    lines += [f"  rule fired: {rule}" for rule in rules]
    _emit(payload, args.json, lines)
    return EXIT_OK if decision.qualifies else EXIT_DOES_NOT_QUALIFY


def cmd_verify_stamp(args: argparse.Namespace) -> int:
    key_path = args.key or os.environ.get(KEY_PATH_ENV)
    if not key_path:
        return _fail("no verification key (use --key or set "
                     f"{KEY_PATH_ENV})", EXIT_INPUT_ERROR)
    try:
        key = stamps_mod.load_verification_key(Path(key_path).read_bytes())
    except (OSError, ValueError) as exc:
        return _fail(f"cannot load verification key: {exc}", EXIT_INPUT_ERROR)
    if args.at:
        try:
            moment = datetime.fromisoformat(args.at)
        except ValueError:
            return _fail(f"--at is not an ISO-8601 timestamp: {args.at!r}",
                         EXIT_INPUT_ERROR)
        if moment.tzinfo is None:
            moment = moment.replace(tzinfo=timezone.utc)
        now = int(moment.timestamp())
    else:
        now = int(datetime.now(tz=timezone.utc).timestamp())
    result = stamps_mod.verify_stamp(args.token, key, now)
    payload = {
        "status": result.status.value,
        "payload": result.payload,
        "reason": result.reason,
    }
    lines = [result.status.value]
    if result.reason:
        lines.append(f"  reason: {result.reason}")
    if result.payload:
        for field in ("id", "dev", "fam", "ver", "status", "iat", "exp"):
            lines.append(f"  {field}: {result.payload.get(field)}")
    _emit(payload, args.json, lines)
    return EXIT_OK if result.status == stamps_mod.StampStatus.VALID else EXIT_NEGATIVE


def _service_session(args: argparse.Namespace):
    url = args.service_url or os.environ.get(SERVICE_URL_ENV)
    if not url:
        raise SubmissionParseError(
            f"no service url (use --service-url or set {SERVICE_URL_ENV})"
        )
    credential = args.credential or os.environ.get(CREDENTIAL_ENV)
    headers = {"Authorization": f"Bearer {credential}"} if credential else {}
    return url.rstrip("/"), headers


def cmd_submit(args: argparse.Namespace) -> int:
    import requests

    try:
        payload = _read_json_file(args.file)
        url, headers = _service_session(args)
    except SubmissionParseError as exc:
        return _fail(str(exc), EXIT_INPUT_ERROR)
    try:
        response = requests.post(
            f"{url}/v1/submissions", json=payload, headers=headers, timeout=30
        )
    except requests.RequestException as exc:
        return _fail(f"service unreachable: {exc}", EXIT_INPUT_ERROR)
    body = response.json()
    if response.status_code == 200:
        _emit(
            body,
            args.json,
            [
                f"registered: {body['identifier']}",
                f"family: {body['family_id']}",
                f"qualifies: {body['qualification']['qualifies']}",
                f"stamp: {body['stamp']}",
            ],
        )
        return EXIT_OK
    _emit(body, args.json, [f"rejected: {body.get('code')}: {body.get('message')}"])
    return EXIT_NEGATIVE


def cmd_attest(args: argparse.Namespace) -> int:
    import requests

    try:
        url, headers = _service_session(args)
    except SubmissionParseError as exc:
        return _fail(str(exc), EXIT_INPUT_ERROR)

    if args.update:
        try:
            submission = _read_json_file(args.update)
        except SubmissionParseError as exc:
            return _fail(str(exc), EXIT_INPUT_ERROR)
        try:
            response = requests.post(
                f"{url}/v1/families/{args.family_id}/versions",
                json={"submission": submission},
                headers=headers,
                timeout=30,
            )
        except requests.RequestException as exc:
            return _fail(f"service unreachable: {exc}", EXIT_INPUT_ERROR)
        if response.status_code != 200:
            body = response.json()
            _emit(body, args.json, [f"update rejected: {body.get('message')}"])
            return EXIT_NEGATIVE
        outcome = "Updated"
    else:
        outcome = "ConfirmedAccurate"

    try:
        response = requests.post(
            f"{url}/v1/families/{args.family_id}/attestations",
            json={"outcome": outcome},
            headers=headers,
            timeout=30,
        )
    except requests.RequestException as exc:
        return _fail(f"service unreachable: {exc}", EXIT_INPUT_ERROR)
    body = response.json()
    if response.status_code == 200:
        _emit(
            body,
            args.json,
            [
                f"attested {body['family_id']} for {body['due_date']} ({outcome})",
                f"stamps reissued: {len(body['reissued_stamps'])}",
            ],
        )
        return EXIT_OK
    _emit(body, args.json, [f"rejected: {body.get('code')}: {body.get('message')}"])
    return EXIT_NEGATIVE


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="registrar", description="Model registry developer tool"
    )
    parser.add_argument("--json", action="store_true", help="machine-readable output")
    parser.add_argument("--service-url", default=None)
    parser.add_argument("--credential", default=None)
    sub = parser.add_subparsers(dest="command", required=True)

    p_validate = sub.add_parser("validate", help="validate a submission file locally")
    p_validate.add_argument("file")
    p_validate.set_defaults(func=cmd_validate)

    p_qualify = sub.add_parser(
        "qualify", help="check metrics against registration thresholds"
    )
    p_qualify.add_argument("file")
    p_qualify.add_argument("--thresholds", default=None)
    p_qualify.set_defaults(func=cmd_qualify)

    p_submit = sub.add_parser("submit", help="file a submission with the service")
    p_submit.add_argument("file")
    p_submit.set_defaults(func=cmd_submit)

    p_attest = sub.add_parser("attest", help="file a semiannual attestation")
    p_attest.add_argument("family_id")
    group = p_attest.add_mutually_exclusive_group()
    group.add_argument(
        "--confirm", action="store_true", help="confirm the entry is accurate"
    )
    group.add_argument("--update", default=None, metavar="FILE",
                       help="file an updated full submission, then attest")
    p_attest.set_defaults(func=cmd_attest)

    p_verify = sub.add_parser("verify-stamp", help="verify a stamp token offline")
    p_verify.add_argument("token")
    p_verify.add_argument("--key", default=None)
    p_verify.add_argument("--at", default=None, metavar="ISO8601",
                          help="verify as of this moment instead of now")
    p_verify.set_defaults(func=cmd_verify_stamp)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    return args.func(args)


def main_entry() -> None:
    sys.exit(main())


if __name__ == "__main__":
    main_entry()
