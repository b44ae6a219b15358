"""HTTP+JSON surface over the registry service.

All responses are UTF-8 JSON; errors use the {code, message, details}
envelope. Authentication is a bearer token mapped to a principal; requests
without a credential act as the public role.
"""

from __future__ import annotations

from typing import Mapping

from fastapi import Body, FastAPI, Header, Query, Request
from fastapi.responses import JSONResponse

from modelregistry import stamps as stamps_mod
from modelregistry.auth import PUBLIC, Principal, Role, Unauthorized
from modelregistry.enforcement import (
    MissingNonQualificationDeclaration,
    Severity,
    ViolationKind,
    ViolationSubject,
)
from modelregistry.jsonio import (
    SubmissionParseError,
    date_from_iso,
    date_to_iso,
    metrics_from_dict,
    submission_from_dict,
)
from modelregistry.lifecycle import (
    AttestationOutcome,
    DuplicateVersionName,
    FamilyConsistencyViolation,
)
from modelregistry.service import (
    FullSubmissionRequired,
    InvalidRequest,
    InvalidStatusTransition,
    NewFamilyRequired,
    NoAttestationDue,
    NotFound,
    PreDeploymentRequired,
    RegistryService,
    StaleFamilySequence,
    ValidationFailed,
    record_to_dict,
    _requirement_to_dict,
)
from modelregistry.types import ModelStatus


def _error(status_code: int, code: str, message: str, details=None) -> JSONResponse:
    return JSONResponse(
        status_code=status_code,
        content={"code": code, "message": message, "details": details},
    )


_EXCEPTION_MAP: list[tuple[type[Exception], int, str]] = [
    (Unauthorized, 403, "unauthorized"),
    (NotFound, 404, "not_found"),
    (PreDeploymentRequired, 409, "pre_deployment_required"),
    (DuplicateVersionName, 409, "duplicate_version_name"),
    (FamilyConsistencyViolation, 409, "family_consistency_violation"),
    (StaleFamilySequence, 409, "stale_family_sequence"),
    (InvalidStatusTransition, 409, "invalid_status_transition"),
    (NoAttestationDue, 409, "no_attestation_due"),
    (stamps_mod.RevokedRegistration, 410, "registration_revoked"),
    (MissingNonQualificationDeclaration, 422, "missing_non_qualification_declaration"),
    (SubmissionParseError, 422, "unparseable_payload"),
    (InvalidRequest, 422, "invalid_request"),
]


def create_app(service: RegistryService, credentials: Mapping[str, Principal]) -> FastAPI:
    app = FastAPI(title="Model Registry", version="1.0")

    def principal_from(authorization: str | None) -> Principal:
        if not authorization:
            return PUBLIC
        scheme, _, token = authorization.partition(" ")
        if scheme.lower() != "bearer" or token not in credentials:
            raise Unauthorized("unrecognized credential")
        return credentials[token]

    @app.exception_handler(ValidationFailed)
    async def _validation_failed(request: Request, exc: ValidationFailed):
        return _error(
            422,
            "validation_failed",
            "submission failed validation",
            [{"field_path": p.field_path, "problem": p.problem} for p in exc.report],
        )

    @app.exception_handler(NewFamilyRequired)
    async def _new_family(request: Request, exc: NewFamilyRequired):
        return _error(
            409,
            "new_family_required",
            str(exc),
            [{"dimension": r.dimension, "detail": r.detail} for r in exc.reasons],
        )

    @app.exception_handler(FullSubmissionRequired)
    async def _full_submission(request: Request, exc: FullSubmissionRequired):
        return _error(
            409,
            "full_submission_required",
            str(exc),
            [{"dimension": r.dimension, "detail": r.detail} for r in exc.reasons],
        )

    for exc_type, status_code, code in _EXCEPTION_MAP:

        def _make_handler(status_code=status_code, code=code):
            async def _handler(request: Request, exc: Exception):
                return _error(status_code, code, str(exc))

            return _handler

        app.exception_handler(exc_type)(_make_handler())

    @app.post("/v1/submissions")
    def submit(
        payload: dict = Body(...),
        authorization: str | None = Header(default=None),
        x_expected_family_sequence: int | None = Header(default=None),
    ):
        principal = principal_from(authorization)
        submission = submission_from_dict(payload)
        outcome = service.submit_registration(
            principal,
            submission,
            expected_family_sequence=x_expected_family_sequence,
        )
        return {
            "identifier": outcome.identifier,
            "family_id": outcome.family_id,
            "family_created": outcome.family_created,
            "requirement": _requirement_to_dict(outcome.requirement),
            "qualification": {
                "qualifies": outcome.qualification.qualifies,
                "triggered_rules": sorted(
                    r.value for r in outcome.qualification.triggered_rules
                ),
                "config_version": outcome.qualification.config_version,
            },
            "business_check": outcome.business_check.value,
            "stamp": outcome.stamp_token,
        }

    @app.post("/v1/families/{family_id}/versions")
    def add_version(
        family_id: str,
        payload: dict = Body(...),
        authorization: str | None = Header(default=None),
        x_expected_family_sequence: int | None = Header(default=None),
    ):
        principal = principal_from(authorization)
        submission = None
        if payload.get("submission") is not None:
            submission = submission_from_dict(payload["submission"])
        metrics = None
        if payload.get("metrics") is not None:
            metrics = metrics_from_dict(payload["metrics"])
        outcome = service.add_version(
            principal,
            family_id,
            version_name=payload.get("version_name"),
            metrics=metrics,
            eval_scores=payload.get("eval_scores"),
            planned_deployment=date_from_iso(
                payload.get("planned_deployment_date"), "planned_deployment_date"
            ),
            submission=submission,
            expected_family_sequence=x_expected_family_sequence,
        )
        return {
            "identifier": outcome.identifier,
            "family_id": outcome.family_id,
            "requirement": _requirement_to_dict(outcome.requirement),
            "stamp": outcome.stamp_token,
        }

    @app.post("/v1/families/{family_id}/attestations")
    def attest(
        family_id: str,
        payload: dict = Body(...),
        authorization: str | None = Header(default=None),
    ):
        principal = principal_from(authorization)
        try:
            outcome = AttestationOutcome(payload.get("outcome", ""))
        except ValueError:
            raise InvalidRequest(
                "outcome must be ConfirmedAccurate or Updated"
            ) from None
        result = service.record_attestation(
            principal,
            family_id,
            outcome,
            attested_by=payload.get("attested_by", ""),
        )
        return {
            "family_id": result.family_id,
            "due_date": date_to_iso(result.due_date),
            "completed_date": date_to_iso(result.completed_date),
            "outcome": result.outcome.value,
            "reissued_stamps": list(result.reissued_stamps),
        }

    @app.get("/v1/records/{identifier}")
    def read_record(
        identifier: str, authorization: str | None = Header(default=None)
    ):
        principal = principal_from(authorization)
        access, record = service.read_record(principal, identifier)
        if access == "full":
            return {"access": "full", "record": record_to_dict(record)}
        return {"access": "public", "record": record.to_dict()}

    @app.post("/v1/records/{identifier}/status")
    def change_status(
        identifier: str,
        payload: dict = Body(...),
        authorization: str | None = Header(default=None),
    ):
        principal = principal_from(authorization)
        try:
            new_status = ModelStatus(payload.get("status", ""))
        except ValueError:
            raise InvalidRequest("unknown status") from None
        record = service.change_status(
            principal,
            identifier,
            new_status,
            deployment_date=date_from_iso(
                payload.get("deployment_date"), "deployment_date"
            ),
        )
        return {
            "identifier": record.identifier,
            "status": record.status.value,
            "deployment_date": date_to_iso(record.deployment_date),
        }

    @app.get("/v1/public/search")
    def search(q: str = Query(default=""), page: int = Query(default=1, ge=1)):
        results, total = service.search_public(q, page=page)
        return {
            "query": q,
            "page": page,
            "total": total,
            "results": [r.to_dict() for r in results],
        }

    @app.get("/v1/public/verify/{identifier}")
    def verify(identifier: str):
        registered, record = service.verify_registration(identifier)
        body = {"registered": registered}
        if record is not None:
            body["record"] = record.to_dict()
        return body

    @app.get("/v1/public/badge/{identifier}")
    def badge(identifier: str):
        token = service.current_stamp(identifier)
        return {
            "identifier": stamps_mod.normalize_identifier(identifier),
            "token": token,
        }

    @app.get("/v1/public/key")
    def verification_key():
        return {"algorithm": "Ed25519", "pem": service.verification_key_pem()}

    @app.post("/v1/public/checks")
    def third_party_check(payload: dict = Body(...)):
        entry = service.log_third_party_check(
            user_ref=payload.get("user_ref", ""),
            claimed_model=payload.get("claimed_model", ""),
            identifier_presented=payload.get("identifier"),
            declaration=payload.get("declaration"),
        )
        return {
            "sequence": entry.sequence,
            "lookup_result": entry.lookup_result.value,
        }

    @app.get("/v1/admin/overdue")
    def overdue(
        as_of: str | None = Query(default=None),
        authorization: str | None = Header(default=None),
    ):
        principal = principal_from(authorization)
        if principal.role not in (Role.REGISTRY_ADMIN, Role.GOVERNMENT_READER):
            raise Unauthorized("admin or government reader required")
        overdue_list = service.overdue_attestations(
            date_from_iso(as_of, "as_of") if as_of else None
        )
        return {
            "overdue": [
                {
                    "family_id": o.family_id,
                    "due_date": date_to_iso(o.due_date),
                    "days_overdue": o.days_overdue,
                }
                for o in overdue_list
            ]
        }

    @app.post("/v1/admin/violations")
    def open_violation(
        payload: dict = Body(...), authorization: str | None = Header(default=None)
    ):
        principal = principal_from(authorization)
        try:
            subject = ViolationSubject(payload.get("subject", ""))
            kind = ViolationKind(payload.get("kind", ""))
            severity = (
                Severity(payload["severity"]) if payload.get("severity") else None
            )
        except ValueError as exc:
            raise InvalidRequest(str(exc)) from None
        violation = service.open_violation(
            principal,
            subject=subject,
            subject_ref=payload.get("subject_ref", ""),
            kind=kind,
            severity=severity,
            opened_date=date_from_iso(payload.get("opened_date"), "opened_date"),
        )
        return {
            "violation_id": violation.violation_id,
            "severity": violation.severity.value,
            "opened_date": date_to_iso(violation.opened_date),
        }

    @app.post("/v1/admin/fines")
    def assess_fine_endpoint(
        payload: dict = Body(...), authorization: str | None = Header(default=None)
    ):
        principal = principal_from(authorization)
        assessment = service.assess_violation_fine(
            principal,
            violation_id=payload.get("violation_id", ""),
            annual_turnover=float(payload.get("annual_turnover", 0)),
            days_unresolved=int(payload.get("days_unresolved", 0)),
        )
        return {
            "violation_ref": assessment.violation_ref,
            "basis": assessment.basis.value,
            "amount": assessment.amount,
            "computation_trace": assessment.computation_trace,
        }

    return app
