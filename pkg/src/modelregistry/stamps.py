"""Registry identifiers and signed registration stamps.

Identifiers are human-transcribable: "MR-<year>-<10 base-32 chars>-<check>"
over an alphabet with the ambiguous 0/O/1/I removed, guarded by a mod-31
positional checksum.

Stamps are offline-verifiable tokens, "mrs1." + base64url(payload) + "." +
base64url(signature), signed with Ed25519 (deterministic, 128-bit security).
The format version prefix pins the scheme; a different scheme would be a new
prefix. Verification needs only the published public key.
"""

from __future__ import annotations

import base64
import json
import re
import secrets
import time
from dataclasses import dataclass
from enum import Enum
from typing import Callable

from cryptography.exceptions import InvalidSignature
from cryptography.hazmat.primitives import serialization
from cryptography.hazmat.primitives.asymmetric import ed25519

from modelregistry.jsonio import canonical_json

# 2-9 plus A-Z without O and I: 32 unambiguous symbols.
IDENTIFIER_ALPHABET = "23456789ABCDEFGHJKLMNPQRSTUVWXYZ"
_CHAR_VALUE = {c: i for i, c in enumerate(IDENTIFIER_ALPHABET)}
PAYLOAD_LENGTH = 10
CHECKSUM_MODULUS = 31

_IDENTIFIER_RE = re.compile(
    rf"^MR-(\d{{4}})-([{IDENTIFIER_ALPHABET}]{{{PAYLOAD_LENGTH}}})-([{IDENTIFIER_ALPHABET}])$"
)


class MalformedIdentifier(ValueError):
    pass


class ExhaustedRetries(Exception):
    """Too many consecutive allocation collisions; randomness source suspect."""


def normalize_identifier(text: str) -> str:
    """Identifiers compare case-insensitively; canonical form is upper-case."""
    return text.strip().upper()


def check_character(payload: str) -> str:
    """Mod-31 positional checksum over the payload characters.

    31 is prime and the weights 1..10 are all nonzero mod 31, so any single
    altered character shifts the sum unless its value collides mod 31 with
    the original (one pair in a 32-symbol alphabet; detection >= 30/31).
    """
    if len(payload) != PAYLOAD_LENGTH:
        raise MalformedIdentifier(f"payload must be {PAYLOAD_LENGTH} characters")
    total = 0
    for position, char in enumerate(payload, start=1):
        if char not in _CHAR_VALUE:
            raise MalformedIdentifier(f"character {char!r} not in identifier alphabet")
        total += position * _CHAR_VALUE[char]
    return IDENTIFIER_ALPHABET[total % CHECKSUM_MODULUS]


def parse_identifier(text: str) -> tuple[int, str, str]:
    """Split a normalized identifier into (year, payload, check character)."""
    match = _IDENTIFIER_RE.match(normalize_identifier(text))
    if not match:
        raise MalformedIdentifier(f"not a registry identifier: {text!r}")
    return int(match.group(1)), match.group(2), match.group(3)


def validate_identifier(text: str) -> bool:
    """True iff the identifier is well-formed and its check character matches."""
    try:
        _, payload, check = parse_identifier(text)
    except MalformedIdentifier:
        return False
    return check_character(payload) == check


MAX_ALLOCATION_RETRIES = 16


def allocate_identifier(
    year: int,
    is_taken: Callable[[str], bool],
    choose: Callable[[str], str] | None = None,
) -> str:
    """Draw a fresh identifier not present per the uniqueness oracle.

    Collision probability per draw is ~32^-10, so repeated collisions signal
    a broken randomness source rather than bad luck.
    """
    if year < 2024:
        raise ValueError("year must be >= 2024")
    pick = choose or secrets.choice
    for _ in range(MAX_ALLOCATION_RETRIES):
        payload = "".join(pick(IDENTIFIER_ALPHABET) for _ in range(PAYLOAD_LENGTH))
        identifier = f"MR-{year}-{payload}-{check_character(payload)}"
        if not is_taken(identifier):
            return identifier
    raise ExhaustedRetries(
        f"{MAX_ALLOCATION_RETRIES} consecutive identifier collisions"
    )


STAMP_PREFIX = "mrs1"
DEFAULT_VALIDITY_DAYS = 400
_SECONDS_PER_DAY = 86_400
_B64URL_RE = re.compile(r"^[A-Za-z0-9_-]+$")
_REQUIRED_PAYLOAD_KEYS = ("id", "dev", "fam", "ver", "status", "iat", "exp")


class RevokedRegistration(Exception):
    """Stamps are only issued for live registrations."""


class SigningFailure(Exception):
    pass


class StampStatus(str, Enum):
    VALID = "Valid"
    INVALID = "Invalid"
    EXPIRED = "Expired"


@dataclass(frozen=True)
class StampSubject:
    identifier: str
    developer_legal_name: str
    family_trade_name: str
    version_name: str
    status: str
    revoked: bool = False


@dataclass(frozen=True)
class StampVerification:
    status: StampStatus
    payload: dict | None = None
    reason: str | None = None


def generate_signing_key() -> ed25519.Ed25519PrivateKey:
    return ed25519.Ed25519PrivateKey.generate()


def signing_key_to_pem(key: ed25519.Ed25519PrivateKey) -> bytes:
    return key.private_bytes(
        serialization.Encoding.PEM,
        serialization.PrivateFormat.PKCS8,
        serialization.NoEncryption(),
    )


def verification_key_to_pem(key: ed25519.Ed25519PublicKey) -> bytes:
    return key.public_bytes(
        serialization.Encoding.PEM, serialization.PublicFormat.SubjectPublicKeyInfo
    )


def load_signing_key(pem: bytes) -> ed25519.Ed25519PrivateKey:
    key = serialization.load_pem_private_key(pem, password=None)
    if not isinstance(key, ed25519.Ed25519PrivateKey):
        raise ValueError("signing key must be Ed25519")
    return key


def load_verification_key(pem: bytes) -> ed25519.Ed25519PublicKey:
    key = serialization.load_pem_public_key(pem)
    if not isinstance(key, ed25519.Ed25519PublicKey):
        raise ValueError("verification key must be Ed25519")
    return key


def _b64url_encode(data: bytes) -> str:
    return base64.urlsafe_b64encode(data).rstrip(b"=").decode("ascii")


def _b64url_decode_strict(text: str) -> bytes:
    """Decode unpadded base64url, rejecting non-canonical encodings.

    Re-encoding must reproduce the input exactly; otherwise two distinct
    token strings could decode to the same bytes and a textual mutation
    could slip past signature verification.
    """
    if not text or not _B64URL_RE.fullmatch(text):
        raise ValueError("not base64url")
    pad = -len(text) % 4
    if pad == 3:
        raise ValueError("invalid base64url length")
    raw = base64.urlsafe_b64decode(text + "=" * pad)
    if _b64url_encode(raw) != text:
        raise ValueError("non-canonical base64url")
    return raw


def stamp_payload(subject: StampSubject, issued_at: int, expires_at: int) -> dict:
    return {
        "id": normalize_identifier(subject.identifier),
        "dev": subject.developer_legal_name,
        "fam": subject.family_trade_name,
        "ver": subject.version_name,
        "status": subject.status,
        "iat": issued_at,
        "exp": expires_at,
    }


def canonical_payload_bytes(payload: dict) -> bytes:
    """Sorted keys, no whitespace, UTF-8: the exact bytes that get signed."""
    return canonical_json(payload).encode("utf-8")


def issue_stamp(
    subject: StampSubject,
    signing_key: ed25519.Ed25519PrivateKey,
    validity_days: int = DEFAULT_VALIDITY_DAYS,
    issued_at: int | None = None,
) -> str:
    """Build and sign a stamp token for a live registration."""
    if subject.revoked:
        raise RevokedRegistration(
            f"registration {subject.identifier} is revoked; no stamp issued"
        )
    if validity_days <= 0:
        raise ValueError("validity_days must be > 0")
    iat = int(time.time()) if issued_at is None else issued_at
    exp = iat + validity_days * _SECONDS_PER_DAY
    body = canonical_payload_bytes(stamp_payload(subject, iat, exp))
    try:
        signature = signing_key.sign(body)
    except Exception as exc:
        raise SigningFailure(str(exc)) from exc
    return f"{STAMP_PREFIX}.{_b64url_encode(body)}.{_b64url_encode(signature)}"


def _invalid(reason: str) -> StampVerification:
    return StampVerification(StampStatus.INVALID, reason=reason)


def verify_stamp(
    token: str, verification_key: ed25519.Ed25519PublicKey, now: int
) -> StampVerification:
    """Verify a stamp token offline; never raises on arbitrary input.

    Any structural defect, bad encoding, or signature mismatch yields
    Invalid; a good signature past its expiry yields Expired with the
    decoded payload.
    """
    if not isinstance(token, str):
        return _invalid("token must be a string")
    parts = token.strip().split(".")
    if len(parts) != 3:
        return _invalid("expected three dot-separated segments")
    prefix, payload_b64, signature_b64 = parts
    if prefix != STAMP_PREFIX:
        return _invalid(f"unknown format version {prefix!r}")
    try:
        payload_bytes = _b64url_decode_strict(payload_b64)
    except ValueError:
        return _invalid("payload segment is not canonical base64url")
    try:
        signature = _b64url_decode_strict(signature_b64)
    except ValueError:
        return _invalid("signature segment is not canonical base64url")
    if len(signature) != 64:
        return _invalid("signature must be 64 bytes")
    try:
        verification_key.verify(signature, payload_bytes)
    except InvalidSignature:
        return _invalid("signature mismatch")
    except Exception:
        return _invalid("verification error")
    try:
        payload = json.loads(payload_bytes.decode("utf-8"))
    except (UnicodeDecodeError, json.JSONDecodeError):
        return _invalid("payload is not valid JSON")
    if not isinstance(payload, dict):
        return _invalid("payload must be a JSON object")
    for key in _REQUIRED_PAYLOAD_KEYS:
        if key not in payload:
            return _invalid(f"payload missing {key!r}")
    iat, exp = payload["iat"], payload["exp"]
    if not isinstance(iat, int) or not isinstance(exp, int) or iat >= exp:
        return _invalid("payload must have integer iat < exp")
    if now > exp:
        return StampVerification(StampStatus.EXPIRED, payload=payload)
    return StampVerification(StampStatus.VALID, payload=payload)
