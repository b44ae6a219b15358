#!/usr/bin/env python3
"""Run the registry service over HTTP.

Environment:
  MODEL_REGISTRY_BIND         host:port to listen on (default 127.0.0.1:8400)
  MODEL_REGISTRY_DATA_DIR     directory for the event log and credentials
                              (default ./registry-data)
  MODEL_REGISTRY_POLICY_FILE  JSON policy file (thresholds + family + fines);
                              defaults apply when unset
  MODEL_REGISTRY_SIGNING_KEY  PEM Ed25519 signing key; generated into the
                              data directory on first start when unset

Credentials are read from <data_dir>/credentials.json as
{"<token>": {"role": "Developer", "entity_ref": "BRN-..."}, ...}.
"""

from __future__ import annotations

import json
import os
import sys
from pathlib import Path

import uvicorn

from modelregistry.auth import Principal
from modelregistry.busreg import FixtureBusinessRegistry
from modelregistry.config import default_policy, load_policy
from modelregistry.events import EventLog
from modelregistry.httpapi import create_app
from modelregistry.service import RegistryService
from modelregistry.stamps import (
    generate_signing_key,
    load_signing_key,
    signing_key_to_pem,
    verification_key_to_pem,
)


def main() -> int:
    bind = os.environ.get("MODEL_REGISTRY_BIND", "127.0.0.1:8400")
    data_dir = Path(os.environ.get("MODEL_REGISTRY_DATA_DIR", "registry-data"))
    data_dir.mkdir(parents=True, exist_ok=True)

    policy_path = os.environ.get("MODEL_REGISTRY_POLICY_FILE")
    policy = load_policy(policy_path) if policy_path else default_policy()

    key_path = Path(
        os.environ.get("MODEL_REGISTRY_SIGNING_KEY", data_dir / "signing-key.pem")
    )
    if key_path.exists():
        signing_key = load_signing_key(key_path.read_bytes())
    else:
        signing_key = generate_signing_key()
        key_path.write_bytes(signing_key_to_pem(signing_key))
        print(f"generated signing key at {key_path}", file=sys.stderr)
    # the public half is served at /v1/public/key and kept as a file for
    # out-of-band distribution
    (data_dir / "verification-key.pem").write_bytes(
        verification_key_to_pem(signing_key.public_key())
    )

    credentials_path = data_dir / "credentials.json"
    credentials: dict[str, Principal] = {}
    if credentials_path.exists():
        raw = json.loads(credentials_path.read_text(encoding="utf-8"))
        credentials = {token: Principal.from_dict(spec) for token, spec in raw.items()}
    else:
        print(
            f"no {credentials_path}; only the public surface is reachable",
            file=sys.stderr,
        )

    fixture_path = data_dir / "business-registry.json"
    business_registry = (
        FixtureBusinessRegistry.from_file(fixture_path)
        if fixture_path.exists()
        else FixtureBusinessRegistry()
    )

    service = RegistryService(
        signing_key=signing_key,
        policy=policy,
        event_log=EventLog(data_dir / "events.log"),
        business_registry=business_registry,
    )
    app = create_app(service, credentials)

    host, _, port = bind.partition(":")
    uvicorn.run(app, host=host or "127.0.0.1", port=int(port or 8400))
    return 0


if __name__ == "__main__":
    sys.exit(main())
