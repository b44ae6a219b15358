#!/usr/bin/env python3
"""Regenerate the shared verification artifacts consumed by the portal suite.

Equivalent to running the two generator tests in the acceptance suite:
shared/stamp-test-vectors.json and shared/portal-fixture.json.
"""

from __future__ import annotations

import subprocess
import sys
from pathlib import Path

ROOT = Path(__file__).resolve().parent.parent


def main() -> int:
    return subprocess.call(
        [
            sys.executable,
            "-m",
            "pytest",
            "tests/test_acceptance.py::test_generate_shared_stamp_vectors",
            "tests/test_acceptance.py::test_generate_portal_fixture",
            "-q",
        ],
        cwd=ROOT,
    )


if __name__ == "__main__":
    sys.exit(main())
