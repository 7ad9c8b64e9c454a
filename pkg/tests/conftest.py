import json
import os

import pytest

GOLDEN_DIR = os.path.join(os.path.dirname(__file__), os.pardir, "golden")


@pytest.fixture(scope="session")
def golden():
    """Realized counts from the seeded build-time checks (tools/make_golden.py)."""
    path = os.path.join(GOLDEN_DIR, "build_checks.json")
    with open(path, encoding="utf-8") as fh:
        return json.load(fh)


@pytest.fixture(scope="session")
def golden_dir():
    return os.path.abspath(GOLDEN_DIR)
