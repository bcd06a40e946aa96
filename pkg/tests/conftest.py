from __future__ import annotations

import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from svcproto import samples  # noqa: E402


@pytest.fixture
def network():
    return samples.construction_network()


@pytest.fixture
def schema():
    return samples.construction_schema()


@pytest.fixture
def extended_schema():
    return samples.extended_construction_schema()
