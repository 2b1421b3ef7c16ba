"""Fixtures shared across the test suite."""

from __future__ import annotations

import pytest

from corpus import CORPUS


@pytest.fixture(scope="session")
def corpus():
    """Label -> lattice mapping for the shared (2, n) corpus."""
    return CORPUS
