"""Fixtures; graph helpers live in toygraphs.py."""

from __future__ import annotations

import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from snclassifier import generate_toy_corpus


@pytest.fixture(scope="session")
def toy_manifest(tmp_path_factory):
    root = tmp_path_factory.mktemp("toy")
    return generate_toy_corpus(root, seed=1)
