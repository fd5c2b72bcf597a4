import json
from pathlib import Path

import pytest

from tropline.building import graph_from_json

FIXTURES = Path(__file__).parent / "fixtures"
GOLDENS = Path(__file__).parent / "goldens"


@pytest.fixture
def example1_path() -> Path:
    return FIXTURES / "example1.json"


@pytest.fixture
def example1_graph(example1_path):
    with open(example1_path, "r", encoding="utf-8") as handle:
        return graph_from_json(json.load(handle))
