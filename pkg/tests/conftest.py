import json
from pathlib import Path

import pytest

FIXTURES = Path(__file__).resolve().parents[1] / "src" / "entanglab" / "fixtures"


@pytest.fixture(scope="session")
def fixtures_dir() -> Path:
    return FIXTURES


def load_fixture(name: str) -> dict:
    return json.loads((FIXTURES / name).read_text(encoding="utf-8"))
