import json
import random
from pathlib import Path

import pytest

from wound_flow.field_core import FqField, get_field
from wound_flow.function_field import Place, RationalFunctionField
from wound_flow.groups import GroupKind, GroupSpec, make_group


def pytest_configure(config: pytest.Config) -> None:
    config.addinivalue_line("markers", "slow: full-size sample counts; deselect with -m 'not slow'")


@pytest.fixture
def rng() -> random.Random:
    return random.Random(20240611)


@pytest.fixture
def f9() -> FqField:
    return get_field(3, 2)


@pytest.fixture
def k9(f9: FqField) -> RationalFunctionField:
    return RationalFunctionField(f9)


@pytest.fixture
def w9(f9: FqField) -> GroupSpec:
    return make_group(GroupKind.W, f9, "T*(T-1)")


@pytest.fixture
def v9(f9: FqField) -> GroupSpec:
    return make_group(GroupKind.V, f9, "T*(T-1)")


@pytest.fixture
def u9(f9: FqField) -> GroupSpec:
    return make_group(GroupKind.U, f9, "T*(T-1)")


@pytest.fixture
def place_t(f9: FqField) -> Place:
    return Place.parse(f9, "T")


@pytest.fixture
def schema():
    """Loader for the JSON schemas shipped in doc/schemas."""
    root = Path(__file__).resolve().parents[1] / "doc" / "schemas"

    def load(name: str) -> dict:
        return json.loads((root / f"{name}.schema.json").read_text(encoding="utf-8"))
    return load
