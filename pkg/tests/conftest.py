"""
Fixtures compartilhadas para testes do gpdkit.

O corpus TRIV1, Z2, RIGID2 e TORS2 vive em tests/fixtures/*.json e é
carregado pelo parser real (serialization.parse_document), validando o
caminho completo: JSON -> parser -> FiniteGroupoid.
"""

import json
from pathlib import Path

import pytest

from gpdkit import (
    FiniteGroupoid,
    GroupoidFamily,
    disjoint_union,
    family_from_components,
    parse_document,
)

FIXTURES_DIR = Path(__file__).parent / "fixtures"


def load_fixture(name: str) -> dict:
    """Carrega um arquivo JSON de fixtures."""
    with open(FIXTURES_DIR / name, encoding="utf-8") as f:
        return json.load(f)


def fixture_text(name: str) -> str:
    return (FIXTURES_DIR / name).read_text(encoding="utf-8")


def load_value(name: str, validate: bool = True):
    """Documento de fixture já interpretado (payload de domínio)."""
    return parse_document(fixture_text(name), base_dir=FIXTURES_DIR, validate=validate).payload


def z2_copy(obj: str, first: str, second: str, prefix: str) -> FiniteGroupoid:
    """Cópia de Z2 num objeto e rótulos escolhidos."""
    return FiniteGroupoid.build(
        {obj: [first, second]},
        [
            (f"{prefix}0", obj, obj, {first: first, second: second}),
            (f"{prefix}1", obj, obj, {first: second, second: first}),
        ],
    )


# ─── Corpus ───


@pytest.fixture
def triv1() -> FiniteGroupoid:
    return load_value("triv1.json")


@pytest.fixture
def z2() -> FiniteGroupoid:
    return load_value("z2.json")


@pytest.fixture
def rigid2() -> FiniteGroupoid:
    return load_value("rigid2.json")


@pytest.fixture
def tors2() -> FiniteGroupoid:
    return load_value("tors2.json")


@pytest.fixture
def corpus(triv1, z2, rigid2, tors2) -> dict[str, FiniteGroupoid]:
    return {"TRIV1": triv1, "Z2": z2, "RIGID2": rigid2, "TORS2": tors2}


# ─── Famílias ───


@pytest.fixture
def z2_rigid2_family() -> GroupoidFamily:
    """Fibra a1 = Z2 (objeto e), fibra a2 = RIGID2 (objetos i, j)."""
    return load_value("z2_rigid2_family.json")


@pytest.fixture
def three_z2_family() -> GroupoidFamily:
    total = disjoint_union(
        z2_copy("e", "a", "b", "e"),
        z2_copy("f", "a", "b", "f"),
        z2_copy("g", "a", "b", "g"),
    )
    return family_from_components(total)
