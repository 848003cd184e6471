from __future__ import annotations

import os
from pathlib import Path

import pytest

from ad2smv.adtext import parse_ad
from ad2smv.model import ActivityDiagram

CORPUS_DIR = Path(__file__).parent / "corpus"


def fixture_dir() -> Path:
    override = os.environ.get("AD2SMV_FIXTURE_DIR")
    if override:
        return Path(override)
    import ad2smv

    return Path(ad2smv.__file__).parent / "fixtures"


def load_fixture_ad(name: str) -> ActivityDiagram:
    return parse_ad((fixture_dir() / f"{name}.ad").read_text(encoding="utf-8"))


def golden_text(name: str) -> str:
    return (fixture_dir() / f"{name}.golden.smv").read_text(encoding="utf-8")


def corpus_paths() -> list[Path]:
    shipped = sorted(fixture_dir().glob("*.ad"))
    local = sorted(CORPUS_DIR.glob("*.ad"))
    return shipped + local


@pytest.fixture(scope="session")
def controlled_loop() -> ActivityDiagram:
    return load_fixture_ad("controlledLoop")


@pytest.fixture(scope="session")
def hire_employee() -> ActivityDiagram:
    return load_fixture_ad("hireEmployeeSimplified")


@pytest.fixture(scope="session")
def guard_gap() -> ActivityDiagram:
    return load_fixture_ad("controlledLoopGuardGap")
