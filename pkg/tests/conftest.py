from pathlib import Path

import pytest
from hypothesis import settings

from causal_loom.dsl import parse_model
from causal_loom.kb import kb_load

# property inputs are whole systems; per-example deadlines are not useful
settings.register_profile("suite", deadline=None)
settings.load_profile("suite")

MODELS = Path(__file__).resolve().parent.parent / "models"


def read_model(name: str) -> str:
    return (MODELS / name).read_text(encoding="utf-8")


@pytest.fixture(scope="session")
def sfr_system():
    """Three-variable ratio model: two assignments plus one core equation."""
    return parse_model(read_model("student_faculty_ratio.sem"))


@pytest.fixture(scope="session")
def extended_system():
    """Five-equation under-constrained extension (class size / teaching load)."""
    return parse_model(read_model("extended_under.sem"))


@pytest.fixture(scope="session")
def session_full_system():
    """Self-contained ten-equation budget model."""
    return parse_model(read_model("session_full.sem"))


@pytest.fixture(scope="session")
def post_manipulation_system():
    """Budget model with class size fixed and the TL-solved class-size form."""
    return parse_model(read_model("post_manipulation.sem"))


@pytest.fixture(scope="session")
def university_kb():
    return kb_load((MODELS / "university_kb.json").read_bytes())
