import pathlib

import numpy as np
import pytest

from sphtherm.geometry import load_profile

FIXTURES = pathlib.Path(__file__).resolve().parent.parent / "fixtures"


def fixture_path(name):
    return FIXTURES / name


def load_fixture(name):
    return load_profile(fixture_path(name).read_text())


def lattice(n, dp=1.0):
    """Square n x n lattice of cell centres with spacing dp."""
    g = (np.arange(n) + 0.5) * dp
    return np.stack(np.meshgrid(g, g, indexing="ij"), axis=-1).reshape(-1, 2)


@pytest.fixture
def slab():
    return load_fixture("slab.yaml")


@pytest.fixture
def two_layer():
    return load_fixture("two_layer_slab.yaml")


# acceptance criteria report -------------------------------------------------

_CRITERIA = {}


def record_criterion(number, title, passed, detail=""):
    _CRITERIA[number] = (title, passed, detail)


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(_CRITERIA):
        title, passed, detail = _CRITERIA[number]
        verdict = "PASS" if passed else "FAIL"
        terminalreporter.write_line(f"[{verdict}] {number:>2}. {title}  {detail}")
