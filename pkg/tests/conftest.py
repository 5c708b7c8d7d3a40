import json
from pathlib import Path

import numpy as np
import pytest

from solarscan.geotypes import GeoPoint
from solarscan.imagery import AnchoredImage

REPO = Path(__file__).parent.parent
FIXTURES = REPO / "fixtures"
TEST_FIXTURES = Path(__file__).parent / "fixtures"

_acceptance_results: list[tuple[str, str]] = []


@pytest.fixture(scope="session")
def fixtures_dir() -> Path:
    return FIXTURES


@pytest.fixture(scope="session")
def e2e_expected() -> dict:
    return json.loads((TEST_FIXTURES / "e2e_expected.json").read_text(encoding="utf-8"))


def load_test_fixture(name: str):
    return json.loads((TEST_FIXTURES / name).read_text(encoding="utf-8"))


def make_image(
    nw=GeoPoint(47.0, 8.0),
    se=GeoPoint(46.99, 8.01),
    width=1001,
    height=1001,
    building_id="b",
) -> AnchoredImage:
    return AnchoredImage(
        width=width,
        height=height,
        pixel_data=np.zeros((height, width, 3), dtype=np.uint8),
        anchor_nw=nw,
        anchor_se=se,
        building_id=building_id,
    )


def record_acceptance(name: str, passed: bool) -> None:
    _acceptance_results.append((name, "PASS" if passed else "FAIL"))


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if not _acceptance_results:
        return
    terminalreporter.section("acceptance criteria")
    for name, status in _acceptance_results:
        terminalreporter.write_line(f"ACCEPTANCE {status}: {name}")
