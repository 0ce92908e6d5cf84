import sys
from pathlib import Path

import pytest
from hypothesis import settings

from tymod.abelian import FinAbGroup
from tymod.cli import parse_chi, parse_group
from tymod.forms import Bicharacter, parse_matrix
from tymod.tycat import TYData

settings.register_profile("default", deadline=None, max_examples=60)
settings.load_profile("default")

DATA = Path(__file__).parent / "data"
GOLDEN = Path(__file__).parent / "golden"

BATTERY = ["Z2", "Z3", "Z4", "Z5", "Z6", "Z8", "Z9", "Z2xZ2", "Z2xZ4", "Z3xZ3"]
HYPERBOLIC = "0,1/2;1/2,0"


def group(spec: str) -> FinAbGroup:
    return parse_group(spec)


def form(spec: str, chi: str) -> Bicharacter:
    G = parse_group(spec)
    return Bicharacter(G, parse_matrix(chi))


def ty(spec: str, chi: str, tau: int = 1) -> TYData:
    G = parse_group(spec)
    return TYData(G, parse_chi(chi, G), tau)


def battery_forms() -> list[tuple[str, str]]:
    rows = []
    for line in (DATA / "battery_forms.txt").read_text().splitlines():
        if line.strip() and not line.startswith("#"):
            spec, chi = line.split("|")
            rows.append((spec, chi))
    return rows


@pytest.fixture(scope="session")
def battery():
    return battery_forms()


def pytest_terminal_summary(terminalreporter):
    module = sys.modules.get("test_acceptance")
    lines = getattr(module, "RESULTS", None)
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in sorted(lines):
            terminalreporter.write_line(line)
