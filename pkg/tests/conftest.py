from pathlib import Path

import pytest

from priorepair.pipeline import load_kb

FIXTURES = Path(__file__).parent / "fixtures"
GOLDEN = Path(__file__).parent / "golden"


def running_paths(prefs="figure"):
    d = FIXTURES / "running"
    return {
        "data": d / "ex.dkb",
        "constraints": d / "ex.dc",
        "meta": d / f"{prefs}.meta",
        "rules": d / f"{prefs}.prefs",
        "queries": d / "ex.ucq",
        "taxonomy": d / "ex.tax",
    }


def rug_paths(name):
    d = FIXTURES / name
    return {"data": d / "g.dkb", "constraints": d / "g.dc", "meta": d / "g.meta", "rules": d / "g.prefs"}


@pytest.fixture
def running_kb():
    """Example KB with the priority drawn in the figure (Above edges)."""
    return load_kb(**running_paths("figure"))


@pytest.fixture
def running_rules_kb():
    """Example KB with the three date/promotion/taxonomy rules."""
    return load_kb(**running_paths("ex"))
