import os

import pytest
from hypothesis import HealthCheck, settings

from navbot.corpus import build_corpus
from navbot.learners import fit_tree

settings.register_profile("navbot", deadline=None, suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("navbot")

REPO = os.path.dirname(os.path.dirname(os.path.abspath(__file__)))
VENDORED_DATASET = os.path.join(REPO, "data", "paper_dataset.csv")


@pytest.fixture(scope="session")
def corpus():
    return build_corpus()


@pytest.fixture(scope="session")
def trained_tree(corpus):
    return fit_tree(corpus)


def pytest_terminal_summary(terminalreporter):
    """One line per acceptance criterion, taken from the test reports."""
    reports = [r for key in ("passed", "failed") for r in terminalreporter.stats.get(key, [])
               if r.when == "call" and "test_acceptance.py" in r.nodeid]
    if not reports:
        return
    terminalreporter.section("acceptance criteria")
    for r in sorted(reports, key=lambda r: r.nodeid):
        props = dict(r.user_properties)
        status = "PASS" if r.passed else "FAIL"
        terminalreporter.write_line(f"{status}  {props.get('criterion', r.nodeid)}  {props.get('detail', '')}")
