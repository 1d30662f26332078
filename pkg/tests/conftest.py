import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from cohomkit.modelfile import bundled_names, load_bundled  # noqa: E402
from cohomkit.randmodels import suite  # noqa: E402
from cohomkit.report import analyze  # noqa: E402

ACCEPTANCE = {}


@pytest.fixture(scope="session")
def suite_models():
    """Bundled models followed by the seeded random family used by selftest."""
    return [load_bundled(name) for name in bundled_names()] + suite(0)


@pytest.fixture(scope="session")
def suite_reports(suite_models):
    return [(mf, analyze(mf, seed=0)) for mf in suite_models]


def pytest_runtest_logreport(report):
    if report.when != "call" and not (report.when == "setup" and report.failed):
        return
    name = report.nodeid.split("::")[-1]
    if "test_acceptance.py" in report.nodeid and name.startswith("test_criterion_"):
        ACCEPTANCE[name] = report.passed


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")

    def key(name):
        return int(name.split("_")[2])

    for name in sorted(ACCEPTANCE, key=key):
        status = "PASS" if ACCEPTANCE[name] else "FAIL"
        terminalreporter.write_line(f"{status}  criterion {key(name):>2}: "
                                    f"{name.split('_', 3)[3].replace('_', ' ')}")
