import os

import pytest


def pytest_addoption(parser):
    parser.addoption("--runslow", action="store_true", default=False, help="run slow nightly tests")


def pytest_collection_modifyitems(config, items):
    if config.getoption("--runslow") or os.environ.get("QSAT12_SLOW") == "1":
        return
    skip = pytest.mark.skip(reason="slow nightly test; use --runslow or QSAT12_SLOW=1")
    for item in items:
        if "slow" in item.keywords:
            item.add_marker(skip)


# one line per acceptance criterion, printed at the end of the run
ACCEPTANCE: dict[int, str] = {}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE and not any("test_acceptance" in str(r.nodeid) for r in terminalreporter.stats.get("skipped", [])):
        return
    terminalreporter.section("acceptance criteria")
    skipped = {
        r.nodeid.rsplit("::", 1)[-1] for r in terminalreporter.stats.get("skipped", []) if "test_acceptance" in r.nodeid
    }
    for k in range(1, 13):
        if k in ACCEPTANCE:
            terminalreporter.write_line(ACCEPTANCE[k])
        elif any(name.startswith(f"test_criterion_{k:02d}") for name in skipped):
            terminalreporter.write_line(f"criterion {k:2d}: SKIP (nightly; run with --runslow)")
