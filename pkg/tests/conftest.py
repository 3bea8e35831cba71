import os
import re

from hypothesis import settings

settings.register_profile("default", derandomize=True)
settings.register_profile("random", derandomize=False)
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "default"))

_results = {}


def pytest_runtest_logreport(report):
    m = re.search(r"test_criterion_(\d+)_(\w+)", report.nodeid)
    if m and (report.when == "call" or report.outcome != "passed"):
        key = int(m.group(1))
        if report.when == "call" or key not in _results:
            _results[key] = (m.group(2), report.outcome)


def pytest_terminal_summary(terminalreporter):
    if not _results:
        return
    terminalreporter.section("acceptance criteria")
    for key in sorted(_results):
        name, outcome = _results[key]
        terminalreporter.write_line(
            "criterion %2d  %-4s  %s" % (key, "PASS" if outcome == "passed" else "FAIL", name)
        )
