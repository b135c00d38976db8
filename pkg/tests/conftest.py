import re
import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).parent))

_CRITERION = re.compile(r"test_acceptance\.py::test_criterion_(\d+)_(\w+)")
_results: dict[int, tuple[str, str]] = {}


def pytest_runtest_logreport(report):
    m = _CRITERION.search(report.nodeid)
    if not m:
        return
    num, name = int(m.group(1)), m.group(2)
    failed = report.failed or (report.when == "call" and report.skipped)
    if failed or num not in _results:
        if failed:
            _results[num] = ("FAIL", name)
        elif report.when == "call":
            _results[num] = ("PASS", name)


def pytest_terminal_summary(terminalreporter):
    if not _results:
        return
    terminalreporter.section("acceptance criteria")
    for num in sorted(_results):
        status, name = _results[num]
        terminalreporter.write_line(f"criterion {num:2d} {status}  {name.replace('_', ' ')}")
