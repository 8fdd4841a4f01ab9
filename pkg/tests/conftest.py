"""Shared pytest setup: makes ``oracles`` importable and summarises the
acceptance suite as one PASS/FAIL line per criterion."""
import re
import sys
from collections import OrderedDict
from pathlib import Path

sys.path.insert(0, str(Path(__file__).parent))

_CRITERION = re.compile(r"test_acceptance\.py::test_c(\d\d)_(\w+?)(\[.*\])?$")
_outcomes = OrderedDict()


def pytest_runtest_logreport(report):
    m = _CRITERION.search(report.nodeid)
    if not m:
        return
    key = (int(m.group(1)), m.group(2).replace("_", " "))
    failed = report.failed or (report.when == "call" and report.skipped)
    if report.when == "call" or failed:
        _outcomes[key] = _outcomes.get(key, True) and not failed


def pytest_terminal_summary(terminalreporter):
    if not _outcomes:
        return
    tr = terminalreporter
    tr.section("acceptance criteria")
    for (num, title), ok in sorted(_outcomes.items()):
        tr.write_line(f"criterion {num:2d}  {'PASS' if ok else 'FAIL'}  {title}")
