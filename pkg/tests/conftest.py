import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parent))

_criteria = {}


def pytest_runtest_logreport(report):
    if report.when == "call" and "test_criterion[" in report.nodeid:
        name = report.nodeid.split("[", 1)[1].rstrip("]")
        detail = dict(report.user_properties).get("detail", "")
        _criteria[name] = (report.passed, detail)


def pytest_terminal_summary(terminalreporter):
    if not _criteria:
        return
    terminalreporter.section("acceptance criteria")
    for name in sorted(_criteria, key=lambda n: int(n.rsplit("_", 1)[1])):
        ok, detail = _criteria[name]
        terminalreporter.write_line(f"{'PASS' if ok else 'FAIL'}  {name}  {detail}")
