import re

import pytest
from hypothesis import settings

settings.register_profile("default", max_examples=60, deadline=None)
settings.load_profile("default")

_criteria: dict[int, dict] = {}


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    report = outcome.get_result()
    m = re.match(r"test_criterion_(\d+)", item.name)
    if not m:
        return
    num = int(m.group(1))
    entry = _criteria.setdefault(
        num, {"title": getattr(item.module, "CRITERIA", {}).get(num, ""), "ok": True, "ran": False}
    )
    if report.when == "call":
        entry["ran"] = True
    if report.failed:
        entry["ok"] = False
    if report.skipped and report.when in ("setup", "call"):
        entry["skipped"] = True


def pytest_terminal_summary(terminalreporter):
    if not _criteria:
        return
    terminalreporter.section("acceptance criteria")
    for num in sorted(_criteria):
        e = _criteria[num]
        if not e["ran"] and e.get("skipped"):
            status = "SKIP"
        else:
            status = "PASS" if e["ok"] else "FAIL"
        terminalreporter.write_line(f"criterion {num:2d} {status}  {e['title']}")
