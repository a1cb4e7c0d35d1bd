import re

import pytest

_CRITERION = re.compile(r"test_criterion_(\d+)")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    report = outcome.get_result()
    if report.when != "call":
        return
    match = _CRITERION.match(item.name)
    if not match or "test_acceptance" not in item.nodeid:
        return
    status = "PASS" if report.passed else "FAIL"
    line = "[ACCEPTANCE] criterion-%d %s" % (int(match.group(1)), status)
    tr = item.config.pluginmanager.get_plugin("terminalreporter")
    if tr is not None:
        tr.write_line(line)
    else:
        print(line)
