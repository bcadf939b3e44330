import re

_CRITERION = re.compile(r"test_criterion_(\d+)_([a-z0-9_]+)")


def pytest_runtest_logreport(report):
    """Emit one uncaptured verdict line per acceptance criterion."""
    m = _CRITERION.search(report.nodeid)
    if not m:
        return
    if report.when == "call":
        verdict = "PASS" if report.passed else "FAIL"
    elif report.failed:
        verdict = "FAIL"
    else:
        return
    label = m.group(2).replace("_", "-")
    print("\nACCEPTANCE %s %s: %s" % (m.group(1), label, verdict), flush=True)
