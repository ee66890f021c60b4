def pytest_terminal_summary(terminalreporter):
    """Repeat the acceptance PASS/FAIL lines after the run, in criterion order."""
    import sys

    module = sys.modules.get("test_acceptance") or sys.modules.get("tests.test_acceptance")
    if module is None or not module.RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    order = ["C1", "C2", "C3", "C4", "C5", "C6", "C7", "C8", "C9", "C10", "SMOKE"]
    for key in order:
        if key in module.RESULTS:
            terminalreporter.write_line(module.RESULTS[key][1])
