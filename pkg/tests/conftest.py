import os
import sys

sys.path.insert(0, os.path.dirname(__file__))


def pytest_terminal_summary(terminalreporter):
    try:
        from test_acceptance import RESULTS
    except ImportError:
        return
    if not RESULTS:
        return
    terminalreporter.write_sep("-", "acceptance criteria")
    for n, desc, status in sorted(RESULTS):
        terminalreporter.write_line(f"criterion {n:2d}: {status} - {desc}")
