import contextlib
import time

ACCEPTANCE = []


@contextlib.contextmanager
def criterion(number, text):
    """Record the outcome of one acceptance criterion for the summary."""
    t0 = time.perf_counter()
    try:
        yield
    except BaseException as exc:
        ACCEPTANCE.append((number, "FAIL", text, time.perf_counter() - t0, str(exc).splitlines()[0][:120]))
        raise
    ACCEPTANCE.append((number, "PASS", text, time.perf_counter() - t0, ""))


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for number, status, text, secs, why in sorted(ACCEPTANCE, key=lambda r: str(r[0])):
        line = f"[{status}] {number}: {text} ({secs:.2f}s)"
        terminalreporter.write_line(line + (f" -- {why}" if why else ""))
