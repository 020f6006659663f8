import pytest

_RESULTS: dict[str, dict] = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(label, title): acceptance criterion reported in the summary")


@pytest.fixture
def note(request):
    """Attach a one-line detail to the current acceptance criterion."""
    entry = _RESULTS.setdefault(request.node.nodeid, {})

    def _note(text: str) -> None:
        entry["detail"] = text

    return _note


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    marker = item.get_closest_marker("criterion")
    if marker is None or rep.when != "call" and not (rep.when == "setup" and rep.failed):
        return
    entry = _RESULTS.setdefault(item.nodeid, {})
    entry["label"], entry["title"] = marker.args
    entry["passed"] = rep.passed and not hasattr(rep, "wasxfail")
    entry["xfail"] = hasattr(rep, "wasxfail")


def pytest_terminal_summary(terminalreporter):
    rows = [e for e in _RESULTS.values() if "label" in e]
    if not rows:
        return
    terminalreporter.section("acceptance criteria")
    for e in sorted(rows, key=lambda e: (int("".join(c for c in e["label"] if c.isdigit())), e["label"])):
        status = "PASS" if e["passed"] else "FAIL"
        tag = " (expected, see notes)" if e["xfail"] else ""
        detail = f": {e['detail']}" if e.get("detail") else ""
        terminalreporter.write_line(f"criterion {e['label']:<3} {status}{tag}  {e['title']}{detail}")
