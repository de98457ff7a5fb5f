import os

import pytest

from netexpand.graph import Graph, complete_graph, path_graph, star_graph

_ACCEPTANCE: list[tuple[str, str, str, str]] = []


@pytest.fixture
def star9():
    return star_graph(9)


@pytest.fixture
def path5():
    return path_graph(5)


@pytest.fixture
def k4():
    return complete_graph(4)


@pytest.fixture
def two_triangles():
    """Triangles {0,1,2} and {3,4,5} joined by the bridge 2-3."""
    return Graph.from_edges(6, [(0, 1), (0, 2), (1, 2), (3, 4), (3, 5), (4, 5), (2, 3)])


@pytest.fixture(scope="session")
def cache_dir():
    return os.environ.get("NETEXPAND_CACHE")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    report = outcome.get_result()
    marker = item.get_closest_marker("acceptance")
    if marker is None:
        return
    cid, title = marker.args
    detail = "; ".join(str(v) for k, v in item.user_properties if k == "detail")
    if report.when == "call" or (report.when == "setup" and report.outcome != "passed"):
        if report.skipped:
            status = "SKIP"
            reason = report.longrepr[2] if isinstance(report.longrepr, tuple) else str(report.longrepr)
            detail = reason.removeprefix("Skipped: ")
        else:
            status = "PASS" if report.passed else "FAIL"
        _ACCEPTANCE.append((cid, title, status, detail))


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for cid, title, status, detail in sorted(_ACCEPTANCE, key=lambda r: r[0]):
        line = f"{status:4}  {cid:4} {title}"
        if detail:
            line += f"  [{detail}]"
        terminalreporter.write_line(line)
