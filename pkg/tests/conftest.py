import pytest
from hypothesis import HealthCheck, settings

from circlerig import fuchsian

settings.register_profile("default", max_examples=60, deadline=None,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")


@pytest.fixture(scope="session")
def surface2():
    return fuchsian.build_surface_group(2)


@pytest.fixture(scope="session")
def surface3():
    return fuchsian.build_surface_group(3)


@pytest.fixture(scope="session")
def orb2222_2():
    return fuchsian.build_orbifold_2222g(2)


@pytest.fixture(scope="session")
def orb334():
    return fuchsian.build_orbifold_334()


# -- acceptance summary: one line per criterion, printed after the run

_criteria: dict[int, dict] = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(n, title): acceptance criterion n")


def pytest_runtest_makereport(item, call):
    mark = item.get_closest_marker("criterion")
    if mark is None or call.when != "call":
        return
    n, title = mark.args
    entry = _criteria.setdefault(n, {"title": title, "ok": True, "detail": []})
    entry["ok"] &= call.excinfo is None
    entry["detail"].extend(getattr(item, "acceptance_detail", []))


@pytest.fixture
def detail(request):
    """Record a short human-readable measurement for the acceptance summary."""
    request.node.acceptance_detail = []
    return request.node.acceptance_detail.append


def pytest_terminal_summary(terminalreporter):
    if not _criteria:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(_criteria):
        e = _criteria[n]
        extra = f" ({'; '.join(e['detail'])})" if e["detail"] else ""
        terminalreporter.write_line(f"criterion {n:2d} {'PASS' if e['ok'] else 'FAIL'}: {e['title']}{extra}")
