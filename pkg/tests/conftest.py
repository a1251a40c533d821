import pytest

from dgkit.cli import fixture_names, fixture_path
from dgkit.presentation import parse

FIXTURES = [n[:-4] for n in fixture_names()]

_cache = {}


def load(name):
    if name not in _cache:
        _cache[name] = parse(fixture_path(name))
    return _cache[name]


@pytest.fixture(params=FIXTURES)
def any_fixture(request):
    return load(request.param)


@pytest.fixture
def kx2():
    return load("kx2")


@pytest.fixture
def m2x2():
    return load("m2x2")


@pytest.fixture
def quiver2():
    return load("quiver2")


# one summary line per acceptance criterion

_criteria = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(n, title): acceptance criterion a test belongs to")


def pytest_runtest_makereport(item, call):
    mark = item.get_closest_marker("criterion")
    if mark is None or call.when != "call" and not (call.when == "setup" and call.excinfo):
        return
    n, title = mark.args
    xfail = item.get_closest_marker("xfail") is not None
    if call.excinfo is None:
        outcome = "FAIL (unexpected pass)" if xfail else "PASS"
    elif xfail and call.excinfo.errisinstance(AssertionError):
        outcome = "XFAIL"
    else:
        outcome = "FAIL"
    entry = _criteria.setdefault(n, [title, []])
    entry[1].append((item.name, outcome))


def pytest_terminal_summary(terminalreporter):
    if not _criteria:
        return
    tr = terminalreporter
    tr.section("acceptance criteria")
    for n in sorted(_criteria):
        title, results = _criteria[n]
        outcomes = [o for _, o in results]
        if any(o.startswith("FAIL") for o in outcomes):
            verdict = "FAIL"
        elif all(o == "XFAIL" for o in outcomes):
            verdict = "XFAIL"
        elif "XFAIL" in outcomes:
            verdict = "PASS (with strict xfail: %s)" % ", ".join(t for t, o in results if o == "XFAIL")
        else:
            verdict = "PASS"
        tr.write_line("criterion %2d  %-5s %s" % (n, verdict.split()[0], title)
                      + ("" if verdict in ("PASS", "FAIL", "XFAIL") else "  [" + verdict[5:].strip(" ()") + "]"))
