import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from support import FixtureServer, Route  # noqa: E402

PAGE = b'<!DOCTYPE html><html lang="en"><head><title>t</title></head><body><h1>Hi</h1><img src="a.png"></body></html>'

_ac_results: dict[str, list[bool]] = {}
_ac_titles: dict[str, str] = {}


@pytest.fixture
def server():
    routes = {
        "/ok.html": Route(body=PAGE),
        "/empty": Route(body=b""),
        "/missing": Route(404, b"nope"),
        "/error": Route(503, b"down"),
        "/loop": Route(302, location="/loop"),
        "/hop": Route(301, location="/ok.html"),
        "/slow": Route(body=PAGE, delay_s=1.6),
        "/style.css": Route(body=b"img { width: 10px; height: 10px } a:hover { transition: all 3s }",
                            content_type="text/css"),
        "/styled.html": Route(body=b'<html lang="en"><head><link rel="stylesheet" href="/style.css">'
                                   b'<link rel="stylesheet" href="http://elsewhere.invalid/x.css"></head>'
                                   b'<body><h1>x</h1><p><a href="/">home</a></p></body></html>'),
    }
    with FixtureServer(routes) as srv:
        yield srv


def pytest_configure(config):
    config.addinivalue_line("markers", "acceptance(ac_id, title): acceptance criterion test")


def pytest_runtest_logreport(report):
    if report.when != "call" and not (report.when == "setup" and report.outcome != "passed"):
        return
    marker = next((m for m in report.user_properties if m[0] == "acceptance"), None)
    if marker is None:
        return
    ac_id, title = marker[1]
    _ac_titles[ac_id] = title
    _ac_results.setdefault(ac_id, []).append(report.outcome == "passed")


@pytest.fixture(autouse=True)
def _record_acceptance(request):
    m = request.node.get_closest_marker("acceptance")
    if m is not None:
        request.node.user_properties.append(("acceptance", (m.args[0], m.args[1])))


def pytest_terminal_summary(terminalreporter):
    if not _ac_results:
        return
    terminalreporter.section("acceptance criteria")
    for ac_id in sorted(_ac_results, key=lambda s: int(s[2:])):
        ok = all(_ac_results[ac_id])
        terminalreporter.write_line(f"{ac_id} {'PASS' if ok else 'FAIL'}: {_ac_titles[ac_id]}")
