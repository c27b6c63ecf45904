import asyncio
import time

import pytest

from support import FixtureServer, Route, closed_port
from waccess_kit.crawler import BatchPlan, fetch_one, normalize_url, read_url_list, run_batch, user_agent


def test_live_fetch(server):
    r = fetch_one(server.url("/ok.html"), 5000)
    assert r.live and r.http_status == 200 and r.body.startswith(b"<!DOCTYPE")
    assert r.final_url == server.url("/ok.html")
    assert server.requests[-1][2] == user_agent()


def test_redirect_followed(server):
    r = fetch_one(server.url("/hop"), 5000)
    assert r.live and r.final_url == server.url("/ok.html")


@pytest.mark.parametrize("path,reason", [
    ("/missing", "http_error(404)"),
    ("/error", "http_error(503)"),
    ("/empty", "empty_body"),
    ("/loop", "too_many_redirects"),
])
def test_dead_classification(server, path, reason):
    r = fetch_one(server.url(path), 5000)
    assert not r.live and r.reason == reason


def test_timeout(server):
    started = time.monotonic()
    r = fetch_one(server.url("/slow"), 1000)
    assert r.reason == "timeout"
    assert time.monotonic() - started < 1.5


def test_connect_refused():
    assert fetch_one(f"http://127.0.0.1:{closed_port()}/", 2000).reason == "connect"


def test_dns_failure():
    assert fetch_one("http://unroutable.invalid/", 3000).reason in ("dns", "connect")


def test_stylesheets_same_origin_only(server):
    r = fetch_one(server.url("/styled.html"), 5000, fetch_css=True)
    assert [u for u, _ in r.stylesheets] == [server.url("/style.css")]
    assert all("elsewhere" not in p for _, p, _ in server.requests)


def test_user_agent_override(server, monkeypatch):
    monkeypatch.setenv("WACCESS_USER_AGENT", "custom-agent/1")
    fetch_one(server.url("/ok.html"), 5000)
    assert server.requests[-1][2] == "custom-agent/1"


def test_normalize_and_plan():
    assert normalize_url("Example.ORG") == ("https://example.org/", True)
    assert normalize_url("http://a.b/x#frag") == ("http://a.b/x", False)
    assert normalize_url("ftp://a.b/") is None
    plan = BatchPlan.build(["a.org", "https://a.org/", "HTTPS://A.ORG", "", "mailto:x@y", "http://b.org/p"])
    assert plan.urls == ("https://a.org/", "http://b.org/p")
    assert plan.http_fallback == {"https://a.org/"}
    assert plan.rejected == ("", "mailto:x@y")
    with pytest.raises(ValueError):
        BatchPlan(urls=("x",), concurrency=0)


def test_read_url_list(tmp_path):
    p = tmp_path / "urls.txt"
    p.write_text("# header\n\nhttps://a.org/\n  b.org  \n#c.org\n", encoding="utf-8")
    assert read_url_list(p) == ["https://a.org/", "b.org"]


def test_batch_exactly_once_and_reasons(server):
    urls = [server.url(p) for p in ("/ok.html", "/hop", "/missing", "/empty")] + [server.url("/ok.html")]
    seen = []
    summary = run_batch(BatchPlan.build(urls, concurrency=3, timeout_ms=5000), lambda res, rep: seen.append(rep.url))
    assert (summary.live_count, summary.dead_count) == (2, 2)
    assert summary.per_reason == {"empty_body": 1, "http_error": 1}
    assert sorted(seen) == sorted([server.url("/ok.html"), server.url("/hop")])


def test_batch_empty():
    summary = run_batch(BatchPlan.build([]))
    assert (summary.live_count, summary.dead_count, summary.per_reason) == (0, 0, {})


def test_batch_concurrency_does_not_change_partition(server):
    urls = [server.url(p) for p in ("/ok.html", "/hop", "/missing", "/empty", "/error", "/loop")]
    parts = []
    for c in (1, 16):
        s = run_batch(BatchPlan.build(urls, concurrency=c, timeout_ms=5000))
        parts.append((s.live_count, s.dead_count, s.dead))
    assert parts[0] == parts[1]


def test_per_host_serialization_and_delay():
    routes = {f"/p{i}": Route(body=b"<p>x</p>") for i in range(4)}
    with FixtureServer(routes, default_delay_s=0.02) as srv:
        urls = [srv.url(f"/p{i}") for i in range(4)]
        started = time.monotonic()
        run_batch(BatchPlan.build(urls, concurrency=4, per_host_delay_ms=100))
        elapsed = time.monotonic() - started
        assert max(srv.host_peak.values()) == 1
        assert elapsed >= 0.3


def test_async_sink_supported(server):
    got = []

    async def sink(res, rep):
        await asyncio.sleep(0)
        got.append(rep.total)

    run_batch(BatchPlan.build([server.url("/ok.html")]), sink)
    assert got == [2] or got == [1]
