import csv
import io
import json
from datetime import datetime, timezone

import jsonschema
import pytest

from rule_fixtures import FIXTURES, page
from waccess_kit import audit_html
from waccess_kit.reporting import (BUCKETS, Aggregator, aggregate, bucket_index, emit_aggregate_csv, emit_histogram_csv,
                                   emit_json, render_console, report_schema, site_filename)

FIXED = datetime(2024, 1, 2, 3, 4, 5, tzinfo=timezone.utc)


def test_console_single_rule_block():
    report = audit_html(page('<img src="a.png">'), fetched_at=FIXED)
    text = render_console(report)
    assert text.count("WCAG ") == 1
    assert "WCAG 1.1.1 (A, 2.0) - Non-text Content: 1 violation(s)" in text
    assert '<img src="a.png">' in text
    assert text.rstrip().endswith("A: 1, AA: 0, AAA: 0")


def test_console_clean_page():
    text = render_console(audit_html(page()))
    assert "WCAG" not in text
    assert text.rstrip().endswith("A: 0, AA: 0, AAA: 0")


def test_console_html_snippet_for_3_1_1():
    html = '<html data-x="1"><body><h1>x</h1></body></html>'
    assert '<html data-x="1">' in render_console(audit_html(html))


def test_console_truncates_long_snippets():
    long_attr = "x" * 900
    report = audit_html(page(f'<img src="{long_attr}">'))
    text = render_console(report)
    line = next(l for l in text.splitlines() if l.strip().startswith("Snippet:"))
    assert line.endswith("[truncated]")
    assert long_attr not in text
    assert long_attr in json.loads(emit_json(report))["rules"][0]["violations"][0]["snippet"]


def test_json_clean_page():
    data = json.loads(emit_json(audit_html(page(), fetched_at=FIXED)))
    assert data["totals"]["total"] == 0
    assert data["rules"] == []
    assert data["fetched_at"] == "2024-01-02T03:04:05.000Z"


def test_json_schema_and_totals():
    schema = report_schema()
    for name, html, _ in FIXTURES:
        report = audit_html(html, fetched_at=FIXED)
        data = json.loads(emit_json(report))
        jsonschema.validate(data, schema)
        counts = {r["id"]: len(r["violations"]) for r in data["rules"]}
        assert counts == report.totals_by_rule
        by_level = {"A": 0, "AA": 0, "AAA": 0}
        for r in data["rules"]:
            by_level[r["level"]] += len(r["violations"])
        assert by_level == data["totals"]["by_level"]


def test_json_keys_sorted_and_deterministic():
    html = page('<img src=x><p style="color:#777">é ☃</p>')
    a = emit_json(audit_html(html, fetched_at=FIXED))
    b = emit_json(audit_html(html, fetched_at=FIXED))
    assert a == b
    assert a.isascii()
    data = json.loads(a)
    assert list(data) == sorted(data)


def test_json_snippet_round_trip():
    html = page('<img alt="" src="café.png"><img src="日本.png" title="a&quot;b">')
    data = json.loads(emit_json(audit_html(html)))
    snippet = data["rules"][0]["violations"][0]["snippet"]
    assert snippet.encode() in html.encode()


def _report(url, counts):
    r = audit_html(page("<img src=x>" * counts.get("1.1.1", 0) + "<b>b</b>" * counts.get("1.4.4", 0)), url)
    return r


def test_aggregate_fold():
    agg = aggregate([_report("https://a/", {"1.1.1": 3}), _report("https://b/", {})])
    assert agg.per_rule["1.1.1"].total_violations == 3
    assert agg.per_rule["1.1.1"].websites_violating == 1
    assert agg.histogram["1.1.1"] == (1, 1, 0, 0, 0, 0, 0)
    assert agg.grand_total == sum(agg.per_level.values()) == sum(agg.per_version.values()) == 3


def test_aggregate_empty():
    agg = aggregate([])
    assert agg.grand_total == 0 and len(agg.per_rule) == 29
    assert all(v == 0 for v in agg.per_level.values())


def test_level_shares():
    agg = aggregate([_report("https://a/", {"1.1.1": 3, "1.4.4": 1})])
    shares = agg.level_shares()
    assert sum(shares.values()) == pytest.approx(100.0)
    assert shares["A"] == pytest.approx(75.0)


def test_aggregate_duplicate_url_rejected():
    agg = Aggregator()
    agg.add(_report("https://a/", {}))
    with pytest.raises(ValueError):
        agg.add(_report("https://a/", {}))


def test_aggregate_csv_shape():
    agg = aggregate([_report("https://a/", {"1.1.1": 2})])
    raw = emit_aggregate_csv(agg)
    assert b"\r\n" not in raw
    rows = list(csv.reader(io.StringIO(raw.decode())))
    assert rows[0] == ["rule_id", "wcag_version", "level", "principle", "title", "total_violations",
                       "websites_violating"]
    assert len(rows) == 30
    row = {r[0]: r for r in rows[1:]}
    assert row["1.4.6"][2] == "AAA"
    assert row["2.2.2"][4] == "Pause, Stop, Hide"  # quoted field survives
    assert sum(int(r[5]) for r in rows[1:]) == agg.grand_total
    hist = list(csv.reader(io.StringIO(emit_histogram_csv(agg).decode())))
    assert hist[0] == ["rule_id", "bucket", "site_count"]
    assert len(hist) == 1 + 29 * len(BUCKETS)


def test_rule_filter_restricts_rows():
    agg = Aggregator(["3.1.1", "2.4.6"])
    agg.add(_report("https://a/", {"1.1.1": 2}))
    rows = emit_aggregate_csv(agg.result()).decode().splitlines()
    assert [r.split(",")[0] for r in rows[1:]] == ["2.4.6", "3.1.1"]


@pytest.mark.parametrize("count,idx", [(0, 0), (1, 1), (10, 1), (11, 2), (30, 2), (31, 3), (60, 3), (61, 4),
                                       (500, 4), (501, 5), (1000, 5), (1001, 6)])
def test_buckets(count, idx):
    assert bucket_index(count) == idx


def test_site_filenames():
    a = site_filename("https://www.example.gov.in/path?q=1")
    b = site_filename("https://www.example.gov.in/other")
    assert a.startswith("www.example.gov.in-") and a.endswith(".json") and a != b
    assert "/" not in site_filename("http://user@evil/../../x")
