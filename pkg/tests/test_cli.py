import json
import socket
import subprocess
import sys

import jsonschema
import pytest

from waccess_kit.cli import main
from waccess_kit.reporting import report_schema

MISSING_ALT = '<!DOCTYPE html><html lang="en"><head><title>t</title></head><body><h1>x</h1><img src="a.png"></body></html>'


@pytest.fixture
def missing_alt(tmp_path):
    p = tmp_path / "missing-alt.html"
    p.write_text(MISSING_ALT, encoding="utf-8")
    return p


@pytest.fixture
def no_network(monkeypatch):
    def refuse(*args, **kwargs):
        raise AssertionError("network access attempted")

    monkeypatch.setattr(socket.socket, "connect", refuse)
    monkeypatch.setattr(socket, "getaddrinfo", refuse)


def test_check_console(missing_alt, capsys, no_network):
    assert main(["check", str(missing_alt)]) == 0
    out = capsys.readouterr().out
    assert "WCAG 1.1.1 (A, 2.0)" in out and '<img src="a.png">' in out


def test_check_fail_on_violations(missing_alt, no_network):
    assert main(["check", "--fail-on-violations", str(missing_alt)]) == 1


def test_check_json_out(missing_alt, tmp_path, no_network):
    out = tmp_path / "r" / "report.json"
    assert main(["check", "--format", "json", "--out", str(out), str(missing_alt)]) == 0
    data = json.loads(out.read_bytes())
    jsonschema.validate(data, report_schema())
    assert data["totals"]["total"] == 1


def test_check_rules_filter(missing_alt, capsys):
    assert main(["check", "--rules", "3.1.1", "--fail-on-violations", str(missing_alt)]) == 0
    assert "WCAG" not in capsys.readouterr().out


def test_check_missing_file(tmp_path, capsys):
    assert main(["check", str(tmp_path / "nope.html")]) == 2
    assert "cannot read" in capsys.readouterr().err


def test_check_empty_file(tmp_path):
    p = tmp_path / "empty.html"
    p.write_bytes(b"")
    assert main(["check", str(p)]) == 2


def test_check_dead_url(capsys):
    assert main(["check", "--timeout", "3000", "http://unroutable.invalid"]) == 2
    assert "dead" in capsys.readouterr().err


def test_check_url(server, capsys):
    assert main(["check", server.url("/ok.html")]) == 0
    assert "WCAG 1.1.1" in capsys.readouterr().out


def test_local_fetch_css_refuses_remote(tmp_path, capsys, no_network):
    (tmp_path / "s.css").write_text("a:hover { transition: all 2s }", encoding="utf-8")
    page = tmp_path / "p.html"
    page.write_text('<html lang="en"><head><link rel="stylesheet" href="s.css">'
                    '<link rel="stylesheet" href="https://cdn.example/x.css"></head>'
                    '<body><h1>x</h1><p><a href="/">home</a></p></body></html>', encoding="utf-8")
    assert main(["check", "--fetch-css", str(page)]) == 0
    captured = capsys.readouterr()
    assert "WCAG 2.3.3" in captured.out
    assert "https://cdn.example/x.css" in captured.err


@pytest.mark.parametrize("argv", [
    ["check", "--timeout", "999", "x.html"],
    ["check", "--rules", "9.9.9", "x.html"],
    ["batch", "--concurrency", "0", "--out", "o", "u.txt"],
    [],
])
def test_bad_arguments_exit_2(argv):
    with pytest.raises(SystemExit) as exc:
        main(argv)
    assert exc.value.code == 2


def test_rules_listing(capsys):
    assert main(["rules"]) == 0
    lines = capsys.readouterr().out.strip().splitlines()
    assert len(lines) == 30
    assert main(["rules", "--version", "2.2"]) == 0
    assert len(capsys.readouterr().out.strip().splitlines()) == 8
    assert main(["rules", "--format", "json", "--level", "AAA"]) == 0
    rows = json.loads(capsys.readouterr().out)
    assert [r["id"] for r in rows] == ["1.4.6", "1.3.6", "2.3.3", "2.5.5", "2.4.12"]


def test_batch(server, tmp_path, capsys):
    urls = tmp_path / "urls.txt"
    urls.write_text("\n".join(["# list", server.url("/ok.html"), server.url("/missing"), ""]), encoding="utf-8")
    out = tmp_path / "out"
    assert main(["batch", "--out", str(out), "--rules", "3.1.1,1.1.1", "--timeout", "5000", str(urls)]) == 0
    summary = json.loads((out / "summary.json").read_text())
    assert (summary["live_count"], summary["dead_count"]) == (1, 1)
    index = json.loads((out / "index.json").read_text())
    (site_file,) = index.values()
    report = json.loads((out / site_file).read_text())
    assert [r["id"] for r in report["rules"]] == ["1.1.1"]
    rows = (out / "aggregate.csv").read_text().splitlines()
    assert [r.split(",")[0] for r in rows[1:]] == ["1.1.1", "3.1.1"]
    assert (out / "histogram.csv").exists()
    assert "live: 1, dead: 1" in capsys.readouterr().out


def test_batch_missing_list(tmp_path):
    assert main(["batch", "--out", str(tmp_path / "o"), str(tmp_path / "none.txt")]) == 2


def test_module_entry_point(missing_alt):
    proc = subprocess.run([sys.executable, "-m", "waccess_kit", "check", "--format", "json", str(missing_alt)],
                          capture_output=True, timeout=60)
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["totals"]["by_level"]["A"] == 1
