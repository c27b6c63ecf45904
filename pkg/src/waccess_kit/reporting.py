"""Console, JSON and CSV renderings of page reports and corpus aggregates."""

from __future__ import annotations

import csv
import hashlib
import io
import json
import re
from dataclasses import dataclass, field
from datetime import datetime, timezone
from importlib import resources
from pathlib import Path
from typing import Iterable

from .rules import PageReport, descriptor, registry
from .rules.registry import LEVELS, VERSIONS, id_key

SNIPPET_CONSOLE_LIMIT = 500
BUCKETS = ("0", "1-10", "11-30", "31-60", "61-500", "501-1000", ">1000")
_BUCKET_UPPER = (0, 10, 30, 60, 500, 1000)
AGGREGATE_HEADER = ("rule_id", "wcag_version", "level", "principle", "title", "total_violations",
                    "websites_violating")
HISTOGRAM_HEADER = ("rule_id", "bucket", "site_count")


def bucket_index(count: int) -> int:
    for i, upper in enumerate(_BUCKET_UPPER):
        if count <= upper:
            return i
    return len(_BUCKET_UPPER)


def _truncate(text: str, limit: int = SNIPPET_CONSOLE_LIMIT) -> str:
    raw = text.encode("utf-8", "surrogateescape")
    if len(raw) <= limit:
        return text
    return raw[:limit].decode("utf-8", "ignore") + " [truncated]"


def render_console(report: PageReport) -> str:
    lines = [f"Accessibility report for {report.url or '(local document)'}", ""]
    for rid, count in report.totals_by_rule.items():
        d = descriptor(rid)
        lines.append(f"WCAG {rid} ({d.level}, {d.wcag_version}) - {d.title}: {count} violation(s)")
        for v in report.violations_for(rid):
            lines.append(f"  Error:   {v.message}")
            lines.append(f"  Snippet: {_truncate(v.snippet)}")
            lines.append(f"  Fix:     {v.fix}")
            lines.append(f"  At:      {v.locator}")
            lines.append("")
    for rid, reason in report.skipped_rules:
        lines.append(f"Skipped WCAG {rid}: {reason}")
    if report.skipped_rules:
        lines.append("")
    lvl = report.totals_by_level
    lines.append(", ".join(f"{level}: {lvl[level]}" for level in LEVELS))
    return "\n".join(lines) + "\n"


def format_timestamp(ts: datetime) -> str:
    if ts.tzinfo is None:
        ts = ts.replace(tzinfo=timezone.utc)
    return ts.astimezone(timezone.utc).isoformat(timespec="milliseconds").replace("+00:00", "Z")


def report_to_dict(report: PageReport) -> dict:
    rules = []
    for rid in report.totals_by_rule:
        d = descriptor(rid)
        rules.append({
            "id": rid,
            "version": d.wcag_version,
            "level": d.level,
            "principle": d.principle,
            "title": d.title,
            "violations": [
                {"locator": v.locator, "snippet": v.snippet, "message": v.message, "fix": v.fix}
                for v in report.violations_for(rid)
            ],
        })
    return {
        "url": report.url,
        "fetched_at": format_timestamp(report.fetched_at),
        "skipped_rules": [{"rule_id": rid, "reason": reason} for rid, reason in report.skipped_rules],
        "rules": rules,
        "totals": {
            "total": report.total,
            "by_level": dict(report.totals_by_level),
            "by_version": dict(report.totals_by_version),
        },
    }


def emit_json(report: PageReport) -> bytes:
    """Deterministic JSON: sorted keys, ASCII escapes, trailing newline."""
    text = json.dumps(report_to_dict(report), sort_keys=True, ensure_ascii=True, indent=2)
    # lone surrogates from undecodable bytes survive as \udcXX escapes
    return (text + "\n").encode("ascii")


def report_schema() -> dict:
    return json.loads(resources.files("waccess_kit").joinpath("report.schema.json").read_text("utf-8"))


# -- aggregation ----------------------------------------------------------


@dataclass(frozen=True)
class RuleTotals:
    total_violations: int = 0
    websites_violating: int = 0


@dataclass
class CorpusAggregate:
    per_rule: dict[str, RuleTotals]
    per_level: dict[str, int]
    per_version: dict[str, int]
    per_site: dict[str, dict[str, int]]
    histogram: dict[str, tuple[int, ...]]

    @property
    def grand_total(self) -> int:
        return sum(t.total_violations for t in self.per_rule.values())

    @property
    def site_count(self) -> int:
        return len(self.per_site)

    def level_shares(self) -> dict[str, float]:
        """Percentage of all violations per conformance level."""
        total = sum(self.per_level.values())
        return {lvl: (100.0 * n / total if total else 0.0) for lvl, n in self.per_level.items()}


class Aggregator:
    """Incremental, order-insensitive fold of page reports."""

    def __init__(self, rule_ids: Iterable[str] | None = None) -> None:
        ids = [d.id for d in registry()]
        if rule_ids is not None:
            wanted = set(rule_ids)
            ids = [rid for rid in ids if rid in wanted]
        self.rule_ids = ids
        self._totals = {rid: 0 for rid in ids}
        self._sites = {rid: 0 for rid in ids}
        self._hist = {rid: [0] * len(BUCKETS) for rid in ids}
        self._per_site: dict[str, dict[str, int]] = {}

    def add(self, report: PageReport) -> None:
        if report.url in self._per_site:
            raise ValueError(f"duplicate report for {report.url}")
        counts = {rid: report.totals_by_rule.get(rid, 0) for rid in self.rule_ids}
        for rid, n in counts.items():
            self._totals[rid] += n
            self._sites[rid] += n > 0
            self._hist[rid][bucket_index(n)] += 1
        self._per_site[report.url] = {rid: n for rid, n in counts.items() if n}

    def result(self) -> CorpusAggregate:
        per_level = {lvl: 0 for lvl in LEVELS}
        per_version = {ver: 0 for ver in VERSIONS}
        for rid, n in self._totals.items():
            d = descriptor(rid)
            per_level[d.level] += n
            per_version[d.wcag_version] += n
        return CorpusAggregate(
            per_rule={rid: RuleTotals(self._totals[rid], self._sites[rid]) for rid in self.rule_ids},
            per_level=per_level,
            per_version=per_version,
            per_site={url: dict(sorted(v.items(), key=lambda kv: id_key(kv[0])))
                      for url, v in sorted(self._per_site.items())},
            histogram={rid: tuple(self._hist[rid]) for rid in self.rule_ids},
        )


def aggregate(reports: Iterable[PageReport], rule_ids: Iterable[str] | None = None) -> CorpusAggregate:
    agg = Aggregator(rule_ids)
    for r in reports:
        agg.add(r)
    return agg.result()


def _csv_bytes(header: tuple[str, ...], rows: Iterable[Iterable]) -> bytes:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n", quoting=csv.QUOTE_MINIMAL)
    writer.writerow(header)
    writer.writerows(rows)
    return buf.getvalue().encode("utf-8")


def emit_aggregate_csv(agg: CorpusAggregate) -> bytes:
    rows = []
    for rid, totals in agg.per_rule.items():
        d = descriptor(rid)
        rows.append((rid, d.wcag_version, d.level, d.principle, d.title, totals.total_violations,
                     totals.websites_violating))
    return _csv_bytes(AGGREGATE_HEADER, rows)


def emit_histogram_csv(agg: CorpusAggregate) -> bytes:
    rows = [(rid, BUCKETS[i], n) for rid, counts in agg.histogram.items() for i, n in enumerate(counts)]
    return _csv_bytes(HISTOGRAM_HEADER, rows)


# -- batch output files ---------------------------------------------------

_UNSAFE = re.compile(r"[^A-Za-z0-9.-]+")


def site_filename(url: str) -> str:
    """Sanitized host plus a short hash of the full URL."""
    m = re.match(r"^[a-z][a-z0-9+.-]*://([^/?#]*)", url, re.I)
    host = m.group(1).rsplit("@", 1)[-1] if m else url
    host = _UNSAFE.sub("_", host).strip("._")[:60] or "site"
    digest = hashlib.sha256(url.encode("utf-8", "surrogateescape")).hexdigest()[:12]
    return f"{host}-{digest}.json"


@dataclass
class BatchWriter:
    """Writes one JSON per site plus an index; meant to be used as a batch sink."""

    out_dir: Path
    aggregator: Aggregator = field(default_factory=Aggregator)
    index: dict[str, str] = field(default_factory=dict)

    def __post_init__(self) -> None:
        self.out_dir = Path(self.out_dir)
        (self.out_dir / "sites").mkdir(parents=True, exist_ok=True)

    def __call__(self, result, report: PageReport) -> None:
        name = site_filename(report.url)
        (self.out_dir / "sites" / name).write_bytes(emit_json(report))
        self.index[report.url] = f"sites/{name}"
        self.aggregator.add(report)

    def finish(self, summary=None) -> CorpusAggregate:
        agg = self.aggregator.result()
        (self.out_dir / "aggregate.csv").write_bytes(emit_aggregate_csv(agg))
        (self.out_dir / "histogram.csv").write_bytes(emit_histogram_csv(agg))
        _write_json(self.out_dir / "index.json", dict(sorted(self.index.items())))
        if summary is not None:
            _write_json(self.out_dir / "summary.json", {
                "live_count": summary.live_count,
                "dead_count": summary.dead_count,
                "per_reason": summary.per_reason,
                "dead": [{"url": u, "reason": r} for u, r in summary.dead],
                "audit_failures": [{"url": u, "error": e} for u, e in summary.audit_failures],
                "total_violations": agg.grand_total,
                "by_level": agg.per_level,
                "by_version": agg.per_version,
            })
        return agg


def _write_json(path: Path, data) -> None:
    path.write_text(json.dumps(data, sort_keys=True, ensure_ascii=True, indent=2) + "\n", encoding="ascii")
