"""Command-line entry point: ``waccess check|batch|rules``."""

from __future__ import annotations

import argparse
import json
import logging
import sys
from pathlib import Path
from typing import Sequence
from urllib.parse import urlsplit
from urllib.request import url2pathname

from . import __version__
from .audit import audit_html
from .crawler import DEFAULT_TIMEOUT_MS, BatchPlan, audit_fetched, fetch_one, read_url_list, run_batch
from .dom import ParseError
from .reporting import Aggregator, BatchWriter, emit_json, render_console
from .rules import registry, rule_ids

EXIT_OK, EXIT_VIOLATIONS, EXIT_FAILURE = 0, 1, 2

log = logging.getLogger("waccess_kit")


def _rules_arg(text: str) -> frozenset[str]:
    ids = {p.strip() for p in text.split(",") if p.strip()}
    unknown = sorted(ids - set(rule_ids()))
    if unknown:
        raise argparse.ArgumentTypeError(f"unknown rule id(s): {', '.join(unknown)}")
    if not ids:
        raise argparse.ArgumentTypeError("empty rule list")
    return frozenset(ids)


def _timeout_arg(text: str) -> int:
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError("timeout must be an integer number of milliseconds") from None
    if value < 1000:
        raise argparse.ArgumentTypeError("timeout must be at least 1000 ms")
    return value


def _positive_int(text: str) -> int:
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError("expected an integer") from None
    if value < 1:
        raise argparse.ArgumentTypeError("must be at least 1")
    return value


def _non_negative_int(text: str) -> int:
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError("expected an integer") from None
    if value < 0:
        raise argparse.ArgumentTypeError("must not be negative")
    return value


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="waccess", description="Static WCAG 2.0/2.1/2.2 accessibility auditor.")
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    p.add_argument("-v", "--verbose", action="store_true", help="log diagnostics to stderr")
    sub = p.add_subparsers(dest="command", required=True)

    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--rules", type=_rules_arg, help="comma-separated rule ids to run (default: all)")
    common.add_argument("--fetch-css", action="store_true", help="also load <link rel=stylesheet> sheets")
    common.add_argument("--timeout", type=_timeout_arg, default=DEFAULT_TIMEOUT_MS, metavar="MS",
                        help="per-request timeout in milliseconds (>= 1000)")

    c = sub.add_parser("check", parents=[common], help="audit one URL or local HTML file")
    c.add_argument("input", help="http(s) URL or path to an HTML file")
    c.add_argument("--format", choices=("console", "json"), default="console")
    c.add_argument("--out", type=Path, help="write the report here instead of stdout")
    c.add_argument("--fail-on-violations", action="store_true", help="exit 1 when any violation is found")

    b = sub.add_parser("batch", parents=[common], help="crawl and audit a URL list")
    b.add_argument("input", type=Path, help="UTF-8 file, one URL per line")
    b.add_argument("--out", type=Path, required=True, help="output directory")
    b.add_argument("--concurrency", type=_positive_int, default=8)
    b.add_argument("--delay", type=_non_negative_int, default=0, metavar="MS", help="per-host delay between requests")
    b.add_argument("--format", choices=("console", "json"), default="console", help="summary format on stdout")

    r = sub.add_parser("rules", help="list the rule catalog")
    r.add_argument("--version", dest="wcag_version", choices=("2.0", "2.1", "2.2"))
    r.add_argument("--level", choices=("A", "AA", "AAA"))
    r.add_argument("--format", choices=("console", "json"), default="console")
    return p


def _is_url(text: str) -> bool:
    return urlsplit(text).scheme.lower() in ("http", "https")


def _local_css_fetcher(refused: list[str]):
    def fetch(url: str) -> str | None:
        parts = urlsplit(url)
        if parts.scheme != "file":
            refused.append(url)
            return None
        try:
            return Path(url2pathname(parts.path)).read_text(encoding="utf-8", errors="replace")
        except OSError:
            return None

    return fetch


def cmd_check(args) -> int:
    if _is_url(args.input):
        result = fetch_one(args.input, args.timeout, args.fetch_css)
        if not result.live:
            print(f"error: {args.input} is dead: {result.reason}", file=sys.stderr)
            return EXIT_FAILURE
        report = audit_fetched(result, args.rules)
    else:
        path = Path(args.input)
        try:
            data = path.read_bytes()
        except OSError as exc:
            print(f"error: cannot read {path}: {exc.strerror or exc}", file=sys.stderr)
            return EXIT_FAILURE
        refused: list[str] = []
        fetcher = _local_css_fetcher(refused) if args.fetch_css else None
        try:
            report = audit_html(data, path.resolve().as_uri(), fetch_css=fetcher, enabled=args.rules)
        except ParseError as exc:
            print(f"error: cannot parse {path}: {exc}", file=sys.stderr)
            return EXIT_FAILURE
        for url in refused:
            print(f"warning: remote stylesheet not fetched for a local file: {url}", file=sys.stderr)

    if args.format == "json":
        payload = emit_json(report)
    else:
        payload = render_console(report).encode("utf-8", "surrogateescape")
    if args.out is not None:
        args.out.parent.mkdir(parents=True, exist_ok=True)
        args.out.write_bytes(payload)
    else:
        sys.stdout.flush()
        sys.stdout.buffer.write(payload)
        sys.stdout.flush()
    if args.fail_on_violations and report.total > 0:
        return EXIT_VIOLATIONS
    return EXIT_OK


def cmd_batch(args) -> int:
    try:
        urls = read_url_list(args.input)
    except (OSError, UnicodeDecodeError) as exc:
        print(f"error: cannot read URL list {args.input}: {exc}", file=sys.stderr)
        return EXIT_FAILURE
    plan = BatchPlan.build(urls, concurrency=args.concurrency, timeout_ms=args.timeout,
                           fetch_css=args.fetch_css, per_host_delay_ms=args.delay)
    for raw in plan.rejected:
        print(f"warning: skipping unusable URL {raw!r}", file=sys.stderr)
    writer = BatchWriter(args.out, aggregator=Aggregator(args.rules))
    summary = run_batch(plan, writer, enabled=args.rules)
    agg = writer.finish(summary)
    if args.format == "json":
        print(json.dumps({"live_count": summary.live_count, "dead_count": summary.dead_count,
                          "per_reason": summary.per_reason, "total_violations": agg.grand_total},
                         sort_keys=True))
    else:
        print(f"live: {summary.live_count}, dead: {summary.dead_count}")
        for reason, n in summary.per_reason.items():
            print(f"  {reason}: {n}")
        print(f"violations: {agg.grand_total} ("
              + ", ".join(f"{lvl}: {n}" for lvl, n in agg.per_level.items()) + ")")
        print(f"reports written to {args.out}")
    return EXIT_OK


def cmd_rules(args) -> int:
    rows = [d for d in registry()
            if (args.wcag_version is None or d.wcag_version == args.wcag_version)
            and (args.level is None or d.level == args.level)]
    if args.format == "json":
        print(json.dumps([{"id": d.id, "version": d.wcag_version, "level": d.level, "principle": d.principle,
                           "title": d.title, "class": d.rule_class} for d in rows], indent=2))
        return EXIT_OK
    print(f"{'id':<8}{'version':<9}{'level':<7}{'principle':<16}{'class':<16}title")
    for d in rows:
        print(f"{d.id:<8}{d.wcag_version:<9}{d.level:<7}{d.principle:<16}{d.rule_class:<16}{d.title}")
    return EXIT_OK


COMMANDS = {"check": cmd_check, "batch": cmd_batch, "rules": cmd_rules}


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s", stream=sys.stderr)
    return COMMANDS[args.command](args)


if __name__ == "__main__":
    sys.exit(main())
