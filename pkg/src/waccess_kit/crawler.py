"""Batch fetching with bounded concurrency and per-host politeness."""

from __future__ import annotations

import asyncio
import dataclasses
import logging
import os
import re
import socket
import time
from collections import Counter
from dataclasses import dataclass, field
from datetime import datetime, timezone
from pathlib import Path
from typing import Awaitable, Callable, Iterable, Union
from urllib.parse import urlsplit, urlunsplit

import httpx

from . import __version__
from .audit import audit_html
from .dom import ParseError, parse_html
from .rules import PageReport

log = logging.getLogger(__name__)

MAX_REDIRECTS = 5
DEFAULT_TIMEOUT_MS = 20_000
DEFAULT_HOST_DELAY_MS = 0
MAX_BODY_BYTES = 20 * 1024 * 1024
DEAD_REASONS = ("dns", "connect", "timeout", "http_error", "too_many_redirects", "empty_body")


def user_agent() -> str:
    return os.environ.get("WACCESS_USER_AGENT") or f"waccess-kit-audit/{__version__}"


@dataclass(frozen=True)
class FetchResult:
    url: str
    live: bool
    http_status: int | None = None
    body: bytes = b""
    final_url: str = ""
    reason: str | None = None  # e.g. "timeout" or "http_error(404)" when dead
    elapsed_ms: int = 0
    fetched_at: datetime = field(default_factory=lambda: datetime.now(timezone.utc))
    stylesheets: tuple[tuple[str, str], ...] = ()

    @property
    def reason_kind(self) -> str | None:
        return None if self.reason is None else self.reason.split("(", 1)[0]


_SCHEME_RE = re.compile(r"^[A-Za-z][A-Za-z0-9+.-]*:(?!\d)")


def normalize_url(raw: str) -> tuple[str, bool] | None:
    """(normalized url, scheme was guessed), or None if unusable."""
    raw = raw.strip()
    if not raw:
        return None
    guessed = "://" not in raw and not _SCHEME_RE.match(raw)
    if guessed:
        raw = "https://" + raw.lstrip("/")
    try:
        parts = urlsplit(raw)
    except ValueError:
        return None
    if parts.scheme.lower() not in ("http", "https") or not parts.hostname:
        return None
    return urlunsplit((parts.scheme.lower(), parts.netloc.lower(), parts.path or "/", parts.query, "")), guessed


@dataclass(frozen=True)
class BatchPlan:
    urls: tuple[str, ...]
    concurrency: int = 8
    timeout_ms: int = DEFAULT_TIMEOUT_MS
    fetch_css: bool = False
    per_host_delay_ms: int = DEFAULT_HOST_DELAY_MS
    http_fallback: frozenset[str] = frozenset()  # urls whose scheme was guessed
    rejected: tuple[str, ...] = ()

    def __post_init__(self) -> None:
        if self.concurrency < 1:
            raise ValueError("concurrency must be >= 1")
        if self.timeout_ms < 1:
            raise ValueError("timeout_ms must be positive")
        if len(set(self.urls)) != len(self.urls):
            raise ValueError("duplicate urls in plan")

    @classmethod
    def build(cls, raw_urls: Iterable[str], **options) -> BatchPlan:
        urls: list[str] = []
        seen: set[str] = set()
        fallback: set[str] = set()
        rejected: list[str] = []
        for raw in raw_urls:
            got = normalize_url(raw)
            if got is None:
                rejected.append(raw)
                continue
            url, guessed = got
            if url in seen:
                continue
            seen.add(url)
            urls.append(url)
            if guessed:
                fallback.add(url)
        return cls(urls=tuple(urls), http_fallback=frozenset(fallback), rejected=tuple(rejected), **options)


@dataclass
class BatchSummary:
    live_count: int = 0
    dead_count: int = 0
    per_reason: dict[str, int] = field(default_factory=dict)
    dead: list[tuple[str, str]] = field(default_factory=list)
    audit_failures: list[tuple[str, str]] = field(default_factory=list)

    @property
    def total(self) -> int:
        return self.live_count + self.dead_count


def read_url_list(path: str | os.PathLike) -> list[str]:
    """One URL per line; blank lines and ``#`` comments are ignored."""
    text = Path(path).read_text(encoding="utf-8-sig")
    return [s for s in (line.strip() for line in text.splitlines()) if s and not s.startswith("#")]


def _classify(exc: BaseException) -> str:
    if isinstance(exc, (httpx.TimeoutException, asyncio.TimeoutError)):
        return "timeout"
    if isinstance(exc, httpx.TooManyRedirects):
        return "too_many_redirects"
    cause = exc
    while cause is not None:
        if isinstance(cause, socket.gaierror):
            return "dns"
        cause = cause.__cause__ or cause.__context__
    msg = str(exc).lower()
    if "name or service not known" in msg or "nodename nor servname" in msg or "getaddrinfo" in msg \
            or "name resolution" in msg:
        return "dns"
    return "connect"


def _same_origin(a: str, b: str) -> bool:
    pa, pb = urlsplit(a), urlsplit(b)
    return (pa.scheme, pa.hostname, pa.port) == (pb.scheme, pb.hostname, pb.port)


async def _read_limited(resp: httpx.Response) -> bytes:
    chunks = []
    size = 0
    async for chunk in resp.aiter_bytes():
        chunks.append(chunk)
        size += len(chunk)
        if size >= MAX_BODY_BYTES:
            break
    return b"".join(chunks)


async def _get(client: httpx.AsyncClient, url: str, timeout_s: float) -> tuple[int, bytes, str, str | None]:
    async def go():
        async with client.stream("GET", url) as resp:
            return resp.status_code, await _read_limited(resp), str(resp.url), resp.charset_encoding

    return await asyncio.wait_for(go(), timeout=timeout_s)


async def _fetch_sheets(client: httpx.AsyncClient, body: bytes, page_url: str,
                        timeout_s: float) -> tuple[tuple[str, str], ...]:
    try:
        doc = parse_html(body, page_url)
    except ParseError:
        return ()
    out = []
    for el in doc.elements:
        rel = el.attributes.get("rel", "").lower().split()
        href = el.attributes.get("href")
        if el.tag != "link" or "stylesheet" not in rel or not href:
            continue
        target = doc.resolve_url(href)
        if not _same_origin(target, page_url):
            continue
        try:
            status, data, _, charset = await _get(client, target, timeout_s)
        except (httpx.HTTPError, asyncio.TimeoutError, OSError) as exc:
            log.info("stylesheet %s failed: %s", target, _classify(exc))
            continue
        if 200 <= status < 300:
            out.append((target, data.decode(charset or "utf-8", "replace")))
    return tuple(out)


async def fetch_one_async(
    url: str,
    timeout_ms: int = DEFAULT_TIMEOUT_MS,
    fetch_css: bool = False,
    *,
    client: httpx.AsyncClient | None = None,
) -> FetchResult:
    """Fetch one page; every failure becomes a dead result, nothing raises."""
    own = client is None
    if own:
        client = make_client(timeout_ms, 1)
    timeout_s = timeout_ms / 1000.0
    started = time.monotonic()
    fetched_at = datetime.now(timezone.utc)

    def elapsed() -> int:
        return int((time.monotonic() - started) * 1000)

    try:
        try:
            status, body, final_url, _ = await _get(client, url, timeout_s)
        except (httpx.HTTPError, asyncio.TimeoutError, OSError) as exc:
            return FetchResult(url, False, reason=_classify(exc), elapsed_ms=elapsed(), fetched_at=fetched_at)
        except Exception as exc:  # malformed URLs and the like
            log.debug("fetch %s failed", url, exc_info=True)
            return FetchResult(url, False, reason=_classify(exc), elapsed_ms=elapsed(), fetched_at=fetched_at)
        if not 200 <= status <= 399:
            return FetchResult(url, False, status, final_url=final_url, reason=f"http_error({status})",
                               elapsed_ms=elapsed(), fetched_at=fetched_at)
        if not body.strip():
            return FetchResult(url, False, status, final_url=final_url, reason="empty_body",
                               elapsed_ms=elapsed(), fetched_at=fetched_at)
        sheets: tuple[tuple[str, str], ...] = ()
        if fetch_css:
            sheets = await _fetch_sheets(client, body, final_url, timeout_s)
        return FetchResult(url, True, status, body, final_url, None, elapsed(), fetched_at, sheets)
    finally:
        if own:
            await client.aclose()


def make_client(timeout_ms: int, concurrency: int) -> httpx.AsyncClient:
    limits = httpx.Limits(max_connections=concurrency, max_keepalive_connections=concurrency)
    return httpx.AsyncClient(
        follow_redirects=True,
        max_redirects=MAX_REDIRECTS,
        timeout=httpx.Timeout(timeout_ms / 1000.0),
        limits=limits,
        headers={"User-Agent": user_agent()},
        trust_env=False,
    )


def fetch_one(url: str, timeout_ms: int = DEFAULT_TIMEOUT_MS, fetch_css: bool = False) -> FetchResult:
    return asyncio.run(fetch_one_async(url, timeout_ms, fetch_css))


def audit_fetched(result: FetchResult, enabled: Iterable[str] | None = None) -> PageReport:
    sheets = dict(result.stylesheets)
    fetcher = sheets.get if result.stylesheets else None
    report = audit_html(result.body, result.final_url or result.url, fetch_css=fetcher, enabled=enabled,
                        fetched_at=result.fetched_at)
    report.url = result.url  # keyed by the requested URL; redirects may converge
    return report


Sink = Callable[[FetchResult, PageReport], Union[None, Awaitable[None]]]


class _HostGate:
    """Serializes requests per host and spaces them by ``delay_s``."""

    def __init__(self, delay_s: float) -> None:
        self.delay_s = delay_s
        self.locks: dict[str, asyncio.Lock] = {}
        self.last: dict[str, float] = {}

    def lock(self, host: str) -> asyncio.Lock:
        return self.locks.setdefault(host, asyncio.Lock())

    async def wait_turn(self, host: str) -> None:
        if host in self.last and self.delay_s > 0:
            remaining = self.last[host] + self.delay_s - time.monotonic()
            if remaining > 0:
                await asyncio.sleep(remaining)

    def done(self, host: str) -> None:
        self.last[host] = time.monotonic()


async def run_batch_async(plan: BatchPlan, sink: Sink | None = None, *,
                          enabled: Iterable[str] | None = None) -> BatchSummary:
    enabled = None if enabled is None else frozenset(enabled)
    summary = BatchSummary()
    reasons: Counter[str] = Counter()
    slots = asyncio.Semaphore(plan.concurrency)
    gate = _HostGate(plan.per_host_delay_ms / 1000.0)
    sink_lock = asyncio.Lock()

    async with make_client(plan.timeout_ms, plan.concurrency) as client:

        async def fetch(url: str) -> FetchResult:
            host = urlsplit(url).hostname or ""
            async with gate.lock(host):
                await gate.wait_turn(host)
                async with slots:
                    try:
                        return await fetch_one_async(url, plan.timeout_ms, plan.fetch_css, client=client)
                    finally:
                        gate.done(host)

        async def work(url: str) -> None:
            result = await fetch(url)
            if not result.live and result.reason == "connect" and url in plan.http_fallback:
                result = dataclasses.replace(await fetch("http://" + url.split("://", 1)[1]), url=url)
            if not result.live:
                summary.dead_count += 1
                reasons[result.reason_kind] += 1
                summary.dead.append((url, result.reason))
                return
            summary.live_count += 1
            try:
                report = await asyncio.to_thread(audit_fetched, result, enabled)
            except Exception as exc:  # ParseError or a bug: recorded, never fatal
                log.warning("audit of %s failed: %s", url, exc)
                report = PageReport(url=url, fetched_at=result.fetched_at, violations=[],
                                    parse_warnings=[f"audit failed: {type(exc).__name__}: {exc}"])
                summary.audit_failures.append((url, type(exc).__name__))
            if sink is not None:
                async with sink_lock:
                    maybe = sink(result, report)
                    if asyncio.iscoroutine(maybe):
                        await maybe

        await asyncio.gather(*(work(u) for u in plan.urls))

    summary.per_reason = dict(sorted(reasons.items()))
    summary.dead.sort()
    summary.audit_failures.sort()
    return summary


def run_batch(plan: BatchPlan, sink: Sink | None = None, *, enabled: Iterable[str] | None = None) -> BatchSummary:
    """Fetch and audit every URL in the plan, delivering each live page to ``sink`` once."""
    return asyncio.run(run_batch_async(plan, sink, enabled=enabled))
