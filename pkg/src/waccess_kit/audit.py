"""Glue from raw page bytes to a PageReport: parse, gather styles, evaluate."""

from __future__ import annotations

import dataclasses
import logging
from datetime import datetime
from typing import Callable, Iterable

from .css import APPLIED_MEDIA, StyleDeclaration, parse_css
from .dom import DocumentModel, TextNode, parse_html
from .rules import PageReport, evaluate_page

log = logging.getLogger(__name__)

# Returns the sheet text for an absolute URL, or None when unavailable.
CssFetcher = Callable[[str], "str | None"]


def _media_of(attr: str | None) -> str:
    if attr is None:
        return ""
    q = " ".join(attr.lower().split())
    if any(part.strip() in APPLIED_MEDIA for part in q.split(",")):
        return ""
    return q


def _with_media(decls: list[StyleDeclaration], media: str) -> list[StyleDeclaration]:
    if not media:
        return decls
    return [dataclasses.replace(d, media=media) if d.media == "" else d for d in decls]


def _is_stylesheet_link(el) -> bool:
    rel = el.attributes.get("rel", "").lower().split()
    return el.tag == "link" and "stylesheet" in rel and "alternate" not in rel and bool(el.attributes.get("href"))


def collect_styles(
    doc: DocumentModel,
    *,
    fetch_css: CssFetcher | None = None,
    extra_css: Iterable[tuple[str, str]] = (),
) -> tuple[list[StyleDeclaration], int]:
    """Declarations from ``<style>`` blocks, optional linked sheets and extra sheets.

    Returns (declarations, skipped construct count). Source order runs across
    all sheets in document order; ``extra_css`` items are (origin, text) and
    come last.
    """
    decls: list[StyleDeclaration] = []
    skipped = 0
    for el in doc.elements:
        if el.tag == "style" and el.char_span is not None:
            text = "".join(c.data for c in el.children if isinstance(c, TextNode))
            parsed = parse_css(text, base_offset=el.char_span[1], start_order=len(decls))
        elif fetch_css is not None and _is_stylesheet_link(el):
            url = doc.resolve_url(el.attributes["href"])
            body = fetch_css(url)
            if body is None:
                doc.warn(f"stylesheet not loaded: {url}")
                continue
            parsed = parse_css(body, origin=url, start_order=len(decls))
        else:
            continue
        decls.extend(_with_media(parsed.declarations, _media_of(el.attributes.get("media"))))
        skipped += parsed.skipped
    for origin, text in extra_css:
        parsed = parse_css(text, origin=origin or "extra.css", start_order=len(decls))
        decls.extend(parsed.declarations)
        skipped += parsed.skipped
    return decls, skipped


def audit_document(
    doc: DocumentModel,
    *,
    fetch_css: CssFetcher | None = None,
    extra_css: Iterable[tuple[str, str]] = (),
    enabled: Iterable[str] | None = None,
    fetched_at: datetime | None = None,
    use_styles: bool = True,
) -> PageReport:
    styles = None
    if use_styles:
        styles, skipped = collect_styles(doc, fetch_css=fetch_css, extra_css=extra_css)
        if skipped:
            log.debug("%s: %d CSS constructs skipped", doc.url, skipped)
    return evaluate_page(doc, styles, enabled, fetched_at=fetched_at)


def audit_html(
    data: bytes | str,
    url: str = "",
    *,
    fetch_css: CssFetcher | None = None,
    extra_css: Iterable[tuple[str, str]] = (),
    enabled: Iterable[str] | None = None,
    fetched_at: datetime | None = None,
    encoding: str | None = None,
) -> PageReport:
    """Parse and audit one page. Raises ParseError only for empty input."""
    doc = parse_html(data, url, encoding=encoding)
    return audit_document(doc, fetch_css=fetch_css, extra_css=extra_css, enabled=enabled, fetched_at=fetched_at)
