"""Markup checks: 1.1.1, 1.3.1, 1.4.4, 2.4.4, 2.4.6, 2.4.13, 3.1.1, 3.3.2, 4.1.1."""

from __future__ import annotations

import re
from collections import defaultdict

from ..dom import VOID_ELEMENTS, ElementNode, accessible_name, labelledby_text, normalize_ws
from ..style import get_resolver
from .base import Violation, attr_lower, check, element_violation, input_type, page_violation, roles, token_violation

_LANG_RE = re.compile(r"^[A-Za-z]{2,3}(-([A-Za-z]{2}|[0-9]{3}))?$")
_HEADING_LEVEL = {f"h{i}": i for i in range(1, 7)}
_UNLABELLED_INPUT_TYPES = frozenset({"hidden", "submit", "reset", "button", "image"})


def _has_text_alternative(el: ElementNode) -> bool:
    a = el.attributes
    if normalize_ws(a.get("aria-label", "")) or normalize_ws(a.get("title", "")):
        return True
    if "aria-labelledby" in a and a["aria-labelledby"].strip():
        return True
    return bool(normalize_ws(el.text_content()))


@check("1.1.1")
def check_1_1_1(doc, styles):
    out = []
    for el in doc.elements:
        tag = el.tag
        if tag in ("img", "area") or (tag == "input" and input_type(el) == "image"):
            if "alt" not in el.attributes:
                out.append(element_violation("1.1.1", doc, el, f"<{tag}> has no alt attribute",
                                             how='an alt attribute'))
        elif tag in ("object", "embed") and not el.synthetic:
            if not _has_text_alternative(el):
                out.append(element_violation("1.1.1", doc, el, f"<{tag}> has no text alternative",
                                             how="fallback text, title or aria-label"))
    return out


def _owned(table: ElementNode, tag: str) -> list[ElementNode]:
    """Descendants with ``tag`` whose nearest table is ``table`` (skips nested tables)."""
    found = []
    stack = list(reversed(table.element_children))
    while stack:
        el = stack.pop()
        if el.tag == "table":
            continue
        if el.tag == tag:
            found.append(el)
        stack.extend(reversed(el.element_children))
    return found


@check("1.3.1")
def check_1_3_1(doc, styles):
    out = []
    for el in doc.elements:
        if el.tag == "table":
            if roles(el) & {"presentation", "none"}:
                continue
            rows = _owned(el, "tr")
            cols = max((sum(1 for c in r.element_children if c.tag in ("td", "th")) for r in rows), default=0)
            if len(rows) < 2 or cols < 2:
                continue
            cells = _owned(el, "th") + _owned(el, "td")
            if any(c.tag == "th" or "scope" in c.attributes for c in cells):
                continue
            out.append(element_violation(
                "1.3.1", doc, el, f"data table ({len(rows)}x{cols}) has no header cells",
                fix="Mark header cells with <th> (and scope=\"col\"/\"row\") so the table structure is exposed.",
            ))
        elif el.tag == "fieldset" and not el.synthetic:
            if not any(c.tag == "legend" for c in el.element_children):
                out.append(element_violation(
                    "1.3.1", doc, el, "<fieldset> has no <legend>",
                    fix="Add a <legend> as the first child of the <fieldset> to name the group.",
                ))
    return out


_PRESENTATIONAL = {"b": "<strong>", "i": "<em>", "font": "a <span> with"}


@check("1.4.4")
def check_1_4_4(doc, styles):
    return [
        element_violation("1.4.4", doc, el, f"presentational <{el.tag}> element",
                          replacement=_PRESENTATIONAL[el.tag])
        for el in doc.elements
        if el.tag in _PRESENTATIONAL and not el.synthetic
    ]


@check("2.4.4")
def check_2_4_4(doc, styles):
    out = []
    groups: dict[str, list[tuple[ElementNode, str]]] = defaultdict(list)
    for el in doc.elements:
        if el.tag != "a" or "href" not in el.attributes or el.synthetic:
            continue
        name = accessible_name(el, doc)
        if not name:
            out.append(element_violation(
                "2.4.4", doc, el, "link has no accessible name",
                fix="Give the link text content, an aria-label, or alt text on its image.",
            ))
            continue
        groups[name.lower()].append((el, doc.resolve_url(el.attributes["href"])))
    for name, links in groups.items():
        first_href = links[0][1]
        for el, href in links[1:]:
            if href != first_href:
                out.append(element_violation(
                    "2.4.4", doc, el, f"link text {name!r} is reused for a different destination",
                    fix="Make the link text unique to its destination, e.g. add the target's topic.",
                ))
    return out


@check("2.4.6")
def check_2_4_6(doc, styles):
    headings = [el for el in doc.elements if el.tag in _HEADING_LEVEL and not el.synthetic]
    if not headings:
        return [page_violation("2.4.6", doc, "page has no headings",
                               fix="Structure the page with headings, starting with one <h1>.")]
    first = headings[0]
    if first.tag != "h1":
        return [element_violation("2.4.6", doc, first, f"first heading is <{first.tag}>, not <h1>",
                                  fix=f"Start the heading outline with <h1> instead of <{first.tag}>.")]
    for prev, cur in zip(headings, headings[1:]):
        a, b = _HEADING_LEVEL[prev.tag], _HEADING_LEVEL[cur.tag]
        if b > a + 1:
            return [element_violation(
                "2.4.6", doc, cur, f"heading level skips from <{prev.tag}> to <{cur.tag}>",
                fix=f"Use <h{a + 1}> here (or add the missing level) so the outline does not skip levels.",
            )]
    return []


@check("3.1.1")
def check_3_1_1(doc, styles):
    root = doc.root
    lang = None if root.synthetic else root.attributes.get("lang")
    if lang is None:
        return [page_violation("3.1.1", doc, "<html> has no lang attribute", current="")]
    value = lang.strip()
    if not _LANG_RE.match(value):
        return [page_violation("3.1.1", doc, f"lang={value!r} is not a valid language code",
                               current=f" (now lang=\"{value}\")")]
    return []


def _labelled(el: ElementNode, doc, label_targets: set[str]) -> bool:
    a = el.attributes
    if el.id and el.id in label_targets:
        return True
    if any(anc.tag == "label" for anc in el.ancestors()):
        return True
    if normalize_ws(a.get("aria-label", "")) or normalize_ws(a.get("title", "")):
        return True
    return "aria-labelledby" in a and bool(labelledby_text(el, doc))


@check("3.3.2")
def check_3_3_2(doc, styles):
    label_targets = {el.attributes["for"] for el in doc.elements if el.tag == "label" and "for" in el.attributes}
    out = []
    for el in doc.elements:
        if el.synthetic:
            continue
        if el.tag == "input":
            if input_type(el) in _UNLABELLED_INPUT_TYPES:
                continue
        elif el.tag not in ("select", "textarea"):
            continue
        if not _labelled(el, doc, label_targets):
            out.append(element_violation("3.3.2", doc, el, f"<{el.tag}> has no label", id=el.id or "field-id"))
    return out


@check("4.1.1")
def check_4_1_1(doc, styles):
    out: list[Violation] = []
    stack = []
    for tok in doc.token_log:
        if tok.kind == "open":
            if tok.tag not in VOID_ELEMENTS:
                stack.append(tok)
        elif tok.kind == "close":
            for i in range(len(stack) - 1, -1, -1):
                if stack[i].tag == tok.tag:
                    for orphan in stack[i + 1:]:
                        out.append(_unclosed(doc, orphan))
                    del stack[i:]
                    break
            else:
                out.append(token_violation(
                    "4.1.1", doc, tok, f"</{tok.tag}> has no matching opening tag",
                    fix=f"Remove the stray </{tok.tag}> or add the missing <{tok.tag}>.",
                ))
    out.extend(_unclosed(doc, tok) for tok in stack)

    first_seen: dict[str, ElementNode] = {}
    for el in doc.elements:
        ident = el.attributes.get("id")
        if el.synthetic or ident is None or not ident.strip():
            continue
        if ident in first_seen:
            out.append(element_violation(
                "4.1.1", doc, el, f"duplicate id {ident!r}",
                fix=f"Give this element a unique id; {ident!r} is already used earlier in the page.",
            ))
        else:
            first_seen[ident] = el
    return out


def _unclosed(doc, tok) -> Violation:
    return token_violation("4.1.1", doc, tok, f"<{tok.tag}> is never closed",
                           fix=f"Add the closing </{tok.tag}> tag.")


def _pagebreak_marker(el: ElementNode) -> bool:
    return "doc-pagebreak" in roles(el) or "pagebreak" in attr_lower(el, "epub:type").split()


@check("2.4.13")
def check_2_4_13(doc, styles):
    res = get_resolver(doc, styles)
    out = []
    for el in doc.elements:
        if el.synthetic or (el.id or "").strip():
            continue
        if _pagebreak_marker(el):
            out.append(element_violation("2.4.13", doc, el, "page-break marker has no id"))
        elif not (el.attributes.get("name") or "").strip() and res.style(el).page_break:
            out.append(element_violation("2.4.13", doc, el, "CSS page break on an element without an id"))
    return out
