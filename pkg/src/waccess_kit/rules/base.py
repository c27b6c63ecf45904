"""Violation/report records and helpers shared by the rule modules."""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from datetime import datetime, timezone
from typing import Callable, Sequence

from ..css import StyleDeclaration
from ..dom import DocumentModel, ElementNode, TagToken
from .registry import LEVELS, VERSIONS, descriptor, id_key

CheckFn = Callable[[DocumentModel, "Sequence[StyleDeclaration] | None"], "list[Violation]"]


@dataclass(frozen=True)
class Violation:
    rule_id: str
    message: str
    snippet: str
    fix: str
    locator: str
    severity_level: str
    offset: int = 0  # byte offset of the finding in the page (sort key)
    key: tuple = ()  # per-rule dedup identity (element or CSS rule)

    def sort_key(self) -> tuple:
        return id_key(self.rule_id), self.offset, self.locator


@dataclass
class PageReport:
    url: str
    fetched_at: datetime
    violations: list[Violation]
    skipped_rules: list[tuple[str, str]] = field(default_factory=list)
    skipped_elements: dict[str, int] = field(default_factory=dict)
    parse_warnings: list[str] = field(default_factory=list)
    totals_by_rule: dict[str, int] = field(init=False)
    totals_by_level: dict[str, int] = field(init=False)
    totals_by_version: dict[str, int] = field(init=False)

    def __post_init__(self) -> None:
        self.totals_by_rule = dict(sorted(Counter(v.rule_id for v in self.violations).items(),
                                          key=lambda kv: id_key(kv[0])))
        by_level = Counter(v.severity_level for v in self.violations)
        self.totals_by_level = {lvl: by_level.get(lvl, 0) for lvl in LEVELS}
        by_version = Counter(descriptor(v.rule_id).wcag_version for v in self.violations)
        self.totals_by_version = {ver: by_version.get(ver, 0) for ver in VERSIONS}

    @property
    def total(self) -> int:
        return len(self.violations)

    def violations_for(self, rule_id: str) -> list[Violation]:
        return [v for v in self.violations if v.rule_id == rule_id]


class _SafeFormat(dict):
    def __missing__(self, key: str) -> str:
        return "{" + key + "}"


def render_fix(rule_id: str, **values) -> str:
    template = descriptor(rule_id).fix_template
    try:
        return template.format_map(_SafeFormat(values))
    except (ValueError, TypeError):
        return template


def _fallback_snippet(doc: DocumentModel) -> str:
    head = doc.text[:80]
    return head if head else "(empty document)"


def page_snippet(doc: DocumentModel) -> tuple[str, str, int]:
    """(snippet, locator, offset) for page-level findings: the <html> tag if written."""
    el = doc.root if not doc.root.synthetic else doc.anchor_element()
    if el is None:
        return _fallback_snippet(doc), f"document @{doc.bom_length}", doc.bom_length
    return doc.snippet(el), doc.locator(el), doc.byte_offset(el)


def element_violation(rule_id: str, doc: DocumentModel, el: ElementNode, message: str, **fix_values) -> Violation:
    if el.synthetic:
        snippet, locator, offset = page_snippet(doc)
    else:
        snippet, locator, offset = doc.snippet(el), doc.locator(el), doc.byte_offset(el)
    return Violation(
        rule_id=rule_id,
        message=message,
        snippet=snippet,
        fix=render_fix(rule_id, tag=el.tag, **fix_values),
        locator=locator,
        severity_level=descriptor(rule_id).level,
        offset=offset,
        key=("at", offset),
    )


def token_violation(rule_id: str, doc: DocumentModel, tok: TagToken, message: str, **fix_values) -> Violation:
    return Violation(
        rule_id=rule_id,
        message=message,
        snippet=doc.text[tok.char_offset:tok.char_end],
        fix=render_fix(rule_id, tag=tok.tag, **fix_values),
        locator=f"{'/' if tok.kind == 'close' else ''}{tok.tag} @{tok.byte_offset}",
        severity_level=descriptor(rule_id).level,
        offset=tok.byte_offset,
        key=("at", tok.byte_offset),
    )


def page_violation(rule_id: str, doc: DocumentModel, message: str, **fix_values) -> Violation:
    snippet, locator, offset = page_snippet(doc)
    return Violation(
        rule_id=rule_id,
        message=message,
        snippet=snippet,
        fix=render_fix(rule_id, **fix_values),
        locator=locator,
        severity_level=descriptor(rule_id).level,
        offset=offset,
        key=("page",),
    )


def css_violation(rule_id: str, doc: DocumentModel, decl: StyleDeclaration, message: str, **fix_values) -> Violation:
    if decl.origin:
        # external sheet: sort after everything in the page itself
        offset = len(doc.raw_bytes) + decl.offset
        where = decl.origin
    else:
        offset = doc.char_to_byte(decl.offset)
        where = "style"
    return Violation(
        rule_id=rule_id,
        message=message,
        snippet=decl.rule_text or decl.selector.text,
        fix=render_fix(rule_id, **fix_values),
        locator=f"{where} {{{decl.selector.text}}} @{offset}",
        severity_level=descriptor(rule_id).level,
        offset=offset,
        key=("css", decl.origin, decl.offset),
    )


# -- element predicates ----------------------------------------------------

NATIVE_CONTROLS = frozenset({"button", "input", "select", "textarea"})
_BUTTONISH_ROLES = frozenset({"button", "link", "menuitem", "tab", "checkbox", "radio", "switch", "option"})


def attr_lower(el: ElementNode, name: str) -> str:
    return el.attributes.get(name, "").strip().lower()


def input_type(el: ElementNode) -> str:
    return attr_lower(el, "type") or "text"


def roles(el: ElementNode) -> set[str]:
    return set(attr_lower(el, "role").split())


def tabindex(el: ElementNode) -> int | None:
    raw = el.attributes.get("tabindex")
    if raw is None:
        return None
    try:
        return int(raw.strip())
    except ValueError:
        return None


def natively_focusable(el: ElementNode) -> bool:
    tag = el.tag
    if tag in ("a", "area"):
        return "href" in el.attributes
    if tag in NATIVE_CONTROLS:
        if "disabled" in el.attributes:
            return False
        return not (tag == "input" and input_type(el) == "hidden")
    if tag in ("summary", "iframe", "embed", "object", "audio", "video"):
        return tag not in ("audio", "video") or "controls" in el.attributes
    ce = el.attributes.get("contenteditable")
    return ce is not None and ce.strip().lower() != "false"


def focusable(el: ElementNode) -> bool:
    if el.synthetic:
        return False
    if natively_focusable(el):
        return True
    ti = tabindex(el)
    return ti is not None and ti >= 0


def interactive_target(el: ElementNode) -> bool:
    """Pointer targets for the target-size rules."""
    if el.synthetic or el.tag in ("iframe", "embed", "object", "audio", "video"):
        return False
    return natively_focusable(el) or bool(roles(el) & _BUTTONISH_ROLES)


def nearest(el: ElementNode, tags: set[str] | frozenset[str]) -> ElementNode | None:
    for anc in el.ancestors():
        if anc.tag in tags:
            return anc
    return None


def dedupe(violations: list[Violation]) -> list[Violation]:
    seen: set[tuple] = set()
    out = []
    for v in violations:
        k = (v.rule_id, v.key or (v.locator,))
        if k in seen:
            continue
        seen.add(k)
        out.append(v)
    return out


def now_utc() -> datetime:
    return datetime.now(timezone.utc)


CHECKS: dict[str, CheckFn] = {}


def check(rule_id: str) -> Callable[[CheckFn], CheckFn]:
    def register(fn: CheckFn) -> CheckFn:
        CHECKS[rule_id] = fn
        return fn

    return register
