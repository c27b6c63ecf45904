"""ARIA and programmatic-purpose checks: 1.3.5, 1.3.6, 2.5.3, 3.3.7, 4.1.3."""

from __future__ import annotations

import re
from collections import defaultdict

from ..dom import ElementNode, accessible_name, labelledby_text, normalize_ws, visible_label_text
from ..style import get_resolver
from .base import NATIVE_CONTROLS, attr_lower, check, element_violation, input_type, roles
from .registry import INPUT_PURPOSE_KEYWORDS

_PURPOSE_TYPES = {"email": "email", "tel": "tel", "url": "url", "password": "current-password"}
_KEYWORD_TOKENS = {
    "name": "name", "fname": "given-name", "lname": "family-name", "email": "email", "phone": "tel",
    "tel": "tel", "address": "street-address", "city": "address-level2", "zip": "postal-code",
    "postal": "postal-code", "country": "country", "cc-number": "cc-number", "bday": "bday",
}
_NO_PURPOSE_TYPES = frozenset({"hidden", "submit", "reset", "button", "image", "checkbox", "radio", "file",
                               "range", "color"})
_SPLIT_RE = re.compile(r"[\s_.\[\]-]+")


def _purpose_keyword(value: str) -> str | None:
    value = value.strip().lower()
    if not value:
        return None
    if value in INPUT_PURPOSE_KEYWORDS:
        return value
    for part in _SPLIT_RE.split(value):
        if part in INPUT_PURPOSE_KEYWORDS:
            return part
    return None


@check("1.3.5")
def check_1_3_5(doc, styles):
    out = []
    for el in doc.elements:
        if el.tag != "input" or el.synthetic or "autocomplete" in el.attributes:
            continue
        kind = input_type(el)
        if kind in _NO_PURPOSE_TYPES:
            continue
        if kind in _PURPOSE_TYPES:
            what, token = kind, _PURPOSE_TYPES[kind]
        else:
            kw = _purpose_keyword(el.attributes.get("name", "")) or _purpose_keyword(el.attributes.get("id", ""))
            if kw is None:
                continue
            what, token = kw, _KEYWORD_TOKENS.get(kw, kw)
        out.append(element_violation("1.3.5", doc, el, f"{what} input has no autocomplete attribute",
                                     token=token, what=what))
    return out


_LANDMARK_TAGS = {"nav": "navigation", "main": "main", "aside": "complementary",
                  "header": "banner", "footer": "contentinfo"}
_LANDMARK_ROLES = frozenset(_LANDMARK_TAGS.values())
_SECTIONING = frozenset({"article", "aside", "main", "nav", "section"})


def _landmark(el: ElementNode) -> str | None:
    explicit = roles(el) & _LANDMARK_ROLES
    if explicit:
        return sorted(explicit)[0]
    if el.tag in ("header", "footer"):
        # only page-level header/footer map to banner/contentinfo
        if any(anc.tag in _SECTIONING for anc in el.ancestors()):
            return None
    return _LANDMARK_TAGS.get(el.tag)


def _has_label(el: ElementNode) -> bool:
    a = el.attributes
    return bool(normalize_ws(a.get("aria-label", "")) or a.get("aria-labelledby", "").strip())


@check("1.3.6")
def check_1_3_6(doc, styles):
    out = []
    unlabelled: dict[str, list[ElementNode]] = defaultdict(list)
    for el in doc.elements:
        if el.synthetic:
            continue
        if el.tag == "iframe" and not normalize_ws(el.attributes.get("title", "")):
            out.append(element_violation("1.3.6", doc, el, "<iframe> has no title",
                                         fix="Add a title attribute describing the frame's content."))
            continue
        kind = _landmark(el)
        if kind is not None and not _has_label(el):
            unlabelled[kind].append(el)
    for kind, items in unlabelled.items():
        for el in items[1:]:
            out.append(element_violation(
                "1.3.6", doc, el, f"several unlabelled {kind} landmarks cannot be told apart",
                fix=f"Give each {kind} landmark a distinct aria-label (e.g. aria-label=\"Main menu\").",
            ))
    return out


_NAMED_ROLES = frozenset({"button", "link", "menuitem", "tab", "checkbox", "radio", "switch", "option"})


def _label_in_name_candidate(el: ElementNode) -> bool:
    if el.synthetic:
        return False
    if el.tag in ("button", "a") or roles(el) & _NAMED_ROLES:
        return True
    return el.tag == "input" and input_type(el) in ("submit", "button", "reset")


@check("2.5.3")
def check_2_5_3(doc, styles):
    res = get_resolver(doc, styles)
    out = []
    for el in doc.elements:
        if not _label_in_name_candidate(el):
            continue
        a = el.attributes
        name = normalize_ws(a.get("aria-label", ""))
        if not name and "aria-labelledby" in a:
            name = labelledby_text(el, doc)
        if not name:
            continue
        if el.tag == "input":
            visible = normalize_ws(a.get("value", ""))
        else:
            visible = visible_label_text(el, lambda n: res.style(n).self_hidden)
        if visible and visible.lower() not in name.lower():
            out.append(element_violation(
                "2.5.3", doc, el, f"accessible name {name!r} does not contain the visible label {visible!r}",
                visible=visible,
            ))
    return out


_RECOVERY_RE = re.compile(r"(forgot|forgotten|reset).{0,20}password", re.I)


def _recovery_control(el: ElementNode, doc) -> bool:
    if el.tag in ("a", "button") or roles(el) & {"link", "button"} or (
            el.tag == "input" and input_type(el) in ("submit", "button")):
        return _RECOVERY_RE.search(accessible_name(el, doc)) is not None
    return False


@check("3.3.7")
def check_3_3_7(doc, styles):
    groups: dict[int, list[ElementNode]] = {}
    owners: dict[int, ElementNode | None] = {}
    for el in doc.elements:
        if el.tag == "input" and input_type(el) == "password":
            form = next((anc for anc in el.ancestors() if anc.tag == "form"), None)
            key = form.node_id if form is not None else -1
            groups.setdefault(key, []).append(el)
            owners.setdefault(key, form)
    if not groups or any(_recovery_control(el, doc) for el in doc.elements):
        return []
    out = []
    for key, fields in groups.items():
        if any("current-password" in attr_lower(f, "autocomplete").split() for f in fields):
            continue
        anchor = owners[key] if owners[key] is not None and not owners[key].synthetic else fields[0]
        out.append(element_violation(
            "3.3.7", doc, anchor, "password login offers no recovery link and blocks password managers",
        ))
    return out


_STATUS_RE = re.compile(r"(alert|status|toast|notification|message)", re.I)
_LIVE_ROLES = frozenset({"status", "alert", "log"})
_NOT_CONTAINERS = NATIVE_CONTROLS | {"a", "label", "option", "script", "style", "template", "form", "img",
                                     "html", "head", "body", "meta", "link"}


def _live(el: ElementNode) -> bool:
    live = attr_lower(el, "aria-live")
    return bool(roles(el) & _LIVE_ROLES) or (live not in ("", "off"))


@check("4.1.3")
def check_4_1_3(doc, styles):
    out = []
    matched: set[int] = set()
    for el in doc.elements:
        if el.synthetic or el.tag in _NOT_CONTAINERS:
            continue
        m = _STATUS_RE.search(el.attributes.get("class", "")) or _STATUS_RE.search(el.attributes.get("id", ""))
        if m is None:
            continue
        matched.add(el.node_id)
        if _live(el):
            continue
        # inside an already-announced or already-reported region
        if any(_live(anc) or anc.node_id in matched for anc in el.ancestors()):
            continue
        word = m.group(1).lower()
        out.append(element_violation("4.1.3", doc, el, f"{word} container is not a live region", what=word))
    return out
