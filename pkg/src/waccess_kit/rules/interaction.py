"""Interaction checks: 1.4.13, 2.1.1, 2.1.4, 2.2.2, 2.3.3, 2.5.5, 2.5.7, 2.5.8, 3.2.7."""

from __future__ import annotations

from ..css import parse_time_s
from ..dom import ElementNode, normalize_ws
from ..selectors import FOCUS, HOVER
from ..style import get_resolver
from .base import (check, css_violation, element_violation, focusable, input_type, interactive_target,
                   natively_focusable, roles)
from .registry import THRESHOLDS

_MOUSE_HANDLERS = ("onclick", "onmousedown", "onmouseup")
_KEY_HANDLERS = ("onkeydown", "onkeypress", "onkeyup")


@check("2.1.1")
def check_2_1_1(doc, styles):
    out = []
    for el in doc.elements:
        handler = next((h for h in _MOUSE_HANDLERS if h in el.attributes), None)
        if handler is None or el.synthetic:
            continue
        if natively_focusable(el) or "tabindex" in el.attributes:
            continue
        if any(k in el.attributes for k in _KEY_HANDLERS):
            continue
        out.append(element_violation("2.1.1", doc, el, f"<{el.tag}> reacts to {handler} but cannot be reached by keyboard",
                                     handler=handler))
    return out


@check("2.1.4")
def check_2_1_4(doc, styles):
    out = []
    for el in doc.elements:
        key = el.attributes.get("accesskey")
        if key is None or el.synthetic:
            continue
        if len(key) == 1 and key.isprintable() and not key.isspace():
            out.append(element_violation("2.1.4", doc, el, f"single-character shortcut accesskey={key!r}", key=key))
    return out


@check("2.2.2")
def check_2_2_2(doc, styles):
    res = get_resolver(doc, styles)
    out = []
    for el in doc.elements:
        if el.synthetic:
            continue
        tag = el.tag
        if tag in ("marquee", "blink"):
            out.append(element_violation("2.2.2", doc, el, f"<{tag}> moves or blinks with no way to stop it",
                                         fix=f"Replace <{tag}> with static content."))
        elif tag in ("audio", "video") and "autoplay" in el.attributes and "controls" not in el.attributes:
            out.append(element_violation("2.2.2", doc, el, f"autoplaying <{tag}> has no controls",
                                         fix=f"Add the controls attribute or remove autoplay from the <{tag}>."))
        else:
            st = res.style(el)
            if st.animation_infinite and not st.hidden and normalize_ws(el.text_content()):
                out.append(element_violation(
                    "2.2.2", doc, el, "text runs an infinite CSS animation",
                    fix="Limit animation-iteration-count or offer a pause control for the animated text.",
                ))
    return out


def _max_seconds(value: str | None) -> float:
    if not value:
        return 0.0
    times = [parse_time_s(part) for part in value.split(",")]
    return max((t for t in times if t is not None), default=0.0)


@check("2.3.3")
def check_2_3_3(doc, styles):
    sheets = list(styles or ())
    if any("prefers-reduced-motion" in d.media for d in sheets):
        return []
    limit = THRESHOLDS["interaction_animation_s"]
    out = []
    for d in sheets:
        if not d.applies or d.pseudo not in (HOVER, FOCUS):
            continue
        props = d.properties
        seconds = _max_seconds(props.get("transition-duration"))
        if props.get("animation-name", "") not in ("", "none") or "animation-duration" in props:
            seconds = max(seconds, _max_seconds(props.get("animation-duration")))
        if seconds > limit:
            out.append(css_violation("2.3.3", doc, d, f":{d.pseudo} motion lasts {seconds:g}s with no reduced-motion "
                                                      "alternative", seconds=seconds))
    return out


def _target_sizes(rule_id: str, doc, styles, need: float):
    res = get_resolver(doc, styles)
    out, skipped = [], 0
    for el in doc.elements:
        if not interactive_target(el):
            continue
        st = res.style(el)
        if st.hidden:
            continue
        if st.box_size_px is None:
            skipped += 1
            continue
        w, h = st.box_size_px
        if w < need or h < need:
            out.append(element_violation(rule_id, doc, el, f"target is {w:g}x{h:g} px, below {need:g}x{need:g}",
                                         need=need, w=w, h=h))
    return out, skipped


@check("2.5.5")
def check_2_5_5(doc, styles):
    return _target_sizes("2.5.5", doc, styles, THRESHOLDS["target_size_aaa_px"])[0]


@check("2.5.8")
def check_2_5_8(doc, styles):
    return _target_sizes("2.5.8", doc, styles, THRESHOLDS["target_size_aa_px"])[0]


def indeterminate_targets(doc, styles) -> int:
    """Interactive elements whose size cannot be computed statically."""
    return _target_sizes("2.5.8", doc, styles, THRESHOLDS["target_size_aa_px"])[1]


def _is_button(el: ElementNode) -> bool:
    return el.tag == "button" or "button" in roles(el) or (
        el.tag == "input" and input_type(el) in ("button", "submit"))


@check("2.5.7")
def check_2_5_7(doc, styles):
    out = []
    for el in doc.elements:
        a = el.attributes
        draggable = a.get("draggable", "").strip().lower() == "true" or "ondragstart" in a or "ondrop" in a
        if not draggable or el.synthetic:
            continue
        if "onclick" in a or "onkeydown" in a:
            continue
        if el.parent is not None and any(_is_button(s) for s in el.parent.element_children if s is not el):
            continue
        out.append(element_violation("2.5.7", doc, el, f"draggable <{el.tag}> has no single-pointer alternative"))
    return out


@check("3.2.7")
def check_3_2_7(doc, styles):
    res = get_resolver(doc, styles)
    out = []
    for el in doc.elements:
        if not (interactive_target(el) or focusable(el)):
            continue
        st = res.style(el)
        if not st.hidden:
            continue
        hiders = [n for n in (el, *el.ancestors()) if res.style(n).self_hidden]
        if hiders and all(res.style(n).hover_reveals for n in hiders):
            out.append(element_violation("3.2.7", doc, el, f"<{el.tag}> only becomes visible on hover"))
    return out


_REVEAL_PROPS = ("display", "visibility", "opacity")


@check("1.4.13")
def check_1_4_13(doc, styles):
    sheets = [d for d in (styles or ()) if d.applies]
    focus_keys = {d.selector.structural_key() for d in sheets if d.pseudo == FOCUS}
    res = get_resolver(doc, styles)
    out = []
    for d in sheets:
        if d.pseudo != HOVER or not any(p in d.properties for p in _REVEAL_PROPS):
            continue
        if d.selector.structural_key() in focus_keys:
            continue
        revealed = any(
            d.selector.matches(el) and res.style(el).self_hidden and res.style(el).hover_reveals
            for el in doc.elements
        )
        if revealed:
            twin = d.selector.text.replace(":hover", ":focus-within")
            out.append(css_violation("1.4.13", doc, d, f"'{d.selector.text}' reveals content on hover only",
                                     twin=twin))
    return out
