"""Color and contrast checks: 1.4.1, 1.4.3, 1.4.6, 1.4.11, 2.4.11, 2.4.12."""

from __future__ import annotations

from ..colors import WHITE, contrast_ratio
from ..dom import DocumentModel, ElementNode
from ..style import StyleResolver, get_resolver
from .base import NATIVE_CONTROLS, Violation, check, element_violation, input_type, roles, tabindex
from .registry import THRESHOLDS


def _text_contrast(rule_id: str, doc: DocumentModel, styles, normal: float, large: float) -> list[Violation]:
    res = get_resolver(doc, styles)
    out = []
    for el in doc.elements:
        if not el.has_direct_text():
            continue
        st = res.style(el)
        if st.hidden or st.background_image:
            continue
        ratio = contrast_ratio(st.color, st.background)
        need = large if st.is_large_text else normal
        if ratio < need:
            out.append(element_violation(
                rule_id, doc, el,
                f"text contrast {ratio:.2f}:1 is below {need:g}:1 ({st.color.hex()} on {st.background.hex()})",
                fg=st.color.hex(), bg=st.background.hex(), ratio=ratio, need=f"{need:g}",
            ))
    return out


@check("1.4.3")
def check_1_4_3(doc, styles):
    return _text_contrast("1.4.3", doc, styles, THRESHOLDS["contrast_aa_normal"], THRESHOLDS["contrast_aa_large"])


@check("1.4.6")
def check_1_4_6(doc, styles):
    return _text_contrast("1.4.6", doc, styles, THRESHOLDS["contrast_aaa_normal"], THRESHOLDS["contrast_aaa_large"])


def _is_component(el: ElementNode) -> bool:
    if el.synthetic:
        return False
    if el.tag in NATIVE_CONTROLS:
        return not (el.tag == "input" and input_type(el) == "hidden")
    return "button" in roles(el)


def _parent_background(res: StyleResolver, el: ElementNode):
    return res.style(el.parent).background if el.parent is not None else WHITE


@check("1.4.11")
def check_1_4_11(doc, styles):
    res = get_resolver(doc, styles)
    need = THRESHOLDS["non_text_contrast"]
    out = []
    for el in doc.elements:
        if not _is_component(el):
            continue
        st = res.style(el)
        if st.hidden or st.background_image:
            continue
        around = _parent_background(res, el)
        if st.background != around:
            what, ratio = "fill", contrast_ratio(st.background, around)
        elif st.border_color is not None:
            what, ratio = "border", contrast_ratio(st.border_color, around)
        else:
            what, ratio = "boundary", 1.0
        if ratio < need:
            out.append(element_violation(
                "1.4.11", doc, el, f"component {what} contrast {ratio:.2f}:1 against {around.hex()} is below {need:g}:1",
                bg=around.hex(), ratio=ratio,
            ))
    return out


def focus_candidate(el: ElementNode) -> bool:
    """a[href], enabled form controls, and anything with tabindex >= 0."""
    if el.synthetic:
        return False
    ti = tabindex(el)
    if ti is not None and ti >= 0:
        return True
    if el.tag == "a":
        return "href" in el.attributes
    if el.tag in NATIVE_CONTROLS:
        return "disabled" not in el.attributes and not (el.tag == "input" and input_type(el) == "hidden")
    return False


def _focus_appearance(rule_id: str, doc: DocumentModel, styles, need: float) -> list[Violation]:
    res = get_resolver(doc, styles)
    out = []
    for el in doc.elements:
        if not focus_candidate(el):
            continue
        st = res.style(el)
        if st.hidden:
            continue
        if st.outline_suppressed_on_focus and not st.focus_alternative:
            out.append(element_violation(
                rule_id, doc, el, "focus outline is removed with no replacement indicator",
                fix="Do not remove the focus outline, or replace it with a visible indicator "
                    f"(outline, border or box-shadow) of at least {need:g}:1 contrast.",
            ))
            continue
        color = st.focus_indicator_color
        if color is None:
            continue
        ratio = contrast_ratio(color, st.background)
        if ratio < need:
            out.append(element_violation(
                rule_id, doc, el,
                f"focus indicator contrast {ratio:.2f}:1 ({color.hex()} on {st.background.hex()}) is below {need:g}:1",
                fix=f"Use a focus outline color with at least {need:g}:1 contrast against {st.background.hex()} "
                    f"(now {ratio:.2f}:1).",
            ))
    return out


@check("2.4.11")
def check_2_4_11(doc, styles):
    return _focus_appearance("2.4.11", doc, styles, THRESHOLDS["focus_contrast_aa"])


@check("2.4.12")
def check_2_4_12(doc, styles):
    return _focus_appearance("2.4.12", doc, styles, THRESHOLDS["focus_contrast_aaa"])


@check("1.4.1")
def check_1_4_1(doc, styles):
    res = get_resolver(doc, styles)
    out = []
    for el in doc.elements:
        if el.tag != "a" or "href" not in el.attributes or el.synthetic:
            continue
        parent = el.parent
        # flowing text: the link sits beside running text in the same block
        if parent is None or not parent.has_direct_text():
            continue
        st = res.style(el)
        if st.hidden or "underline" in st.text_decoration:
            continue
        ps = res.style(parent)
        if st.font_weight != ps.font_weight or abs(st.font_size_px - ps.font_size_px) > 0.01:
            continue
        if st.background != ps.background or st.border_color is not None:
            continue
        out.append(element_violation(
            "1.4.1", doc, el, "link in running text is distinguished by color alone", parent=parent.tag,
        ))
    return out
