"""Approximate computed styles for audit purposes.

The cascade is: user-agent defaults < presentational attributes < sheet
declarations ranked by (important, specificity, source order) < inline
``style``. Interaction states (:focus, :hover) are resolved separately so
rules can compare an element's resting and focused/hovered appearance.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Iterable, Sequence

from .colors import BLACK, WHITE, Color, composite, try_parse_color
from .css import StyleDeclaration, parse_declaration_block
from .dom import DocumentModel, ElementNode
from .selectors import FOCUS, HOVER

LARGE_TEXT_PX = 24.0
LARGE_BOLD_TEXT_PX = 18.66
BOLD_WEIGHT = 700
INVISIBLE_OPACITY = 0.1
BASE_FONT_PX = 16.0

UA_FONT_SIZES = {"h1": 32.0, "h2": 24.0, "h3": 18.72, "h4": 16.0, "h5": 13.28, "h6": 10.72}
UA_BOLD = frozenset({"h1", "h2", "h3", "h4", "h5", "h6", "b", "strong", "th"})
UA_LINK_COLOR = Color(0, 0, 0xEE)
UA_CONTROL_BORDER = Color(0x76, 0x76, 0x76)
UA_HIDDEN_TAGS = frozenset(
    {"head", "script", "style", "title", "meta", "link", "base", "template", "noscript", "datalist", "param", "area"}
)
UA_INLINE_TAGS = frozenset(
    "a abbr b bdi bdo br button cite code data dfn em font i img input kbd label mark q s samp select small "
    "span strike strong sub sup textarea time u var del ins big tt".split()
)
FORM_CONTROLS = frozenset({"button", "input", "select", "textarea"})
_FONT_KEYWORDS = {
    "xx-small": 9.0, "x-small": 10.0, "small": 13.0, "medium": 16.0,
    "large": 18.0, "x-large": 24.0, "xx-large": 32.0, "xxx-large": 48.0,
}
_NUM_UNIT = re.compile(r"^(-?(?:\d+\.?\d*|\.\d+))([a-z%]*)$")
_PRESENTATIONAL_SIZE_TAGS = frozenset({"img", "input", "canvas", "iframe", "video", "object", "embed"})
_BGCOLOR_TAGS = frozenset({"body", "table", "tr", "td", "th"})


@dataclass(frozen=True)
class ComputedStyleApprox:
    color: Color  # composited over ``background``
    background: Color
    font_size_px: float
    font_weight: int
    text_decoration: frozenset[str]
    display: str
    visibility: str
    outline_suppressed_on_focus: bool
    focus_indicator_color: Color | None
    hover_reveals: bool
    box_size_px: tuple[float, float] | None
    # extensions used by individual rules
    opacity: float = 1.0  # effective, multiplied through ancestors
    hidden: bool = False  # not rendered: display:none/visibility/opacity here or above
    self_hidden: bool = False  # this element itself introduces the hiding
    background_image: bool = False
    focus_alternative: bool = False
    border_color: Color | None = None
    animation_infinite: bool = False
    page_break: bool = False

    @property
    def is_large_text(self) -> bool:
        return self.font_size_px >= LARGE_TEXT_PX or (
            self.font_size_px >= LARGE_BOLD_TEXT_PX and self.font_weight >= BOLD_WEIGHT
        )


def parse_px(value: str | None, font_px: float, *, allow_percent_of: float | None = None) -> float | None:
    """Resolve a CSS length to px, or None when it depends on layout."""
    if value is None:
        return None
    value = value.strip()
    m = _NUM_UNIT.match(value)
    if not m:
        return None
    num, unit = float(m.group(1)), m.group(2)
    if unit == "px" or (unit == "" and num == 0):
        return num
    if unit == "":
        return None
    if unit == "pt":
        return num * 4.0 / 3.0
    if unit == "em":
        return num * font_px
    if unit == "rem":
        return num * BASE_FONT_PX
    if unit == "%" and allow_percent_of is not None:
        return num * allow_percent_of / 100.0
    return None


def _font_size(value: str, parent_px: float) -> float | None:
    if value in _FONT_KEYWORDS:
        return _FONT_KEYWORDS[value]
    if value == "smaller":
        return parent_px / 1.2
    if value == "larger":
        return parent_px * 1.2
    return parse_px(value, parent_px, allow_percent_of=parent_px)


def _font_weight(value: str, parent: int) -> int | None:
    if value == "normal":
        return 400
    if value == "bold":
        return 700
    if value == "bolder":
        return 400 if parent < 350 else 700 if parent < 550 else 900
    if value == "lighter":
        return 100 if parent < 550 else 400 if parent < 750 else 700
    try:
        w = int(float(value))
    except ValueError:
        return None
    return w if 1 <= w <= 1000 else None


def _opacity(value: str) -> float | None:
    try:
        v = float(value[:-1]) / 100.0 if value.endswith("%") else float(value)
    except ValueError:
        return None
    return min(1.0, max(0.0, v))


def _width_is_zero(value: str | None) -> bool:
    if value is None:
        return False
    return value.strip() in ("0", "0px", "0em", "0rem", "0pt")


def _is_link(el: ElementNode) -> bool:
    return el.tag in ("a", "area") and "href" in el.attributes


def _visibility(el: ElementNode, props: dict[str, str], parent: _Node) -> tuple[str, str, float, bool]:
    """(display, visibility, own opacity, element hides itself)."""
    tag = el.tag
    hidden_by_ua = tag in UA_HIDDEN_TAGS or "hidden" in el.attributes or (
        tag == "input" and el.attributes.get("type", "").strip().lower() == "hidden")
    display = "none" if hidden_by_ua else "inline" if tag in UA_INLINE_TAGS else "block"
    display = props.get("display", display)
    visibility = parent.visibility
    if props.get("visibility") in ("visible", "hidden", "collapse"):
        visibility = props["visibility"]
    opacity = _opacity(props["opacity"]) if "opacity" in props else None
    if opacity is None:
        opacity = 1.0
    self_hidden = (
        display == "none"
        or (visibility != "visible" and parent.visibility == "visible")
        or opacity < INVISIBLE_OPACITY
    )
    return display, visibility, opacity, self_hidden


class _Node:
    """Per-element intermediate state (raw inherited values)."""

    __slots__ = ("raw_color", "background", "bg_image", "font_px", "weight", "visibility", "opacity",
                 "display_hidden", "computed")

    def __init__(self) -> None:
        self.computed: ComputedStyleApprox | None = None


_ROOT_PARENT = _Node()
_ROOT_PARENT.raw_color = BLACK
_ROOT_PARENT.background = WHITE
_ROOT_PARENT.bg_image = False
_ROOT_PARENT.font_px = BASE_FONT_PX
_ROOT_PARENT.weight = 400
_ROOT_PARENT.visibility = "visible"
_ROOT_PARENT.opacity = 1.0
_ROOT_PARENT.display_hidden = False


def _subject_keys(decl: StyleDeclaration) -> tuple[str, str]:
    subj = decl.selector.subject
    if subj.id is not None:
        return "id", subj.id
    if subj.classes:
        return "class", subj.classes[0]
    if subj.tag is not None:
        return "tag", subj.tag
    return "any", ""


class _Index:
    def __init__(self, decls: Iterable[StyleDeclaration]) -> None:
        self.buckets: dict[tuple[str, str], list[StyleDeclaration]] = {}
        self.empty = True
        for d in decls:
            self.buckets.setdefault(_subject_keys(d), []).append(d)
            self.empty = False

    def matching(self, el: ElementNode) -> list[StyleDeclaration]:
        if self.empty:
            return []
        cands: list[StyleDeclaration] = []
        b = self.buckets
        el_id = el.attributes.get("id")
        if el_id:
            cands += b.get(("id", el_id), ())
        for c in el.classes:
            cands += b.get(("class", c), ())
        cands += b.get(("tag", el.tag), ())
        cands += b.get(("any", ""), ())
        return [d for d in cands if d.selector.matches(el)]


class StyleResolver:
    """Resolves and caches computed styles for one (document, sheets) pair."""

    def __init__(self, doc: DocumentModel, sheets: Sequence[StyleDeclaration] | None) -> None:
        self.doc = doc
        self.sheets = list(sheets or ())
        applied = [d for d in self.sheets if d.applies]
        self.base = _Index(d for d in applied if d.pseudo == "none")
        self.focus = _Index(d for d in applied if d.pseudo == FOCUS)
        self.hover = _Index(d for d in applied if d.pseudo == HOVER)
        self._nodes: dict[int, _Node] = {}
        self._inline: dict[int, tuple[dict[str, str], frozenset[str]]] = {}

    # -- cascade --------------------------------------------------------

    def inline(self, el: ElementNode) -> tuple[dict[str, str], frozenset[str]]:
        got = self._inline.get(el.node_id)
        if got is None:
            style = el.attributes.get("style")
            if style:
                props, important, _ = parse_declaration_block(style)
                got = (props, important)
            else:
                got = ({}, frozenset())
            self._inline[el.node_id] = got
        return got

    def _hints(self, el: ElementNode) -> dict[str, str]:
        a = el.attributes
        hints: dict[str, str] = {}
        if el.tag == "font" and "color" in a:
            hints["color"] = a["color"].strip().lower()
        if el.tag == "body" and "text" in a:
            hints["color"] = a["text"].strip().lower()
        if el.tag in _BGCOLOR_TAGS and "bgcolor" in a:
            hints["background-color"] = a["bgcolor"].strip().lower()
        if el.tag in _PRESENTATIONAL_SIZE_TAGS:
            for dim in ("width", "height"):
                v = a.get(dim, "").strip()
                if v.isdigit():
                    hints[dim] = v + "px"
        return hints

    def cascade(self, el: ElementNode, state: str | None = None) -> dict[str, str]:
        """Winning property values for ``el`` in the given interaction state."""
        decls = self.base.matching(el)
        if state == FOCUS:
            decls = decls + self.focus.matching(el)
        elif state == HOVER:
            decls = decls + self.hover.matching(el)
        entries: list[tuple[tuple, str, str]] = []
        for name, value in self._hints(el).items():
            entries.append(((0, 0, (0, 0, 0), -1), name, value))
        for d in decls:
            spec = d.cascade_specificity
            for name, value in d.properties.items():
                entries.append(((name in d.important, 0, spec, d.source_order), name, value))
        props, important = self.inline(el)
        for name, value in props.items():
            entries.append(((name in important, 1, (0, 0, 0), 0), name, value))
        entries.sort(key=lambda e: e[0])
        return {name: value for _, name, value in entries}

    # -- resolution -----------------------------------------------------

    def style(self, el: ElementNode) -> ComputedStyleApprox:
        node = self._nodes.get(el.node_id)
        if node is not None and node.computed is not None:
            return node.computed
        chain = [el]
        p = el.parent
        while p is not None and p.node_id not in self._nodes:
            chain.append(p)
            p = p.parent
        for item in reversed(chain):
            parent = self._nodes[item.parent.node_id] if item.parent is not None else _ROOT_PARENT
            self._nodes[item.node_id] = self._compute(item, parent)
        return self._nodes[el.node_id].computed

    def _compute(self, el: ElementNode, parent: _Node) -> _Node:
        tag = el.tag
        attrs = el.attributes
        props = self.cascade(el)
        node = _Node()

        # color (inherited)
        raw_color = parent.raw_color
        if _is_link(el):
            raw_color = UA_LINK_COLOR
        if "color" in props and props["color"] not in ("inherit", "currentcolor"):
            c = try_parse_color(props["color"])
            if c is not None:
                raw_color = c
        node.raw_color = raw_color

        # background (composited over ancestors)
        own_bg = None
        bg_value = props.get("background-color")
        if bg_value is not None:
            own_bg = try_parse_color(bg_value)
        node.background = composite(own_bg, parent.background) if own_bg is not None else parent.background
        if props.get("background-image", "none") != "none":
            node.bg_image = True
        elif own_bg is not None and own_bg.opaque:
            node.bg_image = False
        else:
            node.bg_image = parent.bg_image

        # font
        font_px = UA_FONT_SIZES.get(tag, parent.font_px)
        if "font-size" in props:
            size = _font_size(props["font-size"], parent.font_px)
            if size is not None and size >= 0:
                font_px = size
        node.font_px = font_px
        weight = BOLD_WEIGHT if tag in UA_BOLD else parent.weight
        if "font-weight" in props:
            w = _font_weight(props["font-weight"], parent.weight)
            if w is not None:
                weight = w
        node.weight = weight

        decoration: set[str] = set()
        if _is_link(el) or tag in ("u", "ins"):
            decoration.add("underline")
        if tag in ("s", "strike", "del"):
            decoration.add("line-through")
        if "text-decoration" in props:
            words = set(props["text-decoration"].split())
            decoration = words & {"underline", "overline", "line-through"}

        # visibility / display / opacity
        display, visibility, own_opacity, self_hidden = _visibility(el, props, parent)
        node.visibility = visibility
        node.opacity = parent.opacity * own_opacity
        node.display_hidden = parent.display_hidden or display == "none"
        hidden = node.display_hidden or visibility != "visible" or node.opacity < INVISIBLE_OPACITY

        hover_reveals = False
        if self_hidden and not self.hover.empty and self.hover.matching(el):
            hover_reveals = not _visibility(el, self.cascade(el, HOVER), parent)[3]

        text_color = composite(raw_color, node.background)

        # borders (UA controls draw a 1px #767676 border)
        if tag in FORM_CONTROLS and attrs.get("type", "").lower() != "hidden":
            b_style, b_width, b_color = "solid", "1px", UA_CONTROL_BORDER
        else:
            b_style, b_width, b_color = "none", "medium", None
        b_style = props.get("border-style", b_style)
        b_width = props.get("border-width", b_width)
        if "border-color" in props:
            b_color = self._color_or_current(props["border-color"], raw_color)
        elif b_color is None:
            b_color = raw_color
        border_color = None
        if b_style not in ("none", "hidden") and not _width_is_zero(b_width) and b_color is not None:
            border_color = composite(b_color, node.background)

        suppressed, indicator, alternative = self._focus_state(el, props, raw_color, node.background)

        node.computed = ComputedStyleApprox(
            color=text_color,
            background=node.background,
            font_size_px=font_px,
            font_weight=weight,
            text_decoration=frozenset(decoration),
            display=display,
            visibility=visibility,
            outline_suppressed_on_focus=suppressed,
            focus_indicator_color=indicator,
            hover_reveals=hover_reveals,
            box_size_px=self._box(props, font_px),
            opacity=node.opacity,
            hidden=hidden,
            self_hidden=self_hidden,
            background_image=node.bg_image,
            focus_alternative=alternative,
            border_color=border_color,
            animation_infinite=self._animation_infinite(props),
            page_break=self._page_break(props),
        )
        return node

    @staticmethod
    def _color_or_current(value: str, current: Color) -> Color | None:
        if value in ("currentcolor", "inherit"):
            return current
        return try_parse_color(value)

    def _focus_state(self, el: ElementNode, base_props: dict[str, str], raw_color: Color,
                     background: Color) -> tuple[bool, Color | None, bool]:
        """(outline suppressed, indicator color, alternative indicator present)."""
        focus_decls = self.focus.matching(el) if not self.focus.empty else []
        props = self.cascade(el, FOCUS) if focus_decls else base_props
        alternative = False
        for d in focus_decls:
            for name, value in d.properties.items():
                if name == "box-shadow" and value != "none":
                    alternative = True
                elif name.startswith("border") or name.startswith("background") or name == "text-decoration":
                    alternative = True
        if not any(k.startswith("outline-") for k in props):
            return False, None, alternative  # UA focus ring
        style = props.get("outline-style", "none")
        width = props.get("outline-width", "medium")
        if style in ("none", "hidden") or _width_is_zero(width):
            return True, None, alternative
        if style == "auto":
            return False, None, alternative
        color = self._color_or_current(props.get("outline-color", "currentcolor"), raw_color)
        if color is None:  # e.g. "invert"
            return False, None, alternative
        return False, composite(color, background), alternative

    @staticmethod
    def _box(props: dict[str, str], font_px: float) -> tuple[float, float] | None:
        w = parse_px(props.get("width"), font_px)
        h = parse_px(props.get("height"), font_px)
        if w is None or h is None:
            return None
        pads = []
        for side in ("top", "right", "bottom", "left"):
            v = props.get(f"padding-{side}")
            if v is None:
                pads.append(0.0)
                continue
            px = parse_px(v, font_px)
            if px is None:
                return None
            pads.append(px)
        return w + pads[1] + pads[3], h + pads[0] + pads[2]

    @staticmethod
    def _animation_infinite(props: dict[str, str]) -> bool:
        names = [n.strip() for n in props.get("animation-name", "none").split(",")]
        counts = [c.strip() for c in props.get("animation-iteration-count", "1").split(",")]
        for i, name in enumerate(names):
            if name and name != "none" and counts[min(i, len(counts) - 1)] == "infinite":
                return True
        return False

    @staticmethod
    def _page_break(props: dict[str, str]) -> bool:
        for side in ("before", "after"):
            if props.get(f"page-break-{side}") == "always":
                return True
            if props.get(f"break-{side}") in ("page", "left", "right", "recto", "verso"):
                return True
        return False


def get_resolver(doc: DocumentModel, sheets: Sequence[StyleDeclaration] | None) -> StyleResolver:
    """Shared resolver for (doc, sheets); cached on the document."""
    key = ("style", id(sheets))
    hit = doc._cache.get(key)
    if hit is not None and hit[0] is sheets:
        return hit[1]
    resolver = StyleResolver(doc, sheets)
    doc._cache[key] = (sheets, resolver)
    return resolver


def resolve_style(doc: DocumentModel, sheets: Sequence[StyleDeclaration] | None, el: ElementNode) -> ComputedStyleApprox:
    return get_resolver(doc, sheets).style(el)
