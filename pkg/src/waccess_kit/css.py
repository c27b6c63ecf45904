"""A pragmatic CSS subset parser.

Only the properties the accessibility rules read are kept; shorthands are
expanded into the longhands the resolver understands. Anything else is
skipped and counted, never raised.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field

from .colors import try_parse_color
from .selectors import FOCUS, HOVER, Selector, UnsupportedSelector, parse_selector, split_selector_list

SUPPORTED_PROPERTIES = frozenset(
    """
    color background-color background-image font-size font-weight text-decoration display visibility
    opacity outline-style outline-width outline-color width height padding-top padding-right
    padding-bottom padding-left border-style border-width border-color box-shadow animation-name
    animation-duration animation-iteration-count transition-duration page-break-before
    page-break-after break-before break-after border-top border-right border-bottom border-left
    """.split()
)

APPLIED_MEDIA = frozenset({"", "all", "screen", "only screen", "only all"})
_OUTLINE_STYLES = frozenset(
    {"none", "hidden", "dotted", "dashed", "solid", "double", "groove", "ridge", "inset", "outset", "auto"}
)
_BORDER_STYLES = _OUTLINE_STYLES - {"auto"}
_WIDTH_KEYWORDS = frozenset({"thin", "medium", "thick"})
_TIME_RE = re.compile(r"^(-?(?:\d+\.?\d*|\.\d+))(s|ms)$")
_COMMENT_RE = re.compile(r"/\*.*?(?:\*/|$)", re.S)


@dataclass(frozen=True)
class StyleDeclaration:
    selector: Selector
    pseudo: str  # "none" | "hover" | "focus"
    properties: dict[str, str]
    specificity: tuple[int, int, int]
    source_order: int
    important: frozenset[str] = frozenset()
    media: str = ""
    rule_text: str = ""
    offset: int = 0
    origin: str = ""

    @property
    def applies(self) -> bool:
        return self.media in APPLIED_MEDIA

    @property
    def cascade_specificity(self) -> tuple[int, int, int]:
        ids, classes, tags = self.specificity
        return ids, classes + self.selector.state_count, tags


@dataclass
class ParsedCss:
    declarations: list[StyleDeclaration] = field(default_factory=list)
    skipped: int = 0


def split_top_level(text: str, sep: str) -> list[str]:
    """Split on ``sep`` outside parentheses and quotes."""
    parts, buf = [], []
    depth = 0
    quote = None
    for ch in text:
        if quote:
            if ch == quote:
                quote = None
        elif ch in "\"'":
            quote = ch
        elif ch == "(":
            depth += 1
        elif ch == ")":
            depth = max(0, depth - 1)
        elif ch == sep and depth == 0:
            parts.append("".join(buf))
            buf = []
            continue
        buf.append(ch)
    parts.append("".join(buf))
    return parts


def _find_top_level(text: str, chars: str, start: int, end: int) -> int:
    depth = 0
    quote = None
    i = start
    while i < end:
        ch = text[i]
        if quote:
            if ch == "\\":
                i += 1
            elif ch == quote:
                quote = None
        elif ch in "\"'":
            quote = ch
        elif ch in "([":
            depth += 1
        elif ch in ")]":
            depth = max(0, depth - 1)
        elif depth == 0 and ch in chars:
            return i
        i += 1
    return -1


def _matching_brace(text: str, open_idx: int, end: int) -> int:
    depth = 0
    quote = None
    i = open_idx
    while i < end:
        ch = text[i]
        if quote:
            if ch == "\\":
                i += 1
            elif ch == quote:
                quote = None
        elif ch in "\"'":
            quote = ch
        elif ch == "{":
            depth += 1
        elif ch == "}":
            depth -= 1
            if depth == 0:
                return i
        i += 1
    return end


def _tokens(value: str) -> list[str]:
    return [t for t in re.split(r"\s+(?![^()]*\))", value.strip()) if t]


def _is_length(tok: str) -> bool:
    return tok == "0" or tok in _WIDTH_KEYWORDS or re.fullmatch(r"-?(?:\d+\.?\d*|\.\d+)[a-z%]+", tok) is not None


def parse_time_s(tok: str) -> float | None:
    m = _TIME_RE.match(tok.strip())
    if not m:
        return None
    value = float(m.group(1))
    return value / 1000.0 if m.group(2) == "ms" else value


def _expand_outline(value: str) -> dict[str, str]:
    out = {"outline-style": "none", "outline-width": "medium", "outline-color": "currentcolor"}
    for tok in _tokens(value):
        if tok in _OUTLINE_STYLES:
            out["outline-style"] = tok
        elif _is_length(tok):
            out["outline-width"] = tok
        else:
            out["outline-color"] = tok
    return out


def _expand_border(value: str) -> dict[str, str]:
    out = {"border-style": "none", "border-width": "medium", "border-color": "currentcolor"}
    for tok in _tokens(value):
        if tok in _BORDER_STYLES:
            out["border-style"] = tok
        elif _is_length(tok):
            out["border-width"] = tok
        else:
            out["border-color"] = tok
    return out


def _expand_background(value: str) -> dict[str, str]:
    # Colors may appear anywhere among the layers; the final layer holds it.
    layers = split_top_level(value, ",")
    color = "transparent"
    for tok in _tokens(layers[-1]):
        if try_parse_color(tok) is not None:
            color = tok
    has_image = "url(" in value or "gradient(" in value
    return {"background-color": color, "background-image": "image" if has_image else "none"}


def _expand_box(prefix: str, value: str) -> dict[str, str]:
    toks = _tokens(value)
    if not 1 <= len(toks) <= 4:
        return {}
    top = toks[0]
    right = toks[1] if len(toks) > 1 else top
    bottom = toks[2] if len(toks) > 2 else top
    left = toks[3] if len(toks) > 3 else right
    return {f"{prefix}-top": top, f"{prefix}-right": right, f"{prefix}-bottom": bottom, f"{prefix}-left": left}


def _expand_animation(value: str) -> dict[str, str]:
    names, durations, counts = [], [], []
    for layer in split_top_level(value, ","):
        name, duration, count = "none", "0s", "1"
        seen_time = False
        for tok in _tokens(layer):
            if parse_time_s(tok) is not None:
                if not seen_time:
                    duration = tok
                    seen_time = True
            elif tok == "infinite" or re.fullmatch(r"\d+\.?\d*", tok):
                count = tok
            elif tok in ("ease", "linear", "ease-in", "ease-out", "ease-in-out", "step-start", "step-end",
                         "normal", "reverse", "alternate", "alternate-reverse", "none", "forwards",
                         "backwards", "both", "running", "paused") or "(" in tok:
                continue
            else:
                name = tok
        names.append(name)
        durations.append(duration)
        counts.append(count)
    return {
        "animation-name": ", ".join(names),
        "animation-duration": ", ".join(durations),
        "animation-iteration-count": ", ".join(counts),
    }


def _expand_transition(value: str) -> dict[str, str]:
    durations = []
    for layer in split_top_level(value, ","):
        duration = "0s"
        for tok in _tokens(layer):
            if parse_time_s(tok) is not None:
                duration = tok
                break
        durations.append(duration)
    return {"transition-duration": ", ".join(durations)}


_SHORTHANDS = {
    "outline": _expand_outline,
    "border": _expand_border,
    "background": _expand_background,
    "padding": lambda v: _expand_box("padding", v),
    "animation": _expand_animation,
    "transition": _expand_transition,
}
_RENAMES = {"text-decoration-line": "text-decoration"}


def parse_declaration_block(body: str) -> tuple[dict[str, str], frozenset[str], int]:
    """Parse ``name: value`` pairs; returns (properties, important names, skipped)."""
    props: dict[str, str] = {}
    important: set[str] = set()
    skipped = 0
    for chunk in split_top_level(body, ";"):
        if not chunk.strip():
            continue
        name, sep, value = chunk.partition(":")
        name = name.strip().lower()
        value = value.strip()
        if not sep or not name or not value:
            skipped += 1
            continue
        is_important = False
        m = re.search(r"!\s*important\s*$", value, re.I)
        if m:
            is_important = True
            value = value[: m.start()].strip()
        value = value.lower()
        name = _RENAMES.get(name, name)
        if name in _SHORTHANDS:
            expanded = _SHORTHANDS[name](value)
        elif name in SUPPORTED_PROPERTIES:
            expanded = {name: value}
        else:
            skipped += 1
            continue
        for k, v in expanded.items():
            if is_important:
                props[k] = v
                important.add(k)
            elif k not in important:
                props[k] = v
    return props, frozenset(important), skipped


def _media_applies(query: str) -> bool:
    q = " ".join(query.lower().split())
    return any(part.strip() in APPLIED_MEDIA for part in q.split(","))


def _is_reduced_motion(query: str) -> bool:
    return "prefers-reduced-motion" in query.lower()


class _Parser:
    def __init__(self, text: str, base_offset: int, origin: str, start_order: int) -> None:
        # blank out comments without shifting offsets
        self.text = _COMMENT_RE.sub(lambda m: " " * len(m.group()), text)
        self.raw = text
        self.base = base_offset
        self.origin = origin
        self.order = start_order
        self.result = ParsedCss()

    def run(self) -> ParsedCss:
        self._block(0, len(self.text), media="")
        return self.result

    def _block(self, start: int, end: int, media: str) -> None:
        text = self.text
        i = start
        while i < end:
            while i < end and (text[i].isspace() or text[i] == ";"):
                i += 1
            if i >= end:
                return
            if text.startswith("<!--", i):
                i += 4
                continue
            if text.startswith("-->", i):
                i += 3
                continue
            if text[i] == "@":
                i = self._at_rule(i, end, media)
                continue
            brace = _find_top_level(text, "{}", i, end)
            if brace < 0 or text[brace] == "}":
                self.result.skipped += 1
                i = end if brace < 0 else brace + 1
                continue
            close = _matching_brace(text, brace, end)
            self._qualified_rule(i, brace, close, media)
            i = close + 1

    def _at_rule(self, i: int, end: int, media: str) -> int:
        text = self.text
        stop = _find_top_level(text, "{;", i, end)
        if stop < 0:
            self.result.skipped += 1
            return end
        if text[stop] == ";":
            self.result.skipped += 1
            return stop + 1
        close = _matching_brace(text, stop, end)
        m = re.match(r"@([\w-]+)", text[i:stop])
        keyword = m.group(1).lower() if m else ""
        prelude = text[i + 1 + len(keyword): stop].strip()
        if keyword == "media" and media in APPLIED_MEDIA:
            if _media_applies(prelude):
                self._block(stop + 1, close, media=media)
                return close + 1
            if _is_reduced_motion(prelude):
                # kept but not applied: rules only need to know it exists
                self._block(stop + 1, close, media=" ".join(prelude.lower().split()))
                return close + 1
        self.result.skipped += 1
        return close + 1

    def _qualified_rule(self, start: int, brace: int, close: int, media: str) -> None:
        prelude = self.text[start:brace].strip()
        body = self.text[brace + 1: close]
        props, important, skipped = parse_declaration_block(body)
        self.result.skipped += skipped
        rule_text = self.raw[start: min(close + 1, len(self.raw))].strip()
        if not props:
            return
        for part in split_selector_list(prelude):
            try:
                sel = parse_selector(part, strict=False)
            except UnsupportedSelector:
                self.result.skipped += 1
                continue
            states = sel.states
            pseudo = FOCUS if FOCUS in states else HOVER if HOVER in states else "none"
            self.result.declarations.append(
                StyleDeclaration(
                    selector=sel,
                    pseudo=pseudo,
                    properties=dict(props),
                    specificity=sel.specificity,
                    source_order=self.order,
                    important=important,
                    media=media,
                    rule_text=rule_text,
                    offset=self.base + start,
                    origin=self.origin,
                )
            )
            self.order += 1


def parse_css(text: str, *, base_offset: int = 0, origin: str = "", start_order: int = 0) -> ParsedCss:
    """Parse a stylesheet, keeping counts of what was skipped.

    ``base_offset`` shifts declaration offsets (e.g. to the position of a
    ``<style>`` block inside the page); ``start_order`` lets several sheets
    share one source-order sequence.
    """
    return _Parser(text, base_offset, origin, start_order).run()


def parse_css_subset(text: str) -> list[StyleDeclaration]:
    return parse_css(text).declarations
