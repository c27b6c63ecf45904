"""Lenient HTML parsing into a read-only element tree plus a raw tag log.

The tree follows the usual browser recovery rules closely enough for
auditing (implied ``</p>``, ``</li>``, table cell closing, raw-text
elements). The token log records every start/end tag exactly as written,
before any recovery, so source-level checks can see what the author typed.
"""

from __future__ import annotations

import codecs
import html
import re
from dataclasses import dataclass, field
from typing import Callable, Iterator, Union
from urllib.parse import urljoin

from .selectors import Selector, parse_selector_list


class ParseError(ValueError):
    """Raised when a document cannot be parsed at all."""


VOID_ELEMENTS = frozenset(
    {"img", "br", "input", "meta", "link", "hr", "area", "col", "embed", "source", "track", "wbr", "base"}
)
RAW_TEXT_ELEMENTS = frozenset(
    {"script", "style", "xmp", "iframe", "noembed", "noframes", "noscript", "textarea", "title", "plaintext"}
)
_ESCAPABLE_RAW_TEXT = frozenset({"textarea", "title"})

_CLOSES_P = frozenset(
    "address article aside blockquote details dialog div dl dd dt fieldset figcaption figure footer form "
    "h1 h2 h3 h4 h5 h6 header hgroup hr li main menu nav ol p pre section table ul".split()
)
_SCOPE_BOUNDARY = frozenset({"button", "table", "td", "th", "caption", "marquee", "object", "applet", "template"})
_HEADINGS = frozenset({"h1", "h2", "h3", "h4", "h5", "h6"})

_WS_RE = re.compile(r"\s+")
_TAG_NAME_RE = re.compile(r"[A-Za-z][^\s/>\x00]*")
_ATTR_GAP_RE = re.compile(r"[\s/]*")
_ATTR_NAME_RE = re.compile(r"[^\s/>][^\s/>=]*")
_ATTR_VALUE_RE = re.compile(r"""\s*=\s*(?:"([^"]*)"|'([^']*)'|([^\s>]*))""")
_META_CHARSET_RE = re.compile(rb"""<meta[^>]*?charset\s*=\s*["']?\s*([A-Za-z0-9_.:\-]+)""", re.I)


def normalize_ws(text: str) -> str:
    return _WS_RE.sub(" ", text).strip()


@dataclass(frozen=True)
class TagToken:
    kind: str  # "open" | "close" | "self_closing"
    tag: str
    byte_offset: int
    attributes_raw: str
    byte_end: int
    char_offset: int
    char_end: int


class TextNode:
    __slots__ = ("data", "parent")

    def __init__(self, data: str, parent: ElementNode | None = None) -> None:
        self.data = data
        self.parent = parent

    def __repr__(self) -> str:
        return f"TextNode({self.data[:30]!r})"


class ElementNode:
    """One element of the recovered tree.

    ``source_span`` is the byte range of the opening tag in the raw input;
    synthetic nodes created by recovery have ``source_span`` of ``None``.
    """

    __slots__ = (
        "tag",
        "attributes",
        "children",
        "parent",
        "source_span",
        "char_span",
        "node_id",
        "synthetic",
        "_classes",
    )

    def __init__(
        self,
        tag: str,
        attributes: dict[str, str],
        parent: ElementNode | None,
        node_id: int,
        source_span: tuple[int, int] | None = None,
        char_span: tuple[int, int] | None = None,
        synthetic: bool = False,
    ) -> None:
        self.tag = tag
        self.attributes = attributes
        self.children: list[Node] | tuple[Node, ...] = []
        self.parent = parent
        self.node_id = node_id
        self.source_span = source_span
        self.char_span = char_span
        self.synthetic = synthetic
        self._classes: frozenset[str] | None = None

    def __repr__(self) -> str:
        return f"<ElementNode {self.tag} #{self.node_id}>"

    def get(self, name: str, default: str | None = None) -> str | None:
        return self.attributes.get(name, default)

    @property
    def id(self) -> str | None:
        return self.attributes.get("id")

    @property
    def classes(self) -> frozenset[str]:
        if self._classes is None:
            self._classes = frozenset(self.attributes.get("class", "").split())
        return self._classes

    @property
    def element_children(self) -> list[ElementNode]:
        return [c for c in self.children if isinstance(c, ElementNode)]

    def iter(self) -> Iterator[ElementNode]:
        """Pre-order walk over this element and its element descendants."""
        stack: list[ElementNode] = [self]
        while stack:
            el = stack.pop()
            yield el
            stack.extend(c for c in reversed(el.children) if isinstance(c, ElementNode))

    def descendants(self) -> Iterator[ElementNode]:
        it = self.iter()
        next(it)
        return it

    def ancestors(self) -> Iterator[ElementNode]:
        node = self.parent
        while node is not None:
            yield node
            node = node.parent

    def has_direct_text(self) -> bool:
        return any(isinstance(c, TextNode) and c.data.strip() for c in self.children)

    def text_content(self) -> str:
        parts: list[str] = []
        stack: list[Node] = [self]
        while stack:
            node = stack.pop()
            if isinstance(node, TextNode):
                parts.append(node.data)
            elif node.tag not in ("script", "style"):
                stack.extend(reversed(node.children))
        return "".join(parts)


Node = Union[ElementNode, TextNode]


@dataclass(eq=False)
class DocumentModel:
    url: str
    raw_bytes: bytes
    root: ElementNode
    token_log: tuple[TagToken, ...]
    parse_warnings: list[str]
    text: str = field(repr=False, default="")
    encoding: str = "utf-8"
    bom_length: int = 0
    elements: tuple[ElementNode, ...] = field(repr=False, default=())
    _by_id: dict[str, ElementNode] = field(repr=False, default_factory=dict)
    _cache: dict = field(repr=False, default_factory=dict)

    def get_element_by_id(self, id_value: str) -> ElementNode | None:
        return self._by_id.get(id_value)

    def snippet(self, el: ElementNode) -> str:
        """Verbatim source text of the element's opening tag."""
        if el.char_span is None:
            return ""
        start, end = el.char_span
        return self.text[start:end]

    def char_to_byte(self, offset: int) -> int:
        prefix = self.text[:offset]
        if prefix.isascii():
            return offset + self.bom_length
        try:
            return len(prefix.encode(self.encoding, "surrogateescape")) + self.bom_length
        except UnicodeError:
            return len(prefix.encode("utf-8", "surrogatepass")) + self.bom_length

    def byte_offset(self, el: ElementNode) -> int:
        return el.source_span[0] if el.source_span else 0

    def locator(self, el: ElementNode) -> str:
        path = []
        node: ElementNode | None = el
        while node is not None:
            seg = node.tag
            if node.id:
                seg += "#" + node.id
            path.append(seg)
            node = node.parent
        return " > ".join(reversed(path)) + f" @{self.byte_offset(el)}"

    def anchor_element(self) -> ElementNode | None:
        """First non-synthetic element; used to locate page-level findings."""
        for el in self.elements:
            if not el.synthetic:
                return el
        return None

    def resolve_url(self, href: str) -> str:
        try:
            return urljoin(self.url or "", href.strip())
        except ValueError:
            return href.strip()

    def warn(self, message: str) -> None:
        if message not in self.parse_warnings:
            self.parse_warnings.append(message)


# ---------------------------------------------------------------------------
# decoding


def _sniff_encoding(data: bytes, hint: str | None) -> tuple[str, int]:
    """Return (codec name, BOM length)."""
    for bom, name in ((codecs.BOM_UTF8, "utf-8"), (codecs.BOM_UTF16_LE, "utf-16-le"), (codecs.BOM_UTF16_BE, "utf-16-be")):
        if data.startswith(bom):
            return name, len(bom)
    for candidate in (hint, _meta_charset(data)):
        if not candidate:
            continue
        try:
            name = codecs.lookup(candidate).name
        except LookupError:
            continue
        # A meta-declared UTF-16 cannot be right if we could read the meta.
        if name.startswith("utf-16") or name.startswith("utf-32"):
            continue
        if name in ("iso8859-1", "ascii"):
            name = "cp1252"  # what browsers actually use for these labels
        return name, 0
    return "utf-8", 0


def _meta_charset(data: bytes) -> str | None:
    m = _META_CHARSET_RE.search(data[:2048])
    return m.group(1).decode("ascii", "replace") if m else None


def _decode(data: bytes, hint: str | None) -> tuple[str, str, int]:
    codec, bom = _sniff_encoding(data, hint)
    try:
        return data[bom:].decode(codec, "surrogateescape"), codec, bom
    except (UnicodeError, LookupError):
        return data.decode("utf-8", "surrogateescape"), "utf-8", 0


def _byte_offsets(text: str, offsets: list[int], codec: str, base: int) -> dict[int, int]:
    """Map sorted character offsets to byte offsets in the raw input."""
    if codec in ("utf-8", "cp1252", "ascii") and text.isascii():
        return {o: o + base for o in offsets}
    out: dict[int, int] = {}
    prev_char, prev_byte = 0, base
    for off in offsets:
        if off in out:
            continue
        seg = text[prev_char:off]
        try:
            prev_byte += len(seg.encode(codec, "surrogateescape"))
        except UnicodeError:
            prev_byte += len(seg.encode("utf-8", "surrogatepass"))
        prev_char = off
        out[off] = prev_byte
    return out


# ---------------------------------------------------------------------------
# tokenizer


@dataclass
class _RawTag:
    kind: str
    tag: str
    attrs: dict[str, str]
    attributes_raw: str
    start: int
    end: int


def _tokenize(text: str, warnings: list[str]) -> list[Union[_RawTag, tuple[str, str]]]:
    """Produce a flat list of tags and ("text", data) items."""
    out: list = []
    n = len(text)
    pos = 0
    text_start = 0

    def emit_text(end: int) -> None:
        if end > text_start:
            out.append(("text", text[text_start:end]))

    while pos < n:
        lt = text.find("<", pos)
        if lt < 0 or lt + 1 >= n:
            break
        nxt = text[lt + 1]
        if text.startswith("<!--", lt):
            emit_text(lt)
            close = text.find("-->", lt + 4)
            pos = n if close < 0 else close + 3
            text_start = pos
            continue
        if nxt in "!?":
            emit_text(lt)
            close = text.find(">", lt + 2)
            pos = n if close < 0 else close + 1
            text_start = pos
            continue
        if nxt == "/":
            m = _TAG_NAME_RE.match(text, lt + 2)
            if m is None:
                # "</>" is dropped, "</ x" is a bogus comment; neither is a tag
                emit_text(lt)
                close = text.find(">", lt + 2)
                pos = n if close < 0 else close + 1
                text_start = pos
                continue
            close = text.find(">", m.end())
            if close < 0:
                warnings.append(f"unterminated end tag at offset {lt}")
                emit_text(lt)
                pos = text_start = n
                break
            emit_text(lt)
            out.append(_RawTag("close", m.group().lower(), {}, text[m.end():close], lt, close + 1))
            pos = text_start = close + 1
            continue
        m = _TAG_NAME_RE.match(text, lt + 1)
        if m is None:
            pos = lt + 1  # literal "<"
            continue
        tag = m.group().lower()
        attrs: dict[str, str] = {}
        p = m.end()
        self_closing = False
        terminated = False
        while p < n:
            gap = _ATTR_GAP_RE.match(text, p)
            p = gap.end()
            if p >= n:
                break
            if text[p] == ">":
                self_closing = gap.group().endswith("/")
                terminated = True
                break
            am = _ATTR_NAME_RE.match(text, p)
            if am is None:  # cannot happen given the gap regex, but never loop forever
                p += 1
                continue
            name = am.group().lower()
            p = am.end()
            value = ""
            vm = _ATTR_VALUE_RE.match(text, p)
            if vm is not None and vm.end() > p:
                raw_value = next((g for g in vm.groups() if g is not None), "")
                value = html.unescape(raw_value)
                p = vm.end()
            attrs.setdefault(name, value)
        if not terminated:
            warnings.append(f"unterminated start tag <{tag}> at offset {lt}")
            emit_text(lt)
            pos = text_start = n
            break
        emit_text(lt)
        kind = "self_closing" if self_closing else "open"
        out.append(_RawTag(kind, tag, attrs, text[m.end():p], lt, p + 1))
        pos = text_start = p + 1
        if tag in RAW_TEXT_ELEMENTS and not (self_closing and tag not in ("script", "style")):
            if tag == "plaintext":
                end = n
            else:
                em = re.compile(r"</%s[\s/>]" % re.escape(tag), re.I).search(text, pos)
                end = em.start() if em else n
            if end > pos:
                data = text[pos:end]
                out.append(("text", html.unescape(data) if tag in _ESCAPABLE_RAW_TEXT else data, "raw"))
            pos = text_start = end
    emit_text(n)
    return out


# ---------------------------------------------------------------------------
# tree construction


class _TreeBuilder:
    def __init__(self, warnings: list[str]) -> None:
        self.warnings = warnings
        self.next_id = 1
        self.root = ElementNode("html", {}, None, 0, synthetic=True)
        self.stack: list[ElementNode] = [self.root]
        self.root_claimed = False
        self.seen_element = False

    @property
    def current(self) -> ElementNode:
        return self.stack[-1]

    def _pop_through(self, index: int) -> None:
        del self.stack[max(index, 1):]

    def _find(self, tags: frozenset[str] | set[str], stop: frozenset[str] | set[str] = frozenset()) -> int:
        for i in range(len(self.stack) - 1, 0, -1):
            t = self.stack[i].tag
            if t in tags:
                return i
            if t in stop:
                return -1
        return -1

    def _implied_ends(self, tag: str) -> None:
        if tag in _CLOSES_P:
            i = self._find({"p"}, _SCOPE_BOUNDARY)
            if i > 0:
                self._pop_through(i)
        if tag == "li":
            i = self._find({"li"}, {"ul", "ol", "menu"} | _SCOPE_BOUNDARY)
            if i > 0:
                self._pop_through(i)
        elif tag in ("dd", "dt"):
            i = self._find({"dd", "dt"}, {"dl"} | _SCOPE_BOUNDARY)
            if i > 0:
                self._pop_through(i)
        elif tag == "tr":
            i = self._find({"tr", "td", "th"}, {"table"})
            if i > 0:
                self._pop_through(i)
        elif tag in ("td", "th"):
            i = self._find({"td", "th"}, {"tr", "table"})
            if i > 0:
                self._pop_through(i)
        elif tag in ("thead", "tbody", "tfoot"):
            i = self._find({"thead", "tbody", "tfoot", "tr", "td", "th"}, {"table"})
            if i > 0:
                self._pop_through(i)
        elif tag == "option":
            if self.current.tag == "option":
                self.stack.pop()
        elif tag == "optgroup":
            if self.current.tag == "option":
                self.stack.pop()
            if self.current.tag == "optgroup":
                self.stack.pop()
        elif tag in _HEADINGS and self.current.tag in _HEADINGS:
            self.stack.pop()

    def start(self, tok: _RawTag, span: tuple[int, int]) -> ElementNode | None:
        if tok.tag == "html":
            if not self.root_claimed and not self.seen_element:
                self.root_claimed = True
                self.root.attributes = tok.attrs
                self.root.source_span = span
                self.root.char_span = (tok.start, tok.end)
                self.root.synthetic = False
                return self.root
            for k, v in tok.attrs.items():
                self.root.attributes.setdefault(k, v)
            self.warnings.append(f"duplicate <html> tag at offset {tok.start} merged into root")
            return None
        self.seen_element = True
        self._implied_ends(tok.tag)
        parent = self.current
        el = ElementNode(tok.tag, tok.attrs, parent, self.next_id, span, (tok.start, tok.end))
        self.next_id += 1
        parent.children.append(el)
        if tok.tag not in VOID_ELEMENTS:
            self.stack.append(el)
        return el

    def end(self, tok: _RawTag) -> None:
        if tok.tag == "html":
            self._pop_through(1)
            return
        i = self._find({tok.tag})
        if i > 0:
            self._pop_through(i)
        elif tok.tag not in VOID_ELEMENTS:
            self.warnings.append(f"stray </{tok.tag}> at offset {tok.start} ignored")

    def text(self, data: str) -> None:
        if not data:
            return
        parent = self.current
        kids = parent.children
        if kids and isinstance(kids[-1], TextNode):
            kids[-1].data += data
        else:
            kids.append(TextNode(data, parent))


def parse_html(data: bytes | str, url: str = "", encoding: str | None = None) -> DocumentModel:
    """Parse HTML leniently; never raises on malformed markup.

    ``encoding`` is a transport-level hint (e.g. from a Content-Type
    header); a byte-order mark or ``<meta charset>`` is honored otherwise.
    """
    if isinstance(data, str):
        data = data.encode("utf-8", "surrogateescape")
    if not data:
        raise ParseError("empty document")
    text, codec, bom = _decode(data, encoding)
    warnings: list[str] = []
    items = _tokenize(text, warnings)

    offsets = sorted({o for it in items if isinstance(it, _RawTag) for o in (it.start, it.end)})
    bmap = _byte_offsets(text, offsets, codec, bom)

    builder = _TreeBuilder(warnings)
    tokens: list[TagToken] = []
    for it in items:
        if isinstance(it, _RawTag):
            b0, b1 = bmap[it.start], bmap[it.end]
            tokens.append(TagToken(it.kind, it.tag, b0, it.attributes_raw, b1, it.start, it.end))
            if it.kind == "close":
                builder.end(it)
            else:
                builder.start(it, (b0, b1))
        else:
            data_ = it[1] if len(it) == 3 else html.unescape(it[1])
            builder.text(data_)

    elements = tuple(builder.root.iter())
    by_id: dict[str, ElementNode] = {}
    for el in elements:
        el.children = tuple(el.children)
        i = el.attributes.get("id")
        if i:
            by_id.setdefault(i, el)
    return DocumentModel(
        url=url,
        raw_bytes=data,
        root=builder.root,
        token_log=tuple(tokens),
        parse_warnings=warnings,
        text=text,
        encoding=codec,
        bom_length=bom,
        elements=elements,
        _by_id=by_id,
    )


# ---------------------------------------------------------------------------
# queries


def query(doc: DocumentModel, selector: str | Selector) -> list[ElementNode]:
    """Elements matching ``selector`` in document order."""
    if isinstance(selector, Selector):
        selectors = [selector]
    else:
        selectors = parse_selector_list(selector, strict=True)
    return [el for el in doc.elements if not el.synthetic and any(s.matches(el) for s in selectors)]


def _is_aria_hidden(el: ElementNode) -> bool:
    return el.attributes.get("aria-hidden", "").strip().lower() == "true"


def _inline_display_none(el: ElementNode) -> bool:
    style = el.attributes.get("style", "")
    return "display" in style and re.search(r"display\s*:\s*none", style, re.I) is not None


def _default_hidden(el: ElementNode) -> bool:
    return "hidden" in el.attributes or _inline_display_none(el)


def _name_from_content(el: ElementNode) -> str:
    parts: list[str] = []
    stack: list[Node] = list(reversed(el.children))
    while stack:
        node = stack.pop()
        if isinstance(node, TextNode):
            parts.append(node.data)
            continue
        if node.tag in ("script", "style", "template") or _is_aria_hidden(node) or "hidden" in node.attributes:
            continue
        label = node.attributes.get("aria-label", "").strip()
        if label:
            parts.append(" " + label + " ")
        elif node.tag in ("img", "area") or (node.tag == "input" and node.attributes.get("type", "").lower() == "image"):
            parts.append(" " + node.attributes.get("alt", "") + " ")
        else:
            stack.extend(reversed(node.children))
    return normalize_ws("".join(parts))


def labelledby_text(el: ElementNode, doc: DocumentModel) -> str:
    ids = el.attributes.get("aria-labelledby", "").split()
    parts = []
    for ref in ids:
        target = doc.get_element_by_id(ref)
        if target is None:
            doc.warn(f"aria-labelledby references missing id {ref!r}")
            continue
        parts.append(normalize_ws(target.attributes.get("aria-label", "") or _name_from_content(target)))
    return normalize_ws(" ".join(parts))


def accessible_name(el: ElementNode, doc: DocumentModel) -> str:
    attrs = el.attributes
    name = normalize_ws(attrs.get("aria-label", ""))
    if name:
        return name
    if "aria-labelledby" in attrs:
        name = labelledby_text(el, doc)
        if name:
            return name
    name = normalize_ws(attrs.get("alt", ""))
    if name:
        return name
    name = _name_from_content(el)
    if name:
        return name
    name = normalize_ws(attrs.get("title", ""))
    if name:
        return name
    if el.tag == "input" and attrs.get("type", "").lower() in ("submit", "button", "reset"):
        return normalize_ws(attrs.get("value", ""))
    return ""


def visible_label_text(el: ElementNode, is_hidden: Callable[[ElementNode], bool] | None = None) -> str:
    """Rendered descendant text, skipping aria-hidden and hidden subtrees.

    ``is_hidden`` lets the caller plug in resolved-style visibility; by
    default only the ``hidden`` attribute and inline ``display:none`` count.
    """
    hidden = is_hidden or _default_hidden
    parts: list[str] = []
    stack: list[Node] = list(reversed(el.children))
    while stack:
        node = stack.pop()
        if isinstance(node, TextNode):
            parts.append(node.data)
        elif node.tag not in ("script", "style", "template") and not _is_aria_hidden(node) and not hidden(node):
            stack.extend(reversed(node.children))
    return normalize_ws("".join(parts))
