# Selector subset shared by DOM queries and the CSS cascade.
#
# query() accepts: tag, *, #id, .class, [attr], [attr=val], descendant
# combinator and comma groups. Stylesheets additionally use the child
# combinator and the state pseudo-classes below; anything else is rejected
# so the caller can skip the rule.

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import TYPE_CHECKING

if TYPE_CHECKING:
    from .dom import ElementNode


class UnsupportedSelector(ValueError):
    """Raised for selector syntax outside the supported subset."""


HOVER = "hover"
FOCUS = "focus"

# pseudo-class -> interaction state it describes (None = structural no-op)
STATE_PSEUDOS: dict[str, str | None] = {
    "hover": HOVER,
    "focus": FOCUS,
    "focus-visible": FOCUS,
    "focus-within": FOCUS,
    "link": None,
    "visited": None,
    "any-link": None,
}

_IDENT = r"-?(?:[A-Za-z_\u00a0-\uffff]|\\.)(?:[\w\-\u00a0-\uffff]|\\.)*"
_TOKEN_RE = re.compile(
    rf"""
    (?P<ws>\s+)
  | (?P<child>\s*>\s*)
  | (?P<star>\*)
  | (?P<tag>{_IDENT})
  | \#(?P<id>(?:[\w\-\u00a0-\uffff]|\\.)+)
  | \.(?P<cls>{_IDENT})
  | \[\s*(?P<attr>[^\s~|^$*=\]]+)\s*(?:(?P<op>[~|^$*]?=)\s*(?:"(?P<dq>[^"]*)"|'(?P<sq>[^']*)'|(?P<uq>[^\s\]]+))\s*)?(?:\s+[iIsS])?\]
  | (?P<pseudo>::?{_IDENT}(?:\([^)]*\))?)
    """,
    re.VERBOSE,
)

_KINDS = ("ws", "child", "star", "tag", "id", "cls", "attr", "pseudo")
_CASE_INSENSITIVE_ATTRS = frozenset({"type", "role", "rel", "dir"})


def _unescape(ident: str) -> str:
    return re.sub(r"\\(.)", r"\1", ident)


@dataclass(frozen=True)
class Compound:
    tag: str | None = None
    id: str | None = None
    classes: tuple[str, ...] = ()
    attrs: tuple[tuple[str, str | None], ...] = ()
    states: tuple[str, ...] = ()

    def matches(self, el: ElementNode) -> bool:
        if self.tag is not None and el.tag != self.tag:
            return False
        attrs = el.attributes
        if self.id is not None and attrs.get("id") != self.id:
            return False
        if self.classes:
            have = el.classes
            if not all(c in have for c in self.classes):
                return False
        for name, value in self.attrs:
            if name not in attrs:
                return False
            if value is not None:
                actual = attrs[name]
                if name in _CASE_INSENSITIVE_ATTRS:
                    if actual.strip().lower() != value.lower():
                        return False
                elif actual != value:
                    return False
        return True


@dataclass(frozen=True)
class Selector:
    text: str
    compounds: tuple[Compound, ...]
    combinators: tuple[str, ...]  # between compounds: " " or ">"

    @property
    def subject(self) -> Compound:
        return self.compounds[-1]

    @property
    def specificity(self) -> tuple[int, int, int]:
        """(ids, classes+attributes, tags); state pseudo-classes excluded."""
        ids = sum(1 for c in self.compounds if c.id is not None)
        classes = sum(len(c.classes) + len(c.attrs) for c in self.compounds)
        tags = sum(1 for c in self.compounds if c.tag is not None)
        return ids, classes, tags

    @property
    def state_count(self) -> int:
        return sum(len(c.states) for c in self.compounds)

    @property
    def states(self) -> frozenset[str]:
        return frozenset(s for c in self.compounds for s in c.states)

    def structural_key(self) -> tuple:
        """Selector identity with interaction states removed."""
        return (
            tuple(Compound(c.tag, c.id, c.classes, c.attrs) for c in self.compounds),
            self.combinators,
        )

    def matches(self, el: ElementNode) -> bool:
        """Structural match; interaction states are treated as satisfied."""
        if not self.compounds[-1].matches(el):
            return False
        return self._match_from(len(self.compounds) - 2, el)

    def _match_from(self, idx: int, el: ElementNode) -> bool:
        if idx < 0:
            return True
        comb = self.combinators[idx]
        compound = self.compounds[idx]
        node = el.parent
        if comb == ">":
            return node is not None and compound.matches(node) and self._match_from(idx - 1, node)
        while node is not None:
            if compound.matches(node) and self._match_from(idx - 1, node):
                return True
            node = node.parent
        return False


def parse_selector(text: str, *, strict: bool = True) -> Selector:
    """Parse one complex selector.

    ``strict`` limits the syntax to what DOM queries allow. Non-strict mode
    (stylesheets) also takes ``>`` and the interaction pseudo-classes.
    """
    src = text.strip()
    if not src:
        raise UnsupportedSelector("empty selector")
    compounds: list[Compound] = []
    combinators: list[str] = []
    cur: dict = {}
    pending_comb: str | None = None
    pos = 0

    def flush() -> None:
        nonlocal cur
        if cur:
            compounds.append(
                Compound(
                    tag=cur.get("tag"),
                    id=cur.get("id"),
                    classes=tuple(cur.get("classes", ())),
                    attrs=tuple(cur.get("attrs", ())),
                    states=tuple(cur.get("states", ())),
                )
            )
        cur = {}

    while pos < len(src):
        m = _TOKEN_RE.match(src, pos)
        if m is None:
            raise UnsupportedSelector(f"unsupported syntax at {src[pos:pos + 10]!r} in {text!r}")
        kind = next(k for k in _KINDS if m.group(k) is not None)
        pos = m.end()
        if kind in ("ws", "child"):
            if kind == "child" and strict:
                raise UnsupportedSelector(f"child combinator not supported in queries: {text!r}")
            if not cur:
                if kind == "child" and (not compounds or pending_comb == ">"):
                    raise UnsupportedSelector(f"dangling combinator in {text!r}")
                if kind == "child":
                    pending_comb = ">"
                continue
            flush()
            pending_comb = ">" if kind == "child" else " "
            continue
        if not cur and compounds:
            combinators.append(pending_comb or " ")
        pending_comb = None
        if kind == "star":
            if cur:
                raise UnsupportedSelector(f"misplaced * in {text!r}")
            cur["any"] = True
        elif kind == "tag":
            if cur:
                raise UnsupportedSelector(f"misplaced type selector in {text!r}")
            cur["tag"] = _unescape(m.group("tag")).lower()
        elif kind == "id":
            if "id" in cur:
                raise UnsupportedSelector(f"multiple ids in {text!r}")
            cur["id"] = _unescape(m.group("id"))
        elif kind == "cls":
            cur.setdefault("classes", []).append(_unescape(m.group("cls")))
        elif kind == "attr":
            op = m.group("op")
            if op not in (None, "="):
                raise UnsupportedSelector(f"attribute operator {op!r} not supported")
            value = None
            if op:
                value = next(v for v in (m.group("dq"), m.group("sq"), m.group("uq")) if v is not None)
            cur.setdefault("attrs", []).append((m.group("attr").lower(), value))
        elif kind == "pseudo":
            raw = m.group("pseudo")
            if strict or raw.startswith("::") or "(" in raw:
                raise UnsupportedSelector(f"pseudo selector {raw!r} not supported")
            name = raw[1:].lower()
            if name not in STATE_PSEUDOS:
                raise UnsupportedSelector(f"pseudo-class {raw!r} not supported")
            state = STATE_PSEUDOS[name]
            cur.setdefault("states", [])
            if state is not None:
                cur["states"].append(state)
    if pending_comb == ">" and not cur:
        raise UnsupportedSelector(f"dangling combinator in {text!r}")
    flush()
    if not compounds:
        raise UnsupportedSelector(f"empty selector: {text!r}")
    return Selector(text=src, compounds=tuple(compounds), combinators=tuple(combinators))


def split_selector_list(text: str) -> list[str]:
    parts, depth, buf = [], 0, []
    quote = None
    for ch in text:
        if quote:
            buf.append(ch)
            if ch == quote:
                quote = None
            continue
        if ch in "\"'":
            quote = ch
        elif ch in "([":
            depth += 1
        elif ch in ")]":
            depth = max(0, depth - 1)
        elif ch == "," and depth == 0:
            parts.append("".join(buf))
            buf = []
            continue
        buf.append(ch)
    parts.append("".join(buf))
    return [p.strip() for p in parts]


def parse_selector_list(text: str, *, strict: bool = True) -> list[Selector]:
    return [parse_selector(part, strict=strict) for part in split_selector_list(text)]
