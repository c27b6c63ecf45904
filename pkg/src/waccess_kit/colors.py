"""Color values, CSS color parsing and WCAG luminance/contrast math."""

from __future__ import annotations

import colorsys
import math
import re
from dataclasses import dataclass


class ColorParseError(ValueError):
    """Raised when a CSS color value cannot be interpreted."""


@dataclass(frozen=True)
class Color:
    r: int
    g: int
    b: int
    alpha: float = 1.0

    def __post_init__(self) -> None:
        for ch in (self.r, self.g, self.b):
            if not 0 <= ch <= 255:
                raise ValueError(f"channel out of range: {ch}")
        if not 0.0 <= self.alpha <= 1.0:
            raise ValueError(f"alpha out of range: {self.alpha}")

    @property
    def opaque(self) -> bool:
        return self.alpha >= 1.0

    def hex(self) -> str:
        base = f"#{self.r:02x}{self.g:02x}{self.b:02x}"
        if self.alpha < 1.0:
            base += f"{_round_half_up(self.alpha * 255):02x}"
        return base

    def __str__(self) -> str:
        return self.hex()


BLACK = Color(0, 0, 0)
WHITE = Color(255, 255, 255)
TRANSPARENT = Color(0, 0, 0, 0.0)


def _round_half_up(x: float) -> int:
    return int(math.floor(x + 0.5))


def _clamp255(x: float) -> int:
    return max(0, min(255, _round_half_up(x)))


def composite(fg: Color, bg: Color) -> Color:
    """Alpha-composite ``fg`` over an opaque ``bg``; the result is opaque."""
    a = fg.alpha
    if a >= 1.0:
        return Color(fg.r, fg.g, fg.b)
    return Color(
        _clamp255(a * fg.r + (1 - a) * bg.r),
        _clamp255(a * fg.g + (1 - a) * bg.g),
        _clamp255(a * fg.b + (1 - a) * bg.b),
    )


def _linearize(channel: int) -> float:
    s = channel / 255.0
    if s <= 0.03928:
        return s / 12.92
    return ((s + 0.055) / 1.055) ** 2.4


def relative_luminance(c: Color) -> float:
    if c.alpha < 1.0:
        raise ValueError("relative luminance needs an opaque color; composite first")
    return 0.2126 * _linearize(c.r) + 0.7152 * _linearize(c.g) + 0.0722 * _linearize(c.b)


def contrast_ratio(a: Color, b: Color) -> float:
    la = relative_luminance(a)
    lb = relative_luminance(b)
    hi, lo = (la, lb) if la >= lb else (lb, la)
    return (hi + 0.05) / (lo + 0.05)


NAMED_COLORS: dict[str, str] = {
    "aliceblue": "#f0f8ff",
    "antiquewhite": "#faebd7",
    "aqua": "#00ffff",
    "aquamarine": "#7fffd4",
    "azure": "#f0ffff",
    "beige": "#f5f5dc",
    "bisque": "#ffe4c4",
    "black": "#000000",
    "blanchedalmond": "#ffebcd",
    "blue": "#0000ff",
    "blueviolet": "#8a2be2",
    "brown": "#a52a2a",
    "burlywood": "#deb887",
    "cadetblue": "#5f9ea0",
    "chartreuse": "#7fff00",
    "chocolate": "#d2691e",
    "coral": "#ff7f50",
    "cornflowerblue": "#6495ed",
    "cornsilk": "#fff8dc",
    "crimson": "#dc143c",
    "cyan": "#00ffff",
    "darkblue": "#00008b",
    "darkcyan": "#008b8b",
    "darkgoldenrod": "#b8860b",
    "darkgray": "#a9a9a9",
    "darkgreen": "#006400",
    "darkgrey": "#a9a9a9",
    "darkkhaki": "#bdb76b",
    "darkmagenta": "#8b008b",
    "darkolivegreen": "#556b2f",
    "darkorange": "#ff8c00",
    "darkorchid": "#9932cc",
    "darkred": "#8b0000",
    "darksalmon": "#e9967a",
    "darkseagreen": "#8fbc8f",
    "darkslateblue": "#483d8b",
    "darkslategray": "#2f4f4f",
    "darkslategrey": "#2f4f4f",
    "darkturquoise": "#00ced1",
    "darkviolet": "#9400d3",
    "deeppink": "#ff1493",
    "deepskyblue": "#00bfff",
    "dimgray": "#696969",
    "dimgrey": "#696969",
    "dodgerblue": "#1e90ff",
    "firebrick": "#b22222",
    "floralwhite": "#fffaf0",
    "forestgreen": "#228b22",
    "fuchsia": "#ff00ff",
    "gainsboro": "#dcdcdc",
    "ghostwhite": "#f8f8ff",
    "gold": "#ffd700",
    "goldenrod": "#daa520",
    "gray": "#808080",
    "green": "#008000",
    "greenyellow": "#adff2f",
    "grey": "#808080",
    "honeydew": "#f0fff0",
    "hotpink": "#ff69b4",
    "indianred": "#cd5c5c",
    "indigo": "#4b0082",
    "ivory": "#fffff0",
    "khaki": "#f0e68c",
    "lavender": "#e6e6fa",
    "lavenderblush": "#fff0f5",
    "lawngreen": "#7cfc00",
    "lemonchiffon": "#fffacd",
    "lightblue": "#add8e6",
    "lightcoral": "#f08080",
    "lightcyan": "#e0ffff",
    "lightgoldenrodyellow": "#fafad2",
    "lightgray": "#d3d3d3",
    "lightgreen": "#90ee90",
    "lightgrey": "#d3d3d3",
    "lightpink": "#ffb6c1",
    "lightsalmon": "#ffa07a",
    "lightseagreen": "#20b2aa",
    "lightskyblue": "#87cefa",
    "lightslategray": "#778899",
    "lightslategrey": "#778899",
    "lightsteelblue": "#b0c4de",
    "lightyellow": "#ffffe0",
    "lime": "#00ff00",
    "limegreen": "#32cd32",
    "linen": "#faf0e6",
    "magenta": "#ff00ff",
    "maroon": "#800000",
    "mediumaquamarine": "#66cdaa",
    "mediumblue": "#0000cd",
    "mediumorchid": "#ba55d3",
    "mediumpurple": "#9370db",
    "mediumseagreen": "#3cb371",
    "mediumslateblue": "#7b68ee",
    "mediumspringgreen": "#00fa9a",
    "mediumturquoise": "#48d1cc",
    "mediumvioletred": "#c71585",
    "midnightblue": "#191970",
    "mintcream": "#f5fffa",
    "mistyrose": "#ffe4e1",
    "moccasin": "#ffe4b5",
    "navajowhite": "#ffdead",
    "navy": "#000080",
    "oldlace": "#fdf5e6",
    "olive": "#808000",
    "olivedrab": "#6b8e23",
    "orange": "#ffa500",
    "orangered": "#ff4500",
    "orchid": "#da70d6",
    "palegoldenrod": "#eee8aa",
    "palegreen": "#98fb98",
    "paleturquoise": "#afeeee",
    "palevioletred": "#db7093",
    "papayawhip": "#ffefd5",
    "peachpuff": "#ffdab9",
    "peru": "#cd853f",
    "pink": "#ffc0cb",
    "plum": "#dda0dd",
    "powderblue": "#b0e0e6",
    "purple": "#800080",
    "rebeccapurple": "#663399",
    "red": "#ff0000",
    "rosybrown": "#bc8f8f",
    "royalblue": "#4169e1",
    "saddlebrown": "#8b4513",
    "salmon": "#fa8072",
    "sandybrown": "#f4a460",
    "seagreen": "#2e8b57",
    "seashell": "#fff5ee",
    "sienna": "#a0522d",
    "silver": "#c0c0c0",
    "skyblue": "#87ceeb",
    "slateblue": "#6a5acd",
    "slategray": "#708090",
    "slategrey": "#708090",
    "snow": "#fffafa",
    "springgreen": "#00ff7f",
    "steelblue": "#4682b4",
    "tan": "#d2b48c",
    "teal": "#008080",
    "thistle": "#d8bfd8",
    "tomato": "#ff6347",
    "turquoise": "#40e0d0",
    "violet": "#ee82ee",
    "wheat": "#f5deb3",
    "white": "#ffffff",
    "whitesmoke": "#f5f5f5",
    "yellow": "#ffff00",
    "yellowgreen": "#9acd32",
}

_HEX_RE = re.compile(r"#([0-9a-f]{3,8})")
_FUNC_RE = re.compile(r"(rgba?|hsla?)\((.*)\)")


def _split_args(body: str) -> list[str]:
    # Accept both legacy comma syntax and space syntax with "/ alpha".
    body = body.replace("/", " / ")
    if "," in body:
        parts = [p.strip() for p in body.split(",")]
    else:
        parts = [p for p in body.split() if p != "/"]
    return [p for p in parts if p]


def _alpha(token: str) -> float:
    token = token.strip()
    if token.endswith("%"):
        value = float(token[:-1]) / 100.0
    else:
        value = float(token)
    return min(1.0, max(0.0, value))


def _rgb_channel(token: str) -> int:
    if token.endswith("%"):
        return _clamp255(float(token[:-1]) * 255.0 / 100.0)
    return _clamp255(float(token))


def _hue(token: str) -> float:
    m = re.fullmatch(r"(-?[\d.]+)(deg|rad|turn|grad)?", token)
    if not m:
        raise ColorParseError(f"bad hue: {token!r}")
    value = float(m.group(1))
    unit = m.group(2) or "deg"
    if unit == "rad":
        value = math.degrees(value)
    elif unit == "turn":
        value *= 360.0
    elif unit == "grad":
        value *= 0.9
    return (value % 360.0) / 360.0


def _percent(token: str) -> float:
    if not token.endswith("%"):
        # CSS Color 4 allows bare numbers here.
        return min(1.0, max(0.0, float(token) / 100.0))
    return min(1.0, max(0.0, float(token[:-1]) / 100.0))


def parse_color(text: str) -> Color:
    """Parse a CSS color value.

    Supports hex forms, rgb()/rgba(), hsl()/hsla(), named colors and
    ``transparent``. Anything else (``currentColor``, gradients,
    ``var()``) raises :class:`ColorParseError`.
    """
    value = text.strip().lower()
    if value.endswith("!important"):
        value = value[: -len("!important")].strip()
    if not value:
        raise ColorParseError("empty color")
    if value == "transparent":
        return TRANSPARENT
    named = NAMED_COLORS.get(value)
    if named is not None:
        value = named
    m = _HEX_RE.fullmatch(value)
    if m:
        digits = m.group(1)
        if len(digits) in (3, 4):
            digits = "".join(ch * 2 for ch in digits)
        if len(digits) not in (6, 8):
            raise ColorParseError(f"bad hex color: {text!r}")
        r, g, b = (int(digits[i : i + 2], 16) for i in (0, 2, 4))
        alpha = int(digits[6:8], 16) / 255.0 if len(digits) == 8 else 1.0
        return Color(r, g, b, alpha)
    m = _FUNC_RE.fullmatch(value)
    if not m:
        raise ColorParseError(f"unrecognized color: {text!r}")
    func, args = m.group(1), _split_args(m.group(2))
    if len(args) not in (3, 4):
        raise ColorParseError(f"wrong argument count: {text!r}")
    try:
        alpha = _alpha(args[3]) if len(args) == 4 else 1.0
        if func.startswith("rgb"):
            r, g, b = (_rgb_channel(a) for a in args[:3])
            return Color(r, g, b, alpha)
        h = _hue(args[0])
        s = _percent(args[1])
        lightness = _percent(args[2])
        rf, gf, bf = colorsys.hls_to_rgb(h, lightness, s)
        return Color(_clamp255(rf * 255), _clamp255(gf * 255), _clamp255(bf * 255), alpha)
    except ValueError as exc:
        raise ColorParseError(f"bad color arguments: {text!r}") from exc


def try_parse_color(text: str) -> Color | None:
    try:
        return parse_color(text)
    except ColorParseError:
        return None
