from decimal import Decimal, getcontext

import pytest

from waccess_kit.colors import (BLACK, WHITE, Color, ColorParseError, composite, contrast_ratio, parse_color,
                                relative_luminance, try_parse_color)

# Frozen before the build from an independent high-precision evaluation.
ORACLE_ON_WHITE = {
    "#767676": 4.54222,
    "#777777": 4.47809,
    "#949494": 3.03347,
    "#eeeeee": 1.16023,
    "#333333": 12.6347,
    "#888888": 3.54489,
    "#595959": 7.00473,
    "#aaaaaa": 2.32312,
}


def decimal_ratio(hex_a: str, hex_b: str) -> Decimal:
    """Second implementation of the luminance formula in Decimal arithmetic."""
    getcontext().prec = 40

    def lum(h):
        total = Decimal(0)
        for weight, i in ((Decimal("0.2126"), 1), (Decimal("0.7152"), 3), (Decimal("0.0722"), 5)):
            s = Decimal(int(h[i:i + 2], 16)) / Decimal(255)
            lin = s / Decimal("12.92") if s <= Decimal("0.03928") else ((s + Decimal("0.055")) / Decimal("1.055")) ** Decimal("2.4")
            total += weight * lin
        return total

    a, b = lum(hex_a), lum(hex_b)
    hi, lo = max(a, b), min(a, b)
    return (hi + Decimal("0.05")) / (lo + Decimal("0.05"))


@pytest.mark.parametrize("hex_color,expected", sorted(ORACLE_ON_WHITE.items()))
def test_contrast_matches_frozen_oracle(hex_color, expected):
    assert contrast_ratio(parse_color(hex_color), WHITE) == pytest.approx(expected, abs=1e-4)
    assert float(decimal_ratio(hex_color, "#ffffff")) == pytest.approx(expected, abs=1e-4)


def test_extremes():
    assert contrast_ratio(BLACK, WHITE) == pytest.approx(21.0, abs=1e-9)
    assert contrast_ratio(WHITE, WHITE) == 1.0
    assert relative_luminance(BLACK) == 0.0
    assert relative_luminance(WHITE) == pytest.approx(1.0)


def test_luminance_767676():
    assert relative_luminance(parse_color("#767676")) == pytest.approx(0.18116, abs=1e-5)


def test_luminance_requires_opaque():
    with pytest.raises(ValueError):
        relative_luminance(Color(0, 0, 0, 0.5))


@pytest.mark.parametrize("text,expected", [
    ("#000", Color(0, 0, 0)),
    ("#FFF", Color(255, 255, 255)),
    ("#11223344", Color(0x11, 0x22, 0x33, 0x44 / 255)),
    ("#abcd", Color(0xAA, 0xBB, 0xCC, 0xDD / 255)),
    ("rgba(255,0,0,0.5)", Color(255, 0, 0, 0.5)),
    ("rgb(100%, 50%, 0%)", Color(255, 128, 0)),
    ("rgb(10 20 30 / 50%)", Color(10, 20, 30, 0.5)),
    ("hsl(120, 100%, 25%)", Color(0, 128, 0)),
    ("hsla(0, 100%, 50%, .25)", Color(255, 0, 0, 0.25)),
    ("rebeccapurple", Color(0x66, 0x33, 0x99)),
    ("  Navy ", Color(0, 0, 128)),
    ("transparent", Color(0, 0, 0, 0.0)),
])
def test_parse_color(text, expected):
    got = parse_color(text)
    assert (got.r, got.g, got.b) == (expected.r, expected.g, expected.b)
    assert got.alpha == pytest.approx(expected.alpha)


@pytest.mark.parametrize("text", ["", "#12", "#ggg", "rgb(1,2)", "notacolor", "hsl(x, 1%, 1%)", "url(a.png)"])
def test_parse_color_errors(text):
    with pytest.raises(ColorParseError):
        parse_color(text)
    assert try_parse_color(text) is None


def test_composite():
    assert composite(Color(0, 0, 0, 0.5), WHITE) == Color(128, 128, 128)
    assert composite(Color(10, 20, 30), Color(200, 200, 200)) == Color(10, 20, 30)
    assert composite(Color(0, 0, 0, 0.0), Color(1, 2, 3)) == Color(1, 2, 3)


def test_color_validates_ranges():
    with pytest.raises(ValueError):
        Color(256, 0, 0)
    with pytest.raises(ValueError):
        Color(0, 0, 0, 1.5)
    assert Color(1, 2, 3).hex() == "#010203"
