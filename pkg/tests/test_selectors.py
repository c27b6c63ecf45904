import pytest

from waccess_kit.dom import parse_html, query
from waccess_kit.selectors import UnsupportedSelector, parse_selector, parse_selector_list


@pytest.mark.parametrize("text,spec", [
    ("a", (0, 0, 1)),
    ("#nav .item a:hover", (1, 1, 1)),
    ("ul li.active > a[href]", (0, 2, 3)),
    ("*", (0, 0, 0)),
    ("#a .b.c", (1, 2, 0)),
])
def test_specificity(text, spec):
    assert parse_selector(text, strict=False).specificity == spec


def test_state_pseudos_only_outside_strict_mode():
    sel = parse_selector(".tip:hover .pop", strict=False)
    assert sel.states == {"hover"}
    assert sel.structural_key() == parse_selector(".tip:focus-within .pop", strict=False).structural_key()
    with pytest.raises(UnsupportedSelector):
        parse_selector("a:hover")


@pytest.mark.parametrize("text", ["a::before", "li:nth-child(2)", "a ~ b", "a + b", "div:not(.x)", ""])
def test_unsupported(text):
    with pytest.raises(UnsupportedSelector):
        parse_selector(text, strict=False)


def test_descendant_and_child_matching():
    doc = parse_html(b'<div class="x"><section><p id="p1">a</p></section><p id="p2">b</p></div><p id="p3">c</p>')
    assert [el.id for el in query(doc, ".x p")] == ["p1", "p2"]
    child = parse_selector(".x > p", strict=False)
    assert [el.id for el in doc.elements if child.matches(el)] == ["p2"]


def test_selector_list_and_attr_values():
    doc = parse_html(b'<a href="/x" rel="NoFollow">1</a><a>2</a><b data-k="v w">3</b>')
    sels = parse_selector_list('a[rel=nofollow], b[data-k="v w"]')
    assert [el.tag for el in doc.elements if any(s.matches(el) for s in sels)] == ["a", "b"]
