import pytest

from waccess_kit.dom import ParseError, accessible_name, parse_html, query, visible_label_text
from waccess_kit.selectors import UnsupportedSelector


def kinds(doc):
    return [(t.kind, t.tag) for t in doc.token_log]


def test_well_formed_token_log():
    doc = parse_html(b"<html lang=en><body><p>x</p></body></html>")
    assert [t.kind for t in doc.token_log].count("open") == 3
    assert [t.kind for t in doc.token_log].count("close") == 3
    assert [el.tag for el in doc.root.iter()] == ["html", "head", "body", "p"] or \
        [el.tag for el in doc.root.iter() if not el.synthetic] == ["html", "body", "p"]


def test_recovery_keeps_raw_tokens():
    doc = parse_html(b"<p><b>x</p>")
    assert ("open", "b") in kinds(doc)
    assert ("close", "b") not in kinds(doc)
    assert [el.tag for el in query(doc, "p b")] == ["b"]


def test_empty_input_raises():
    with pytest.raises(ParseError):
        parse_html(b"")


def test_offsets_strictly_increase():
    doc = parse_html("<div><p>é</p><img src=x><br/></div>".encode())
    offsets = [t.byte_offset for t in doc.token_log]
    assert offsets == sorted(set(offsets))


def test_snippet_round_trip_multibyte():
    raw = '<p title="ünïcode">é</p><img alt="日本" src=x>'.encode()
    doc = parse_html(raw)
    for el in doc.elements:
        if el.synthetic:
            continue
        start, end = el.source_span
        assert raw[start:end].decode() == doc.snippet(el)


def test_meta_charset_honoured():
    raw = '<meta charset="iso-8859-1"><p>caf\xe9</p>'.encode("latin-1")
    doc = parse_html(raw)
    assert "café" in doc.root.text_content()


def test_attributes_case_folded_first_wins():
    doc = parse_html(b'<div ID="a" id="b" Class="x y"></div>')
    (div,) = query(doc, "div")
    assert div.attributes["id"] == "a"
    assert div.classes == {"x", "y"}


def test_query_subset():
    doc = parse_html(b'<form><input type=password><input type=text><input TYPE="PASSWORD"></form><img><img><img>')
    assert len(query(doc, "img")) == 3
    assert len(query(doc, "input[type=password]")) == 2
    assert query(doc, "section") == []
    with pytest.raises(UnsupportedSelector):
        query(doc, "a:hover")


def test_query_excludes_synthetic():
    doc = parse_html(b"<p>x</p>")
    assert query(doc, "html") == []
    assert query(doc, "body") == []


def test_raw_text_elements_not_tokenized():
    doc = parse_html(b"<script>if (a < b) { document.write('<p>') }</script><p>y</p>")
    assert [t.tag for t in doc.token_log if t.kind == "open"] == ["script", "p"]


@pytest.mark.parametrize("html,expected", [
    ('<a aria-label="Home page">Home</a>', "Home page"),
    ('<a href=x><img src=i alt="Logo"></a>', "Logo"),
    ("<button></button>", ""),
    ('<span id=l1>First</span><span id=l2>name</span><input aria-labelledby="l1 l2">', "First name"),
    ('<input type=submit value="Send it">', "Send it"),
    ('<a href=x title="Tip"></a>', "Tip"),
    ("<a href=x>  Read \n more </a>", "Read more"),
])
def test_accessible_name(html, expected):
    doc = parse_html(html)
    target = [el for el in doc.elements if el.tag in ("a", "button", "input")][-1]
    assert accessible_name(target, doc) == expected


def test_dangling_labelledby_warns():
    doc = parse_html(b'<button aria-labelledby="nope">x</button>')
    (b,) = query(doc, "button")
    assert accessible_name(b, doc) == "x"
    assert any("nope" in w for w in doc.parse_warnings)


@pytest.mark.parametrize("html,expected", [
    ("<button>Submit <span aria-hidden=true>›</span></button>", "Submit"),
    ("<button aria-label=Go>Go</button>", "Go"),
    ("<button><img alt=Go></button>", ""),
    ('<button>Buy <span style="display:none">now</span></button>', "Buy"),
])
def test_visible_label_text(html, expected):
    doc = parse_html(html)
    (b,) = query(doc, "button")
    assert visible_label_text(b) == expected


def test_locator_and_resolve_url():
    doc = parse_html(b'<div id="m"><p>x</p></div>', url="https://example.org/a/b.html")
    (p,) = query(doc, "p")
    assert doc.locator(p).endswith(f"div#m > p @{doc.byte_offset(p)}")
    assert doc.resolve_url("../c") == "https://example.org/c"


def test_bom_offsets():
    raw = b"\xef\xbb\xbf<p>x</p>"
    doc = parse_html(raw)
    (p,) = query(doc, "p")
    assert raw[p.source_span[0]:p.source_span[1]] == b"<p>"
