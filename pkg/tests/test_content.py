from __future__ import annotations

import re

import pytest
from hypothesis import given
from hypothesis import strategies as st

from mathpdf import samples
from mathpdf.catalog import page_content
from mathpdf.content import (
    BeginText,
    EndText,
    MarkedContentSpan,
    Other,
    SetFont,
    ShowText,
    Transform,
    build_span_tree,
    find_span_by_mcid,
    flatten,
    iter_spans,
    make_span,
    parse_content,
    serialize_content,
)
from mathpdf.cos import PdfString, Ref, parse_document
from mathpdf.errors import DuplicateMcid, UnbalancedMarkedContent, UnbalancedTextBlock, WellFormednessError

FIG1B = (
    b"/mi <</MCID 9 /ActualText<FEFFD835DC58>/Alt(  k  )\n>>BDC\nBT\n/F30 10.9091 Tf\n [(k)]TJ\nET\nEMC\n"
    b"1 0 0 1 6.023 0 cm\n"
    b"/mo <</MCID 10 /ActualText<FEFF2208>/Alt(  as element of  )\n>>BDC\n1 0 0 1 3.03 0 cm\n"
    b"BT\n/F33 10.9091 Tf\n [(2)]TJ\nET\nEMC\n1 0 0 1 10.303 0 cm\n"
    b"/mi <</MCID 11 /ActualText<FEFF211D>/Alt(  real numbers  )\n>>BDC\nBT\n/F42 10.9091 Tf\n [(R)]TJ\nET\nEMC\n"
)


def fig5_items():
    return build_span_tree(parse_content(page_content(parse_document(samples.figure5()), Ref(5))))


def test_fig1b_ops():
    ops = parse_content(FIG1B)
    assert SetFont("F30", 10.9091) in ops
    assert ShowText([PdfString(b"k")]) in ops
    assert Transform((1, 0, 0, 1, 6.023, 0)) in ops


def test_fake_space_ops():
    ops = parse_content(b"BT /F79 1 Tf [( )]TJ ET")
    assert ops == [BeginText(), SetFont("F79", 1), ShowText([PdfString(b" ")]), EndText()]


def test_empty_stream():
    assert parse_content(b"") == []
    assert build_span_tree([]) == []


def test_fig1b_span_tree():
    spans = [i for i in build_span_tree(parse_content(FIG1B)) if isinstance(i, MarkedContentSpan)]
    assert [(s.tag, s.mcid) for s in spans] == [("mi", 9), ("mo", 10), ("mi", 11)]
    assert [s.actual_text for s in spans] == ["\U0001d458", "∈", "ℝ"]
    assert spans[1].alt == "  as element of  "


def test_fig5_span_tree():
    items = fig5_items()
    (af,) = [i for i in items if isinstance(i, MarkedContentSpan) and i.named_resource == "inline-1"]
    kids = [c for c in af.children if isinstance(c, MarkedContentSpan)]
    assert [c.tag for c in kids] == ["AccessTag", "mi", "mo", "mi", "AccessTag"]
    assert [c.mcid for c in kids] == [8, 9, 10, 11, 12]


def test_no_bdc_means_no_spans():
    items = build_span_tree(parse_content(b"BT /F1 12 Tf (x) Tj ET 1 0 0 1 5 5 cm"))
    assert list(iter_spans(items)) == []
    assert len(items) == 5


@pytest.mark.parametrize("name", ["figure1", "figure3", "figure5", "untagged_formula", "multipage", "split_formula"])
def test_span_tree_round_trip(name):
    doc = parse_document(samples.corpus()[name])
    from mathpdf.catalog import page_refs

    for page in page_refs(doc):
        items = build_span_tree(parse_content(page_content(doc, page)))
        again = build_span_tree(parse_content(serialize_content(items)))
        assert again == items


def test_bare_show_text_rejected():
    with pytest.raises(WellFormednessError):
        serialize_content([ShowText([PdfString(b"x")])])


def test_mo_span_string_forms():
    span = make_span("mo", [], mcid=10, actual_text="∈", alt="  as element of  ")
    out = serialize_content([span])
    assert out == b"/mo << /MCID 10 /ActualText <FEFF2208> /Alt (  as element of  ) >>BDC\nEMC\n"


def test_find_span_by_mcid():
    items = fig5_items()
    assert find_span_by_mcid(items, 10).tag == "mo"
    assert find_span_by_mcid(items, 99) is None
    dup = build_span_tree(parse_content(FIG1B.replace(b"MCID 11", b"MCID 9")))
    with pytest.raises(DuplicateMcid):
        find_span_by_mcid(dup, 9)


@pytest.mark.parametrize(
    "data, error",
    [
        (b"/P <</MCID 1>>BDC BT ET", UnbalancedMarkedContent),
        (b"BT ET EMC", UnbalancedMarkedContent),
        (b"BT BT ET ET", UnbalancedTextBlock),
        (b"ET", UnbalancedTextBlock),
        (b"BT (x) Tj", UnbalancedTextBlock),
        (b"(x) Tj", UnbalancedTextBlock),
    ],
)
def test_unbalanced(data, error):
    with pytest.raises(error):
        build_span_tree(parse_content(data))


def test_kerning_and_unknown_ops_preserved():
    data = b"q 0.5 g [(A) -120 (V)] TJ Q"
    ops = parse_content(b"BT " + data.replace(b"q ", b"").replace(b" Q", b"") + b" ET")
    show = [o for o in ops if isinstance(o, ShowText)][0]
    assert show.items[1] == -120
    other = parse_content(b"q 0.5 g Q")
    assert [o.operator for o in other if isinstance(o, Other)] == ["q", "g", "Q"]


def test_inline_image_passes_through():
    data = b"q BI /W 2 /H 1 /BPC 8 /CS /G ID \x00\xff\nEI Q"
    ops = parse_content(data)
    assert [o.operator for o in ops if isinstance(o, Other)] == ["q", "BI", "Q"]
    assert parse_content(serialize_content(ops)) == ops


def test_mcids_unique_per_page():
    items = fig5_items()
    mcids = [s.mcid for s in iter_spans(items) if s.mcid is not None]
    assert len(mcids) == len(set(mcids))


@given(st.lists(st.sampled_from(["text", "cm", "span"]), max_size=12), st.integers(0, 50))
def test_generated_trees_round_trip(shape, base):
    items = []
    for i, kind in enumerate(shape):
        if kind == "text":
            items += [BeginText(), SetFont("F1", 10), ShowText([PdfString(b"t%d" % i)]), EndText()]
        elif kind == "cm":
            items.append(Transform((1, 0, 0, 1, i, 0)))
        else:
            items.append(make_span("mi", [BeginText(), ShowText([PdfString(b"(x)")]), EndText()],
                                   mcid=base + i, actual_text="ℝ"))
    data = serialize_content(items)
    assert build_span_tree(parse_content(data)) == items
    assert flatten(build_span_tree(parse_content(data))) == parse_content(data)
    assert re.search(rb"[^\n]\Z", data) is None
