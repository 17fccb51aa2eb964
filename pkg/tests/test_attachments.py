from __future__ import annotations

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from mathpdf import samples
from mathpdf.attachments import (
    AnnotationTarget,
    ContentSpanTarget,
    DocumentTarget,
    PageTarget,
    StructureTarget,
    associate,
    embed_file,
    extract_attachment,
    find_targets,
    list_attachments,
)
from mathpdf.catalog import markinfo_af, page_refs
from mathpdf.cos import PdfString, Ref, parse_document, serialize_document
from mathpdf.errors import DuplicateName, IntegrityMismatch, NameNotFound, NotAFilespec, UnsupportedMethod
from mathpdf.trees import FLAT_LIMIT, read_name_tree
from mathpdf.validate import validate_document

# md5sum(1) output over the payload bytes, recorded before the library existed
ORACLE_MD5 = {
    "tex": "E5263647976A4F5937236A24BFC90AAA",
    "mathml": "325FF798544EAA9CC781C578EC90CC86",
    "empty": "D41D8CD98F00B204E9800998ECF8427E",
}


def embedded_stream(doc, spec_ref):
    return doc.resolve(doc.resolve(spec_ref)["EF"]["F"])


def test_embed_tex(minimal):
    doc, spec = embed_file(minimal, samples.TEX_PAYLOAD, "inline-1.tex", "TeX source for inline math",
                           "Source", "application/x-tex")
    stream = embedded_stream(doc, spec)
    params = stream.dict["Params"]
    assert len(stream.data) == 16 and params["Size"] == 16
    assert params["CheckSum"].value.decode() == ORACLE_MD5["tex"]
    out = serialize_document(doc)
    assert b"/Subtype /application#2Fx-tex" in out and b"/Length 16 " in out
    assert b"/AFRelationship /Source" in out


def test_embed_mathml(minimal):
    doc, spec = embed_file(minimal, samples.MATHML_PAYLOAD, "inline-1.xml", "MathML", "Supplement",
                           "application/mathml+xml")
    stream = embedded_stream(doc, spec)
    assert len(stream.data) == 164 and stream.dict["Params"]["Size"] == 164
    assert stream.dict["Params"]["CheckSum"].value.decode() == ORACLE_MD5["mathml"]
    assert b"/application#2Fmathml+xml" in serialize_document(doc)


def test_embed_empty(minimal):
    doc, spec = embed_file(minimal, b"", "empty.txt", "nothing")
    params = embedded_stream(doc, spec).dict["Params"]
    assert params["Size"] == 0 and params["CheckSum"].value.decode() == ORACLE_MD5["empty"]


def test_embed_refusals(minimal):
    doc, _ = embed_file(minimal, b"x", "a.txt", "a")
    with pytest.raises(DuplicateName):
        embed_file(doc, b"y", "a.txt", "again")
    with pytest.raises(ValueError):
        embed_file(minimal, b"x", "b.txt", "b", "Sauce")


def test_name_tree_stays_sorted(minimal):
    doc = minimal
    for name in ["zeta.tex", "alpha.tex", "Mid.tex", "beta.xml"]:
        doc, _ = embed_file(doc, name.encode(), name, name)
    names_root = doc.resolve(doc.catalog["Names"])["EmbeddedFiles"]
    keys = [k.value for k, _ in read_name_tree(doc, names_root)]
    assert keys == sorted(keys) == [b"Mid.tex", b"alpha.tex", b"beta.xml", b"zeta.tex"]
    assert "Kids" not in doc.resolve(names_root)


def test_large_name_tree_splits(minimal):
    from mathpdf.trees import build_name_tree

    doc = minimal.copy()
    pairs = [(b"f%05d" % i, i) for i in range(FLAT_LIMIT + 5)]
    root = build_name_tree(doc, list(reversed(pairs)))
    node = doc.objects[root]
    assert len(node["Kids"]) == 2
    first = doc.resolve(node["Kids"][0])
    assert first["Limits"] == [PdfString(b"f00000"), PdfString(b"f01023")]
    assert read_name_tree(doc, root) == [(PdfString(k), v) for k, v in pairs]


def two_files(doc):
    doc, tex = embed_file(doc, samples.TEX_PAYLOAD, "inline-1.tex", "TeX", "Source", "application/x-tex")
    doc, xml = embed_file(doc, samples.MATHML_PAYLOAD, "inline-1.xml", "MathML", "Supplement",
                          "application/mathml+xml")
    return doc, [tex, xml]


def test_content_span_association(fig1):
    doc, refs = two_files(fig1)
    out = associate(doc, refs, ContentSpanTarget(Ref(5), "inline-1"))
    props = out.resolve(out.resolve(out.objects[Ref(5)]["Resources"])["Properties"])
    assert props["inline-1"] == refs
    assert markinfo_af(out) == refs


def test_document_association(fig1):
    doc, refs = two_files(fig1)
    out = associate(doc, refs, DocumentTarget())
    assert out.catalog["AF"] == refs
    assert associate(out, refs, DocumentTarget()).equivalent(out)


def test_empty_association_is_noop(fig3):
    assert associate(fig3, [], DocumentTarget()).equivalent(fig3)


def test_page_association(fig1):
    doc, refs = two_files(fig1)
    out = associate(doc, refs[:1], PageTarget(Ref(5)))
    assert out.objects[Ref(5)]["AF"] == refs[:1]
    assert validate_document(out).clean


def test_annotations_rejected(fig3):
    with pytest.raises(UnsupportedMethod):
        associate(fig3, [Ref(27)], AnnotationTarget(Ref(5)))


def test_non_filespec_rejected(fig3):
    with pytest.raises(NotAFilespec):
        associate(fig3, [Ref(5)], DocumentTarget())


def test_shared_properties():
    doc = parse_document(samples.corpus()["multipage"])
    doc, spec = embed_file(doc, b"\\(x\\)", "x.tex", "x", "Source")
    out = associate(doc, [spec], ContentSpanTarget(page_refs(doc)[0], "eq-1", shared=True))
    targets = find_targets(out)[spec]
    assert {t.page for t in targets} == set(page_refs(out))


def test_list_fig3(fig3):
    report = list_attachments(fig3)
    assert [e.name for e in report] == [
        "2013-Assign2-soln-savedefs.tex", "2013-Assign2-soln.tex", "inline-1.tex", "inline-1.xml",
    ]
    tex = report.get("inline-1.tex")
    assert tex.relationship == "Source" and tex.size == 16 and tex.registered
    assert {str(t) for t in tex.targets} == {"Structure(112)", "ContentSpan(page 5, inline-1)"}
    assert report.findings == []


def test_unregistered_finding(fig3):
    fig3.objects[Ref(1859)].clear()
    kinds = {kind for kind, _ in list_attachments(fig3).findings}
    assert kinds == {"associated-but-unregistered"}


def test_no_attachments(minimal):
    assert len(list_attachments(minimal)) == 0


def test_extract(fig3):
    xml = extract_attachment(fig3, "inline-1.xml")
    assert len(xml.payload) == 164 and xml.payload.startswith(b"<math")
    assert b'xmlns="http://www.w3.org/1998/Math/MathML"' in xml.payload
    assert b"\\( k \\in \\RR \\)" in extract_attachment(fig3, "inline-1.tex").payload
    with pytest.raises(NameNotFound):
        extract_attachment(fig3, "missing.tex")


def test_tampered_size(fig3):
    fig3.objects[Ref(26)].dict["Params"]["Size"] = 17
    with pytest.raises(IntegrityMismatch):
        extract_attachment(fig3, "inline-1.tex")
    assert extract_attachment(fig3, "inline-1.tex", verify=False).declared_size == 17


def test_string_size_accepted(fig3):
    fig3.objects[Ref(26)].dict["Params"]["Size"] = PdfString(b"16")
    assert extract_attachment(fig3, "inline-1.tex").declared_size == 16


TARGETS = st.sampled_from(["doc", "page", "span", "struct", "span-shared"])


@settings(max_examples=30, deadline=None)
@given(st.lists(st.tuples(TARGETS, st.sets(st.sampled_from([0, 1]), min_size=1)), min_size=1, max_size=6))
def test_registry_closure(steps):
    doc, refs = two_files(parse_document(samples.figure1()))
    for kind, picks in steps:
        chosen = [refs[i] for i in sorted(picks)]
        target = {
            "doc": DocumentTarget(),
            "page": PageTarget(Ref(5)),
            "span": ContentSpanTarget(Ref(5), "inline-1"),
            "span-shared": ContentSpanTarget(Ref(5), "inline-2", shared=True),
            "struct": StructureTarget(Ref(112)),
        }[kind]
        doc = associate(doc, chosen, target)
    registry = markinfo_af(doc)
    used = set(find_targets(doc))
    assert set(registry) == used and len(registry) == len(set(registry))
    assert validate_document(doc).clean
