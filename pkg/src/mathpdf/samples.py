"""Hand-assembled sample PDFs.

These files are built as raw text with their own offset bookkeeping, so
they do not depend on :func:`mathpdf.cos.serialize_document`. They mirror
the object layout of an inline formula ``k ∈ ℝ`` tagged with MathML
structure, associated LaTeX/MathML attachments and fake-space access tags,
and are used by the test-suite and by ``mathpdf demo``.
"""

from __future__ import annotations

from typing import Callable

__all__ = [
    "TEX_PAYLOAD",
    "MATHML_PAYLOAD",
    "MAIN_TEX_PAYLOAD",
    "SAVEDEFS_PAYLOAD",
    "assemble",
    "minimal",
    "figure1",
    "figure3",
    "figure5",
    "untagged_formula",
    "split_formula",
    "corpus",
]

TEX_PAYLOAD = b"\\( k \\in \\RR \\)\n"
MATHML_PAYLOAD = (
    b'<math\n xmlns="http://www.w3.org/1998/Math/MathML"\n display="inline" ><mrow\n'
    b'><mi \n>k</mi> <mo \nclass="MathClass-rel">&#x2208;</mo> <mi \n>&#x211D;</mi></mrow></math>\n'
)
MAIN_TEX_PAYLOAD = (
    b"\\documentclass{article}\n\\usepackage{savedefs}\n\\begin{document}\n"
    b"Let \\( k \\in \\RR \\) be real.\n\\end{document}\n"
)
SAVEDEFS_PAYLOAD = b"\\newcommand{\\RR}{\\mathbb{R}}\n"

# Digests from md5sum(1) over the payload bytes above.
_MD5 = {
    TEX_PAYLOAD: "E5263647976A4F5937236A24BFC90AAA",
    MATHML_PAYLOAD: "325FF798544EAA9CC781C578EC90CC86",
    MAIN_TEX_PAYLOAD: "48AAE2FDCB599639F2E81A294D85805B",
    SAVEDEFS_PAYLOAD: "4F273DB4E6934C42F6D8073415BFDA61",
}


def stream(dict_body: bytes, data: bytes) -> bytes:
    return b"<<" + dict_body + b" /Length %d>>\nstream\n" % len(data) + data + b"\nendstream"


def assemble(
    objects: list[tuple[int, bytes]],
    trailer: bytes,
    *,
    eol: bytes = b"\n",
    version: bytes = b"1.7",
    generations: dict[int, int] | None = None,
) -> bytes:
    """Lay out ``objects`` in the given order and append a classic xref table.

    ``eol`` replaces the structural line breaks; object bodies are emitted
    verbatim.
    """
    generations = generations or {}
    out = bytearray(b"%PDF-" + version + eol + b"%\xe2\xe3\xcf\xd3" + eol)
    offsets: dict[int, int] = {}
    for num, body in objects:
        offsets[num] = len(out)
        out += b"%d %d obj" % (num, generations.get(num, 0)) + eol + body + eol + b"endobj" + eol
    size = max(offsets) + 1
    xref_at = len(out)
    out += b"xref" + eol + b"0 %d" % size + eol
    free = [n for n in range(1, size) if n not in offsets] + [0]
    out += b"%010d 65535 f\r\n" % free[0]
    chain = iter(free[1:])
    for n in range(1, size):
        if n in offsets:
            out += b"%010d %05d n\r\n" % (offsets[n], generations.get(n, 0))
        else:
            out += b"%010d 00001 f\r\n" % next(chain)
    out += b"trailer" + eol + b"<< /Size %d " % size + trailer + b" >>" + eol
    out += b"startxref" + eol + b"%d" % xref_at + eol + b"%%EOF" + eol
    return bytes(out)


def minimal() -> bytes:
    """Four objects: catalog, page tree, one page and its content stream."""
    content = b"BT\n/F1 12 Tf\n72 720 Td\n(Hello) Tj\nET"
    return assemble(
        [
            (1, b"<< /Type /Catalog /Pages 2 0 R >>"),
            (2, b"<< /Type /Pages /Kids [3 0 R] /Count 1 >>"),
            (3, b"<< /Type /Page /Parent 2 0 R /MediaBox [0 0 612 792] /Contents 4 0 R /Resources << >> >>"),
            (4, stream(b"", content)),
        ],
        b"/Root 1 0 R",
    )


# -- the k ∈ ℝ formula ------------------------------------------------------

_LEAD = b"""/P <</MCID 7>>BDC
BT
/F30 10.9091 Tf
1 0 0 1 72 700 Tm
[(Let)]TJ
ET
EMC
1 0 0 1 72 700 cm
"""

_OPENING_TAG = b"""/AccessTag <</MCID 8 /ActualText (\\015<latex>\\015k \\134in \\134RR\\015</latex>\\015<content>\\015)
>>BDC
BT
/F79 1 Tf
 [( )]TJ
ET
EMC
"""

_MATH = b"""/mi <</MCID 9 /ActualText<FEFFD835DC58>/Alt(  k  )
>>BDC
BT
/F30 10.9091 Tf
 [(k)]TJ
ET
EMC
1 0 0 1 6.023 0 cm
/mo <</MCID 10 /ActualText<FEFF2208>/Alt(  as element of  )
>>BDC
1 0 0 1 3.03 0 cm
BT
/F33 10.9091 Tf
 [(2)]TJ
ET
EMC
1 0 0 1 10.303 0 cm
/mi <</MCID 11 /ActualText<FEFF211D>/Alt(  real numbers  )
>>BDC
BT
/F42 10.9091 Tf
 [(R)]TJ
ET
EMC
"""

_CLOSING_TAG = b"""1 0 0 1 7.879 0 cm
/AccessTag <</MCID 12
  /ActualText (\\015</content>\\015)
>>BDC
BT
/F79 1 Tf
 [( )]TJ
ET
EMC
"""

_TRAIL = b"""1 0 0 1 20 0 cm
/P <</MCID 13>>BDC
BT
/F30 10.9091 Tf
1 0 0 1 0 0 Tm
[(be real.)]TJ
ET
EMC
"""


def _fonts() -> list[tuple[int, bytes]]:
    return [
        (100, b"<< /Type /Font /Subtype /Type1 /BaseFont /Helvetica >>"),
        (101, b"<< /Type /Font /Subtype /Type1 /BaseFont /CMMI10 >>"),
        (103, b"<< /Type /Font /Subtype /Type1 /BaseFont /CMSY10 >>"),
        (104, b"<< /Type /Font /Subtype /Type1 /BaseFont /MSBM10 >>"),
    ]


_FONT_RES = b"/Font << /F30 101 0 R /F33 103 0 R /F42 104 0 R /F79 100 0 R >>"


def _page(extra: bytes = b"") -> bytes:
    return (
        b"<<\n/Type /Page\n/Contents 91 0 R\n/Resources 90 0 R\n/MediaBox [0 0 595.276 841.89]\n"
        b"/Tabs/S\n/Parent 773 0 R\n/StructParents 0\n" + extra + b">>"
    )


def _math_elems(formula_kids: bytes) -> list[tuple[int, bytes]]:
    return [
        (112, b"<<\n/K [\n" + formula_kids + b"]\n/P 110 0 R\n/Type/StructElem/S/Formula \n"
              b"/ID(Math0.1)/T(InlineMath 0.1)\n/AF [27 0 R 29 0 R] /A <</O/XML-1.01 >>\n>>"),
        (114, b"<<\n/K [ 9 ]\n/Pg 5 0 R\n/P 121 0 R\n/Type/StructElem/S/mi\n>>"),
        (116, b"<<\n/K [ 10 ]\n/Pg 5 0 R\n/P 121 0 R\n/Type/StructElem/S/mo \n/A<</O/XML-1.00/class(MathClass-rel)>>\n>>"),
        (118, b"<<\n/K [ 11 ]\n/Pg 5 0 R\n/P 121 0 R\n/Type/StructElem/S/mi\n>>"),
        (120, b"<<\n/K [ 121 0 R ]\n/P 112 0 R\n/Type/StructElem/S/math \n/A<</O/XML-1.00\n"
              b"/xmlns(http://www.w3.org/1998/Math/MathML)\n/display(inline)>>\n>>"),
        (121, b"<<\n/K [\n114 0 R\n116 0 R\n118 0 R\n]\n/P 120 0 R\n/Type/StructElem/S/mrow\n>>"),
    ]


def _embedded(num: int, mime: bytes, payload: bytes, moddate: bytes) -> tuple[int, bytes]:
    dict_body = (
        b"\n/Type/EmbeddedFile \n/Subtype/" + mime + b"\n/Params <<\n/ModDate (" + moddate + b") \n"
        b"/Size %d /CheckSum\n  (" % len(payload) + _MD5[payload].encode() + b")>> \n"
    )
    return num, stream(dict_body, payload)


def _filespec(num: int, name: bytes, desc: bytes, rel: bytes, ef: int) -> tuple[int, bytes]:
    return num, (
        b"<</Type/Filespec \n/F (" + name + b")/UF (" + name + b")\n/Desc (" + desc + b")\n"
        b"/AFRelationship /" + rel + b" \n/EF<</F %d 0 R>> >>" % ef
    )


def _attachment_objects() -> list[tuple[int, bytes]]:
    return [
        (20, b"<< /inline-1 [27 0 R 29 0 R] >>"),
        _embedded(21, b"application#2Fx-tex", MAIN_TEX_PAYLOAD, b"D:20140201111000+11'00'"),
        _filespec(22, b"2013-Assign2-soln.tex", b"LaTeX source of the document", b"Source", 21),
        _embedded(23, b"application#2Fx-tex", SAVEDEFS_PAYLOAD, b"D:20140201111000+11'00'"),
        _filespec(24, b"2013-Assign2-soln-savedefs.tex", b"Preamble definitions", b"Source", 23),
        _embedded(26, b"application#2Fx-tex", TEX_PAYLOAD, b"D:20140201111224+11'00'"),
        _filespec(27, b"inline-1.tex", b"TeX source for inline math", b"Source", 26),
        _embedded(28, b"application#2Fmathml+xml", MATHML_PAYLOAD, b"D:20140131152820+11'00'"),
        _filespec(29, b"inline-1.xml", b"MathML version of inline math", b"Supplement", 28),
        (1859, b"[ 22 0 R 24 0 R 27 0 R 29 0 R ]"),
        (1860, b"<</Names [ (2013-Assign2-soln-savedefs.tex) 24 0 R (2013-Assign2-soln.tex) 22 0 R "
               b"(inline-1.tex) \n 27 0 R (inline-1.xml) 29 0 R ]>>"),
        (2079, b"<< >>"),
        (2080, b"<<\n/Dests 2079 0 R\n/EmbeddedFiles 1860 0 R\n>>"),
    ]


def _formula_document(content: bytes, formula_kids: bytes, *, access_tags: bool, attachments: bool) -> bytes:
    objects: list[tuple[int, bytes]] = []
    objects.append((1, stream(b" /N 3", bytes(range(256)))))
    objects.append((2, stream(b" /Type /Metadata /Subtype /XML",
                              b'<?xpacket begin="" id="W5M0MpCehiHzreSzNTczkc9d"?>\n'
                              b'<x:xmpmeta xmlns:x="adobe:ns:meta/"/>\n<?xpacket end="w"?>')))
    objects.append((3, b"<< /Producer (mathpdf samples) /Title (Assignment 2 solutions) >>"))
    objects.append((4, b"[ 5 0 R /Fit ]"))
    objects.append((5, _page()))
    properties = b"\n /Properties 20 0 R\n" if attachments else b"\n"
    objects.append((90, b"<<" + properties + _FONT_RES + b"\n/ProcSet [ /PDF /Text ]\n>>"))
    objects.append((91, stream(b"", content)))
    objects.extend(_fonts())
    objects.append((95, b"<< /Type /StructTreeRoot /K [109 0 R] /ParentTree 96 0 R /ParentTreeNextKey 1"
                        + (b" /RoleMap << /accesstag /Custom >>" if access_tags else b"") + b" >>"))
    mcid_elems = b"[ 110 0 R 113 0 R 114 0 R 116 0 R 118 0 R 122 0 R 110 0 R ]" if access_tags else \
        b"[ 110 0 R null 114 0 R 116 0 R 118 0 R null 110 0 R ]"
    objects.append((96, b"<< /Nums [ 0 " + mcid_elems + b" ] >>"))
    objects.append((109, b"<< /Type /StructElem /S /Sect /P 95 0 R /K [110 0 R] >>"))
    objects.append((110, b"<< /Type /StructElem /S /P /P 109 0 R /Pg 5 0 R /K [7 112 0 R 13] >>"))
    elems = _math_elems(formula_kids)
    if not attachments:
        elems[0] = (112, elems[0][1].replace(b"\n/AF [27 0 R 29 0 R]", b""))
    objects.extend(elems)
    if access_tags:
        objects.append((113, b"<<\n/K [ 8 ]\n/Pg 5 0 R\n/P 112 0 R\n/Type/StructElem/S/accesstag\n>>"))
        objects.append((122, b"<<\n/K [ 12 ]\n/Pg 5 0 R\n/P 112 0 R\n/Type/StructElem/S/accesstag\n>>"))
    objects.append((773, b"<< /Type /Pages /Kids [5 0 R] /Count 1 >>"))
    if attachments:
        objects.extend(_attachment_objects())
    catalog = (
        b"<<\n/Type /Catalog\n/Pages 773 0 R\n"
        + (b"/Names 2080 0 R\n" if attachments else b"")
        + b"/ViewerPreferences <</DisplayDocTitle true >> \n"
        b"/OutputIntents [ << /Type /OutputIntent \n /S/GTS_PDFA1 \n /DestOutputProfile 1 0 R "
        b"/OutputConditionIdentifier \n (sRGB_IEC61966-2-1_no_black_scaling)  /Info\n"
        b" (sRGB IEC61966 v2.1 without black scaling) >> ]\n"
        b"/Metadata 2 0 R/Lang (en-US)\n/PageMode/UseOutlines\n"
        + (b"/MarkInfo <</Marked true /AF 1859 0 R>>\n/AF [ 22 0 R 24 0 R]\n" if attachments
           else b"/MarkInfo <</Marked true >>\n")
        + b"/PageLabels<</Nums[0<</P(1)>>]>>\n/OpenAction 4 0 R\n/StructTreeRoot 95 0 R\n>>"
    )
    objects.append((2081, catalog))
    return assemble(objects, b"/Root 2081 0 R /Info 3 0 R")


def figure1() -> bytes:
    """MathML structure tagging and MCID-marked content, no attachments."""
    content = _LEAD + _MATH + _TRAIL
    return _formula_document(content, b"120 0 R\n", access_tags=False, attachments=False)


def figure3() -> bytes:
    """Adds LaTeX/MathML attachments associated to the Formula node and to content."""
    content = _LEAD + b"/AF /inline-1 BDC\n" + _MATH + b"EMC\n" + _TRAIL
    return _formula_document(content, b"120 0 R\n", access_tags=False, attachments=True)


def figure5() -> bytes:
    """Everything in :func:`figure3` plus the opening/closing fake-space access tags."""
    content = _LEAD + b"/AF /inline-1 BDC\n1 0 0 1 51.508 0 cm\n" + _OPENING_TAG + _MATH + _CLOSING_TAG + b"EMC\n" + _TRAIL
    return _formula_document(content, b"113 0 R\n120 0 R\n122 0 R\n", access_tags=True, attachments=True)


def untagged_formula() -> bytes:
    """The formula content with /ActualText spans but no MCIDs and no structure tree."""
    content = (
        b"BT\n/F1 10.9091 Tf\n1 0 0 1 72 700 Tm\n(Let)Tj\nET\n1 0 0 1 72 700 cm\n"
        b"/Span <</ActualText<FEFFD835DC58>>>BDC\nBT\n/F2 10.9091 Tf\n[(k)]TJ\nET\nEMC\n"
        b"1 0 0 1 6.023 0 cm\n/Span <</ActualText<FEFF2208>>>BDC\nBT\n/F3 10.9091 Tf\n[(2)]TJ\nET\nEMC\n"
        b"1 0 0 1 10.303 0 cm\n/Span <</ActualText<FEFF211D>>>BDC\nBT\n/F4 10.9091 Tf\n[(R)]TJ\nET\nEMC\n"
    )
    return assemble(
        [
            (1, b"<< /Type /Catalog /Pages 2 0 R >>"),
            (2, b"<< /Type /Pages /Kids [3 0 R] /Count 1 >>"),
            (3, b"<< /Type /Page /Parent 2 0 R /MediaBox [0 0 595 842] /Contents 4 0 R /Resources 5 0 R >>"),
            (4, stream(b"", content)),
            (5, b"<< /Font << /F1 6 0 R /F2 6 0 R /F3 6 0 R /F4 6 0 R >> >>"),
            (6, b"<< /Type /Font /Subtype /Type1 /BaseFont /Helvetica >>"),
        ],
        b"/Root 1 0 R",
    )


def _multipage() -> bytes:
    pages = []
    objects: list[tuple[int, bytes]] = [
        (1, b"<< /Type /Catalog /Pages 2 0 R >>"),
        (2, b"<< /Type /Pages /Kids [3 0 R 4 0 R 5 0 R] /Count 3 /Resources << /Font << /F1 9 0 R >> >> "
            b"/MediaBox [0 0 612 792] >>"),
        (9, b"<< /Type /Font /Subtype /Type1 /BaseFont /Times-Roman >>"),
    ]
    for i, num in enumerate((3, 4, 5)):
        c1, c2 = 10 + 2 * i, 11 + 2 * i
        objects.append((num, b"<< /Type /Page /Parent 2 0 R /Contents [%d 0 R %d 0 R] >>" % (c1, c2)))
        objects.append((c1, stream(b"", b"BT /F1 11 Tf 72 700 Td (Page %d) Tj ET" % (i + 1))))
        objects.append((c2, stream(b"", b"0.5 0.5 0.5 rg 72 600 100 50 re f")))
        pages.append(num)
    return assemble(objects, b"/Root 1 0 R")


def _syntax_zoo() -> bytes:
    dict_body = (
        b"<< /Type /Catalog /Pages 2 0 R /Dup 1 /Dup 2 /Unknown [ true false null -3 +4 .5 -0.25 12. ] "
        b"/Nested << /A [ [ 1 [ 2 ] ] << /B (x) >> ] /Hex <48656C6C6F> /Lit (a\\(b\\)c\\\\d\\n) >> "
        b"/Esc /A#20B#2FC /Oct (\\101\\102\\103\\0511) /Cont (line\\\nwrapped) % a comment\n"
        b"/Empty () /EmptyDict << >> /EmptyArr [] >>"
    )
    return assemble(
        [
            (3, b"<< /Type /Page /Parent 2 0 R /Contents 4 0 R /Resources << >> >>"),
            (1, dict_body),
            (4, b"<< /Length 5 0 R >>\nstream\nq 1 0 0 1 0 0 cm Q\nendstream"),
            (5, b"18"),
            (2, b"<< /Type /Pages /Kids [3 0 R] /Count 1 >>"),
        ],
        b"/Root 1 0 R",
    )


def _crlf() -> bytes:
    content = b"BT\r\n/F1 12 Tf\r\n(crlf) Tj\r\nET"
    return assemble(
        [
            (1, b"<< /Type /Catalog\r\n/Pages 2 0 R >>"),
            (2, b"<< /Type /Pages /Kids [3 0 R] /Count 1 >>"),
            (3, b"<< /Type /Page /Parent 2 0 R /Contents 4 0 R >>"),
            (4, b"<< /Length %d >>\r\nstream\r\n" % len(content) + content + b"\r\nendstream"),
        ],
        b"/Root 1 0 R",
        eol=b"\r\n",
    )


def _sparse() -> bytes:
    """Object numbers with gaps, so the xref carries a free list."""
    return assemble(
        [
            (7, b"<< /Type /Page /Parent 3 0 R /Contents 12 0 R >>"),
            (3, b"<< /Type /Pages /Kids [7 0 R] /Count 1 >>"),
            (12, stream(b"", b"")),
            (1, b"<< /Type /Catalog /Pages 3 0 R /Extra 20 0 R >>"),
            (20, b"(twenty)"),
        ],
        b"/Root 1 0 R /ID [<0123456789ABCDEF0123456789ABCDEF> <0123456789ABCDEF0123456789ABCDEF>]",
    )


def _binary_stream() -> bytes:
    data = bytes(range(256)) + b"endstream inside data\r\n"
    return assemble(
        [
            (1, b"<< /Type /Catalog /Pages 2 0 R /Blob 4 0 R >>"),
            (2, b"<< /Type /Pages /Kids [3 0 R] /Count 1 >>"),
            (3, b"<< /Type /Page /Parent 2 0 R >>"),
            (4, stream(b" /Type /Blob", data)),
        ],
        b"/Root 1 0 R",
    )


def _unicode_strings() -> bytes:
    title = b"<FEFF00540065006D0070006500720061007400750072006500200032002B0020D835DC58>"
    return assemble(
        [
            (1, b"<< /Type /Catalog /Pages 2 0 R /Lang (en-US) >>"),
            (2, b"<< /Type /Pages /Kids [] /Count 0 >>"),
            (3, b"<< /Title " + title + b" /Author (Ren\\351e) /Subject (tab\\there) >>"),
        ],
        b"/Root 1 0 R /Info 3 0 R",
    )


def split_formula() -> bytes:
    """A tagged Formula whose two leaves sit on different pages (a line/page break inside the math)."""
    c1 = b"/mi <</MCID 0 /ActualText<FEFF0061>>>BDC\nBT\n/F1 10 Tf\n72 100 Td\n[(a)]TJ\nET\nEMC\n"
    c2 = b"/mi <</MCID 0 /ActualText<FEFF0062>>>BDC\nBT\n/F1 10 Tf\n72 700 Td\n[(b)]TJ\nET\nEMC\n"
    return assemble(
        [
            (1, b"<< /Type /Catalog /Pages 2 0 R /StructTreeRoot 8 0 R /MarkInfo << /Marked true >> >>"),
            (2, b"<< /Type /Pages /Kids [3 0 R 4 0 R] /Count 2 /Resources << /Font << /F1 7 0 R >> >> >>"),
            (3, b"<< /Type /Page /Parent 2 0 R /Contents 5 0 R /StructParents 0 >>"),
            (4, b"<< /Type /Page /Parent 2 0 R /Contents 6 0 R /StructParents 1 >>"),
            (5, stream(b"", c1)),
            (6, stream(b"", c2)),
            (7, b"<< /Type /Font /Subtype /Type1 /BaseFont /Times-Italic >>"),
            (8, b"<< /Type /StructTreeRoot /K [10 0 R] /ParentTree 9 0 R /ParentTreeNextKey 2 >>"),
            (9, b"<< /Nums [0 [11 0 R] 1 [12 0 R]] >>"),
            (10, b"<< /Type /StructElem /S /Formula /P 8 0 R /ID (Math0.1) /K [11 0 R 12 0 R] >>"),
            (11, b"<< /Type /StructElem /S /mi /P 10 0 R /Pg 3 0 R /K [0] >>"),
            (12, b"<< /Type /StructElem /S /mi /P 10 0 R /Pg 4 0 R /K [0] >>"),
        ],
        b"/Root 1 0 R",
    )


CORPUS: dict[str, Callable[[], bytes]] = {
    "minimal": minimal,
    "figure1": figure1,
    "figure3": figure3,
    "figure5": figure5,
    "untagged_formula": untagged_formula,
    "multipage": _multipage,
    "syntax_zoo": _syntax_zoo,
    "crlf": _crlf,
    "sparse": _sparse,
    "binary_stream": _binary_stream,
    "unicode_strings": _unicode_strings,
    "split_formula": split_formula,
}


def corpus() -> dict[str, bytes]:
    return {name: build() for name, build in CORPUS.items()}
