"""Randomized single-page formula documents for property tests."""

from __future__ import annotations

from dataclasses import dataclass

from hypothesis import strategies as st

from mathpdf.samples import assemble, stream

LEAF_TEXT = {"mi": ("<FEFFD835DC65>", b"x"), "mo": ("<FEFF002B>", b"+"), "mn": ("<FEFF0032>", b"2")}


@dataclass(frozen=True)
class FormulaSpec:
    leaves: tuple[str, ...]
    gaps: tuple[float, ...]
    tagged: bool
    wrap_af: bool
    size: float

    @property
    def mcids(self) -> list[int]:
        return [1 + i for i in range(len(self.leaves))]


def formula_specs() -> st.SearchStrategy[FormulaSpec]:
    return st.integers(1, 6).flatmap(
        lambda n: st.builds(
            FormulaSpec,
            leaves=st.lists(st.sampled_from(sorted(LEAF_TEXT)), min_size=n, max_size=n).map(tuple),
            gaps=st.lists(st.sampled_from([0.0, 2.5, 6.023, 14.0]), min_size=n, max_size=n).map(tuple),
            tagged=st.booleans(),
            wrap_af=st.booleans(),
            size=st.sampled_from([9.0, 10.9091, 12.0]),
        )
    )


def content(spec: FormulaSpec) -> bytes:
    out = [b"/P <</MCID 0>>BDC\nBT\n/F1 %g Tf\n1 0 0 1 72 700 Tm\n[(Let)]TJ\nET\nEMC\n1 0 0 1 72 700 cm" % spec.size]
    if spec.wrap_af:
        out.append(b"/AF /eq-1 BDC")
    for i, (leaf, gap) in enumerate(zip(spec.leaves, spec.gaps)):
        actual, glyph = LEAF_TEXT[leaf]
        if gap:
            out.append(b"1 0 0 1 %g 0 cm" % gap)
        out.append(b"/%s <</MCID %d /ActualText%s>>BDC\nBT\n/F1 %g Tf\n[(%s)]TJ\nET\nEMC"
                   % (leaf.encode(), 1 + i, actual.encode(), spec.size, glyph))
    if spec.wrap_af:
        out.append(b"EMC")
    out.append(b"1 0 0 1 20 0 cm\n/P <</MCID %d>>BDC\nBT\n[(done.)]TJ\nET\nEMC\n" % (len(spec.leaves) + 1))
    return b"\n".join(out)


def build(spec: FormulaSpec) -> bytes:
    n = len(spec.leaves)
    leaf_nums = list(range(20, 20 + n))
    catalog = b"<< /Type /Catalog /Pages 2 0 R"
    objects = [
        (2, b"<< /Type /Pages /Kids [3 0 R] /Count 1 >>"),
        (4, stream(b"", content(spec))),
        (5, b"<< /Type /Font /Subtype /Type1 /BaseFont /Times-Roman >>"),
    ]
    props = b" /Properties << /eq-1 [] >>" if spec.wrap_af else b""
    page = b"<< /Type /Page /Parent 2 0 R /Contents 4 0 R /Resources << /Font << /F1 5 0 R >>%s >>" % props
    if spec.tagged:
        catalog += b" /StructTreeRoot 10 0 R /MarkInfo << /Marked true >>"
        page += b" /StructParents 0"
        parent_nums = b" ".join([b"13 0 R"] + [b"%d 0 R" % k for k in leaf_nums] + [b"13 0 R"])
        kids = b" ".join(b"%d 0 R" % k for k in leaf_nums)
        objects += [
            (10, b"<< /Type /StructTreeRoot /K [13 0 R] /ParentTree 11 0 R /ParentTreeNextKey 1 >>"),
            (11, b"<< /Nums [0 [%s]] >>" % parent_nums),
            (13, b"<< /Type /StructElem /S /P /P 10 0 R /Pg 3 0 R /K [0 14 0 R %d] >>" % (n + 1)),
            (14, b"<< /Type /StructElem /S /Formula /P 13 0 R /ID (Math0.1) /K [15 0 R] >>"),
            (15, b"<< /Type /StructElem /S /math /P 14 0 R /K [%s] >>" % kids),
        ]
        for i, (num, leaf) in enumerate(zip(leaf_nums, spec.leaves)):
            objects.append((num, b"<< /Type /StructElem /S /%s /P 15 0 R /Pg 3 0 R /K [%d] >>" % (leaf.encode(), 1 + i)))
    objects += [(1, catalog + b" >>"), (3, page + b" >>")]
    return assemble(sorted(objects), b"/Root 1 0 R")
