"""Fake-space access tags carrying LaTeX source in /ActualText.

An opening tag's replacement text is ``CR <latex> CR source CR </latex> CR
<content> CR`` and the closing tag's is ``CR </content> CR``, so a plain
copy/paste of the formula yields the source on its own delimited lines.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Any

from .attachments import ContentSpanTarget, StructureTarget
from .catalog import own_resources, page_content, page_refs, set_page_content
from .content import (
    BeginText,
    EndText,
    MarkedContentSpan,
    SetFont,
    ShowText,
    TEXT_SHOWING,
    Other,
    build_span_tree,
    iter_spans,
    parse_content,
    serialize_content,
)
from .cos import Document, Name, PdfDict, PdfString, Ref, resolve
from .errors import (
    AccessTagError,
    AlreadyTagged,
    CrossesPageBoundary,
    MalformedDelimiters,
    MissingStructTreeRoot,
    TargetNotFound,
    WellFormednessError,
)
from .structure import Mcid, StructTree, collect_mcids, parse_structure, rebuild_parent_tree
from .textcodec import decode_literal, decode_text, encode_literal, encode_text

__all__ = [
    "AccessTagPayload",
    "McidRange",
    "FakeSpaceSpec",
    "opening_text",
    "closing_text",
    "encode_opening",
    "encode_closing",
    "decode_payload",
    "fake_space_span",
    "inject_access_tags",
    "ACCESS_TAG",
]

ACCESS_TAG = "AccessTag"
CR = "\r"
_OPEN_PREFIX = f"{CR}<latex>{CR}"
_OPEN_SUFFIX = f"{CR}</latex>{CR}<content>{CR}"
_CLOSING = f"{CR}</content>{CR}"
_LOOSE_OPENING = re.compile(r"\A[\r\n]*<latex>(?:\r\n|\r|\n)(.*)(?:\r\n|\r|\n)</latex>[\r\n]+<content>[\r\n]*\Z", re.S)
_LOOSE_CLOSING = re.compile(r"\A[\r\n]*</content>[\r\n]*\Z")


@dataclass(frozen=True)
class AccessTagPayload:
    kind: str  # "opening" or "closing"
    source: str | None
    rendered: bytes

    @property
    def is_opening(self) -> bool:
        return self.kind == "opening"


@dataclass(frozen=True)
class McidRange:
    """Formula content given as an inclusive MCID range on one page."""

    page: Ref
    first: int
    last: int


@dataclass(frozen=True)
class FakeSpaceSpec:
    font: Name
    size: int = 1
    glyph: bytes = b" "


def opening_text(latex: str) -> str:
    return _OPEN_PREFIX + latex + _OPEN_SUFFIX


def closing_text() -> str:
    return _CLOSING


def encode_opening(latex: str) -> bytes:
    """Escaped literal-string body (no outer parens) for an opening tag."""
    return encode_literal(encode_text(opening_text(latex)))


def encode_closing() -> bytes:
    return encode_literal(encode_text(_CLOSING))


def decode_payload(value: str | bytes) -> AccessTagPayload | None:
    """Recognize an access-tag replacement text.

    ``bytes`` are taken as an escaped literal-string body (what
    :func:`encode_opening` returns); ``str`` as already-decoded text. Returns
    ``None`` when the text carries no delimiters at all.
    """
    if isinstance(value, bytes):
        rendered = value
        text = str(decode_text(decode_literal(value)))
    else:
        text = str(value)
        rendered = encode_literal(encode_text(text))
    if text.startswith(_OPEN_PREFIX) and text.endswith(_OPEN_SUFFIX) and len(text) >= len(_OPEN_PREFIX) + len(_OPEN_SUFFIX):
        return AccessTagPayload("opening", text[len(_OPEN_PREFIX) : -len(_OPEN_SUFFIX)], rendered)
    if text == _CLOSING:
        return AccessTagPayload("closing", None, rendered)
    m = _LOOSE_OPENING.match(text)
    if m:
        return AccessTagPayload("opening", m.group(1), rendered)
    if _LOOSE_CLOSING.match(text):
        return AccessTagPayload("closing", None, rendered)
    if any(marker in text for marker in ("<latex>", "</latex>", "<content>", "</content>")):
        raise MalformedDelimiters(f"access-tag delimiters out of shape: {text!r}")
    return None


def fake_space_span(payload_text: str, font: Name, *, mcid: int | None = None, tag: str = ACCESS_TAG) -> MarkedContentSpan:
    """``/AccessTag <</MCID n /ActualText (..)>> BDC BT /F 1 Tf [( )]TJ ET EMC``."""
    props = PdfDict()
    if mcid is not None:
        props["MCID"] = mcid
    props["ActualText"] = PdfString(encode_text(payload_text))
    spec = FakeSpaceSpec(font)
    children = [BeginText(), SetFont(spec.font, spec.size), ShowText([PdfString(spec.glyph)]), EndText()]
    return MarkedContentSpan(Name(tag), props, None, children)


# -- injection ----------------------------------------------------------------


def _is_content(item: Any) -> bool:
    if isinstance(item, (MarkedContentSpan, BeginText, ShowText)):
        return True
    return isinstance(item, Other) and item.operator in TEXT_SHOWING


def _locate(items: list, predicate) -> list[list[tuple[list, int]]]:
    """Paths ``[(container, index), ...]`` to every span satisfying ``predicate``."""
    found: list[list[tuple[list, int]]] = []

    def walk(container: list, prefix: list[tuple[list, int]]) -> None:
        for i, item in enumerate(container):
            if isinstance(item, MarkedContentSpan):
                path = prefix + [(container, i)]
                if predicate(item):
                    found.append(path)
                else:
                    walk(item.children, path)

    walk(items, [])
    return found


def _is_access_span(item: Any) -> bool:
    if not isinstance(item, MarkedContentSpan) or item.actual_text is None:
        return False
    try:
        return decode_payload(item.actual_text) is not None
    except MalformedDelimiters:
        return True


def _pick_font(document: Document, page: Ref, font: str | None) -> Name:
    if font:
        return Name(font)
    res = own_resources(document, page)
    fonts = resolve(document, res.get("Font"))
    if isinstance(fonts, PdfDict) and len(fonts):
        return Name(fonts.keys()[0])
    if not isinstance(fonts, PdfDict):
        fonts = PdfDict()
        res["Font"] = fonts
    fonts["FakeSpace"] = document.add(PdfDict([("Type", Name("Font")), ("Subtype", Name("Type1")),
                                               ("BaseFont", Name("Helvetica"))]))
    return Name("FakeSpace")


def _formula_above(tree: StructTree, elem_ref: Ref | None) -> Ref | None:
    seen: set[Ref] = set()
    while elem_ref is not None and elem_ref not in seen and elem_ref in tree.elements:
        seen.add(elem_ref)
        elem = tree.elements[elem_ref]
        if elem.s == "Formula":
            return elem_ref
        elem_ref = elem.parent
    return None


def _owner_of(tree: StructTree, page: Ref, mcid: int) -> Ref | None:
    for elem in tree.elements.values():
        for p, m, owner in collect_mcids(tree, elem):
            if m == mcid and p == page and owner is elem:
                return elem.ref
    return None


def inject_access_tags(
    document: Document,
    target: StructureTarget | McidRange | ContentSpanTarget,
    latex: str,
    *,
    tag: str = ACCESS_TAG,
    font: str | None = None,
    role_map: bool = True,
) -> Document:
    """Insert opening/closing fake-space tags around a formula's content.

    In a structure-tagged document the two spans get fresh MCIDs and become
    ``accesstag`` elements as first and last kids of the enclosing Formula.
    Otherwise they carry no MCID. No existing operator is changed or moved.
    """
    doc = document.copy()
    try:
        tree: StructTree | None = parse_structure(doc, strict=False)
    except MissingStructTreeRoot:
        tree = None

    formula: Ref | None = None
    wanted: set[int] | None = None
    container_name: str | None = None
    if isinstance(target, StructureTarget):
        if tree is None or target.elem not in tree.elements:
            raise TargetNotFound(f"no structure element {target.elem}")
        elem = tree.elements[target.elem]
        if any(isinstance(k, Ref) and k in tree.elements and tree.elements[k].s == "accesstag" for k in elem.kids):
            raise AlreadyTagged(f"{target.elem} already has accesstag kids")
        located = collect_mcids(tree, elem)
        pages = {p for p, _, _ in located}
        if len(pages) > 1:
            raise CrossesPageBoundary(f"{target.elem} has content on {len(pages)} pages")
        if not located or None in pages:
            raise TargetNotFound(f"{target.elem} has no marked content")
        page = pages.pop()
        wanted = {m for _, m, _ in located}
        formula = target.elem if elem.s == "Formula" else _formula_above(tree, target.elem)
    elif isinstance(target, McidRange):
        page = target.page
        wanted = set(range(target.first, target.last + 1))
    elif isinstance(target, ContentSpanTarget):
        page = target.page
        container_name = target.name
    else:
        raise TargetNotFound(f"unsupported target {target!r}")
    if page not in page_refs(doc):
        raise TargetNotFound(f"{page} is not a page")

    items = build_span_tree(parse_content(page_content(doc, page)))
    if container_name is not None:
        paths = _locate(items, lambda s: s.named_resource == container_name)
        if not paths:
            raise TargetNotFound(f"no /{container_name} marked content on {page}")
        host_container, host_index = paths[0][-1]
        container = host_container[host_index].children
        content_idx = [i for i, it in enumerate(container) if _is_content(it)]
        if not content_idx:
            raise TargetNotFound(f"/{container_name} span holds no content")
        start, end = content_idx[0], content_idx[-1]
        wanted_found = [s.mcid for s in iter_spans(container) if s.mcid is not None]
        if any(_is_access_span(container[i]) for i in content_idx):
            raise AlreadyTagged(f"/{container_name} span already carries access tags")
    else:
        paths = _locate(items, lambda s: s.mcid in wanted)
        if not paths:
            raise TargetNotFound(f"no marked content with MCIDs {sorted(wanted)} on {page}")
        first, last = paths[0], paths[-1]
        depth = 0
        while (
            depth < min(len(first), len(last)) - 1
            and first[depth][0] is last[depth][0]
            and first[depth][1] == last[depth][1]
        ):
            depth += 1
        container, start = first[depth]
        _, end = last[depth]
        wanted_found = [m for m in wanted]
        if (start > 0 and _is_access_span(container[start - 1])) or _is_access_span(container[start]):
            raise AlreadyTagged("formula content is already preceded by an access tag")

    if tree is not None and formula is None:
        for mcid in sorted(m for m in wanted_found if m is not None):
            formula = _formula_above(tree, _owner_of(tree, page, mcid))
            if formula is not None:
                break
    if formula is not None:
        elem = tree.elements[formula]
        if any(isinstance(k, Ref) and k in tree.elements and tree.elements[k].s == "accesstag" for k in elem.kids):
            raise AlreadyTagged(f"{formula} already has accesstag kids")

    font_name = _pick_font(doc, page, font)
    opening = fake_space_span(opening_text(latex), font_name, tag=tag)
    closing = fake_space_span(closing_text(), font_name, tag=tag)
    container.insert(end + 1, closing)
    container.insert(start, opening)
    mcids: tuple[int, int] | None = None
    if formula is not None:
        mcids = _assign_fresh_mcids(items, opening, closing)
    try:
        data = serialize_content(items)
    except WellFormednessError as exc:
        raise AccessTagError(f"cannot place fake spaces here: {exc}") from None
    set_page_content(doc, page, data)

    if formula is not None and mcids is not None:
        fnode = doc.objects[formula]
        kids = resolve(doc, fnode.get("K"))
        kids = [] if kids is None else (list(kids) if isinstance(kids, list) else [kids])
        open_ref = doc.add(_accesstag_elem(mcids[0], page, formula))
        close_ref = doc.add(_accesstag_elem(mcids[1], page, formula))
        fnode["K"] = [open_ref] + kids + [close_ref]
        if role_map:
            root = resolve(doc, doc.catalog.get("StructTreeRoot"))
            rm = resolve(doc, root.get("RoleMap"))
            if not isinstance(rm, PdfDict):
                rm = PdfDict()
                root["RoleMap"] = rm
            rm.setdefault("accesstag", Name("Custom"))
        rebuild_parent_tree(doc)
    return doc


def _assign_fresh_mcids(items: list, opening: MarkedContentSpan, closing: MarkedContentSpan) -> tuple[int, int]:
    """Give each new span the lowest unused MCID above those preceding it in the stream."""
    used = {s.mcid for s in iter_spans(items) if s.mcid is not None}
    floor = -1
    assigned = []
    for span in iter_spans(items):
        if span is opening or span is closing:
            mcid = floor + 1
            while mcid in used:
                mcid += 1
            span.properties = PdfDict([("MCID", mcid)] + list(span.properties.raw_items()))
            used.add(mcid)
            assigned.append(mcid)
            floor = mcid
        elif span.mcid is not None:
            floor = max(floor, span.mcid)
    return assigned[0], assigned[1]


def _accesstag_elem(mcid: int, page: Ref, parent: Ref) -> PdfDict:
    return PdfDict([
        ("K", [mcid]),
        ("Pg", page),
        ("P", parent),
        ("Type", Name("StructElem")),
        ("S", Name("accesstag")),
    ])
