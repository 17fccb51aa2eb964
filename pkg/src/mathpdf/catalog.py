"""Navigation helpers over a parsed document: pages, resources, registries."""

from __future__ import annotations

from typing import Any

from .cos import Document, Name, PdfDict, Ref, Stream, resolve
from .errors import PdfError

__all__ = [
    "page_refs",
    "page_index",
    "page_content",
    "set_page_content",
    "page_resources",
    "own_resources",
    "markinfo_af",
    "register_af",
    "holder_of",
]

_INHERITABLE = ("Resources", "MediaBox", "CropBox", "Rotate")


def page_refs(document: Document) -> list[Ref]:
    """Page object references in document order."""
    catalog = document.catalog
    root = catalog.get("Pages")
    out: list[Ref] = []
    seen: set[Ref] = set()

    def walk(ref: Any) -> None:
        if not isinstance(ref, Ref) or ref in seen:
            return
        seen.add(ref)
        node = document.objects.get(ref)
        if not isinstance(node, PdfDict):
            return
        kind = node.get("Type")
        if kind == "Page" or (kind is None and "Kids" not in node):
            out.append(ref)
            return
        for kid in resolve(document, node.get("Kids", [])) or []:
            walk(kid)

    walk(root)
    return out


def page_index(document: Document, page: Ref) -> int:
    try:
        return page_refs(document).index(page)
    except ValueError:
        raise PdfError(f"{page} is not a page of this document") from None


def _inherited(document: Document, page: Ref, key: str) -> Any:
    node = document.objects.get(page)
    seen: set[int] = set()
    while isinstance(node, PdfDict) and id(node) not in seen:
        seen.add(id(node))
        if key in node:
            return node[key]
        node = resolve(document, node.get("Parent"))
    return None


def page_resources(document: Document, page: Ref) -> PdfDict:
    """The page's effective resource dictionary (possibly inherited); read-only use."""
    res = resolve(document, _inherited(document, page, "Resources"))
    return res if isinstance(res, PdfDict) else PdfDict()


def own_resources(document: Document, page: Ref) -> PdfDict:
    """A resource dictionary that can be mutated for ``page`` alone or the object it shares.

    If the page has no /Resources of its own, the inherited dictionary is
    copied onto the page first.
    """
    pdict = document.get(page)
    res = pdict.get("Resources")
    if res is None:
        inherited = resolve(document, _inherited(document, page, "Resources"))
        res = PdfDict(inherited.raw_items()) if isinstance(inherited, PdfDict) else PdfDict()
        pdict["Resources"] = res
    return resolve(document, res)


def page_content(document: Document, page: Ref) -> bytes:
    """Concatenated content stream bytes for a page."""
    contents = resolve(document, document.get(page).get("Contents"))
    if contents is None:
        return b""
    if isinstance(contents, Stream):
        return contents.data
    parts = []
    for item in contents:
        s = resolve(document, item)
        if isinstance(s, Stream):
            parts.append(s.data)
    return b"\n".join(parts)


def set_page_content(document: Document, page: Ref, data: bytes) -> None:
    """Replace the page's content with a single stream holding ``data``."""
    pdict = document.get(page)
    contents = pdict.get("Contents")
    if isinstance(contents, list):
        contents = contents[0] if contents else None
    if isinstance(contents, Ref) and isinstance(document.objects.get(contents), Stream):
        old = document.objects[contents]
        document.objects[contents] = Stream(PdfDict(old.dict.raw_items()), data)
        pdict["Contents"] = contents
    else:
        pdict["Contents"] = document.add(Stream(PdfDict(), data))


def holder_of(document: Document, value: Any) -> Ref | None:
    """Object number whose top-level value *is* ``value`` (identity), if any."""
    for ref, obj in document.objects.items():
        if obj is value:
            return ref
    return None


def markinfo_af(document: Document) -> list[Ref] | None:
    """Contents of the /MarkInfo /AF registry, or ``None`` if there is none."""
    mark = resolve(document, document.catalog.get("MarkInfo"))
    if not isinstance(mark, PdfDict) or "AF" not in mark:
        return None
    arr = resolve(document, mark["AF"])
    return [r for r in arr if isinstance(r, Ref)] if isinstance(arr, list) else []


def register_af(document: Document, refs: list[Ref]) -> None:
    """Append ``refs`` to the /MarkInfo /AF registry, skipping ones already present."""
    if not refs:
        return
    catalog = document.catalog
    mark = catalog.get("MarkInfo")
    if mark is None:
        mark = PdfDict()
        if "StructTreeRoot" in catalog:
            mark["Marked"] = True
        catalog["MarkInfo"] = mark
    mark = resolve(document, mark)
    arr = mark.get("AF")
    if arr is None:
        arr = []
        mark["AF"] = document.add(arr)
    arr = resolve(document, arr)
    for ref in refs:
        if ref not in arr:
            arr.append(ref)


def name_of(value: Any) -> str | None:
    return str(value) if isinstance(value, Name) else None
