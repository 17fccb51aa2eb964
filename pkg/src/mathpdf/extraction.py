"""Reader-side recovery: copy/paste text, the accessible-text view, LaTeX harvesting."""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Any

from .accesstags import decode_payload
from .attachments import (
    ContentSpanTarget,
    PageTarget,
    StructureTarget,
    find_targets,
    list_attachments,
)
from .catalog import page_index, page_refs
from .content import (
    TEXT_SHOWING,
    MarkedContentSpan,
    Other,
    SetFont,
    ShowText,
    Transform,
    iter_spans,
)
from .cos import Document, PdfString, Ref
from .errors import MalformedDelimiters, MissingStructTreeRoot, TargetNotFound, UnbalancedDelimiters
from .structure import PageSpans, StructTree, collect_mcids, parse_structure
from .textcodec import TextString

__all__ = [
    "Provenance",
    "ExtractedRun",
    "extract_runs",
    "copy_text",
    "accessible_text",
    "HarvestedLatex",
    "harvest_latex",
    "AssociationEntry",
    "association_report",
]

COPY = "copy"
ACCESSIBLE = "accessible"


@dataclass(frozen=True)
class Provenance:
    kind: str  # "glyphs", "actual_text" or "alt"
    tag: str | None = None
    mcid: int | None = None

    def __str__(self) -> str:
        if self.kind == "glyphs":
            return "RawGlyphs"
        label = "ActualTextOf" if self.kind == "actual_text" else "AltOf"
        return f"{label}({self.tag}, {self.mcid})"


@dataclass
class ExtractedRun:
    text: str
    provenance: Provenance
    page: int
    order: int


class _Walker:
    """One pass over a page's span tree, emitting runs in stream order.

    ``selected`` restricts output to the content of those spans (by identity);
    spacing and font state are still tracked across the whole page.
    """

    def __init__(self, mode: str, page: int, selected: set[int] | None, runs: list[ExtractedRun]) -> None:
        self.mode = mode
        self.page = page
        self.selected = selected
        self.runs = runs
        self.font_size = 0.0
        self.pending_space = False

    def emit(self, text: str, provenance: Provenance, active: bool) -> None:
        if not active:
            return
        if self.pending_space and self.runs and self.runs[-1].page == self.page:
            self.runs.append(ExtractedRun(" ", Provenance("glyphs"), self.page, len(self.runs)))
        self.pending_space = False
        if text:
            self.runs.append(ExtractedRun(text, provenance, self.page, len(self.runs)))

    def walk(self, items: list, active: bool) -> None:
        for item in items:
            if isinstance(item, MarkedContentSpan):
                inside = active or (self.selected is not None and id(item) in self.selected)
                replacement = self._replacement(item)
                if replacement is not None:
                    text, prov = replacement
                    self.emit(str(text), prov, inside)
                else:
                    self.walk(item.children, inside)
            elif isinstance(item, SetFont):
                self.font_size = abs(float(item.size))
            elif isinstance(item, Transform):
                if item.matrix[4] > self.font_size:
                    self.pending_space = True
            elif isinstance(item, ShowText):
                self.emit(_glyphs(item.strings), Provenance("glyphs"), active)
            elif isinstance(item, Other) and item.operator in TEXT_SHOWING:
                strings = [v for v in item.operands if isinstance(v, PdfString)]
                self.emit(_glyphs(strings[-1:]), Provenance("glyphs"), active)

    def _replacement(self, span: MarkedContentSpan) -> tuple[TextString, Provenance] | None:
        tag, mcid = str(span.tag), span.mcid
        if self.mode == ACCESSIBLE and span.alt is not None:
            return span.alt, Provenance("alt", tag, mcid)
        if span.actual_text is not None:
            return span.actual_text, Provenance("actual_text", tag, mcid)
        return None


def _glyphs(strings: list[PdfString]) -> str:
    # no /ToUnicode lookup: untagged glyph codes are read as Latin-1
    return "".join(s.value.decode("latin-1") for s in strings)


def _scope_pages(document: Document, scope: Any, cache: PageSpans) -> list[tuple[int, Ref, set[int] | None]]:
    pages = page_refs(document)
    if scope is None:
        return [(i, p, None) for i, p in enumerate(pages)]
    if isinstance(scope, int):
        if not 0 <= scope < len(pages):
            raise TargetNotFound(f"no page {scope}")
        return [(scope, pages[scope], None)]
    if isinstance(scope, PageTarget):
        return [(page_index(document, scope.page), scope.page, None)]
    if isinstance(scope, Ref) and scope in pages:
        return [(pages.index(scope), scope, None)]
    if isinstance(scope, StructureTarget):
        scope = scope.elem
    if isinstance(scope, Ref):
        tree = parse_structure(document, strict=False)
        if scope not in tree.elements:
            raise TargetNotFound(f"{scope} is neither a page nor a structure element")
        wanted: dict[Ref, set[int]] = {}
        for page, mcid, _ in collect_mcids(tree, tree.elements[scope]):
            if page is not None:
                wanted.setdefault(page, set()).add(mcid)
        out = []
        for i, page in enumerate(pages):
            if page in wanted:
                ids = {id(s) for s in iter_spans(cache.tree(page)) if s.mcid in wanted[page]}
                out.append((i, page, ids))
        return out
    raise TargetNotFound(f"unsupported scope {scope!r}")


def extract_runs(document: Document, scope: Any = None, *, mode: str = COPY) -> list[ExtractedRun]:
    """Runs for ``scope``: ``None`` (whole document), a page index or ref, or a structure element."""
    cache = PageSpans(document)
    return _run_plan(_scope_pages(document, scope, cache), cache, mode)


def _run_plan(plan: list[tuple[int, Ref, set[int] | None]], cache: PageSpans, mode: str) -> list[ExtractedRun]:
    runs: list[ExtractedRun] = []
    for index, page, selected in plan:
        _Walker(mode, index, selected, runs).walk(cache.tree(page), selected is None)
    return runs


def _join(runs: list[ExtractedRun]) -> str:
    pages: dict[int, list[str]] = {}
    for run in runs:
        pages.setdefault(run.page, []).append(run.text)
    return "\n".join("".join(parts) for _, parts in sorted(pages.items()))


def copy_text(document: Document, scope: Any = None) -> str:
    """What a reader puts on the clipboard: the outermost /ActualText wins."""
    return _join(extract_runs(document, scope, mode=COPY))


def accessible_text(document: Document, scope: Any = None) -> str:
    """Like :func:`copy_text` but /Alt takes precedence over /ActualText."""
    return _join(extract_runs(document, scope, mode=ACCESSIBLE))


# -- harvesting ----------------------------------------------------------------


@dataclass(frozen=True)
class HarvestedLatex:
    source: str
    page: int
    location: str


_BLOCK = re.compile(r"<latex>(?:\r\n|\r|\n)(.*?)(?:\r\n|\r|\n)</latex>", re.S)


def _scan_text(text: str, page: int) -> list[HarvestedLatex]:
    if text.count("<latex>") != text.count("</latex>") or text.count("<content>") != text.count("</content>"):
        raise UnbalancedDelimiters(page)
    return [HarvestedLatex(m.group(1), page, f"text offset {m.start()}") for m in _BLOCK.finditer(text)]


def _decode_spans(items: list, page: int) -> list[HarvestedLatex] | None:
    """Access-tag payloads in stream order; ``None`` if some span carries
    delimiters in another shape, so the caller should scan text instead."""
    found: list[HarvestedLatex] = []
    open_source: str | None = None
    for span in iter_spans(items):
        text = span.actual_text
        if text is None:
            continue
        try:
            payload = decode_payload(text)
        except MalformedDelimiters:
            return None
        if payload is None:
            continue
        where = f"MCID {span.mcid}" if span.mcid is not None else f"offset {span.offset}"
        if payload.is_opening:
            if open_source is not None:
                raise UnbalancedDelimiters(page)
            open_source = payload.source
            found.append(HarvestedLatex(payload.source or "", page, where))
        else:
            if open_source is None:
                raise UnbalancedDelimiters(page)
            open_source = None
    if open_source is not None:
        raise UnbalancedDelimiters(page)
    return found


def harvest_latex(document: Document) -> list[HarvestedLatex]:
    """Every ``<latex>`` block in page order.

    Access-tag spans are decoded directly. A page without any, or with
    delimiters in some other shape, is scanned as copied text instead.
    """
    out: list[HarvestedLatex] = []
    cache = PageSpans(document)
    for index, page in enumerate(page_refs(document)):
        direct = _decode_spans(cache.tree(page), index)
        out.extend(direct or _scan_text(copy_text(document, index), index))
    return out


# -- association report ----------------------------------------------------------


@dataclass
class AssociationEntry:
    name: str | None
    filespec: Ref
    target: Any
    mcids: list[int] = field(default_factory=list)
    text: str | None = None

    def as_json(self) -> dict:
        return {
            "name": self.name,
            "filespec": self.filespec.number,
            "target": None if self.target is None else str(self.target),
            "mcids": self.mcids,
            "text": self.text,
        }


def _span_extent(document: Document, target: ContentSpanTarget, cache: PageSpans) -> tuple[list[int], str]:
    items = cache.tree(target.page)
    for span in iter_spans(items):
        if span.named_resource == target.name:
            mcids = [s.mcid for s in iter_spans(span.children) if s.mcid is not None]
            plan = [(page_index(document, target.page), target.page, {id(span)})]
            return mcids, _join(_run_plan(plan, cache, COPY))
    return [], ""


def association_report(document: Document) -> list[AssociationEntry]:
    """One entry per (associated file, target); unassociated files get ``target=None``."""
    names = {e.filespec: e.name for e in list_attachments(document) if e.filespec is not None}
    targets = find_targets(document)
    try:
        tree: StructTree | None = parse_structure(document, strict=False)
    except MissingStructTreeRoot:
        tree = None
    cache = PageSpans(document)
    entries: list[AssociationEntry] = []
    for ref in sorted(set(names) | set(targets)):
        bound = targets.get(ref, [])
        if not bound:
            entries.append(AssociationEntry(names.get(ref), ref, None))
        for target in bound:
            entry = AssociationEntry(names.get(ref), ref, target)
            if isinstance(target, StructureTarget) and tree is not None and target.elem in tree.elements:
                entry.mcids = [m for _, m, _ in collect_mcids(tree, tree.elements[target.elem])]
                entry.text = copy_text(document, target)
            elif isinstance(target, ContentSpanTarget):
                entry.mcids, entry.text = _span_extent(document, target, cache)
            entries.append(entry)
    return entries
