"""Cross-object consistency checks over a parsed (or half-broken) file."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any

from .accesstags import decode_payload
from .attachments import checksum, embedded_files, find_targets
from .catalog import markinfo_af, page_content, page_refs
from .content import build_span_tree, iter_spans, parse_content
from .cos import Document, PdfDict, PdfString, Ref, Stream, dangling_refs, parse_document, resolve
from .errors import (
    MalformedDelimiters,
    MissingStructTreeRoot,
    PdfError,
    UnbalancedMarkedContent,
    UnbalancedTextBlock,
)
from .structure import collect_mcids, parse_structure

__all__ = ["Finding", "ValidationReport", "validate", "validate_document", "SCHEMA", "CODES"]

SCHEMA = "mathpdf.validate/1"
CODES = (
    "PARSE_ERROR",
    "XREF_OFFSET",
    "STREAM_LENGTH",
    "DANGLING_REF",
    "NAME_TREE_UNSORTED",
    "FILESPEC_TYPE",
    "AF_NOT_FILESPEC",
    "EMBEDDED_SIZE",
    "CHECKSUM_MISMATCH",
    "AF_UNREGISTERED",
    "AF_REGISTRY_DUPLICATE",
    "STRUCT_CYCLE",
    "STRUCT_PARENT",
    "STRUCT_DANGLING",
    "DANGLING_MCID",
    "DUPLICATE_MCID",
    "MCID_UNREFERENCED",
    "CONTENT_SYNTAX",
    "UNBALANCED_TEXT_BLOCK",
    "UNBALANCED_MARKED_CONTENT",
    "ACCESS_TAG_DELIMITERS",
)


@dataclass(frozen=True, order=True)
class Finding:
    code: str
    message: str
    location: str = ""

    def as_json(self) -> dict:
        return {"code": self.code, "message": self.message, "location": self.location}


@dataclass
class ValidationReport:
    findings: list[Finding] = field(default_factory=list)

    @property
    def clean(self) -> bool:
        return not self.findings

    def codes(self) -> set[str]:
        return {f.code for f in self.findings}

    def as_json(self) -> dict:
        return {"schema": SCHEMA, "clean": self.clean, "findings": [f.as_json() for f in self.findings]}


def validate(data: bytes) -> ValidationReport:
    """Parse leniently, then check. Unrecoverable syntax errors propagate."""
    return validate_document(parse_document(data, strict=False))


def validate_document(document: Document) -> ValidationReport:
    out: list[Finding] = []
    for issue in document.diagnostics:
        out.append(Finding(issue.code, issue.message, str(issue.ref or issue.offset or "")))
    for holder, target in dangling_refs(document):
        out.append(Finding("DANGLING_REF", f"{target} does not exist", str(holder or "trailer")))
    _check_name_tree(document, out)
    _check_files(document, out)
    _check_content_and_structure(document, out)
    return ValidationReport(sorted(set(out), key=lambda f: (CODES.index(f.code) if f.code in CODES else 99, f)))


def _check_name_tree(document: Document, out: list[Finding]) -> None:
    names = resolve(document, document.catalog.get("Names"))
    root = resolve(document, names.get("EmbeddedFiles")) if isinstance(names, PdfDict) else None
    seen: set[int] = set()

    def visit(node: Any, where: str) -> None:
        node = resolve(document, node)
        if not isinstance(node, PdfDict) or id(node) in seen:
            return
        seen.add(id(node))
        pairs = resolve(document, node.get("Names"))
        if isinstance(pairs, list):
            keys = [k.value for k in pairs[0::2] if isinstance(k, PdfString)]
            if keys != sorted(keys) or len(keys) != len(pairs[0::2]):
                out.append(Finding("NAME_TREE_UNSORTED", "/EmbeddedFiles keys are not sorted byte-wise", where))
            limits = resolve(document, node.get("Limits"))
            if isinstance(limits, list) and keys and len(limits) == 2:
                lo, hi = (v.value if isinstance(v, PdfString) else None for v in limits)
                if lo != keys[0] or hi != keys[-1]:
                    out.append(Finding("NAME_TREE_UNSORTED", "/Limits do not match the leaf's keys", where))
        kids = resolve(document, node.get("Kids"))
        if isinstance(kids, list):
            for kid in kids:
                visit(kid, str(kid))

    if root is not None:
        visit(root, "EmbeddedFiles")


def _filespec_like(value: Any) -> bool:
    return isinstance(value, PdfDict) and ("EF" in value or "F" in value or "UF" in value)


def _check_filespec(document: Document, ref: Any, where: str, out: list[Finding], *, in_af: bool) -> PdfDict | None:
    spec = resolve(document, ref)
    if isinstance(spec, PdfDict) and spec.get("Type") == "Filespec":
        return spec
    if _filespec_like(spec):
        out.append(Finding("FILESPEC_TYPE", f"{ref} looks like a file specification but lacks /Type /Filespec", where))
        return spec
    if in_af:
        out.append(Finding("AF_NOT_FILESPEC", f"/AF entry {ref} is not a file specification", where))
    else:
        out.append(Finding("FILESPEC_TYPE", f"name-tree value {ref} is not a file specification", where))
    return None


def _check_files(document: Document, out: list[Finding]) -> None:
    try:
        entries = embedded_files(document)
    except PdfError:
        entries = []
    for key, value in entries:
        where = key.decode("latin-1") if isinstance(key, bytes) else str(key)
        spec = _check_filespec(document, value, where, out, in_af=False)
        if spec is None:
            continue
        ef = resolve(document, spec.get("EF"))
        stream = resolve(document, ef.get("UF") or ef.get("F")) if isinstance(ef, PdfDict) else None
        if not isinstance(stream, Stream):
            continue
        params = resolve(document, stream.dict.get("Params"))
        if not isinstance(params, PdfDict):
            continue
        size = params.get("Size")
        if isinstance(size, PdfString):
            size = int(size.text) if size.text.isdigit() else size
        if size is not None and size != len(stream.data):
            out.append(Finding("EMBEDDED_SIZE", f"/Size {size} but payload has {len(stream.data)} bytes", where))
        digest = params.get("CheckSum")
        if isinstance(digest, PdfString):
            raw = digest.value
            declared = raw.hex().upper() if len(raw) == 16 else raw.decode("latin-1").upper()
            if declared != checksum(stream.data):
                out.append(Finding("CHECKSUM_MISMATCH", f"/CheckSum {declared} != MD5 {checksum(stream.data)}", where))

    targets = find_targets(document)
    registry = markinfo_af(document) or []
    for ref, bound in sorted(targets.items()):
        where = ", ".join(str(t) for t in bound)
        _check_filespec(document, ref, where, out, in_af=True)
        if ref not in registry:
            out.append(Finding("AF_UNREGISTERED", f"{ref} is used in /AF but missing from /MarkInfo /AF", where))
    for ref in sorted({r for r in registry if registry.count(r) > 1}):
        out.append(Finding("AF_REGISTRY_DUPLICATE", f"{ref} appears more than once in /MarkInfo /AF", "MarkInfo"))
    for ref in registry:
        if ref not in targets:
            _check_filespec(document, ref, "MarkInfo", out, in_af=True)


def _check_content_and_structure(document: Document, out: list[Finding]) -> None:
    span_trees: dict[Ref, list] = {}
    for index, page in enumerate(page_refs(document)):
        where = f"page {index}"
        try:
            ops = parse_content(page_content(document, page))
        except UnbalancedTextBlock as exc:
            out.append(Finding("UNBALANCED_TEXT_BLOCK", str(exc), where))
            continue
        except PdfError as exc:
            out.append(Finding("CONTENT_SYNTAX", str(exc), where))
            continue
        try:
            items = build_span_tree(ops)
        except UnbalancedMarkedContent as exc:
            out.append(Finding("UNBALANCED_MARKED_CONTENT", str(exc), where))
            continue
        span_trees[page] = items
        seen: set[int] = set()
        open_tag = False
        for span in iter_spans(items):
            if span.mcid is not None:
                if span.mcid in seen:
                    out.append(Finding("DUPLICATE_MCID", f"MCID {span.mcid} is used by more than one span", where))
                seen.add(span.mcid)
            if span.actual_text is None:
                continue
            try:
                payload = decode_payload(span.actual_text)
            except MalformedDelimiters as exc:
                out.append(Finding("ACCESS_TAG_DELIMITERS", str(exc), where))
                continue
            if payload is None:
                continue
            if payload.is_opening == open_tag:
                out.append(Finding("ACCESS_TAG_DELIMITERS", f"unpaired {payload.kind} access tag", where))
            open_tag = payload.is_opening
        if open_tag:
            out.append(Finding("ACCESS_TAG_DELIMITERS", "opening access tag is never closed", where))

    try:
        tree = parse_structure(document, strict=False)
    except MissingStructTreeRoot:
        return
    for code, message in tree.issues:
        out.append(Finding(code, message, "StructTreeRoot"))
    claimed: dict[tuple[Ref, int], Ref] = {}
    for elem in tree.elements.values():
        for page, mcid, owner in collect_mcids(tree, elem):
            if owner is not elem:
                continue
            if page is None or type(mcid) is not int:
                out.append(Finding("DANGLING_MCID", f"MCID {mcid} has no page", str(elem.ref)))
                continue
            if page not in span_trees:
                if page not in document.objects:
                    out.append(Finding("DANGLING_MCID", f"MCID {mcid} points at missing page {page}", str(elem.ref)))
                continue
            if not any(s.mcid == mcid for s in iter_spans(span_trees[page])):
                out.append(Finding("DANGLING_MCID", f"MCID {mcid} not found on {page}", str(elem.ref)))
            key = (page, mcid)
            if key in claimed and claimed[key] != elem.ref:
                out.append(Finding("DUPLICATE_MCID", f"MCID {mcid} on {page} claimed by {claimed[key]} and {elem.ref}",
                                   str(elem.ref)))
            claimed.setdefault(key, elem.ref)
    for page, items in span_trees.items():
        for span in iter_spans(items):
            if span.mcid is not None and (page, span.mcid) not in claimed:
                out.append(Finding("MCID_UNREFERENCED", f"MCID {span.mcid} has no structure element", str(page)))

