"""Embedded files, the /EmbeddedFiles name tree and Associated Files (/AF)."""

from __future__ import annotations

import hashlib
from dataclasses import dataclass, field
from typing import Any, Union

from .catalog import (
    markinfo_af,
    own_resources,
    page_content,
    page_refs,
    page_resources,
    register_af,
    set_page_content,
)
from .content import MarkedContentSpan, build_span_tree, parse_content, serialize_content
from .cos import Document, Name, PdfDict, PdfString, Ref, Stream, resolve
from .errors import (
    DuplicateName,
    IntegrityMismatch,
    NameNotFound,
    NotAFilespec,
    UnknownTarget,
    UnsupportedMethod,
)
from .structure import attach_af_to_struct, is_filespec, parse_structure
from .textcodec import decode_text, encode_text
from .trees import build_name_tree, read_name_tree

__all__ = [
    "RELATIONSHIPS",
    "DEFAULT_MOD_DATE",
    "DocumentTarget",
    "PageTarget",
    "ContentSpanTarget",
    "StructureTarget",
    "XObjectTarget",
    "AnnotationTarget",
    "AssociationTarget",
    "AttachmentInfo",
    "AttachmentReport",
    "ExtractedFile",
    "checksum",
    "embed_file",
    "associate",
    "wrap_with_af",
    "embedded_files",
    "list_attachments",
    "extract_attachment",
    "find_targets",
]

RELATIONSHIPS = ("Source", "Supplement", "Data", "Alternative", "Unspecified")
DEFAULT_MOD_DATE = "D:20140201111224+11'00'"


@dataclass(frozen=True)
class DocumentTarget:
    def __str__(self) -> str:
        return "Document"


@dataclass(frozen=True)
class PageTarget:
    page: Ref

    def __str__(self) -> str:
        return f"Page({self.page.number})"


@dataclass(frozen=True)
class ContentSpanTarget:
    page: Ref
    name: str
    shared: bool = False

    def __str__(self) -> str:
        return f"ContentSpan(page {self.page.number}, {self.name})"


@dataclass(frozen=True)
class StructureTarget:
    elem: Ref

    def __str__(self) -> str:
        return f"Structure({self.elem.number})"


@dataclass(frozen=True)
class XObjectTarget:
    xobject: Ref

    def __str__(self) -> str:
        return f"XObject({self.xobject.number})"


@dataclass(frozen=True)
class AnnotationTarget:
    annotation: Ref


AssociationTarget = Union[DocumentTarget, PageTarget, ContentSpanTarget, StructureTarget, XObjectTarget]


def checksum(payload: bytes) -> str:
    return hashlib.md5(payload).hexdigest().upper()


def _mime_name(mime: str) -> Name:
    return Name(mime)


def _filename_ascii(name: str) -> str:
    return "".join(c if 0x20 <= ord(c) < 0x7F else "_" for c in name)


def _text_string(text: str) -> PdfString:
    data = encode_text(text)
    return PdfString(data, hex=data.startswith(b"\xfe\xff"))


def _names_root(document: Document, create: bool) -> tuple[PdfDict | None, Any]:
    """(the /Names dictionary, the /EmbeddedFiles node value)."""
    catalog = document.catalog
    names = resolve(document, catalog.get("Names"))
    if names is None:
        if not create:
            return None, None
        names = PdfDict()
        catalog["Names"] = document.add(names)
    return names, names.get("EmbeddedFiles")


def embedded_files(document: Document) -> list[tuple[bytes, Any]]:
    """(name bytes, Filespec value) pairs from the /EmbeddedFiles name tree, as stored."""
    _, node = _names_root(document, create=False)
    if node is None:
        return []
    return [(k.value if isinstance(k, PdfString) else bytes(str(k), "latin-1"), v)
            for k, v in read_name_tree(document, node)]


def embed_file(
    document: Document,
    payload: bytes,
    name: str,
    desc: str,
    relationship: str = "Unspecified",
    mime: str = "application/octet-stream",
    *,
    mod_date: str = DEFAULT_MOD_DATE,
) -> tuple[Document, Ref]:
    """Attach ``payload`` and register it in the /EmbeddedFiles name tree.

    Returns the new document and the reference of the new /Filespec.
    """
    if not name:
        raise ValueError("attachment name must be non-empty")
    if relationship not in RELATIONSHIPS:
        raise ValueError(f"unknown AFRelationship {relationship!r}")
    doc = document.copy()
    key = _text_string(name).value
    pairs = embedded_files(doc)
    if any(k == key for k, _ in pairs):
        raise DuplicateName(f"an attachment named {name!r} already exists")

    params = PdfDict([
        ("ModDate", PdfString(mod_date.encode("latin-1"))),
        ("Size", len(payload)),
        ("CheckSum", PdfString(checksum(payload).encode("ascii"))),
    ])
    ef = doc.add(Stream(
        PdfDict([("Type", Name("EmbeddedFile")), ("Subtype", _mime_name(mime)), ("Params", params),
                 ("Length", len(payload))]),
        bytes(payload),
    ))
    spec = PdfDict([
        ("Type", Name("Filespec")),
        ("F", PdfString(_filename_ascii(name).encode("latin-1"))),
        ("UF", _text_string(name)),
        ("Desc", _text_string(desc)),
        ("AFRelationship", Name(relationship)),
        ("EF", PdfDict([("F", ef)])),
    ])
    spec_ref = doc.add(spec)

    names, node = _names_root(doc, create=True)
    pairs.append((key, spec_ref))
    root = node if isinstance(node, Ref) else None
    tree_ref = build_name_tree(doc, pairs, root)
    names["EmbeddedFiles"] = tree_ref
    return doc, spec_ref


def _check_filespecs(document: Document, refs: list[Ref]) -> None:
    for ref in refs:
        if not is_filespec(document, ref):
            raise NotAFilespec(f"{ref} is not a /Filespec dictionary")


def _merge_af(holder: PdfDict, refs: list[Ref], document: Document) -> None:
    current = holder.get("AF")
    if isinstance(current, Ref) and isinstance(document.objects.get(current), list):
        arr = document.objects[current]
        arr.extend([r for r in refs if r not in arr])
        return
    existing = resolve(document, current)
    existing = list(existing) if isinstance(existing, list) else []
    holder["AF"] = existing + [r for r in refs if r not in existing]


def associate(document: Document, refs: list[Ref], target: Any) -> Document:
    """Return a copy of ``document`` with ``refs`` associated to ``target``.

    Every association also lands in the /MarkInfo /AF registry.
    """
    if isinstance(target, AnnotationTarget):
        raise UnsupportedMethod("association through annotations is not supported")
    if not refs:
        return document.copy()
    if isinstance(target, StructureTarget):
        return attach_af_to_struct(document, target.elem, refs)
    doc = document.copy()
    _check_filespecs(doc, refs)
    if isinstance(target, DocumentTarget):
        _merge_af(doc.catalog, refs, doc)
    elif isinstance(target, PageTarget):
        page = doc.objects.get(target.page)
        if target.page not in page_refs(doc):
            raise UnknownTarget(f"{target.page} is not a page")
        _merge_af(page, refs, doc)
    elif isinstance(target, XObjectTarget):
        xobj = doc.objects.get(target.xobject)
        if not isinstance(xobj, Stream) or xobj.dict.get("Type", "XObject") != "XObject" or "Subtype" not in xobj.dict:
            raise UnknownTarget(f"{target.xobject} is not an XObject stream")
        _merge_af(xobj.dict, refs, doc)
    elif isinstance(target, ContentSpanTarget):
        _install_property(doc, target, refs)
    else:
        raise UnknownTarget(f"unknown association target {target!r}")
    register_af(doc, refs)
    return doc


def _install_property(doc: Document, target: ContentSpanTarget, refs: list[Ref]) -> None:
    pages = page_refs(doc)
    if target.page not in pages:
        raise UnknownTarget(f"{target.page} is not a page")
    res = own_resources(doc, target.page)
    props_value = res.get("Properties")
    if props_value is None:
        props_value = doc.add(PdfDict())
        res["Properties"] = props_value
    props = resolve(doc, props_value)
    current = resolve(doc, props.get(target.name))
    current = list(current) if isinstance(current, list) else []
    props[target.name] = current + [r for r in refs if r not in current]
    if target.shared:
        if not isinstance(props_value, Ref):
            props_value = doc.add(props)
            res["Properties"] = props_value
        for page in pages:
            other = own_resources(doc, page)
            existing = other.get("Properties")
            if existing is None:
                other["Properties"] = props_value
            elif existing != props_value:
                merged = resolve(doc, existing)
                if target.name not in merged:
                    merged[target.name] = props[target.name]


def wrap_with_af(document: Document, page: Ref, name: str, first: int, last: int) -> Document:
    """Wrap top-level content items ``first..last`` of ``page`` in ``/AF /name BDC … EMC``."""
    doc = document.copy()
    items = build_span_tree(parse_content(page_content(doc, page)))
    if not 0 <= first <= last < len(items):
        raise UnknownTarget(f"content range {first}..{last} outside 0..{len(items) - 1}")
    span = MarkedContentSpan(Name("AF"), None, Name(name), items[first : last + 1])
    items[first : last + 1] = [span]
    set_page_content(doc, page, serialize_content(items))
    return doc


# -- reporting ---------------------------------------------------------------


def find_targets(document: Document) -> dict[Ref, list[Any]]:
    """Map every Filespec ref that is used in an /AF array to its targets."""
    found: dict[Ref, list[Any]] = {}

    def add(refs: Any, target: Any) -> None:
        refs = resolve(document, refs)
        if not isinstance(refs, list):
            return
        for ref in refs:
            if isinstance(ref, Ref):
                bucket = found.setdefault(ref, [])
                if target not in bucket:
                    bucket.append(target)

    add(document.catalog.get("AF"), DocumentTarget())
    seen_xobjects: set[Ref] = set()
    for page in page_refs(document):
        pdict = document.objects[page]
        add(pdict.get("AF"), PageTarget(page))
        res = page_resources(document, page)
        props = resolve(document, res.get("Properties"))
        if isinstance(props, PdfDict):
            for key, value in props.items():
                if isinstance(resolve(document, value), list):
                    add(value, ContentSpanTarget(page, str(key)))
        xobjects = resolve(document, res.get("XObject"))
        if isinstance(xobjects, PdfDict):
            for value in xobjects.values():
                if isinstance(value, Ref) and value not in seen_xobjects:
                    seen_xobjects.add(value)
                    xobj = document.objects.get(value)
                    if isinstance(xobj, Stream):
                        add(xobj.dict.get("AF"), XObjectTarget(value))
    if "StructTreeRoot" in document.catalog:
        tree = parse_structure(document, strict=False)
        for elem in tree.elements.values():
            for ref in elem.associated_files:
                bucket = found.setdefault(ref, [])
                target = StructureTarget(elem.ref)
                if target not in bucket:
                    bucket.append(target)
    return found


@dataclass
class AttachmentInfo:
    name: str
    filespec: Any
    desc: str | None
    relationship: str | None
    mime: str | None
    size: int | None
    checksum: str | None
    checksum_ok: bool
    size_ok: bool
    targets: list[Any] = field(default_factory=list)
    registered: bool = False

    def as_json(self) -> dict:
        return {
            "name": self.name,
            "filespec": self.filespec.number if isinstance(self.filespec, Ref) else None,
            "desc": self.desc,
            "relationship": self.relationship,
            "mime": self.mime,
            "size": self.size,
            "checksum": self.checksum,
            "checksum_ok": self.checksum_ok,
            "size_ok": self.size_ok,
            "targets": [str(t) for t in self.targets],
            "registered": self.registered,
        }


@dataclass
class AttachmentReport:
    entries: list[AttachmentInfo]
    findings: list[tuple[str, str]]

    def __iter__(self):
        return iter(self.entries)

    def __len__(self) -> int:
        return len(self.entries)

    def get(self, name: str) -> AttachmentInfo | None:
        for entry in self.entries:
            if entry.name == name:
                return entry
        return None


def _params_int(value: Any) -> int | None:
    if type(value) is int:
        return value
    if isinstance(value, PdfString):
        try:
            return int(value.value.decode("ascii").strip())
        except ValueError:
            return None
    return None


def _params_digest(value: Any) -> str | None:
    if not isinstance(value, PdfString):
        return None
    raw = value.value
    if len(raw) == 16 and not all(chr(c) in "0123456789abcdefABCDEF" for c in raw):
        return raw.hex().upper()
    return raw.decode("latin-1").upper()


@dataclass
class ExtractedFile:
    name: str
    payload: bytes
    desc: str | None
    relationship: str | None
    mime: str | None
    declared_size: int | None
    declared_checksum: str | None
    problems: list[str]


def _filespec_stream(document: Document, spec: PdfDict) -> Stream | None:
    ef = resolve(document, spec.get("EF"))
    if not isinstance(ef, PdfDict):
        return None
    stream = resolve(document, ef.get("UF") or ef.get("F"))
    return stream if isinstance(stream, Stream) else None


def _inspect(document: Document, name: str, spec_value: Any) -> ExtractedFile:
    spec = resolve(document, spec_value)
    problems: list[str] = []
    if not isinstance(spec, PdfDict):
        return ExtractedFile(name, b"", None, None, None, None, None, ["name tree value is not a dictionary"])
    stream = _filespec_stream(document, spec)
    if stream is None:
        return ExtractedFile(name, b"", _text_of(spec.get("Desc")), _name_of(spec.get("AFRelationship")),
                             None, None, None, ["Filespec has no embedded file stream"])
    params = resolve(document, stream.dict.get("Params"))
    params = params if isinstance(params, PdfDict) else PdfDict()
    size = _params_int(params.get("Size"))
    digest = _params_digest(params.get("CheckSum"))
    if size is not None and size != len(stream.data):
        problems.append(f"/Params /Size {size} != payload length {len(stream.data)}")
    if digest is not None and digest != checksum(stream.data):
        problems.append(f"/Params /CheckSum {digest} != MD5 {checksum(stream.data)}")
    subtype = stream.dict.get("Subtype")
    return ExtractedFile(
        name=name,
        payload=stream.data,
        desc=_text_of(spec.get("Desc")),
        relationship=_name_of(spec.get("AFRelationship")),
        mime=str(subtype) if isinstance(subtype, Name) else None,
        declared_size=size,
        declared_checksum=digest,
        problems=problems,
    )


def _text_of(value: Any) -> str | None:
    return str(value.text) if isinstance(value, PdfString) else None


def _name_of(value: Any) -> str | None:
    return str(value) if isinstance(value, Name) else None


def _display_name(key: bytes) -> str:
    return str(decode_text(key))


def list_attachments(document: Document) -> AttachmentReport:
    """Describe every name-tree attachment and everything that associates it."""
    targets = find_targets(document)
    registry = markinfo_af(document) or []
    entries: list[AttachmentInfo] = []
    findings: list[tuple[str, str]] = []
    for key, spec_value in embedded_files(document):
        name = _display_name(key)
        info = _inspect(document, name, spec_value)
        ref = spec_value if isinstance(spec_value, Ref) else None
        entry_targets = targets.get(ref, []) if ref else []
        registered = ref in registry if ref else False
        entries.append(AttachmentInfo(
            name=name,
            filespec=ref,
            desc=info.desc,
            relationship=info.relationship,
            mime=info.mime,
            size=len(info.payload),
            checksum=info.declared_checksum,
            checksum_ok=info.declared_checksum == checksum(info.payload) if info.declared_checksum else False,
            size_ok=info.declared_size == len(info.payload),
            targets=entry_targets,
            registered=registered,
        ))
        if entry_targets and not registered:
            findings.append(("associated-but-unregistered", f"{name} is associated but missing from /MarkInfo /AF"))
        for problem in info.problems:
            findings.append(("integrity", f"{name}: {problem}"))
    return AttachmentReport(entries, findings)


def extract_attachment(document: Document, name: str, *, verify: bool = True) -> ExtractedFile:
    """Payload and metadata of the attachment called ``name``.

    With ``verify`` a /Size or /CheckSum mismatch raises :class:`IntegrityMismatch`.
    """
    for key, spec_value in embedded_files(document):
        if _display_name(key) == name:
            info = _inspect(document, name, spec_value)
            if verify and info.problems:
                raise IntegrityMismatch(info.problems)
            return info
    raise NameNotFound(f"no attachment named {name!r}")
