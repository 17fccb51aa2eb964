"""Mathematical source and accessibility tags for uncompressed PDF files.

The package reads and writes classic-xref PDFs, embeds LaTeX/MathML source as
associated files, injects fake-space access tags whose /ActualText carries the
LaTeX source, and emulates what a reader copies or speaks.
"""

from __future__ import annotations

__version__ = "0.1.0"

from .accesstags import McidRange, decode_payload, encode_closing, encode_opening, inject_access_tags
from .attachments import (
    ContentSpanTarget,
    DocumentTarget,
    PageTarget,
    StructureTarget,
    XObjectTarget,
    associate,
    embed_file,
    extract_attachment,
    list_attachments,
)
from .cos import Document, Name, PdfDict, PdfString, Ref, Stream, parse_document, serialize_document
from .extraction import accessible_text, association_report, copy_text, harvest_latex
from .structure import parse_structure, resolve_marked_content
from .textcodec import decode_text, encode_text
from .validate import validate

__all__ = [
    "__version__",
    "Document",
    "Name",
    "PdfDict",
    "PdfString",
    "Ref",
    "Stream",
    "parse_document",
    "serialize_document",
    "decode_text",
    "encode_text",
    "parse_structure",
    "resolve_marked_content",
    "DocumentTarget",
    "PageTarget",
    "ContentSpanTarget",
    "StructureTarget",
    "XObjectTarget",
    "embed_file",
    "associate",
    "list_attachments",
    "extract_attachment",
    "McidRange",
    "encode_opening",
    "encode_closing",
    "decode_payload",
    "inject_access_tags",
    "copy_text",
    "accessible_text",
    "harvest_latex",
    "association_report",
    "validate",
]
