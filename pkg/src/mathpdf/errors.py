"""Exception hierarchy shared by every layer of the toolkit."""

from __future__ import annotations


class PdfError(Exception):
    """Base class for all errors raised by :mod:`mathpdf`."""


# -- container / syntax ------------------------------------------------------


class PdfSyntaxError(PdfError):
    def __init__(self, message: str, offset: int | None = None) -> None:
        self.offset = offset
        if offset is not None:
            message = f"{message} (at byte {offset})"
        super().__init__(message)


class MalformedXref(PdfError):
    pass


class UnsupportedFeature(PdfError):
    """Input uses a feature this toolkit deliberately does not handle."""


class DanglingReference(PdfError):
    def __init__(self, ref) -> None:
        self.ref = ref
        super().__init__(f"reference {ref} does not resolve to an object")


class ReferenceCycle(PdfError):
    pass


# -- text codec --------------------------------------------------------------


class TextCodecError(PdfError):
    pass


class UnterminatedString(TextCodecError):
    pass


class UnpairedSurrogate(TextCodecError):
    def __init__(self, offset: int) -> None:
        self.offset = offset
        super().__init__(f"unpaired UTF-16 surrogate at byte {offset}")


class BadHexEscape(TextCodecError):
    pass


# -- content streams ---------------------------------------------------------


class ContentError(PdfError):
    pass


class UnbalancedTextBlock(ContentError):
    pass


class UnbalancedMarkedContent(ContentError):
    def __init__(self, depth: int, offset: int | None) -> None:
        self.depth = depth
        self.offset = offset
        super().__init__(f"unbalanced marked content (depth {depth}, offset {offset})")


class WellFormednessError(ContentError):
    pass


class DuplicateMcid(ContentError):
    def __init__(self, mcid: int) -> None:
        self.mcid = mcid
        super().__init__(f"MCID {mcid} occurs more than once")


# -- structure tree ----------------------------------------------------------


class StructureError(PdfError):
    pass


class MissingStructTreeRoot(StructureError):
    pass


class CycleDetected(StructureError):
    pass


class OrphanElem(StructureError):
    pass


class DanglingMcid(StructureError):
    def __init__(self, elem, mcid: int) -> None:
        self.elem = elem
        self.mcid = mcid
        super().__init__(f"structure element {elem} claims MCID {mcid}, absent from its page")


class McidAlreadyClaimed(StructureError):
    pass


# -- attachments -------------------------------------------------------------


class AttachmentError(PdfError):
    pass


class NotAFilespec(AttachmentError):
    pass


class DuplicateName(AttachmentError):
    pass


class NameNotFound(AttachmentError):
    pass


class IntegrityMismatch(AttachmentError):
    def __init__(self, details: list[str]) -> None:
        self.details = details
        super().__init__("; ".join(details))


class UnknownTarget(AttachmentError):
    pass


class UnsupportedMethod(AttachmentError):
    pass


# -- access tags / extraction ------------------------------------------------


class AccessTagError(PdfError):
    pass


class MalformedDelimiters(AccessTagError):
    pass


class TargetNotFound(AccessTagError):
    pass


class CrossesPageBoundary(AccessTagError):
    pass


class AlreadyTagged(AccessTagError):
    pass


class UnbalancedDelimiters(PdfError):
    def __init__(self, page: int) -> None:
        self.page = page
        super().__init__(f"unbalanced <latex> delimiters on page {page}")
