"""Page content streams: tokenizing, marked-content span trees, writing."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any, Iterator, Union

from .cos import Keyword, Lexer, Name, PdfDict, PdfString, Real, _Delim, _read_value, serialize_value
from .errors import (
    ContentError,
    DuplicateMcid,
    PdfSyntaxError,
    UnbalancedMarkedContent,
    UnbalancedTextBlock,
    WellFormednessError,
)
from .textcodec import WHITESPACE, TextString, decode_text, encode_text, encode_text_utf16be

__all__ = [
    "ContentOp",
    "BeginText",
    "EndText",
    "SetFont",
    "ShowText",
    "Transform",
    "BeginMarkedContent",
    "EndMarkedContent",
    "Other",
    "MarkedContentSpan",
    "parse_content",
    "build_span_tree",
    "flatten",
    "serialize_content",
    "find_span_by_mcid",
    "iter_spans",
    "make_span",
    "TEXT_SHOWING",
]

TEXT_SHOWING = frozenset({"TJ", "Tj", "'", '"'})


@dataclass
class BeginText:
    offset: int | None = field(default=None, compare=False, repr=False)


@dataclass
class EndText:
    offset: int | None = field(default=None, compare=False, repr=False)


@dataclass
class SetFont:
    font: Name
    size: float
    offset: int | None = field(default=None, compare=False, repr=False)

    def __post_init__(self) -> None:
        self.font = Name(self.font)


@dataclass
class ShowText:
    """``TJ``: strings interleaved with kerning numbers, kept verbatim."""

    items: list
    offset: int | None = field(default=None, compare=False, repr=False)

    @property
    def strings(self) -> list[PdfString]:
        return [i for i in self.items if isinstance(i, PdfString)]


@dataclass
class Transform:
    matrix: tuple
    offset: int | None = field(default=None, compare=False, repr=False)


@dataclass
class BeginMarkedContent:
    """``BDC`` (with inline properties or a named resource) or ``BMC`` (neither)."""

    tag: Name
    properties: PdfDict | None = None
    named_resource: Name | None = None
    offset: int | None = field(default=None, compare=False, repr=False)


@dataclass
class EndMarkedContent:
    offset: int | None = field(default=None, compare=False, repr=False)


@dataclass
class Other:
    operator: str
    operands: list = field(default_factory=list)
    raw: bytes | None = None
    offset: int | None = field(default=None, compare=False, repr=False)


ContentOp = Union[BeginText, EndText, SetFont, ShowText, Transform, BeginMarkedContent, EndMarkedContent, Other]


@dataclass
class MarkedContentSpan:
    tag: Name
    properties: PdfDict | None = None
    named_resource: Name | None = None
    children: list = field(default_factory=list)
    offset: int | None = field(default=None, compare=False, repr=False)

    @property
    def mcid(self) -> int | None:
        if self.properties is None:
            return None
        value = self.properties.get("MCID")
        return value if type(value) is int else None

    def _text(self, key: str) -> TextString | None:
        if self.properties is None:
            return None
        value = self.properties.get(key)
        if isinstance(value, PdfString):
            return decode_text(value.value, "hex" if value.hex else "literal")
        return None

    @property
    def actual_text(self) -> TextString | None:
        return self._text("ActualText")

    @property
    def alt(self) -> TextString | None:
        return self._text("Alt")


def make_span(
    tag: str,
    children: list | None = None,
    *,
    mcid: int | None = None,
    actual_text: str | bytes | PdfString | None = None,
    alt: str | None = None,
) -> MarkedContentSpan:
    """Build a span with an inline property dictionary.

    A ``str`` ActualText is written as a UTF-16BE hex string; pass bytes or a
    :class:`PdfString` to control the exact string form.
    """
    props = PdfDict()
    if mcid is not None:
        props["MCID"] = mcid
    if actual_text is not None:
        if isinstance(actual_text, str):
            actual_text = PdfString(encode_text_utf16be(actual_text), hex=True)
        elif isinstance(actual_text, bytes):
            actual_text = PdfString(actual_text)
        props["ActualText"] = actual_text
    if alt is not None:
        props["Alt"] = PdfString(encode_text(alt))
    return MarkedContentSpan(Name(tag), props, None, list(children or []))


# -- parsing ---------------------------------------------------------------


def _number(v: Any) -> bool:
    return isinstance(v, (int, float)) and not isinstance(v, bool)


def _inline_image(lexer: Lexer, start: int) -> Other:
    data = lexer.data
    operands: list[Any] = []
    while True:
        tok = lexer.next_token()
        if isinstance(tok, Keyword) and tok == "ID":
            break
        operands.append(_read_value(lexer, tok, allow_refs=False))
    pos = lexer.pos + 1
    i = pos
    while True:
        i = data.find(b"EI", i)
        if i < 0:
            raise PdfSyntaxError("inline image without EI", start)
        before_ok = i == 0 or data[i - 1] in WHITESPACE
        after = data[i + 2 : i + 3]
        if before_ok and (after == b"" or after[0] in WHITESPACE):
            break
        i += 2
    lexer.pos = i + 2
    return Other("BI", operands, raw=data[start : i + 2], offset=start)


def _make_op(op: str, operands: list, offset: int) -> ContentOp:
    def bad(what: str) -> PdfSyntaxError:
        return PdfSyntaxError(f"operator {op}: {what}", offset)

    if op == "BT":
        return BeginText(offset)
    if op == "ET":
        return EndText(offset)
    if op == "Tf":
        if len(operands) != 2 or not isinstance(operands[0], Name) or not _number(operands[1]):
            raise bad("expects /font size")
        return SetFont(operands[0], operands[1], offset)
    if op == "TJ":
        if len(operands) != 1 or not isinstance(operands[0], list):
            raise bad("expects one array")
        return ShowText(operands[0], offset)
    if op == "cm":
        if len(operands) != 6 or not all(_number(v) for v in operands):
            raise bad("expects six numbers")
        return Transform(tuple(operands), offset)
    if op == "BDC":
        if len(operands) != 2 or not isinstance(operands[0], Name):
            raise bad("expects /tag and properties")
        props = operands[1]
        if isinstance(props, PdfDict):
            return BeginMarkedContent(operands[0], props, None, offset)
        if isinstance(props, Name):
            return BeginMarkedContent(operands[0], None, props, offset)
        raise bad("properties must be a dictionary or a resource name")
    if op == "BMC":
        if len(operands) != 1 or not isinstance(operands[0], Name):
            raise bad("expects /tag")
        return BeginMarkedContent(operands[0], None, None, offset)
    if op == "EMC":
        return EndMarkedContent(offset)
    return Other(op, operands, None, offset)


def parse_content(data: bytes) -> list[ContentOp]:
    """Tokenize a content stream into operators.

    Only BT, ET, Tf, TJ, cm, BDC/BMC and EMC are modelled; everything else is
    kept as :class:`Other` with its operands.
    """
    lexer = Lexer(data)
    ops: list[ContentOp] = []
    operands: list[Any] = []
    op_start: int | None = None
    in_text = False
    while not lexer.at_end():
        start = lexer.pos
        if op_start is None:
            op_start = start
        tok = lexer.next_token()
        if isinstance(tok, Keyword):
            if tok == "BI":
                if operands:
                    raise PdfSyntaxError("operands before BI", start)
                ops.append(_inline_image(lexer, start))
                op_start = None
                continue
            op = _make_op(str(tok), operands, op_start)
            if isinstance(op, BeginText):
                if in_text:
                    raise UnbalancedTextBlock(f"nested BT at byte {start}")
                in_text = True
            elif isinstance(op, EndText):
                if not in_text:
                    raise UnbalancedTextBlock(f"ET without BT at byte {start}")
                in_text = False
            elif (isinstance(op, ShowText) or (isinstance(op, Other) and op.operator in TEXT_SHOWING)) and not in_text:
                raise UnbalancedTextBlock(f"text shown outside BT/ET at byte {start}")
            ops.append(op)
            operands = []
            op_start = None
            continue
        if isinstance(tok, _Delim) and tok not in ("[", "<<"):
            raise PdfSyntaxError(f"unexpected {tok!s}", start)
        operands.append(_read_value(lexer, tok, allow_refs=False))
    if operands:
        raise PdfSyntaxError("operands without an operator at end of stream", len(data))
    if in_text:
        raise UnbalancedTextBlock("BT without ET at end of stream")
    return ops


def build_span_tree(ops: list[ContentOp]) -> list:
    """Nest ops into :class:`MarkedContentSpan` objects following BDC/BMC … EMC."""
    root: list = []
    stack: list[MarkedContentSpan] = []
    for op in ops:
        if isinstance(op, BeginMarkedContent):
            span = MarkedContentSpan(op.tag, op.properties, op.named_resource, [], op.offset)
            (stack[-1].children if stack else root).append(span)
            stack.append(span)
        elif isinstance(op, EndMarkedContent):
            if not stack:
                raise UnbalancedMarkedContent(-1, op.offset)
            stack.pop()
        else:
            (stack[-1].children if stack else root).append(op)
    if stack:
        raise UnbalancedMarkedContent(len(stack), stack[-1].offset)
    return root


def flatten(items: list) -> list[ContentOp]:
    """Inverse of :func:`build_span_tree`."""
    out: list[ContentOp] = []
    for item in items:
        if isinstance(item, MarkedContentSpan):
            out.append(BeginMarkedContent(item.tag, item.properties, item.named_resource))
            out.extend(flatten(item.children))
            out.append(EndMarkedContent())
        else:
            out.append(item)
    return out


def iter_spans(items: list) -> Iterator[MarkedContentSpan]:
    """Depth-first, document-order walk over every span."""
    for item in items:
        if isinstance(item, MarkedContentSpan):
            yield item
            yield from iter_spans(item.children)


def find_span_by_mcid(tree: list, mcid: int) -> MarkedContentSpan | None:
    found: MarkedContentSpan | None = None
    for span in iter_spans(tree):
        if span.mcid == mcid:
            if found is not None:
                raise DuplicateMcid(mcid)
            found = span
    return found


# -- writing -----------------------------------------------------------------


def _operands(values: list) -> bytes:
    return b" ".join(serialize_value(v) for v in values)


def _write_op(op: ContentOp) -> bytes:
    if isinstance(op, BeginText):
        return b"BT"
    if isinstance(op, EndText):
        return b"ET"
    if isinstance(op, SetFont):
        return _operands([op.font, op.size]) + b" Tf"
    if isinstance(op, ShowText):
        return serialize_value(op.items) + b"TJ"
    if isinstance(op, Transform):
        return _operands(list(op.matrix)) + b" cm"
    if isinstance(op, BeginMarkedContent):
        if op.properties is not None:
            return _operands([op.tag, op.properties]) + b"BDC"
        if op.named_resource is not None:
            return _operands([op.tag, op.named_resource]) + b" BDC"
        return _operands([op.tag]) + b" BMC"
    if isinstance(op, EndMarkedContent):
        return b"EMC"
    if isinstance(op, Other):
        if op.raw is not None:
            return op.raw
        head = _operands(op.operands)
        return (head + b" " if head else b"") + op.operator.encode("latin-1")
    raise ContentError(f"not a content operator: {op!r}")


def serialize_content(items: list) -> bytes:
    """Write an op list or span tree as content-stream bytes, one operator per line.

    Raises :class:`WellFormednessError` if text is shown outside BT/ET or if
    text blocks / marked content are unbalanced.
    """
    ops = flatten(items)
    in_text = False
    depth = 0
    for op in ops:
        if isinstance(op, BeginText):
            if in_text:
                raise WellFormednessError("nested BT")
            in_text = True
        elif isinstance(op, EndText):
            if not in_text:
                raise WellFormednessError("ET without BT")
            in_text = False
        elif isinstance(op, ShowText) or (isinstance(op, Other) and op.operator in TEXT_SHOWING):
            if not in_text:
                raise WellFormednessError("text-showing operator outside BT/ET")
        elif isinstance(op, BeginMarkedContent):
            depth += 1
        elif isinstance(op, EndMarkedContent):
            depth -= 1
            if depth < 0:
                raise WellFormednessError("EMC without matching BDC/BMC")
    if in_text or depth:
        raise WellFormednessError("unterminated text block or marked content")
    return b"\n".join(_write_op(op) for op in ops) + (b"\n" if ops else b"")


def number(value: float | int) -> float | int:
    """Content-stream number from a Python value (floats become :class:`Real`)."""
    return value if isinstance(value, int) else Real(value)
