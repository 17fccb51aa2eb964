"""Object model, parser and writer for uncompressed PDF files.

Values map onto Python as follows: ``null`` is ``None``, booleans are
``bool``, integers are ``int``, reals are :class:`Real` (a ``float`` that
can remember its source spelling), strings are :class:`PdfString`, names
are :class:`Name`, arrays are ``list``, dictionaries are :class:`PdfDict`,
streams are :class:`Stream` and indirect references are :class:`Ref`.
"""

from __future__ import annotations

import copy
import re
from dataclasses import dataclass, field
from decimal import Decimal
from typing import Any, Iterable, Iterator, Union

from .errors import (
    DanglingReference,
    MalformedXref,
    PdfSyntaxError,
    ReferenceCycle,
    UnsupportedFeature,
)
from .textcodec import DELIMITERS, WHITESPACE, decode_literal, decode_name, decode_text, encode_literal, encode_name

__all__ = [
    "Name",
    "Real",
    "PdfString",
    "Ref",
    "ObjectId",
    "PdfDict",
    "Stream",
    "Keyword",
    "CosValue",
    "Document",
    "ParseIssue",
    "Lexer",
    "parse_value",
    "parse_document",
    "serialize_value",
    "serialize_document",
    "dict_get",
    "resolve",
]


class Name(str):
    """A PDF name, held decoded and without its leading slash."""

    def __repr__(self) -> str:
        return f"/{str(self)}"


class Real(float):
    """Real number; ``text`` keeps the spelling it was parsed from."""

    text: str | None

    def __new__(cls, value: float, text: str | None = None) -> "Real":
        obj = super().__new__(cls, value)
        obj.text = text
        return obj

    def __repr__(self) -> str:
        return format_real(self)

    def __deepcopy__(self, memo: dict) -> "Real":
        return self


@dataclass(frozen=True)
class PdfString:
    value: bytes
    hex: bool = False

    @property
    def text(self) -> str:
        return decode_text(self.value, "hex" if self.hex else "literal")

    def __repr__(self) -> str:
        return f"PdfString({self.value!r}{', hex' if self.hex else ''})"


@dataclass(frozen=True, order=True)
class Ref:
    number: int
    generation: int = 0

    def __post_init__(self) -> None:
        if self.number < 1 or self.generation < 0:
            raise ValueError(f"invalid object id {self.number} {self.generation}")

    def __str__(self) -> str:
        return f"{self.number} {self.generation} R"


ObjectId = Ref


class Keyword(str):
    """A bare token such as ``true``, ``obj`` or a content-stream operator."""

    def __repr__(self) -> str:
        return f"Keyword({str(self)})"


class PdfDict:
    """Ordered dictionary that preserves duplicate keys.

    Lookups return the value of the first occurrence of a key; assignment
    replaces that first occurrence and drops later duplicates.
    """

    __slots__ = ("_items",)

    def __init__(self, items: Iterable[tuple[str, Any]] | dict | None = None, **kwargs: Any) -> None:
        self._items: list[tuple[Name, Any]] = []
        if items is not None:
            pairs = items.items() if isinstance(items, (dict, PdfDict)) else items
            for k, v in pairs:
                self._items.append((Name(k), v))
        for k, v in kwargs.items():
            self._items.append((Name(k), v))

    def get(self, key: str, default: Any = None) -> Any:
        for k, v in self._items:
            if k == key:
                return v
        return default

    def __getitem__(self, key: str) -> Any:
        for k, v in self._items:
            if k == key:
                return v
        raise KeyError(key)

    def __contains__(self, key: object) -> bool:
        return any(k == key for k, _ in self._items)

    def __setitem__(self, key: str, value: Any) -> None:
        for i, (k, _) in enumerate(self._items):
            if k == key:
                self._items[i] = (k, value)
                self._items[i + 1 :] = [(kk, vv) for kk, vv in self._items[i + 1 :] if kk != key]
                return
        self._items.append((Name(key), value))

    def __delitem__(self, key: str) -> None:
        if key not in self:
            raise KeyError(key)
        self._items = [(k, v) for k, v in self._items if k != key]

    def pop(self, key: str, *default: Any) -> Any:
        if key in self:
            value = self[key]
            del self[key]
            return value
        if default:
            return default[0]
        raise KeyError(key)

    def setdefault(self, key: str, value: Any) -> Any:
        if key not in self:
            self[key] = value
        return self[key]

    def keys(self) -> list[Name]:
        seen: list[Name] = []
        for k, _ in self._items:
            if k not in seen:
                seen.append(k)
        return seen

    def items(self) -> list[tuple[Name, Any]]:
        """First-occurrence view, in first-occurrence order."""
        return [(k, self[k]) for k in self.keys()]

    def raw_items(self) -> list[tuple[Name, Any]]:
        return list(self._items)

    def values(self) -> list[Any]:
        return [v for _, v in self.items()]

    def __iter__(self) -> Iterator[Name]:
        return iter(self.keys())

    def __len__(self) -> int:
        return len(self.keys())

    def __eq__(self, other: object) -> bool:
        if isinstance(other, PdfDict):
            return self.items() == other.items()
        if isinstance(other, dict):
            return dict(self.items()) == other
        return NotImplemented

    def __repr__(self) -> str:
        body = " ".join(f"/{k} {v!r}" for k, v in self._items)
        return f"<<{body}>>"

    def __deepcopy__(self, memo: dict) -> "PdfDict":
        new = PdfDict()
        new._items = copy.deepcopy(self._items, memo)
        return new


@dataclass(eq=True)
class Stream:
    dict: PdfDict
    data: bytes = field(repr=False)


CosValue = Union[None, bool, int, Real, float, PdfString, Name, list, PdfDict, Stream, Ref]


# -- lexing -----------------------------------------------------------------

_NUMBER_RE = re.compile(rb"[+-]?(?:\d+\.?\d*|\.\d+)")
_INT_RE = re.compile(rb"[+-]?\d+")
_REGULAR_RE = re.compile(rb"[^\x00\t\n\x0c\r ()<>\[\]{}/%]+")


class _Delim(str):
    pass


ARRAY_OPEN, ARRAY_CLOSE = _Delim("["), _Delim("]")
DICT_OPEN, DICT_CLOSE = _Delim("<<"), _Delim(">>")
BRACE_OPEN, BRACE_CLOSE = _Delim("{"), _Delim("}")


class Lexer:
    """Token reader over a byte buffer; tracks ``pos`` for error offsets."""

    def __init__(self, data: bytes, pos: int = 0) -> None:
        self.data = data
        self.pos = pos

    def skip_ws(self) -> None:
        data, n = self.data, len(self.data)
        while self.pos < n:
            c = data[self.pos]
            if c in WHITESPACE:
                self.pos += 1
            elif c == 0x25:  # comment
                while self.pos < n and data[self.pos] not in b"\r\n":
                    self.pos += 1
            else:
                break

    def at_end(self) -> bool:
        self.skip_ws()
        return self.pos >= len(self.data)

    def next_token(self) -> Any:
        """Return the next token, or raise :class:`PdfSyntaxError` at end of input."""
        self.skip_ws()
        data = self.data
        start = self.pos
        if start >= len(data):
            raise PdfSyntaxError("unexpected end of input", start)
        c = data[start]
        if c == 0x2F:  # /
            m = _REGULAR_RE.match(data, start + 1)
            end = m.end() if m else start + 1
            self.pos = end
            return Name(decode_name(data[start + 1 : end]))
        if c == 0x28:
            return self._literal()
        if c == 0x3C:
            if data[start + 1 : start + 2] == b"<":
                self.pos = start + 2
                return DICT_OPEN
            return self._hex()
        if c == 0x3E:
            if data[start + 1 : start + 2] == b">":
                self.pos = start + 2
                return DICT_CLOSE
            raise PdfSyntaxError("stray '>'", start)
        if c == 0x5B:
            self.pos += 1
            return ARRAY_OPEN
        if c == 0x5D:
            self.pos += 1
            return ARRAY_CLOSE
        if c == 0x7B:
            self.pos += 1
            return BRACE_OPEN
        if c == 0x7D:
            self.pos += 1
            return BRACE_CLOSE
        if c == 0x29:
            raise PdfSyntaxError("stray ')'", start)
        m = _REGULAR_RE.match(data, start)
        token = m.group(0)
        self.pos = m.end()
        if _NUMBER_RE.fullmatch(token):
            if _INT_RE.fullmatch(token):
                return int(token)
            text = token.decode("ascii")
            return Real(float(text), text)
        word = token.decode("latin-1")
        if word == "true":
            return True
        if word == "false":
            return False
        if word == "null":
            return None
        if token[:1] in b"+-.0123456789" and any(ch in b"0123456789" for ch in token):
            raise PdfSyntaxError(f"bad number {word!r}", start)
        return Keyword(word)

    def _literal(self) -> PdfString:
        data = self.data
        start = self.pos
        i = start + 1
        depth = 1
        n = len(data)
        while i < n:
            c = data[i]
            if c == 0x5C:
                i += 2
                continue
            if c == 0x28:
                depth += 1
            elif c == 0x29:
                depth -= 1
                if depth == 0:
                    break
            i += 1
        if depth:
            raise PdfSyntaxError("unterminated literal string", start)
        self.pos = i + 1
        return PdfString(decode_literal(data[start + 1 : i]))

    def _hex(self) -> PdfString:
        data = self.data
        start = self.pos
        end = data.find(b">", start)
        if end < 0:
            raise PdfSyntaxError("unterminated hex string", start)
        digits = bytes(c for c in data[start + 1 : end] if c not in WHITESPACE)
        if len(digits) % 2:
            digits += b"0"
        try:
            value = bytes.fromhex(digits.decode("ascii"))
        except ValueError:
            raise PdfSyntaxError("bad hex string", start) from None
        self.pos = end + 1
        return PdfString(value, hex=True)


def _read_value(lexer: Lexer, token: Any, *, allow_refs: bool = True) -> Any:
    """Complete a value whose first token has already been read."""
    if token is ARRAY_OPEN:
        items: list[Any] = []
        while True:
            start = lexer.pos
            tok = lexer.next_token()
            if tok is ARRAY_CLOSE:
                return items
            if isinstance(tok, _Delim) and tok not in (ARRAY_OPEN, DICT_OPEN):
                raise PdfSyntaxError(f"unexpected {tok!s} in array", start)
            if isinstance(tok, Keyword):
                if tok == "R" and allow_refs and len(items) >= 2:
                    gen, num = items.pop(), items.pop()
                    items.append(_make_ref(num, gen, start))
                    continue
                raise PdfSyntaxError(f"unexpected keyword {tok!s} in array", start)
            items.append(_read_value(lexer, tok, allow_refs=allow_refs))
    if token is DICT_OPEN:
        d = PdfDict()
        while True:
            start = lexer.pos
            tok = lexer.next_token()
            if tok is DICT_CLOSE:
                return d
            if not isinstance(tok, Name):
                raise PdfSyntaxError("dictionary key is not a name", start)
            vstart = lexer.pos
            vtok = lexer.next_token()
            if vtok is DICT_CLOSE or isinstance(vtok, Keyword):
                raise PdfSyntaxError(f"missing value for key /{tok}", vstart)
            value = _read_value(lexer, vtok, allow_refs=allow_refs)
            if allow_refs and isinstance(value, int) and not isinstance(value, bool):
                value = _maybe_ref(lexer, value)
            d._items.append((tok, value))
    if isinstance(token, _Delim):
        raise PdfSyntaxError(f"unexpected {token!s}", lexer.pos - len(token))
    return token


def _make_ref(num: Any, gen: Any, offset: int) -> Ref:
    if not (type(num) is int and type(gen) is int) or num < 1 or gen < 0:
        raise PdfSyntaxError("malformed indirect reference", offset)
    return Ref(num, gen)


def _maybe_ref(lexer: Lexer, first: int) -> Any:
    """Look ahead for ``<gen> R`` after an integer."""
    save = lexer.pos
    try:
        gen = lexer.next_token()
        if type(gen) is int:
            kw = lexer.next_token()
            if isinstance(kw, Keyword) and kw == "R":
                return _make_ref(first, gen, save)
    except PdfSyntaxError:
        pass
    lexer.pos = save
    return first


def parse_value(data: bytes, offset: int = 0) -> tuple[Any, int]:
    """Parse one complete value starting at ``offset``; return it and the next offset."""
    lexer = Lexer(data, offset)
    tok = lexer.next_token()
    if isinstance(tok, Keyword):
        raise PdfSyntaxError(f"unexpected keyword {tok!s}", offset)
    value = _read_value(lexer, tok)
    if type(value) is int:
        value = _maybe_ref(lexer, value)
    return value, lexer.pos


def dict_get(d: PdfDict, key: str) -> Any:
    """Value of the first occurrence of ``key``, or ``None`` when absent."""
    return d.get(key)


# -- documents --------------------------------------------------------------


@dataclass(frozen=True)
class ParseIssue:
    code: str
    message: str
    offset: int | None = None
    ref: Ref | None = None


@dataclass
class Document:
    objects: dict[Ref, Any] = field(default_factory=dict)
    trailer: PdfDict = field(default_factory=PdfDict)
    xref: dict[Ref, int] = field(default_factory=dict)
    free: list[int] = field(default_factory=list)
    version: str = "1.7"
    diagnostics: list[ParseIssue] = field(default_factory=list, compare=False)

    def copy(self) -> "Document":
        return copy.deepcopy(self)

    def get(self, ref: Ref) -> Any:
        try:
            return self.objects[ref]
        except KeyError:
            raise DanglingReference(ref) from None

    def resolve(self, value: Any) -> Any:
        return resolve(self, value)

    def next_ref(self) -> Ref:
        top = max((r.number for r in self.objects), default=0)
        return Ref(top + 1, 0)

    def add(self, value: Any) -> Ref:
        ref = self.next_ref()
        self.objects[ref] = value
        return ref

    @property
    def catalog(self) -> PdfDict:
        root = self.resolve(self.trailer.get("Root"))
        if not isinstance(root, PdfDict):
            raise PdfSyntaxError("trailer /Root is not a dictionary")
        return root

    def equivalent(self, other: "Document") -> bool:
        """Structural equality of objects and trailer, ignoring offsets and /Size."""
        if self.objects != other.objects:
            return False
        a, b = PdfDict(self.trailer.raw_items()), PdfDict(other.trailer.raw_items())
        for key in ("Size", "Prev"):
            a.pop(key, None)
            b.pop(key, None)
        return a == b


def resolve(document: Document, value: Any) -> Any:
    """Chase indirect references until a direct value is reached."""
    seen: set[Ref] = set()
    while isinstance(value, Ref):
        if value in seen:
            raise ReferenceCycle(f"reference cycle through {value}")
        seen.add(value)
        value = document.get(value)
    return value


_HEADER_RE = re.compile(rb"%PDF-(\d+\.\d+)")
_OBJ_HEADER_RE = re.compile(rb"(\d+)[\x00\t\n\x0c\r ]+(\d+)[\x00\t\n\x0c\r ]+obj(?![^\x00\t\n\x0c\r ()<>\[\]{}/%])")
_STARTXREF_RE = re.compile(rb"startxref[\x00\t\n\x0c\r ]+(\d+)")
_XREF_ENTRY_RE = re.compile(rb"(\d{10}) (\d{5}) ([nf])")


class _Parser:
    def __init__(self, data: bytes, strict: bool) -> None:
        self.data = data
        self.strict = strict
        self.issues: list[ParseIssue] = []
        self.xref: dict[Ref, int] = {}
        self.free: list[int] = []
        self.objects: dict[Ref, Any] = {}
        self._loading: set[Ref] = set()

    def issue(self, code: str, message: str, exc_type: type[Exception], offset: int | None = None, ref: Ref | None = None) -> None:
        if self.strict:
            if exc_type is PdfSyntaxError:
                raise PdfSyntaxError(message, offset)
            raise exc_type(message)
        self.issues.append(ParseIssue(code, message, offset, ref))

    def run(self) -> Document:
        data = self.data
        if not data:
            raise PdfSyntaxError("empty input", 0)
        m = _HEADER_RE.search(data, 0, 1024)
        if not m:
            raise PdfSyntaxError("missing %PDF- header", 0)
        version = m.group(1).decode()
        starts = list(_STARTXREF_RE.finditer(data))
        if not starts:
            raise MalformedXref("no startxref keyword")
        xref_pos = int(starts[-1].group(1))
        trailer = self._read_xref(xref_pos)
        for key in ("XRefStm", "Prev", "Encrypt"):
            if key in trailer:
                raise UnsupportedFeature(f"trailer /{key} (incremental update, xref stream or encryption)")
        for ref, offset in sorted(self.xref.items(), key=lambda kv: kv[0]):
            if ref not in self.objects:
                self._load(ref, offset)
        return Document(
            objects=dict(sorted(self.objects.items())),
            trailer=trailer,
            xref=dict(self.xref),
            free=list(self.free),
            version=version,
            diagnostics=self.issues,
        )

    def _read_xref(self, pos: int) -> PdfDict:
        data = self.data
        lexer = Lexer(data, pos)
        lexer.skip_ws()
        if not data.startswith(b"xref", lexer.pos):
            if _OBJ_HEADER_RE.match(data, lexer.pos):
                raise UnsupportedFeature("cross-reference streams are not supported")
            raise MalformedXref(f"no xref table at offset {pos}")
        lexer.pos += 4
        while True:
            lexer.skip_ws()
            if data.startswith(b"trailer", lexer.pos):
                lexer.pos += 7
                break
            first = lexer.next_token()
            count = lexer.next_token()
            if type(first) is not int or type(count) is not int or first < 0 or count < 0:
                raise MalformedXref(f"bad xref subsection header at {lexer.pos}")
            lexer.skip_ws()
            for k in range(count):
                m = _XREF_ENTRY_RE.match(data, lexer.pos)
                if not m:
                    raise MalformedXref(f"bad xref entry at offset {lexer.pos}")
                lexer.pos = m.end()
                lexer.skip_ws()
                num = first + k
                offset, gen, kind = int(m.group(1)), int(m.group(2)), m.group(3)
                if kind == b"n":
                    if num == 0:
                        raise MalformedXref("object 0 marked in use")
                    self.xref[Ref(num, gen)] = offset
                elif num != 0:
                    self.free.append(num)
        tok = lexer.next_token()
        trailer = _read_value(lexer, tok)
        if not isinstance(trailer, PdfDict):
            raise MalformedXref("trailer is not a dictionary")
        return trailer

    def _find_header(self, ref: Ref) -> int | None:
        pattern = re.compile(rb"(?<![0-9])%d[\x00\t\n\x0c\r ]+%d[\x00\t\n\x0c\r ]+obj" % (ref.number, ref.generation))
        m = None
        for m in pattern.finditer(self.data):
            pass
        return m.start() if m else None

    def _load(self, ref: Ref, offset: int) -> Any:
        if ref in self.objects:
            return self.objects[ref]
        if ref in self._loading:
            raise PdfSyntaxError(f"object {ref} refers to itself while loading", offset)
        self._loading.add(ref)
        try:
            m = _OBJ_HEADER_RE.match(self.data, offset)
            if not m or (int(m.group(1)), int(m.group(2))) != (ref.number, ref.generation):
                self.issue(
                    "XREF_OFFSET",
                    f"xref offset {offset} for object {ref.number} {ref.generation} does not point at its header",
                    MalformedXref,
                    offset,
                    ref,
                )
                found = self._find_header(ref)
                if found is None:
                    raise MalformedXref(f"object {ref} not found in file")
                offset = found
                m = _OBJ_HEADER_RE.match(self.data, offset)
            value = self._read_body(ref, m.end())
            self.objects[ref] = value
            return value
        finally:
            self._loading.discard(ref)

    def _read_body(self, ref: Ref, pos: int) -> Any:
        data = self.data
        lexer = Lexer(data, pos)
        value, after = parse_value(data, pos)
        lexer.pos = after
        lexer.skip_ws()
        if isinstance(value, PdfDict) and data.startswith(b"stream", lexer.pos):
            return self._read_stream(ref, value, lexer.pos + 6)
        if not data.startswith(b"endobj", lexer.pos):
            self.issue("SYNTAX", f"missing endobj after object {ref}", PdfSyntaxError, lexer.pos, ref)
        return value

    def _length(self, ref: Ref, value: Any) -> int | None:
        if isinstance(value, Ref):
            offset = self.xref.get(value)
            if offset is None:
                return None
            value = self._load(value, offset)
        if type(value) is int and value >= 0:
            return value
        return None

    def _read_stream(self, ref: Ref, sdict: PdfDict, pos: int) -> Stream:
        data = self.data
        if "Filter" in sdict or "DecodeParms" in sdict:
            raise UnsupportedFeature(f"object {ref}: stream filters (compression) are not supported")
        if sdict.get("Type") in ("XRef", "ObjStm"):
            raise UnsupportedFeature(f"object {ref}: /Type /{sdict.get('Type')} streams are not supported")
        if data.startswith(b"\r\n", pos):
            pos += 2
        elif data[pos : pos + 1] in (b"\n", b"\r"):
            pos += 1
        length = self._length(ref, sdict.get("Length"))
        end = pos + length if length is not None else -1
        ok = False
        if length is not None and end <= len(data):
            # only a single end-of-line marker may separate data and keyword
            j = end + (2 if data.startswith(b"\r\n", end) else 1 if data[end : end + 1] in (b"\n", b"\r") else 0)
            ok = data.startswith(b"endstream", j)
        if not ok:
            self.issue("STREAM_LENGTH", f"stream {ref} /Length does not match its data", PdfSyntaxError, pos, ref)
            k = data.find(b"endstream", pos)
            if k < 0:
                raise PdfSyntaxError(f"stream {ref} has no endstream", pos)
            end = k
            if data[end - 2 : end] == b"\r\n":
                end -= 2
            elif data[end - 1 : end] in (b"\n", b"\r"):
                end -= 1
            j = k
        payload = data[pos:end]
        after = j + len(b"endstream")
        lexer = Lexer(data, after)
        lexer.skip_ws()
        if not data.startswith(b"endobj", lexer.pos):
            self.issue("SYNTAX", f"missing endobj after stream {ref}", PdfSyntaxError, lexer.pos, ref)
        return Stream(sdict, payload)


def parse_document(data: bytes, *, strict: bool = True) -> Document:
    """Parse a complete uncompressed PDF.

    With ``strict=False`` recoverable problems (xref offsets that miss their
    object, stream lengths that disagree with the data) are recorded in
    ``Document.diagnostics`` instead of raised.
    """
    return _Parser(bytes(data), strict).run()


# -- writing -----------------------------------------------------------------


def format_real(value: float) -> str:
    if isinstance(value, Real) and value.text is not None:
        try:
            if float(value.text) == float(value):
                return value.text
        except ValueError:
            pass
    if value != value or value in (float("inf"), float("-inf")):
        raise ValueError("PDF cannot represent NaN or infinity")
    text = repr(float(value))
    if "e" in text or "E" in text:
        text = format(Decimal(text), "f")
    if "." not in text:
        text += ".0"
    return text


def _write_string(s: PdfString) -> bytes:
    if s.hex:
        return b"<" + s.value.hex().upper().encode("ascii") + b">"
    return b"(" + encode_literal(s.value) + b")"


def serialize_value(value: Any, *, normalize_generation: bool = True) -> bytes:
    """Canonical byte form of a direct value (streams are handled by the writer)."""
    if value is None:
        return b"null"
    if value is True:
        return b"true"
    if value is False:
        return b"false"
    if isinstance(value, Name):
        return b"/" + encode_name(value)
    if isinstance(value, Ref):
        gen = 0 if normalize_generation else value.generation
        return b"%d %d R" % (value.number, gen)
    if isinstance(value, int):
        return str(value).encode("ascii")
    if isinstance(value, float):
        return format_real(value).encode("ascii")
    if isinstance(value, PdfString):
        return _write_string(value)
    if isinstance(value, (list, tuple)):
        return b"[" + b" ".join(serialize_value(v, normalize_generation=normalize_generation) for v in value) + b"]"
    if isinstance(value, PdfDict):
        parts = [b"<<"]
        for k, v in value.items():
            parts.append(b"/" + encode_name(k) + b" " + serialize_value(v, normalize_generation=normalize_generation))
        parts.append(b">>")
        return b" ".join(parts) if len(parts) > 2 else b"<< >>"
    if isinstance(value, Stream):
        raise TypeError("streams can only be written as indirect objects")
    if isinstance(value, str):
        raise TypeError(f"plain str {value!r} is ambiguous; use Name or PdfString")
    raise TypeError(f"cannot serialize {type(value).__name__}")


def serialize_document(document: Document) -> bytes:
    """Write ``document`` as a canonical uncompressed PDF with one xref table.

    Objects are emitted in ascending number order with generation 0, stream
    /Length entries are recomputed, and the trailer /Size is regenerated.
    """
    out = bytearray()
    out += b"%%PDF-%s\n%%\xe2\xe3\xcf\xd3\n" % document.version.encode("ascii")
    offsets: dict[int, int] = {}
    for ref in sorted(document.objects):
        value = document.objects[ref]
        offsets[ref.number] = len(out)
        out += b"%d 0 obj\n" % ref.number
        if isinstance(value, Stream):
            sdict = PdfDict(value.dict.raw_items())
            length = sdict.get("Length")
            if not (isinstance(length, Ref) and document.objects.get(length) == len(value.data)):
                sdict["Length"] = len(value.data)
            out += serialize_value(sdict) + b"\nstream\n" + value.data + b"\nendstream\n"
        else:
            out += serialize_value(value) + b"\n"
        out += b"endobj\n"
    size = max(offsets, default=0) + 1
    free = [n for n in range(1, size) if n not in offsets]
    xref_pos = len(out)
    out += b"xref\n0 %d\n" % size
    chain = free + [0]
    out += b"%010d 65535 f \n" % chain[0]
    nxt = iter(chain[1:])
    for n in range(1, size):
        if n in offsets:
            out += b"%010d 00000 n \n" % offsets[n]
        else:
            out += b"%010d 00000 f \n" % next(nxt)
    trailer = PdfDict(document.trailer.raw_items())
    for key in ("Prev", "XRefStm"):
        trailer.pop(key, None)
    trailer["Size"] = size
    trailer = PdfDict([("Size", size)] + [(k, v) for k, v in trailer.items() if k != "Size"])
    out += b"trailer\n" + serialize_value(trailer) + b"\nstartxref\n%d\n%%%%EOF\n" % xref_pos
    return bytes(out)


def iter_refs(value: Any) -> Iterator[Ref]:
    """Every indirect reference nested anywhere inside ``value``."""
    stack = [value]
    while stack:
        v = stack.pop()
        if isinstance(v, Ref):
            yield v
        elif isinstance(v, list):
            stack.extend(reversed(v))
        elif isinstance(v, PdfDict):
            stack.extend(reversed([x for _, x in v.raw_items()]))
        elif isinstance(v, Stream):
            stack.append(v.dict)


def dangling_refs(document: Document) -> list[tuple[Ref | None, Ref]]:
    """(holder, target) pairs for references reachable from the trailer that resolve nowhere."""
    found: list[tuple[Ref | None, Ref]] = []
    seen: set[Ref] = set()
    queue: list[tuple[Ref | None, Any]] = [(None, document.trailer)]
    while queue:
        holder, value = queue.pop()
        for ref in iter_refs(value):
            if ref in seen:
                continue
            seen.add(ref)
            if ref not in document.objects:
                found.append((holder, ref))
                continue
            queue.append((ref, document.objects[ref]))
    return sorted(found, key=lambda p: (p[1], p[0] or Ref(1)))
