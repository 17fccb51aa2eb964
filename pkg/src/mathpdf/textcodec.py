"""Byte-level codecs for PDF literal strings, text strings and names.

Literal strings use backslash escapes (octal codes such as ``\\134`` for a
backslash), text strings are either single-byte (decoded here as Latin-1)
or UTF-16BE introduced by the ``FE FF`` byte-order mark, and names escape
irregular bytes as ``#xx``.
"""

from __future__ import annotations

from .errors import BadHexEscape, TextCodecError, UnpairedSurrogate, UnterminatedString

__all__ = [
    "TextString",
    "decode_literal",
    "encode_literal",
    "decode_text",
    "encode_text_utf16be",
    "encode_text",
    "decode_name",
    "encode_name",
    "BOM_UTF16BE",
]

BOM_UTF16BE = b"\xfe\xff"

WHITESPACE = b"\x00\t\n\x0c\r "
DELIMITERS = b"()<>[]{}/%"

_SIMPLE_ESCAPES = {
    ord("n"): b"\n",
    ord("r"): b"\r",
    ord("t"): b"\t",
    ord("b"): b"\b",
    ord("f"): b"\f",
    ord("("): b"(",
    ord(")"): b")",
    ord("\\"): b"\\",
}
_OCTAL = b"01234567"


class TextString(str):
    """A decoded text string that remembers whether it came from ``(..)`` or ``<..>``."""

    origin: str

    def __new__(cls, value: str, origin: str = "literal") -> "TextString":
        obj = super().__new__(cls, value)
        obj.origin = origin
        return obj


def decode_literal(body: bytes) -> bytes:
    """Resolve escapes in the bytes found between a literal string's outer parens.

    Unescaped end-of-line markers (CR, LF or CRLF) become a single LF, and a
    backslash before an end-of-line is a line continuation. Unknown escapes
    drop the backslash.
    """
    out = bytearray()
    i = 0
    n = len(body)
    depth = 0
    while i < n:
        c = body[i]
        if c == 0x5C:  # backslash
            i += 1
            if i >= n:
                raise UnterminatedString("literal string ends inside an escape")
            c = body[i]
            if c in _OCTAL:
                j = i
                while j < n and j < i + 3 and body[j] in _OCTAL:
                    j += 1
                out.append(int(body[i:j], 8) & 0xFF)
                i = j
                continue
            if c == 0x0D:
                i += 1
                if i < n and body[i] == 0x0A:
                    i += 1
                continue
            if c == 0x0A:
                i += 1
                continue
            out += _SIMPLE_ESCAPES.get(c, bytes([c]))
            i += 1
            continue
        if c == 0x28:
            depth += 1
        elif c == 0x29:
            depth -= 1
            if depth < 0:
                raise UnterminatedString("unbalanced ')' in literal string")
        if c == 0x0D:
            out.append(0x0A)
            i += 1
            if i < n and body[i] == 0x0A:
                i += 1
            continue
        out.append(c)
        i += 1
    if depth:
        raise UnterminatedString("unbalanced '(' in literal string")
    return bytes(out)


def encode_literal(data: bytes) -> bytes:
    """Escape ``data`` so it can sit between literal-string parentheses.

    Backslash, both parentheses, CR and LF use three-digit octal codes, as
    does every other byte outside printable ASCII.
    """
    out = bytearray()
    for c in data:
        if c in (0x5C, 0x28, 0x29) or c < 0x20 or c > 0x7E:
            out += b"\\%03o" % c
        else:
            out.append(c)
    return bytes(out)


def decode_text(data: bytes, origin: str = "literal") -> TextString:
    """Decode a PDF text string.

    Bytes starting with ``FE FF`` are UTF-16BE, with surrogate pairs combined
    into a single code point. Anything else maps byte-for-byte onto Latin-1.
    """
    if not data.startswith(BOM_UTF16BE):
        return TextString(data.decode("latin-1"), origin)
    if len(data) % 2:
        raise TextCodecError("UTF-16BE text string has an odd byte count")
    chars: list[str] = []
    i = 2
    n = len(data)
    while i < n:
        unit = (data[i] << 8) | data[i + 1]
        if 0xD800 <= unit <= 0xDBFF:
            if i + 3 >= n:
                raise UnpairedSurrogate(i)
            low = (data[i + 2] << 8) | data[i + 3]
            if not 0xDC00 <= low <= 0xDFFF:
                raise UnpairedSurrogate(i)
            chars.append(chr(0x10000 + ((unit - 0xD800) << 10) + (low - 0xDC00)))
            i += 4
            continue
        if 0xDC00 <= unit <= 0xDFFF:
            raise UnpairedSurrogate(i)
        chars.append(chr(unit))
        i += 2
    return TextString("".join(chars), origin)


def encode_text_utf16be(text: str) -> bytes:
    """BOM-prefixed UTF-16BE; astral code points become surrogate pairs."""
    try:
        return BOM_UTF16BE + text.encode("utf-16-be")
    except UnicodeEncodeError as exc:
        raise UnpairedSurrogate(2 + 2 * exc.start) from exc


def encode_text(text: str) -> bytes:
    """Shortest faithful text-string bytes: Latin-1 when possible, else UTF-16BE."""
    if text.startswith("\xfe\xff"):
        return encode_text_utf16be(text)
    try:
        return text.encode("latin-1")
    except UnicodeEncodeError:
        return encode_text_utf16be(text)


def _is_regular(c: int) -> bool:
    return 0x21 <= c <= 0x7E and c not in DELIMITERS and c != 0x23


def decode_name(raw: bytes) -> str:
    """Resolve ``#xx`` escapes in a name (without its leading slash)."""
    out = bytearray()
    i = 0
    n = len(raw)
    while i < n:
        c = raw[i]
        if c == 0x23:
            pair = raw[i + 1 : i + 3]
            if len(pair) != 2:
                raise BadHexEscape(f"truncated #-escape in name {raw!r}")
            try:
                out.append(int(pair, 16))
            except ValueError:
                raise BadHexEscape(f"bad #-escape {pair!r} in name {raw!r}") from None
            i += 3
            continue
        out.append(c)
        i += 1
    try:
        return out.decode("utf-8")
    except UnicodeDecodeError:
        return out.decode("latin-1")


def encode_name(name: str) -> bytes:
    """Name bytes (without leading slash) with irregular bytes as ``#xx``."""
    out = bytearray()
    for c in name.encode("utf-8"):
        if _is_regular(c):
            out.append(c)
        else:
            out += b"#%02X" % c
    return bytes(out)
