from __future__ import annotations

import re

import pytest
from hypothesis import given
from hypothesis import strategies as st

from mathpdf.errors import UnpairedSurrogate, UnterminatedString
from mathpdf.textcodec import (
    decode_literal,
    decode_name,
    decode_text,
    encode_literal,
    encode_name,
    encode_text,
    encode_text_utf16be,
)

scalar_text = st.text(alphabet=st.characters(blacklist_categories=("Cs",)))


def test_decode_fake_space_payload():
    body = rb"\015<latex>\015k \134in \134RR\015</latex>\015<content>\015"
    assert decode_literal(body) == b"\r<latex>\rk \\in \\RR\r</latex>\r<content>\r"


@pytest.mark.parametrize(
    "body, expected",
    [
        (b"abc", b"abc"),
        (rb"\050x\051", b"(x)"),
        (b"", b""),
        (rb"\0511", b")1"),
        (rb"\101\102\103", b"ABC"),
        (rb"\7x", b"\x07x"),
        (b"a(b)c", b"a(b)c"),
        (rb"\n\r\t\b\f\\", b"\n\r\t\b\f\\"),
        (b"line\\\nwrapped", b"linewrapped"),
        (b"line\\\r\nwrapped", b"linewrapped"),
        (b"raw\r\nbreak", b"raw\nbreak"),
        (b"raw\rbreak", b"raw\nbreak"),
        (rb"\q", b"q"),
    ],
)
def test_decode_literal_cases(body, expected):
    assert decode_literal(body) == expected


def test_unbalanced_parens_rejected():
    with pytest.raises(UnterminatedString):
        decode_literal(b"a(b")


def test_encode_literal_examples():
    assert encode_literal(b"k \\in \\RR") == rb"k \134in \134RR"
    assert encode_literal(b"") == b""
    assert encode_literal(b"(a)") == rb"\050a\051"
    assert encode_literal(b"\r\n") == rb"\015\012"


@pytest.mark.parametrize(
    "data, text",
    [
        (bytes.fromhex("FEFFD835DC58"), "\U0001d458"),
        (bytes.fromhex("FEFF2208"), "\u2208"),
        (bytes.fromhex("FEFF211D"), "\u211d"),
        (b"AB", "AB"),
        (b"Ren\xe9e", "Renée"),
    ],
)
def test_decode_text(data, text):
    assert decode_text(data) == text


def test_encode_text_utf16be():
    assert encode_text_utf16be("\u211d") == bytes.fromhex("FEFF211D")
    assert encode_text_utf16be("\U0001d458") == bytes.fromhex("FEFFD835DC58")
    assert encode_text_utf16be("") == bytes.fromhex("FEFF")


def test_encode_text_picks_latin1_when_possible():
    assert encode_text("  as element of  ") == b"  as element of  "
    assert encode_text("\u2208") == bytes.fromhex("FEFF2208")


def test_unpaired_surrogate_rejected():
    with pytest.raises(UnpairedSurrogate):
        decode_text(bytes.fromhex("FEFFD835"))
    with pytest.raises(UnpairedSurrogate):
        decode_text(bytes.fromhex("FEFFDC580041"))


@pytest.mark.parametrize(
    "raw, name",
    [
        (b"application#2Fx-tex", "application/x-tex"),
        (b"application#2Fmathml+xml", "application/mathml+xml"),
        (b"Formula", "Formula"),
        (b"A#20B", "A B"),
    ],
)
def test_names(raw, name):
    assert decode_name(raw) == name
    assert encode_name(name) == raw


@given(st.binary())
def test_literal_round_trip(data):
    encoded = encode_literal(data)
    assert decode_literal(encoded) == data
    assert all(c not in encoded for c in b"()\r")
    assert re.fullmatch(rb"(?:[^\\]|\\[0-7]{3})*", encoded, re.S)


@given(scalar_text)
def test_utf16_round_trip(text):
    decoded = decode_text(encode_text_utf16be(text))
    assert decoded == text
    assert not any(0xD800 <= ord(c) <= 0xDFFF for c in decoded)


@given(scalar_text)
def test_encode_text_round_trip(text):
    assert decode_text(encode_text(text)) == text


@given(st.text(alphabet=st.characters(blacklist_categories=("Cs",), blacklist_characters="\x00"), min_size=1))
def test_name_round_trip(name):
    assert decode_name(encode_name(name)) == name


@given(st.binary(min_size=2).map(lambda b: b"\xfe\xff" + b))
def test_decoded_text_never_holds_surrogates(data):
    try:
        text = decode_text(data)
    except Exception:
        return
    assert not any(0xD800 <= ord(c) <= 0xDFFF for c in text)
