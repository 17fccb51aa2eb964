"""Seeded corruptions of the access-tagged formula sample, each paired with the
finding code the validator must raise for it."""

from __future__ import annotations

import random
import re
from dataclasses import dataclass
from typing import Callable

from mathpdf import samples
from mathpdf.catalog import page_content, set_page_content
from mathpdf.cos import Document, Name, PdfDict, PdfString, Ref, parse_document, serialize_document

PAGE = Ref(5)
FILESPECS = [Ref(22), Ref(24), Ref(27), Ref(29)]
EMBEDDED = [Ref(21), Ref(23), Ref(26), Ref(28)]
MATH_LEAVES = {Ref(114): 9, Ref(116): 10, Ref(118): 11}


@dataclass(frozen=True)
class Mutation:
    name: str
    code: str
    apply: Callable[[bytes, random.Random], bytes]


def _edit(data: bytes, change: Callable[[Document, random.Random], None], rng: random.Random) -> bytes:
    doc = parse_document(data)
    change(doc, rng)
    return serialize_document(doc)


def _object_span(data: bytes, ref: Ref) -> tuple[int, int]:
    start = data.index(b"\n%d 0 obj\n" % ref.number) + 1
    return start, data.index(b"endobj", start)


def wrong_length(data: bytes, rng: random.Random) -> bytes:
    data = serialize_document(parse_document(data))
    target = rng.choice(EMBEDDED)
    start, end = _object_span(data, target)
    m = re.compile(rb"/Length (\d+)").search(data, start, end)
    old = int(m.group(1))
    new = old - 1 if old % 10 else old + 1
    return data[: m.start(1)] + str(new).encode() + data[m.end(1) :]


def bad_xref_offset(data: bytes, rng: random.Random) -> bytes:
    data = serialize_document(parse_document(data))
    target = rng.choice([Ref(5), Ref(95), Ref(112), Ref(2081)])
    table = data.index(b"\nxref\n") + 1
    entry = data.index(b"\n", table + 5) + 1 + 20 * target.number
    offset = int(data[entry : entry + 10])
    return data[:entry] + b"%010d" % (offset + 3) + data[entry + 10 :]


def unsorted_name_tree(doc: Document, rng: random.Random) -> None:
    names = doc.objects[Ref(1860)]["Names"]
    i = 2 * rng.randrange(len(names) // 2 - 1)
    names[i : i + 4] = names[i + 2 : i + 4] + names[i : i + 2]


def bad_checksum(doc: Document, rng: random.Random) -> None:
    stream = doc.objects[rng.choice(EMBEDDED)]
    digest = bytearray(stream.dict["Params"]["CheckSum"].value)
    pos = rng.randrange(len(digest))
    digest[pos] = ord("0") if digest[pos] != ord("0") else ord("1")
    stream.dict["Params"]["CheckSum"] = PdfString(bytes(digest))


def dangling_mcid(doc: Document, rng: random.Random) -> None:
    leaf = rng.choice(sorted(MATH_LEAVES))
    doc.objects[leaf]["K"] = [90 + rng.randrange(9)]


def duplicate_mcid(doc: Document, rng: random.Random) -> None:
    leaf = rng.choice(sorted(MATH_LEAVES))
    mcid = MATH_LEAVES[leaf]
    other = 7 if mcid != 7 else 13
    data = page_content(doc, PAGE).replace(b"/MCID %d " % mcid, b"/MCID %d " % other, 1)
    set_page_content(doc, PAGE, data)


def unbalanced_emc(doc: Document, rng: random.Random) -> None:
    data = page_content(doc, PAGE)
    cuts = [m.start() for m in re.finditer(rb"^EMC$", data, re.M)]
    pos = rng.choice(cuts)
    set_page_content(doc, PAGE, data[:pos] + b"EMC\n" + data[pos:])


def filespec_missing_type(doc: Document, rng: random.Random) -> None:
    doc.objects[rng.choice(FILESPECS)].pop("Type")


def af_outside_registry(doc: Document, rng: random.Random) -> None:
    registry = doc.objects[Ref(1859)]
    registry.remove(rng.choice([Ref(27), Ref(29)]))


def malformed_delimiters(doc: Document, rng: random.Random) -> None:
    data = page_content(doc, PAGE)
    broken = rng.choice([rb"(\015<latex>\015k \134in \134RR\015)", rb"(\015<latex>\015k \134in \134RR\015<content>\015)"])
    data = re.sub(rb"\(\\015<latex>.*?<content>\\015\)", lambda _: broken, data, count=1)
    set_page_content(doc, PAGE, data)


def dangling_reference(doc: Document, rng: random.Random) -> None:
    del doc.objects[rng.choice([Ref(2079), Ref(3), Ref(118)])]


def non_filespec_in_af(doc: Document, rng: random.Random) -> None:
    junk = doc.add(PdfDict([("Type", Name("Metadata")), ("Note", PdfString(b"not a file"))]))
    holder = doc.objects[Ref(112)] if rng.random() < 0.5 else doc.catalog
    holder["AF"] = list(holder.get("AF") or []) + [junk]
    doc.objects[Ref(1859)].append(junk)


def _semantic(fn: Callable[[Document, random.Random], None]) -> Callable[[bytes, random.Random], bytes]:
    return lambda data, rng: _edit(data, fn, rng)


MUTATIONS = [
    Mutation("wrong /Length", "STREAM_LENGTH", wrong_length),
    Mutation("unsorted name tree", "NAME_TREE_UNSORTED", _semantic(unsorted_name_tree)),
    Mutation("bad checksum", "CHECKSUM_MISMATCH", _semantic(bad_checksum)),
    Mutation("dangling MCID", "DANGLING_MCID", _semantic(dangling_mcid)),
    Mutation("duplicate MCID", "DUPLICATE_MCID", _semantic(duplicate_mcid)),
    Mutation("unbalanced EMC", "UNBALANCED_MARKED_CONTENT", _semantic(unbalanced_emc)),
    Mutation("Filespec missing /Type", "FILESPEC_TYPE", _semantic(filespec_missing_type)),
    Mutation("/AF ref outside MarkInfo registry", "AF_UNREGISTERED", _semantic(af_outside_registry)),
    Mutation("malformed delimiter payload", "ACCESS_TAG_DELIMITERS", _semantic(malformed_delimiters)),
    Mutation("dangling indirect ref", "DANGLING_REF", _semantic(dangling_reference)),
    Mutation("bad xref offset", "XREF_OFFSET", bad_xref_offset),
    Mutation("non-Filespec in /AF", "AF_NOT_FILESPEC", _semantic(non_filespec_in_af)),
]


def mutate(mutation: Mutation, seed: int, base: bytes | None = None) -> bytes:
    return mutation.apply(base if base is not None else samples.figure5(), random.Random(seed))
