"""``mathpdf`` command line.

Exit codes: 0 clean, 1 validation findings, 2 parse error, 3 usage,
4 not found, 5 unsupported or refused.
"""

from __future__ import annotations

import argparse
import json
import re
import sys
from dataclasses import dataclass
from pathlib import Path
from typing import Any, Sequence

from . import __version__
from .accesstags import McidRange, inject_access_tags
from .attachments import (
    DEFAULT_MOD_DATE,
    RELATIONSHIPS,
    ContentSpanTarget,
    DocumentTarget,
    PageTarget,
    StructureTarget,
    associate,
    embed_file,
    embedded_files,
    extract_attachment,
    list_attachments,
)
from .catalog import page_content, page_refs
from .cos import Document, PdfDict, Ref, Stream, parse_document, serialize_document, serialize_value
from .errors import (
    AccessTagError,
    AttachmentError,
    DuplicateName,
    IntegrityMismatch,
    MissingStructTreeRoot,
    NameNotFound,
    PdfError,
    PdfSyntaxError,
    TargetNotFound,
    UnknownTarget,
    UnsupportedFeature,
    UnsupportedMethod,
)
from .extraction import accessible_text, association_report, copy_text, harvest_latex
from .structure import find_by_id, parse_structure
from .textcodec import decode_text
from .validate import SCHEMA, validate

EXIT_OK, EXIT_FINDINGS, EXIT_PARSE, EXIT_USAGE, EXIT_NOT_FOUND, EXIT_REFUSED = range(6)


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message: str) -> None:  # argparse's default exit status 2 is taken
        self.print_usage(sys.stderr)
        raise UsageError(message)


@dataclass(frozen=True)
class Selector:
    kind: str  # doc, page, struct, res, mcid
    value: str = ""


_SELECTOR = re.compile(r"^(doc)$|^(page|struct|res|mcid):(.+)$")


def parse_selector(text: str) -> Selector:
    """``doc`` | ``page:<n>`` | ``struct:<ID>`` | ``res:<name>`` | ``mcid:<a>-<b>``."""
    m = _SELECTOR.match(text)
    if not m:
        raise UsageError(f"bad target selector {text!r}")
    if m.group(1):
        return Selector("doc")
    kind, value = m.group(2), m.group(3)
    if kind == "page" and not value.isdigit():
        raise UsageError(f"page selector needs a number: {text!r}")
    if kind == "mcid" and not re.fullmatch(r"\d+(-\d+)?", value):
        raise UsageError(f"mcid selector needs <a>-<b>: {text!r}")
    return Selector(kind, value)


def _page(document: Document, index: int) -> Ref:
    pages = page_refs(document)
    if not 0 <= index < len(pages):
        raise TargetNotFound(f"no page {index} (document has {len(pages)})")
    return pages[index]


def _struct(document: Document, ident: str) -> Ref:
    try:
        tree = parse_structure(document, strict=False)
    except MissingStructTreeRoot:
        raise TargetNotFound("document has no structure tree") from None
    elem = find_by_id(tree, ident)
    if elem is None:
        raise TargetNotFound(f"no structure element with /ID {ident!r}")
    return elem.ref


def resolve_selector(document: Document, sel: Selector, page: int) -> Any:
    if sel.kind == "doc":
        return DocumentTarget()
    if sel.kind == "page":
        return PageTarget(_page(document, int(sel.value)))
    if sel.kind == "struct":
        return StructureTarget(_struct(document, sel.value))
    if sel.kind == "res":
        return ContentSpanTarget(_page(document, page), sel.value)
    first, _, last = sel.value.partition("-")
    return McidRange(_page(document, page), int(first), int(last or first))


# -- io ------------------------------------------------------------------------


def _load(path: str) -> Document:
    return parse_document(Path(path).read_bytes())


def _check_output(args: argparse.Namespace) -> None:
    src, dst = Path(args.input), Path(args.output)
    if dst.exists() and src.exists() and dst.resolve() == src.resolve():
        raise UsageError("refusing to overwrite the input file; choose another output path")


def _write(args: argparse.Namespace, document: Document) -> None:
    _check_output(args)
    Path(args.output).write_bytes(serialize_document(document))


def _out(text: str) -> None:
    # payloads use CR line ends; print with the platform convention
    sys.stdout.write(re.sub(r"\r\n|\r|\n", "\n", text))
    if not text.endswith(("\n", "\r")):
        sys.stdout.write("\n")


def _json(data: Any) -> None:
    sys.stdout.write(json.dumps(data, indent=2, ensure_ascii=False, sort_keys=False) + "\n")


# -- subcommands -----------------------------------------------------------------


def cmd_inspect(args: argparse.Namespace) -> int:
    doc = _load(args.input)
    if args.structure:
        try:
            tree = parse_structure(doc, strict=False)
        except MissingStructTreeRoot:
            _out("(no structure tree)")
            return EXIT_OK
        lines: list[str] = []

        def show(ref: Ref, depth: int) -> None:
            elem = tree.elements[ref]
            extra = [f"{ref.number} 0 R"]
            if elem.id:
                extra.append(f"ID={elem.id}")
            mcids = [k.mcid for k in elem.kids if hasattr(k, "mcid")]
            if mcids:
                extra.append("MCID " + ",".join(str(m) for m in mcids))
            if elem.associated_files:
                extra.append("AF " + ",".join(str(r.number) for r in elem.associated_files))
            lines.append("  " * depth + f"{elem.s} ({'; '.join(extra)})")
            for kid in elem.elem_kids():
                if kid in tree.elements:
                    show(kid, depth + 1)

        for ref in tree.kids:
            if ref in tree.elements:
                show(ref, 0)
        _out("\n".join(lines))
    elif args.content is not None:
        data = page_content(doc, _page(doc, args.content))
        _out(data.decode("latin-1"))
    else:
        lines = []
        for ref in sorted(doc.objects):
            value = doc.objects[ref]
            if isinstance(value, Stream):
                kind = f"stream {value.dict.get('Type') or ''} ({len(value.data)} bytes)".replace("  ", " ")
            elif isinstance(value, PdfDict):
                kind = f"dict {value.get('Type') or ''}".rstrip()
            else:
                kind = type(value).__name__
                if isinstance(value, list):
                    kind = f"array [{len(value)}]"
            lines.append(f"{ref.number} 0 obj  {kind}")
        lines.append(f"trailer {serialize_value(doc.trailer).decode('latin-1')}")
        _out("\n".join(lines))
    return EXIT_OK


def cmd_attach(args: argparse.Namespace) -> int:
    if args.relationship not in RELATIONSHIPS:
        raise UsageError(f"--relationship must be one of {', '.join(RELATIONSHIPS)}")
    sel = parse_selector(args.target) if args.target else None
    _check_output(args)
    doc = _load(args.input)
    payload = Path(args.file).read_bytes()
    name = args.name or Path(args.file).name
    doc, spec = embed_file(doc, payload, name, args.desc or name, args.relationship, args.mime,
                           mod_date=args.mod_date)
    if sel is not None:
        doc = associate(doc, [spec], resolve_selector(doc, sel, args.page))
    _write(args, doc)
    return EXIT_OK


def cmd_list(args: argparse.Namespace) -> int:
    report = list_attachments(_load(args.input))
    if args.json:
        _json({"schema": SCHEMA.replace("validate", "list"), "attachments": [e.as_json() for e in report],
               "findings": [{"code": c, "message": m} for c, m in report.findings]})
    else:
        for e in report:
            targets = ", ".join(str(t) for t in e.targets) or "none"
            _out(f"{e.name}\t{e.relationship}\t{e.mime}\t{e.size} bytes\ttargets: {targets}")
        for code, message in report.findings:
            print(f"{code}: {message}", file=sys.stderr)
    return EXIT_FINDINGS if report.findings else EXIT_OK


def cmd_extract(args: argparse.Namespace) -> int:
    doc = _load(args.input)
    if args.name:
        names = [args.name]
    else:
        names = [str(decode_text(k)) for k, _ in embedded_files(doc)]
    outdir = Path(args.outdir)
    outdir.mkdir(parents=True, exist_ok=True)
    for name in names:
        info = extract_attachment(doc, name, verify=not args.no_verify)
        target = outdir / Path(name).name
        target.write_bytes(info.payload)
        print(f"{target}\t{len(info.payload)} bytes", file=sys.stderr)
    return EXIT_OK


def cmd_inject(args: argparse.Namespace) -> int:
    if (args.latex is None) == (args.latex_file is None):
        raise UsageError("give exactly one of --latex or --latex-file")
    latex = args.latex if args.latex is not None else Path(args.latex_file).read_text(encoding="utf-8").rstrip("\r\n")
    sel = parse_selector(args.target)
    if sel.kind in ("doc", "page"):
        raise UsageError("inject needs a struct:, res: or mcid: target")
    _check_output(args)
    doc = _load(args.input)
    doc = inject_access_tags(doc, resolve_selector(doc, sel, args.page), latex, tag=args.tag, font=args.font)
    _write(args, doc)
    return EXIT_OK


def _scope(doc: Document, text: str | None) -> Any:
    if text is None:
        return None
    sel = parse_selector(text)
    if sel.kind == "doc":
        return None
    if sel.kind == "page":
        _page(doc, int(sel.value))
        return int(sel.value)
    if sel.kind == "struct":
        return StructureTarget(_struct(doc, sel.value))
    raise UsageError("--scope takes doc, page:<n> or struct:<ID>")


def cmd_copy(args: argparse.Namespace) -> int:
    doc = _load(args.input)
    scope = _scope(doc, args.scope)
    _out((accessible_text if args.alt else copy_text)(doc, scope))
    return EXIT_OK


def cmd_harvest(args: argparse.Namespace) -> int:
    found = harvest_latex(_load(args.input))
    if args.json:
        _json([{"source": h.source, "page": h.page, "location": h.location} for h in found])
    else:
        for h in found:
            _out(h.source)
    return EXIT_OK


def cmd_report(args: argparse.Namespace) -> int:
    entries = association_report(_load(args.input))
    if args.json:
        _json([e.as_json() for e in entries])
    else:
        for e in entries:
            line = f"{e.name or '?'} ({e.filespec.number} 0 R) -> {e.target or 'none'}"
            if e.mcids:
                line += f"  MCID {','.join(map(str, e.mcids))}"
            if e.text is not None:
                line += f"  text {e.text!r}"
            _out(line)
    return EXIT_OK


def cmd_validate(args: argparse.Namespace) -> int:
    report = validate(Path(args.input).read_bytes())
    if args.json:
        _json(report.as_json())
    else:
        for f in report.findings:
            _out(f"{f.code}\t{f.location}\t{f.message}")
        if report.clean:
            _out("clean")
    return EXIT_OK if report.clean else EXIT_FINDINGS


# -- wiring ----------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="mathpdf", description="Inspect, attach, tag and validate uncompressed PDF files.")
    parser.add_argument("--version", action="version", version=f"mathpdf {__version__}")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("inspect", help="dump objects, the structure tree or a page's content")
    p.add_argument("input")
    mode = p.add_mutually_exclusive_group()
    mode.add_argument("--structure", action="store_true")
    mode.add_argument("--objects", action="store_true")
    mode.add_argument("--content", type=int, metavar="PAGE")
    p.set_defaults(func=cmd_inspect)

    p = sub.add_parser("attach", help="embed a file and associate it with a target")
    p.add_argument("input")
    p.add_argument("output")
    p.add_argument("--file", required=True)
    p.add_argument("--name")
    p.add_argument("--desc")
    p.add_argument("--relationship", default="Unspecified")
    p.add_argument("--mime", default="application/octet-stream")
    p.add_argument("--target", help="doc | page:<n> | struct:<ID> | res:<name>")
    p.add_argument("--page", type=int, default=0, help="page index for res: targets")
    p.add_argument("--mod-date", default=DEFAULT_MOD_DATE)
    p.set_defaults(func=cmd_attach)

    p = sub.add_parser("list", help="list embedded files and their associations")
    p.add_argument("input")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_list)

    p = sub.add_parser("extract", help="write embedded files to disk")
    p.add_argument("input")
    p.add_argument("--name")
    p.add_argument("--outdir", default=".")
    p.add_argument("--no-verify", action="store_true", help="skip /Size and /CheckSum checks")
    p.set_defaults(func=cmd_extract)

    p = sub.add_parser("inject", help="add fake-space access tags carrying LaTeX source")
    p.add_argument("input")
    p.add_argument("output")
    p.add_argument("--latex")
    p.add_argument("--latex-file")
    p.add_argument("--target", required=True, help="struct:<ID> | res:<name> | mcid:<a>-<b>")
    p.add_argument("--page", type=int, default=0)
    p.add_argument("--tag", default="AccessTag", choices=["AccessTag", "Span"])
    p.add_argument("--font", help="font resource for the fake spaces")
    p.set_defaults(func=cmd_inject)

    p = sub.add_parser("copy", help="emulate Select All / Copy")
    p.add_argument("input")
    p.add_argument("--scope", help="doc | page:<n> | struct:<ID>")
    p.add_argument("--alt", action="store_true", help="accessible-text view (/Alt first)")
    p.set_defaults(func=cmd_copy)

    p = sub.add_parser("harvest", help="print every <latex> block")
    p.add_argument("input")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_harvest)

    p = sub.add_parser("report", help="trace each associated file to its content")
    p.add_argument("input")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_report)

    p = sub.add_parser("validate", help="check cross-object consistency")
    p.add_argument("input")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_validate)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    if hasattr(sys.stdout, "reconfigure"):
        sys.stdout.reconfigure(encoding="utf-8")
    try:
        args = build_parser().parse_args(argv)
        return args.func(args)
    except UsageError as exc:
        print(f"mathpdf: usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (FileNotFoundError, IsADirectoryError, PermissionError) as exc:
        print(f"mathpdf: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except UnsupportedFeature as exc:
        print(f"mathpdf: unsupported: {exc}", file=sys.stderr)
        return EXIT_REFUSED
    except PdfSyntaxError as exc:
        print(f"mathpdf: parse error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except (NameNotFound, TargetNotFound, UnknownTarget) as exc:
        print(f"mathpdf: not found: {exc}", file=sys.stderr)
        return EXIT_NOT_FOUND
    except IntegrityMismatch as exc:
        print(f"mathpdf: integrity: {exc}", file=sys.stderr)
        return EXIT_FINDINGS
    except (AccessTagError, UnsupportedMethod, DuplicateName, AttachmentError) as exc:
        print(f"mathpdf: refused: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_REFUSED
    except ValueError as exc:
        print(f"mathpdf: usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except PdfError as exc:
        print(f"mathpdf: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_REFUSED

