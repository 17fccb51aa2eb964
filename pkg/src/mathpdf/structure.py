"""Structure trees (/StructTreeRoot, /StructElem) and their links to marked content."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any

from .catalog import page_content, page_index, page_refs, register_af
from .content import MarkedContentSpan, build_span_tree, find_span_by_mcid, iter_spans, parse_content
from .cos import Document, Name, PdfDict, PdfString, Ref, resolve
from .errors import (
    CycleDetected,
    DanglingMcid,
    McidAlreadyClaimed,
    MissingStructTreeRoot,
    NotAFilespec,
    OrphanElem,
    StructureError,
)
from .trees import read_number_tree

__all__ = [
    "Mcid",
    "ObjRef",
    "StructElem",
    "StructTree",
    "MathLeaf",
    "parse_structure",
    "effective_page",
    "collect_mcids",
    "resolve_marked_content",
    "attach_af_to_struct",
    "build_formula_subtree",
    "rebuild_parent_tree",
    "find_by_id",
    "is_filespec",
    "MATHML_NS",
]

MATHML_NS = "http://www.w3.org/1998/Math/MathML"


@dataclass(frozen=True)
class Mcid:
    """A marked-content kid: an integer in /K, or an /MCR dictionary carrying its own /Pg."""

    mcid: int
    page: Ref | None = None


@dataclass(frozen=True)
class ObjRef:
    ref: Ref
    page: Ref | None = None


@dataclass
class StructElem:
    ref: Ref
    s: Name
    kids: list = field(default_factory=list)
    parent: Ref | None = None
    page: Ref | None = None
    attributes: Any = None
    id: str | None = None
    title: str | None = None
    associated_files: list[Ref] = field(default_factory=list)

    def elem_kids(self) -> list[Ref]:
        return [k for k in self.kids if isinstance(k, Ref)]


@dataclass
class StructTree:
    root: Ref
    kids: list[Ref]
    elements: dict[Ref, StructElem]
    role_map: PdfDict | None = None
    parent_tree: dict[int, Any] = field(default_factory=dict)
    issues: list[tuple[str, str]] = field(default_factory=list)

    def __getitem__(self, ref: Ref) -> StructElem:
        return self.elements[ref]

    def walk(self, start: Ref | None = None):
        """Depth-first pre-order over elements below ``start`` (or the root)."""
        stack = list(reversed([start] if start else self.kids))
        while stack:
            ref = stack.pop()
            elem = self.elements.get(ref)
            if elem is None:
                continue
            yield elem
            stack.extend(reversed(elem.elem_kids()))


def _text(value: Any) -> str | None:
    return str(value.text) if isinstance(value, PdfString) else None


def _kid_list(value: Any) -> list:
    if value is None:
        return []
    return value if isinstance(value, list) else [value]


def parse_structure(document: Document, *, strict: bool = True) -> StructTree:
    """Materialize the structure tree.

    In strict mode cycles and parent mismatches raise; otherwise they are
    recorded in ``StructTree.issues`` as ``(code, message)`` pairs.
    """
    root_ref = document.catalog.get("StructTreeRoot")
    root = resolve(document, root_ref)
    if not isinstance(root, PdfDict):
        raise MissingStructTreeRoot("catalog has no /StructTreeRoot")
    if not isinstance(root_ref, Ref):
        root_ref = Ref(0x7FFFFFFF)
    issues: list[tuple[str, str]] = []

    def problem(exc: type[StructureError], code: str, message: str) -> None:
        if strict:
            raise exc(message)
        issues.append((code, message))

    elements: dict[Ref, StructElem] = {}
    top = [k for k in _kid_list(resolve(document, root.get("K"))) if isinstance(k, Ref)]

    def visit(ref: Ref, parent: Ref, path: set[Ref]) -> None:
        if ref in path:
            problem(CycleDetected, "STRUCT_CYCLE", f"structure cycle through {ref}")
            return
        if ref in elements:
            problem(CycleDetected, "STRUCT_CYCLE", f"{ref} is reachable more than once")
            return
        node = document.objects.get(ref)
        if not isinstance(node, PdfDict):
            problem(OrphanElem, "STRUCT_DANGLING", f"structure kid {ref} is not a dictionary")
            return
        kids: list = []
        for kid in _kid_list(resolve(document, node.get("K"))):
            if type(kid) is int:
                kids.append(Mcid(kid))
            elif isinstance(kid, Ref):
                target = document.objects.get(kid)
                if isinstance(target, PdfDict) and target.get("Type") == "MCR":
                    kids.append(Mcid(target.get("MCID"), target.get("Pg")))
                elif isinstance(target, PdfDict) and target.get("Type") == "OBJR":
                    kids.append(ObjRef(target.get("Obj"), target.get("Pg")))
                else:
                    kids.append(kid)
            elif isinstance(kid, PdfDict):
                if kid.get("Type") == "OBJR":
                    kids.append(ObjRef(kid.get("Obj"), kid.get("Pg")))
                else:
                    kids.append(Mcid(kid.get("MCID"), kid.get("Pg")))
        declared_parent = node.get("P")
        if declared_parent != parent:
            problem(OrphanElem, "STRUCT_PARENT", f"{ref} has /P {declared_parent}, but is a kid of {parent}")
        af = resolve(document, node.get("AF"))
        elem = StructElem(
            ref=ref,
            s=node.get("S"),
            kids=kids,
            parent=declared_parent if isinstance(declared_parent, Ref) else None,
            page=node.get("Pg") if isinstance(node.get("Pg"), Ref) else None,
            attributes=node.get("A"),
            id=_text(node.get("ID")),
            title=_text(node.get("T")),
            associated_files=[r for r in af if isinstance(r, Ref)] if isinstance(af, list) else [],
        )
        elements[ref] = elem
        path = path | {ref}
        for kid in elem.elem_kids():
            visit(kid, ref, path)

    for ref in top:
        visit(ref, root_ref, set())
    parent_tree = {k: v for k, v in read_number_tree(document, root.get("ParentTree")) if type(k) is int}
    role_map = resolve(document, root.get("RoleMap"))
    return StructTree(
        root=root_ref,
        kids=top,
        elements=elements,
        role_map=role_map if isinstance(role_map, PdfDict) else None,
        parent_tree=parent_tree,
        issues=issues,
    )


def effective_page(tree: StructTree, elem: StructElem) -> Ref | None:
    """/Pg of the element or of its closest ancestor that has one."""
    seen: set[Ref] = set()
    current: StructElem | None = elem
    while current is not None and current.ref not in seen:
        if current.page is not None:
            return current.page
        seen.add(current.ref)
        current = tree.elements.get(current.parent) if current.parent else None
    return None


def collect_mcids(tree: StructTree, elem: StructElem) -> list[tuple[Ref | None, int, StructElem]]:
    """(page, mcid, owning element) for every marked-content kid below ``elem``, in /K order."""
    out: list[tuple[Ref | None, int, StructElem]] = []

    def visit(e: StructElem, seen: set[Ref]) -> None:
        if e.ref in seen:
            return
        seen.add(e.ref)
        for kid in e.kids:
            if isinstance(kid, Mcid):
                out.append((kid.page or effective_page(tree, e), kid.mcid, e))
            elif isinstance(kid, Ref) and kid in tree.elements:
                visit(tree.elements[kid], seen)

    visit(elem, set())
    return out


class PageSpans:
    """Cache of parsed span trees per page."""

    def __init__(self, document: Document) -> None:
        self.document = document
        self._trees: dict[Ref, list] = {}

    def tree(self, page: Ref) -> list:
        if page not in self._trees:
            self._trees[page] = build_span_tree(parse_content(page_content(self.document, page)))
        return self._trees[page]


def resolve_marked_content(
    tree: StructTree, elem: StructElem | Ref, document: Document, cache: PageSpans | None = None
) -> list[MarkedContentSpan]:
    """Spans for every MCID kid below ``elem``, following /K order depth-first."""
    if isinstance(elem, Ref):
        elem = tree.elements[elem]
    cache = cache or PageSpans(document)
    spans: list[MarkedContentSpan] = []
    for page, mcid, owner in collect_mcids(tree, elem):
        if page is None:
            raise DanglingMcid(owner.ref, mcid)
        span = find_span_by_mcid(cache.tree(page), mcid)
        if span is None:
            raise DanglingMcid(owner.ref, mcid)
        spans.append(span)
    return spans


def is_filespec(document: Document, ref: Any) -> bool:
    value = document.objects.get(ref) if isinstance(ref, Ref) else None
    return isinstance(value, PdfDict) and value.get("Type") == "Filespec"


def attach_af_to_struct(document: Document, elem: Ref, refs: list[Ref]) -> Document:
    """Return a copy of ``document`` whose element ``elem`` carries ``/AF refs``.

    An empty list removes the key. The refs are also added to /MarkInfo /AF.
    """
    doc = document.copy()
    node = doc.objects.get(elem)
    if not isinstance(node, PdfDict) or node.get("Type", "StructElem") != "StructElem" or "S" not in node:
        raise StructureError(f"{elem} is not a structure element")
    for ref in refs:
        if not is_filespec(doc, ref):
            raise NotAFilespec(f"{ref} is not a /Filespec dictionary")
    if not refs:
        node.pop("AF", None)
        return doc
    current = node.get("AF")
    if isinstance(current, Ref) and isinstance(doc.objects.get(current), list):
        arr = doc.objects[current]
        arr.extend([r for r in refs if r not in arr])
    else:
        existing = resolve(doc, current)
        existing = list(existing) if isinstance(existing, list) else []
        node["AF"] = existing + [r for r in refs if r not in existing]
    register_af(doc, refs)
    return doc


def find_by_id(tree: StructTree, ident: str) -> StructElem | None:
    for elem in tree.elements.values():
        if elem.id == ident:
            return elem
    return None


@dataclass(frozen=True)
class MathLeaf:
    """A MathML token element (``mi``, ``mo``, ``mn`` …) mapped onto one MCID."""

    tag: str
    mcid: int
    attributes: dict[str, str] | None = None


def _claimed_mcids(tree: StructTree | None, page: Ref) -> set[int]:
    if tree is None:
        return set()
    claimed = set()
    for elem in tree.elements.values():
        for kid in elem.kids:
            if isinstance(kid, Mcid) and (kid.page or effective_page(tree, elem)) == page:
                claimed.add(kid.mcid)
    return claimed


def _next_formula_number(tree: StructTree | None, page_no: int) -> int:
    prefix = f"Math{page_no}."
    best = 0
    if tree is not None:
        for elem in tree.elements.values():
            if elem.id and elem.id.startswith(prefix):
                try:
                    best = max(best, int(elem.id[len(prefix):]))
                except ValueError:
                    pass
    return best + 1


def _attr_dict(owner: str, extra: dict[str, str] | None = None) -> PdfDict:
    attrs = PdfDict([("O", Name(owner))])
    for k, v in (extra or {}).items():
        attrs[k] = PdfString(v.encode("utf-8"))
    return attrs


def build_formula_subtree(
    document: Document,
    page: Ref,
    leaves: list[MathLeaf],
    parent: Ref,
    *,
    access_mcids: tuple[int, int] | None = None,
    display: str = "inline",
    position: int | None = None,
) -> tuple[Document, Ref]:
    """Create Formula → math → mrow → leaves on ``page`` and hang it under ``parent``.

    The Formula gets ``/ID (Math<page>.<k>)`` and a matching ``/T``. With
    ``access_mcids`` the opening and closing access-tag MCIDs become
    ``accesstag`` elements as first and last Formula kids.
    """
    doc = document.copy()
    try:
        tree = parse_structure(doc)
    except MissingStructTreeRoot:
        tree = None
    requested = [leaf.mcid for leaf in leaves] + list(access_mcids or ())
    claimed = _claimed_mcids(tree, page)
    seen: set[int] = set()
    for mcid in requested:
        if mcid in claimed or mcid in seen:
            raise McidAlreadyClaimed(f"MCID {mcid} on {page} is already linked to structure")
        seen.add(mcid)
    parent_node = doc.objects.get(parent)
    if not isinstance(parent_node, PdfDict):
        raise StructureError(f"parent {parent} is not a dictionary")

    page_no = page_index(doc, page)
    k = _next_formula_number(tree, page_no)
    formula_ref = doc.add(PdfDict())
    kids: list[Any] = []
    if access_mcids:
        kids.append(doc.add(_elem("accesstag", [access_mcids[0]], formula_ref, page)))
    if leaves:
        math_ref = doc.add(PdfDict())
        mrow_ref = doc.add(PdfDict())
        leaf_refs = [
            doc.add(_elem(leaf.tag, [leaf.mcid], mrow_ref, page,
                          _attr_dict("XML-1.00", leaf.attributes) if leaf.attributes else None))
            for leaf in leaves
        ]
        doc.objects[mrow_ref] = _elem("mrow", leaf_refs, math_ref)
        doc.objects[math_ref] = _elem(
            "math", [mrow_ref], formula_ref, None, _attr_dict("XML-1.00", {"xmlns": MATHML_NS, "display": display})
        )
        kids.append(math_ref)
    if access_mcids:
        kids.append(doc.add(_elem("accesstag", [access_mcids[1]], formula_ref, page)))
    label = "InlineMath" if display == "inline" else "DisplayMath"
    formula = _elem("Formula", kids, parent)
    formula["ID"] = PdfString(f"Math{page_no}.{k}".encode())
    formula["T"] = PdfString(f"{label} {page_no}.{k}".encode())
    formula["A"] = _attr_dict("XML-1.01")
    doc.objects[formula_ref] = formula

    pk = resolve(doc, parent_node.get("K"))
    pk = [] if pk is None else (list(pk) if isinstance(pk, list) else [pk])
    pk.insert(len(pk) if position is None else position, formula_ref)
    parent_node["K"] = pk
    rebuild_parent_tree(doc)
    return doc, formula_ref


def _elem(s: str, kids: list, parent: Ref, page: Ref | None = None, attrs: PdfDict | None = None) -> PdfDict:
    d = PdfDict([("K", list(kids))])
    if page is not None:
        d["Pg"] = page
    d["P"] = parent
    d["Type"] = Name("StructElem")
    d["S"] = Name(s)
    if attrs is not None:
        d["A"] = attrs
    return d


def rebuild_parent_tree(document: Document) -> None:
    """Regenerate /ParentTree page entries (MCID → owning element) in place."""
    root = resolve(document, document.catalog.get("StructTreeRoot"))
    if not isinstance(root, PdfDict):
        return
    tree = parse_structure(document, strict=False)
    existing = dict(tree.parent_tree)
    by_page: dict[Ref, dict[int, Ref]] = {}
    for elem in tree.elements.values():
        for kid in elem.kids:
            if isinstance(kid, Mcid) and type(kid.mcid) is int:
                page = kid.page or effective_page(tree, elem)
                if page is not None:
                    by_page.setdefault(page, {})[kid.mcid] = elem.ref
    next_key = max([k + 1 for k in existing] + [0])
    for page in page_refs(document):
        mapping = by_page.get(page)
        if not mapping:
            continue
        pdict = document.objects[page]
        key = pdict.get("StructParents")
        if type(key) is not int:
            key = next_key
            next_key += 1
            pdict["StructParents"] = key
        arr: list[Any] = [None] * (max(mapping) + 1)
        for mcid, ref in mapping.items():
            arr[mcid] = ref
        existing[key] = arr
    nums: list[Any] = []
    for key in sorted(existing):
        nums += [key, existing[key]]
    node = PdfDict([("Nums", nums)])
    pt = root.get("ParentTree")
    if isinstance(pt, Ref):
        document.objects[pt] = node
    else:
        root["ParentTree"] = document.add(node)
    root["ParentTreeNextKey"] = max([k + 1 for k in existing] + [next_key])


def span_mcids_on_page(document: Document, page: Ref) -> list[int]:
    """Every MCID in a page's content, in stream order (duplicates kept)."""
    spans = build_span_tree(parse_content(page_content(document, page)))
    return [s.mcid for s in iter_spans(spans) if s.mcid is not None]
