"""Name trees and number trees."""

from __future__ import annotations

from typing import Any

from .cos import Document, PdfDict, PdfString, Ref, resolve

__all__ = ["read_name_tree", "read_number_tree", "build_name_tree", "FLAT_LIMIT"]

FLAT_LIMIT = 1024


def _walk(document: Document, node: Any, key: str, out: list, seen: set[int]) -> None:
    node = resolve(document, node)
    if not isinstance(node, PdfDict) or id(node) in seen:
        return
    seen.add(id(node))
    pairs = resolve(document, node.get(key))
    if isinstance(pairs, list):
        for i in range(0, len(pairs) - 1, 2):
            out.append((pairs[i], pairs[i + 1]))
    for kid in resolve(document, node.get("Kids")) or []:
        _walk(document, kid, key, out, seen)


def read_name_tree(document: Document, node: Any) -> list[tuple[Any, Any]]:
    """(key, value) pairs in stored order; keys are normally :class:`PdfString`."""
    out: list[tuple[Any, Any]] = []
    _walk(document, node, "Names", out, set())
    return out


def read_number_tree(document: Document, node: Any) -> list[tuple[Any, Any]]:
    out: list[tuple[Any, Any]] = []
    _walk(document, node, "Nums", out, set())
    return out


def build_name_tree(document: Document, pairs: list[tuple[bytes, Any]], root: Ref | None = None) -> Ref:
    """Write a sorted name tree, reusing ``root`` as the root node object when given.

    Up to :data:`FLAT_LIMIT` entries are stored as one flat /Names array; larger
    trees get one level of /Kids leaves with /Limits.
    """
    pairs = sorted(pairs, key=lambda p: p[0])
    if len(pairs) <= FLAT_LIMIT:
        flat: list[Any] = []
        for name, value in pairs:
            flat += [PdfString(name), value]
        node = PdfDict([("Names", flat)])
    else:
        kids = []
        for i in range(0, len(pairs), FLAT_LIMIT):
            chunk = pairs[i : i + FLAT_LIMIT]
            flat = []
            for name, value in chunk:
                flat += [PdfString(name), value]
            leaf = PdfDict([("Limits", [PdfString(chunk[0][0]), PdfString(chunk[-1][0])]), ("Names", flat)])
            kids.append(document.add(leaf))
        node = PdfDict([("Kids", kids)])
    if root is None:
        return document.add(node)
    document.objects[root] = node
    return root
