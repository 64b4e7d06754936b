"""Queryable index of typed code elements over one revision side of a
commit snapshot."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

from .errors import CodeFragmentNotEnumerable
from .ingest import CommitSnapshot
from .javaparse import parse_java
from .model import CodeElement, ElementType, RevisionSide, TextRange

PARSERS = {
    ".java": parse_java,
}


@dataclass(frozen=True)
class MethodBody:
    declaration: TextRange
    interior: Optional[TextRange]  # span between the braces, None if empty


@dataclass
class FileIndex:
    path: str
    elements: list[CodeElement] = field(default_factory=list)
    method_bodies: list[MethodBody] = field(default_factory=list)
    identifiers: dict[str, list[CodeElement]] = field(default_factory=dict)
    ok: bool = True
    error: Optional[str] = None


def _smallest(candidates: list[CodeElement]) -> Optional[CodeElement]:
    """The minimal element under range containment. Candidates sharing a
    point (or a contained range) nest, so they form a chain."""
    best = None
    for el in candidates:
        if best is None or best.range.strictly_contains(el.range):
            best = el
    return best


class ElementIndex:
    """Immutable per-side element index; all queries are read-only."""

    def __init__(self, side: RevisionSide, files: dict[str, FileIndex]):
        self.side = side
        self.files = files

    @property
    def unindexed(self) -> list[str]:
        return sorted(p for p, f in self.files.items() if not f.ok)

    def elements_of_type(self, element_type: ElementType,
                         file: Optional[str] = None) -> list[CodeElement]:
        if element_type is ElementType.CODE_FRAGMENT:
            raise CodeFragmentNotEnumerable(
                "CodeFragment is a selection type, not an indexed one")
        out = []
        for path in sorted(self.files):
            if file is not None and path != file:
                continue
            for el in self.files[path].elements:
                if el.element_type is element_type:
                    out.append(el)
        return out

    def element_at(self, element_type: ElementType, path: str,
                   line: int, col: int) -> Optional[CodeElement]:
        if element_type is ElementType.CODE_FRAGMENT:
            raise CodeFragmentNotEnumerable(
                "CodeFragment is a selection type, not an indexed one")
        fi = self.files.get(path)
        if fi is None:
            return None
        hits = [el for el in fi.elements
                if el.element_type is element_type
                and el.range.contains_point(line, col)]
        return _smallest(hits)

    def element_with_range(self, element_type: ElementType,
                           rng: TextRange) -> Optional[CodeElement]:
        fi = self.files.get(rng.path)
        if fi is None:
            return None
        for el in fi.elements:
            if el.element_type is element_type and el.range == rng:
                return el
        return None

    def enclosing(self, rng: TextRange,
                  element_type: ElementType) -> Optional[CodeElement]:
        if element_type is ElementType.CODE_FRAGMENT:
            raise CodeFragmentNotEnumerable(
                "CodeFragment is a selection type, not an indexed one")
        fi = self.files.get(rng.path)
        if fi is None:
            return None
        hits = [el for el in fi.elements
                if el.element_type is element_type
                and el.range.strictly_contains(rng)]
        return _smallest(hits)

    def identifiers_named(self, name: str,
                          scope: Optional[TextRange] = None) -> list[CodeElement]:
        if not name:
            raise ValueError("identifier name must be non-empty")
        out = []
        for path in sorted(self.files):
            if scope is not None and path != scope.path:
                continue
            for el in self.files[path].identifiers.get(name, ()):
                if scope is None or scope.contains(el.range):
                    out.append(el)
        return out

    def method_bodies(self, path: str) -> list[MethodBody]:
        fi = self.files.get(path)
        return list(fi.method_bodies) if fi else []

    def containing_bodies(self, rng: TextRange) -> list[MethodBody]:
        """Method bodies whose interior contains the range."""
        return [mb for mb in self.method_bodies(rng.path)
                if mb.interior is not None and mb.interior.contains(rng)]


def build_index(snapshot: CommitSnapshot, side: RevisionSide) -> ElementIndex:
    """Parse every changed text file on one side into a file index.
    Files that fail to parse are recorded as unindexed, never fatal."""
    before = side is RevisionSide.BEFORE
    files: dict[str, FileIndex] = {}
    for change in snapshot.files:
        path = change.path(before)
        content = change.content_before if before else change.content_after
        if path is None or content is None:
            continue
        if change.binary:
            files[path] = FileIndex(path=path, ok=False, error="binary file")
            continue
        ext = "." + path.rsplit(".", 1)[-1] if "." in path else ""
        parser = PARSERS.get(ext)
        if parser is None:
            files[path] = FileIndex(path=path, ok=False,
                                    error=f"no parser for {ext or 'extensionless file'}")
            continue
        parsed = parser(path, content)
        if not parsed.ok:
            files[path] = FileIndex(path=path, ok=False, error=parsed.error)
            continue
        files[path] = _assemble(path, side, parsed)
    return ElementIndex(side, files)


def _assemble(path: str, side: RevisionSide, parsed) -> FileIndex:
    method_ranges = [decl for decl, _ in parsed.method_bodies]

    def enclosing_method(rng: TextRange) -> Optional[TextRange]:
        best = None
        for m in method_ranges:
            if m.strictly_contains(rng) and (best is None or best.contains(m)):
                best = m
        return best

    elements = []
    identifiers: dict[str, list[CodeElement]] = {}
    for etype, rng, name in parsed.elements:
        el = CodeElement(element_type=etype, range=rng, side=side,
                         name=name, enclosing_method=enclosing_method(rng))
        elements.append(el)
        if etype is ElementType.IDENTIFIER and name:
            identifiers.setdefault(name, []).append(el)
    elements.sort(key=lambda e: (e.range.sort_key(), e.element_type.value))
    bodies = [MethodBody(declaration=d, interior=i)
              for d, i in parsed.method_bodies]
    return FileIndex(path=path, elements=elements, method_bodies=bodies,
                     identifiers=identifiers)
