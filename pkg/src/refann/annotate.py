"""The annotation state machine: bind ranges to typed parameters with
validation and snapping, run autofill rules, check completeness, and
change status."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

from .errors import (
    DuplicateElement,
    FragmentSpansMethods,
    IncompleteAnnotation,
    NoAncestorFound,
    NoAutofillRule,
    SourceUnfilled,
    TypeMismatch,
    UnknownParameter,
    WrongSide,
)
from .index import ElementIndex, build_index
from .ingest import CommitSnapshot
from .model import (
    Annotation,
    AnnotationStatus,
    AutofillKind,
    CodeElement,
    ElementType,
    EventKind,
    ParameterSchema,
    RefactoringTypeDefinition,
    RevisionSide,
    TextRange,
)


@dataclass
class AnnotationSession:
    """One annotation opened against its commit: the mutable annotation
    plus immutable snapshot, indexes, and type schema."""

    annotation: Annotation
    snapshot: CommitSnapshot
    index_before: ElementIndex
    index_after: ElementIndex
    type_def: RefactoringTypeDefinition

    def index(self, side: RevisionSide) -> ElementIndex:
        return self.index_before if side is RevisionSide.BEFORE else self.index_after

    def content(self, side: RevisionSide, path: str) -> Optional[str]:
        before = side is RevisionSide.BEFORE
        for change in self.snapshot.files:
            if change.path(before) == path:
                return change.content_before if before else change.content_after
        return None


def open_session(annotation: Annotation, snapshot: CommitSnapshot,
                 type_def: RefactoringTypeDefinition) -> AnnotationSession:
    if annotation.type_name != type_def.name:
        raise ValueError("annotation and type definition disagree")
    return AnnotationSession(
        annotation=annotation,
        snapshot=snapshot,
        index_before=build_index(snapshot, RevisionSide.BEFORE),
        index_after=build_index(snapshot, RevisionSide.AFTER),
        type_def=type_def,
    )


def _schema(session: AnnotationSession, side: RevisionSide,
            param: str) -> ParameterSchema:
    schema = session.type_def.find(side, param)
    if schema is not None:
        return schema
    other = (RevisionSide.AFTER if side is RevisionSide.BEFORE
             else RevisionSide.BEFORE)
    if session.type_def.find(other, param) is not None:
        raise WrongSide(f"parameter {param!r} lives on the {other.value} side")
    raise UnknownParameter(f"{session.type_def.name} has no parameter {param!r}")


def candidates(session: AnnotationSession, side: RevisionSide,
               param: str) -> list[CodeElement]:
    """Selectable elements for a parameter: every indexed element of the
    schema type, or the methods whose bodies admit a CodeFragment."""
    schema = _schema(session, side, param)
    index = session.index(side)
    if schema.element_type is ElementType.CODE_FRAGMENT:
        return index.elements_of_type(ElementType.METHOD_DECLARATION)
    return index.elements_of_type(schema.element_type)


def _offsets_of(text: str) -> list[int]:
    # offset of the first character of each 1-based line
    offsets = [0]
    for i, ch in enumerate(text):
        if ch == "\n":
            offsets.append(i + 1)
    return offsets


def _to_offset(offsets: list[int], line: int, col: int) -> int:
    return offsets[line - 1] + col - 1


def _to_pos(offsets: list[int], offset: int) -> tuple[int, int]:
    lo, hi = 0, len(offsets) - 1
    while lo < hi:
        mid = (lo + hi + 1) // 2
        if offsets[mid] <= offset:
            lo = mid
        else:
            hi = mid - 1
    return lo + 1, offset - offsets[lo] + 1


def snap_fragment(text: str, rng: TextRange) -> Optional[TextRange]:
    """Trim leading/trailing whitespace from the covered text; None when
    nothing but whitespace remains."""
    offsets = _offsets_of(text)
    start = _to_offset(offsets, rng.start_line, rng.start_col)
    end = _to_offset(offsets, rng.end_line, rng.end_col)
    start = max(0, min(start, len(text)))
    end = max(start, min(end, len(text)))
    while start < end and text[start] in " \t\r\n":
        start += 1
    while end > start and text[end - 1] in " \t\r\n":
        end -= 1
    if start >= end:
        return None
    sl, sc = _to_pos(offsets, start)
    el, ec = _to_pos(offsets, end)
    return TextRange(path=rng.path, start_line=sl, start_col=sc,
                     end_line=el, end_col=ec)


def _resolve_selection(session: AnnotationSession, schema: ParameterSchema,
                       side: RevisionSide, rng: Optional[TextRange],
                       point: Optional[tuple[str, int, int]]) -> TextRange:
    index = session.index(side)
    path = rng.path if rng is not None else point[0]
    if session.content(side, path) is None:
        raise WrongSide(f"{path} is not a changed file on the {side.value} side")

    if schema.element_type is ElementType.CODE_FRAGMENT:
        if rng is None:
            raise TypeMismatch("a CodeFragment parameter needs a text range")
        text = session.content(side, path)
        snapped = snap_fragment(text, rng)
        if snapped is None:
            raise TypeMismatch("selected range holds no code")
        if not index.containing_bodies(snapped):
            raise FragmentSpansMethods(
                "fragment must lie inside a single method body")
        return snapped

    if point is not None:
        el = index.element_at(schema.element_type, *point)
        if el is None:
            raise TypeMismatch(
                f"no {schema.element_type.value} at {point[0]}:{point[1]}:{point[2]}")
        return el.range
    el = index.element_with_range(schema.element_type, rng)
    if el is None:
        raise TypeMismatch(
            f"range does not match any {schema.element_type.value}")
    return el.range


def set_parameter(session: AnnotationSession, side: RevisionSide, param: str,
                  rng: Optional[TextRange] = None,
                  point: Optional[tuple[str, int, int]] = None,
                  timestamp: Optional[int] = None) -> Annotation:
    """Bind a selection to a parameter. Points snap to the innermost
    element of the schema type; ranges must match an element exactly;
    CodeFragments are whitespace-trimmed and method-contained."""
    if (rng is None) == (point is None):
        raise ValueError("provide exactly one of rng and point")
    schema = _schema(session, side, param)
    bound = _resolve_selection(session, schema, side, rng, point)

    ann = session.annotation
    key = (side, param)
    current = ann.parameters.get(key, [])
    if schema.multiple:
        if bound in current:
            raise DuplicateElement(f"{param!r} already holds that range")
        ann.parameters[key] = current + [bound]
    else:
        ann.parameters[key] = [bound]
    ann.log(EventKind.SET_PARAMETER, parameter=key,
            payload={"ranges": [bound.to_json()]}, timestamp=timestamp)
    return ann


def clear_parameter(session: AnnotationSession, side: RevisionSide, param: str,
                    rng: Optional[TextRange] = None,
                    timestamp: Optional[int] = None) -> Annotation:
    """Remove one bound range, or all of them."""
    _schema(session, side, param)
    ann = session.annotation
    key = (side, param)
    current = ann.parameters.get(key, [])
    if rng is None:
        ann.parameters[key] = []
    else:
        ann.parameters[key] = [r for r in current if r != rng]
    ann.log(EventKind.CLEAR_PARAMETER, parameter=key,
            payload={"ranges": [] if rng is None else [rng.to_json()]},
            timestamp=timestamp)
    return ann


def _autofill_source(session: AnnotationSession, side: RevisionSide,
                     follows: str) -> tuple[ParameterSchema, TextRange]:
    schema = session.type_def.find(side, follows)
    if schema is None:
        other = (RevisionSide.AFTER if side is RevisionSide.BEFORE
                 else RevisionSide.BEFORE)
        schema = session.type_def.find(other, follows)
    if schema is None:
        raise UnknownParameter(f"autofill source {follows!r} not found")
    ranges = session.annotation.ranges(schema.side, follows)
    if not ranges:
        raise SourceUnfilled(f"fill {follows!r} before autofilling")
    return schema, ranges[0]


def autofill(session: AnnotationSession, side: RevisionSide, param: str,
             timestamp: Optional[int] = None
             ) -> tuple[Annotation, list[CodeElement]]:
    """Derive a parameter from its autofill source. Reference rules do a
    name-equality identifier scan (method-scoped for locals, with the
    declaration's own occurrences excluded); ancestor rules look up the
    enclosing element. Results replace prior values and are advisory."""
    schema = _schema(session, side, param)
    rule = schema.autofill
    if rule is None:
        raise NoAutofillRule(f"{param!r} has no autofill rule")
    source_schema, source_range = _autofill_source(session, side, rule.follows)

    ann = session.annotation
    key = (side, param)
    if rule.kind is AutofillKind.ANCESTOR:
        anc = session.index(side).enclosing(source_range, rule.ancestor_type)
        if anc is None:
            raise NoAncestorFound(
                f"no {rule.ancestor_type.value} encloses {rule.follows!r}")
        derived = [anc]
    else:
        source_index = session.index(source_schema.side)
        decl = source_index.element_with_range(
            source_schema.element_type, source_range)
        if decl is None or not decl.name:
            raise SourceUnfilled(
                f"{rule.follows!r} does not resolve to a named declaration")
        scope = None
        if source_schema.element_type in (ElementType.VARIABLE_DECLARATION,
                                          ElementType.PARAMETER_DECLARATION):
            scope = decl.enclosing_method
        found = session.index(side).identifiers_named(decl.name, scope)
        derived = [el for el in found
                   if not (side is source_schema.side
                           and source_range.contains(el.range))]

    ann.parameters[key] = [el.range for el in derived]
    ann.log(EventKind.AUTOFILL, parameter=key,
            payload={"ranges": [el.range.to_json() for el in derived]},
            timestamp=timestamp)
    return ann, derived


@dataclass(frozen=True)
class CompletenessReport:
    missing: tuple[tuple[RevisionSide, str], ...]
    verifiable: bool

    def to_json(self) -> dict:
        return {
            "missing": [{"side": s.value, "name": n} for s, n in self.missing],
            "verifiable": self.verifiable,
        }


def completeness(session: AnnotationSession) -> CompletenessReport:
    missing = []
    for schema in session.type_def.all_parameters():
        if schema.required and not session.annotation.ranges(
                schema.side, schema.name):
            missing.append((schema.side, schema.name))
    return CompletenessReport(missing=tuple(missing), verifiable=not missing)


def set_status(session: AnnotationSession, status: AnnotationStatus,
               timestamp: Optional[int] = None) -> Annotation:
    if status is AnnotationStatus.VERIFIED:
        report = completeness(session)
        if not report.verifiable:
            names = ", ".join(f"{s.value}/{n}" for s, n in report.missing)
            raise IncompleteAnnotation(f"missing required parameters: {names}")
    ann = session.annotation
    ann.status = status
    ann.log(EventKind.STATUS_CHANGE, payload={"status": status.value},
            timestamp=timestamp)
    return ann


def validate_annotation(session: AnnotationSession) -> list[str]:
    """Re-check every stored range against the index; returns violation
    messages (empty means clean)."""
    problems = []
    for (side, name), ranges in session.annotation.parameters.items():
        schema = session.type_def.find(side, name)
        if schema is None:
            problems.append(f"{side.value}/{name}: not in schema")
            continue
        if not schema.multiple and len(ranges) > 1:
            problems.append(f"{side.value}/{name}: multiple values on a "
                            "single-valued parameter")
        index = session.index(side)
        for rng in ranges:
            if schema.element_type is ElementType.CODE_FRAGMENT:
                if not index.containing_bodies(rng):
                    problems.append(
                        f"{side.value}/{name}: fragment {rng.to_json()} is "
                        "not inside one method body")
            elif index.element_with_range(schema.element_type, rng) is None:
                problems.append(
                    f"{side.value}/{name}: {rng.to_json()} matches no "
                    f"{schema.element_type.value}")
    if session.annotation.status is AnnotationStatus.VERIFIED:
        report = completeness(session)
        if not report.verifiable:
            problems.append("Verified annotation is missing required parameters")
    return problems
