"""Canonical domain types: text ranges, code elements, refactoring-type
schemas, annotations, and the refactoring-type registry.

Positions are 1-based. Column ends are exclusive, so a range covers the
half-open interval [(start_line, start_col), (end_line, end_col)) in
position order.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field, replace
from enum import Enum
from typing import Iterable, Optional

from .errors import (
    BuiltinOverwrite,
    DuplicateName,
    InvalidSchema,
    UnknownType,
)


class RevisionSide(Enum):
    BEFORE = "before"
    AFTER = "after"

    @classmethod
    def parse(cls, value: str) -> "RevisionSide":
        try:
            return cls(value.lower())
        except ValueError:
            raise InvalidSchema(f"unknown revision side: {value!r}")


class ElementType(Enum):
    CLASS_DECLARATION = "ClassDeclaration"
    METHOD_DECLARATION = "MethodDeclaration"
    FIELD_DECLARATION = "FieldDeclaration"
    VARIABLE_DECLARATION = "VariableDeclaration"
    PARAMETER_DECLARATION = "ParameterDeclaration"
    METHOD_INVOCATION = "MethodInvocation"
    IDENTIFIER = "Identifier"
    CODE_FRAGMENT = "CodeFragment"

    @classmethod
    def parse(cls, value: str) -> "ElementType":
        try:
            return cls(value)
        except ValueError:
            raise InvalidSchema(f"unknown element type: {value!r}")

    @property
    def concrete(self) -> bool:
        """True for types that name a single AST node category."""
        return self is not ElementType.CODE_FRAGMENT


class AnnotationStatus(Enum):
    DRAFT = "Draft"
    VERIFIED = "Verified"
    REJECTED = "Rejected"

    @classmethod
    def parse(cls, value: str) -> "AnnotationStatus":
        try:
            return cls(value)
        except ValueError:
            raise InvalidSchema(f"unknown status: {value!r}")


class EventKind(Enum):
    SET_PARAMETER = "SetParameter"
    CLEAR_PARAMETER = "ClearParameter"
    AUTOFILL = "Autofill"
    STATUS_CHANGE = "StatusChange"


def _check_path(path: str) -> None:
    if not path:
        raise ValueError("path must be non-empty")
    if "\\" in path:
        raise ValueError("path must use '/' separators")
    if ".." in path.split("/"):
        raise ValueError("path must not contain '..' segments")


@dataclass(frozen=True, order=False)
class TextRange:
    """A contiguous span in one file, 1-based, column-end exclusive."""

    path: str
    start_line: int
    start_col: int
    end_line: int
    end_col: int

    def __post_init__(self):
        _check_path(self.path)
        if self.start < (1, 1):
            raise ValueError("positions are 1-based")
        if not self.start < self.end:
            raise ValueError(
                f"range start {self.start} must precede end {self.end}"
            )

    @property
    def start(self) -> tuple[int, int]:
        return (self.start_line, self.start_col)

    @property
    def end(self) -> tuple[int, int]:
        return (self.end_line, self.end_col)

    def contains_point(self, line: int, col: int) -> bool:
        return self.start <= (line, col) < self.end

    def contains(self, other: "TextRange") -> bool:
        return (
            self.path == other.path
            and self.start <= other.start
            and other.end <= self.end
        )

    def strictly_contains(self, other: "TextRange") -> bool:
        return self.contains(other) and (
            self.start != other.start or self.end != other.end
        )

    def sort_key(self) -> tuple:
        return (self.path, self.start, self.end)

    def to_json(self) -> dict:
        return {
            "path": self.path,
            "startLine": self.start_line,
            "startColumn": self.start_col,
            "endLine": self.end_line,
            "endColumn": self.end_col,
        }

    @classmethod
    def from_json(cls, data: dict) -> "TextRange":
        return cls(
            path=data["path"],
            start_line=data["startLine"],
            start_col=data["startColumn"],
            end_line=data["endLine"],
            end_col=data["endColumn"],
        )


@dataclass(frozen=True)
class CodeElement:
    """An AST node surfaced for selection: type, range, and metadata."""

    element_type: ElementType
    range: TextRange
    side: RevisionSide
    name: Optional[str] = None
    enclosing_method: Optional[TextRange] = None

    def __post_init__(self):
        if self.enclosing_method is not None:
            if not self.enclosing_method.contains(self.range):
                raise ValueError("enclosing_method must contain range")

    def to_json(self) -> dict:
        out = {
            "elementType": self.element_type.value,
            "range": self.range.to_json(),
            "side": self.side.value,
        }
        if self.name is not None:
            out["name"] = self.name
        if self.enclosing_method is not None:
            out["enclosingMethod"] = self.enclosing_method.to_json()
        return out


class AutofillKind(Enum):
    REFERENCE = "reference"
    ANCESTOR = "ancestor"


@dataclass(frozen=True)
class AutofillRule:
    kind: AutofillKind
    follows: str
    ancestor_type: Optional[ElementType] = None

    def to_json(self) -> dict:
        out = {"kind": self.kind.value, "follows": self.follows}
        if self.ancestor_type is not None:
            out["ancestorType"] = self.ancestor_type.value
        return out

    @classmethod
    def from_json(cls, data: dict) -> "AutofillRule":
        allowed = {"kind", "follows", "ancestorType"}
        unknown = set(data) - allowed
        if unknown:
            raise InvalidSchema(f"unknown autofill keys: {sorted(unknown)}")
        try:
            kind = AutofillKind(data["kind"])
        except (KeyError, ValueError):
            raise InvalidSchema(f"bad autofill kind in {data!r}")
        if "follows" not in data:
            raise InvalidSchema("autofill rule missing 'follows'")
        ancestor_type = None
        if kind is AutofillKind.ANCESTOR:
            if "ancestorType" not in data:
                raise InvalidSchema("ancestor rule missing 'ancestorType'")
            ancestor_type = ElementType.parse(data["ancestorType"])
        elif "ancestorType" in data:
            raise InvalidSchema("reference rule must not set 'ancestorType'")
        return cls(kind=kind, follows=data["follows"], ancestor_type=ancestor_type)


@dataclass(frozen=True)
class ParameterSchema:
    name: str
    side: RevisionSide
    element_type: ElementType
    multiple: bool = False
    required: bool = True
    autofill: Optional[AutofillRule] = None

    def to_json(self) -> dict:
        out = {
            "type": self.element_type.value,
            "multiple": self.multiple,
            "required": self.required,
        }
        if self.autofill is not None:
            out["autofill"] = self.autofill.to_json()
        return out


@dataclass(frozen=True)
class RefactoringTypeDefinition:
    """Named schema: per-side parameter slots with autofill rules."""

    name: str
    before: tuple[ParameterSchema, ...]
    after: tuple[ParameterSchema, ...]
    builtin: bool = False

    def __post_init__(self):
        object.__setattr__(self, "before", tuple(self.before))
        object.__setattr__(self, "after", tuple(self.after))

    def parameters(self, side: RevisionSide) -> tuple[ParameterSchema, ...]:
        return self.before if side is RevisionSide.BEFORE else self.after

    def all_parameters(self) -> Iterable[ParameterSchema]:
        yield from self.before
        yield from self.after

    def find(self, side: RevisionSide, name: str) -> Optional[ParameterSchema]:
        for p in self.parameters(side):
            if p.name == name:
                return p
        return None

    def validate(self) -> None:
        """Raise InvalidSchema on any structural problem."""
        if not self.name:
            raise InvalidSchema("refactoring type needs a name")
        if not self.before and not self.after:
            raise InvalidSchema(f"{self.name}: at least one parameter required")
        for side, params in ((RevisionSide.BEFORE, self.before),
                             (RevisionSide.AFTER, self.after)):
            seen = set()
            for p in params:
                if p.side is not side:
                    raise InvalidSchema(
                        f"{self.name}: parameter {p.name!r} on the wrong side"
                    )
                if p.name in seen:
                    raise InvalidSchema(
                        f"{self.name}: duplicate parameter {p.name!r} on {side.value}"
                    )
                seen.add(p.name)
        for p in self.all_parameters():
            rule = p.autofill
            if rule is None:
                continue
            source = self.find(p.side, rule.follows) or self.find(
                RevisionSide.AFTER if p.side is RevisionSide.BEFORE
                else RevisionSide.BEFORE,
                rule.follows,
            )
            if source is None:
                raise InvalidSchema(
                    f"{self.name}: autofill of {p.name!r} follows unknown "
                    f"parameter {rule.follows!r}"
                )
            if rule.kind is AutofillKind.REFERENCE:
                if not p.multiple or p.element_type is not ElementType.IDENTIFIER:
                    raise InvalidSchema(
                        f"{self.name}: reference autofill target {p.name!r} must "
                        "be a multiple Identifier parameter"
                    )
            else:
                same_side = self.find(p.side, rule.follows)
                if same_side is None:
                    raise InvalidSchema(
                        f"{self.name}: ancestor autofill of {p.name!r} must "
                        "follow a same-side parameter"
                    )

    def to_json(self) -> dict:
        return {
            "name": self.name,
            "before": {p.name: p.to_json() for p in self.before},
            "after": {p.name: p.to_json() for p in self.after},
        }

    @classmethod
    def from_json(cls, data: dict, builtin: bool = False) -> "RefactoringTypeDefinition":
        allowed = {"name", "before", "after"}
        unknown = set(data) - allowed
        if unknown:
            raise InvalidSchema(f"unknown type-definition keys: {sorted(unknown)}")
        if not isinstance(data.get("name"), str):
            raise InvalidSchema("type definition needs a string 'name'")

        def parse_side(side: RevisionSide, key: str) -> tuple[ParameterSchema, ...]:
            raw = data.get(key, {})
            if not isinstance(raw, dict):
                raise InvalidSchema(f"{key!r} must be an object")
            params = []
            for pname, spec in raw.items():
                if not isinstance(spec, dict):
                    raise InvalidSchema(f"parameter {pname!r} must be an object")
                extra = set(spec) - {"type", "multiple", "required", "autofill"}
                if extra:
                    raise InvalidSchema(
                        f"parameter {pname!r}: unknown keys {sorted(extra)}"
                    )
                if "type" not in spec:
                    raise InvalidSchema(f"parameter {pname!r} missing 'type'")
                rule = None
                if spec.get("autofill") is not None:
                    rule = AutofillRule.from_json(spec["autofill"])
                params.append(ParameterSchema(
                    name=pname,
                    side=side,
                    element_type=ElementType.parse(spec["type"]),
                    multiple=bool(spec.get("multiple", False)),
                    required=bool(spec.get("required", True)),
                    autofill=rule,
                ))
            return tuple(params)

        defn = cls(
            name=data["name"],
            before=parse_side(RevisionSide.BEFORE, "before"),
            after=parse_side(RevisionSide.AFTER, "after"),
            builtin=builtin,
        )
        defn.validate()
        return defn


@dataclass(frozen=True)
class CommitRef:
    repository: str
    sha: str

    def __post_init__(self):
        if not self.sha:
            raise ValueError("sha must be non-empty")

    @property
    def commit_id(self) -> str:
        return f"{self.repository}:{self.sha}"

    def to_json(self) -> dict:
        return {"repository": self.repository, "sha": self.sha}

    @classmethod
    def from_json(cls, data: dict) -> "CommitRef":
        return cls(repository=data["repository"], sha=data["sha"])


@dataclass(frozen=True)
class AnnotationEvent:
    timestamp: int  # milliseconds since epoch
    kind: EventKind
    parameter: Optional[tuple[RevisionSide, str]] = None
    payload: Optional[dict] = None

    def to_json(self) -> dict:
        out: dict = {"timestamp": self.timestamp, "kind": self.kind.value}
        if self.parameter is not None:
            out["parameter"] = {
                "side": self.parameter[0].value,
                "name": self.parameter[1],
            }
        if self.payload is not None:
            out["payload"] = self.payload
        return out

    @classmethod
    def from_json(cls, data: dict) -> "AnnotationEvent":
        parameter = None
        if "parameter" in data:
            parameter = (
                RevisionSide.parse(data["parameter"]["side"]),
                data["parameter"]["name"],
            )
        return cls(
            timestamp=data["timestamp"],
            kind=EventKind(data["kind"]),
            parameter=parameter,
            payload=data.get("payload"),
        )


def now_ms() -> int:
    return int(time.time() * 1000)


ParameterKey = tuple[RevisionSide, str]


@dataclass
class Annotation:
    """One refactoring instance on one commit with its event history."""

    id: str
    commit: CommitRef
    type_name: str
    annotator: str
    status: AnnotationStatus = AnnotationStatus.DRAFT
    parameters: dict[ParameterKey, list[TextRange]] = field(default_factory=dict)
    events: list[AnnotationEvent] = field(default_factory=list)
    version: int = 1
    description: Optional[str] = None

    def ranges(self, side: RevisionSide, name: str) -> list[TextRange]:
        return list(self.parameters.get((side, name), []))

    def log(self, kind: EventKind, parameter: Optional[ParameterKey] = None,
            payload: Optional[dict] = None, timestamp: Optional[int] = None) -> None:
        ts = now_ms() if timestamp is None else timestamp
        if self.events and ts < self.events[-1].timestamp:
            ts = self.events[-1].timestamp
        self.events.append(AnnotationEvent(ts, kind, parameter, payload))

    def to_json(self) -> dict:
        params: dict = {"before": {}, "after": {}}
        for (side, name), ranges in self.parameters.items():
            params[side.value][name] = [r.to_json() for r in ranges]
        out = {
            "id": self.id,
            "commit": self.commit.to_json(),
            "type": self.type_name,
            "annotator": self.annotator,
            "status": self.status.value,
            "parameters": params,
            "events": [e.to_json() for e in self.events],
            "version": self.version,
        }
        if self.description is not None:
            out["description"] = self.description
        return out

    @classmethod
    def from_json(cls, data: dict) -> "Annotation":
        parameters: dict[ParameterKey, list[TextRange]] = {}
        for side_name, by_param in data.get("parameters", {}).items():
            side = RevisionSide.parse(side_name)
            for pname, ranges in by_param.items():
                parameters[(side, pname)] = [TextRange.from_json(r) for r in ranges]
        return cls(
            id=data["id"],
            commit=CommitRef.from_json(data["commit"]),
            type_name=data["type"],
            annotator=data["annotator"],
            status=AnnotationStatus.parse(data["status"]),
            parameters=parameters,
            events=[AnnotationEvent.from_json(e) for e in data.get("events", [])],
            version=data.get("version", 1),
            description=data.get("description"),
        )


def _ref_rule(follows: str) -> AutofillRule:
    return AutofillRule(kind=AutofillKind.REFERENCE, follows=follows)


def _predefined_definitions() -> list[RefactoringTypeDefinition]:
    B, A = RevisionSide.BEFORE, RevisionSide.AFTER
    extract_method = RefactoringTypeDefinition(
        name="ExtractMethod",
        before=(
            ParameterSchema("extracted code", B, ElementType.CODE_FRAGMENT),
        ),
        after=(
            ParameterSchema("extracted method", A, ElementType.METHOD_DECLARATION),
            ParameterSchema("invocation", A, ElementType.METHOD_INVOCATION),
        ),
        builtin=True,
    )
    move_field = RefactoringTypeDefinition(
        name="MoveField",
        before=(
            ParameterSchema("moved field", B, ElementType.FIELD_DECLARATION),
            ParameterSchema("references", B, ElementType.IDENTIFIER,
                            multiple=True, required=False,
                            autofill=_ref_rule("moved field")),
        ),
        after=(
            ParameterSchema("moved field", A, ElementType.FIELD_DECLARATION),
            ParameterSchema("references", A, ElementType.IDENTIFIER,
                            multiple=True, required=False,
                            autofill=_ref_rule("moved field")),
        ),
        builtin=True,
    )
    move_class = RefactoringTypeDefinition(
        name="MoveClass",
        before=(
            ParameterSchema("moved class", B, ElementType.CLASS_DECLARATION),
            ParameterSchema("references", B, ElementType.IDENTIFIER,
                            multiple=True, required=False,
                            autofill=_ref_rule("moved class")),
        ),
        after=(
            ParameterSchema("moved class", A, ElementType.CLASS_DECLARATION),
        ),
        builtin=True,
    )
    rename_variable = RefactoringTypeDefinition(
        name="RenameVariable",
        before=(
            ParameterSchema("old variable", B, ElementType.VARIABLE_DECLARATION),
            ParameterSchema("references", B, ElementType.IDENTIFIER,
                            multiple=True, required=False,
                            autofill=_ref_rule("old variable")),
        ),
        after=(
            ParameterSchema("new variable", A, ElementType.VARIABLE_DECLARATION),
            ParameterSchema("references", A, ElementType.IDENTIFIER,
                            multiple=True, required=False,
                            autofill=_ref_rule("new variable")),
        ),
        builtin=True,
    )
    return [extract_method, move_class, move_field, rename_variable]


class TypeRegistry:
    """Holds predefined and user-defined refactoring types by name."""

    def __init__(self):
        self._types: dict[str, RefactoringTypeDefinition] = {}
        for defn in _predefined_definitions():
            self._types[defn.name] = defn

    def register(self, defn: RefactoringTypeDefinition) -> RefactoringTypeDefinition:
        defn.validate()
        existing = self._types.get(defn.name)
        if existing is not None:
            if existing.builtin:
                raise BuiltinOverwrite(f"{defn.name} is a builtin type")
            raise DuplicateName(f"{defn.name} is already registered")
        if defn.builtin:
            # only the registry itself seeds builtins
            defn = replace(defn, builtin=False)
        self._types[defn.name] = defn
        return defn

    def lookup(self, name: str) -> RefactoringTypeDefinition:
        try:
            return self._types[name]
        except KeyError:
            raise UnknownType(f"no refactoring type named {name!r}")

    def predefined(self) -> list[RefactoringTypeDefinition]:
        return sorted(
            (d for d in self._types.values() if d.builtin),
            key=lambda d: d.name,
        )

    def all(self) -> list[RefactoringTypeDefinition]:
        return sorted(self._types.values(), key=lambda d: d.name)

    def custom(self) -> list[RefactoringTypeDefinition]:
        return sorted(
            (d for d in self._types.values() if not d.builtin),
            key=lambda d: d.name,
        )
