"""Durable JSON-document store plus the dataset in/out contract: hint
import, dataset export, and optimistic-versioned persistence.

Layout: one canonical-JSON file per entity under the data root
(annotations/, types/, commits/). Writes are atomic (write + rename), so
readers always see complete documents.
"""

from __future__ import annotations

import json
import os
import uuid
from dataclasses import dataclass
from pathlib import Path
from typing import Callable, Optional
from urllib.parse import quote, unquote

from . import annotate
from .errors import (
    NotFound,
    RefannError,
    SchemaViolation,
    UnknownType,
    UnresolvableCommit,
    VersionConflict,
)
from .ingest import CommitSnapshot
from .model import (
    Annotation,
    AnnotationStatus,
    CommitRef,
    RefactoringTypeDefinition,
    RevisionSide,
    TextRange,
    TypeRegistry,
)

DEFAULT_DATA_DIR = "./data"


def data_dir_from_env() -> Path:
    return Path(os.environ.get("REFANN_DATA_DIR", DEFAULT_DATA_DIR))


def canonical_json(obj) -> str:
    """UTF-8, sorted keys, 2-space indent, trailing newline."""
    return json.dumps(obj, sort_keys=True, indent=2, ensure_ascii=False) + "\n"


def _atomic_write(path: Path, text: str) -> None:
    tmp = path.with_name(path.name + ".tmp")
    tmp.write_text(text, encoding="utf-8")
    os.replace(tmp, path)


class Store:
    """Filesystem-backed store for annotations, types, and commits."""

    def __init__(self, root: os.PathLike | str):
        self.root = Path(root)
        for sub in ("annotations", "types", "commits"):
            (self.root / sub).mkdir(parents=True, exist_ok=True)

    # --- generic document helpers ---

    def _read(self, sub: str, name: str) -> dict:
        path = self.root / sub / f"{quote(name, safe='')}.json"
        if not path.exists():
            raise NotFound(f"{sub}/{name}")
        return json.loads(path.read_text("utf-8"))

    def _write(self, sub: str, name: str, obj: dict) -> None:
        path = self.root / sub / f"{quote(name, safe='')}.json"
        _atomic_write(path, canonical_json(obj))

    def _names(self, sub: str) -> list[str]:
        return sorted(
            unquote(p.name[:-5])
            for p in (self.root / sub).glob("*.json")
        )

    # --- annotations ---

    def put_annotation(self, ann: Annotation) -> Annotation:
        try:
            stored = self.get_annotation(ann.id)
        except NotFound:
            stored = None
        expected = 1 if stored is None else stored.version + 1
        if ann.version != expected:
            raise VersionConflict(
                f"annotation {ann.id}: version {ann.version}, expected {expected}")
        if ann.status is AnnotationStatus.VERIFIED:
            self._check_verified_shape(ann)
        self._write("annotations", ann.id, ann.to_json())
        return ann

    def _check_verified_shape(self, ann: Annotation) -> None:
        registry = self.registry()
        defn = registry.lookup(ann.type_name)
        for (side, name), ranges in ann.parameters.items():
            schema = defn.find(side, name)
            if schema is None:
                raise SchemaViolation(
                    f"{ann.id}: parameter {side.value}/{name} not in schema")
            if not schema.multiple and len(ranges) > 1:
                raise SchemaViolation(
                    f"{ann.id}: {side.value}/{name} is single-valued")
        for schema in defn.all_parameters():
            if schema.required and not ann.ranges(schema.side, schema.name):
                raise SchemaViolation(
                    f"{ann.id}: required {schema.side.value}/{schema.name} empty")

    def get_annotation(self, ann_id: str) -> Annotation:
        return Annotation.from_json(self._read("annotations", ann_id))

    def list_annotations(self) -> list[Annotation]:
        return [self.get_annotation(name) for name in self._names("annotations")]

    # --- refactoring types ---

    def put_type(self, defn: RefactoringTypeDefinition) -> None:
        self._write("types", defn.name, defn.to_json())

    def get_type(self, name: str) -> RefactoringTypeDefinition:
        return RefactoringTypeDefinition.from_json(self._read("types", name))

    def list_types(self) -> list[RefactoringTypeDefinition]:
        return [self.get_type(name) for name in self._names("types")]

    def registry(self) -> TypeRegistry:
        """Predefined types plus every stored custom definition."""
        registry = TypeRegistry()
        for defn in self.list_types():
            try:
                registry.register(defn)
            except RefannError:
                pass  # builtins may have been exported alongside customs
        return registry

    # --- commits ---

    def put_commit(self, snapshot: CommitSnapshot) -> None:
        self._write("commits", snapshot.commit.commit_id, snapshot.to_json())

    def get_commit(self, commit_id: str) -> CommitSnapshot:
        return CommitSnapshot.from_json(self._read("commits", commit_id))

    def list_commits(self) -> list[CommitSnapshot]:
        return [self.get_commit(name) for name in self._names("commits")]


# --- hint import ---

@dataclass
class ImportResult:
    annotation: Annotation
    warnings: list[str]


CommitResolver = Callable[[CommitRef], Optional[CommitSnapshot]]


def _parse_prefill(prefill: dict) -> dict[tuple[RevisionSide, str], list[TextRange]]:
    if not isinstance(prefill, dict):
        raise SchemaViolation("prefill must be an object")
    out = {}
    for side_name, by_param in prefill.items():
        side = RevisionSide.parse(side_name)
        if not isinstance(by_param, dict):
            raise SchemaViolation(f"prefill[{side_name!r}] must be an object")
        for pname, ranges in by_param.items():
            try:
                out[(side, pname)] = [TextRange.from_json(r) for r in ranges]
            except (TypeError, KeyError, ValueError) as exc:
                raise SchemaViolation(f"bad prefill range for {pname!r}: {exc}")
    return out


def _resolve(store: Store, ref: CommitRef,
             resolver: Optional[CommitResolver]) -> CommitSnapshot:
    try:
        return store.get_commit(ref.commit_id)
    except NotFound:
        pass
    if resolver is not None:
        snapshot = resolver(ref)
        if snapshot is not None:
            store.put_commit(snapshot)
            return snapshot
    raise UnresolvableCommit(ref.commit_id)


def new_annotation(ref: CommitRef, type_name: str, annotator: str,
                    description: Optional[str] = None) -> Annotation:
    return Annotation(
        id=uuid.uuid4().hex,
        commit=ref,
        type_name=type_name,
        annotator=annotator,
        description=description,
    )


def _apply_prefill(store: Store, ann: Annotation, snapshot: CommitSnapshot,
                   prefill: dict, warnings: list[str]) -> Optional[annotate.AnnotationSession]:
    """Validate prefilled ranges against the index; invalid ranges become
    warnings, never silently kept."""
    registry = store.registry()
    try:
        defn = registry.lookup(ann.type_name)
    except UnknownType:
        if prefill:
            warnings.append(f"unknown type {ann.type_name!r}: prefill dropped")
        return None
    session = annotate.open_session(ann, snapshot, defn)
    for (side, pname), ranges in _parse_prefill(prefill).items():
        for rng in ranges:
            try:
                annotate.set_parameter(session, side, pname, rng=rng)
            except RefannError as exc:
                warnings.append(
                    f"{side.value}/{pname}: dropped {rng.to_json()} ({exc.code}: {exc})")
    return session


def import_hints(store: Store, data: dict, annotator: str = "importer",
                 resolver: Optional[CommitResolver] = None) -> list[ImportResult]:
    """Create one Draft annotation per hint record. Also accepts a dataset
    file (the export format), which re-imports with status and annotator
    preserved."""
    if not isinstance(data, dict):
        raise SchemaViolation("hint file must hold a JSON object")
    if "annotations" in data:
        return _import_dataset(store, data, resolver)
    hints = data.get("hints")
    if not isinstance(hints, list):
        raise SchemaViolation("hint file needs a 'hints' array")

    results = []
    for i, record in enumerate(hints):
        if not isinstance(record, dict):
            raise SchemaViolation(f"hint #{i} must be an object")
        unknown = set(record) - {"commit", "type", "description", "prefill"}
        if unknown:
            raise SchemaViolation(f"hint #{i}: unknown keys {sorted(unknown)}")
        if "commit" not in record:
            raise SchemaViolation(f"hint #{i}: missing commit")
        if record.get("type") is None and record.get("description") is None:
            raise SchemaViolation(f"hint #{i}: needs a type or a description")
        try:
            ref = CommitRef.from_json(record["commit"])
        except (KeyError, TypeError, ValueError) as exc:
            raise SchemaViolation(f"hint #{i}: bad commit ({exc})")
        snapshot = _resolve(store, ref, resolver)
        ann = new_annotation(ref, record.get("type") or "", annotator,
                              record.get("description"))
        warnings: list[str] = []
        _apply_prefill(store, ann, snapshot, record.get("prefill") or {}, warnings)
        store.put_annotation(ann)
        results.append(ImportResult(annotation=ann, warnings=warnings))
    return results


def _import_dataset(store: Store, data: dict,
                    resolver: Optional[CommitResolver]) -> list[ImportResult]:
    records = data.get("annotations")
    if not isinstance(records, list):
        raise SchemaViolation("dataset file needs an 'annotations' array")
    results = []
    for i, record in enumerate(records):
        if not isinstance(record, dict):
            raise SchemaViolation(f"annotation #{i} must be an object")
        try:
            ref = CommitRef.from_json(record["commit"])
            type_name = record["type"]
            status = AnnotationStatus.parse(record["status"])
            annotator = record["annotator"]
        except (KeyError, TypeError, ValueError) as exc:
            raise SchemaViolation(f"annotation #{i}: {exc}")
        snapshot = _resolve(store, ref, resolver)
        ann = new_annotation(ref, type_name, annotator)
        warnings: list[str] = []
        session = _apply_prefill(store, ann, snapshot,
                                 record.get("parameters") or {}, warnings)
        if status is not AnnotationStatus.DRAFT and session is not None:
            try:
                annotate.set_status(session, status)
            except RefannError as exc:
                warnings.append(f"status kept Draft ({exc.code}: {exc})")
        store.put_annotation(ann)
        results.append(ImportResult(annotation=ann, warnings=warnings))
    return results


# --- dataset export ---

def export_dataset(store: Store,
                   status: Optional[AnnotationStatus] = None) -> dict:
    """All annotations passing the status filter, as named range sets, in
    deterministic order."""
    registry = store.registry()
    records = []
    for ann in store.list_annotations():
        if status is not None and ann.status is not status:
            continue
        params: dict = {"before": {}, "after": {}}
        try:
            defn = registry.lookup(ann.type_name)
            for schema in defn.all_parameters():
                ranges = sorted(ann.ranges(schema.side, schema.name),
                                key=TextRange.sort_key)
                params[schema.side.value][schema.name] = [
                    r.to_json() for r in ranges]
        except UnknownType:
            for (side, name), ranges in ann.parameters.items():
                params[side.value][name] = [
                    r.to_json() for r in sorted(ranges, key=TextRange.sort_key)]
        records.append({
            "commit": ann.commit.to_json(),
            "type": ann.type_name,
            "status": ann.status.value,
            "annotator": ann.annotator,
            "parameters": params,
        })
    records.sort(key=lambda r: (r["commit"]["sha"], r["type"], r["annotator"],
                                canonical_json(r)))
    return {"annotations": records}


# --- whole-store validation ---

def validate_store(store: Store) -> list[str]:
    """Re-check every stored annotation against its schema and index."""
    registry = store.registry()
    problems = []
    for ann in store.list_annotations():
        prefix = f"annotation {ann.id}"
        if not ann.type_name:
            problems.append(f"{prefix}: no refactoring type assigned")
            continue
        try:
            defn = registry.lookup(ann.type_name)
        except UnknownType:
            problems.append(f"{prefix}: unknown type {ann.type_name!r}")
            continue
        try:
            snapshot = store.get_commit(ann.commit.commit_id)
        except NotFound:
            problems.append(f"{prefix}: commit {ann.commit.commit_id} not stored")
            continue
        session = annotate.open_session(ann, snapshot, defn)
        problems.extend(f"{prefix}: {p}"
                        for p in annotate.validate_annotation(session))
    return problems
