"""HTTP interface over the annotation workflow: commit browsing, typed
element candidates, parameter binding, autofill, metrics, and export."""

from __future__ import annotations

import json
import os
from typing import Optional

from fastapi import FastAPI, Header, Query, Request
from fastapi.middleware.cors import CORSMiddleware
from fastapi.responses import JSONResponse

from . import annotate, diffs, metrics, storage
from .errors import (
    DuplicateElement,
    FragmentSpansMethods,
    NotFound,
    RefannError,
    SchemaViolation,
    TypeMismatch,
    UnknownCommit,
    UnknownParameter,
    UnknownType,
    VersionConflict,
)
from .index import ElementIndex, build_index
from .ingest import CommitSnapshot
from .model import (
    Annotation,
    AnnotationStatus,
    CommitRef,
    ElementType,
    RefactoringTypeDefinition,
    RevisionSide,
    TextRange,
)

_STATUS_BY_ERROR = (
    ((VersionConflict,), 409),
    ((TypeMismatch, FragmentSpansMethods, DuplicateElement), 422),
    ((NotFound, UnknownType, UnknownCommit, UnknownParameter), 404),
)


def _http_status(exc: RefannError) -> int:
    for classes, status in _STATUS_BY_ERROR:
        if isinstance(exc, classes):
            return status
    return 400


class _IndexCache:
    """Per-commit element indexes, built once and shared read-only."""

    def __init__(self, store: storage.Store):
        self.store = store
        self._cache: dict[str, tuple[CommitSnapshot, ElementIndex, ElementIndex]] = {}

    def get(self, commit_id: str) -> tuple[CommitSnapshot, ElementIndex, ElementIndex]:
        if commit_id not in self._cache:
            snapshot = self.store.get_commit(commit_id)
            self._cache[commit_id] = (
                snapshot,
                build_index(snapshot, RevisionSide.BEFORE),
                build_index(snapshot, RevisionSide.AFTER),
            )
        return self._cache[commit_id]


def create_app(data_dir: os.PathLike | str | None = None) -> FastAPI:
    store = storage.Store(data_dir or storage.data_dir_from_env())
    cache = _IndexCache(store)
    app = FastAPI(title="refann")

    origin = os.environ.get("REFANN_CORS_ORIGIN", "*")
    app.add_middleware(
        CORSMiddleware,
        allow_origins=[origin],
        allow_methods=["*"],
        allow_headers=["*"],
    )

    @app.exception_handler(RefannError)
    async def refann_error(_: Request, exc: RefannError):
        return JSONResponse(
            status_code=_http_status(exc),
            content={"error": exc.code, "message": str(exc)},
        )

    def session_for(ann: Annotation) -> annotate.AnnotationSession:
        defn = store.registry().lookup(ann.type_name)
        snapshot, idx_before, idx_after = cache.get(ann.commit.commit_id)
        return annotate.AnnotationSession(
            annotation=ann, snapshot=snapshot,
            index_before=idx_before, index_after=idx_after, type_def=defn)

    def load_checked(ann_id: str, if_version: Optional[int]) -> Annotation:
        ann = store.get_annotation(ann_id)
        if if_version is not None and if_version != ann.version:
            raise VersionConflict(
                f"annotation {ann_id} is at version {ann.version}, "
                f"not {if_version}")
        return ann

    def commit_mutation(ann: Annotation) -> Annotation:
        ann.version += 1
        return store.put_annotation(ann)

    # --- commits ---

    @app.get("/api/commits")
    def list_commits(limit: int = Query(default=1000, ge=0),
                     offset: int = Query(default=0, ge=0)):
        out = []
        for snap in store.list_commits()[offset:offset + limit]:
            out.append({
                "id": snap.commit.commit_id,
                "repository": snap.commit.repository,
                "sha": snap.commit.sha,
                "message": snap.message,
                "files": [
                    {"kind": f.kind.value, "pathBefore": f.path_before,
                     "pathAfter": f.path_after, "binary": f.binary}
                    for f in snap.files
                ],
            })
        return {"commits": out}

    @app.get("/api/commits/{commit_id}")
    def get_commit(commit_id: str):
        snapshot, _, _ = cache.get(commit_id)
        return snapshot.to_json()

    @app.get("/api/commits/{commit_id}/diff")
    def get_diff(commit_id: str, context: int = Query(default=3, ge=0)):
        snapshot, _, _ = cache.get(commit_id)
        files = [diffs.compute_diff(change, context).to_json()
                 for change in snapshot.files if not change.binary]
        return {"files": files}

    @app.get("/api/commits/{commit_id}/elements")
    def get_elements(commit_id: str, side: str, type: str,
                     file: Optional[str] = None):
        _, idx_before, idx_after = cache.get(commit_id)
        index = idx_before if RevisionSide.parse(side) is RevisionSide.BEFORE \
            else idx_after
        etype = ElementType.parse(type)
        if etype is ElementType.CODE_FRAGMENT:
            etype = ElementType.METHOD_DECLARATION
        elements = index.elements_of_type(etype, file)
        return {"elements": [el.to_json() for el in elements]}

    # --- refactoring types ---

    @app.get("/api/types")
    def list_types():
        registry = store.registry()
        return {"types": [
            {**defn.to_json(), "builtin": defn.builtin}
            for defn in registry.all()
        ]}

    @app.post("/api/types", status_code=201)
    def add_type(body: dict):
        defn = RefactoringTypeDefinition.from_json(body)
        registry = store.registry()
        registered = registry.register(defn)
        store.put_type(registered)
        return {**registered.to_json(), "builtin": False}

    # --- annotations ---

    def annotation_payload(ann: Annotation) -> dict:
        return ann.to_json()

    @app.get("/api/annotations")
    def list_annotations():
        return {"annotations": [a.to_json() for a in store.list_annotations()]}

    @app.post("/api/annotations", status_code=201)
    def create_annotation(body: dict,
                          x_annotator: str = Header(default="anonymous")):
        if "hint" in body:
            results = storage.import_hints(
                store, {"hints": [body["hint"]]}, annotator=x_annotator)
            result = results[0]
            return {"annotation": annotation_payload(result.annotation),
                    "warnings": result.warnings}
        if "commit" not in body or "type" not in body:
            raise SchemaViolation("body needs 'hint' or 'commit' plus 'type'")
        ref = CommitRef.from_json(body["commit"])
        store.get_commit(ref.commit_id)  # must resolve
        ann = storage.new_annotation(ref, body["type"], x_annotator,
                                      body.get("description"))
        store.put_annotation(ann)
        return {"annotation": annotation_payload(ann), "warnings": []}

    @app.get("/api/annotations/{ann_id}")
    def get_annotation(ann_id: str):
        return annotation_payload(store.get_annotation(ann_id))

    @app.put("/api/annotations/{ann_id}/parameters/{side}/{name}")
    def put_parameter(ann_id: str, side: str, name: str, body: dict,
                      if_version: Optional[int] = Header(default=None)):
        ann = load_checked(ann_id, if_version)
        session = session_for(ann)
        rev = RevisionSide.parse(side)
        if "range" in body:
            annotate.set_parameter(session, rev, name,
                                   rng=TextRange.from_json(body["range"]))
        elif "point" in body:
            p = body["point"]
            annotate.set_parameter(
                session, rev, name,
                point=(p["path"], p["line"], p["column"]))
        else:
            raise SchemaViolation("body needs 'range' or 'point'")
        ann = commit_mutation(ann)
        return {"annotation": annotation_payload(ann),
                "ranges": [r.to_json() for r in ann.ranges(rev, name)]}

    @app.delete("/api/annotations/{ann_id}/parameters/{side}/{name}")
    def delete_parameter(ann_id: str, side: str, name: str,
                         range: Optional[str] = None,
                         if_version: Optional[int] = Header(default=None)):
        ann = load_checked(ann_id, if_version)
        session = session_for(ann)
        rev = RevisionSide.parse(side)
        rng = None
        if range is not None:
            try:
                rng = TextRange.from_json(json.loads(range))
            except (json.JSONDecodeError, KeyError, TypeError, ValueError) as exc:
                raise SchemaViolation(f"bad range query parameter: {exc}")
        annotate.clear_parameter(session, rev, name, rng=rng)
        ann = commit_mutation(ann)
        return {"annotation": annotation_payload(ann),
                "ranges": [r.to_json() for r in ann.ranges(rev, name)]}

    @app.post("/api/annotations/{ann_id}/parameters/{side}/{name}/autofill")
    def autofill_parameter(ann_id: str, side: str, name: str,
                           if_version: Optional[int] = Header(default=None)):
        ann = load_checked(ann_id, if_version)
        session = session_for(ann)
        rev = RevisionSide.parse(side)
        _, derived = annotate.autofill(session, rev, name)
        ann = commit_mutation(ann)
        return {"annotation": annotation_payload(ann),
                "derived": [el.to_json() for el in derived]}

    @app.post("/api/annotations/{ann_id}/status")
    def set_status(ann_id: str, body: dict,
                   if_version: Optional[int] = Header(default=None)):
        ann = load_checked(ann_id, if_version)
        session = session_for(ann)
        annotate.set_status(session, AnnotationStatus.parse(body["status"]))
        ann = commit_mutation(ann)
        return annotation_payload(ann)

    # --- export and metrics ---

    @app.get("/api/export")
    def export(status: Optional[str] = None):
        status_filter = AnnotationStatus.parse(status.capitalize()) \
            if status else None
        return storage.export_dataset(store, status_filter)

    @app.get("/api/metrics/agreement")
    def agreement():
        registry = store.registry()
        report = metrics.agreement_rate(store.list_annotations(),
                                        registry.lookup)
        return report.to_json()

    return app


def serve(data_dir: os.PathLike | str | None = None, port: int = 8080,
          host: str = "127.0.0.1") -> None:
    import uvicorn

    uvicorn.run(create_app(data_dir), host=host, port=port)
