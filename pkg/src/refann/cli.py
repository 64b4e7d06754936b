"""Command-line entry point for the headless workflow: import hints,
serve the API, validate the store, export datasets, compute agreement."""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path
from typing import Optional

from . import ingest, metrics, storage
from .errors import RefannError, UnknownCommit
from .model import AnnotationStatus, CommitRef, RefactoringTypeDefinition


def _store(args) -> storage.Store:
    root = args.data_dir or storage.data_dir_from_env()
    return storage.Store(root)


def _emit(text: str, out: Optional[str]) -> None:
    if out:
        Path(out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)


def _repo_resolver(repo: Optional[str]):
    if repo is None:
        return None

    def resolve(ref: CommitRef):
        try:
            return ingest.load_commit(repo, ref.sha)
        except UnknownCommit:
            return None

    return resolve


def cmd_import(args) -> int:
    store = _store(args)
    data = json.loads(Path(args.hints).read_text("utf-8"))
    results = storage.import_hints(
        store, data, annotator=args.annotator,
        resolver=_repo_resolver(args.repo))
    for result in results:
        for warning in result.warnings:
            print(f"warning: {result.annotation.id}: {warning}", file=sys.stderr)
    print(f"{len(results)} annotations created")
    return 0


def cmd_serve(args) -> int:
    from .service import serve

    serve(data_dir=args.data_dir or storage.data_dir_from_env(),
          port=args.port, host=args.host)
    return 0


def cmd_validate(args) -> int:
    store = _store(args)
    problems = storage.validate_store(store)
    for problem in problems:
        print(problem)
    if problems:
        print(f"{len(problems)} violations")
        return 1
    print("ok")
    return 0


def cmd_export(args) -> int:
    store = _store(args)
    status = AnnotationStatus.parse(args.status.capitalize()) \
        if args.status else None
    dataset = storage.export_dataset(store, status)
    _emit(storage.canonical_json(dataset), args.output)
    return 0


def cmd_agreement(args) -> int:
    store = _store(args)
    registry = store.registry()
    report = metrics.agreement_rate(store.list_annotations(), registry.lookup)
    _emit(storage.canonical_json(report.to_json()), args.output)
    return 0


def cmd_types(args) -> int:
    store = _store(args)
    if args.types_command == "list":
        for defn in store.registry().all():
            marker = "builtin" if defn.builtin else "custom"
            print(f"{defn.name}\t{marker}")
        return 0
    data = json.loads(Path(args.file).read_text("utf-8"))
    defn = RefactoringTypeDefinition.from_json(data)
    registry = store.registry()
    registered = registry.register(defn)
    store.put_type(registered)
    print(f"registered {registered.name}")
    return 0


def cmd_fixture(args) -> int:
    store = _store(args)
    snapshot = ingest.load_fixture(args.dir)
    store.put_commit(snapshot)
    print(snapshot.commit.commit_id)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="refann",
        description="Commit annotation toolkit for refactoring datasets",
    )
    parser.add_argument("--data-dir", help="store root (default: $REFANN_DATA_DIR or ./data)")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("import", help="create draft annotations from a hint file")
    p.add_argument("hints", help="hint JSON file (or a previously exported dataset)")
    p.add_argument("--repo", help="git clone used to resolve commits")
    p.add_argument("--annotator", default="importer")
    p.set_defaults(func=cmd_import)

    p = sub.add_parser("serve", help="run the HTTP API")
    p.add_argument("--port", type=int, default=8080)
    p.add_argument("--host", default="127.0.0.1")
    p.set_defaults(func=cmd_serve)

    p = sub.add_parser("validate", help="re-check every stored annotation")
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("export", help="write the curated dataset")
    p.add_argument("--status", choices=["draft", "verified", "rejected"])
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_export)

    p = sub.add_parser("agreement", help="inter-annotator agreement report")
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_agreement)

    p = sub.add_parser("types", help="list or add refactoring types")
    tsub = p.add_subparsers(dest="types_command", required=True)
    tlist = tsub.add_parser("list")
    tlist.set_defaults(func=cmd_types)
    tadd = tsub.add_parser("add")
    tadd.add_argument("file", help="type-definition JSON file")
    tadd.set_defaults(func=cmd_types)

    p = sub.add_parser("fixture", help="fixture operations")
    fsub = p.add_subparsers(dest="fixture_command", required=True)
    fload = fsub.add_parser("load", help="ingest a before/after directory pair")
    fload.add_argument("dir")
    fload.set_defaults(func=cmd_fixture)

    return parser


def main(argv: Optional[list[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except RefannError as exc:
        print(f"error: {exc.code}: {exc}", file=sys.stderr)
        return 1
    except (OSError, json.JSONDecodeError) as exc:
        print(f"error: IO: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
