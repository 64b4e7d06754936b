"""Shared fixtures: the Java corpus snapshot and annotation sessions
opened on the before/after commit fixtures."""

from __future__ import annotations

from pathlib import Path

import pytest

from refann import annotate
from refann.index import build_index
from refann.ingest import ChangeKind, CommitSnapshot, FileChange, load_fixture
from refann.model import CommitRef, RevisionSide, TypeRegistry
from refann.storage import new_annotation

FIXTURES = Path(__file__).parent / "fixtures"
CORPUS = FIXTURES / "corpus"
COMMITS = FIXTURES / "commits"
EDGE = FIXTURES / "edge"


def corpus_files() -> dict[str, str]:
    return {p.name: p.read_text("utf-8") for p in sorted(CORPUS.glob("*.java"))}


@pytest.fixture(scope="session")
def corpus() -> dict[str, str]:
    return corpus_files()


@pytest.fixture(scope="session")
def corpus_snapshot(corpus) -> CommitSnapshot:
    files = tuple(
        FileChange(kind=ChangeKind.ADDED, path_after=name, content_after=text)
        for name, text in corpus.items()
    )
    return CommitSnapshot(
        commit=CommitRef(repository="corpus", sha="corpus-snapshot"),
        files=files,
    )


@pytest.fixture(scope="session")
def corpus_index(corpus_snapshot):
    return build_index(corpus_snapshot, RevisionSide.AFTER)


@pytest.fixture(scope="session")
def registry() -> TypeRegistry:
    return TypeRegistry()


def open_fixture_session(fixture_name: str, type_name: str,
                         annotator: str = "tester"):
    snapshot = load_fixture(COMMITS / fixture_name)
    registry = TypeRegistry()
    ann = new_annotation(snapshot.commit, type_name, annotator)
    return annotate.open_session(ann, snapshot, registry.lookup(type_name))
