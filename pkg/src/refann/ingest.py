"""Commit ingestion: build CommitSnapshots from a git clone or from a
before/after directory-pair fixture.

Git access shells out to the system `git` binary (override with the
REFANN_GIT environment variable); fixtures never touch git.
"""

from __future__ import annotations

import json
import os
import subprocess
from dataclasses import dataclass, field
from enum import Enum
from pathlib import Path
from typing import Optional

from .errors import (
    MalformedFixture,
    MergeCommitUnsupported,
    RepoNotFound,
    UnknownCommit,
)
from .model import CommitRef


class ChangeKind(Enum):
    ADDED = "Added"
    REMOVED = "Removed"
    MODIFIED = "Modified"
    RENAMED = "Renamed"


def is_binary(data: bytes) -> bool:
    return b"\x00" in data[:8000]


@dataclass(frozen=True)
class FileChange:
    kind: ChangeKind
    path_before: Optional[str] = None
    path_after: Optional[str] = None
    content_before: Optional[str] = None
    content_after: Optional[str] = None
    binary: bool = False

    def __post_init__(self):
        if self.kind is ChangeKind.ADDED and (
            self.path_before is not None or self.content_before is not None
        ):
            raise ValueError("Added change must not carry a before side")
        if self.kind is ChangeKind.REMOVED and (
            self.path_after is not None or self.content_after is not None
        ):
            raise ValueError("Removed change must not carry an after side")
        if self.kind is ChangeKind.RENAMED:
            if self.path_before is None or self.path_after is None:
                raise ValueError("Renamed change needs both paths")
            if self.path_before == self.path_after:
                raise ValueError("Renamed change needs differing paths")
        if self.content_before is None and self.content_after is None:
            raise ValueError("a change needs content on at least one side")

    def path(self, before: bool) -> Optional[str]:
        return self.path_before if before else self.path_after

    def to_json(self) -> dict:
        return {
            "kind": self.kind.value,
            "pathBefore": self.path_before,
            "pathAfter": self.path_after,
            "contentBefore": self.content_before,
            "contentAfter": self.content_after,
            "binary": self.binary,
        }

    @classmethod
    def from_json(cls, data: dict) -> "FileChange":
        return cls(
            kind=ChangeKind(data["kind"]),
            path_before=data.get("pathBefore"),
            path_after=data.get("pathAfter"),
            content_before=data.get("contentBefore"),
            content_after=data.get("contentAfter"),
            binary=data.get("binary", False),
        )


@dataclass(frozen=True)
class CommitSnapshot:
    commit: CommitRef
    files: tuple[FileChange, ...]
    message: str = ""

    def __post_init__(self):
        object.__setattr__(self, "files", tuple(self.files))
        for before in (True, False):
            paths = [f.path(before) for f in self.files if f.path(before)]
            if len(paths) != len(set(paths)):
                raise ValueError("file paths must be unique per side")

    def to_json(self) -> dict:
        return {
            "commit": self.commit.to_json(),
            "message": self.message,
            "files": [f.to_json() for f in self.files],
        }

    @classmethod
    def from_json(cls, data: dict) -> "CommitSnapshot":
        return cls(
            commit=CommitRef.from_json(data["commit"]),
            files=tuple(FileChange.from_json(f) for f in data["files"]),
            message=data.get("message", ""),
        )


def _git_binary() -> str:
    return os.environ.get("REFANN_GIT", "git")


def _git(repo: Path, *args: str) -> bytes:
    proc = subprocess.run(
        [_git_binary(), "-C", str(repo), *args],
        capture_output=True,
    )
    if proc.returncode != 0:
        raise RuntimeError(proc.stderr.decode("utf-8", "replace").strip())
    return proc.stdout


def _decode(data: bytes) -> str:
    return data.decode("utf-8", "replace")


def load_commit(repo_path: os.PathLike | str, sha: str) -> CommitSnapshot:
    """Snapshot a single-parent commit: full before/after contents of
    every changed file."""
    repo = Path(repo_path)
    if not repo.is_dir():
        raise RepoNotFound(str(repo))
    try:
        _git(repo, "rev-parse", "--git-dir")
    except RuntimeError:
        raise RepoNotFound(f"{repo} is not a git clone")
    try:
        full_sha = _git(repo, "rev-parse", "--verify", f"{sha}^{{commit}}").decode().strip()
        parents_line = _git(repo, "show", "-s", "--format=%P", full_sha).decode().split()
    except RuntimeError as exc:
        raise UnknownCommit(f"{sha}: {exc}")
    if len(parents_line) != 1:
        raise MergeCommitUnsupported(
            f"{sha} has {len(parents_line)} parents; exactly one required"
        )
    parent = parents_line[0]
    message = _decode(_git(repo, "show", "-s", "--format=%B", full_sha)).rstrip("\n")

    # -M enables git's default-threshold rename detection
    raw = _decode(_git(
        repo, "diff-tree", "-r", "-M", "-z", "--no-commit-id",
        "--diff-filter=ADMR", parent, full_sha,
    ))
    tokens = raw.split("\0")
    changes: list[FileChange] = []
    i = 0
    while i < len(tokens) and tokens[i]:
        meta = tokens[i].split()
        status = meta[4]
        if status.startswith("R"):
            old_path, new_path, i = tokens[i + 1], tokens[i + 2], i + 3
        else:
            old_path = new_path = tokens[i + 1]
            i += 2
        before_blob = None if status == "A" else _git(
            repo, "cat-file", "blob", f"{parent}:{old_path}")
        after_blob = None if status == "D" else _git(
            repo, "cat-file", "blob", f"{full_sha}:{new_path}")
        binary = any(is_binary(b) for b in (before_blob, after_blob) if b is not None)
        if status == "A":
            changes.append(FileChange(
                kind=ChangeKind.ADDED, path_after=new_path,
                content_after=_decode(after_blob), binary=binary))
        elif status == "D":
            changes.append(FileChange(
                kind=ChangeKind.REMOVED, path_before=old_path,
                content_before=_decode(before_blob), binary=binary))
        else:
            kind = ChangeKind.RENAMED if old_path != new_path else ChangeKind.MODIFIED
            changes.append(FileChange(
                kind=kind, path_before=old_path, path_after=new_path,
                content_before=_decode(before_blob),
                content_after=_decode(after_blob), binary=binary))

    changes.sort(key=lambda c: c.path_after or c.path_before or "")
    return CommitSnapshot(
        commit=CommitRef(repository=repo.name, sha=full_sha),
        files=tuple(changes),
        message=message,
    )


def _read_tree(root: Path) -> dict[str, bytes]:
    out = {}
    for path in sorted(root.rglob("*")):
        if path.is_file():
            out[path.relative_to(root).as_posix()] = path.read_bytes()
    return out


def load_fixture(fixture_dir: os.PathLike | str) -> CommitSnapshot:
    """Snapshot a `before/` + `after/` directory pair. Renames are not
    detected: files pair up by path only."""
    root = Path(fixture_dir)
    before_dir, after_dir = root / "before", root / "after"
    if not before_dir.is_dir() or not after_dir.is_dir():
        raise MalformedFixture(f"{root} needs before/ and after/ subtrees")

    meta = {"repository": root.name, "sha": f"fixture-{root.name}", "message": ""}
    meta_file = root / "commit.json"
    if meta_file.exists():
        try:
            loaded = json.loads(meta_file.read_text("utf-8"))
        except json.JSONDecodeError as exc:
            raise MalformedFixture(f"bad commit.json: {exc}")
        if not isinstance(loaded, dict):
            raise MalformedFixture("commit.json must hold an object")
        meta.update(loaded)

    before = _read_tree(before_dir)
    after = _read_tree(after_dir)
    changes: list[FileChange] = []
    for path in sorted(set(before) | set(after)):
        b, a = before.get(path), after.get(path)
        if b == a:
            continue
        binary = any(is_binary(x) for x in (b, a) if x is not None)
        if b is None:
            changes.append(FileChange(
                kind=ChangeKind.ADDED, path_after=path,
                content_after=_decode(a), binary=binary))
        elif a is None:
            changes.append(FileChange(
                kind=ChangeKind.REMOVED, path_before=path,
                content_before=_decode(b), binary=binary))
        else:
            changes.append(FileChange(
                kind=ChangeKind.MODIFIED, path_before=path, path_after=path,
                content_before=_decode(b), content_after=_decode(a),
                binary=binary))
    return CommitSnapshot(
        commit=CommitRef(repository=meta["repository"], sha=meta["sha"]),
        files=tuple(changes),
        message=meta.get("message", ""),
    )
