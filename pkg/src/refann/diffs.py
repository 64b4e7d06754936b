"""Line-level diffs of file changes, for UI rendering and changed-line
scoping. Built on difflib's longest-matching-block matcher."""

from __future__ import annotations

import difflib
from dataclasses import dataclass
from enum import Enum

from .errors import BinaryFile
from .ingest import FileChange
from .model import RevisionSide


class LineTag(Enum):
    CONTEXT = "Context"
    DELETE = "Delete"
    INSERT = "Insert"


@dataclass(frozen=True)
class Hunk:
    """One change region. Starts are 1-based positions in each file; a
    zero-length side's start still points at the insertion position."""

    before_start: int
    before_len: int
    after_start: int
    after_len: int
    lines: tuple[tuple[LineTag, str], ...]

    def __post_init__(self):
        object.__setattr__(self, "lines", tuple(self.lines))
        deletes = sum(1 for tag, _ in self.lines if tag is not LineTag.INSERT)
        inserts = sum(1 for tag, _ in self.lines if tag is not LineTag.DELETE)
        if deletes != self.before_len or inserts != self.after_len:
            raise ValueError("hunk line tags do not reconcile with lengths")

    def to_json(self) -> dict:
        return {
            "beforeStart": self.before_start,
            "beforeLen": self.before_len,
            "afterStart": self.after_start,
            "afterLen": self.after_len,
            "lines": [{"tag": tag.value, "text": text} for tag, text in self.lines],
        }


@dataclass(frozen=True)
class FileDiff:
    path_before: str | None
    path_after: str | None
    hunks: tuple[Hunk, ...]
    before_newline: bool = True
    after_newline: bool = True

    def to_json(self) -> dict:
        return {
            "pathBefore": self.path_before,
            "pathAfter": self.path_after,
            "hunks": [h.to_json() for h in self.hunks],
        }


def _split(content: str | None) -> tuple[list[str], bool]:
    if content is None or content == "":
        return [], True
    return content.split("\n")[:-1] if content.endswith("\n") else content.split("\n"), \
        content.endswith("\n")


def compute_diff(change: FileChange, context_lines: int = 3) -> FileDiff:
    """Minimal line diff with the requested amount of context."""
    if change.binary:
        raise BinaryFile(change.path_after or change.path_before or "")
    before_lines, before_nl = _split(change.content_before)
    after_lines, after_nl = _split(change.content_after)

    matcher = difflib.SequenceMatcher(a=before_lines, b=after_lines, autojunk=False)
    hunks = []
    for group in matcher.get_grouped_opcodes(context_lines):
        i1, j1 = group[0][1], group[0][3]
        i2, j2 = group[-1][2], group[-1][4]
        lines: list[tuple[LineTag, str]] = []
        for op, a1, a2, b1, b2 in group:
            if op == "equal":
                lines.extend((LineTag.CONTEXT, ln) for ln in before_lines[a1:a2])
            else:
                lines.extend((LineTag.DELETE, ln) for ln in before_lines[a1:a2])
                lines.extend((LineTag.INSERT, ln) for ln in after_lines[b1:b2])
        hunks.append(Hunk(
            before_start=i1 + 1, before_len=i2 - i1,
            after_start=j1 + 1, after_len=j2 - j1,
            lines=tuple(lines),
        ))
    return FileDiff(
        path_before=change.path_before,
        path_after=change.path_after,
        hunks=tuple(hunks),
        before_newline=before_nl,
        after_newline=after_nl,
    )


def changed_line_set(diff: FileDiff, side: RevisionSide) -> set[int]:
    """Deleted line numbers (Before) or inserted line numbers (After)."""
    want = LineTag.DELETE if side is RevisionSide.BEFORE else LineTag.INSERT
    changed: set[int] = set()
    for hunk in diff.hunks:
        b, a = hunk.before_start, hunk.after_start
        for tag, _ in hunk.lines:
            if tag is want:
                changed.add(b if side is RevisionSide.BEFORE else a)
            if tag is not LineTag.INSERT:
                b += 1
            if tag is not LineTag.DELETE:
                a += 1
    return changed


def apply_diff(before: str | None, diff: FileDiff) -> str:
    """Reconstruct the after-content from before-content plus hunks.
    Exists as the round-trip counterpart of compute_diff."""
    before_lines, _ = _split(before)
    out: list[str] = []
    cursor = 0  # 0-based index into before_lines
    for hunk in diff.hunks:
        start = hunk.before_start - 1
        out.extend(before_lines[cursor:start])
        cursor = start
        for tag, text in hunk.lines:
            if tag is LineTag.CONTEXT:
                out.append(text)
                cursor += 1
            elif tag is LineTag.DELETE:
                cursor += 1
            else:
                out.append(text)
    out.extend(before_lines[cursor:])
    if not out:
        return ""
    return "\n".join(out) + ("\n" if diff.after_newline else "")
