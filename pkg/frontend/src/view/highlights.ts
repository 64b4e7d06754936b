import type { FileDiff, LineTag, Side, TextRange } from "../model/types.js";

/** One display row of a side-by-side diff pane. */
export interface PaneLine {
  line: number;
  text: string;
  tag: LineTag;
}

/** A gap between hunks, rendered as an ellipsis row. */
export interface PaneGap {
  gap: true;
}

export type PaneRow = PaneLine | PaneGap;

export function isGap(row: PaneRow): row is PaneGap {
  return "gap" in row;
}

/** Rows for one pane of a two-pane diff view. The before pane shows
 * Context and Delete lines numbered by the old file; the after pane
 * shows Context and Insert lines numbered by the new file. */
export function paneRows(diff: FileDiff, side: Side): PaneRow[] {
  const before = side === "before";
  const skip: LineTag = before ? "Insert" : "Delete";
  const rows: PaneRow[] = [];
  let lastShown = 0;
  for (const hunk of diff.hunks) {
    let line = before ? hunk.beforeStart : hunk.afterStart;
    if (lastShown > 0 && line > lastShown + 1) rows.push({ gap: true });
    for (const hl of hunk.lines) {
      if (hl.tag === skip) continue;
      rows.push({ line, text: hl.text, tag: hl.tag });
      lastShown = line;
      line += 1;
    }
  }
  return rows;
}

/** A half-open column span [start, end) on a single line, 1-based. */
export interface Segment {
  start: number;
  end: number;
}

/** The part of a text range that falls on the given line, clipped to the
 * line's text; null when the range does not touch the line or the
 * intersection is empty. */
export function segmentOnLine(
  range: TextRange,
  line: number,
  lineText: string,
): Segment | null {
  if (line < range.startLine || line > range.endLine) return null;
  const start = line === range.startLine ? range.startColumn : 1;
  const lineEnd = lineText.length + 1;
  const end = line === range.endLine ? Math.min(range.endColumn, lineEnd) : lineEnd;
  if (end <= start) return null;
  return { start, end };
}

/** Merged, sorted segments covered by any of the ranges on one line of
 * one file. Overlapping and touching segments coalesce. */
export function lineSegments(
  ranges: TextRange[],
  path: string,
  line: number,
  lineText: string,
): Segment[] {
  const raw: Segment[] = [];
  for (const range of ranges) {
    if (range.path !== path) continue;
    const seg = segmentOnLine(range, line, lineText);
    if (seg) raw.push(seg);
  }
  raw.sort((a, b) => a.start - b.start || a.end - b.end);
  const merged: Segment[] = [];
  for (const seg of raw) {
    const last = merged[merged.length - 1];
    if (last && seg.start <= last.end) {
      last.end = Math.max(last.end, seg.end);
    } else {
      merged.push({ ...seg });
    }
  }
  return merged;
}

/** A run of characters within a line, marked when covered by a segment. */
export interface LinePart {
  text: string;
  marked: boolean;
}

/** Splits a line into alternating plain and marked parts. Segments must
 * be sorted and disjoint, as produced by lineSegments. */
export function splitLine(text: string, segments: Segment[]): LinePart[] {
  const parts: LinePart[] = [];
  let cursor = 1;
  for (const seg of segments) {
    if (seg.start > cursor) {
      parts.push({ text: text.slice(cursor - 1, seg.start - 1), marked: false });
    }
    parts.push({ text: text.slice(seg.start - 1, seg.end - 1), marked: true });
    cursor = seg.end;
  }
  if (cursor <= text.length) {
    parts.push({ text: text.slice(cursor - 1), marked: false });
  }
  return parts;
}
