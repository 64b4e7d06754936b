/** Wire types mirroring the annotation service's JSON payloads. */

export type Side = "before" | "after";

export interface TextRange {
  path: string;
  startLine: number;
  startColumn: number;
  endLine: number;
  endColumn: number;
}

export interface ParameterSchema {
  type: string;
  multiple: boolean;
  required: boolean;
  autofill?: { kind: string; follows: string; ancestorType?: string };
}

export interface RefactoringType {
  name: string;
  builtin?: boolean;
  before: Record<string, ParameterSchema>;
  after: Record<string, ParameterSchema>;
}

export interface CodeElement {
  elementType: string;
  range: TextRange;
  side: Side;
  name?: string;
  enclosingMethod?: TextRange;
}

export interface CommitSummary {
  id: string;
  repository: string;
  sha: string;
  message: string;
  files: {
    kind: string;
    pathBefore: string | null;
    pathAfter: string | null;
    binary: boolean;
  }[];
}

export interface CommitDetail {
  commit: { repository: string; sha: string };
  message: string;
  files: {
    kind: string;
    pathBefore: string | null;
    pathAfter: string | null;
    contentBefore: string | null;
    contentAfter: string | null;
    binary: boolean;
  }[];
}

export type LineTag = "Context" | "Delete" | "Insert";

export interface DiffHunk {
  beforeStart: number;
  beforeLen: number;
  afterStart: number;
  afterLen: number;
  lines: { tag: LineTag; text: string }[];
}

export interface FileDiff {
  pathBefore: string | null;
  pathAfter: string | null;
  hunks: DiffHunk[];
}

export type AnnotationStatus = "Draft" | "Verified" | "Rejected";

export interface Annotation {
  id: string;
  commit: { repository: string; sha: string };
  type: string;
  annotator: string;
  status: AnnotationStatus;
  parameters: Record<Side, Record<string, TextRange[]>>;
  events: { timestamp: number; kind: string }[];
  version: number;
  description?: string;
}

export interface Dataset {
  annotations: {
    commit: { repository: string; sha: string };
    type: string;
    status: AnnotationStatus;
    annotator: string;
    parameters: Record<Side, Record<string, TextRange[]>>;
  }[];
}

export function sameRange(a: TextRange, b: TextRange): boolean {
  return (
    a.path === b.path &&
    a.startLine === b.startLine &&
    a.startColumn === b.startColumn &&
    a.endLine === b.endLine &&
    a.endColumn === b.endColumn
  );
}
