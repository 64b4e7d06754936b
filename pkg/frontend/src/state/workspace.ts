import type { ApiClient } from "../api/client.js";
import type {
  Annotation,
  CommitDetail,
  FileDiff,
  ParameterSchema,
  RefactoringType,
  Side,
  TextRange,
} from "../model/types.js";

export interface Slot {
  side: Side;
  name: string;
  schema: ParameterSchema;
}

export function slotsOf(type: RefactoringType): Slot[] {
  const out: Slot[] = [];
  for (const side of ["before", "after"] as const) {
    for (const [name, schema] of Object.entries(type[side])) {
      out.push({ side, name, schema });
    }
  }
  return out;
}

export function boundRanges(
  annotation: Annotation,
  side: Side,
  name: string,
): TextRange[] {
  return annotation.parameters[side]?.[name] ?? [];
}

/** The first required slot that has no bound range yet, scanning the
 * before side first; null when the annotation is complete. */
export function nextUnfilledSlot(
  type: RefactoringType,
  annotation: Annotation,
): Slot | null {
  for (const slot of slotsOf(type)) {
    if (!slot.schema.required) continue;
    if (boundRanges(annotation, slot.side, slot.name).length === 0) {
      return slot;
    }
  }
  return null;
}

export function isComplete(
  type: RefactoringType,
  annotation: Annotation,
): boolean {
  return nextUnfilledSlot(type, annotation) === null;
}

export interface WorkspaceView {
  commit: CommitDetail | null;
  diff: FileDiff[];
  types: RefactoringType[];
  annotation: Annotation | null;
  activeSlot: Slot | null;
  lastError: string | null;
  busy: boolean;
}

/** Drives one annotation against the service.
 *
 * The local annotation object is always a verbatim server echo: every
 * mutation sends the user's intent (a click point or an element range)
 * and replaces local state with the annotation the server returns, so
 * the UI can never display a binding the service did not accept. */
export class Workspace {
  commit: CommitDetail | null = null;
  commitId: string | null = null;
  diff: FileDiff[] = [];
  types: RefactoringType[] = [];
  annotation: Annotation | null = null;
  activeSlot: Slot | null = null;
  lastError: string | null = null;
  busy = false;

  constructor(private readonly api: ApiClient) {}

  view(): WorkspaceView {
    return {
      commit: this.commit,
      diff: this.diff,
      types: this.types,
      annotation: this.annotation,
      activeSlot: this.activeSlot,
      lastError: this.lastError,
      busy: this.busy,
    };
  }

  typeOf(annotation: Annotation): RefactoringType {
    const found = this.types.find((t) => t.name === annotation.type);
    if (!found) throw new Error(`unknown type ${annotation.type}`);
    return found;
  }

  async loadTypes(): Promise<void> {
    this.types = (await this.api.listTypes()).types;
  }

  async openCommit(commitId: string): Promise<void> {
    this.commit = await this.api.getCommit(commitId);
    this.commitId = commitId;
    this.diff = (await this.api.getDiff(commitId)).files;
    this.annotation = null;
    this.activeSlot = null;
  }

  async startAnnotation(typeName: string): Promise<void> {
    if (!this.commit) throw new Error("open a commit first");
    const reply = await this.api.createAnnotation(this.commit.commit, typeName);
    this.annotation = reply.annotation;
    this.activeSlot = nextUnfilledSlot(
      this.typeOf(reply.annotation),
      reply.annotation,
    );
  }

  async resumeAnnotation(id: string): Promise<void> {
    this.annotation = await this.api.getAnnotation(id);
    this.activeSlot = nextUnfilledSlot(
      this.typeOf(this.annotation),
      this.annotation,
    );
  }

  selectSlot(side: Side, name: string): void {
    if (!this.annotation) return;
    const slot = slotsOf(this.typeOf(this.annotation)).find(
      (s) => s.side === side && s.name === name,
    );
    this.activeSlot = slot ?? null;
  }

  private async mutate(
    action: (annotation: Annotation) => Promise<{ annotation: Annotation }>,
  ): Promise<boolean> {
    if (!this.annotation) return false;
    this.busy = true;
    try {
      const reply = await action(this.annotation);
      this.annotation = reply.annotation;
      this.lastError = null;
      return true;
    } catch (err) {
      this.lastError = err instanceof Error ? err.message : String(err);
      return false;
    } finally {
      this.busy = false;
    }
  }

  /** A click in a code pane: bind the active slot to the element under
   * the cursor. Advances to the next unfilled slot on success. */
  async clickAt(side: Side, path: string, line: number, column: number): Promise<boolean> {
    const slot = this.activeSlot;
    if (!this.annotation || !slot || slot.side !== side) return false;
    const ok = await this.mutate((ann) =>
      this.api.setParameterByPoint(
        ann.id,
        slot.side,
        slot.name,
        { path, line, column },
        ann.version,
      ),
    );
    if (ok && !slot.schema.multiple) this.advanceSlot();
    return ok;
  }

  /** A drag selection, for CodeFragment parameters. */
  async selectRange(range: TextRange): Promise<boolean> {
    const slot = this.activeSlot;
    if (!this.annotation || !slot) return false;
    const ok = await this.mutate((ann) =>
      this.api.setParameterByRange(ann.id, slot.side, slot.name, range, ann.version),
    );
    if (ok && !slot.schema.multiple) this.advanceSlot();
    return ok;
  }

  async autofill(side: Side, name: string): Promise<boolean> {
    return this.mutate((ann) =>
      this.api.autofillParameter(ann.id, side, name, ann.version),
    );
  }

  async removeRange(side: Side, name: string, range?: TextRange): Promise<boolean> {
    return this.mutate((ann) =>
      this.api.clearParameter(ann.id, side, name, ann.version, range),
    );
  }

  async setStatus(status: "Verified" | "Rejected" | "Draft"): Promise<boolean> {
    return this.mutate(async (ann) => ({
      annotation: await this.api.setStatus(ann.id, status, ann.version),
    }));
  }

  private advanceSlot(): void {
    if (!this.annotation) return;
    this.activeSlot = nextUnfilledSlot(
      this.typeOf(this.annotation),
      this.annotation,
    );
  }
}
