import type {
  Annotation,
  CodeElement,
  CommitDetail,
  CommitSummary,
  Dataset,
  FileDiff,
  RefactoringType,
  Side,
  TextRange,
} from "../model/types.js";

export class ApiError extends Error {
  constructor(
    readonly status: number,
    readonly code: string,
    message: string,
  ) {
    super(message);
  }
}

export interface AnnotationReply {
  annotation: Annotation;
  ranges?: TextRange[];
  derived?: CodeElement[];
  warnings?: string[];
}

type FetchLike = typeof fetch;

/** Thin typed wrapper over the annotation service's HTTP interface.
 * Every mutation carries the annotator identity and, when known, the
 * optimistic version of the annotation being changed. */
export class ApiClient {
  constructor(
    readonly baseUrl: string,
    readonly annotator: string = "ui",
    private readonly fetchImpl: FetchLike = fetch,
  ) {}

  private async request<T>(
    method: string,
    path: string,
    body?: unknown,
    ifVersion?: number,
  ): Promise<T> {
    const headers: Record<string, string> = {
      "X-Annotator": this.annotator,
    };
    if (body !== undefined) headers["Content-Type"] = "application/json";
    if (ifVersion !== undefined) headers["If-Version"] = String(ifVersion);
    const resp = await this.fetchImpl(this.baseUrl + path, {
      method,
      headers,
      body: body === undefined ? undefined : JSON.stringify(body),
    });
    const payload = await resp.json();
    if (!resp.ok) {
      throw new ApiError(
        resp.status,
        typeof payload?.error === "string" ? payload.error : "Unknown",
        typeof payload?.message === "string" ? payload.message : resp.statusText,
      );
    }
    return payload as T;
  }

  listCommits(): Promise<{ commits: CommitSummary[] }> {
    return this.request("GET", "/api/commits");
  }

  getCommit(commitId: string): Promise<CommitDetail> {
    return this.request("GET", `/api/commits/${encodeURIComponent(commitId)}`);
  }

  getDiff(commitId: string, context = 3): Promise<{ files: FileDiff[] }> {
    const id = encodeURIComponent(commitId);
    return this.request("GET", `/api/commits/${id}/diff?context=${context}`);
  }

  getElements(
    commitId: string,
    side: Side,
    type: string,
    file?: string,
  ): Promise<{ elements: CodeElement[] }> {
    const id = encodeURIComponent(commitId);
    const query = new URLSearchParams({ side, type });
    if (file !== undefined) query.set("file", file);
    return this.request("GET", `/api/commits/${id}/elements?${query}`);
  }

  listTypes(): Promise<{ types: RefactoringType[] }> {
    return this.request("GET", "/api/types");
  }

  createAnnotation(
    commit: { repository: string; sha: string },
    type: string,
  ): Promise<AnnotationReply> {
    return this.request("POST", "/api/annotations", { commit, type });
  }

  getAnnotation(id: string): Promise<Annotation> {
    return this.request("GET", `/api/annotations/${encodeURIComponent(id)}`);
  }

  private paramPath(id: string, side: Side, name: string): string {
    return (
      `/api/annotations/${encodeURIComponent(id)}` +
      `/parameters/${side}/${encodeURIComponent(name)}`
    );
  }

  setParameterByPoint(
    id: string,
    side: Side,
    name: string,
    point: { path: string; line: number; column: number },
    version: number,
  ): Promise<AnnotationReply> {
    return this.request("PUT", this.paramPath(id, side, name), { point }, version);
  }

  setParameterByRange(
    id: string,
    side: Side,
    name: string,
    range: TextRange,
    version: number,
  ): Promise<AnnotationReply> {
    return this.request("PUT", this.paramPath(id, side, name), { range }, version);
  }

  clearParameter(
    id: string,
    side: Side,
    name: string,
    version: number,
    range?: TextRange,
  ): Promise<AnnotationReply> {
    let path = this.paramPath(id, side, name);
    if (range !== undefined) {
      path += `?range=${encodeURIComponent(JSON.stringify(range))}`;
    }
    return this.request("DELETE", path, undefined, version);
  }

  autofillParameter(
    id: string,
    side: Side,
    name: string,
    version: number,
  ): Promise<AnnotationReply> {
    return this.request(
      "POST",
      `${this.paramPath(id, side, name)}/autofill`,
      undefined,
      version,
    );
  }

  setStatus(id: string, status: string, version: number): Promise<Annotation> {
    return this.request(
      "POST",
      `/api/annotations/${encodeURIComponent(id)}/status`,
      { status },
      version,
    );
  }

  exportDataset(status?: string): Promise<Dataset> {
    const query = status ? `?status=${encodeURIComponent(status)}` : "";
    return this.request("GET", `/api/export${query}`);
  }
}
