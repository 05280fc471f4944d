/** Typed client for the local triage API. This is the only backend. */

export interface MethodRef {
  file_path: string;
  method_signature: string;
  method_index: number;
}

export interface WitnessRef {
  method: MethodRef;
  mapping: [number, number][];
}

export interface PatternStats {
  id: string;
  canonical: string;
  size: number;
  support_count: number;
  support_ratio: number;
  witnesses: WitnessRef[];
}

export interface VerdictFlags {
  duplication: boolean;
  data_edge: boolean;
  null_rule: boolean;
  error_handling: boolean;
  entry_exit: boolean;
}

export interface Verdict {
  pattern_id: string;
  size: number;
  flags: VerdictFlags;
  investigated: boolean;
}

export interface LabelRecord {
  pattern_id: string;
  sugarable: boolean;
  sugar_name: string | null;
  notes: string;
  labeler: string;
  timestamp: string;
}

export interface PatternPayload {
  pattern: PatternStats;
  nodes: string[];
  edges: [number, number, string][];
  verdict: Verdict | null;
  label: LabelRecord | null;
  history_length: number;
}

export interface WitnessNode {
  pattern_index: number;
  node_id: number;
  span: [number, number] | null;
  snippet: string | null;
}

export interface WitnessExample {
  method: MethodRef;
  nodes: WitnessNode[];
}

export interface SizeMetrics {
  size: number;
  total_frequent: number;
  investigated: number;
  median_frequency: number;
  sugarable_count: number;
  new_sugars: number;
  unique_sugars: number;
}

export interface LabelSubmission {
  pattern_id: string;
  sugarable: boolean;
  sugar_name: string | null;
  notes: string;
  labeler: string;
}

export type ContinueVerdict =
  | { kind: "decided"; size: number; new_sugars: number; advance: boolean }
  | { kind: "incomplete"; unlabeled: string[] };

export type RuleName = keyof VerdictFlags;

export class ApiError extends Error {
  constructor(
    public readonly status: number,
    public readonly detail: string,
  ) {
    super(`HTTP ${status}: ${detail}`);
  }
}

async function parseDetail(res: Response): Promise<string> {
  try {
    const body = (await res.json()) as { detail?: unknown };
    if (typeof body.detail === "string") return body.detail;
    return JSON.stringify(body);
  } catch {
    return res.statusText;
  }
}

export class Client {
  constructor(
    private readonly baseUrl: string = "",
    private readonly fetchFn: typeof fetch = globalThis.fetch,
  ) {}

  private async getJson<T>(path: string): Promise<T> {
    const res = await this.fetchFn(this.baseUrl + path);
    if (!res.ok) throw new ApiError(res.status, await parseDetail(res));
    return (await res.json()) as T;
  }

  async patterns(size?: number, investigated?: boolean, rule?: RuleName): Promise<PatternPayload[]> {
    const params = new URLSearchParams();
    if (size !== undefined) params.set("size", String(size));
    if (investigated !== undefined) params.set("investigated", String(investigated));
    if (rule !== undefined) params.set("rule", rule);
    const query = params.toString();
    return this.getJson(`/api/patterns${query ? "?" + query : ""}`);
  }

  async examples(patternId: string): Promise<WitnessExample[]> {
    return this.getJson(`/api/patterns/${patternId}/examples`);
  }

  async metrics(): Promise<SizeMetrics[]> {
    return this.getJson("/api/metrics");
  }

  async submitLabel(submission: LabelSubmission): Promise<LabelRecord> {
    const res = await this.fetchFn(this.baseUrl + "/api/labels", {
      method: "POST",
      headers: { "Content-Type": "application/json" },
      body: JSON.stringify(submission),
    });
    if (!res.ok) throw new ApiError(res.status, await parseDetail(res));
    return (await res.json()) as LabelRecord;
  }

  async continueVerdict(size: number): Promise<ContinueVerdict> {
    const res = await this.fetchFn(this.baseUrl + `/api/continue?size=${size}`);
    if (res.status === 409) {
      const body = (await res.json()) as { unlabeled: string[] };
      return { kind: "incomplete", unlabeled: body.unlabeled };
    }
    if (!res.ok) throw new ApiError(res.status, await parseDetail(res));
    const body = (await res.json()) as { size: number; new_sugars: number; continue: boolean };
    return { kind: "decided", size: body.size, new_sugars: body.new_sugars, advance: body.continue };
  }
}
