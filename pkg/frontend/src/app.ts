/**
 * Triage session state and actions, kept DOM-free so tests run in node.
 *
 * Every number shown in a card or banner is a field copied from a server
 * payload; nothing is derived client-side. Label submissions update the
 * card optimistically, then reconcile with (or roll back to) the server's
 * answer. Drafts live per pattern for the whole session, so navigating
 * between sizes never loses typed text.
 */

import {
  ApiError,
  Client,
  ContinueVerdict,
  LabelRecord,
  PatternPayload,
  RuleName,
  VerdictFlags,
  WitnessExample,
} from "./api.js";

export interface PatternCard {
  id: string;
  size: number;
  supportCount: number;
  supportRatio: number;
  nodes: string[];
  edges: [number, number, string][];
  flags: VerdictFlags | null;
  investigated: boolean;
  label: LabelRecord | null;
  historyLength: number;
  examples: WitnessExample[] | null; // loaded on demand
}

export function toCard(payload: PatternPayload): PatternCard {
  return {
    id: payload.pattern.id,
    size: payload.pattern.size,
    supportCount: payload.pattern.support_count,
    supportRatio: payload.pattern.support_ratio,
    nodes: payload.nodes,
    edges: payload.edges,
    flags: payload.verdict ? payload.verdict.flags : null,
    investigated: payload.verdict ? payload.verdict.investigated : false,
    label: payload.label,
    historyLength: payload.history_length,
    examples: null,
  };
}

export interface Draft {
  sugarable: boolean;
  sugarName: string;
  notes: string;
}

export const emptyDraft = (): Draft => ({ sugarable: false, sugarName: "", notes: "" });

export type Banner =
  | { kind: "advance"; size: number; newSugars: number }
  | { kind: "stop"; size: number; newSugars: number }
  | { kind: "incomplete"; size: number; unlabeled: string[] };

export function bannerFrom(size: number, verdict: ContinueVerdict): Banner {
  if (verdict.kind === "incomplete") {
    return { kind: "incomplete", size, unlabeled: verdict.unlabeled };
  }
  return verdict.advance
    ? { kind: "advance", size: verdict.size, newSugars: verdict.new_sugars }
    : { kind: "stop", size: verdict.size, newSugars: verdict.new_sugars };
}

/** A sugar name is only allowed on sugarable labels; block before POSTing. */
export function draftProblem(draft: Draft): string | null {
  if (draft.sugarName.trim() !== "" && !draft.sugarable) {
    return "a sugar name requires the sugarable flag";
  }
  return null;
}

export interface AppState {
  size: number;
  rule: RuleName | null;
  page: number;
  pageSize: number;
  cards: PatternCard[];
  banner: Banner | null;
  connectionError: string | null;
  labelErrors: Map<string, string>;
  pendingLabel: string | null;
}

export class TriageApp {
  state: AppState = {
    size: 1,
    rule: null,
    page: 0,
    pageSize: 10,
    cards: [],
    banner: null,
    connectionError: null,
    labelErrors: new Map(),
    pendingLabel: null,
  };
  labeler = "";
  private drafts = new Map<string, Draft>();

  constructor(private readonly client: Client) {}

  /** Load the card list for a size (optionally one rule chip). Existing
   * cards stay on screen when the server is unreachable. */
  async browse(size: number, rule: RuleName | null = null): Promise<void> {
    this.state.size = size;
    this.state.rule = rule;
    this.state.page = 0;
    try {
      const payloads = rule === null
        ? await this.client.patterns(size)
        : await this.client.patterns(size, undefined, rule);
      this.state.cards = payloads.map(toCard);
      this.state.connectionError = null;
    } catch (err) {
      this.state.connectionError = err instanceof Error ? err.message : String(err);
    }
  }

  pageCards(): PatternCard[] {
    const start = this.state.page * this.state.pageSize;
    return this.state.cards.slice(start, start + this.state.pageSize);
  }

  pageCount(): number {
    return Math.max(1, Math.ceil(this.state.cards.length / this.state.pageSize));
  }

  nextPage(): void {
    if (this.state.page + 1 < this.pageCount()) this.state.page += 1;
  }

  prevPage(): void {
    if (this.state.page > 0) this.state.page -= 1;
  }

  /** Drafts are keyed by pattern id and survive navigation. */
  draftFor(id: string): Draft {
    let draft = this.drafts.get(id);
    if (!draft) {
      draft = emptyDraft();
      this.drafts.set(id, draft);
    }
    return draft;
  }

  labeledCount(): number {
    return this.state.cards.filter((c) => c.label !== null).length;
  }

  async loadExamples(id: string): Promise<void> {
    const card = this.state.cards.find((c) => c.id === id);
    if (!card || card.examples !== null) return;
    card.examples = await this.client.examples(id);
  }

  /**
   * Submit the draft for one pattern. The card updates immediately; the
   * server response reconciles it (or rolls it back on rejection). At most
   * one label write is in flight at a time.
   */
  async submitLabel(id: string): Promise<boolean> {
    const card = this.state.cards.find((c) => c.id === id);
    if (!card || this.state.pendingLabel !== null) return false;
    const draft = this.draftFor(id);
    const problem = draftProblem(draft);
    if (problem !== null) {
      this.state.labelErrors.set(id, problem);
      return false;
    }
    const previous = card.label;
    const previousHistory = card.historyLength;
    card.label = {
      pattern_id: id,
      sugarable: draft.sugarable,
      sugar_name: draft.sugarName.trim() || null,
      notes: draft.notes,
      labeler: this.labeler,
      timestamp: "",
    };
    card.historyLength = previousHistory + 1;
    this.state.labelErrors.delete(id);
    this.state.pendingLabel = id;
    try {
      const stored = await this.client.submitLabel({
        pattern_id: id,
        sugarable: draft.sugarable,
        sugar_name: draft.sugarName.trim() || null,
        notes: draft.notes,
        labeler: this.labeler,
      });
      card.label = stored; // reconcile: server record wins
      this.drafts.delete(id);
      return true;
    } catch (err) {
      card.label = previous; // roll back; draft text is preserved for retry
      card.historyLength = previousHistory;
      const message = err instanceof ApiError ? err.detail : String(err);
      this.state.labelErrors.set(id, message);
      return false;
    } finally {
      this.state.pendingLabel = null;
    }
  }

  /** Ask the server whether labeling should advance past the given size. */
  async refreshBanner(size: number): Promise<void> {
    try {
      const verdict = await this.client.continueVerdict(size);
      this.state.banner = bannerFrom(size, verdict);
      this.state.connectionError = null;
    } catch (err) {
      this.state.connectionError = err instanceof Error ? err.message : String(err);
    }
  }
}
