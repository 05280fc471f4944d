import { describe, expect, it } from "vitest";

import { Client, PatternPayload, SizeMetrics } from "../src/api.js";
import { TriageApp, bannerFrom, draftProblem } from "../src/app.js";
import { renderApp, renderBanner, renderCard, renderMetrics } from "../src/render.js";
import { callsOf, fakeFetch, fixture, onGet, onPost } from "./helpers.js";

function appWith(...routes: Parameters<typeof fakeFetch>) {
  const fetchFn = fakeFetch(...routes);
  const client = new Client("", fetchFn);
  const app = new TriageApp(client);
  app.labeler = "tester";
  return { app, client, fetchFn };
}

const size1 = () => onGet("/api/patterns?size=1", fixture("patterns_size1"));

describe("browsing", () => {
  it("lists size-1 patterns exactly as served, sorted by support", async () => {
    const { app } = appWith(size1());
    await app.browse(1);
    const served = fixture("patterns_size1").body as PatternPayload[];
    expect(app.state.cards.length).toBe(served.length);
    // mirrors server payloads: every displayed number is a served field
    app.state.cards.forEach((card, i) => {
      const payload = served[i]!;
      expect(card.supportCount).toBe(payload.pattern.support_count);
      expect(card.supportRatio).toBe(payload.pattern.support_ratio);
      expect(card.nodes).toEqual(payload.nodes);
      expect(card.investigated).toBe(payload.verdict!.investigated);
    });
    // every size-1 pattern is investigated
    expect(app.state.cards.every((c) => c.investigated)).toBe(true);
    const supports = app.state.cards.map((c) => -c.supportCount);
    expect(supports).toEqual([...supports].sort((a, b) => a - b));
    expect(renderApp(app)).toMatchSnapshot();
  });

  it("applies the duplication rule chip through the server query", async () => {
    const { app, fetchFn } = appWith(
      onGet("/api/patterns?size=2&rule=duplication", fixture("patterns_rule_duplication")),
    );
    await app.browse(2, "duplication");
    expect(callsOf(fetchFn)[0]!.url).toBe("/api/patterns?size=2&rule=duplication");
    expect(app.state.cards.length).toBeGreaterThan(0);
    for (const card of app.state.cards) {
      expect(card.flags?.duplication).toBe(true);
      expect(new Set(card.nodes).size).toBe(1);
    }
  });

  it("pages the card list", async () => {
    const { app } = appWith(size1());
    await app.browse(1);
    app.state.pageSize = 4;
    const total = app.state.cards.length;
    expect(app.pageCards().length).toBe(4);
    app.nextPage();
    expect(app.state.page).toBe(1);
    const seen = new Set<string>();
    app.state.page = 0;
    for (let p = 0; p < app.pageCount(); p++) {
      app.pageCards().forEach((c) => seen.add(c.id));
      app.nextPage();
    }
    expect(seen.size).toBe(total);
  });

  it("keeps existing cards and shows a retry banner when the server is down", async () => {
    const { app } = appWith(size1());
    await app.browse(1);
    const had = app.state.cards.length;
    const failing = new TriageApp(
      new Client("", (async () => {
        throw new Error("connection refused");
      }) as unknown as typeof fetch),
    );
    failing.state = app.state;
    await failing.browse(1);
    expect(failing.state.cards.length).toBe(had); // no data loss
    expect(failing.state.connectionError).toContain("connection refused");
    expect(renderApp(failing)).toContain("retry");
  });

  it("renders an empty state with guidance for an empty run", async () => {
    const { app } = appWith(onGet("/api/patterns?size=1", { status: 200, body: [] }));
    await app.browse(1);
    const html = renderApp(app);
    expect(html).toContain("0 / 0 labeled");
    expect(html).toMatchSnapshot();
  });
});

describe("labeling", () => {
  it("submits a valid label optimistically and reconciles with the server", async () => {
    let release!: () => void;
    const gate = new Promise<void>((resolve) => (release = resolve));
    const recorded = fixture("label_created");
    const fetchFn = (async (input: RequestInfo | URL, init?: RequestInit) => {
      const url = String(input);
      if (url === "/api/patterns?size=1") {
        return new Response(JSON.stringify(fixture("patterns_size1").body), { status: 200 });
      }
      if (url === "/api/labels" && init?.method === "POST") {
        await gate;
        return new Response(JSON.stringify(recorded.body), { status: recorded.status });
      }
      throw new Error(`unexpected ${url}`);
    }) as typeof fetch;
    const app = new TriageApp(new Client("", fetchFn));
    app.labeler = "tester";
    await app.browse(1);
    const card = app.state.cards[0]!;
    const draft = app.draftFor(card.id);
    draft.sugarable = true;
    draft.sugarName = "unless";
    draft.notes = "negated guard";
    const pending = app.submitLabel(card.id);
    // optimistic: the card shows the label before the server answers
    expect(card.label?.sugar_name).toBe("unless");
    expect(app.state.pendingLabel).toBe(card.id);
    release();
    expect(await pending).toBe(true);
    // reconciled: the stored record (with server timestamp) wins
    expect(card.label).toEqual(recorded.body);
    expect(app.labeledCount()).toBe(1);
    expect(renderCard(card, app.draftFor(card.id), undefined, false)).toMatchSnapshot();
  });

  it("blocks a name-without-sugarable draft before any request", async () => {
    const { app, fetchFn } = appWith(size1());
    await app.browse(1);
    const card = app.state.cards[0]!;
    const draft = app.draftFor(card.id);
    draft.sugarable = false;
    draft.sugarName = "sneaky";
    expect(draftProblem(draft)).toBe("a sugar name requires the sugarable flag");
    const ok = await app.submitLabel(card.id);
    expect(ok).toBe(false);
    expect(card.label).toBeNull();
    const posts = callsOf(fetchFn).filter((c) => c.init?.method === "POST");
    expect(posts.length).toBe(0); // blocked client-side before POST
    expect(app.state.labelErrors.get(card.id)).toBe(
      "a sugar name requires the sugarable flag",
    );
    expect(
      renderCard(card, draft, app.state.labelErrors.get(card.id), false),
    ).toMatchSnapshot();
  });

  it("surfaces a server 422 inline, rolls back, and preserves the draft", async () => {
    const rejected = fixture("label_rejected");
    expect(rejected.status).toBe(422);
    const { app } = appWith(size1(), onPost("/api/labels", rejected));
    await app.browse(1);
    const card = app.state.cards[0]!;
    const draft = app.draftFor(card.id);
    draft.sugarable = true; // passes the client check; server still rejects
    draft.sugarName = "bogus";
    draft.notes = "kept for retry";
    const ok = await app.submitLabel(card.id);
    expect(ok).toBe(false);
    expect(card.label).toBeNull(); // rolled back
    expect(card.historyLength).toBe(0);
    expect(app.state.labelErrors.get(card.id)).toContain("sugar name");
    expect(app.draftFor(card.id).notes).toBe("kept for retry");
  });

  it("name input is disabled until sugarable is checked", async () => {
    const { app } = appWith(size1());
    await app.browse(1);
    const card = app.state.cards[0]!;
    const draft = app.draftFor(card.id);
    expect(renderCard(card, draft, undefined, false)).toContain(
      'name="sugar_name" placeholder="sugar name" value="" disabled',
    );
    draft.sugarable = true;
    expect(renderCard(card, draft, undefined, false)).not.toContain("disabled>");
  });

  it("drafts survive navigation between sizes", async () => {
    const { app } = appWith(
      size1(),
      onGet("/api/patterns?size=2&rule=duplication", fixture("patterns_rule_duplication")),
    );
    await app.browse(1);
    const id = app.state.cards[0]!.id;
    app.draftFor(id).notes = "still here";
    await app.browse(2, "duplication");
    await app.browse(1);
    expect(app.draftFor(id).notes).toBe("still here");
  });
});

describe("stopping banner", () => {
  it("lists remaining patterns as links while labeling is incomplete", async () => {
    const incomplete = fixture("continue_incomplete");
    expect(incomplete.status).toBe(409);
    const { app } = appWith(size1(), onGet("/api/continue?size=1", incomplete));
    await app.browse(1);
    await app.refreshBanner(1);
    expect(app.state.banner?.kind).toBe("incomplete");
    const html = renderBanner(app.state.banner);
    const served = incomplete.body as { unlabeled: string[] };
    for (const id of served.unlabeled) {
      expect(html).toContain(`#pattern-${id}`);
    }
    expect(html).toMatchSnapshot();
  });

  it("prompts to advance when the size named new sugars", async () => {
    const advance = fixture("continue_advance");
    const { app } = appWith(size1(), onGet("/api/continue?size=1", advance));
    await app.browse(1);
    await app.refreshBanner(1);
    const body = advance.body as { new_sugars: number };
    expect(app.state.banner).toEqual({
      kind: "advance",
      size: 1,
      newSugars: body.new_sugars, // echoed, never computed locally
    });
    expect(renderBanner(app.state.banner)).toMatchSnapshot();
  });

  it("prompts to stop when no new sugars were named", async () => {
    const stop = fixture("continue_stop");
    const { app } = appWith(onGet("/api/continue?size=2", stop));
    await app.refreshBanner(2);
    expect(app.state.banner?.kind).toBe("stop");
    expect(renderBanner(app.state.banner)).toMatchSnapshot();
  });

  it("converts verdicts without recomputing anything", () => {
    expect(bannerFrom(3, { kind: "decided", size: 3, new_sugars: 4, advance: true }))
      .toEqual({ kind: "advance", size: 3, newSugars: 4 });
    expect(bannerFrom(4, { kind: "decided", size: 4, new_sugars: 0, advance: false }))
      .toEqual({ kind: "stop", size: 4, newSugars: 0 });
  });
});

describe("metrics and witnesses", () => {
  it("renders metrics rows exactly as served", () => {
    const rows = fixture("metrics_after_labels").body as SizeMetrics[];
    const html = renderMetrics(rows);
    for (const row of rows) {
      expect(html).toContain(
        `<tr><td>${row.size}</td><td>${row.total_frequent}</td>` +
        `<td>${row.investigated}</td><td>${row.median_frequency}</td>` +
        `<td>${row.sugarable_count}</td><td>${row.new_sugars}/${row.unique_sugars}</td></tr>`,
      );
    }
    expect(html).toMatchSnapshot();
  });

  it("loads witness snippets on demand and renders them verbatim", async () => {
    const payload = fixture("pattern_with_witness");
    const body = payload.body as PatternPayload;
    const { app } = appWith(
      onGet("/api/patterns?size=2", { status: 200, body: [body] }),
      onGet(`/api/patterns/${body.pattern.id}/examples`, fixture("examples")),
    );
    await app.browse(2);
    const card = app.state.cards[0]!;
    expect(card.examples).toBeNull();
    await app.loadExamples(card.id);
    expect(card.examples!.length).toBeGreaterThan(0);
    const html = renderCard(card, app.draftFor(card.id), undefined, false);
    const firstSnippet = card.examples![0]!.nodes[0]!.snippet!;
    expect(html).toContain(
      firstSnippet.replace(/&/g, "&amp;").replace(/</g, "&lt;").replace(/>/g, "&gt;"),
    );
    expect(html).toMatchSnapshot();
  });
});
