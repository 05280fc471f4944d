/**
 * Pure HTML renderers over the app state. String-in, string-out so the
 * snapshot tests need no DOM; main.ts owns mounting and events.
 */

import { SizeMetrics, VerdictFlags } from "./api.js";
import { AppState, Banner, Draft, PatternCard, TriageApp } from "./app.js";

const GUIDANCE =
  "Mark a pattern sugarable when it is a self-contained idiom that a more " +
  "compact syntax could express; name the sugar only when you can propose one.";

export function esc(text: string): string {
  return text
    .replace(/&/g, "&amp;")
    .replace(/</g, "&lt;")
    .replace(/>/g, "&gt;")
    .replace(/"/g, "&quot;");
}

const RULE_LABELS: Record<keyof VerdictFlags, string> = {
  duplication: "duplication",
  data_edge: "data edge",
  null_rule: "null",
  error_handling: "error handling",
  entry_exit: "entry+exit",
};

export function renderFlags(flags: VerdictFlags | null): string {
  if (flags === null) return "";
  const chips = (Object.keys(RULE_LABELS) as (keyof VerdictFlags)[])
    .filter((k) => flags[k])
    .map((k) => `<span class="chip chip-on">${RULE_LABELS[k]}</span>`);
  return chips.join("");
}

export function renderGraph(card: PatternCard): string {
  const nodes = card.nodes
    .map((label, i) => `<li class="node">n${i}: <code>${esc(label)}</code></li>`)
    .join("");
  const edges = card.edges
    .map(([s, d, label]) => `<li class="edge">n${s} &rarr; n${d} <code>${esc(label)}</code></li>`)
    .join("");
  return `<ul class="nodes">${nodes}</ul><ul class="edges">${edges}</ul>`;
}

export function renderCard(card: PatternCard, draft: Draft, error: string | undefined,
                           pending: boolean): string {
  const label = card.label;
  const labelLine = label
    ? `<p class="label">labeled: ${label.sugarable ? "sugarable" : "not sugarable"}` +
      (label.sugar_name ? ` as <strong>${esc(label.sugar_name)}</strong>` : "") +
      `</p>`
    : `<p class="label label-missing">unlabeled</p>`;
  const history = card.historyLength > 1
    ? `<span class="badge history">${card.historyLength} entries</span>`
    : "";
  const nameDisabled = draft.sugarable ? "" : " disabled";
  const errorLine = error ? `<p class="error" role="alert">${esc(error)}</p>` : "";
  const examples = card.examples === null ? "" : renderExamples(card);
  return `<article class="card" data-id="${card.id}">
<header>
<span class="support">support ${card.supportCount} (${(card.supportRatio * 100).toFixed(3)}%)</span>
<span class="size">size ${card.size}</span>
${renderFlags(card.flags)}${history}
</header>
${renderGraph(card)}
${labelLine}
${errorLine}
<form class="label-form" data-id="${card.id}">
<label><input type="checkbox" name="sugarable"${draft.sugarable ? " checked" : ""}> sugarable</label>
<input type="text" name="sugar_name" placeholder="sugar name" value="${esc(draft.sugarName)}"${nameDisabled}>
<input type="text" name="notes" placeholder="notes" value="${esc(draft.notes)}">
<button type="submit"${pending ? " disabled" : ""}>save label</button>
</form>
${examples}
</article>`;
}

export function renderExamples(card: PatternCard): string {
  if (!card.examples || card.examples.length === 0) {
    return `<p class="examples-empty">no witness examples recorded</p>`;
  }
  const blocks = card.examples.map((ex) => {
    const lines = ex.nodes
      .map((n) => `<li>n${n.pattern_index}: <code>${esc(n.snippet ?? "?")}</code></li>`)
      .join("");
    return `<section class="witness">
<h4>${esc(ex.method.file_path)} &middot; ${esc(ex.method.method_signature)}</h4>
<ul>${lines}</ul>
</section>`;
  });
  return `<div class="examples">${blocks.join("")}</div>`;
}

export function renderBanner(banner: Banner | null): string {
  if (banner === null) return "";
  if (banner.kind === "incomplete") {
    const links = banner.unlabeled
      .map((id) => `<a href="#pattern-${id}" data-id="${id}">${id}</a>`)
      .join(", ");
    return `<aside class="banner banner-incomplete">size ${banner.size} labeling incomplete; ` +
      `remaining: ${links}</aside>`;
  }
  if (banner.kind === "advance") {
    return `<aside class="banner banner-advance">size ${banner.size} named ` +
      `${banner.newSugars} new sugar(s): advance to size ${banner.size + 1}</aside>`;
  }
  return `<aside class="banner banner-stop">size ${banner.size} named 0 new sugars: stop</aside>`;
}

export function renderMetrics(rows: SizeMetrics[]): string {
  const body = rows
    .map((r) =>
      `<tr><td>${r.size}</td><td>${r.total_frequent}</td><td>${r.investigated}</td>` +
      `<td>${r.median_frequency}</td><td>${r.sugarable_count}</td>` +
      `<td>${r.new_sugars}/${r.unique_sugars}</td></tr>`)
    .join("");
  return `<table class="metrics">
<thead><tr><th>size</th><th>total</th><th>investigated</th><th>median freq</th><th>sugarable</th><th>new/unique</th></tr></thead>
<tbody>${body}</tbody>
</table>`;
}

export function renderConnectionError(state: AppState): string {
  if (state.connectionError === null) return "";
  return `<aside class="banner banner-error" role="alert">server unreachable ` +
    `(${esc(state.connectionError)}) &mdash; <button data-action="retry">retry</button></aside>`;
}

export function renderApp(app: TriageApp): string {
  const state = app.state;
  const cards = app
    .pageCards()
    .map((card) =>
      renderCard(card, app.draftFor(card.id), state.labelErrors.get(card.id),
                 state.pendingLabel === card.id))
    .join("\n");
  const pager = `<nav class="pager">
<button data-action="prev"${state.page === 0 ? " disabled" : ""}>prev</button>
<span>page ${state.page + 1} / ${app.pageCount()}</span>
<button data-action="next"${state.page + 1 >= app.pageCount() ? " disabled" : ""}>next</button>
</nav>`;
  const progress = `<p class="progress">${app.labeledCount()} / ${state.cards.length} labeled at size ${state.size}</p>`;
  return `<main>
<p class="guidance">${GUIDANCE}</p>
${renderConnectionError(state)}
${renderBanner(state.banner)}
${progress}
${cards}
${pager}
</main>`;
}
