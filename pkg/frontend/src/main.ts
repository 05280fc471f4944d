/** Browser entry point: mounts the app and wires DOM events. */

import { Client, RuleName } from "./api.js";
import { TriageApp } from "./app.js";
import { renderApp, renderMetrics } from "./render.js";

const RULES: (RuleName | null)[] = [
  null, "duplication", "data_edge", "null_rule", "error_handling", "entry_exit",
];

function mount(): void {
  const rootEl = document.getElementById("app");
  if (!rootEl) throw new Error("missing #app element");
  const root: HTMLElement = rootEl;
  const client = new Client("");
  const app = new TriageApp(client);

  const controls = document.createElement("div");
  controls.className = "controls";
  controls.innerHTML = `
    <label>size <input id="size" type="number" min="1" value="1"></label>
    <label>rule <select id="rule">${RULES.map(
      (r) => `<option value="${r ?? ""}">${r ?? "all"}</option>`,
    ).join("")}</select></label>
    <button id="reload">browse</button>
    <button id="check-stop">check stopping rule</button>
    <div id="metrics"></div>
    <div id="view"></div>`;
  root.appendChild(controls);
  const view = controls.querySelector("#view") as HTMLElement;
  const metricsBox = controls.querySelector("#metrics") as HTMLElement;

  const redraw = (): void => {
    view.innerHTML = renderApp(app);
  };

  const currentSize = (): number =>
    Number((controls.querySelector("#size") as HTMLInputElement).value) || 1;
  const currentRule = (): RuleName | null => {
    const v = (controls.querySelector("#rule") as HTMLSelectElement).value;
    return v === "" ? null : (v as RuleName);
  };

  const browse = async (): Promise<void> => {
    await app.browse(currentSize(), currentRule());
    redraw();
    try {
      metricsBox.innerHTML = renderMetrics(await client.metrics());
    } catch {
      /* metrics panel is optional while offline */
    }
  };

  controls.querySelector("#reload")!.addEventListener("click", () => void browse());
  controls.querySelector("#check-stop")!.addEventListener("click", async () => {
    await app.refreshBanner(currentSize());
    redraw();
  });

  view.addEventListener("click", async (event) => {
    const target = event.target as HTMLElement;
    const action = target.dataset["action"];
    if (action === "next") {
      app.nextPage();
      redraw();
    } else if (action === "prev") {
      app.prevPage();
      redraw();
    } else if (action === "retry") {
      await browse();
    }
  });

  // keep drafts in sync as the user types; checkbox toggles the name field
  view.addEventListener("input", (event) => {
    const input = event.target as HTMLInputElement;
    const form = input.closest("form.label-form") as HTMLFormElement | null;
    if (!form) return;
    const id = form.dataset["id"]!;
    const draft = app.draftFor(id);
    if (input.name === "sugarable") {
      draft.sugarable = input.checked;
      redraw();
    } else if (input.name === "sugar_name") {
      draft.sugarName = input.value;
    } else if (input.name === "notes") {
      draft.notes = input.value;
    }
  });

  view.addEventListener("submit", async (event) => {
    const form = event.target as HTMLFormElement;
    if (!form.classList.contains("label-form")) return;
    event.preventDefault();
    const id = form.dataset["id"]!;
    await app.submitLabel(id);
    redraw();
  });

  void browse();
}

mount();
