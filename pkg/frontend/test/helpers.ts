import { readFileSync } from "node:fs";
import { dirname, join } from "node:path";
import { fileURLToPath } from "node:url";

const here = dirname(fileURLToPath(import.meta.url));

export interface Recorded {
  status: number;
  body: unknown;
}

export function fixture(name: string): Recorded {
  const raw = readFileSync(join(here, "fixtures", `${name}.json`), "utf-8");
  return JSON.parse(raw) as Recorded;
}

export type Route = (url: string, init?: RequestInit) => Recorded | undefined;

/** fetch stub dispatching to recorded responses; throws on unmatched URLs. */
export function fakeFetch(...routes: Route[]): typeof fetch {
  const calls: { url: string; init?: RequestInit }[] = [];
  const fn = (async (input: RequestInfo | URL, init?: RequestInit) => {
    const url = String(input);
    calls.push({ url, init });
    for (const route of routes) {
      const recorded = route(url, init);
      if (recorded !== undefined) {
        return new Response(JSON.stringify(recorded.body), {
          status: recorded.status,
          headers: { "Content-Type": "application/json" },
        });
      }
    }
    throw new Error(`no recorded route for ${url}`);
  }) as typeof fetch;
  (fn as unknown as { calls: typeof calls }).calls = calls;
  return fn;
}

export function callsOf(fn: typeof fetch): { url: string; init?: RequestInit }[] {
  return (fn as unknown as { calls: { url: string; init?: RequestInit }[] }).calls;
}

export function onGet(path: string, recorded: Recorded): Route {
  return (url, init) =>
    (!init || !init.method || init.method === "GET") && url === path
      ? recorded
      : undefined;
}

export function onPost(path: string, recorded: Recorded): Route {
  return (url, init) => (init?.method === "POST" && url === path ? recorded : undefined);
}
