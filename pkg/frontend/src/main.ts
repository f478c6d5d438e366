// DOM wiring: load a seed, click vertices to mutate, freeze/delete/glue,
// undo/redo.  All math comes from the API; boot() returns the store so the
// scripted browser test can await request quiescence.

import { SeedJson } from "./api.js";
import { ExplorerStore, ExplorerView } from "./state.js";
import { renderSeed } from "./render.js";

export const A2: SeedJson = {
    format: "cluster-seed/v1",
    vars: [
        { id: "x1", frozen: false },
        { id: "x2", frozen: false },
    ],
    matrix: { rows: ["x1", "x2"], cols: ["x1", "x2"], entries: [[0, 1], [-1, 0]] },
};

function el<T extends HTMLElement>(id: string): T {
    const node = document.getElementById(id);
    if (!node) throw new Error(`missing #${id}`);
    return node as T;
}

function idList(raw: string): string[] {
    return raw
        .split(",")
        .map((s) => s.trim())
        .filter((s) => s.length > 0);
}

export function renderView(store: ExplorerStore, view: ExplorerView): void {
    const { svg, warnings, valueLines } = renderSeed(view.seed);
    el("graph").innerHTML = svg;
    el("values").textContent = valueLines.join("\n");
    el("history").textContent = view.history.length
        ? `history: ${view.history.join(" , ")}`
        : "history: (initial seed)";
    const notes = [...warnings, ...view.diagnostics];
    if (view.error) notes.unshift(`error: ${view.error}`);
    el("diagnostics").textContent = notes.join("\n");
    (el("undo") as HTMLButtonElement).disabled = view.history.length === 0;
    (el("redo") as HTMLButtonElement).disabled = view.redoTail.length === 0;

    const exchangeable = new Set(view.seed.matrix.rows);
    el("graph")
        .querySelectorAll<SVGElement>(".vertex")
        .forEach((node) => {
            const id = node.getAttribute("data-id")!;
            if (exchangeable.has(id)) {
                node.addEventListener("click", () => void store.dispatch({ kind: "mutate", at: id }));
            } else {
                node.addEventListener("click", () => {
                    node.setAttribute("data-tooltip", "frozen variables do not mutate");
                });
            }
        });
}

export function boot(apiBase?: string): ExplorerStore {
    const base =
        apiBase ??
        (window as unknown as { CLUSTERKIT_API?: string }).CLUSTERKIT_API ??
        "";
    const store = new ExplorerStore(base);
    store.subscribe((view) => renderView(store, view));
    el("load").addEventListener("click", () => {
        try {
            const seed = JSON.parse((el("seed-input") as HTMLTextAreaElement).value) as SeedJson;
            void store.dispatch({ kind: "load", seed });
        } catch (err) {
            el("diagnostics").textContent = `error: seed JSON did not parse: ${err}`;
        }
    });
    el("undo").addEventListener("click", () => void store.dispatch({ kind: "undo" }));
    el("redo").addEventListener("click", () => void store.dispatch({ kind: "redo" }));
    el("freeze").addEventListener("click", () => {
        void store.dispatch({ kind: "freeze", ids: idList((el("subset") as HTMLInputElement).value) });
    });
    el("delete").addEventListener("click", () => {
        void store.dispatch({ kind: "delete", ids: idList((el("subset") as HTMLInputElement).value) });
    });
    el("glue").addEventListener("click", () => {
        const pair = idList((el("pair") as HTMLInputElement).value);
        if (pair.length === 2) {
            void store.dispatch({ kind: "glue", pair: [pair[0], pair[1]] });
        } else {
            el("diagnostics").textContent = "error: glue needs exactly two ids (y1,y2)";
        }
    });
    (el("seed-input") as HTMLTextAreaElement).value = JSON.stringify(A2, null, 1);
    void store.dispatch({ kind: "load", seed: A2 });
    return store;
}
