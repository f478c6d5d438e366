// Explorer state machine.
//
// The view is always reproducible from (initial seed, mutation history) via
// the stateless API: mutations append to the history, undo truncates it
// client-side and re-syncs, redo replays the saved tail, and any fresh
// action after an undo discards the tail (branch-on-undo).  Structural
// actions (freeze/delete/glue) produce a different algebra, so they re-root
// the explorer at the returned seed with an empty history.
//
// Requests are strictly serialised: a single in-flight request, later
// actions queue behind it.

import {
    Action,
    ApiError,
    EvalResponse,
    SeedJson,
    evalRequest,
} from "./api.js";

export type UserAction =
    | { kind: "load"; seed: SeedJson }
    | { kind: "mutate"; at: string }
    | { kind: "freeze"; ids: string[] }
    | { kind: "delete"; ids: string[] }
    | { kind: "glue"; pair: [string, string] }
    | { kind: "undo" }
    | { kind: "redo" };

export interface ExplorerView {
    seed: SeedJson;
    history: string[];
    redoTail: string[];
    diagnostics: string[];
    error: string | null;
}

const NOOP: Action = { subseed: { freeze: [], delete: [] } };

export class ExplorerStore {
    private initial: SeedJson | null = null;
    private history: string[] = [];
    private redoTail: string[] = [];
    private cache: EvalResponse | null = null;
    private current: SeedJson | null = null;
    private diagnostics: string[] = [];
    private error: string | null = null;
    private queue: Promise<void> = Promise.resolve();
    private listeners: Array<(view: ExplorerView) => void> = [];

    constructor(private readonly base: string) {}

    subscribe(listener: (view: ExplorerView) => void): void {
        this.listeners.push(listener);
    }

    view(): ExplorerView {
        if (!this.current) throw new Error("no seed loaded");
        return {
            seed: this.current,
            history: [...this.history],
            redoTail: [...this.redoTail],
            diagnostics: [...this.diagnostics],
            error: this.error,
        };
    }

    get pending(): Promise<void> {
        return this.queue;
    }

    dispatch(action: UserAction): Promise<void> {
        this.queue = this.queue.then(() => this.run(action));
        return this.queue;
    }

    private emit(): void {
        const view = this.view();
        for (const listener of this.listeners) listener(view);
    }

    private async sync(): Promise<void> {
        // re-derive the current view from (initial, history)
        const resp = await evalRequest(this.base, {
            seed: this.initial!,
            seq: this.history,
            action: NOOP,
        });
        this.cache = resp;
        this.current = (resp.result.seed as SeedJson) ?? resp.replay!;
        this.diagnostics = resp.diagnostics;
    }

    private async run(action: UserAction): Promise<void> {
        this.error = null;
        try {
            switch (action.kind) {
                case "load":
                    this.initial = action.seed;
                    this.history = [];
                    this.redoTail = [];
                    await this.sync();
                    break;
                case "mutate": {
                    const resp = await evalRequest(this.base, {
                        seed: this.initial!,
                        seq: this.history,
                        action: { mutate: action.at },
                    });
                    this.history.push(action.at);
                    this.redoTail = [];
                    this.cache = resp;
                    this.current = resp.result.seed as SeedJson;
                    this.diagnostics = resp.diagnostics;
                    break;
                }
                case "freeze":
                case "delete": {
                    const resp = await evalRequest(this.base, {
                        seed: this.initial!,
                        seq: this.history,
                        action: {
                            subseed: {
                                freeze: action.kind === "freeze" ? action.ids : [],
                                delete: action.kind === "delete" ? action.ids : [],
                            },
                        },
                    });
                    this.initial = resp.result.seed as SeedJson;
                    this.history = [];
                    this.redoTail = [];
                    this.current = this.initial;
                    this.diagnostics = resp.diagnostics;
                    break;
                }
                case "glue": {
                    const resp = await evalRequest(this.base, {
                        seed: this.initial!,
                        seq: this.history,
                        action: { glue: { pair: action.pair } },
                    });
                    this.initial = resp.result.seed as SeedJson;
                    this.history = [];
                    this.redoTail = [];
                    this.current = this.initial;
                    this.diagnostics = resp.diagnostics;
                    break;
                }
                case "undo": {
                    if (this.history.length === 0) break;
                    const last = this.history.pop()!;
                    this.redoTail.unshift(last);
                    await this.sync();
                    break;
                }
                case "redo": {
                    if (this.redoTail.length === 0) break;
                    const next = this.redoTail[0];
                    const resp = await evalRequest(this.base, {
                        seed: this.initial!,
                        seq: this.history,
                        action: { mutate: next },
                    });
                    this.redoTail.shift();
                    this.history.push(next);
                    this.cache = resp;
                    this.current = resp.result.seed as SeedJson;
                    this.diagnostics = resp.diagnostics;
                    break;
                }
            }
        } catch (err) {
            if (err instanceof ApiError) {
                this.error =
                    err.index !== undefined
                        ? `${err.code} at step ${err.index}: ${err.message}`
                        : `${err.code}: ${err.message}`;
            } else {
                this.error = String(err);
            }
        }
        if (this.current) this.emit();
    }
}
