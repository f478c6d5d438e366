// Typed client for the stateless evaluation API.
// The explorer never computes algebra locally: every view is the result of
// POSTing (seed, history, action) to /api/v1/eval.

export interface SeedVarJson {
    id: string;
    frozen: boolean;
    value?: string;
}

export interface MatrixJson {
    rows: string[];
    cols: string[];
    entries: number[][];
}

export interface SeedJson {
    format: string;
    vars: SeedVarJson[];
    matrix: MatrixJson;
}

export type Action =
    | { mutate: string }
    | { subseed: { freeze: string[]; delete: string[] } }
    | { glue: { pair: [string, string] } }
    | { enumerate: { records?: boolean } }
    | { classify: Record<string, number> };

export interface EvalRequest {
    seed: SeedJson;
    seq: string[];
    action: Action;
    depths?: Record<string, number>;
}

export interface EvalResponse {
    result: Record<string, unknown> & { seed?: SeedJson };
    diagnostics: string[];
    replay: SeedJson | null;
}

export class ApiError extends Error {
    constructor(
        public readonly code: string,
        message: string,
        public readonly index?: number,
    ) {
        super(message);
    }
}

export async function evalRequest(base: string, request: EvalRequest): Promise<EvalResponse> {
    const resp = await fetch(`${base}/api/v1/eval`, {
        method: "POST",
        headers: { "Content-Type": "application/json" },
        body: JSON.stringify(request),
    });
    const payload = await resp.json();
    if (!resp.ok) {
        const err = (payload as { error?: { code?: string; message?: string; index?: number } }).error ?? {};
        throw new ApiError(err.code ?? `http-${resp.status}`, err.message ?? "request failed", err.index);
    }
    return payload as EvalResponse;
}

export async function health(base: string): Promise<boolean> {
    try {
        const resp = await fetch(`${base}/api/v1/health`);
        if (!resp.ok) return false;
        const payload = (await resp.json()) as { ok?: boolean };
        return payload.ok === true;
    } catch {
        return false;
    }
}

// The string a variable displays: the Laurent value verbatim when the API
// sent one, otherwise the variable is its own value.
export function displayedValue(v: SeedVarJson): string {
    return v.value ?? v.id;
}
