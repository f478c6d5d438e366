// Pure seed -> SVG renderer (string-based, so it runs identically in the
// browser and under node in tests).
//
// Exchangeable vertices are circles, frozen vertices boxes; an arc x -> y
// is drawn when b_xy > 0, labelled |b_xy| when the weight exceeds one.  For
// a non-skew-symmetric exchangeable pair the edge is labelled with the raw
// pair (b_xy, b_yx) and a warning is attached.

import { SeedJson, displayedValue } from "./api.js";

export interface RenderResult {
    svg: string;
    warnings: string[];
    valueLines: string[];
}

const SIZE = 420;
const RADIUS = 150;
const VERTEX = 22;

function escapeXml(text: string): string {
    return text
        .replace(/&/g, "&amp;")
        .replace(/</g, "&lt;")
        .replace(/>/g, "&gt;")
        .replace(/"/g, "&quot;");
}

interface Edge {
    from: string;
    to: string;
    label: string;
}

function entry(seed: SeedJson, x: string, y: string): number {
    const i = seed.matrix.rows.indexOf(x);
    if (i < 0) return 0;
    const j = seed.matrix.cols.indexOf(y);
    return j < 0 ? 0 : seed.matrix.entries[i][j];
}

export function collectEdges(seed: SeedJson): { edges: Edge[]; warnings: string[] } {
    const edges: Edge[] = [];
    const warnings: string[] = [];
    const ids = seed.vars.map((v) => v.id);
    const exchangeable = new Set(seed.matrix.rows);
    for (let a = 0; a < ids.length; a++) {
        for (let b = a + 1; b < ids.length; b++) {
            const x = ids[a];
            const y = ids[b];
            const bxy = entry(seed, x, y);
            const byx = entry(seed, y, x);
            if (bxy === 0 && byx === 0) continue;
            if (exchangeable.has(x) && exchangeable.has(y) && bxy !== -byx) {
                warnings.push(`non-skew-symmetric pair (${x}, ${y}): weights (${bxy}, ${byx})`);
                edges.push({
                    from: bxy > 0 ? x : y,
                    to: bxy > 0 ? y : x,
                    label: `(${bxy}, ${byx})`,
                });
                continue;
            }
            const weight = bxy !== 0 ? bxy : -byx;
            edges.push({
                from: weight > 0 ? x : y,
                to: weight > 0 ? y : x,
                label: Math.abs(weight) === 1 ? "" : String(Math.abs(weight)),
            });
        }
    }
    return { edges, warnings };
}

export function renderSeed(seed: SeedJson): RenderResult {
    const ids = seed.vars.map((v) => v.id);
    const n = ids.length;
    const cx = SIZE / 2;
    const cy = SIZE / 2;
    const pos = new Map<string, { x: number; y: number }>();
    ids.forEach((id, i) => {
        const angle = (2 * Math.PI * i) / Math.max(n, 1) - Math.PI / 2;
        pos.set(id, {
            x: Math.round(cx + RADIUS * Math.cos(angle)),
            y: Math.round(cy + RADIUS * Math.sin(angle)),
        });
    });

    const { edges, warnings } = collectEdges(seed);
    const parts: string[] = [];
    parts.push(
        `<svg xmlns="http://www.w3.org/2000/svg" viewBox="0 0 ${SIZE} ${SIZE}" class="seed-graph">`,
        `<defs><marker id="arrow" viewBox="0 0 10 10" refX="9" refY="5" ` +
            `markerWidth="7" markerHeight="7" orient="auto-start-reverse">` +
            `<path d="M 0 0 L 10 5 L 0 10 z"/></marker></defs>`,
    );
    for (const edge of edges) {
        const a = pos.get(edge.from)!;
        const b = pos.get(edge.to)!;
        const dx = b.x - a.x;
        const dy = b.y - a.y;
        const len = Math.hypot(dx, dy) || 1;
        const trim = (VERTEX + 4) / len;
        const x1 = a.x + dx * trim;
        const y1 = a.y + dy * trim;
        const x2 = b.x - dx * trim;
        const y2 = b.y - dy * trim;
        parts.push(
            `<line x1="${x1.toFixed(1)}" y1="${y1.toFixed(1)}" x2="${x2.toFixed(1)}" ` +
                `y2="${y2.toFixed(1)}" class="edge" marker-end="url(#arrow)"/>`,
        );
        if (edge.label) {
            const mx = ((x1 + x2) / 2).toFixed(1);
            const my = ((y1 + y2) / 2 - 6).toFixed(1);
            parts.push(`<text x="${mx}" y="${my}" class="edge-label">${escapeXml(edge.label)}</text>`);
        }
    }
    const exchangeable = new Set(seed.matrix.rows);
    for (const v of seed.vars) {
        const p = pos.get(v.id)!;
        const name = escapeXml(v.id);
        if (exchangeable.has(v.id)) {
            parts.push(
                `<circle cx="${p.x}" cy="${p.y}" r="${VERTEX}" class="vertex exchangeable" data-id="${name}"/>`,
            );
        } else {
            parts.push(
                `<rect x="${p.x - VERTEX}" y="${p.y - VERTEX}" width="${2 * VERTEX}" ` +
                    `height="${2 * VERTEX}" class="vertex frozen" data-id="${name}"/>`,
            );
        }
        parts.push(`<text x="${p.x}" y="${p.y + 4}" class="vertex-label">${name}</text>`);
    }
    parts.push("</svg>");

    const valueLines = seed.vars.map((v) => `${v.id} = ${displayedValue(v)}`);
    return { svg: parts.join(""), warnings, valueLines };
}
