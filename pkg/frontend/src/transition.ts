/**
 * Layout-to-layout transition along the server's correspondence map. Nodes
 * present in both layouts glide with an ease-in-out cubic; they never jump.
 */

import type { LayoutPayload } from "./types.js";

export function easeInOutCubic(t: number): number {
    const x = Math.min(Math.max(t, 0), 1);
    return x < 0.5 ? 4 * x * x * x : 1 - Math.pow(-2 * x + 2, 3) / 2;
}

export interface InterpolatedBox {
    x: number;
    y: number;
    w: number;
    h: number;
    opacity: number;
}

export interface TransitionFrame {
    boxes: Record<string, InterpolatedBox>;
    entering: string[];
    leaving: string[];
}

function lerp(a: number, b: number, t: number): number {
    return a + (b - a) * t;
}

/**
 * Frame at eased progress t in [0, 1]. Shared nodes interpolate; entering
 * nodes fade in at their final place; leaving nodes fade out where they were.
 */
export function interpolateLayouts(prev: LayoutPayload, next: LayoutPayload, t: number): TransitionFrame {
    const eased = easeInOutCubic(t);
    const frame: TransitionFrame = { boxes: {}, entering: [], leaving: [] };
    const correspondence = next.correspondence ?? {};
    const matchedNew = new Set<string>();
    for (const [oldId, newId] of Object.entries(correspondence)) {
        const a = prev.boxes[oldId];
        const b = next.boxes[newId];
        if (!a || !b) continue;
        matchedNew.add(newId);
        frame.boxes[newId] = {
            x: lerp(a[0], b[0], eased),
            y: lerp(a[1], b[1], eased),
            w: lerp(a[2], b[2], eased),
            h: lerp(a[3], b[3], eased),
            opacity: 1,
        };
    }
    for (const [id, b] of Object.entries(next.boxes)) {
        if (matchedNew.has(id)) continue;
        frame.boxes[id] = { x: b[0], y: b[1], w: b[2], h: b[3], opacity: eased };
        frame.entering.push(id);
    }
    for (const [id, a] of Object.entries(prev.boxes)) {
        if (id in correspondence && correspondence[id] in next.boxes) continue;
        if (id in next.boxes) continue;
        frame.boxes[`leaving:${id}`] = { x: a[0], y: a[1], w: a[2], h: a[3], opacity: 1 - eased };
        frame.leaving.push(id);
    }
    frame.entering.sort();
    frame.leaving.sort();
    return frame;
}

/** Largest per-step displacement of shared nodes over an n-step playback. */
export function maxStepDisplacement(prev: LayoutPayload, next: LayoutPayload, steps: number): number {
    let worst = 0;
    let last: TransitionFrame | null = null;
    for (let i = 0; i <= steps; i++) {
        const frame = interpolateLayouts(prev, next, i / steps);
        if (last) {
            for (const [id, box] of Object.entries(frame.boxes)) {
                const before = last.boxes[id];
                if (!before || id.startsWith("leaving:")) continue;
                const dx = box.x - before.x;
                const dy = box.y - before.y;
                worst = Math.max(worst, Math.hypot(dx, dy));
            }
        }
        last = frame;
    }
    return worst;
}
