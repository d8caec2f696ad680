/**
 * SVG shell: paints a Scene into an <svg> element. Pure DOM construction;
 * interaction wiring lives in main.ts. Vector rendering is the baseline
 * backend of the renderer-agnostic scene.
 */

import type { Scene } from "./scene.js";

const NS = "http://www.w3.org/2000/svg";

function el(name: string, attrs: Record<string, string | number>): SVGElement {
    const node = document.createElementNS(NS, name);
    for (const [k, v] of Object.entries(attrs)) {
        node.setAttribute(k, String(v));
    }
    return node;
}

export function renderScene(scene: Scene, root: SVGGElement): void {
    while (root.firstChild) root.removeChild(root.firstChild);

    for (const rect of scene.rects) {
        if (rect.pile) {
            for (const k of [2, 1]) {
                const off = k * rect.pile.offset;
                root.appendChild(
                    el("rect", {
                        x: rect.x + off,
                        y: rect.y + off,
                        width: rect.w,
                        height: rect.h,
                        rx: rect.rx,
                        fill: "#ffffff",
                        stroke: rect.stroke,
                        "stroke-opacity": 0.45,
                    }),
                );
            }
        }
        const box = el("rect", {
            x: rect.x,
            y: rect.y,
            width: rect.w,
            height: rect.h,
            rx: rect.rx,
            fill: rect.highlight === "member" ? "#cfe0f5" : rect.fill,
            stroke: rect.highlight === "path" ? "#7a3fa8" : rect.stroke,
            "stroke-width": rect.highlight === "path" ? 2.4 : rect.strokeWidth,
            "data-node": rect.id,
            "data-container": rect.container ? "1" : "0",
        });
        if (rect.pile) box.setAttribute("data-pile", rect.pile.id);
        if (rect.warning) box.appendChild(elTitle(rect.warning));
        root.appendChild(box);
    }

    for (const path of scene.paths) {
        root.appendChild(
            el("path", {
                d: path.d,
                fill: "none",
                stroke: path.stroke,
                "stroke-width": path.width,
                "stroke-dasharray": path.dashed ? "4 3" : "none",
                "data-edge": path.id,
            }),
        );
    }

    for (const badge of scene.badges) {
        root.appendChild(
            el("rect", {
                x: badge.x - 4,
                y: badge.y - 4,
                width: 8,
                height: 8,
                fill: badge.corner === "bottom-left" ? "#e8d9a0" : "#cfe3cf",
                stroke: "#8a8a84",
                "data-badge": badge.id,
            }),
        );
    }

    for (const port of scene.ports) {
        root.appendChild(
            el("circle", {
                cx: port.x,
                cy: port.y,
                r: port.hovered ? port.radius + 1.5 : port.radius,
                fill: port.hovered ? "#ffe4cc" : "#ffffff",
                stroke: "#b05028",
                "stroke-width": port.moduleKind ? 1.6 : 1.0,
                "data-port": port.id,
            }),
        );
    }

    for (const text of scene.texts) {
        const t = el("text", {
            x: text.x,
            y: text.y,
            "text-anchor": text.anchor,
            "font-weight": text.bold ? "bold" : "normal",
            fill: text.color,
            "pointer-events": "none",
        });
        t.textContent = text.text;
        root.appendChild(t);
    }
}

function elTitle(text: string): SVGElement {
    const t = document.createElementNS(NS, "title");
    t.textContent = text;
    return t;
}
