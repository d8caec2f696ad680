/**
 * Browser bootstrap: model picker, pan/zoom canvas, interaction wiring, and
 * the nonlinear transition player between consecutive layouts.
 */

import { ApiClient } from "./api.js";
import { renderScene } from "./render_svg.js";
import { interpolateLayouts } from "./transition.js";
import { Explorer } from "./state.js";
import type { SearchHit } from "./types.js";

const DEFAULT_BASE = `${location.protocol}//${location.hostname || "127.0.0.1"}:8321`;
const TRANSITION_MS = 420;

function byId<T extends HTMLElement>(id: string): T {
    const node = document.getElementById(id);
    if (!node) throw new Error(`missing #${id}`);
    return node as T;
}

async function boot(): Promise<void> {
    const api = new ApiClient((window as unknown as { CGS_BASE?: string }).CGS_BASE ?? DEFAULT_BASE);
    const explorer = new Explorer(api);

    const svg = byId<HTMLElement>("canvas") as unknown as SVGSVGElement;
    const world = byId<HTMLElement>("world") as unknown as SVGGElement;
    const modelSelect = byId<HTMLSelectElement>("model");
    const cgmToggle = byId<HTMLInputElement>("cgm");
    const pathToggle = byId<HTMLInputElement>("pathmode");
    const searchBox = byId<HTMLInputElement>("search");
    const resultsPanel = byId<HTMLDivElement>("results");
    const profilePanel = byId<HTMLDivElement>("profile");
    const statsLine = byId<HTMLDivElement>("stats");

    const camera = { x: 20, y: 20, zoom: 1 };
    function applyCamera(): void {
        world.setAttribute("transform", `translate(${camera.x} ${camera.y}) scale(${camera.zoom})`);
    }

    let animation: number | null = null;
    function draw(animate: boolean): void {
        if (animation !== null) cancelAnimationFrame(animation);
        const scene = explorer.scene();
        const prev = explorer.previousLayout;
        const next = explorer.layout;
        if (!animate || !prev || !next) {
            renderScene(scene, world);
            applyCamera();
            updateStats();
            return;
        }
        const started = performance.now();
        const tick = (now: number) => {
            const t = Math.min((now - started) / TRANSITION_MS, 1);
            // frames are inserted nonlinearly: interpolateLayouts applies the
            // ease-in-out cubic internally
            const frame = interpolateLayouts(prev, next, t);
            renderScene(explorer.scene(), world);
            for (const rectEl of Array.from(world.querySelectorAll("rect[data-node]"))) {
                const id = rectEl.getAttribute("data-node")!;
                const box = frame.boxes[id];
                if (box) {
                    rectEl.setAttribute("x", String(box.x));
                    rectEl.setAttribute("y", String(box.y));
                    rectEl.setAttribute("opacity", String(box.opacity));
                }
            }
            if (t < 1) {
                animation = requestAnimationFrame(tick);
            } else {
                animation = null;
                renderScene(explorer.scene(), world);
            }
        };
        animation = requestAnimationFrame(tick);
        applyCamera();
        updateStats();
    }

    function updateStats(): void {
        const stats = explorer.visible?.stats;
        statsLine.textContent = stats
            ? `${explorer.graph}: ${stats.node_count} nodes, ${stats.edge_count} edges (rev ${explorer.revision})`
            : "";
    }

    async function openModel(): Promise<void> {
        const graph = modelSelect.value;
        if (!graph) return;
        await explorer.open(graph, { cgm: cgmToggle.checked });
        draw(false);
    }

    // model list
    const listing = await api.graphs();
    for (const name of listing.graphs) {
        const option = document.createElement("option");
        option.value = name;
        option.textContent = name;
        modelSelect.appendChild(option);
    }
    modelSelect.addEventListener("change", () => void openModel());
    cgmToggle.addEventListener("change", () => void openModel());
    pathToggle.addEventListener("change", () => {
        explorer.setPathMode(pathToggle.checked);
        draw(false);
    });

    // pan/zoom
    let dragging: { x: number; y: number } | null = null;
    svg.addEventListener("mousedown", (ev) => {
        if ((ev.target as Element).tagName === "svg") dragging = { x: ev.clientX, y: ev.clientY };
    });
    window.addEventListener("mousemove", (ev) => {
        if (!dragging) return;
        camera.x += ev.clientX - dragging.x;
        camera.y += ev.clientY - dragging.y;
        dragging = { x: ev.clientX, y: ev.clientY };
        applyCamera();
    });
    window.addEventListener("mouseup", () => (dragging = null));
    svg.addEventListener("wheel", (ev) => {
        ev.preventDefault();
        const factor = ev.deltaY < 0 ? 1.12 : 1 / 1.12;
        camera.zoom = Math.min(Math.max(camera.zoom * factor, 0.1), 8);
        applyCamera();
    });

    // node interactions (delegated)
    svg.addEventListener("dblclick", (ev) => {
        const target = (ev.target as Element).closest("[data-node]");
        if (!target) return;
        const path = target.getAttribute("data-node")!;
        void explorer.toggleNode(path).then(() => draw(true)).catch((err) => console.warn(err));
    });
    svg.addEventListener("contextmenu", (ev) => {
        const target = (ev.target as Element).closest("[data-node]");
        if (!target) return;
        ev.preventDefault();
        const path = target.getAttribute("data-node")!;
        void explorer.ungroup(path).then(() => draw(true)).catch((err) => console.warn(err));
    });
    svg.addEventListener("click", (ev) => {
        const portEl = (ev.target as Element).closest("[data-port]");
        if (portEl) {
            explorer.toggleReveal(portEl.getAttribute("data-port")!);
            draw(false);
            return;
        }
        const nodeEl = (ev.target as Element).closest("[data-node]");
        if (nodeEl && explorer.view.pathMode) {
            void explorer.selectForPath(nodeEl.getAttribute("data-node")!).then(() => draw(false));
        }
    });
    svg.addEventListener("mouseover", (ev) => {
        const portEl = (ev.target as Element).closest("[data-port]");
        if (portEl) {
            explorer.hoverPort(portEl.getAttribute("data-port")!);
            draw(false);
            return;
        }
        const pileEl = (ev.target as Element).closest("[data-pile]");
        if (pileEl) {
            explorer.hoverPile(pileEl.getAttribute("data-pile")!);
            draw(false);
        }
    });
    svg.addEventListener("mouseout", (ev) => {
        const el = ev.target as Element;
        if (el.closest("[data-port]") || el.closest("[data-pile]")) {
            explorer.hoverPort(null);
            explorer.hoverPile(null);
            draw(false);
        }
    });

    // search focusing the node and showing its profile
    searchBox.addEventListener("change", () => {
        void explorer.search(searchBox.value).then((hits) => {
            resultsPanel.innerHTML = "";
            hits.slice(0, 30).forEach((hit) => {
                const row = document.createElement("div");
                row.className = "hit";
                row.textContent = hit.path;
                row.addEventListener("click", () => showProfile(hit));
                resultsPanel.appendChild(row);
            });
        });
    });

    function showProfile(hit: SearchHit): void {
        profilePanel.innerHTML = "";
        const title = document.createElement("h3");
        title.textContent = hit.path;
        profilePanel.appendChild(title);
        const list = document.createElement("dl");
        for (const [key, value] of Object.entries(hit.profile)) {
            const dt = document.createElement("dt");
            dt.textContent = key;
            const dd = document.createElement("dd");
            dd.textContent = JSON.stringify(value);
            list.appendChild(dt);
            list.appendChild(dd);
        }
        profilePanel.appendChild(list);
        const box = explorer.layout?.boxes[hit.path];
        if (box) {
            camera.x = 40 - box[0] * camera.zoom;
            camera.y = 40 - box[1] * camera.zoom;
            applyCamera();
        }
    }

    if (listing.graphs.length) {
        modelSelect.value = listing.graphs.includes("lenet") ? "lenet" : listing.graphs[0];
        await openModel();
    }
}

window.addEventListener("load", () => {
    void boot().catch((err) => {
        const stats = document.getElementById("stats");
        if (stats) stats.textContent = `failed to reach the server: ${err}`;
    });
});
