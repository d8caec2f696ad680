/**
 * Scene construction: a pure function of (visible payload, layout payload,
 * view state). The scene is renderer-agnostic; the SVG shell just paints it.
 */

import type { LayoutPayload, VisiblePayload } from "./types.js";

export interface ViewState {
    hoverPort: string | null;
    hoverPile: string | null;
    revealedPorts: string[];
    selection: string[];
    pathMode: boolean;
    pathEdges: string[];
    pathNodes: string[];
}

export function initialViewState(): ViewState {
    return {
        hoverPort: null,
        hoverPile: null,
        revealedPorts: [],
        selection: [],
        pathMode: false,
        pathEdges: [],
        pathNodes: [],
    };
}

export interface SceneRect {
    id: string;
    x: number;
    y: number;
    w: number;
    h: number;
    rx: number;
    fill: string;
    stroke: string;
    strokeWidth: number;
    label: string;
    container: boolean;
    highlight: "none" | "member" | "selected" | "path";
    pile?: { id: string; repeat: number; offset: number };
    warning?: string;
}

export interface ScenePath {
    id: string;
    d: string;
    stroke: string;
    width: number;
    dashed: boolean;
    curve: boolean;
    highlight: "none" | "hover" | "path";
}

export interface ScenePort {
    id: string;
    x: number;
    y: number;
    radius: number;
    moduleKind: boolean;
    hovered: boolean;
}

export interface SceneBadge {
    id: string;
    x: number;
    y: number;
    corner: string;
}

export interface SceneText {
    id: string;
    x: number;
    y: number;
    text: string;
    anchor: "start" | "end";
    bold: boolean;
    color: string;
}

export interface Scene {
    rects: SceneRect[];
    paths: ScenePath[];
    ports: ScenePort[];
    badges: SceneBadge[];
    texts: SceneText[];
    warnings: string[];
}

const KIND_FILL: Record<string, string> = {
    operation: "#dce9f5",
    meta: "#f2f2ec",
    constant: "#e8d9a0",
    parameter: "#cfe3cf",
};
const CONTAINER_FILL = "#fbfbf8";
const UNKNOWN_FILL = "#d7d7d7";
const LAYER_STROKE: Record<string, string> = {
    CNNLayer: "#4878b0",
    RNNLayer: "#8b5fa8",
    FCLayer: "#3f8f5f",
    NormalLayer: "#8a8a84",
};
const EDGE_STROKE = "#6b6b64";
const HOVER_STROKE = "#e07b28"; // connected edges highlighted in orange
const MEMBER_FILL = "#cfe0f5"; // isomorphic members highlighted in blue
const PATH_STROKE = "#7a3fa8"; // path-finding highlight: bold purple

const PORT_RADIUS: Record<number, number> = { 1: 5, 2: 3.5 };
const PORT_RADIUS_DEFAULT = 2.5;

export function orthogonalPathD(points: [number, number][], arcs: { at: [number, number]; radius: number; in: [number, number]; out: [number, number] }[]): string {
    if (points.length === 0) return "";
    if (points.length === 2 || arcs.length === 0) {
        return "M " + points.map(([x, y]) => `${x} ${y}`).join(" L ");
    }
    const parts = [`M ${points[0][0]} ${points[0][1]}`];
    arcs.forEach((arc, i) => {
        const [bx, by] = points[i + 1];
        const r = arc.radius;
        const ax = bx - arc.in[0] * r;
        const ay = by - arc.in[1] * r;
        const cx = bx + arc.out[0] * r;
        const cy = by + arc.out[1] * r;
        const cross = arc.in[0] * arc.out[1] - arc.in[1] * arc.out[0];
        const sweep = cross > 0 ? 1 : 0;
        parts.push(`L ${ax} ${ay}`);
        parts.push(`A ${r} ${r} 0 0 ${sweep} ${cx} ${cy}`);
    });
    const last = points[points.length - 1];
    parts.push(`L ${last[0]} ${last[1]}`);
    return parts.join(" ");
}

function bezierD(a: [number, number], b: [number, number]): string {
    const dx = Math.max(Math.abs(b[0] - a[0]) / 2, 24);
    return `M ${a[0]} ${a[1]} C ${a[0] + dx} ${a[1]}, ${b[0] - dx} ${b[1]}, ${b[0]} ${b[1]}`;
}

/** Pure scene builder; never mutates its inputs and performs no I/O. */
export function buildScene(visible: VisiblePayload, layout: LayoutPayload, view: ViewState): Scene {
    const scene: Scene = { rects: [], paths: [], ports: [], badges: [], texts: [], warnings: [] };
    const pileMembers = new Set<string>();
    if (view.hoverPile) {
        for (const pile of visible.piles) {
            if (pile.id === view.hoverPile) {
                pile.representative.forEach((n) => pileMembers.add(n));
            }
        }
    }
    const pathNodeSet = new Set(view.pathNodes);
    const selected = new Set(view.selection);

    const describe = (path: string, kind: string, container: boolean, layerClass?: string, pile?: { id: string; repeat: number }) => {
        const box = layout.boxes[path];
        if (!box) return;
        const [x, y, w, h] = box;
        const known = container || kind in KIND_FILL;
        const rect: SceneRect = {
            id: path,
            x,
            y,
            w,
            h,
            rx: kind === "meta" || container ? 6 : 2,
            fill: container ? CONTAINER_FILL : known ? KIND_FILL[kind] : UNKNOWN_FILL,
            stroke: LAYER_STROKE[layerClass ?? ""] ?? "#5a5a55",
            strokeWidth: selected.has(path) ? 2.4 : 1.2,
            label: path.split("/").pop() ?? path,
            container,
            highlight: pileMembers.has(path)
                ? "member"
                : selected.has(path)
                ? "selected"
                : pathNodeSet.has(path)
                ? "path"
                : "none",
        };
        if (!known) {
            rect.warning = `unknown node kind ${kind!}`;
            scene.warnings.push(`${path}: unknown kind ${kind}`);
        }
        if (pile) {
            const mark = layout.piles[pile.id];
            rect.pile = { id: pile.id, repeat: pile.repeat, offset: mark ? mark.offset : 6 };
        }
        scene.rects.push(rect);
    };

    for (const container of visible.containers) {
        describe(container.path, container.kind, true, container.layer_class);
    }
    for (const node of visible.nodes) {
        describe(node.path, node.kind, false, node.layer_class, node.pile);
    }

    // visible routes; hidden edges appear only when their port is revealed
    const revealed = new Set<string>(view.revealedPorts);
    if (view.hoverPort) revealed.add(view.hoverPort);
    const routeById = new Map(layout.routes.map((r) => [r.edge, r]));
    const pathEdges = new Set(view.pathEdges);
    for (const edge of visible.edges) {
        if (edge.hidden) continue;
        const route = routeById.get(edge.id);
        if (!route) continue;
        const touchesHover =
            view.hoverPort !== null && (edge.src.port === view.hoverPort || edge.dst.port === view.hoverPort);
        scene.paths.push({
            id: edge.id,
            d: orthogonalPathD(route.points, route.arcs),
            stroke: pathEdges.has(edge.id) ? PATH_STROKE : touchesHover ? HOVER_STROKE : EDGE_STROKE,
            width: pathEdges.has(edge.id) ? 2.8 : touchesHover ? 2.2 : 1.2,
            dashed: false,
            curve: false,
            highlight: pathEdges.has(edge.id) ? "path" : touchesHover ? "hover" : "none",
        });
    }
    for (const edge of visible.edges) {
        if (!edge.hidden) continue;
        const shown =
            (edge.src.port !== undefined && revealed.has(edge.src.port)) ||
            (edge.dst.port !== undefined && revealed.has(edge.dst.port));
        if (!shown) continue;
        const a = edge.src.port ? layout.ports[edge.src.port] : undefined;
        const b = edge.dst.port ? layout.ports[edge.dst.port] : undefined;
        if (!a || !b) continue;
        scene.paths.push({
            id: edge.id,
            d: bezierD(a, b),
            stroke: HOVER_STROKE,
            width: 1.6,
            dashed: true,
            curve: true,
            highlight: "hover",
        });
    }

    for (const port of visible.ports) {
        const anchor = layout.ports[port.id];
        if (!anchor) continue;
        scene.ports.push({
            id: port.id,
            x: anchor[0],
            y: anchor[1],
            radius: PORT_RADIUS[port.level] ?? PORT_RADIUS_DEFAULT,
            moduleKind: port.kind === "module",
            hovered: view.hoverPort === port.id,
        });
    }

    for (const [dataId, badge] of Object.entries(layout.badges)) {
        scene.badges.push({ id: dataId, x: badge.point[0], y: badge.point[1], corner: badge.corner });
    }

    for (const rect of scene.rects) {
        scene.texts.push({
            id: `label:${rect.id}`,
            x: rect.x + 6,
            y: rect.y + 13,
            text: rect.label,
            anchor: "start",
            bold: false,
            color: "#33332f",
        });
        if (rect.pile) {
            scene.texts.push({
                id: `pile:${rect.id}`,
                x: rect.x + rect.w - 2,
                y: rect.y - 3,
                text: `x${rect.pile.repeat}`,
                anchor: "end",
                bold: true,
                color: "#b05028",
            });
        }
    }
    return scene;
}
