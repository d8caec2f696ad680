/**
 * Explorer state machine: one session, its view state, and the interaction
 * loop (expand/collapse/ungroup with revision replay, hover reveals, piles,
 * path-finding mode, search). At most one mutation is in flight.
 */

import { ApiClient, ApiError } from "./api.js";
import { buildScene, initialViewState, Scene, ViewState } from "./scene.js";
import type { LayoutPayload, PathResult, SearchHit, SessionOptionsInput, VisiblePayload } from "./types.js";

export class Explorer {
    sessionId = "";
    revision = 0;
    graph = "";
    visible: VisiblePayload | null = null;
    layout: LayoutPayload | null = null;
    previousLayout: LayoutPayload | null = null;
    view: ViewState = initialViewState();
    private mutating = false;

    constructor(public api: ApiClient) {}

    async open(graph: string, options?: SessionOptionsInput): Promise<void> {
        const info = await this.api.createSession(graph, options);
        this.sessionId = info.session;
        this.revision = info.revision;
        this.graph = info.graph;
        this.view = initialViewState();
        await this.refresh();
    }

    async refresh(): Promise<void> {
        const visible = await this.api.visible(this.sessionId);
        const layout = await this.api.layout(this.sessionId);
        this.previousLayout = this.layout;
        this.visible = visible;
        this.layout = layout;
        this.revision = visible.revision;
        // drop view references that no longer resolve
        const portIds = new Set(visible.ports.map((p) => p.id));
        this.view.revealedPorts = this.view.revealedPorts.filter((p) => portIds.has(p));
        if (this.view.hoverPort && !portIds.has(this.view.hoverPort)) this.view.hoverPort = null;
        const pileIds = new Set(visible.piles.map((p) => p.id));
        if (this.view.hoverPile && !pileIds.has(this.view.hoverPile)) this.view.hoverPile = null;
    }

    private async mutate(action: "expand" | "collapse" | "ungroup", path: string): Promise<void> {
        if (this.mutating) throw new Error("mutation already in flight");
        this.mutating = true;
        try {
            try {
                const out = await this.api[action](this.sessionId, path, this.revision);
                this.revision = out.revision;
            } catch (err) {
                if (err instanceof ApiError && err.status === 409) {
                    // stale revision: refetch, then replay once
                    const info = await this.api.sessionInfo(this.sessionId);
                    this.revision = info.revision;
                    const out = await this.api[action](this.sessionId, path, this.revision);
                    this.revision = out.revision;
                } else {
                    throw err;
                }
            }
            await this.refresh();
            if (this.view.pathMode && this.view.selection.length === 2) {
                await this.runPathQuery();
            } else {
                this.view.pathEdges = [];
                this.view.pathNodes = [];
            }
        } finally {
            this.mutating = false;
        }
    }

    isExpanded(path: string): boolean {
        return this.visible?.containers.some((c) => c.path === path) ?? false;
    }

    /** Double-click semantics: expanded metanodes collapse, collapsed expand. */
    async toggleNode(path: string): Promise<void> {
        if (this.isExpanded(path)) {
            await this.mutate("collapse", path);
        } else {
            await this.mutate("expand", path);
        }
    }

    async ungroup(path: string): Promise<void> {
        await this.mutate("ungroup", path);
    }

    hoverPort(portId: string | null): void {
        this.view.hoverPort = portId;
    }

    /** Pin or unpin a port's hidden edges (click), surviving unhover. */
    toggleReveal(portId: string): void {
        const at = this.view.revealedPorts.indexOf(portId);
        if (at >= 0) this.view.revealedPorts.splice(at, 1);
        else this.view.revealedPorts.push(portId);
    }

    hoverPile(pileId: string | null): void {
        this.view.hoverPile = pileId;
    }

    /** Hidden-edge ids the scene shows for a hovered port (server-reported). */
    revealedEdgeIds(portId: string): string[] {
        if (!this.visible) return [];
        const port = this.visible.ports.find((p) => p.id === portId);
        return port ? [...port.hidden_edges] : [];
    }

    pileMemberIds(pileId: string): string[] {
        const pile = this.visible?.piles.find((p) => p.id === pileId);
        return pile ? [...pile.members] : [];
    }

    setPathMode(on: boolean): void {
        this.view.pathMode = on;
        if (!on) {
            this.view.selection = [];
            this.view.pathEdges = [];
            this.view.pathNodes = [];
        }
    }

    /** Select up to two endpoints; the second selection fires the query. */
    async selectForPath(path: string): Promise<PathResult[]> {
        if (!this.view.pathMode) return [];
        if (this.view.selection.includes(path)) {
            this.view.selection = this.view.selection.filter((p) => p !== path);
            this.view.pathEdges = [];
            this.view.pathNodes = [];
            return [];
        }
        if (this.view.selection.length === 2) {
            this.view.selection = [];
        }
        this.view.selection.push(path);
        if (this.view.selection.length < 2) return [];
        return this.runPathQuery();
    }

    private async runPathQuery(): Promise<PathResult[]> {
        const [from, to] = this.view.selection;
        const out = await this.api.findPath(this.sessionId, from, to);
        const best = out.paths[0];
        this.view.pathEdges = best ? [...best.edges] : [];
        this.view.pathNodes = best ? [...best.nodes] : [];
        return out.paths;
    }

    async search(query: string): Promise<SearchHit[]> {
        const out = await this.api.search(this.sessionId, query);
        return out.results;
    }

    scene(): Scene {
        if (!this.visible || !this.layout) {
            return { rects: [], paths: [], ports: [], badges: [], texts: [], warnings: [] };
        }
        return buildScene(this.visible, this.layout, this.view);
    }

    /** Canonical scene serialization for comparisons. */
    snapshot(): string {
        return JSON.stringify(sortKeysDeep(this.scene()));
    }
}

function sortKeysDeep(value: unknown): unknown {
    if (Array.isArray(value)) return value.map(sortKeysDeep);
    if (value && typeof value === "object") {
        const out: Record<string, unknown> = {};
        for (const key of Object.keys(value as Record<string, unknown>).sort()) {
            out[key] = sortKeysDeep((value as Record<string, unknown>)[key]);
        }
        return out;
    }
    return value;
}
