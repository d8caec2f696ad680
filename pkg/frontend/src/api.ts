/** Typed client for the session service. */

import type {
    LayoutPayload,
    PathResult,
    PileInfo,
    SearchHit,
    SessionInfo,
    SessionOptionsInput,
    VisibleEdge,
    VisiblePayload,
} from "./types.js";

export class ApiError extends Error {
    constructor(public status: number, message: string) {
        super(message);
    }
}

async function request<T>(url: string, init?: RequestInit): Promise<T> {
    const resp = await fetch(url, init);
    const text = await resp.text();
    let body: unknown = null;
    try {
        body = text ? JSON.parse(text) : null;
    } catch {
        body = null;
    }
    if (!resp.ok) {
        const message =
            body && typeof body === "object" && "error" in (body as Record<string, unknown>)
                ? String((body as Record<string, unknown>).error)
                : `HTTP ${resp.status}`;
        throw new ApiError(resp.status, message);
    }
    return body as T;
}

export class ApiClient {
    constructor(public base: string) {}

    private url(path: string): string {
        return this.base.replace(/\/$/, "") + path;
    }

    graphs(): Promise<{ graphs: string[] }> {
        return request(this.url("/graphs"));
    }

    createSession(graph: string, options?: SessionOptionsInput): Promise<SessionInfo> {
        return request(this.url("/sessions"), {
            method: "POST",
            headers: { "Content-Type": "application/json" },
            body: JSON.stringify(options ? { graph, options } : { graph }),
        });
    }

    sessionInfo(id: string): Promise<SessionInfo> {
        return request(this.url(`/sessions/${id}`));
    }

    visible(id: string): Promise<VisiblePayload> {
        return request(this.url(`/sessions/${id}/visible`));
    }

    layout(id: string): Promise<LayoutPayload> {
        return request(this.url(`/sessions/${id}/layout`));
    }

    private mutate(id: string, action: "expand" | "collapse" | "ungroup", path: string, revision: number) {
        return request<{ revision: number; expanded: string[] }>(this.url(`/sessions/${id}/${action}`), {
            method: "POST",
            headers: { "Content-Type": "application/json" },
            body: JSON.stringify({ path, revision }),
        });
    }

    expand(id: string, path: string, revision: number) {
        return this.mutate(id, "expand", path, revision);
    }

    collapse(id: string, path: string, revision: number) {
        return this.mutate(id, "collapse", path, revision);
    }

    ungroup(id: string, path: string, revision: number) {
        return this.mutate(id, "ungroup", path, revision);
    }

    findPath(id: string, from: string, to: string): Promise<{ paths: PathResult[]; revision: number }> {
        const q = new URLSearchParams({ from, to });
        return request(this.url(`/sessions/${id}/path?${q.toString()}`));
    }

    search(id: string, query: string): Promise<{ results: SearchHit[]; revision: number }> {
        const q = new URLSearchParams({ q: query });
        return request(this.url(`/sessions/${id}/search?${q.toString()}`));
    }

    portHidden(id: string, portId: string): Promise<{ port: string; hidden_edges: VisibleEdge[]; revision: number }> {
        return request(this.url(`/sessions/${id}/port/${encodeURIComponent(portId)}/hidden`));
    }

    pileMembers(id: string, pileId: string): Promise<{ pile: PileInfo; revision: number }> {
        return request(this.url(`/sessions/${id}/pile/${encodeURIComponent(pileId)}/members`));
    }
}
