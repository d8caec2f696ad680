/**
 * Wire types of the session service. The client never computes simplification
 * or layout itself; these payloads are consumed verbatim.
 */

export interface PileRef {
    id: string;
    repeat: number;
    members: string[];
}

export interface VisibleNode {
    path: string;
    kind: string;
    id?: string;
    op_type?: string;
    layer_class?: string;
    descendants?: number;
    module_level?: number;
    pile?: PileRef;
    attachments?: { constants: string[]; parameters: string[] };
}

export interface VisibleContainer {
    path: string;
    kind: string;
    expanded: boolean;
    descendants: number;
    module_level?: number;
    layer_class?: string;
}

export interface EdgeEnd {
    node: string;
    port?: string;
}

export interface VisibleEdge {
    id: string;
    kind: string;
    src: EdgeEnd;
    dst: EdgeEnd;
    contributors_count: number;
    hidden: boolean;
}

export interface PortInfo {
    id: string;
    owner: string;
    side: "in" | "out";
    level: number;
    kind: "module" | "nonmodule";
    hidden_edges: string[];
}

export interface PileInfo {
    id: string;
    repeat: number;
    members: string[];
    member_nodes: string[][];
    representative: string[];
}

export interface VisiblePayload {
    nodes: VisibleNode[];
    containers: VisibleContainer[];
    edges: VisibleEdge[];
    ports: PortInfo[];
    piles: PileInfo[];
    stats: { node_count: number; edge_count: number };
    revision: number;
}

export interface ArcInfo {
    at: [number, number];
    radius: number;
    in: [number, number];
    out: [number, number];
}

export interface RouteInfo {
    edge: string;
    points: [number, number][];
    arcs: ArcInfo[];
}

export interface BadgeInfo {
    op: string;
    corner: "bottom-left" | "bottom-right";
    index: number;
    point: [number, number];
}

export interface PileMark {
    repeat: number;
    offset: number;
    badge: [number, number];
    nodes: string[];
}

export interface LayoutPayload {
    boxes: Record<string, [number, number, number, number]>;
    ports: Record<string, [number, number]>;
    routes: RouteInfo[];
    badges: Record<string, BadgeInfo>;
    piles: Record<string, PileMark>;
    correspondence: Record<string, string>;
    revision: number;
}

export interface SessionInfo {
    session: string;
    graph: string;
    revision: number;
    options: {
        cgm: boolean;
        stacking: boolean;
        module_threshold: number;
        min_repeat: number;
    };
    expanded: string[];
}

export interface PathResult {
    nodes: string[];
    edges: string[];
    length: number;
}

export interface SearchHit {
    path: string;
    profile: Record<string, unknown> & { kind: string; visible?: boolean; ports?: string[] };
}

export interface SessionOptionsInput {
    cgm?: boolean;
    stacking?: boolean;
    module_threshold?: number;
    min_repeat?: number;
}
