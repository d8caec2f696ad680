/**
 * End-to-end acceptance of the explorer against the real session service:
 * expand -> collapse restores the prior scene; hovering a port reveals exactly
 * the server-reported hidden edges; hovering a pile highlights exactly the
 * member set; path mode reproduces the Conv1 -> Conv2 highlight on the lenet
 * fixture. The server is the Python package's own, spawned as a subprocess.
 */

import { strict as assert } from "node:assert";
import { after, before, test } from "node:test";
import { spawn, ChildProcess } from "node:child_process";
import { fileURLToPath } from "node:url";
import path from "node:path";

import { ApiClient } from "../src/api.js";
import { Explorer } from "../src/state.js";

const here = path.dirname(fileURLToPath(import.meta.url));
const GRAPH_DIR = path.resolve(here, "../../../src/cgsimp/data");

let server: ChildProcess;
let api: ApiClient;

before(async () => {
    server = spawn("python3", ["-m", "cgsimp.cli", "serve", "--graphs", GRAPH_DIR, "--port", "0"], {
        stdio: ["ignore", "pipe", "inherit"],
    });
    const base = await new Promise<string>((resolve, reject) => {
        const timer = setTimeout(() => reject(new Error("server did not start")), 10_000);
        server.stdout!.on("data", (chunk: Buffer) => {
            const match = /listening on (http:\/\/[\d.]+:\d+)/.exec(chunk.toString());
            if (match) {
                clearTimeout(timer);
                resolve(match[1]);
            }
        });
        server.on("exit", (code) => reject(new Error(`server exited early (${code})`)));
    });
    api = new ApiClient(base);
});

after(() => {
    server.kill();
});

test("expand then collapse restores the prior scene", async () => {
    const explorer = new Explorer(api);
    await explorer.open("lenet");
    const initial = explorer.snapshot();
    await explorer.toggleNode("backbone"); // expand
    assert.notEqual(explorer.snapshot(), initial);
    await explorer.toggleNode("backbone"); // collapse
    assert.equal(explorer.snapshot(), initial);
});

test("hovering a port reveals exactly the server-reported hidden edges", async () => {
    const explorer = new Explorer(api);
    await explorer.open("port_design", { module_threshold: 3 });
    await explorer.toggleNode("Main");
    await explorer.toggleNode("Main/network_train");

    const softmaxPorts = explorer.visible!.ports.filter((p) => p.owner === "Main/network_train/softmax");
    assert.ok(softmaxPorts.length >= 1);
    const portId = softmaxPorts[0].id;

    const serverSide = await api.portHidden(explorer.sessionId, portId);
    const expected = serverSide.hidden_edges.map((e) => e.id).sort();
    assert.ok(expected.length >= 1);

    explorer.hoverPort(portId);
    const scene = explorer.scene();
    const revealedCurves = scene.paths.filter((p) => p.curve).map((p) => p.id).sort();
    assert.deepEqual(revealedCurves, expected);
    assert.deepEqual(explorer.revealedEdgeIds(portId).sort(), expected);

    explorer.hoverPort(null);
    const after = explorer.scene();
    assert.deepEqual(after.paths.filter((p) => p.curve), []);
});

test("hovering a pile highlights exactly the member set", async () => {
    const explorer = new Explorer(api);
    await explorer.open("iso_branches");
    await explorer.toggleNode("block");

    const piled = explorer.visible!.nodes.filter((n) => n.pile);
    assert.ok(piled.length >= 1);
    const pileId = piled[0].pile!.id;

    const serverSide = await api.pileMembers(explorer.sessionId, pileId);
    assert.deepEqual(explorer.pileMemberIds(pileId).sort(), [...serverSide.pile.members].sort());
    assert.equal(serverSide.pile.repeat, serverSide.pile.members.length);

    explorer.hoverPile(pileId);
    const scene = explorer.scene();
    const highlighted = scene.rects.filter((r) => r.highlight === "member").map((r) => r.id).sort();
    assert.deepEqual(highlighted, [...serverSide.pile.representative].sort());

    explorer.hoverPile(null);
    assert.deepEqual(
        explorer.scene().rects.filter((r) => r.highlight === "member"),
        [],
    );
});

test("path mode reproduces the Conv1 -> Conv2 highlight on lenet", async () => {
    const explorer = new Explorer(api);
    await explorer.open("lenet");
    await explorer.toggleNode("backbone");

    explorer.setPathMode(true);
    await explorer.selectForPath("backbone/Conv1");
    const paths = await explorer.selectForPath("backbone/Conv2");
    assert.ok(paths.length >= 1, "a Conv1 -> Conv2 path exists");

    const serverSide = await api.findPath(explorer.sessionId, "backbone/Conv1", "backbone/Conv2");
    assert.deepEqual(explorer.view.pathEdges, serverSide.paths[0].edges);

    const scene = explorer.scene();
    const highlighted = scene.paths.filter((p) => p.highlight === "path").map((p) => p.id).sort();
    assert.deepEqual(highlighted, [...serverSide.paths[0].edges].sort());
    for (const p of scene.paths) {
        if (p.highlight === "path") {
            assert.equal(p.stroke, "#7a3fa8"); // bold purple per the reference design
            assert.ok(p.width > 2);
        }
    }

    // reverse direction: no path, no highlight
    explorer.setPathMode(true);
    await explorer.selectForPath("backbone/Conv2");
    const reverse = await explorer.selectForPath("backbone/Conv1");
    assert.deepEqual(reverse, []);
    assert.deepEqual(explorer.view.pathEdges, []);
});

test("stale revisions are refetched and replayed", async () => {
    const explorer = new Explorer(api);
    await explorer.open("bert_like");
    // another client mutates the same session behind our back
    await api.expand(explorer.sessionId, "Main", explorer.revision);
    // the explorer still holds the old revision; the mutation must recover
    await explorer.toggleNode("Gradients");
    assert.ok(explorer.visible!.containers.some((c) => c.path === "Gradients"));
    assert.ok(explorer.visible!.containers.some((c) => c.path === "Main"));
});

test("the client computes nothing itself: scene ids come from the payloads", async () => {
    const explorer = new Explorer(api);
    await explorer.open("port_design", { module_threshold: 3 });
    await explorer.toggleNode("Main");
    const scene = explorer.scene();
    const payloadNodes = new Set([
        ...explorer.visible!.nodes.map((n) => n.path),
        ...explorer.visible!.containers.map((c) => c.path),
    ]);
    for (const rect of scene.rects) {
        assert.ok(payloadNodes.has(rect.id));
    }
    const payloadEdges = new Set(explorer.visible!.edges.map((e) => e.id));
    for (const p of scene.paths) {
        assert.ok(payloadEdges.has(p.id));
    }
});
