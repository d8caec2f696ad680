"""Walkthrough: the HTTP session service end to end.

Starts an in-process server over the bundled graph directory, then drives the
protocol a UI client would use: create a session, expand with revision checks,
fetch the visible graph and layout, reveal a port's hidden edges, find a path.
"""

import json
import threading
import urllib.parse
import urllib.request

from cgsimp.server import make_server
import cgsimp

GRAPH_DIR = cgsimp.__path__[0] + "/data"

httpd = make_server(GRAPH_DIR, host="127.0.0.1", port=0)
threading.Thread(target=httpd.serve_forever, daemon=True).start()
base = f"http://127.0.0.1:{httpd.socket.getsockname()[1]}"
print("server:", base)


def call(method, path, body=None):
    data = json.dumps(body).encode() if body is not None else None
    req = urllib.request.Request(base + path, data=data, method=method)
    with urllib.request.urlopen(req) as resp:
        return json.loads(resp.read())


print("graphs:", call("GET", "/graphs")["graphs"])

doc = call("POST", "/sessions", {"graph": "port_design", "options": {"module_threshold": 3}})
sid, rev = doc["session"], doc["revision"]
print("session:", sid, "revision:", rev)

for path in ("Main", "Main/network_train"):
    rev = call("POST", f"/sessions/{sid}/expand", {"path": path, "revision": rev})["revision"]
print("after expands, revision:", rev)

visible = call("GET", f"/sessions/{sid}/visible")
print("visible stats:", visible["stats"])
softmax_ports = [p for p in visible["ports"] if p["owner"] == "Main/network_train/softmax"]
pid = urllib.parse.quote(softmax_ports[0]["id"], safe="")
hidden = call("GET", f"/sessions/{sid}/port/{pid}/hidden")
print("hovering softmax port reveals:", [e["id"] for e in hidden["hidden_edges"]])

layout = call("GET", f"/sessions/{sid}/layout")
print("layout boxes:", len(layout["boxes"]))

doc = call("POST", "/sessions", {"graph": "lenet"})
sid2 = doc["session"]
q = urllib.parse.urlencode({"from": "backbone/Conv1", "to": "backbone/Conv2"})
paths = call("GET", f"/sessions/{sid2}/path?{q}")["paths"]
print("lenet Conv1 -> Conv2 paths:", len(paths))

httpd.shutdown()
