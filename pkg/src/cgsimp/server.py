"""HTTP+JSON session service over a directory of graph files.

Stateless JSON over HTTP/1.1; each mutation carries the client's revision and
is rejected with 409 when stale, so the UI can refetch and replay. Sessions
are independent; one lock per session serializes its mutations.
"""

from __future__ import annotations

import json
import os
import re
import threading
import urllib.parse
from http.server import BaseHTTPRequestHandler, ThreadingHTTPServer

from .errors import (
    GraphError,
    GraphSyntaxError,
    NotAMetaNodeError,
    NotExpandableError,
    SchemaError,
    UnknownNodeError,
    UnknownPileError,
    UnknownPortError,
)
from .ingest import parse_graph_file
from .layout import LayoutParams
from .session import Session, SessionOptions
from .svg import render_svg

DEFAULT_PORT = 8321
ENV_PORT = "CGS_PORT"


class GraphStore:
    """Graph files in a directory, parsed lazily and cached."""

    def __init__(self, directory: str):
        self.directory = directory
        self._cache = {}
        self._lock = threading.Lock()

    def names(self) -> list[str]:
        out = []
        for entry in sorted(os.listdir(self.directory)):
            if entry.endswith(".json"):
                out.append(entry[:-5])
        return out

    def load(self, name: str):
        if not re.fullmatch(r"[\w.-]+", name):
            raise FileNotFoundError(name)
        with self._lock:
            if name in self._cache:
                return self._cache[name]
        path = os.path.join(self.directory, name + ".json")
        with open(path, "rb") as fh:
            raw = parse_graph_file(fh.read())
        with self._lock:
            self._cache[name] = raw
        return raw


class SessionRegistry:
    def __init__(self):
        self._sessions: dict[str, tuple[Session, threading.Lock, str]] = {}
        self._lock = threading.Lock()
        self._counter = 0

    def create(self, session: Session, graph_name: str) -> str:
        with self._lock:
            self._counter += 1
            sid = f"s{self._counter:04d}"
            self._sessions[sid] = (session, threading.Lock(), graph_name)
        return sid

    def get(self, sid: str) -> tuple[Session, threading.Lock, str]:
        with self._lock:
            if sid not in self._sessions:
                raise KeyError(sid)
            return self._sessions[sid]


class ApiError(Exception):
    def __init__(self, status: int, message: str):
        super().__init__(message)
        self.status = status
        self.message = message


def _session_info(sid: str, session: Session, graph_name: str) -> dict:
    return {
        "session": sid,
        "graph": graph_name,
        "revision": session.revision,
        "options": {
            "cgm": session.options.cgm,
            "stacking": session.options.stacking,
            "module_threshold": session.options.module_threshold,
            "min_repeat": session.options.min_repeat,
        },
        "expanded": sorted(session.expanded),
    }


class Handler(BaseHTTPRequestHandler):
    store: GraphStore
    registry: SessionRegistry
    protocol_version = "HTTP/1.1"

    # -- plumbing -------------------------------------------------------------

    def log_message(self, fmt, *args):  # quiet by default
        pass

    def _send(self, status: int, payload, content_type="application/json") -> None:
        if content_type == "application/json":
            body = json.dumps(payload, indent=1).encode("utf-8")
        else:
            body = payload.encode("utf-8") if isinstance(payload, str) else payload
        self.send_response(status)
        self.send_header("Content-Type", content_type)
        self.send_header("Content-Length", str(len(body)))
        self.send_header("Access-Control-Allow-Origin", "*")
        self.send_header("Access-Control-Allow-Headers", "Content-Type")
        self.send_header("Access-Control-Allow-Methods", "GET, POST, OPTIONS")
        self.end_headers()
        self.wfile.write(body)

    def _send_raw(self, status: int, body: str, content_type: str) -> None:
        data = body.encode("utf-8")
        self.send_response(status)
        self.send_header("Content-Type", content_type)
        self.send_header("Content-Length", str(len(data)))
        self.send_header("Access-Control-Allow-Origin", "*")
        self.end_headers()
        self.wfile.write(data)

    def _error(self, status: int, message: str) -> None:
        self._send(status, {"error": message})

    def _read_json(self) -> dict:
        length = int(self.headers.get("Content-Length") or 0)
        raw = self.rfile.read(length) if length else b""
        if not raw:
            raise ApiError(400, "missing request body")
        try:
            doc = json.loads(raw.decode("utf-8"))
        except (UnicodeDecodeError, json.JSONDecodeError) as exc:
            raise ApiError(400, f"malformed JSON body: {exc}")
        if not isinstance(doc, dict):
            raise ApiError(400, "request body must be a JSON object")
        return doc

    def _session(self, sid: str):
        try:
            return self.registry.get(sid)
        except KeyError:
            raise ApiError(404, f"unknown session {sid!r}")

    # -- dispatch ---------------------------------------------------------------

    def do_OPTIONS(self):
        self._send(204, "", content_type="text/plain")

    def do_GET(self):
        try:
            self._route_get()
        except ApiError as exc:
            self._error(exc.status, exc.message)
        except GraphError as exc:
            self._error(400, str(exc))
        except Exception as exc:  # never crash the process
            self._error(500, f"internal error: {exc}")

    def do_POST(self):
        try:
            self._route_post()
        except ApiError as exc:
            self._error(exc.status, exc.message)
        except GraphError as exc:
            self._error(400, str(exc))
        except Exception as exc:
            self._error(500, f"internal error: {exc}")

    def _route_get(self):
        parsed = urllib.parse.urlparse(self.path)
        parts = [urllib.parse.unquote(p) for p in parsed.path.split("/") if p]
        query = urllib.parse.parse_qs(parsed.query)

        if parts == ["graphs"]:
            self._send(200, {"graphs": self.store.names()})
            return
        if len(parts) >= 2 and parts[0] == "sessions":
            sid = parts[1]
            session, lock, graph_name = self._session(sid)
            rest = parts[2:]
            if rest == []:
                self._send(200, _session_info(sid, session, graph_name))
                return
            if rest == ["visible"]:
                # pre-serialized and cached: repeated GETs are byte-identical
                self._send_raw(200, session.visible_json(), "application/json")
                return
            if rest == ["layout"]:
                result = session.layout()
                payload = result.to_json()
                payload["revision"] = session.revision
                self._send(200, payload)
                return
            if rest == ["svg"]:
                svg = render_svg(session.derive_visible(), session.layout())
                self._send(200, svg, content_type="image/svg+xml")
                return
            if rest == ["path"]:
                src = query.get("from", [None])[0]
                dst = query.get("to", [None])[0]
                if not src or not dst:
                    raise ApiError(400, "path requires from and to")
                try:
                    paths = session.find_path(src, dst)
                except UnknownNodeError as exc:
                    raise ApiError(404, str(exc))
                self._send(200, {"paths": paths, "revision": session.revision})
                return
            if rest == ["search"]:
                q = query.get("q", [""])[0]
                self._send(200, {"results": session.search(q), "revision": session.revision})
                return
            if len(rest) == 3 and rest[0] == "port" and rest[2] == "hidden":
                try:
                    ids = session.reveal_hidden(rest[1])
                except UnknownPortError as exc:
                    raise ApiError(404, str(exc))
                edges = {e.id: e.to_json() for e in session.derive_visible().edges}
                self._send(
                    200,
                    {
                        "port": rest[1],
                        "hidden_edges": [edges[i] for i in ids if i in edges],
                        "revision": session.revision,
                    },
                )
                return
            if len(rest) == 3 and rest[0] == "pile" and rest[2] == "members":
                try:
                    pile = session.pile_members(rest[1])
                except UnknownPileError as exc:
                    raise ApiError(404, str(exc))
                self._send(200, {"pile": pile.to_json(), "revision": session.revision})
                return
        raise ApiError(404, f"no such resource {parsed.path!r}")

    def _route_post(self):
        parsed = urllib.parse.urlparse(self.path)
        parts = [urllib.parse.unquote(p) for p in parsed.path.split("/") if p]

        if parts == ["sessions"]:
            doc = self._read_json()
            graph_name = doc.get("graph")
            if not isinstance(graph_name, str):
                raise ApiError(400, "field 'graph' (string) is required")
            try:
                raw = self.store.load(graph_name)
            except FileNotFoundError:
                raise ApiError(404, f"unknown graph {graph_name!r}")
            except (GraphSyntaxError, SchemaError) as exc:
                raise ApiError(400, f"graph file invalid: {exc}")
            opts = doc.get("options", {})
            if not isinstance(opts, dict):
                raise ApiError(400, "field 'options' must be an object")
            allowed = {"cgm", "stacking", "module_threshold", "min_repeat"}
            unknown = set(opts) - allowed
            if unknown:
                raise ApiError(400, f"unknown option {sorted(unknown)[0]!r}")
            try:
                options = SessionOptions(**opts)
            except (TypeError, ValueError) as exc:
                raise ApiError(400, f"invalid options: {exc}")
            session = Session(raw, options)
            sid = self.registry.create(session, graph_name)
            self._send(201, _session_info(sid, session, graph_name))
            return

        if len(parts) == 3 and parts[0] == "sessions" and parts[2] in ("expand", "collapse", "ungroup"):
            sid, action = parts[1], parts[2]
            session, lock, graph_name = self._session(sid)
            doc = self._read_json()
            path = doc.get("path")
            revision = doc.get("revision")
            if not isinstance(path, str):
                raise ApiError(400, "field 'path' (string) is required")
            if not isinstance(revision, int):
                raise ApiError(400, "field 'revision' (integer) is required")
            with lock:
                if revision != session.revision:
                    raise ApiError(409, f"stale revision {revision}; current is {session.revision}")
                try:
                    getattr(session, action)(path)
                except UnknownNodeError as exc:
                    raise ApiError(404, str(exc))
                except (NotAMetaNodeError, NotExpandableError) as exc:
                    raise ApiError(400, str(exc))
                self._send(200, {"revision": session.revision, "expanded": sorted(session.expanded)})
            return
        raise ApiError(404, f"no such resource {parsed.path!r}")


def make_server(graph_dir: str, host: str = "127.0.0.1", port: int | None = None) -> ThreadingHTTPServer:
    if port is None:
        port = int(os.environ.get(ENV_PORT, DEFAULT_PORT))
    if not os.path.isdir(graph_dir):
        raise OSError(f"graph directory {graph_dir!r} does not exist")
    handler = type("BoundHandler", (Handler,), {"store": GraphStore(graph_dir), "registry": SessionRegistry()})
    return ThreadingHTTPServer((host, port), handler)


def serve(graph_dir: str, host: str = "127.0.0.1", port: int | None = None) -> None:
    httpd = make_server(graph_dir, host, port)
    sa = httpd.socket.getsockname()
    print(f"cgsimp server listening on http://{sa[0]}:{sa[1]} (graphs: {graph_dir})", flush=True)
    try:
        httpd.serve_forever()
    except KeyboardInterrupt:
        pass
    finally:
        httpd.server_close()
