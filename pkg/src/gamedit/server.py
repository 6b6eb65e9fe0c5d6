"""Local HTTP endpoint: POST /api for protocol messages, GET for UI assets.

One served model means one editing session; message handling is serialized
through a single lock, which is the session's command queue.
"""

from __future__ import annotations

import errno
import json
import mimetypes
import threading
from http.server import BaseHTTPRequestHandler, ThreadingHTTPServer
from pathlib import Path
from typing import Optional

from .protocol import SessionProtocol
from .session import EditorSession

_FALLBACK_PAGE = """<!doctype html>
<html><head><meta charset="utf-8"><title>gamedit</title></head>
<body><h1>gamedit session</h1>
<p>No UI bundle is configured. POST JSON messages to <code>/api</code>,
e.g. <code>{"type": "ListFeatures"}</code>.</p></body></html>
"""


class PortInUse(OSError):
    def __init__(self, host: str, port: int):
        super().__init__(f"cannot listen on {host}:{port}: address already in use")


class EditorServer(ThreadingHTTPServer):
    daemon_threads = True

    def __init__(self, session: EditorSession, *, host: str = "127.0.0.1",
                 port: int = 0, ui_dir: Optional[Path] = None,
                 save_path: Optional[Path] = None, quiet: bool = True):
        self.protocol = SessionProtocol(session, save_path=save_path)
        self.ui_dir = Path(ui_dir).resolve() if ui_dir is not None else None
        self.command_lock = threading.Lock()
        self.quiet = quiet
        try:
            super().__init__((host, port), _Handler)
        except OSError as e:
            if e.errno == errno.EADDRINUSE:
                raise PortInUse(host, port) from None
            raise

    @property
    def url(self) -> str:
        host, port = self.server_address[:2]
        return f"http://{host}:{port}"


class _Handler(BaseHTTPRequestHandler):
    server: EditorServer

    def log_message(self, fmt, *args):
        if not self.server.quiet:
            super().log_message(fmt, *args)

    def _send_json(self, payload: dict, status: int = 200) -> None:
        body = json.dumps(payload).encode("utf-8")
        self.send_response(status)
        self.send_header("Content-Type", "application/json; charset=utf-8")
        self.send_header("Content-Length", str(len(body)))
        self.end_headers()
        self.wfile.write(body)

    def do_POST(self):
        if self.path != "/api":
            self._send_json({"ok": False, "error": {"type": "NotFound",
                                                    "message": "POST /api only"}}, 404)
            return
        length = int(self.headers.get("Content-Length") or 0)
        raw = self.rfile.read(length)
        try:
            message = json.loads(raw.decode("utf-8"))
        except (UnicodeDecodeError, json.JSONDecodeError):
            self._send_json({"ok": False, "error": {"type": "BadRequest",
                                                    "message": "body must be JSON"}}, 400)
            return
        with self.server.command_lock:
            response = self.server.protocol.handle(message)
        self._send_json(response)

    def do_GET(self):
        path = self.path.split("?", 1)[0]
        if path == "/api":
            self._send_json({"ok": False, "error": {"type": "BadRequest",
                                                    "message": "use POST for /api"}}, 405)
            return
        if self.server.ui_dir is None:
            if path in ("/", "/index.html"):
                body = _FALLBACK_PAGE.encode("utf-8")
                self.send_response(200)
                self.send_header("Content-Type", "text/html; charset=utf-8")
                self.send_header("Content-Length", str(len(body)))
                self.end_headers()
                self.wfile.write(body)
            else:
                self.send_error(404)
            return
        rel = path.lstrip("/") or "index.html"
        target = (self.server.ui_dir / rel).resolve()
        if self.server.ui_dir not in target.parents or not target.is_file():
            self.send_error(404)
            return
        content_type = mimetypes.guess_type(str(target))[0] or "application/octet-stream"
        body = target.read_bytes()
        self.send_response(200)
        self.send_header("Content-Type", content_type)
        self.send_header("Content-Length", str(len(body)))
        self.end_headers()
        self.wfile.write(body)


def make_server(session: EditorSession, **kwargs) -> EditorServer:
    return EditorServer(session, **kwargs)
