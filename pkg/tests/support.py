"""Instrumented local HTTP server used by crawler, CLI and acceptance tests."""

from __future__ import annotations

import threading
import time
from dataclasses import dataclass
from http.server import BaseHTTPRequestHandler, ThreadingHTTPServer


@dataclass
class Route:
    status: int = 200
    body: bytes = b""
    content_type: str = "text/html; charset=utf-8"
    delay_s: float = 0.0
    location: str | None = None


class _Server(ThreadingHTTPServer):
    daemon_threads = True
    request_queue_size = 256
    allow_reuse_address = True


class FixtureServer:
    """Serves fixed routes on 0.0.0.0 so any 127.0.0.x alias reaches it.

    Tracks peak simultaneous connections overall and per local address.
    """

    def __init__(self, routes: dict[str, Route] | None = None, default_delay_s: float = 0.0) -> None:
        self.routes: dict[str, Route] = dict(routes or {})
        self.default_delay_s = default_delay_s
        self.lock = threading.Lock()
        self.active = 0
        self.peak = 0
        self.host_active: dict[str, int] = {}
        self.host_peak: dict[str, int] = {}
        self.requests: list[tuple[str, str, str]] = []  # (host address, path, user agent)
        owner = self

        class Handler(BaseHTTPRequestHandler):
            def setup(self):
                super().setup()
                owner._enter(self.connection.getsockname()[0])

            def finish(self):
                try:
                    super().finish()
                finally:
                    owner._leave(self.connection.getsockname()[0])

            def do_GET(self):
                addr = self.connection.getsockname()[0]
                with owner.lock:
                    owner.requests.append((addr, self.path, self.headers.get("User-Agent", "")))
                route = owner.routes.get(self.path)
                if route is None:
                    route = Route(404, b"not found")
                delay = route.delay_s or owner.default_delay_s
                if delay:
                    time.sleep(delay)
                self.send_response(route.status)
                if route.location:
                    self.send_header("Location", route.location)
                self.send_header("Content-Type", route.content_type)
                self.send_header("Content-Length", str(len(route.body)))
                self.end_headers()
                try:
                    self.wfile.write(route.body)
                except (BrokenPipeError, ConnectionResetError):
                    pass

            def log_message(self, *args):
                pass

        self.httpd = _Server(("0.0.0.0", 0), Handler)
        self.port = self.httpd.server_address[1]
        self.thread = threading.Thread(target=self.httpd.serve_forever, kwargs={"poll_interval": 0.02}, daemon=True)

    def _enter(self, host: str) -> None:
        with self.lock:
            self.active += 1
            self.peak = max(self.peak, self.active)
            n = self.host_active.get(host, 0) + 1
            self.host_active[host] = n
            self.host_peak[host] = max(self.host_peak.get(host, 0), n)

    def _leave(self, host: str) -> None:
        with self.lock:
            self.active -= 1
            self.host_active[host] -= 1

    def url(self, path: str, host: str = "127.0.0.1") -> str:
        return f"http://{host}:{self.port}{path}"

    def reset_stats(self) -> None:
        with self.lock:
            self.peak = 0
            self.host_peak.clear()
            self.requests.clear()

    def __enter__(self) -> FixtureServer:
        self.thread.start()
        return self

    def __exit__(self, *exc) -> None:
        self.httpd.shutdown()
        self.httpd.server_close()


def closed_port() -> int:
    """A local port with nothing listening (connect is refused)."""
    import socket

    s = socket.socket()
    s.bind(("127.0.0.1", 0))
    port = s.getsockname()[1]
    s.close()
    return port
