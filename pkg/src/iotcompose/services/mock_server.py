"""In-process stand-in for sensors (GSN-style), actuators and cloud storage.

Endpoints::

    GET  /sensors/{name}/latest      GSN-style reading
    POST /admin/sensors/{name}       {"value": number[, "unit": str]} seeds a sensor
    POST /actuators/{name}/input     {"percent": number}
    GET  /actuators/{name}/last      last percent received
    POST /storage/putObject          JSON-LD body -> 201 {"key": str}
    GET  /storage/{key}              stored document
"""

from __future__ import annotations

import json
import logging
import threading
import time
from dataclasses import dataclass, field
from http.server import BaseHTTPRequestHandler, ThreadingHTTPServer
from typing import Any

log = logging.getLogger(__name__)


@dataclass
class RecordedRequest:
    method: str
    path: str
    body: Any


@dataclass
class MockState:
    sensors: dict[str, dict[str, Any]] = field(default_factory=dict)
    actuators: dict[str, float] = field(default_factory=dict)
    storage: dict[str, str] = field(default_factory=dict)
    requests: list[RecordedRequest] = field(default_factory=list)
    lock: threading.Lock = field(default_factory=threading.Lock)


class _Handler(BaseHTTPRequestHandler):
    server: "_Server"

    def log_message(self, fmt, *args):  # route access logs through logging
        log.debug("%s " + fmt, self.address_string(), *args)

    def _send(self, status: int, body: Any) -> None:
        raw = body.encode("utf-8") if isinstance(body, str) else json.dumps(body).encode("utf-8")
        self.send_response(status)
        self.send_header("Content-Type", "application/json")
        self.send_header("Content-Length", str(len(raw)))
        self.end_headers()
        self.wfile.write(raw)

    def _body(self) -> tuple[str, Any]:
        length = int(self.headers.get("Content-Length") or 0)
        text = self.rfile.read(length).decode("utf-8") if length else ""
        try:
            return text, json.loads(text) if text else None
        except ValueError:
            return text, None

    def _parts(self) -> list[str]:
        return [p for p in self.path.split("?", 1)[0].split("/") if p]

    def do_GET(self):
        st = self.server.state
        parts = self._parts()
        with st.lock:
            st.requests.append(RecordedRequest("GET", self.path, None))
            if len(parts) == 3 and parts[0] == "sensors" and parts[2] == "latest":
                sensor = st.sensors.get(parts[1])
                if sensor is None:
                    return self._send(404, {"error": f"unknown sensor {parts[1]}"})
                return self._send(200, {"sensor": parts[1], **sensor})
            if len(parts) == 3 and parts[0] == "actuators" and parts[2] == "last":
                if parts[1] not in st.actuators:
                    return self._send(404, {"error": f"actuator {parts[1]} has received nothing"})
                return self._send(200, {"actuator": parts[1], "percent": st.actuators[parts[1]]})
            if len(parts) == 2 and parts[0] == "storage":
                doc = st.storage.get(parts[1])
                if doc is None:
                    return self._send(404, {"error": f"no object {parts[1]}"})
                return self._send(200, doc)
        self._send(404, {"error": "not found"})

    def do_POST(self):
        st = self.server.state
        parts = self._parts()
        text, body = self._body()
        with st.lock:
            st.requests.append(RecordedRequest("POST", self.path, body))
            if len(parts) == 3 and parts[:2] == ["admin", "sensors"]:
                if not isinstance(body, dict) or not isinstance(body.get("value"), (int, float)):
                    return self._send(400, {"error": "expected {\"value\": number}"})
                st.sensors[parts[2]] = {
                    "value": body["value"],
                    "unit": body.get("unit", "celsius"),
                    "timestamp": int(body.get("timestamp", time.time() * 1000)),
                }
                return self._send(200, {"sensor": parts[2], **st.sensors[parts[2]]})
            if len(parts) == 3 and parts[0] == "actuators" and parts[2] == "input":
                if not isinstance(body, dict) or not isinstance(body.get("percent"), (int, float)):
                    return self._send(400, {"error": "expected {\"percent\": number}"})
                st.actuators[parts[1]] = body["percent"]
                return self._send(200, {"actuator": parts[1], "percent": body["percent"]})
            if len(parts) == 2 and parts[0] == "storage":
                if body is None:
                    return self._send(400, {"error": "body must be JSON"})
                key = f"obj-{len(st.storage) + 1}"
                # stored verbatim so duplicate members survive
                st.storage[key] = text
                return self._send(201, {"key": key})
        self._send(404, {"error": "not found"})


class _Server(ThreadingHTTPServer):
    daemon_threads = True
    state: MockState


class MockServer:
    """Threaded mock server; use as a context manager or call start()/stop()."""

    def __init__(self, host: str = "127.0.0.1", port: int = 0,
                 sensors: dict[str, float] | None = None):
        self.state = MockState()
        for name, value in (sensors or {}).items():
            self.seed(name, value)
        self._httpd = _Server((host, port), _Handler)
        self._httpd.state = self.state
        self._thread: threading.Thread | None = None

    @property
    def url(self) -> str:
        host, port = self._httpd.server_address[:2]
        return f"http://{host}:{port}"

    def start(self) -> "MockServer":
        self._thread = threading.Thread(target=self._httpd.serve_forever, daemon=True)
        self._thread.start()
        return self

    def stop(self) -> None:
        self._httpd.shutdown()
        self._httpd.server_close()
        if self._thread is not None:
            self._thread.join(timeout=5)

    def serve_forever(self) -> None:
        self._httpd.serve_forever()

    def __enter__(self) -> "MockServer":
        return self.start()

    def __exit__(self, *exc) -> None:
        self.stop()

    def seed(self, sensor: str, value: float, unit: str = "celsius", timestamp: int | None = None) -> None:
        with self.state.lock:
            self.state.sensors[sensor] = {
                "value": value,
                "unit": unit,
                "timestamp": int(time.time() * 1000) if timestamp is None else timestamp,
            }

    def actuator_value(self, name: str) -> float | None:
        with self.state.lock:
            return self.state.actuators.get(name)

    @property
    def request_count(self) -> int:
        with self.state.lock:
            return len(self.state.requests)


def mock_server(config: dict | None = None) -> MockServer:
    """Start a server from ``{"host", "port", "sensors": {name: value}}``."""
    config = config or {}
    return MockServer(
        host=config.get("host", "127.0.0.1"),
        port=config.get("port", 0),
        sensors=config.get("sensors"),
    ).start()
