"""Interactive tuning service.

Holds uploaded frames in memory plus one live register pair, and serves
previews so a user can steer the tone adjustment from a browser. Register
writes are serialized and atomic; every preview works from a single
register snapshot taken at request start.

Routes:
    POST /api/image                   body = PNG or PPM bytes
    GET  /api/image/{id}/preview      optional one-shot register overrides
    GET  /api/image/{id}/mask
    GET  /api/registers
    PUT  /api/registers               JSON body
    GET  /api/health
    GET  /...                         static UI assets
"""

from __future__ import annotations

import argparse
import json
import logging
import mimetypes
import os
import secrets
import sys
import threading
from collections import OrderedDict
from http.server import BaseHTTPRequestHandler, ThreadingHTTPServer
from pathlib import Path
from typing import Mapping
from urllib.parse import parse_qsl, urlparse

import numpy as np

from .imageio import decode_image, encode_png, mask_to_rgb
from .pipeline import PipelineConfig, detect_oracle, process
from .skin_model import SkinModelParams
from .tone_adjust import AdjustRegisters, bit_pattern, decode_range, direction_for, encode_range

log = logging.getLogger("skinforge.service")

DEFAULT_PORT = 8080
DEFAULT_IMAGE_CAP = 64
DEFAULT_MAX_UPLOAD = 32 * 1024 * 1024

_RAW_KEYS = ("i_range_q15", "q_range_q15")
_PERCENT_KEYS = ("i_percent", "q_percent")


class RegisterSpecError(ValueError):
    pass


def parse_register_spec(data: Mapping[str, object]) -> AdjustRegisters:
    """Build a register pair from raw or percent spellings (never both)."""
    raw = [k for k in _RAW_KEYS if k in data]
    percent = [k for k in _PERCENT_KEYS if k in data]
    if raw and percent:
        raise RegisterSpecError("mix of raw register and percent keys in one request")
    if not raw and not percent:
        raise RegisterSpecError(
            f"expected {_RAW_KEYS[0]}/{_RAW_KEYS[1]} or {_PERCENT_KEYS[0]}/{_PERCENT_KEYS[1]}"
        )
    try:
        if percent:
            values = []
            for key in _PERCENT_KEYS:
                p = float(data.get(key, 0.0))
                if not -100.0 <= p <= 100.0:
                    raise RegisterSpecError(f"{key} must lie in [-100, 100], got {p}")
                values.append(encode_range(p / 100.0))
            return AdjustRegisters(*values)
        return AdjustRegisters(
            int(data.get(_RAW_KEYS[0], 0)), int(data.get(_RAW_KEYS[1], 0))
        )
    except RegisterSpecError:
        raise
    except (TypeError, ValueError) as exc:
        raise RegisterSpecError(str(exc)) from exc


def register_view(regs: AdjustRegisters) -> dict:
    return {
        "i_range_q15": regs.i_range_q15,
        "q_range_q15": regs.q_range_q15,
        "i_fraction": decode_range(regs.i_range_q15),
        "q_fraction": decode_range(regs.q_range_q15),
        "i_bits": bit_pattern(regs.i_range_q15),
        "q_bits": bit_pattern(regs.q_range_q15),
        "direction": direction_for(regs).value,
    }


class RegisterStore:
    """The live register pair; reads and writes are atomic."""

    def __init__(self) -> None:
        self._lock = threading.Lock()
        self._regs = AdjustRegisters()

    def snapshot(self) -> AdjustRegisters:
        with self._lock:
            return self._regs

    def replace(self, regs: AdjustRegisters) -> AdjustRegisters:
        with self._lock:
            self._regs = regs
            return regs


class ImageStore:
    """In-memory frame store with LRU eviction."""

    def __init__(self, cap: int = DEFAULT_IMAGE_CAP) -> None:
        self._lock = threading.Lock()
        self._frames: OrderedDict[str, np.ndarray] = OrderedDict()
        self._cap = cap

    def put(self, frame: np.ndarray) -> str:
        image_id = secrets.token_hex(8)
        with self._lock:
            self._frames[image_id] = frame
            while len(self._frames) > self._cap:
                evicted, _ = self._frames.popitem(last=False)
                log.info("evicted image %s", evicted)
        return image_id

    def get(self, image_id: str) -> np.ndarray | None:
        with self._lock:
            frame = self._frames.get(image_id)
            if frame is not None:
                self._frames.move_to_end(image_id)
            return frame

    def __len__(self) -> int:
        with self._lock:
            return len(self._frames)


class TunerService:
    """Service state plus the HTTP server wiring."""

    def __init__(
        self,
        model: SkinModelParams | None = None,
        static_dir: str | Path | None = None,
        image_cap: int = DEFAULT_IMAGE_CAP,
        max_upload: int = DEFAULT_MAX_UPLOAD,
    ) -> None:
        self.model = model or SkinModelParams()
        self.registers = RegisterStore()
        self.images = ImageStore(image_cap)
        self.max_upload = max_upload
        self.static_dir = Path(static_dir) if static_dir else None
        self._httpd: ThreadingHTTPServer | None = None

    # request handlers ----------------------------------------------------

    def handle_upload(self, body: bytes) -> tuple[int, dict]:
        try:
            frame = decode_image(body)
        except ValueError as exc:
            return 400, {"error": str(exc)}
        image_id = self.images.put(frame)
        h, w = frame.shape[:2]
        return 200, {"id": image_id, "width": w, "height": h}

    def handle_put_registers(self, data: Mapping[str, object]) -> tuple[int, dict]:
        try:
            regs = parse_register_spec(data)
        except RegisterSpecError as exc:
            return 400, {"error": str(exc)}
        return 200, register_view(self.registers.replace(regs))

    def handle_get_registers(self) -> tuple[int, dict]:
        return 200, register_view(self.registers.snapshot())

    def render_preview(self, image_id: str, overrides: Mapping[str, object] | None) -> tuple[int, bytes | dict]:
        frame = self.images.get(image_id)
        if frame is None:
            return 404, {"error": f"unknown image id {image_id!r}"}
        if overrides:
            try:
                regs = parse_register_spec(overrides)
            except RegisterSpecError as exc:
                return 400, {"error": str(exc)}
        else:
            regs = self.registers.snapshot()
        out = process(frame, PipelineConfig(model=self.model, regs=regs, emit_mask=False))
        return 200, encode_png(out.adjusted)

    def render_mask(self, image_id: str) -> tuple[int, bytes | dict]:
        frame = self.images.get(image_id)
        if frame is None:
            return 404, {"error": f"unknown image id {image_id!r}"}
        mask = detect_oracle(frame, PipelineConfig(model=self.model))
        return 200, encode_png(mask_to_rgb(mask))

    # server lifecycle -----------------------------------------------------

    def start(self, host: str = "127.0.0.1", port: int = 0) -> int:
        """Start serving on a background thread; returns the bound port."""
        handler = _make_handler(self)
        self._httpd = ThreadingHTTPServer((host, port), handler)
        thread = threading.Thread(target=self._httpd.serve_forever, daemon=True)
        thread.start()
        return self._httpd.server_address[1]

    def serve_forever(self, host: str, port: int) -> None:
        handler = _make_handler(self)
        self._httpd = ThreadingHTTPServer((host, port), handler)
        log.info("listening on %s:%d", host, self._httpd.server_address[1])
        self._httpd.serve_forever()

    def stop(self) -> None:
        if self._httpd is not None:
            self._httpd.shutdown()
            self._httpd.server_close()
            self._httpd = None


def _make_handler(service: TunerService) -> type[BaseHTTPRequestHandler]:
    class Handler(BaseHTTPRequestHandler):
        protocol_version = "HTTP/1.1"

        def log_message(self, fmt: str, *args: object) -> None:
            log.debug("%s %s", self.address_string(), fmt % args)

        # helpers ---------------------------------------------------------

        def _send(self, status: int, payload: bytes, content_type: str) -> None:
            self.send_response(status)
            self.send_header("Content-Type", content_type)
            self.send_header("Content-Length", str(len(payload)))
            self.end_headers()
            self.wfile.write(payload)

        def _send_json(self, status: int, data: dict) -> None:
            self._send(status, json.dumps(data).encode(), "application/json")

        def _send_image_or_json(self, status: int, result: bytes | dict) -> None:
            if isinstance(result, dict):
                self._send_json(status, result)
            else:
                self._send(status, result, "image/png")

        def _read_body(self) -> bytes | None:
            length = int(self.headers.get("Content-Length") or 0)
            if length > service.max_upload:
                self._send_json(413, {"error": f"body exceeds {service.max_upload} bytes"})
                return None
            return self.rfile.read(length)

        # routes ------------------------------------------------------------

        def do_GET(self) -> None:
            url = urlparse(self.path)
            parts = [p for p in url.path.split("/") if p]
            if url.path == "/api/health":
                self._send_json(200, {"status": "ok"})
            elif url.path == "/api/registers":
                self._send_json(*service.handle_get_registers())
            elif len(parts) == 4 and parts[:2] == ["api", "image"] and parts[3] == "preview":
                overrides = dict(parse_qsl(url.query))
                self._send_image_or_json(*service.render_preview(parts[2], overrides))
            elif len(parts) == 4 and parts[:2] == ["api", "image"] and parts[3] == "mask":
                self._send_image_or_json(*service.render_mask(parts[2]))
            elif parts and parts[0] == "api":
                self._send_json(404, {"error": f"no such endpoint {url.path}"})
            else:
                self._serve_static(url.path)

        def do_POST(self) -> None:
            if urlparse(self.path).path != "/api/image":
                self._send_json(404, {"error": "POST is only supported on /api/image"})
                return
            body = self._read_body()
            if body is None:
                return
            self._send_json(*service.handle_upload(body))

        def do_PUT(self) -> None:
            if urlparse(self.path).path != "/api/registers":
                self._send_json(404, {"error": "PUT is only supported on /api/registers"})
                return
            body = self._read_body()
            if body is None:
                return
            try:
                data = json.loads(body or b"{}")
                if not isinstance(data, dict):
                    raise ValueError("body must be a JSON object")
            except ValueError as exc:
                self._send_json(400, {"error": f"bad JSON body: {exc}"})
                return
            self._send_json(*service.handle_put_registers(data))

        def _serve_static(self, path: str) -> None:
            if service.static_dir is None:
                if path == "/":
                    self._send(200, _PLACEHOLDER_PAGE, "text/html; charset=utf-8")
                else:
                    self._send_json(404, {"error": "no static assets configured"})
                return
            rel = path.lstrip("/") or "index.html"
            target = (service.static_dir / rel).resolve()
            root = service.static_dir.resolve()
            if root not in target.parents and target != root:
                self._send_json(404, {"error": "not found"})
                return
            if target.is_dir():
                target = target / "index.html"
            if not target.is_file():
                self._send_json(404, {"error": "not found"})
                return
            ctype = mimetypes.guess_type(str(target))[0] or "application/octet-stream"
            self._send(200, target.read_bytes(), ctype)

    return Handler


_PLACEHOLDER_PAGE = (
    b"<!doctype html><title>skinforge</title>"
    b"<p>skinforge tuning service is running. The API lives under /api/; "
    b"start with --static-dir to serve the browser UI.</p>"
)


def main(argv: list[str] | None = None) -> int:
    parser = argparse.ArgumentParser(prog="skinforge-serve", description=__doc__)
    parser.add_argument("--host", default="127.0.0.1")
    parser.add_argument("--port", type=int,
                        default=int(os.environ.get("SKINFORGE_PORT", DEFAULT_PORT)))
    parser.add_argument("--static-dir", default=None,
                        help="directory of UI assets served from / (default: ./frontend/dist if present)")
    parser.add_argument("--config", default=None, help="skin model key=value file")
    parser.add_argument("--image-cap", type=int, default=DEFAULT_IMAGE_CAP)
    parser.add_argument("--max-upload", type=int, default=DEFAULT_MAX_UPLOAD)
    args = parser.parse_args(argv)

    level = {"error": logging.ERROR, "info": logging.INFO, "debug": logging.DEBUG}.get(
        os.environ.get("SKINFORGE_LOG", "info").lower(), logging.INFO
    )
    logging.basicConfig(stream=sys.stderr, level=level, format="%(levelname)s %(message)s")

    static_dir = args.static_dir
    if static_dir is None and Path("frontend/dist").is_dir():
        static_dir = "frontend/dist"
    model = (
        SkinModelParams.from_config_text(Path(args.config).read_text())
        if args.config else SkinModelParams()
    )
    service = TunerService(
        model=model, static_dir=static_dir,
        image_cap=args.image_cap, max_upload=args.max_upload,
    )
    try:
        service.serve_forever(args.host, args.port)
    except KeyboardInterrupt:
        service.stop()
    return 0


if __name__ == "__main__":
    sys.exit(main())
