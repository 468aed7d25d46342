"""HTTP session service for the interactive loop.

Sessions hold an uploaded image and its cached watershed partition.
Strokes, parameters, and stamps travel as JSON; images travel as base64
PNG.  Per-session requests are serialized behind a lock, distinct
sessions run concurrently.  Responses are pure functions of the session
image and the request body (the timing field aside).

Environment knobs: ARGSEG_MAX_DIM (default 4096) caps image width and
height, ARGSEG_SESSION_TTL seconds (default 1800) expires idle sessions,
ARGSEG_ADDR (default 127.0.0.1:8080) sets the listen address for
``python -m argseg.service``.
"""

from __future__ import annotations

import base64
import io
import logging
import os
import threading
import time
import uuid
from dataclasses import dataclass, field

import numpy as np
from fastapi import FastAPI, Request, Response
from fastapi.exceptions import RequestValidationError
from fastapi.middleware.cors import CORSMiddleware
from fastapi.responses import JSONResponse
from PIL import Image

from . import pipeline
from .image import RasterImage
from .matching import MatchParams
from .strokes import StrokeSet, stroke_set_from_dict
from .watershed import RegionPartition, WatershedParams, watershed

logger = logging.getLogger("argseg.service")

DEFAULT_MAX_DIM = 4096
DEFAULT_TTL_SECONDS = 1800.0


class ApiError(Exception):
    def __init__(self, status: int, message: str):
        super().__init__(message)
        self.status = status
        self.message = message


@dataclass
class Session:
    session_id: str
    image: RasterImage
    partition: RegionPartition
    smoothing_radius: int
    created_at: float = field(default_factory=time.time)
    last_access: float = field(default_factory=time.time)
    strokes: StrokeSet | None = None
    result: pipeline.SegmentationResult | None = None
    lock: threading.Lock = field(default_factory=threading.Lock)


class SessionStore:
    def __init__(self, ttl_seconds: float):
        self.ttl = ttl_seconds
        self._sessions: dict[str, Session] = {}
        self._lock = threading.Lock()

    def sweep(self) -> None:
        now = time.time()
        with self._lock:
            dead = [k for k, s in self._sessions.items()
                    if now - s.last_access > self.ttl]
            for k in dead:
                del self._sessions[k]

    def add(self, session: Session) -> None:
        with self._lock:
            self._sessions[session.session_id] = session

    def get(self, session_id: str) -> Session:
        with self._lock:
            session = self._sessions.get(session_id)
        if session is None:
            raise ApiError(404, f"unknown session {session_id}")
        session.last_access = time.time()
        return session

    def remove(self, session_id: str) -> None:
        with self._lock:
            if session_id not in self._sessions:
                raise ApiError(404, f"unknown session {session_id}")
            del self._sessions[session_id]


def _decode_image(data: dict, max_dim: int) -> RasterImage:
    raw = data.get("image")
    if not isinstance(raw, str) or not raw:
        raise ApiError(400, "image: expected base64 PNG string")
    try:
        blob = base64.b64decode(raw, validate=True)
        with Image.open(io.BytesIO(blob)) as im:
            array = np.asarray(im.convert("RGB"))
    except ApiError:
        raise
    except Exception:
        raise ApiError(400, "image: not a decodable base64 PNG")
    h, w = array.shape[:2]
    if w > max_dim or h > max_dim:
        raise ApiError(413, f"image: {w}x{h} exceeds the {max_dim} pixel cap")
    return RasterImage.from_array(array)


def _encode_png(array: np.ndarray, mode: str | None = None) -> str:
    buf = io.BytesIO()
    Image.fromarray(array, mode=mode).save(buf, format="PNG")
    return base64.b64encode(buf.getvalue()).decode("ascii")


def _parse_params(data: dict) -> MatchParams:
    out = {}
    for key, attr in (("alpha", "alpha"), ("gamma", "gamma_e")):
        value = data.get(key, 0.5)
        if not isinstance(value, (int, float)) or not 0.0 <= float(value) <= 1.0:
            raise ApiError(400, f"{key}: must be a number within [0, 1], got {value!r}")
        out[attr] = float(value)
    return MatchParams(**out)


def _parse_strokes(data: dict) -> StrokeSet:
    if "strokes" not in data:
        raise ApiError(400, "strokes: missing")
    try:
        return stroke_set_from_dict(data["strokes"])
    except (ValueError, KeyError, TypeError) as exc:
        raise ApiError(400, f"strokes: {exc}")


def _parse_opacity(data: dict) -> float:
    value = data.get("opacity", 0.5)
    if not isinstance(value, (int, float)) or not 0.0 <= float(value) <= 1.0:
        raise ApiError(400, f"opacity: must be a number within [0, 1], got {value!r}")
    return float(value)


def _segment_response(
    session: Session,
    strokes_or_pack,
    params: MatchParams,
    opacity: float,
    placement: tuple[int, int] | None = None,
) -> dict:
    start = time.perf_counter()
    try:
        if placement is None:
            result = pipeline.segment_partitioned(
                session.image, session.partition, strokes_or_pack, params
            )
            label_table = strokes_or_pack.label_table()
        else:
            result = pipeline.apply_stamp(
                strokes_or_pack,
                session.image,
                placement,
                params=None,
                partition=session.partition,
            )
            label_table = strokes_or_pack.label_table
    except pipeline.EmptyModelError as exc:
        raise ApiError(422, f"strokes: {exc}")
    except pipeline.InvalidPlacementError as exc:
        raise ApiError(400, f"at: {exc}")
    overlay = pipeline.render_labels(result, label_table, session.image, opacity)
    elapsed = (time.perf_counter() - start) * 1000.0
    session.result = result
    return {
        "label_map": _encode_png(result.label_map.astype(np.uint16)),
        "overlay": _encode_png(overlay.array, mode="RGB"),
        "regions": {
            str(rid): {"label": m.label_id, "cost": m.cost}
            for rid, m in sorted(result.regions.items())
        },
        "timing_ms": elapsed,
    }


def create_app(
    max_dim: int | None = None,
    ttl_seconds: float | None = None,
) -> FastAPI:
    if max_dim is None:
        max_dim = int(os.environ.get("ARGSEG_MAX_DIM", DEFAULT_MAX_DIM))
    if ttl_seconds is None:
        ttl_seconds = float(os.environ.get("ARGSEG_SESSION_TTL", DEFAULT_TTL_SECONDS))
    app = FastAPI(title="argseg service")
    store = SessionStore(ttl_seconds)
    app.state.store = store

    # the browser front end is served from a different local port
    app.add_middleware(
        CORSMiddleware,
        allow_origins=os.environ.get("ARGSEG_CORS_ORIGINS", "*").split(","),
        allow_methods=["GET", "POST", "DELETE"],
        allow_headers=["content-type"],
    )

    @app.exception_handler(ApiError)
    async def handle_api_error(request: Request, exc: ApiError):
        return JSONResponse(status_code=exc.status, content={"error": exc.message})

    @app.exception_handler(RequestValidationError)
    async def handle_validation_error(request: Request, exc: RequestValidationError):
        return JSONResponse(status_code=400, content={"error": "body: malformed JSON"})

    @app.middleware("http")
    async def log_requests(request: Request, call_next):
        start = time.perf_counter()
        response = await call_next(request)
        elapsed = (time.perf_counter() - start) * 1000.0
        logger.info(
            "%s %s %d %.1fms",
            request.method, request.url.path, response.status_code, elapsed,
        )
        return response

    async def read_body(request: Request) -> dict:
        try:
            data = await request.json()
        except Exception:
            raise ApiError(400, "body: malformed JSON")
        if not isinstance(data, dict):
            raise ApiError(400, "body: expected a JSON object")
        return data

    @app.post("/sessions", status_code=201)
    async def create_session(request: Request):
        store.sweep()
        data = await read_body(request)
        image = _decode_image(data, max_dim)
        radius = data.get("smoothing_radius", 1)
        if not isinstance(radius, int) or not 0 <= radius <= 8:
            raise ApiError(400, f"smoothing_radius: must be an integer in [0, 8], got {radius!r}")
        partition = watershed(image, WatershedParams(smoothing_radius=radius))
        session = Session(uuid.uuid4().hex, image, partition, radius)
        store.add(session)
        return {
            "session_id": session.session_id,
            "width": image.width,
            "height": image.height,
            "region_count": partition.region_count,
        }

    @app.post("/sessions/{session_id}/segment")
    async def segment_session(session_id: str, request: Request):
        store.sweep()
        session = store.get(session_id)
        data = await read_body(request)
        strokes = _parse_strokes(data)
        params = _parse_params(data)
        opacity = _parse_opacity(data)
        with session.lock:
            session.strokes = strokes
            return _segment_response(session, strokes, params, opacity)

    @app.post("/sessions/{session_id}/stamp")
    async def stamp_session(session_id: str, request: Request):
        store.sweep()
        session = store.get(session_id)
        data = await read_body(request)
        strokes = _parse_strokes(data)
        params = _parse_params(data)
        with session.lock:
            try:
                pack = pipeline.make_stamp(
                    session.image, strokes, params, partition=session.partition
                )
            except pipeline.EmptyModelError as exc:
                raise ApiError(422, f"strokes: {exc}")
            return {"model_pack": pipeline.model_pack_to_dict(pack)}

    @app.post("/sessions/{session_id}/apply")
    async def apply_session(session_id: str, request: Request):
        store.sweep()
        session = store.get(session_id)
        data = await read_body(request)
        if "model_pack" not in data:
            raise ApiError(400, "model_pack: missing")
        try:
            pack = pipeline.model_pack_from_dict(data["model_pack"])
        except ValueError as exc:
            raise ApiError(400, f"model_pack: {exc}")
        at = data.get("at")
        if (
            not isinstance(at, dict)
            or not isinstance(at.get("x"), int)
            or not isinstance(at.get("y"), int)
        ):
            raise ApiError(400, f"at: expected {{x, y}} integers, got {at!r}")
        opacity = _parse_opacity(data)
        with session.lock:
            return _segment_response(
                session, pack, pack.params_default, opacity, placement=(at["x"], at["y"])
            )

    @app.get("/sessions/{session_id}/partition")
    async def get_partition(session_id: str):
        store.sweep()
        session = store.get(session_id)
        if session.partition.region_count > 65536:
            raise ApiError(400, "partition: too many regions for 16-bit export")
        buf = io.BytesIO()
        Image.fromarray(session.partition.region_ids.astype(np.uint16)).save(
            buf, format="PNG"
        )
        return Response(content=buf.getvalue(), media_type="image/png")

    @app.delete("/sessions/{session_id}", status_code=204)
    async def delete_session(session_id: str):
        store.remove(session_id)

    return app


app = create_app()


def main() -> None:
    import uvicorn

    addr = os.environ.get("ARGSEG_ADDR", "127.0.0.1:8080")
    host, _, port = addr.rpartition(":")
    logging.basicConfig(level=logging.INFO, format="%(asctime)s %(name)s %(message)s")
    uvicorn.run(app, host=host or "127.0.0.1", port=int(port))


if __name__ == "__main__":
    main()
