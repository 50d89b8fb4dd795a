"""HTTP face of the frame store.

Every error answers with the same shape, {"error": code, "message": text},
and all timestamps cross the wire as integer microseconds. Windows are
half-open: from is inclusive, to is exclusive.

Request bodies are parsed and checked by hand rather than by framework
models so rejects carry the offender's index and reason verbatim.
"""

import json
import os

from fastapi import FastAPI, Request
from fastapi.exceptions import RequestValidationError
from fastapi.middleware.cors import CORSMiddleware
from fastapi.responses import JSONResponse
from starlette.exceptions import HTTPException as StarletteHTTPException

from .. import classify
from .db import MAX_BATCH, FrameStore

_STATUS_CODES = {
    400: "bad_request",
    404: "not_found",
    405: "method_not_allowed",
}


def _err(status: int, code: str, message: str) -> JSONResponse:
    return JSONResponse({"error": code, "message": message}, status_code=status)


def _int_param(params, name: str) -> "int | None":
    value = params.get(name)
    if value is None or value == "":
        return None
    try:
        return int(value)
    except ValueError:
        raise _QueryError(f"{name} must be an integer (microseconds)")


class _QueryError(Exception):
    pass


def create_app(store: FrameStore, *, frontend_dir=None) -> FastAPI:
    app = FastAPI(docs_url=None, redoc_url=None, openapi_url=None)
    app.add_middleware(
        CORSMiddleware,
        allow_origins=["*"],
        allow_methods=["*"],
        allow_headers=["*"],
    )

    @app.exception_handler(StarletteHTTPException)
    async def http_error(request: Request, exc: StarletteHTTPException):
        code = _STATUS_CODES.get(exc.status_code, "http_error")
        return _err(exc.status_code, code, str(exc.detail))

    @app.exception_handler(RequestValidationError)
    async def validation_error(request: Request, exc: RequestValidationError):
        return _err(400, "invalid_query", str(exc))

    @app.exception_handler(_QueryError)
    async def query_error(request: Request, exc: _QueryError):
        return _err(400, "invalid_query", str(exc))

    async def _body(request: Request):
        try:
            return json.loads(await request.body() or b"null")
        except json.JSONDecodeError as exc:
            raise _BodyError(str(exc))

    class _BodyError(Exception):
        pass

    @app.exception_handler(_BodyError)
    async def body_error(request: Request, exc: _BodyError):
        return _err(400, "invalid_json", f"body is not valid JSON: {exc}")

    # ------------------------------------------------------------ frames

    @app.post("/api/frames")
    async def post_frames(request: Request):
        batch = await _body(request)
        if not isinstance(batch, list):
            return _err(400, "invalid_frame", "body must be a JSON array of records")
        if len(batch) > MAX_BATCH:
            return _err(
                400,
                "batch_too_large",
                f"batch of {len(batch)} exceeds the {MAX_BATCH} limit",
            )
        try:
            accepted = store.store_frames(batch)
        except ValueError as exc:
            return _err(400, "invalid_frame", str(exc))
        return {"accepted": accepted, "duplicates": len(batch) - accepted}

    @app.get("/api/frames")
    async def get_frames(request: Request):
        p = request.query_params
        limit = _int_param(p, "limit")
        if limit is None:
            limit = 1000
        if limit < 1 or limit > 10_000:
            raise _QueryError("limit must be 1..10000")
        offset = _int_param(p, "offset") or 0
        if offset < 0:
            raise _QueryError("offset must not be negative")
        protocol = p.get("protocol")
        if protocol is not None and protocol not in ("wifi", "ble", "zigbee"):
            raise _QueryError("protocol must be wifi, ble or zigbee")
        frames = store.query_frames(
            from_us=_int_param(p, "from"),
            to_us=_int_param(p, "to"),
            protocol=protocol,
            src=p.get("src"),
            dst=p.get("dst"),
            limit=limit,
            offset=offset,
        )
        return {"frames": frames, "count": len(frames)}

    # ---------------------------------------------------------- analysis

    @app.get("/api/stats/nodes")
    async def get_node_stats(request: Request):
        p = request.query_params
        from_us = _int_param(p, "from")
        to_us = _int_param(p, "to")
        stats = store.node_stats(from_us=from_us, to_us=to_us)
        return {
            "window": {"from_us": from_us, "to_us": to_us},
            "nodes": [stats[a].to_doc() for a in sorted(stats)],
        }

    @app.get("/api/graph")
    async def get_graph(request: Request):
        p = request.query_params
        from_us = _int_param(p, "from")
        to_us = _int_param(p, "to")
        doc = store.graph(from_us=from_us, to_us=to_us)
        doc["window"] = {"from_us": from_us, "to_us": to_us}
        return doc

    @app.post("/api/classify")
    async def post_classify(request: Request):
        body = await _body(request)
        if body is None:
            body = {}
        if not isinstance(body, dict):
            return _err(400, "invalid_query", "body must be a JSON object")
        unknown = set(body) - {"from_us", "to_us", "band"}
        if unknown:
            return _err(400, "invalid_query", f"unknown keys: {sorted(unknown)}")
        for key in ("from_us", "to_us"):
            value = body.get(key)
            if value is not None and not isinstance(value, int):
                return _err(400, "invalid_query", f"{key} must be an integer")
        band = None
        if body.get("band") is not None:
            try:
                band = classify.CameraBand.from_doc(body["band"])
            except ValueError as exc:
                return _err(400, "invalid_band", str(exc))
        result_id, doc = store.classify_window(
            from_us=body.get("from_us"), to_us=body.get("to_us"), band=band
        )
        return {"result_id": result_id, **doc}

    # ----------------------------------------------------------- results

    @app.get("/api/results/{result_id}")
    async def get_result(result_id: int):
        result = store.get_result(result_id)
        if result is None:
            return _err(404, "not_found", f"no result with id {result_id}")
        return result

    @app.get("/api/results")
    async def list_results(request: Request):
        kind = request.query_params.get("kind")
        return {"results": store.list_results(kind)}

    # ------------------------------------------------------------ config

    @app.get("/api/config")
    async def get_config():
        return store.get_config()

    @app.put("/api/config")
    async def put_config(request: Request):
        doc = await _body(request)
        try:
            return store.put_config(doc)
        except ValueError as exc:
            return _err(400, "invalid_config", str(exc))

    @app.get("/api/health")
    async def health():
        return {"status": "ok", "frames": store.count_frames()}

    if frontend_dir and os.path.isdir(frontend_dir):
        from fastapi.staticfiles import StaticFiles

        app.mount("/", StaticFiles(directory=frontend_dir, html=True), name="console")

    return app


def serve(store: FrameStore, *, host: str = "127.0.0.1", port: int = 8787,
          frontend_dir=None) -> None:
    import uvicorn

    app = create_app(store, frontend_dir=frontend_dir)
    uvicorn.run(app, host=host, port=port, log_level="warning")
