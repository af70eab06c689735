"""HTTP facade over the engine for the studio UI and batch clients.

All request/response bodies are JSON; errors serialize as
{code, message, detail}. Mutations on one project serialize behind a
per-project writer lock and return the post-state revision number;
reads serve the latest committed revision. Sampling endpoints are pure
and may run fully in parallel.
"""

from __future__ import annotations

import itertools
import os
import threading
from dataclasses import dataclass, field

from fastapi import FastAPI, Request, Response
from fastapi.exceptions import RequestValidationError
from fastapi.middleware.cors import CORSMiddleware
from fastapi.responses import JSONResponse
from starlette.concurrency import run_in_threadpool

from . import designspace
from .analyzers import AnalyzerContract, FixtureAnalyzer, LlmAnalyzer, LlmAnalyzerConfig
from .assets import list_builtin
from .compose import add_template_clip
from .document import (
    ProjectDocument,
    add_variant,
    new_project,
    put_layout,
    reclassify,
    register_upload,
    remove_clip,
    reorder_clips,
    resegment_project,
    set_background,
    set_bgm,
    set_slot,
)
from .engine import sample
from .errors import (
    AnalyzerUnavailable,
    ConfigError,
    EmptyStory,
    MalformedResponse,
    MotionComicError,
    UnknownProject,
    UnsavedLayout,
    UploadTooLarge,
)
from .render import DEFAULT_FPS, export_bytes, frame_count
from .story import ActionCategory, SceneSpan, rebuild_scene_text

MAX_UPLOAD_BYTES = 10 * 1024 * 1024

_STATUS_BY_CODE = {
    "EmptyStory": 400,
    "CorruptDocument": 400,
    "SchemaMismatch": 400,
    "MalformedResponse": 422,
    "InvalidSpans": 422,
    "MissingField": 422,
    "UnknownCategory": 422,
    "BadPermutation": 422,
    "MissingActor": 422,
    "InvariantViolation": 422,
    "AuthoringError": 422,
    "UnknownProject": 404,
    "UnknownScene": 404,
    "UnknownAction": 404,
    "UnknownClip": 404,
    "UnknownTemplate": 404,
    "UnknownAsset": 404,
    "UnknownVariant": 404,
    "UnknownEntity": 404,
    "UnclassifiedAction": 409,
    "UnsavedLayout": 409,
    "NothingToExport": 409,
    "UploadTooLarge": 413,
    "AnalyzerUnavailable": 502,
    "ConfigError": 502,
}


@dataclass
class _Entry:
    doc: ProjectDocument
    revision: int = 0
    lock: threading.Lock = field(default_factory=threading.Lock)


class ProjectStore:
    """In-memory projects with single-writer mutation per project."""

    def __init__(self):
        self._projects: dict[str, _Entry] = {}
        self._uploads: dict[str, dict] = {}
        self._ids = itertools.count(1)
        self._lock = threading.Lock()

    def create(self, doc: ProjectDocument) -> tuple[str, int]:
        with self._lock:
            pid = f"p{next(self._ids):04d}"
            self._projects[pid] = _Entry(doc=doc)
        return pid, 0

    def entry(self, pid: str) -> _Entry:
        entry = self._projects.get(pid)
        if entry is None:
            raise UnknownProject(f"no project {pid!r}")
        return entry

    def read(self, pid: str) -> tuple[ProjectDocument, int]:
        entry = self.entry(pid)
        return entry.doc, entry.revision

    def mutate(self, pid: str, fn) -> tuple[ProjectDocument, int]:
        entry = self.entry(pid)
        with entry.lock:
            doc = fn(entry.doc)
            entry.doc = doc
            entry.revision += 1
            return doc, entry.revision

    def add_upload(self, filename: str, mime: str, data: bytes) -> str:
        with self._lock:
            uid = f"upload.{len(self._uploads):04d}"
            self._uploads[uid] = {"filename": filename, "mime": mime, "data": data}
        return uid

    def uploads(self) -> dict[str, dict]:
        return dict(self._uploads)


def _analyzer_from_env() -> AnalyzerContract:
    kind = os.environ.get("DB_ANALYZER", "llm")
    if kind == "fixture":
        path = os.environ.get("DB_FIXTURE_FILE", "")
        if not path:
            raise ConfigError("DB_ANALYZER=fixture requires DB_FIXTURE_FILE")
        return FixtureAnalyzer.from_file(path)
    return LlmAnalyzer(LlmAnalyzerConfig.from_env())


def _outline(doc: ProjectDocument) -> list[dict]:
    story = list(doc.story)
    out = []
    for rec in doc.scenes:
        scene = rec.scene
        out.append(
            {
                "span": scene.span.to_dict(),
                "text": rebuild_scene_text(story, scene.span),
                "characters": [e.to_dict() for e in scene.characters],
                "items": [e.to_dict() for e in scene.items],
                "actions": [a.to_dict() for a in sorted(scene.actions, key=lambda a: a.id)],
                "layout_saved": rec.layout.saved,
                "clip_count": len(rec.timeline.clips),
            }
        )
    return out


def create_app(analyzer: AnalyzerContract | None = None, store: ProjectStore | None = None) -> FastAPI:
    app = FastAPI(title="motioncomic service", version="0.1.0")
    app.add_middleware(
        CORSMiddleware,
        allow_origins=[os.environ.get("DB_UI_ORIGIN", "*")],
        allow_methods=["*"],
        allow_headers=["*"],
    )
    store = store or ProjectStore()
    app.state.store = store
    app.state.analyzer = analyzer

    def get_analyzer() -> AnalyzerContract:
        if app.state.analyzer is None:
            app.state.analyzer = _analyzer_from_env()
        return app.state.analyzer

    @app.exception_handler(MotionComicError)
    async def domain_error(_request: Request, exc: MotionComicError):
        status = _STATUS_BY_CODE.get(exc.code, 400)
        return JSONResponse(status_code=status, content=exc.as_dict())

    @app.exception_handler(RequestValidationError)
    async def validation_error(_request: Request, exc: RequestValidationError):
        return JSONResponse(
            status_code=422,
            content={"code": "ValidationError", "message": "request body failed validation",
                     "detail": [str(e.get("msg", "")) for e in exc.errors()][:10]},
        )

    # --- projects -----------------------------------------------------------

    @app.post("/projects", status_code=201)
    async def create_project(request: Request):
        ctype = request.headers.get("content-type", "")
        if ctype.startswith("multipart/form-data"):
            form = await request.form()
            upload = form.get("file")
            if upload is None:
                raise EmptyStory("multipart body has no 'file' field")
            text = (await upload.read()).decode("utf-8", errors="replace")
        else:
            try:
                body = await request.json()
            except Exception:
                raise MalformedResponse("request body is not valid JSON") from None
            if not isinstance(body, dict):
                raise MalformedResponse("request body must be a JSON object")
            text = str(body.get("story_text") or "")
        analyzer_inst = get_analyzer()
        doc = await run_in_threadpool(new_project, text, analyzer_inst)
        pid, revision = store.create(doc)
        return {"project_id": pid, "revision": revision, "scenes": _outline(doc)}

    @app.get("/projects/{pid}/outline")
    def outline(pid: str):
        doc, revision = store.read(pid)
        return {"project_id": pid, "revision": revision, "scenes": _outline(doc)}

    @app.patch("/projects/{pid}/spans")
    async def patch_spans(pid: str, request: Request):
        body = await _json_object(request)
        spans_raw = body.get("spans")
        if not isinstance(spans_raw, list):
            raise MalformedResponse("body.spans must be an array")
        spans = _parse("body.spans entries need integer id/begin_index/end_index", lambda: [
            SceneSpan(int(s.get("id", i)), int(s["begin_index"]), int(s["end_index"]))
            for i, s in enumerate(spans_raw)
        ])
        analyzer_inst = get_analyzer()
        doc, revision = await run_in_threadpool(
            store.mutate, pid, lambda d: resegment_project(d, spans, analyzer_inst)
        )
        return {"project_id": pid, "revision": revision, "scenes": _outline(doc)}

    @app.patch("/projects/{pid}/scenes/{sid}/actions/{aid}")
    async def patch_action(pid: str, sid: int, aid: int, request: Request):
        body = await _json_object(request)
        category = ActionCategory.from_token(str(body.get("category", "")))
        doc, revision = store.mutate(pid, lambda d: reclassify(d, sid, aid, category))
        action = doc.scene_record(sid).scene.action(aid)
        return {"project_id": pid, "revision": revision, "action": action.to_dict()}

    # --- suggestions and timeline -------------------------------------------

    @app.get("/projects/{pid}/scenes/{sid}/actions/{aid}/suggestions")
    def suggestions(pid: str, sid: int, aid: int):
        doc, revision = store.read(pid)
        action = doc.scene_record(sid).scene.action(aid)
        ranked = designspace.suggest(action)
        return {"project_id": pid, "revision": revision, "action": action.to_dict(),
                "suggestions": [s.to_dict() for s in ranked]}

    @app.post("/projects/{pid}/scenes/{sid}/timeline/clips", status_code=201)
    async def post_clip(pid: str, sid: int, request: Request):
        body = await _json_object(request)
        template_id = str(body.get("template_id", ""))
        action_id = _parse("body.action_id must be an integer",
                           lambda: int(body["action_id"]) if body.get("action_id") is not None else None)
        params = body.get("params") or {}
        if not isinstance(params, dict):
            raise MalformedResponse("body.params must be an object")
        result: dict = {}

        def mutation(d: ProjectDocument) -> ProjectDocument:
            d2, clip = _parse("clip params have the wrong shape",
                              lambda: add_template_clip(d, sid, template_id, action_id, params))
            result["clip"] = clip
            return d2

        _, revision = store.mutate(pid, mutation)
        clip = result["clip"]
        smoothed = None
        for stage in clip.stages:
            for _, op in stage.bindings:
                if hasattr(op, "polyline"):
                    smoothed = [[p[0], p[1]] for p in op.polyline]
                    break
            if smoothed:
                break
        return {"project_id": pid, "revision": revision, "clip_id": clip.id,
                "duration": clip.duration(), "label": clip.label,
                "smoothed_path": smoothed}

    @app.delete("/projects/{pid}/scenes/{sid}/timeline/clips/{cid}")
    def delete_clip(pid: str, sid: int, cid: str):
        _, revision = store.mutate(pid, lambda d: remove_clip(d, sid, cid))
        return {"project_id": pid, "revision": revision}

    @app.put("/projects/{pid}/scenes/{sid}/timeline/order")
    async def put_order(pid: str, sid: int, request: Request):
        body = await _json_object(request)
        order = body.get("order")
        if not isinstance(order, list):
            raise MalformedResponse("body.order must be an array of clip ids")
        doc, revision = store.mutate(pid, lambda d: reorder_clips(d, sid, [str(c) for c in order]))
        return {"project_id": pid, "revision": revision,
                "order": [c.id for c in doc.scene_record(sid).timeline.clips]}

    # --- playback -----------------------------------------------------------

    @app.get("/projects/{pid}/scenes/{sid}/sample")
    def sample_scene(pid: str, sid: int, t: float):
        if t < 0:
            raise MalformedResponse("t must be >= 0")
        doc, revision = store.read(pid)
        rec = doc.scene_record(sid)
        if not rec.layout.saved:
            raise UnsavedLayout(f"scene {sid} has no saved layout")
        states = sample(rec.timeline, rec.layout, t)
        return {"project_id": pid, "revision": revision, "t": t,
                "states": [s.to_dict() for s in states]}

    @app.get("/projects/{pid}/scenes/{sid}/frames")
    def frames_manifest(pid: str, sid: int, fps: float = DEFAULT_FPS, include_states: bool = True):
        if fps <= 0:
            raise MalformedResponse("fps must be > 0")
        doc, revision = store.read(pid)
        rec = doc.scene_record(sid)
        if not rec.layout.saved:
            raise UnsavedLayout(f"scene {sid} has no saved layout")
        duration = rec.timeline.duration()
        n = frame_count(duration, fps)
        frames = []
        for k in range(n):
            t = k / fps
            entry = {"index": k, "t": t}
            if include_states:
                entry["states"] = [s.to_dict() for s in sample(rec.timeline, rec.layout, t)]
            frames.append(entry)
        return {"project_id": pid, "revision": revision, "scene": sid, "fps": fps,
                "duration": duration, "count": n, "frames": frames}

    # --- layout, prototypes, assets -----------------------------------------

    @app.put("/projects/{pid}/scenes/{sid}/layout")
    async def put_scene_layout(pid: str, sid: int, request: Request):
        body = await _json_object(request)
        placements = body.get("placements")
        if not isinstance(placements, list) or not all(isinstance(p, dict) for p in placements):
            raise MalformedResponse("body.placements must be an array of objects")
        doc, revision = store.mutate(
            pid, lambda d: _parse("placement entries have the wrong shape", lambda: put_layout(d, sid, placements))
        )
        rec = doc.scene_record(sid)
        return {"project_id": pid, "revision": revision,
                "placements": [p.to_dict() for p in rec.layout.placements], "saved": rec.layout.saved}

    @app.put("/projects/{pid}/scenes/{sid}/background")
    async def put_background(pid: str, sid: int, request: Request):
        body = await _json_object(request)
        _, revision = store.mutate(pid, lambda d: set_background(d, sid, body.get("asset")))
        return {"project_id": pid, "revision": revision}

    @app.put("/projects/{pid}/scenes/{sid}/bgm")
    async def put_bgm(pid: str, sid: int, request: Request):
        body = await _json_object(request)
        offset = _parse("body.start_offset must be a number", lambda: float(body.get("start_offset") or 0.0))
        _, revision = store.mutate(pid, lambda d: set_bgm(d, sid, body.get("asset"), offset))
        return {"project_id": pid, "revision": revision}

    @app.put("/projects/{pid}/prototypes/{entity}/slots")
    async def put_slot(pid: str, entity: str, request: Request):
        body = await _json_object(request)
        anchor = _parse("body.anchor must be [x, y]",
                        lambda: (float(body["anchor"][0]), float(body["anchor"][1])) if body.get("anchor") else None)
        offset = _parse("body.offset must be [x, y]",
                        lambda: (float(body["offset"][0]), float(body["offset"][1])) if body.get("offset") else None)
        scale = _parse("body.scale must be a number",
                       lambda: float(body["scale"]) if body.get("scale") is not None else None)
        asset_id = body.get("asset")
        if asset_id is not None and not isinstance(asset_id, str):
            raise MalformedResponse("body.asset must be an asset id string or null")

        def mutation(d: ProjectDocument) -> ProjectDocument:
            d2 = d
            if isinstance(asset_id, str) and asset_id.startswith("upload."):
                up = store.uploads().get(asset_id)
                if up is not None and all(a.id != asset_id for a in d2.asset_manifest):
                    d2 = register_upload(d2, asset_id, up["filename"], up["mime"])
            if body.get("create_variant"):
                d2 = add_variant(d2, entity, str(body.get("variant", "default")))
            return set_slot(
                d2,
                entity=entity,
                variant_name=str(body.get("variant", "default")),
                slot=str(body.get("slot", "")),
                asset_id=asset_id,
                anchor=anchor,
                offset=offset,
                scale=scale,
            )

        doc, revision = store.mutate(pid, mutation)
        proto = doc.prototype(entity)
        return {"project_id": pid, "revision": revision, "prototype": proto.to_dict()}

    @app.get("/assets")
    def get_assets():
        uploads = [
            {"id": uid, "kind": "uploaded", "path": f"uploads/{u['filename']}", "mime": u["mime"]}
            for uid, u in sorted(store.uploads().items())
        ]
        return {"builtin": list_builtin(), "uploads": uploads}

    @app.post("/assets", status_code=201)
    async def post_asset(request: Request):
        form = await request.form()
        upload = form.get("file")
        if upload is None:
            raise MalformedResponse("multipart body has no 'file' field")
        data = await upload.read()
        if len(data) > MAX_UPLOAD_BYTES:
            raise UploadTooLarge(f"upload exceeds {MAX_UPLOAD_BYTES} bytes")
        uid = store.add_upload(upload.filename or "asset.bin", upload.content_type or "application/octet-stream", data)
        return {"asset_id": uid, "bytes": len(data)}

    # --- export and design space ---------------------------------------------

    @app.post("/projects/{pid}/export")
    def export_project(pid: str):
        doc, _ = store.read(pid)
        return Response(content=export_bytes(doc), media_type="application/json")

    @app.get("/design-space")
    def design_space():
        return designspace.design_space_dict()

    return app


async def _json_object(request: Request) -> dict:
    try:
        body = await request.json()
    except Exception:
        raise MalformedResponse("request body is not valid JSON") from None
    if not isinstance(body, dict):
        raise MalformedResponse("request body must be a JSON object")
    return body


def _parse(message: str, fn):
    """Coerce client-shaped data; any shape error becomes a typed 4xx."""
    try:
        return fn()
    except (KeyError, TypeError, ValueError, IndexError, AttributeError) as exc:
        raise MalformedResponse(f"{message}: {exc}") from None


def main(port: int | None = None) -> None:
    import uvicorn

    uvicorn.run(create_app(), host="127.0.0.1", port=port or int(os.environ.get("DB_PORT", "8008")))


if __name__ == "__main__":
    main()
