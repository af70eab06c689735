"""Declarative authoring scripts: a recorded list of mutations.

Each op mirrors one service mutation body 1:1, so an interactive session
can be recorded in the studio and replayed headlessly to the same
result. Scripts are the compile input for batch builds.
"""

from __future__ import annotations

import json
from pathlib import Path

from .compose import add_template_clip
from .document import (
    ProjectDocument,
    add_variant,
    put_layout,
    reclassify,
    remove_clip,
    reorder_clips,
    set_background,
    set_bgm,
    set_slot,
)
from .errors import MotionComicError
from .story import ActionCategory

SCRIPT_VERSION = 1


class AuthoringError(MotionComicError):
    code = "AuthoringError"


def apply_op(doc: ProjectDocument, op: dict) -> ProjectDocument:
    kind = op.get("op")
    if kind == "set_slot":
        anchor = op.get("anchor")
        offset = op.get("offset")
        if op.get("create_variant"):
            doc = add_variant(doc, str(op["entity"]), str(op.get("variant", "default")))
        return set_slot(
            doc,
            entity=str(op["entity"]),
            variant_name=str(op.get("variant", "default")),
            slot=str(op["slot"]),
            asset_id=op.get("asset"),
            anchor=(float(anchor[0]), float(anchor[1])) if anchor else None,
            offset=(float(offset[0]), float(offset[1])) if offset else None,
            scale=float(op["scale"]) if op.get("scale") is not None else None,
        )
    if kind == "set_background":
        return set_background(doc, int(op["scene"]), op.get("asset"))
    if kind == "set_bgm":
        return set_bgm(doc, int(op["scene"]), op.get("asset"), float(op.get("start_offset", 0.0)))
    if kind == "put_layout":
        return put_layout(doc, int(op["scene"]), list(op["placements"]))
    if kind == "add_clip":
        doc, _ = add_template_clip(
            doc,
            int(op["scene"]),
            str(op["template"]),
            int(op["action"]) if op.get("action") is not None else None,
            op.get("params") or {},
        )
        return doc
    if kind == "reorder":
        return reorder_clips(doc, int(op["scene"]), [str(c) for c in op["order"]])
    if kind == "delete_clip":
        return remove_clip(doc, int(op["scene"]), str(op["clip"]))
    if kind == "reclassify":
        return reclassify(doc, int(op["scene"]), int(op["action"]), ActionCategory.from_token(str(op["category"])))
    raise AuthoringError(f"unknown authoring op: {kind!r}")


def apply_script(doc: ProjectDocument, script: dict) -> ProjectDocument:
    if script.get("version", SCRIPT_VERSION) != SCRIPT_VERSION:
        raise AuthoringError(f"unsupported script version {script.get('version')!r}")
    for i, op in enumerate(script.get("ops", [])):
        try:
            doc = apply_op(doc, op)
        except MotionComicError as exc:
            raise AuthoringError(f"op {i} ({op.get('op')}) failed: {exc.message}", detail=exc.as_dict()) from exc
        except (KeyError, TypeError, ValueError, IndexError) as exc:
            raise AuthoringError(f"op {i} ({op.get('op')}) has the wrong shape: {exc}") from exc
    return doc


def load_script(path: str | Path) -> dict:
    with open(path, "r", encoding="utf-8") as f:
        script = json.load(f)
    if not isinstance(script, dict) or not isinstance(script.get("ops", []), list):
        raise AuthoringError("authoring script must be an object with an ops array")
    return script
