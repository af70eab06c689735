"""Template instantiation: bind a pattern template to placed elements.

Resolution rules, in order, for every positional role:
explicit params -> placement matching the action's entity name -> error.
Drawn paths are smoothed (resample, centripetal spline, flatten) before
they enter a clip; bubbles and projectiles are spawned as auxiliary
elements that the clip's ops bring into view.
"""

from __future__ import annotations

import math
from dataclasses import replace

from . import engine
from .designspace import PatternTemplate, template_by_id
from .document import Placement, ProjectDocument, Prototype, SceneLayout, add_clip
from .engine import (
    AnimationClip,
    Appear,
    Disappear,
    FlipAxis,
    PathMove,
    RotateBy,
    ScaleTo,
    Stage,
    SpawnedElement,
    Swing,
    Transform,
    apply_gait,
)
from .errors import MissingActor, UnknownTemplate
from .paths import Point, polyline_length, smooth_drag_path
from .story import SvoAction

# bubble text metrics (canvas units)
TEXT_WRAP_CHARS = 24
FONT_SIZE = 16.0
CHAR_W = 8.0
LINE_H = 20.0
BUBBLE_PAD = 14.0
BUBBLE_GAP_FACTOR = 0.2  # gap above the speaker, in element heights


def wrap_text(text: str, width: int = TEXT_WRAP_CHARS) -> list[str]:
    """Greedy word wrap; words longer than the width hard-split."""
    words = text.split()
    if not words:
        return [""]
    lines: list[str] = []
    current = ""
    for word in words:
        while len(word) > width:
            if current:
                lines.append(current)
                current = ""
            lines.append(word[:width])
            word = word[width:]
        candidate = f"{current} {word}".strip()
        if len(candidate) <= width:
            current = candidate
        else:
            lines.append(current)
            current = word
    if current:
        lines.append(current)
    return lines


def _params_with_defaults(template: PatternTemplate, params: dict | None) -> dict:
    merged = {p.name: p.default for p in template.parameter_schema}
    merged.update(params or {})
    return merged


def _find_placement(layout: SceneLayout, entity_or_element: str) -> Placement | None:
    for p in layout.placements:
        if p.element_id == entity_or_element:
            return p
    for p in layout.placements:
        if p.entity == entity_or_element:
            return p
    return None


def _require_placement(layout: SceneLayout, name: str, role: str) -> Placement:
    found = _find_placement(layout, name) if name else None
    if found is None:
        raise MissingActor(role, f"role {role!r} ({name!r}) has no placed element")
    return found


def _resolve_point(layout: SceneLayout, value, role: str) -> Point:
    """A point literal [x, y], or an entity/element name to center on."""
    if isinstance(value, (list, tuple)) and len(value) == 2:
        return (float(value[0]), float(value[1]))
    if isinstance(value, str) and value:
        return _placement_pos(_require_placement(layout, value, role))
    raise MissingActor(role, f"role {role!r} needs a point or a placed element")


def _placement_pos(p: Placement) -> Point:
    return (p.transform.x, p.transform.y)


def _target_point(layout: SceneLayout, params: dict, action: SvoAction, role: str = "target") -> Point:
    if params.get("target") is not None:
        return _resolve_point(layout, params["target"], role)
    fallback = _find_placement(layout, action.receiver) or _find_placement(layout, action.object)
    if fallback is not None:
        return _placement_pos(fallback)
    raise MissingActor(role, f"no target point: draw a path, pass target=, or place {action.object!r}")


def _clamp_canvas(points: list[Point]) -> list[Point]:
    return [
        (min(engine.CANVAS_W, max(0.0, x)), min(engine.CANVAS_H, max(0.0, y)))
        for x, y in points
    ]


def _path_polyline(layout: SceneLayout, params: dict, start: Point, end_fallback) -> list[Point]:
    raw = params.get("path")
    if raw:
        pts = smooth_drag_path(_clamp_canvas([(float(p[0]), float(p[1])) for p in raw]))
        if len(pts) >= 2:
            return pts
    end = end_fallback()
    return [start, end]


def _variant_of(prototypes: dict[str, Prototype] | None, placement: Placement):
    if not prototypes:
        return None
    proto = prototypes.get(placement.entity)
    if proto is None:
        return None
    return proto.variants.get(placement.variant)


def _leg_slots(variant) -> tuple[str, ...]:
    if variant is None:
        return ()
    return tuple(s for s in engine.LEG_SLOTS if s in variant.slots)


def _element_bbox(variant, placement: Placement) -> tuple[float, float, float, float]:
    if variant is None:
        return (-50.0, -50.0, 50.0, 50.0)
    min_x, min_y, max_x, max_y = variant.bbox()
    sx, sy = placement.transform.scale_x, placement.transform.scale_y
    return (min_x * sx, min_y * sy, max_x * sx, max_y * sy)


def _label(action: SvoAction | None, template: PatternTemplate) -> str:
    if action is None:
        return template.display_name
    core = f"{action.subject} {action.verb.upper()} {action.object}".strip()
    return f"{core} - {template.display_name}"


def _bubble_spawn(
    spawn_id: str,
    kind: str,
    text: str,
    speaker: Placement,
    variant,
    z: int,
) -> SpawnedElement:
    lines = wrap_text(text)
    width = max(len(line) for line in lines) * CHAR_W + 2 * BUBBLE_PAD
    height = len(lines) * LINE_H + 2 * BUBBLE_PAD
    _, top, _, bottom = _element_bbox(variant, speaker)
    elem_h = bottom - top
    cx = speaker.transform.x
    cy = speaker.transform.y + top - BUBBLE_GAP_FACTOR * elem_h - height / 2.0
    return SpawnedElement(
        element_id=spawn_id,
        spawn_kind=kind,
        transform=Transform(x=cx, y=cy, opacity=0.0),
        z=z,
        text=text,
        lines=tuple(lines),
        width=width,
        height=height,
        tail_to=(speaker.transform.x, speaker.transform.y + top) if kind != "text" else None,
    )


def _sprite_spawn(spawn_id: str, asset_id: str, at: Point, z: int) -> SpawnedElement:
    return SpawnedElement(
        element_id=spawn_id,
        spawn_kind="sprite",
        transform=Transform(x=at[0], y=at[1], opacity=0.0),
        z=z,
        asset_id=asset_id,
    )


def _top_z(layout: SceneLayout) -> int:
    return max((p.z for p in layout.placements), default=0) + 100


def instantiate(
    template: PatternTemplate,
    action: SvoAction | None,
    layout: SceneLayout,
    params: dict | None = None,
    prototypes: dict[str, Prototype] | None = None,
    spawn_prefix: str = "spawn",
) -> AnimationClip:
    """Build a clip for one template application.

    ``prototypes`` (entity name -> Prototype) enables gait decoration
    and bubble anchoring from real part geometry; without it the gait
    is skipped and bubbles assume a nominal element size.
    """
    p = _params_with_defaults(template, params)
    act = action or SvoAction(id=-1, subject=str(p.get("subject", "")), verb="", object="", receiver="")
    tid = template.id
    stages: list[Stage] = []
    spawned: list[SpawnedElement] = []

    if tid in ("ptrans.path", "ptrans.dis_reappear", "atrans.transfer_path",
               "atrans.vanish_reappear_at_recipient", "ingest.approach_then_vanish", "ingest.vanish",
               "expel.emerge_then_path", "propel.strike", "propel.launch",
               "move.limb_gesture", "move.nod", "move.wave", "move.hop") or tid.startswith("speak.") or tid.startswith("mental."):
        subject = None
        if tid.startswith(("ptrans.", "move.", "propel.", "expel.")) or tid.startswith(("speak.", "mental.")):
            subject = _require_placement(layout, str(p.get("subject") or act.subject), "subject")

        if tid == "ptrans.path":
            start = _placement_pos(subject)
            polyline = _path_polyline(layout, p, start, lambda: _target_point(layout, p, act))
            pm = PathMove(polyline=tuple(polyline), speed=float(p["speed"]), gait=bool(p["gait"]),
                          off_canvas_ok=True)
            stage = Stage(bindings=((subject.element_id, pm),))
            if pm.gait:
                stage = apply_gait(stage, _leg_slots(_variant_of(prototypes, subject)))
            stages.append(stage)

        elif tid == "ptrans.dis_reappear":
            target = _target_point(layout, p, act)
            d = float(p["duration"])
            stages.append(Stage(bindings=((subject.element_id, Disappear(duration_s=d)),)))
            stages.append(Stage(bindings=((subject.element_id, Appear(duration_s=d, at=target)),)))

        elif tid == "atrans.transfer_path":
            obj = _require_placement(layout, str(p.get("object") or act.object), "object")
            if p.get("target") is not None:
                recv = _resolve_point(layout, p["target"], "receiver")
            else:
                recv = _placement_pos(_require_placement(layout, act.receiver, "receiver"))
            polyline = _path_polyline(layout, p, _placement_pos(obj), lambda: recv)
            stages.append(Stage(bindings=((obj.element_id, PathMove(polyline=tuple(polyline), speed=float(p["speed"]), off_canvas_ok=True)),)))

        elif tid == "atrans.vanish_reappear_at_recipient":
            obj = _require_placement(layout, str(p.get("object") or act.object), "object")
            if p.get("target") is not None:
                recv = _resolve_point(layout, p["target"], "receiver")
            else:
                rp = _placement_pos(_require_placement(layout, act.receiver, "receiver"))
                recv = (rp[0] + 80.0, rp[1])  # beside, not on top of, the recipient
            d = float(p["duration"])
            stages.append(Stage(bindings=((obj.element_id, Disappear(duration_s=d)),)))
            stages.append(Stage(bindings=((obj.element_id, Appear(duration_s=d, at=recv)),)))

        elif tid == "ingest.approach_then_vanish":
            ingester = _require_placement(layout, str(p.get("subject") or act.subject), "subject")
            obj = _require_placement(layout, str(p.get("object") or act.object), "object")
            polyline = [_placement_pos(obj), _placement_pos(ingester)]
            stages.append(Stage(bindings=((obj.element_id, PathMove(polyline=tuple(polyline), speed=float(p["speed"]), off_canvas_ok=True)),)))
            stages.append(Stage(bindings=((obj.element_id, Disappear(mode=str(p["mode"]), duration_s=float(p["duration"]))),)))

        elif tid == "ingest.vanish":
            obj = _require_placement(layout, str(p.get("object") or act.object), "object")
            stages.append(Stage(bindings=((obj.element_id, Disappear(mode=str(p["mode"]), duration_s=float(p["duration"]))),)))

        elif tid == "expel.emerge_then_path":
            origin = _placement_pos(subject)
            spawn = _sprite_spawn(f"{spawn_prefix}.emit", str(p["asset"]), origin, _top_z(layout))
            spawned.append(spawn)
            def _default_out() -> Point:
                return (origin[0] + 150.0, origin[1])
            try:
                end = _target_point(layout, p, act) if (p.get("target") is not None or act.object) else _default_out()
            except MissingActor:
                end = _default_out()
            polyline = _path_polyline(layout, p, origin, lambda: end)
            stages.append(Stage(bindings=((spawn.element_id, Appear(duration_s=float(p["duration"]))),)))
            stages.append(Stage(bindings=((spawn.element_id, PathMove(polyline=tuple(polyline), speed=float(p["speed"]), off_canvas_ok=True)),)))

        elif tid == "propel.launch":
            origin = _placement_pos(subject)
            spawn = _sprite_spawn(f"{spawn_prefix}.projectile", str(p["asset"]), origin, _top_z(layout))
            spawned.append(spawn)
            try:
                end = _target_point(layout, p, act)
            except MissingActor:
                end = (origin[0] + 200.0, origin[1])
            polyline = _path_polyline(layout, p, origin, lambda: end)
            stages.append(Stage(bindings=((spawn.element_id, Appear(duration_s=float(p["duration"]))),)))
            stages.append(Stage(bindings=((spawn.element_id, PathMove(polyline=tuple(polyline), speed=float(p["speed"]), off_canvas_ok=True)),)))

        elif tid == "propel.strike":
            duration = float(p["duration"])
            origin = _placement_pos(subject)
            try:
                target = _target_point(layout, p, act)
            except MissingActor:
                target = (origin[0] + 60.0, origin[1])
            mid = (origin[0] + 0.3 * (target[0] - origin[0]), origin[1] + 0.3 * (target[1] - origin[1]))
            lunge = [origin, mid, origin]
            speed = max(polyline_length(lunge), 1e-9) / duration
            swing = Swing(amplitude=float(p["angle"]), frequency=0.5 / duration, duration_s=duration)
            slot = str(p["slot"])
            variant = _variant_of(prototypes, subject)
            arm_target = (
                f"{subject.element_id}/{slot}" if variant is not None and slot in variant.slots
                else subject.element_id
            )
            stages.append(
                Stage(bindings=(
                    (arm_target, swing),
                    (subject.element_id, PathMove(polyline=tuple(lunge), speed=speed, off_canvas_ok=True)),
                ))
            )

        elif tid == "move.limb_gesture":
            slot = str(p["slot"])
            variant = _variant_of(prototypes, subject)
            if variant is None or slot not in variant.slots:
                raise MissingActor(slot, f"{act.subject!r} has no {slot!r} slot to gesture with")
            stages.append(Stage(bindings=((f"{subject.element_id}/{slot}",
                                           RotateBy(delta=float(p["angle"]), duration_s=float(p["duration"]))),)))

        elif tid == "move.nod":
            variant = _variant_of(prototypes, subject)
            if variant is None or "head" not in variant.slots:
                raise MissingActor("head", f"{act.subject!r} has no head slot to nod")
            stages.append(Stage(bindings=((f"{subject.element_id}/head",
                                           Swing(amplitude=float(p["amplitude"]), frequency=float(p["frequency"]),
                                                 duration_s=float(p["duration"]))),)))

        elif tid == "move.wave":
            slot = str(p["slot"])
            variant = _variant_of(prototypes, subject)
            if variant is None or slot not in variant.slots:
                raise MissingActor(slot, f"{act.subject!r} has no {slot!r} slot to wave")
            stages.append(Stage(bindings=((f"{subject.element_id}/{slot}",
                                           Swing(amplitude=float(p["amplitude"]), frequency=float(p["frequency"]),
                                                 duration_s=float(p["duration"]))),)))

        elif tid == "move.hop":
            origin = _placement_pos(subject)
            dx, h = float(p["distance"]), float(p["height"])
            arc = [
                (origin[0] + dx * t, origin[1] - 4.0 * h * t * (1.0 - t))
                for t in (i / 16.0 for i in range(17))
            ]
            stages.append(Stage(bindings=((subject.element_id,
                                           PathMove(polyline=tuple(arc), speed=float(p["speed"]), off_canvas_ok=True)),)))

        elif tid.startswith("speak.") or tid.startswith("mental."):
            text = str(p.get("text") or act.object or act.verb)
            if tid == "speak.onomatopoeia_text":
                kind = "text"
            elif tid.startswith("mental."):
                kind = "thought_bubble"
            else:
                kind = "speech_bubble"
            variant = _variant_of(prototypes, subject)
            spawn = _bubble_spawn(f"{spawn_prefix}.bubble", kind, text, subject, variant, _top_z(layout))
            spawned.append(spawn)
            mode = "grow" if tid.endswith("scale_in") else "fade"
            stages.append(Stage(bindings=((spawn.element_id, Appear(mode=mode, duration_s=float(p["duration"]))),)))
            if p.get("hide_at_end"):
                stages.append(Stage(bindings=((spawn.element_id, Disappear(duration_s=float(p["duration"]))),)))
    else:
        raise UnknownTemplate(f"no instantiation rule for template {template.id!r}")

    return AnimationClip(
        id="",
        label=_label(action, template),
        stages=tuple(stages),
        source_action_id=action.id if action else None,
        spawned_elements=tuple(spawned),
        template_id=template.id,
    )


# ---------------------------------------------------------------------------
# direct atomic operations (no template, one element, one op)
# ---------------------------------------------------------------------------

_ATOMIC = {
    "atomic.path_move": "Path Movement",
    "atomic.scale": "Scale",
    "atomic.rotation": "Rotation",
    "atomic.flip": "Flip",
    "atomic.appearance": "Appearance",
    "atomic.disappearance": "Disappearance",
}


def instantiate_atomic(template_id: str, layout: SceneLayout, params: dict) -> AnimationClip:
    element = _require_placement(layout, str(params.get("element", "")), "element")
    eid = element.element_id
    if template_id == "atomic.path_move":
        raw = params.get("path") or []
        pts = smooth_drag_path(_clamp_canvas([(float(q[0]), float(q[1])) for q in raw]))
        if len(pts) < 2:
            raise MissingActor("path", "atomic path movement needs a drawn path")
        op: engine.AtomicOp = PathMove(polyline=tuple(pts), speed=float(params.get("speed", engine.DEFAULT_SPEED)),
                                       gait=bool(params.get("gait", False)))
    elif template_id == "atomic.scale":
        op = ScaleTo(float(params.get("to_x", 1.0)), float(params.get("to_y", 1.0)),
                     float(params.get("duration", engine.DEFAULT_DURATION)))
    elif template_id == "atomic.rotation":
        op = RotateBy(float(params.get("delta", math.pi / 2)), float(params.get("duration", engine.DEFAULT_DURATION)))
    elif template_id == "atomic.flip":
        op = FlipAxis(str(params.get("axis", "h")))
    elif template_id == "atomic.appearance":
        at = params.get("at")
        op = Appear(str(params.get("mode", "fade")), float(params.get("duration", engine.DEFAULT_DURATION)),
                    at=(float(at[0]), float(at[1])) if at else None)
    elif template_id == "atomic.disappearance":
        op = Disappear(str(params.get("mode", "fade")), float(params.get("duration", engine.DEFAULT_DURATION)))
    else:
        raise UnknownTemplate(f"no atomic operation {template_id!r}")
    return AnimationClip(
        id="",
        label=f"{element.entity} - {_ATOMIC[template_id]}",
        stages=(Stage(bindings=((eid, op),)),),
        template_id=template_id,
    )


def add_template_clip(
    doc: ProjectDocument,
    scene_id: int,
    template_id: str,
    action_id: int | None,
    params: dict | None = None,
) -> tuple[ProjectDocument, AnimationClip]:
    """Compose and append a clip in one document mutation."""
    rec = doc.scene_record(scene_id)
    spawn_prefix = f"c{rec.timeline.clip_seq}"
    if template_id in _ATOMIC:
        clip = instantiate_atomic(template_id, rec.layout, params or {})
    else:
        template = template_by_id(template_id)
        action = rec.scene.action(action_id) if action_id is not None else None
        protos = {pr.entity.name: pr for pr in doc.prototypes + doc.item_prototypes}
        clip = instantiate(template, action, rec.layout, params, protos, spawn_prefix=spawn_prefix)
    return add_clip(doc, scene_id, clip)
