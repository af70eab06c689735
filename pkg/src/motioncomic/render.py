"""Frame rendering and export.

Timelines discretize at a fixed fps into standards-compliant SVG frames
(one file per frame, asset references by relative path). The export
document is self-contained: canvas constants, easing formulas, gait
constants, resolved part geometry and fully-resolved clips, so any
renderer can replay playback bit-identically without the project.
"""

from __future__ import annotations

import math
import shutil
from pathlib import Path

from . import canonjson
from .assets import AssetRef, asset_size, builtin_file
from .document import Placement, ProjectDocument, SceneRecord, Variant
from .engine import (
    CANVAS_H,
    CANVAS_W,
    DEFAULT_DURATION,
    DEFAULT_SPEED,
    GAIT_AMPLITUDE,
    GAIT_MAX_HZ,
    GAIT_MIN_HZ,
    AnimationClip,
    ElementState,
    SpawnedElement,
    Timeline,
    Transform,
    sample,
)
from .errors import NothingToExport, UnsavedLayout

DEFAULT_FPS = 30

_f = canonjson.format_float


def frame_count(duration: float, fps: float) -> int:
    """Inclusive endpoints: floor(duration * fps) + 1 frames."""
    if fps <= 0:
        raise ValueError("fps must be > 0")
    return math.floor(duration * fps) + 1


def _deg(rad: float) -> float:
    return rad * 180.0 / math.pi


def _group_transform(tr: Transform) -> str:
    sx = -tr.scale_x if tr.flip_h else tr.scale_x
    sy = -tr.scale_y if tr.flip_v else tr.scale_y
    parts = [f"translate({_f(tr.x)} {_f(tr.y)})"]
    if tr.rotation != 0.0:
        parts.append(f"rotate({_f(_deg(tr.rotation))})")
    if sx != 1.0 or sy != 1.0:
        parts.append(f"scale({_f(sx)} {_f(sy)})")
    return " ".join(parts)


def _part_svg(slot: str, spec, spin: float, asset_href: str) -> str:
    w, h = asset_size(spec.asset)
    ox, oy = spec.offset
    ax, ay = spec.anchor[0] * spec.scale, spec.anchor[1] * spec.scale
    t = [f"translate({_f(ox)} {_f(oy)})"]
    if spin != 0.0:
        t.append(f"rotate({_f(_deg(spin))} {_f(ax)} {_f(ay)})")
    if spec.scale != 1.0:
        t.append(f"scale({_f(spec.scale)})")
    return (
        f'    <g data-slot="{slot}" transform="{" ".join(t)}">'
        f'<image href="{asset_href}" x="{_f(-w / 2)}" y="{_f(-h / 2)}" width="{_f(w)}" height="{_f(h)}"/></g>'
    )


def _bubble_svg(sp: SpawnedElement) -> str:
    w, h = sp.width, sp.height
    out = []
    if sp.spawn_kind == "speech_bubble":
        out.append(
            f'    <rect x="{_f(-w / 2)}" y="{_f(-h / 2)}" width="{_f(w)}" height="{_f(h)}" rx="12"'
            ' fill="#ffffff" stroke="#333333" stroke-width="3"/>'
        )
        if sp.tail_to is not None:
            dx = sp.tail_to[0] - sp.transform.x
            dy = sp.tail_to[1] - sp.transform.y
            out.append(
                f'    <path d="M -12 {_f(h / 2 - 2)} L {_f(dx * 0.4)} {_f(dy * 0.7)} L 16 {_f(h / 2 - 2)} Z"'
                ' fill="#ffffff" stroke="#333333" stroke-width="3"/>'
            )
    elif sp.spawn_kind == "thought_bubble":
        out.append(
            f'    <ellipse cx="0" cy="0" rx="{_f(w / 2)}" ry="{_f(h / 2)}"'
            ' fill="#ffffff" stroke="#333333" stroke-width="3"/>'
        )
        if sp.tail_to is not None:
            dx = sp.tail_to[0] - sp.transform.x
            dy = sp.tail_to[1] - sp.transform.y
            out.append(f'    <circle cx="{_f(dx * 0.35)}" cy="{_f(dy * 0.55)}" r="9" fill="#ffffff" stroke="#333333" stroke-width="2"/>')
            out.append(f'    <circle cx="{_f(dx * 0.2)}" cy="{_f(dy * 0.75)}" r="5" fill="#ffffff" stroke="#333333" stroke-width="2"/>')
    n = len(sp.lines)
    for i, line in enumerate(sp.lines):
        y = (i - (n - 1) / 2.0) * 20.0 + 5.0
        esc = line.replace("&", "&amp;").replace("<", "&lt;").replace(">", "&gt;")
        weight = ' font-weight="bold"' if sp.spawn_kind == "text" else ""
        out.append(
            f'    <text x="0" y="{_f(y)}" text-anchor="middle" font-family="sans-serif"'
            f' font-size="16"{weight} fill="#222222">{esc}</text>'
        )
    return "\n".join(out)


def _asset_href(ref: AssetRef) -> str:
    # frame files live one level below the output root, next to assets/
    base = "../assets/builtin" if ref.kind == "builtin" else "../assets"
    return f"{base}/{ref.path}"


class _SceneGeometry:
    """Per-scene lookup tables used while drawing frames."""

    def __init__(self, doc: ProjectDocument, rec: SceneRecord):
        self.background = rec.layout.background
        self.placements: dict[str, Placement] = {p.element_id: p for p in rec.layout.placements}
        self.variants: dict[str, Variant] = {}
        for p in rec.layout.placements:
            proto = doc.prototype(p.entity)
            self.variants[p.element_id] = proto.variant(p.variant)
        self.spawned: dict[str, SpawnedElement] = {}
        for clip in rec.timeline.clips:
            for sp in clip.spawned_elements:
                self.spawned.setdefault(sp.element_id, sp)

    def asset_refs(self) -> list[AssetRef]:
        refs = []
        if self.background is not None:
            refs.append(self.background)
        for variant in self.variants.values():
            refs.extend(spec.asset for spec in variant.slots.values())
        for sp in self.spawned.values():
            if sp.asset_id is not None:
                from .assets import builtin_ref

                refs.append(builtin_ref(sp.asset_id))
        return refs


def render_state_svg(geometry: _SceneGeometry, states: list[ElementState]) -> bytes:
    """One frame: elements in z order (ties by placement order), opacity
    and blur applied, bubbles with wrapped text."""
    blurs = sorted({s.transform.blur for s in states if s.transform.blur > 0.0})
    lines = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{_f(CANVAS_W)}" height="{_f(CANVAS_H)}"'
        f' viewBox="0 0 {_f(CANVAS_W)} {_f(CANVAS_H)}">',
    ]
    if blurs:
        lines.append("  <defs>")
        for i, b in enumerate(blurs):
            lines.append(
                f'    <filter id="blur{i}" x="-50%" y="-50%" width="200%" height="200%">'
                f'<feGaussianBlur stdDeviation="{_f(b)}"/></filter>'
            )
        lines.append("  </defs>")
    blur_ids = {b: f"blur{i}" for i, b in enumerate(blurs)}
    if geometry.background is not None:
        lines.append(
            f'  <image href="{_asset_href(geometry.background)}" x="0" y="0"'
            f' width="{_f(CANVAS_W)}" height="{_f(CANVAS_H)}"/>'
        )
    else:
        lines.append(f'  <rect width="{_f(CANVAS_W)}" height="{_f(CANVAS_H)}" fill="#ffffff"/>')

    for state in states:
        if not state.visible:
            continue
        tr = state.transform
        attrs = [f'transform="{_group_transform(tr)}"']
        if tr.opacity < 1.0:
            attrs.append(f'opacity="{_f(tr.opacity)}"')
        if tr.blur > 0.0:
            attrs.append(f'filter="url(#{blur_ids[tr.blur]})"')
        lines.append(f'  <g data-element="{state.element_id}" {" ".join(attrs)}>')
        placement = geometry.placements.get(state.element_id)
        if placement is not None:
            variant = geometry.variants[state.element_id]
            for slot in sorted(variant.slots):
                spec = variant.slots[slot]
                spin = state.slot_rotations.get(slot, 0.0)
                lines.append(_part_svg(slot, spec, spin, _asset_href(spec.asset)))
        else:
            sp = geometry.spawned.get(state.element_id)
            if sp is not None:
                if sp.spawn_kind == "sprite" and sp.asset_id is not None:
                    from .assets import builtin_ref

                    ref = builtin_ref(sp.asset_id)
                    w, h = asset_size(ref)
                    lines.append(
                        f'    <image href="{_asset_href(ref)}" x="{_f(-w / 2)}" y="{_f(-h / 2)}"'
                        f' width="{_f(w)}" height="{_f(h)}"/>'
                    )
                else:
                    lines.append(_bubble_svg(sp))
        lines.append("  </g>")
    lines.append("</svg>")
    return ("\n".join(lines) + "\n").encode("utf-8")


def render_frames(doc: ProjectDocument, scene_id: int, fps: float = DEFAULT_FPS) -> list[bytes]:
    """All frames of one scene at ``fps``; frame k samples t = k/fps."""
    rec = doc.scene_record(scene_id)
    if not rec.layout.saved:
        raise UnsavedLayout(f"scene {scene_id} has no saved layout")
    geometry = _SceneGeometry(doc, rec)
    n = frame_count(rec.timeline.duration(), fps)
    frames = []
    for k in range(n):
        states = sample(rec.timeline, rec.layout, k / fps)
        frames.append(render_state_svg(geometry, states))
    return frames


# ---------------------------------------------------------------------------
# export document
# ---------------------------------------------------------------------------

def _export_placement(doc: ProjectDocument, p: Placement) -> dict:
    variant = doc.prototype(p.entity).variant(p.variant)
    parts = []
    for slot in sorted(variant.slots):
        spec = variant.slots[slot]
        w, h = asset_size(spec.asset)
        parts.append(
            {
                "slot": slot,
                "asset": spec.asset.to_dict(),
                "offset": [spec.offset[0], spec.offset[1]],
                "anchor": [spec.anchor[0], spec.anchor[1]],
                "scale": spec.scale,
                "width": w,
                "height": h,
            }
        )
    d = p.to_dict()
    d["parts"] = parts
    return d


def export_document(doc: ProjectDocument) -> dict:
    """Self-contained replay document for every scene with a saved
    layout, scenes concatenated in id order."""
    saved = [rec for rec in doc.scenes if rec.layout.saved]
    if not saved:
        raise NothingToExport("no scene has a saved layout")
    scenes = []
    for rec in sorted(saved, key=lambda r: r.scene.span.id):
        scenes.append(
            {
                "id": rec.scene.span.id,
                "background": rec.layout.background.to_dict() if rec.layout.background else None,
                "bgm": rec.layout.bgm.to_dict() if rec.layout.bgm else None,
                "placements": [_export_placement(doc, p) for p in rec.layout.placements],
                "clips": [c.to_dict() for c in rec.timeline.clips],
                "duration": canonjson.quantize(rec.timeline.duration()),
            }
        )
    return {
        "format": "motioncomic",
        "schema_version": doc.schema_version,
        "canvas": {"width": CANVAS_W, "height": CANVAS_H},
        "default_fps": DEFAULT_FPS,
        "defaults": {"speed": DEFAULT_SPEED, "duration": DEFAULT_DURATION},
        "easing": {
            "linear": "f(u) = u",
            "ease_in_out_cubic": "f(u) = 4*u^3 for u < 0.5, else 1 - ((-2*u + 2)^3)/2",
        },
        "gait": {
            "amplitude_rad": GAIT_AMPLITUDE,
            "frequency_hz": "clamp(speed/100, 1, 4)",
            "min_hz": GAIT_MIN_HZ,
            "max_hz": GAIT_MAX_HZ,
            "antiphase": True,
        },
        "scenes": scenes,
    }


def export_bytes(doc: ProjectDocument) -> bytes:
    return canonjson.dump_bytes(export_document(doc)) + b"\n"


class _ExportLayout:
    """Duck-typed layout over an exported scene, for replay."""

    def __init__(self, scene: dict):
        self.placements = [Placement.from_dict(p) for p in scene["placements"]]


def replay_export(export: dict, scene_id: int, t: float) -> list[ElementState]:
    """Sample an exported scene without the original project."""
    for scene in export["scenes"]:
        if scene["id"] == scene_id:
            timeline = Timeline(clips=tuple(AnimationClip.from_dict(c) for c in scene["clips"]))
            return sample(timeline, _ExportLayout(scene), t)
    raise NothingToExport(f"export has no scene {scene_id}")


# ---------------------------------------------------------------------------
# writing artifacts to disk
# ---------------------------------------------------------------------------

def write_export(doc: ProjectDocument, out_dir: str | Path, fps: float = DEFAULT_FPS) -> dict:
    """out/{motioncomic.json, scene-XXX/frame-XXXXXX.svg, assets/...}.

    Returns a manifest {scene_id: frame_count}. Deterministic: repeated
    runs produce byte-identical files.
    """
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    (out / "motioncomic.json").write_bytes(export_bytes(doc))
    counts = {}
    copied: set[str] = set()
    for rec in sorted(doc.scenes, key=lambda r: r.scene.span.id):
        if not rec.layout.saved:
            continue
        sid = rec.scene.span.id
        frames = render_frames(doc, sid, fps)
        scene_dir = out / f"scene-{sid:03d}"
        scene_dir.mkdir(parents=True, exist_ok=True)
        for k, data in enumerate(frames):
            (scene_dir / f"frame-{k:06d}.svg").write_bytes(data)
        counts[sid] = len(frames)
        for ref in _SceneGeometry(doc, rec).asset_refs():
            if ref.kind == "builtin" and ref.path not in copied:
                target = out / "assets" / "builtin" / ref.path
                target.parent.mkdir(parents=True, exist_ok=True)
                shutil.copyfile(builtin_file(ref), target)
                copied.add(ref.path)
    return counts
