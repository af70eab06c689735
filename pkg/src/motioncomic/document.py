"""The persistent project document: story, analysis results, prototypes,
per-scene layouts/timelines/BGM, uploads, and save/load.

One writer per project; every operation returns a new document value.
Floats are snapped onto the canonical 9-significant-digit grid as they
enter the document, so save -> load round-trips are exact and equal
documents serialize byte-identically.
"""

from __future__ import annotations

import os
import re
import shutil
from dataclasses import dataclass, field, replace
from pathlib import Path

from . import canonjson
from .analyzers import AnalyzerContract
from .assets import AssetRef, asset_size, builtin_manifest, builtin_ref
from .engine import AnimationClip, Timeline, Transform
from .errors import (
    CorruptDocument,
    EmptyStory,
    InvariantViolation,
    UnknownAsset,
    UnknownEntity,
    UnknownScene,
    UnknownVariant,
)
from .pipeline import analyze_story, reclassify_action, resegment
from .story import ActionCategory, EntityRef, Scene, SceneSpan, Sentence, tokenize_sentences

SCHEMA_VERSION = "1.0"

CHARACTER_SLOTS = ("head", "body", "left_arm", "right_arm", "left_leg", "right_leg")
ITEM_SLOTS = ("sprite",)

_ID_UNSAFE = re.compile(r"[/#\s]+")


def _qfloats(value):
    """Recursively snap floats in a JSON-ish structure onto the canonical grid."""
    if isinstance(value, float):
        return canonjson.quantize(value)
    if isinstance(value, dict):
        return {k: _qfloats(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_qfloats(v) for v in value]
    return value


def quantize_transform(tr: Transform) -> Transform:
    return Transform.from_dict(_qfloats(tr.to_dict()))


def quantize_clip(clip: AnimationClip) -> AnimationClip:
    return AnimationClip.from_dict(_qfloats(clip.to_dict()))


# ---------------------------------------------------------------------------
# prototypes
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class SlotSpec:
    """One body-part slot: which asset fills it and how it sits on the rig.

    ``offset`` positions the part's center relative to the element
    origin; ``anchor`` is the rotation pivot in part-local units
    (pre-scale, relative to the part center)."""

    asset: AssetRef
    offset: tuple[float, float] = (0.0, 0.0)
    anchor: tuple[float, float] = (0.0, 0.0)
    scale: float = 1.0

    def to_dict(self) -> dict:
        return {
            "asset": self.asset.to_dict(),
            "offset": [self.offset[0], self.offset[1]],
            "anchor": [self.anchor[0], self.anchor[1]],
            "scale": self.scale,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "SlotSpec":
        return cls(
            asset=AssetRef.from_dict(d["asset"]),
            offset=(float(d["offset"][0]), float(d["offset"][1])),
            anchor=(float(d["anchor"][0]), float(d["anchor"][1])),
            scale=float(d.get("scale", 1.0)),
        )


@dataclass(frozen=True)
class Variant:
    name: str
    slots: dict[str, SlotSpec] = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {"name": self.name, "slots": {k: v.to_dict() for k, v in self.slots.items()}}

    @classmethod
    def from_dict(cls, d: dict) -> "Variant":
        return cls(name=str(d["name"]), slots={k: SlotSpec.from_dict(v) for k, v in d["slots"].items()})

    def bbox(self) -> tuple[float, float, float, float]:
        """(min_x, min_y, max_x, max_y) of the rest pose around the origin."""
        if not self.slots:
            return (0.0, 0.0, 0.0, 0.0)
        xs, ys = [], []
        for spec in self.slots.values():
            w, h = asset_size(spec.asset)
            hw, hh = w * spec.scale / 2.0, h * spec.scale / 2.0
            xs += [spec.offset[0] - hw, spec.offset[0] + hw]
            ys += [spec.offset[1] - hh, spec.offset[1] + hh]
        return (min(xs), min(ys), max(xs), max(ys))


@dataclass(frozen=True)
class Prototype:
    entity: EntityRef
    variants: dict[str, Variant] = field(default_factory=dict)

    def variant(self, name: str) -> Variant:
        try:
            return self.variants[name]
        except KeyError:
            raise UnknownVariant(f"{self.entity.name!r} has no variant {name!r}") from None

    def to_dict(self) -> dict:
        return {"entity": self.entity.to_dict(), "variants": {k: v.to_dict() for k, v in self.variants.items()}}

    @classmethod
    def from_dict(cls, d: dict) -> "Prototype":
        return cls(
            entity=EntityRef.from_dict(d["entity"]),
            variants={k: Variant.from_dict(v) for k, v in d["variants"].items()},
        )


def default_character_variant() -> Variant:
    """Six-slot humanoid stub; every part swappable later."""
    arm = builtin_ref("limb.arm")
    leg = builtin_ref("limb.leg")
    return Variant(
        name="default",
        slots={
            "head": SlotSpec(builtin_ref("head.blank"), offset=(0.0, -95.0), scale=0.9),
            "body": SlotSpec(builtin_ref("body.plain"), offset=(0.0, 0.0)),
            "left_arm": SlotSpec(arm, offset=(-60.0, -20.0), anchor=(0.0, -30.0)),
            "right_arm": SlotSpec(arm, offset=(60.0, -20.0), anchor=(0.0, -30.0)),
            "left_leg": SlotSpec(leg, offset=(-22.0, 92.0), anchor=(0.0, -38.0)),
            "right_leg": SlotSpec(leg, offset=(22.0, 92.0), anchor=(0.0, -38.0)),
        },
    )


def default_item_variant() -> Variant:
    return Variant(name="default", slots={"sprite": SlotSpec(builtin_ref("item.box"))})


# ---------------------------------------------------------------------------
# layouts and scene records
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Placement:
    element_id: str
    entity: str
    variant: str
    transform: Transform
    z: int

    def to_dict(self) -> dict:
        return {
            "element_id": self.element_id,
            "entity": self.entity,
            "variant": self.variant,
            "transform": self.transform.to_dict(),
            "z": self.z,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "Placement":
        return cls(
            element_id=str(d["element_id"]),
            entity=str(d["entity"]),
            variant=str(d["variant"]),
            transform=Transform.from_dict(d["transform"]),
            z=int(d["z"]),
        )


@dataclass(frozen=True)
class BgmRef:
    asset: AssetRef
    start_offset: float = 0.0

    def to_dict(self) -> dict:
        return {"asset": self.asset.to_dict(), "start_offset": self.start_offset}

    @classmethod
    def from_dict(cls, d: dict) -> "BgmRef":
        return cls(asset=AssetRef.from_dict(d["asset"]), start_offset=float(d.get("start_offset", 0.0)))


@dataclass(frozen=True)
class SceneLayout:
    background: AssetRef | None = None
    placements: tuple[Placement, ...] = ()
    bgm: BgmRef | None = None
    saved: bool = False

    def placement(self, element_id: str):
        for p in self.placements:
            if p.element_id == element_id:
                return p
        return None

    def to_dict(self) -> dict:
        return {
            "background": self.background.to_dict() if self.background else None,
            "placements": [p.to_dict() for p in self.placements],
            "bgm": self.bgm.to_dict() if self.bgm else None,
            "saved": self.saved,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "SceneLayout":
        return cls(
            background=AssetRef.from_dict(d["background"]) if d.get("background") else None,
            placements=tuple(Placement.from_dict(p) for p in d.get("placements", [])),
            bgm=BgmRef.from_dict(d["bgm"]) if d.get("bgm") else None,
            saved=bool(d.get("saved", False)),
        )


@dataclass(frozen=True)
class SceneRecord:
    scene: Scene
    layout: SceneLayout = field(default_factory=SceneLayout)
    timeline: Timeline = field(default_factory=Timeline)

    def to_dict(self) -> dict:
        return {"scene": self.scene.to_dict(), "layout": self.layout.to_dict(), "timeline": self.timeline.to_dict()}

    @classmethod
    def from_dict(cls, d: dict) -> "SceneRecord":
        return cls(
            scene=Scene.from_dict(d["scene"]),
            layout=SceneLayout.from_dict(d.get("layout", {"placements": []})),
            timeline=Timeline.from_dict(d.get("timeline", {})),
        )


@dataclass(frozen=True)
class ProjectDocument:
    schema_version: str
    story: tuple[Sentence, ...]
    scenes: tuple[SceneRecord, ...]
    prototypes: tuple[Prototype, ...] = ()
    item_prototypes: tuple[Prototype, ...] = ()
    asset_manifest: tuple[AssetRef, ...] = ()  # uploads only
    extras: dict = field(default_factory=dict)  # unknown future fields, preserved

    def scene_record(self, scene_id: int) -> SceneRecord:
        for rec in self.scenes:
            if rec.scene.span.id == scene_id:
                return rec
        raise UnknownScene(f"no scene {scene_id}")

    def prototype(self, entity_name: str) -> Prototype:
        for p in self.prototypes + self.item_prototypes:
            if p.entity.name == entity_name:
                return p
        raise UnknownEntity(f"no prototype for entity {entity_name!r}")

    def to_dict(self) -> dict:
        d = dict(self.extras)
        d.update(
            {
                "schema_version": self.schema_version,
                "story": [s.to_dict() for s in self.story],
                "scenes": [r.to_dict() for r in self.scenes],
                "prototypes": [p.to_dict() for p in self.prototypes],
                "item_prototypes": [p.to_dict() for p in self.item_prototypes],
                "asset_manifest": [a.to_dict() for a in self.asset_manifest],
            }
        )
        return d

    @classmethod
    def from_dict(cls, d: dict) -> "ProjectDocument":
        known = {"schema_version", "story", "scenes", "prototypes", "item_prototypes", "asset_manifest"}
        try:
            return cls(
                schema_version=str(d["schema_version"]),
                story=tuple(Sentence.from_dict(s) for s in d["story"]),
                scenes=tuple(SceneRecord.from_dict(r) for r in d["scenes"]),
                prototypes=tuple(Prototype.from_dict(p) for p in d.get("prototypes", [])),
                item_prototypes=tuple(Prototype.from_dict(p) for p in d.get("item_prototypes", [])),
                asset_manifest=tuple(AssetRef.from_dict(a) for a in d.get("asset_manifest", [])),
                extras={k: v for k, v in d.items() if k not in known},
            )
        except (KeyError, TypeError, ValueError, IndexError) as exc:
            raise CorruptDocument(f"document structure invalid: {exc}") from exc


def _replace_scene(doc: ProjectDocument, scene_id: int, rec: SceneRecord) -> ProjectDocument:
    scenes = tuple(rec if r.scene.span.id == scene_id else r for r in doc.scenes)
    return replace(doc, scenes=scenes)


# ---------------------------------------------------------------------------
# project construction
# ---------------------------------------------------------------------------

def _stub_prototypes(scenes: list[Scene]) -> tuple[tuple[Prototype, ...], tuple[Prototype, ...]]:
    chars: dict[str, Prototype] = {}
    items: dict[str, Prototype] = {}
    for scene in scenes:
        for ref in scene.characters:
            if ref.name not in chars:
                chars[ref.name] = Prototype(entity=ref, variants={"default": default_character_variant()})
        for ref in scene.items:
            if ref.name not in items and ref.name not in chars:
                items[ref.name] = Prototype(entity=ref, variants={"default": default_item_variant()})
    return tuple(chars.values()), tuple(items.values())


def new_project(story_text: str, analyzer: AnalyzerContract) -> ProjectDocument:
    """Tokenize, analyze, and assemble a fresh document: scenes from the
    pipeline, empty layouts/timelines, prototypes stubbed per entity."""
    story = tokenize_sentences(story_text)
    scenes = analyze_story(story, analyzer)
    chars, items = _stub_prototypes(scenes)
    return ProjectDocument(
        schema_version=SCHEMA_VERSION,
        story=tuple(story),
        scenes=tuple(SceneRecord(scene=s) for s in scenes),
        prototypes=chars,
        item_prototypes=items,
    )


# ---------------------------------------------------------------------------
# prototype editing
# ---------------------------------------------------------------------------

def _slot_names_for(prototype: Prototype) -> tuple[str, ...]:
    return CHARACTER_SLOTS if prototype.entity.kind == "character" else ITEM_SLOTS


def add_variant(doc: ProjectDocument, entity: str, variant_name: str) -> ProjectDocument:
    """Create an empty variant (filled via set_slot before it is usable)."""
    proto = doc.prototype(entity)
    if variant_name in proto.variants:
        return doc
    variants = dict(proto.variants)
    variants[variant_name] = Variant(name=variant_name, slots={})
    return _swap_prototype(doc, replace(proto, variants=variants))


def set_slot(
    doc: ProjectDocument,
    entity: str,
    variant_name: str,
    slot: str,
    asset_id: str | None,
    anchor: tuple[float, float] | None = None,
    offset: tuple[float, float] | None = None,
    scale: float | None = None,
) -> ProjectDocument:
    """Swap one slot's asset (or clear it with asset_id=None).

    Only the named slot changes; placements and timelines are untouched,
    so every placed instance re-renders with the new asset in place.
    """
    proto = doc.prototype(entity)
    variant = proto.variant(variant_name)
    if slot not in _slot_names_for(proto):
        raise UnknownVariant(f"{slot!r} is not a slot of a {proto.entity.kind} prototype")
    slots = dict(variant.slots)
    if asset_id is None:
        if slot not in slots:
            return doc
        if len(slots) == 1:
            raise InvariantViolation("a variant must keep at least one populated slot")
        del slots[slot]
    else:
        ref = builtin_ref(asset_id) if _is_builtin(asset_id) else _upload_ref(doc, asset_id)
        old = slots.get(slot)
        base = old or _default_slot_geometry(slot)
        slots[slot] = SlotSpec(
            asset=ref,
            offset=tuple(_qfloats(list(offset))) if offset else base.offset,
            anchor=tuple(_qfloats(list(anchor))) if anchor else base.anchor,
            scale=canonjson.quantize(scale) if scale is not None else base.scale,
        )
    variants = dict(proto.variants)
    variants[variant_name] = Variant(name=variant_name, slots=slots)
    return _swap_prototype(doc, replace(proto, variants=variants))


def _default_slot_geometry(slot: str) -> SlotSpec:
    template = default_character_variant().slots
    if slot in template:
        return template[slot]
    return default_item_variant().slots["sprite"]


def _is_builtin(asset_id: str) -> bool:
    return asset_id in builtin_manifest()


def _upload_ref(doc: ProjectDocument, asset_id: str) -> AssetRef:
    for ref in doc.asset_manifest:
        if ref.id == asset_id:
            return ref
    raise UnknownAsset(f"no asset {asset_id!r} (not builtin, not uploaded)")


def resolve_asset(doc: ProjectDocument, asset_id: str) -> AssetRef:
    if _is_builtin(asset_id):
        return builtin_ref(asset_id)
    return _upload_ref(doc, asset_id)


def _swap_prototype(doc: ProjectDocument, proto: Prototype) -> ProjectDocument:
    if proto.entity.kind == "character":
        return replace(
            doc, prototypes=tuple(proto if p.entity.name == proto.entity.name else p for p in doc.prototypes)
        )
    return replace(
        doc,
        item_prototypes=tuple(proto if p.entity.name == proto.entity.name else p for p in doc.item_prototypes),
    )


def register_upload(doc: ProjectDocument, asset_id: str, filename: str, mime: str) -> ProjectDocument:
    if _is_builtin(asset_id) or any(a.id == asset_id for a in doc.asset_manifest):
        raise InvariantViolation(f"asset id {asset_id!r} already taken")
    ref = AssetRef(id=asset_id, kind="uploaded", path=f"uploads/{filename}", mime=mime)
    return replace(doc, asset_manifest=doc.asset_manifest + (ref,))


# ---------------------------------------------------------------------------
# layout editing
# ---------------------------------------------------------------------------

def _safe_id(name: str) -> str:
    return _ID_UNSAFE.sub("-", name)


def place_element(
    doc: ProjectDocument,
    scene_id: int,
    entity: str,
    variant: str,
    transform: Transform,
    z: int,
) -> tuple[ProjectDocument, str]:
    """Add one placed instance; the same entity may be placed repeatedly
    (each placement gets a distinct element id)."""
    proto = doc.prototype(entity)
    proto.variant(variant)  # raises UnknownVariant
    rec = doc.scene_record(scene_id)
    count = sum(1 for p in rec.layout.placements if p.entity == entity)
    element_id = f"{_safe_id(entity)}#{count}"
    placement = Placement(
        element_id=element_id, entity=entity, variant=variant, transform=quantize_transform(transform), z=z
    )
    layout = replace(rec.layout, placements=rec.layout.placements + (placement,), saved=False)
    return _replace_scene(doc, scene_id, replace(rec, layout=layout)), element_id


def put_layout(doc: ProjectDocument, scene_id: int, placements: list[dict]) -> ProjectDocument:
    """Replace the whole placement list declaratively and save the snapshot.

    Each spec: {entity, variant?, x, y, scale_x?, scale_y?, rotation?,
    flip_h?, flip_v?, opacity?, blur?, z?}.
    """
    rec = doc.scene_record(scene_id)
    doc = _replace_scene(doc, scene_id, replace(rec, layout=replace(rec.layout, placements=(), saved=False)))
    for i, spec in enumerate(placements):
        tr = Transform(
            x=float(spec.get("x", 0.0)),
            y=float(spec.get("y", 0.0)),
            scale_x=float(spec.get("scale_x", 1.0)),
            scale_y=float(spec.get("scale_y", 1.0)),
            rotation=float(spec.get("rotation", 0.0)),
            flip_h=bool(spec.get("flip_h", False)),
            flip_v=bool(spec.get("flip_v", False)),
            opacity=float(spec.get("opacity", 1.0)),
            blur=float(spec.get("blur", 0.0)),
        )
        doc, _ = place_element(
            doc, scene_id, str(spec["entity"]), str(spec.get("variant", "default")), tr, int(spec.get("z", i))
        )
    return save_layout(doc, scene_id)


def save_layout(doc: ProjectDocument, scene_id: int) -> ProjectDocument:
    """Freeze the snapshot that sample(t=0) returns."""
    rec = doc.scene_record(scene_id)
    return _replace_scene(doc, scene_id, replace(rec, layout=replace(rec.layout, saved=True)))


def set_background(doc: ProjectDocument, scene_id: int, asset_id: str | None) -> ProjectDocument:
    rec = doc.scene_record(scene_id)
    ref = resolve_asset(doc, asset_id) if asset_id else None
    return _replace_scene(doc, scene_id, replace(rec, layout=replace(rec.layout, background=ref)))


def set_bgm(doc: ProjectDocument, scene_id: int, asset_id: str | None, start_offset: float = 0.0) -> ProjectDocument:
    rec = doc.scene_record(scene_id)
    bgm = BgmRef(asset=resolve_asset(doc, asset_id), start_offset=canonjson.quantize(start_offset)) if asset_id else None
    return _replace_scene(doc, scene_id, replace(rec, layout=replace(rec.layout, bgm=bgm)))


# ---------------------------------------------------------------------------
# timeline editing
# ---------------------------------------------------------------------------

def add_clip(doc: ProjectDocument, scene_id: int, clip: AnimationClip) -> tuple[ProjectDocument, AnimationClip]:
    rec = doc.scene_record(scene_id)
    seq = rec.timeline.clip_seq
    assigned = quantize_clip(replace(clip, id=f"c{seq}"))
    timeline = Timeline(clips=rec.timeline.clips + (assigned,), clip_seq=seq + 1)
    return _replace_scene(doc, scene_id, replace(rec, timeline=timeline)), assigned


def remove_clip(doc: ProjectDocument, scene_id: int, clip_id: str) -> ProjectDocument:
    from .engine import remove as timeline_remove

    rec = doc.scene_record(scene_id)
    return _replace_scene(doc, scene_id, replace(rec, timeline=timeline_remove(rec.timeline, clip_id)))


def reorder_clips(doc: ProjectDocument, scene_id: int, order: list[str]) -> ProjectDocument:
    """Reorder by clip ids (the service/UI shape of the permutation)."""
    from .engine import reorder as timeline_reorder
    from .errors import BadPermutation

    rec = doc.scene_record(scene_id)
    ids = [c.id for c in rec.timeline.clips]
    try:
        perm = tuple(ids.index(cid) for cid in order)
    except ValueError as exc:
        raise BadPermutation(f"unknown clip id in order: {order}") from exc
    return _replace_scene(doc, scene_id, replace(rec, timeline=timeline_reorder(rec.timeline, perm)))


def reclassify(doc: ProjectDocument, scene_id: int, action_id: int, category: ActionCategory) -> ProjectDocument:
    rec = doc.scene_record(scene_id)
    return _replace_scene(doc, scene_id, replace(rec, scene=reclassify_action(rec.scene, action_id, category)))


def resegment_project(doc: ProjectDocument, spans: list[SceneSpan], analyzer: AnalyzerContract) -> ProjectDocument:
    """Apply edited spans: unchanged scene texts keep their analysis,
    layout and timeline; changed spans are re-analyzed fresh."""
    story = list(doc.story)
    pairs = resegment(story, [r.scene for r in doc.scenes], spans, analyzer)
    records = []
    for scene, reused_from in pairs:
        if reused_from is not None:
            old = doc.scenes[reused_from]
            records.append(SceneRecord(scene=scene, layout=old.layout, timeline=old.timeline))
        else:
            records.append(SceneRecord(scene=scene))
    return replace(doc, scenes=tuple(records))


# ---------------------------------------------------------------------------
# validation, save, load
# ---------------------------------------------------------------------------

def validate_document(doc: ProjectDocument) -> list[str]:
    """Referential integrity sweep; empty list means sound."""
    problems: list[str] = []
    names = {p.entity.name for p in doc.prototypes + doc.item_prototypes}
    if len(doc.prototypes) + len(doc.item_prototypes) != len(names):
        problems.append("duplicate entity names across prototypes")
    for proto in doc.prototypes + doc.item_prototypes:
        for vname, variant in proto.variants.items():
            if not variant.slots:
                problems.append(f"prototype {proto.entity.name!r} variant {vname!r} has no populated slot")
    for rec in doc.scenes:
        sid = rec.scene.span.id
        seen = set()
        element_ids = set()
        for p in rec.layout.placements:
            if p.element_id in seen:
                problems.append(f"scene {sid}: duplicate element id {p.element_id!r}")
            seen.add(p.element_id)
            element_ids.add(p.element_id)
            if p.entity not in names:
                problems.append(f"scene {sid}: placement {p.element_id!r} references unknown entity {p.entity!r}")
            else:
                proto = doc.prototype(p.entity)
                if p.variant not in proto.variants:
                    problems.append(f"scene {sid}: placement {p.element_id!r} uses unknown variant {p.variant!r}")
        for clip in rec.timeline.clips:
            for sp in clip.spawned_elements:
                element_ids.add(sp.element_id)
        for clip in rec.timeline.clips:
            for stage in clip.stages:
                for target, _ in stage.bindings:
                    eid = target.partition("/")[0]
                    if eid not in element_ids:
                        problems.append(f"scene {sid}: clip {clip.id} binds missing element {eid!r}")
    return problems


def document_bytes(doc: ProjectDocument) -> bytes:
    return canonjson.dump_bytes(doc.to_dict()) + b"\n"


def save(doc: ProjectDocument, path: str | os.PathLike) -> None:
    """Write project.json (canonical bytes). Uploaded asset files are
    expected under assets/uploads/ next to it; save verifies they exist."""
    problems = validate_document(doc)
    if problems:
        raise InvariantViolation("document failed validation", detail=problems)
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    for ref in doc.asset_manifest:
        target = path.parent / "assets" / ref.path
        if not target.exists():
            raise UnknownAsset(f"uploaded asset file missing at save time: {ref.path}")
    path.write_bytes(document_bytes(doc))


def load(path: str | os.PathLike) -> ProjectDocument:
    path = Path(path)
    try:
        raw = path.read_bytes()
    except OSError as exc:
        raise CorruptDocument(f"cannot read {path}: {exc}") from exc
    try:
        data = canonjson.loads(raw)
    except ValueError as exc:
        raise CorruptDocument(f"{path} is not valid JSON: {exc}") from exc
    if not isinstance(data, dict) or "schema_version" not in data:
        raise CorruptDocument(f"{path} has no schema_version")
    from .errors import SchemaMismatch

    major = str(data["schema_version"]).split(".")[0]
    if major != SCHEMA_VERSION.split(".")[0]:
        raise SchemaMismatch(
            f"document written by schema {data['schema_version']}, reader supports {SCHEMA_VERSION}"
        )
    return ProjectDocument.from_dict(data)
