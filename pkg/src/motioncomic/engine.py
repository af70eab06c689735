"""Deterministic 2D animation engine.

Parameterized atomic operations compose into staged clips; clips play
strictly sequentially on a per-scene timeline. ``sample`` is a pure
function from (timeline, layout, t) to element states: repeated calls
with identical arguments are bit-identical, which is what makes export
and playback reproducible everywhere.

Time is continuous seconds; discretization happens only at render time.
The canvas is a virtual 1600x900 units, origin top-left, y down.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace

from .errors import BadPermutation, UnknownClip
from .paths import Point, point_at_fraction, polyline_length

CANVAS_W = 1600.0
CANVAS_H = 900.0

DEFAULT_SPEED = 200.0  # units/s
DEFAULT_DURATION = 0.5  # s, for appear/disappear/scale/rotate

GAIT_AMPLITUDE = 0.35  # rad
GAIT_MIN_HZ = 1.0
GAIT_MAX_HZ = 4.0

_MIN_SCALE = 1e-6  # grow/shrink floor; scale factors stay > 0
_VISIBLE_EPS = 1e-9

LEG_SLOTS = ("left_leg", "right_leg")


def easing(kind: str, u: float) -> float:
    """Monotone easing on [0, 1] with f(0)=0 and f(1)=1."""
    u = min(1.0, max(0.0, u))
    if kind == "linear":
        return u
    if kind == "ease_in_out_cubic":
        if u < 0.5:
            return 4.0 * u * u * u
        return 1.0 - ((-2.0 * u + 2.0) ** 3) / 2.0
    raise ValueError(f"unknown easing kind: {kind}")


def gait_frequency(speed: float) -> float:
    return min(GAIT_MAX_HZ, max(GAIT_MIN_HZ, speed / 100.0))


@dataclass
class Transform:
    x: float = 0.0
    y: float = 0.0
    scale_x: float = 1.0
    scale_y: float = 1.0
    rotation: float = 0.0  # radians about the element anchor
    flip_h: bool = False
    flip_v: bool = False
    opacity: float = 1.0
    blur: float = 0.0

    def __post_init__(self):
        if not 0.0 <= self.opacity <= 1.0:
            raise ValueError(f"opacity must be in [0, 1], got {self.opacity}")
        if self.scale_x <= 0.0 or self.scale_y <= 0.0:
            raise ValueError("scale factors must be > 0")
        if self.blur < 0.0:
            raise ValueError("blur must be >= 0")

    def copy(self) -> "Transform":
        return replace(self)

    def to_dict(self) -> dict:
        return {
            "x": self.x, "y": self.y,
            "scale_x": self.scale_x, "scale_y": self.scale_y,
            "rotation": self.rotation,
            "flip_h": self.flip_h, "flip_v": self.flip_v,
            "opacity": self.opacity, "blur": self.blur,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "Transform":
        return cls(
            x=float(d.get("x", 0.0)), y=float(d.get("y", 0.0)),
            scale_x=float(d.get("scale_x", 1.0)), scale_y=float(d.get("scale_y", 1.0)),
            rotation=float(d.get("rotation", 0.0)),
            flip_h=bool(d.get("flip_h", False)), flip_v=bool(d.get("flip_v", False)),
            opacity=float(d.get("opacity", 1.0)), blur=float(d.get("blur", 0.0)),
        )


# ---------------------------------------------------------------------------
# atomic operations
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class PathMove:
    polyline: tuple[Point, ...]
    speed: float = DEFAULT_SPEED
    gait: bool = False
    easing: str = "linear"
    off_canvas_ok: bool = False  # waypoints may leave the canvas when set

    kind = "path_move"

    def __post_init__(self):
        if self.speed <= 0.0:
            raise ValueError("speed must be > 0")
        if len(self.polyline) < 2:
            raise ValueError("a path needs at least two points")
        if not self.off_canvas_ok:
            for x, y in self.polyline:
                if not (0.0 <= x <= CANVAS_W and 0.0 <= y <= CANVAS_H):
                    raise ValueError(f"point ({x}, {y}) leaves the canvas; set off_canvas_ok to allow")

    def duration(self) -> float:
        return polyline_length(list(self.polyline)) / self.speed

    def to_dict(self) -> dict:
        return {
            "kind": self.kind,
            "polyline": [[p[0], p[1]] for p in self.polyline],
            "speed": self.speed,
            "gait": self.gait,
            "easing": self.easing,
            "off_canvas_ok": self.off_canvas_ok,
        }


@dataclass(frozen=True)
class ScaleTo:
    to_x: float
    to_y: float
    duration_s: float = DEFAULT_DURATION
    easing: str = "ease_in_out_cubic"

    kind = "scale_to"

    def __post_init__(self):
        if self.duration_s < 0.0:
            raise ValueError("duration must be >= 0")
        if self.to_x <= 0.0 or self.to_y <= 0.0:
            raise ValueError("target scale factors must be > 0")

    def duration(self) -> float:
        return self.duration_s

    def to_dict(self) -> dict:
        return {"kind": self.kind, "to_x": self.to_x, "to_y": self.to_y,
                "duration_s": self.duration_s, "easing": self.easing}


@dataclass(frozen=True)
class RotateBy:
    delta: float  # radians
    duration_s: float = DEFAULT_DURATION
    easing: str = "ease_in_out_cubic"

    kind = "rotate_by"

    def __post_init__(self):
        if self.duration_s < 0.0:
            raise ValueError("duration must be >= 0")

    def duration(self) -> float:
        return self.duration_s

    def to_dict(self) -> dict:
        return {"kind": self.kind, "delta": self.delta,
                "duration_s": self.duration_s, "easing": self.easing}


@dataclass(frozen=True)
class FlipAxis:
    axis: str  # "h" | "v"

    kind = "flip"

    def duration(self) -> float:
        return 0.0  # flips read as an instant pose switch

    def to_dict(self) -> dict:
        return {"kind": self.kind, "axis": self.axis}


@dataclass(frozen=True)
class Appear:
    mode: str = "fade"  # fade | grow
    duration_s: float = DEFAULT_DURATION
    easing: str = "ease_in_out_cubic"
    at: Point | None = None  # optional teleport applied at stage entry

    kind = "appear"

    def __post_init__(self):
        if self.duration_s < 0.0:
            raise ValueError("duration must be >= 0")

    def duration(self) -> float:
        return self.duration_s

    def to_dict(self) -> dict:
        d = {"kind": self.kind, "mode": self.mode, "duration_s": self.duration_s, "easing": self.easing}
        if self.at is not None:
            d["at"] = [self.at[0], self.at[1]]
        return d


@dataclass(frozen=True)
class Disappear:
    mode: str = "fade"  # fade | shrink
    duration_s: float = DEFAULT_DURATION
    easing: str = "ease_in_out_cubic"

    kind = "disappear"

    def __post_init__(self):
        if self.duration_s < 0.0:
            raise ValueError("duration must be >= 0")

    def duration(self) -> float:
        return self.duration_s

    def to_dict(self) -> dict:
        return {"kind": self.kind, "mode": self.mode, "duration_s": self.duration_s, "easing": self.easing}


@dataclass(frozen=True)
class Swing:
    """Sinusoidal rotation offset that returns to rest at the end.

    Decorates gaits, nods, waves and strikes. Targets either a slot
    address ("elem/left_leg") or the element itself.
    """

    amplitude: float
    frequency: float  # Hz
    duration_s: float
    phase: float = 0.0

    kind = "swing"

    def __post_init__(self):
        if self.duration_s < 0.0:
            raise ValueError("duration must be >= 0")
        if self.frequency <= 0.0:
            raise ValueError("frequency must be > 0")

    def duration(self) -> float:
        return self.duration_s

    def value(self, tau: float) -> float:
        if tau >= self.duration_s:
            return 0.0
        return self.amplitude * math.sin(2.0 * math.pi * self.frequency * tau + self.phase)

    def to_dict(self) -> dict:
        return {"kind": self.kind, "amplitude": self.amplitude, "frequency": self.frequency,
                "duration_s": self.duration_s, "phase": self.phase}


AtomicOp = PathMove | ScaleTo | RotateBy | FlipAxis | Appear | Disappear | Swing


def op_from_dict(d: dict) -> AtomicOp:
    kind = d.get("kind")
    if kind == "path_move":
        return PathMove(
            polyline=tuple((float(p[0]), float(p[1])) for p in d["polyline"]),
            speed=float(d.get("speed", DEFAULT_SPEED)),
            gait=bool(d.get("gait", False)),
            easing=str(d.get("easing", "linear")),
            off_canvas_ok=bool(d.get("off_canvas_ok", False)),
        )
    if kind == "scale_to":
        return ScaleTo(float(d["to_x"]), float(d["to_y"]),
                       float(d.get("duration_s", DEFAULT_DURATION)), str(d.get("easing", "ease_in_out_cubic")))
    if kind == "rotate_by":
        return RotateBy(float(d["delta"]),
                        float(d.get("duration_s", DEFAULT_DURATION)), str(d.get("easing", "ease_in_out_cubic")))
    if kind == "flip":
        return FlipAxis(str(d["axis"]))
    if kind == "appear":
        at = d.get("at")
        return Appear(str(d.get("mode", "fade")), float(d.get("duration_s", DEFAULT_DURATION)),
                      str(d.get("easing", "ease_in_out_cubic")),
                      (float(at[0]), float(at[1])) if at is not None else None)
    if kind == "disappear":
        return Disappear(str(d.get("mode", "fade")), float(d.get("duration_s", DEFAULT_DURATION)),
                         str(d.get("easing", "ease_in_out_cubic")))
    if kind == "swing":
        return Swing(float(d["amplitude"]), float(d["frequency"]),
                     float(d["duration_s"]), float(d.get("phase", 0.0)))
    raise ValueError(f"unknown op kind: {kind!r}")


# ---------------------------------------------------------------------------
# stages, clips, timelines
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Stage:
    """Bindings that run in parallel. Targets are element ids or
    "element_id/slot" addresses; one op per target per stage."""

    bindings: tuple[tuple[str, AtomicOp], ...]

    def __post_init__(self):
        targets = [t for t, _ in self.bindings]
        if len(targets) != len(set(targets)):
            raise ValueError("one op per target per stage")

    def duration(self) -> float:
        return max((op.duration() for _, op in self.bindings), default=0.0)

    def to_dict(self) -> dict:
        return {"bindings": [{"target": t, "op": op.to_dict()} for t, op in self.bindings]}

    @classmethod
    def from_dict(cls, d: dict) -> "Stage":
        return cls(tuple((b["target"], op_from_dict(b["op"])) for b in d["bindings"]))


@dataclass(frozen=True)
class SpawnedElement:
    """Auxiliary element a clip brings into the scene (bubble, text,
    projectile). Starts invisible; the clip's ops make it appear."""

    element_id: str
    spawn_kind: str  # speech_bubble | thought_bubble | text | sprite
    transform: Transform
    z: int
    text: str = ""
    lines: tuple[str, ...] = ()
    asset_id: str | None = None
    width: float = 0.0
    height: float = 0.0
    tail_to: Point | None = None

    def to_dict(self) -> dict:
        d = {
            "element_id": self.element_id,
            "spawn_kind": self.spawn_kind,
            "transform": self.transform.to_dict(),
            "z": self.z,
            "text": self.text,
            "lines": list(self.lines),
            "asset_id": self.asset_id,
            "width": self.width,
            "height": self.height,
        }
        if self.tail_to is not None:
            d["tail_to"] = [self.tail_to[0], self.tail_to[1]]
        return d

    @classmethod
    def from_dict(cls, d: dict) -> "SpawnedElement":
        tail = d.get("tail_to")
        return cls(
            element_id=str(d["element_id"]),
            spawn_kind=str(d["spawn_kind"]),
            transform=Transform.from_dict(d["transform"]),
            z=int(d["z"]),
            text=str(d.get("text", "")),
            lines=tuple(d.get("lines", [])),
            asset_id=d.get("asset_id"),
            width=float(d.get("width", 0.0)),
            height=float(d.get("height", 0.0)),
            tail_to=(float(tail[0]), float(tail[1])) if tail else None,
        )


@dataclass(frozen=True)
class AnimationClip:
    id: str
    label: str
    stages: tuple[Stage, ...]
    source_action_id: int | None = None
    spawned_elements: tuple[SpawnedElement, ...] = ()
    template_id: str | None = None

    def duration(self) -> float:
        return sum(s.duration() for s in self.stages)

    def to_dict(self) -> dict:
        return {
            "id": self.id,
            "label": self.label,
            "source_action_id": self.source_action_id,
            "template_id": self.template_id,
            "stages": [s.to_dict() for s in self.stages],
            "spawned_elements": [s.to_dict() for s in self.spawned_elements],
        }

    @classmethod
    def from_dict(cls, d: dict) -> "AnimationClip":
        return cls(
            id=str(d["id"]),
            label=str(d.get("label", "")),
            stages=tuple(Stage.from_dict(s) for s in d["stages"]),
            source_action_id=d.get("source_action_id"),
            spawned_elements=tuple(SpawnedElement.from_dict(s) for s in d.get("spawned_elements", [])),
            template_id=d.get("template_id"),
        )


@dataclass(frozen=True)
class Timeline:
    clips: tuple[AnimationClip, ...] = ()
    clip_seq: int = 0  # next id ordinal; survives deletions so ids stay stable

    def duration(self) -> float:
        return sum(c.duration() for c in self.clips)

    def clip(self, clip_id: str) -> AnimationClip:
        for c in self.clips:
            if c.id == clip_id:
                return c
        raise UnknownClip(f"no clip {clip_id!r}")

    def to_dict(self) -> dict:
        return {"clips": [c.to_dict() for c in self.clips], "clip_seq": self.clip_seq}

    @classmethod
    def from_dict(cls, d: dict) -> "Timeline":
        return cls(
            clips=tuple(AnimationClip.from_dict(c) for c in d.get("clips", [])),
            clip_seq=int(d.get("clip_seq", 0)),
        )


def clip_duration(clip: AnimationClip) -> float:
    """Sum of stage durations; a PathMove stage lasts arc length / speed."""
    return clip.duration()


def reorder(timeline: Timeline, permutation: tuple[int, ...] | list[int]) -> Timeline:
    """new[i] = old[permutation[i]]; clip multiset preserved."""
    perm = tuple(permutation)
    if sorted(perm) != list(range(len(timeline.clips))):
        raise BadPermutation(f"{perm} is not a permutation of 0..{len(timeline.clips) - 1}")
    return Timeline(clips=tuple(timeline.clips[i] for i in perm), clip_seq=timeline.clip_seq)


def remove(timeline: Timeline, clip_id: str) -> Timeline:
    timeline.clip(clip_id)  # raises UnknownClip
    return Timeline(
        clips=tuple(c for c in timeline.clips if c.id != clip_id),
        clip_seq=timeline.clip_seq,
    )


# ---------------------------------------------------------------------------
# gait decoration
# ---------------------------------------------------------------------------

def apply_gait(stage: Stage, leg_slots: tuple[str, ...]) -> Stage:
    """Overlay antiphase leg swings on a path stage.

    ``leg_slots`` names the leg slots present on the walking element
    (empty means no legs: no-op). The body trajectory is unchanged; each
    leg oscillates +/-0.35 rad about its hip anchor at
    clamp(speed/100, 1, 4) Hz for the duration of the stage.
    """
    legs = [s for s in leg_slots if s in LEG_SLOTS]
    if not legs:
        return stage
    path_binding = next(
        ((t, op) for t, op in stage.bindings if isinstance(op, PathMove)), None
    )
    if path_binding is None:
        return stage
    target, pm = path_binding
    freq = gait_frequency(pm.speed)
    dur = stage.duration()
    if dur <= 0.0:
        return stage
    extra = tuple(
        (f"{target}/{slot}", Swing(GAIT_AMPLITUDE, freq, dur, phase=0.0 if i % 2 == 0 else math.pi))
        for i, slot in enumerate(legs)
    )
    return Stage(bindings=stage.bindings + extra)


# ---------------------------------------------------------------------------
# sampling
# ---------------------------------------------------------------------------

@dataclass
class ElementState:
    element_id: str
    transform: Transform
    z: int
    visible: bool
    slot_rotations: dict[str, float] = field(default_factory=dict)

    def to_dict(self) -> dict:
        d = {"element_id": self.element_id, "z": self.z, "visible": self.visible}
        d.update(self.transform.to_dict())
        d["slot_rotations"] = dict(sorted(self.slot_rotations.items()))
        return d


class _Live:
    __slots__ = ("transform", "z", "order", "slot_rotations")

    def __init__(self, transform: Transform, z: int, order: int):
        self.transform = transform
        self.z = z
        self.order = order
        self.slot_rotations: dict[str, float] = {}


def _eval_binding(live: dict[str, _Live], target: str, op: AtomicOp, tau: float, full: bool) -> None:
    """Evaluate one binding against the state the target had at stage
    entry. ``full`` applies the op's end state (u=1, swings at rest);
    partial evaluation is only ever called with tau > 0, so a stage
    entered at local time 0 leaves every target untouched."""
    elem_id, _, slot = target.partition("/")
    st = live.get(elem_id)
    if st is None:
        return
    if isinstance(op, Swing):
        value = 0.0 if full else op.value(tau)
        if slot:
            st.slot_rotations[slot] = st.slot_rotations.get(slot, 0.0) + value
        else:
            st.transform.rotation += value
        return

    tr = st.transform
    d = op.duration()
    if full or d <= 0.0:
        u = 1.0
    else:
        u = easing(getattr(op, "easing", "linear"), min(1.0, tau / d))

    if slot:
        # slots only rotate; other op kinds on a slot address are undefined
        if isinstance(op, RotateBy):
            st.slot_rotations[slot] = st.slot_rotations.get(slot, 0.0) + op.delta * u
        return

    if isinstance(op, PathMove):
        tr.x, tr.y = point_at_fraction(list(op.polyline), u)
    elif isinstance(op, ScaleTo):
        tr.scale_x = tr.scale_x + (op.to_x - tr.scale_x) * u
        tr.scale_y = tr.scale_y + (op.to_y - tr.scale_y) * u
    elif isinstance(op, RotateBy):
        tr.rotation = tr.rotation + op.delta * u
    elif isinstance(op, FlipAxis):
        if op.axis == "h":
            tr.flip_h = not tr.flip_h
        else:
            tr.flip_v = not tr.flip_v
    elif isinstance(op, Appear):
        if op.at is not None:
            tr.x, tr.y = op.at
        start_op = tr.opacity
        if op.mode == "grow":
            tr.scale_x = tr.scale_x * max(u, _MIN_SCALE)
            tr.scale_y = tr.scale_y * max(u, _MIN_SCALE)
        tr.opacity = min(1.0, max(0.0, start_op + (1.0 - start_op) * u))
    elif isinstance(op, Disappear):
        if op.mode == "shrink":
            tr.scale_x = tr.scale_x * max(1.0 - u, _MIN_SCALE)
            tr.scale_y = tr.scale_y * max(1.0 - u, _MIN_SCALE)
        tr.opacity = min(1.0, max(0.0, tr.opacity * (1.0 - u)))
    else:
        raise ValueError(f"unhandled op: {op!r}")


def _eval_stage(live: dict[str, _Live], stage: Stage, tau: float, full: bool) -> None:
    for target, op in stage.bindings:
        _eval_binding(live, target, op, tau, full)


def _advance_clip(live: dict[str, _Live], clip: AnimationClip, tau: float | None) -> None:
    """tau=None applies the clip fully; otherwise evaluates at clip-local tau.

    A stage reached exactly at its start instant (tau hits 0) is left
    unevaluated, so boundary samples see the previous stage's end state.
    """
    if tau is None:
        for stage in clip.stages:
            _eval_stage(live, stage, 0.0, full=True)
        return
    if tau <= 0.0:
        return
    for stage in clip.stages:
        sd = stage.duration()
        if tau >= sd:
            _eval_stage(live, stage, 0.0, full=True)
            tau -= sd
            if tau <= 0.0:
                return
        else:
            _eval_stage(live, stage, tau, full=False)
            return


def sample(timeline: Timeline, layout, t: float) -> list[ElementState]:
    """Element states at time t.

    At t=0 the result equals the saved layout (spawned auxiliaries are
    present but invisible); at and beyond the total duration it equals
    the final state; t beyond the end clamps. A stage reached exactly at
    its start instant contributes nothing yet, so boundary samples see
    the previous stage's end state; zero-duration ops apply as soon as
    time passes their stage's start (zero-duration clips, having no
    interior, apply fully once reached).
    """
    if t < 0:
        raise ValueError("t must be >= 0")
    live: dict[str, _Live] = {}
    order = 0
    for placement in layout.placements:
        live[placement.element_id] = _Live(placement.transform.copy(), placement.z, order)
        order += 1
    for clip in timeline.clips:
        for sp in clip.spawned_elements:
            if sp.element_id not in live:
                live[sp.element_id] = _Live(sp.transform.copy(), sp.z, order)
                order += 1

    remaining = t
    for clip in timeline.clips:
        d = clip.duration()
        if remaining >= d:
            _advance_clip(live, clip, None)
            remaining -= d
        else:
            _advance_clip(live, clip, remaining)
            break

    states = [
        ElementState(
            element_id=eid,
            transform=st.transform,
            z=st.z,
            visible=st.transform.opacity > _VISIBLE_EPS,
            slot_rotations=dict(st.slot_rotations),
        )
        for eid, st in live.items()
    ]
    states.sort(key=lambda s: (s.z, live[s.element_id].order))
    return states
