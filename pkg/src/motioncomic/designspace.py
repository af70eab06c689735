"""Design space for object actions: the six atomic operation kinds, the
per-category frequency table from the 95-video corpus analysis, the
pattern-template registry, and frequency-ranked suggestions.

Everything in this module is immutable after import and freely shareable.
The registry plus table are also exported as a JSON resource so clients
can render suggestion chips without recomputation.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from enum import Enum
from importlib import resources

from .errors import UnclassifiedAction, UnknownTemplate
from .story import ActionCategory, SvoAction


class AtomicOpKind(str, Enum):
    PATH_MOVEMENT = "path_movement"
    SCALE = "scale"
    ROTATION = "rotation"
    FLIP = "flip"
    APPEARANCE = "appearance"
    DISAPPEARANCE = "disappearance"


_OP_ORDER = (
    AtomicOpKind.PATH_MOVEMENT,
    AtomicOpKind.SCALE,
    AtomicOpKind.ROTATION,
    AtomicOpKind.FLIP,
    AtomicOpKind.APPEARANCE,
    AtomicOpKind.DISAPPEARANCE,
)

_CATEGORY_ORDER = (
    ActionCategory.ATRANS,
    ActionCategory.PTRANS,
    ActionCategory.PROPEL,
    ActionCategory.MOVE,
    ActionCategory.INGEST,
    ActionCategory.EXPEL,
    ActionCategory.SPEAK,
    ActionCategory.MENTAL,
)

# Observed (category × op) frequencies over the analyzed corpus, in
# _OP_ORDER column order: path, scale, rotation, flip, appear, disappear.
_COUNTS: dict[ActionCategory, tuple[int, int, int, int, int, int]] = {
    ActionCategory.ATRANS: (24, 0, 0, 0, 6, 4),
    ActionCategory.PTRANS: (593, 24, 0, 0, 99, 18),
    ActionCategory.PROPEL: (112, 0, 80, 0, 32, 0),
    ActionCategory.MOVE: (106, 32, 395, 18, 0, 0),
    ActionCategory.INGEST: (20, 0, 0, 0, 0, 32),
    ActionCategory.EXPEL: (15, 0, 0, 0, 46, 0),
    ActionCategory.SPEAK: (8, 23, 0, 0, 168, 0),
    ActionCategory.MENTAL: (6, 8, 0, 0, 76, 0),
}


class FrequencyTable:
    """8x6 matrix of observation counts with derived totals."""

    def __init__(self, counts: dict[ActionCategory, tuple[int, ...]] = _COUNTS):
        self._cells = {
            cat: {op: int(row[i]) for i, op in enumerate(_OP_ORDER)} for cat, row in counts.items()
        }

    def count(self, category: ActionCategory, op: AtomicOpKind) -> int:
        return self._cells[category][op]

    def row(self, category: ActionCategory) -> dict[AtomicOpKind, int]:
        return dict(self._cells[category])

    def row_total(self, category: ActionCategory) -> int:
        return sum(self._cells[category].values())

    def col_total(self, op: AtomicOpKind) -> int:
        return sum(row[op] for row in self._cells.values())

    def grand_total(self) -> int:
        return sum(self.row_total(cat) for cat in self._cells)

    def nonzero_ops(self, category: ActionCategory) -> set[AtomicOpKind]:
        return {op for op, n in self._cells[category].items() if n > 0}

    def to_dict(self) -> dict:
        return {
            cat.value: {op.value: self._cells[cat][op] for op in _OP_ORDER} for cat in _CATEGORY_ORDER
        }


TABLE = FrequencyTable()


def nonzero_ops(category: ActionCategory) -> set[AtomicOpKind]:
    """Op kinds observed at least once for this category."""
    return TABLE.nonzero_ops(category)


@dataclass(frozen=True)
class Param:
    name: str
    type: str  # number | point | polyline | string | enum | bool | element | asset
    default: object = None
    unit: str = ""
    required: bool = False
    choices: tuple[str, ...] = ()

    def to_dict(self) -> dict:
        d: dict = {"name": self.name, "type": self.type, "default": self.default}
        if self.unit:
            d["unit"] = self.unit
        if self.required:
            d["required"] = True
        if self.choices:
            d["choices"] = list(self.choices)
        return d


@dataclass(frozen=True)
class PatternTemplate:
    id: str
    category: ActionCategory
    display_name: str
    op_kinds: tuple[AtomicOpKind, ...]
    parameter_schema: tuple[Param, ...]
    design_cell: str

    def to_dict(self) -> dict:
        return {
            "id": self.id,
            "category": self.category.value,
            "display_name": self.display_name,
            "op_kinds": [o.value for o in self.op_kinds],
            "parameter_schema": [p.to_dict() for p in self.parameter_schema],
            "design_cell": self.design_cell,
            "score": score_pattern(self),
        }


def _p_speed(default: float = 200.0) -> Param:
    return Param("speed", "number", default, unit="units/s")


def _p_duration(default: float = 0.5) -> Param:
    return Param("duration", "number", default, unit="s")


_P_PATH = Param("path", "polyline", None, unit="canvas units")
_P_TARGET = Param("target", "point", None, unit="canvas units")
_P_TEXT = Param("text", "string", None)
_P_MODE_APPEAR = Param("mode", "enum", "fade", choices=("fade", "grow"))
_P_MODE_DISAPPEAR = Param("mode", "enum", "fade", choices=("fade", "shrink"))
_P_HIDE = Param("hide_at_end", "bool", False)

K = AtomicOpKind

_REGISTRY: tuple[PatternTemplate, ...] = (
    PatternTemplate(
        "atrans.transfer_path", ActionCategory.ATRANS, "Transfer Path",
        (K.PATH_MOVEMENT,),
        (_p_speed(), _P_PATH, _P_TARGET),
        "A.1",
    ),
    PatternTemplate(
        "atrans.vanish_reappear_at_recipient", ActionCategory.ATRANS, "Vanish-Reappear at Recipient",
        (K.DISAPPEARANCE, K.APPEARANCE),
        (_p_duration(), _P_TARGET),
        "A.2",
    ),
    PatternTemplate(
        "ptrans.path", ActionCategory.PTRANS, "Path",
        (K.PATH_MOVEMENT,),
        (_p_speed(), _P_PATH, _P_TARGET, Param("gait", "bool", True)),
        "B.1",
    ),
    PatternTemplate(
        "ptrans.dis_reappear", ActionCategory.PTRANS, "Dis-Reappear",
        (K.DISAPPEARANCE, K.APPEARANCE),
        (_p_duration(), _P_TARGET),
        "B.2",
    ),
    PatternTemplate(
        "propel.strike", ActionCategory.PROPEL, "Strike",
        (K.ROTATION, K.PATH_MOVEMENT),
        (Param("slot", "string", "right_arm"), Param("angle", "number", 0.9, unit="rad"),
         _p_duration(), _P_TARGET),
        "H.1",
    ),
    PatternTemplate(
        "propel.launch", ActionCategory.PROPEL, "Launch",
        (K.APPEARANCE, K.PATH_MOVEMENT),
        (_p_speed(300.0), _p_duration(0.25), Param("asset", "asset", "fx.burst"), _P_PATH, _P_TARGET),
        "H.2",
    ),
    PatternTemplate(
        "move.limb_gesture", ActionCategory.MOVE, "Limb Gesture",
        (K.ROTATION,),
        (Param("slot", "string", "right_arm"), Param("angle", "number", 0.6, unit="rad"), _p_duration()),
        "G.1",
    ),
    PatternTemplate(
        "move.nod", ActionCategory.MOVE, "Nod",
        (K.ROTATION,),
        (Param("amplitude", "number", 0.2, unit="rad"), Param("frequency", "number", 2.0, unit="Hz"),
         _p_duration(1.0)),
        "G.2",
    ),
    PatternTemplate(
        "move.wave", ActionCategory.MOVE, "Wave",
        (K.ROTATION,),
        (Param("slot", "string", "right_arm"), Param("amplitude", "number", 0.5, unit="rad"),
         Param("frequency", "number", 2.0, unit="Hz"), _p_duration(1.0)),
        "G.3",
    ),
    PatternTemplate(
        "move.hop", ActionCategory.MOVE, "Hop",
        (K.PATH_MOVEMENT,),
        (Param("height", "number", 60.0, unit="canvas units"),
         Param("distance", "number", 120.0, unit="canvas units"), _p_speed(300.0)),
        "G.4",
    ),
    PatternTemplate(
        "ingest.approach_then_vanish", ActionCategory.INGEST, "Approach then Vanish",
        (K.PATH_MOVEMENT, K.DISAPPEARANCE),
        (_p_speed(), _p_duration(), _P_MODE_DISAPPEAR),
        "C.1",
    ),
    PatternTemplate(
        "ingest.vanish", ActionCategory.INGEST, "Vanish",
        (K.DISAPPEARANCE,),
        (_p_duration(), _P_MODE_DISAPPEAR),
        "C.2",
    ),
    PatternTemplate(
        "expel.emerge_then_path", ActionCategory.EXPEL, "Emerge then Path",
        (K.APPEARANCE, K.PATH_MOVEMENT),
        (_p_speed(), _p_duration(0.25), Param("asset", "asset", "fx.burst"), _P_PATH, _P_TARGET),
        "D.1",
    ),
    PatternTemplate(
        "speak.bubble_appear", ActionCategory.SPEAK, "Bubble Appear",
        (K.APPEARANCE,),
        (_p_duration(), _P_TEXT, _P_HIDE),
        "E.1",
    ),
    PatternTemplate(
        "speak.bubble_scale_in", ActionCategory.SPEAK, "Bubble Scale-In",
        (K.SCALE, K.APPEARANCE),
        (_p_duration(), _P_TEXT, _P_HIDE),
        "E.1",
    ),
    PatternTemplate(
        "speak.onomatopoeia_text", ActionCategory.SPEAK, "Onomatopoeia",
        (K.APPEARANCE,),
        (_p_duration(), _P_TEXT, _P_HIDE),
        "E.2",
    ),
    PatternTemplate(
        "mental.thought_bubble_appear", ActionCategory.MENTAL, "Thought Bubble",
        (K.APPEARANCE,),
        (_p_duration(), _P_TEXT, _P_HIDE),
        "F.1",
    ),
    PatternTemplate(
        "mental.thought_bubble_scale_in", ActionCategory.MENTAL, "Thought Bubble Scale-In",
        (K.SCALE, K.APPEARANCE),
        (_p_duration(), _P_TEXT, _P_HIDE),
        "F.1",
    ),
)

_BY_ID = {t.id: t for t in _REGISTRY}


def all_templates() -> tuple[PatternTemplate, ...]:
    return _REGISTRY


def template_by_id(template_id: str) -> PatternTemplate:
    try:
        return _BY_ID[template_id]
    except KeyError:
        raise UnknownTemplate(f"no pattern template {template_id!r}") from None


def patterns_for(category: ActionCategory) -> list[PatternTemplate]:
    """Registered templates for one category, in registry order."""
    return [t for t in _REGISTRY if t.category == category]


def score_pattern(template: PatternTemplate) -> int:
    """Evidence score: a composite pattern is only as well observed as
    its rarest constituent op, so score by the row minimum over op kinds."""
    if template.id not in _BY_ID:
        raise UnknownTemplate(f"no pattern template {template.id!r}")
    return min(TABLE.count(template.category, op) for op in template.op_kinds)


@dataclass(frozen=True)
class AnimationSuggestion:
    template: PatternTemplate
    score: int
    rank: int

    def to_dict(self) -> dict:
        d = self.template.to_dict()
        d["rank"] = self.rank
        return d


def suggest(action: SvoAction) -> list[AnimationSuggestion]:
    """Rank the category's templates by descending score; ties keep
    registry order. Pure function of (category, registry, table)."""
    if action.category is None:
        raise UnclassifiedAction(f"action {action.id} ({action.verb!r}) has no category")
    candidates = patterns_for(action.category)
    ordered = sorted(
        enumerate(candidates), key=lambda pair: (-score_pattern(pair[1]), pair[0])
    )
    return [
        AnimationSuggestion(template=t, score=score_pattern(t), rank=i + 1)
        for i, (_, t) in enumerate(ordered)
    ]


def design_space_dict() -> dict:
    """Machine-readable registry + table, served to UI clients."""
    return {
        "atomic_ops": [o.value for o in _OP_ORDER],
        "categories": [c.value for c in _CATEGORY_ORDER],
        "frequency_table": TABLE.to_dict(),
        "templates": [t.to_dict() for t in _REGISTRY],
    }


def load_design_space_resource() -> dict:
    ref = resources.files("motioncomic.resources").joinpath("design_space.json")
    return json.loads(ref.read_text(encoding="utf-8"))
