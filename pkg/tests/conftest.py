"""Shared fixtures: replay analyzers, compiled fixture projects, and a
randomized project generator used by round-trip and determinism suites."""

from __future__ import annotations

import math
import random
from pathlib import Path

import pytest

from motioncomic.analyzers import FixtureAnalyzer
from motioncomic.authoring import apply_script, load_script
from motioncomic.compose import add_template_clip
from motioncomic.document import (
    ProjectDocument,
    Prototype,
    SceneRecord,
    add_clip,
    default_character_variant,
    default_item_variant,
    new_project,
    place_element,
    save_layout,
    set_background,
)
from motioncomic.engine import (
    AnimationClip,
    Appear,
    Disappear,
    FlipAxis,
    PathMove,
    RotateBy,
    ScaleTo,
    Stage,
    Transform,
)
from motioncomic.story import ActionCategory, EntityRef, Scene, SceneSpan, Sentence, SvoAction

ROOT = Path(__file__).resolve().parent.parent
FIXTURES = ROOT / "fixtures"


@pytest.fixture(scope="session")
def fixtures_dir() -> Path:
    return FIXTURES


@pytest.fixture(scope="session")
def sb_analyzer() -> FixtureAnalyzer:
    return FixtureAnalyzer.from_file(str(FIXTURES / "sleeping_beauty.analysis.json"))


@pytest.fixture(scope="session")
def rrh_analyzer() -> FixtureAnalyzer:
    return FixtureAnalyzer.from_file(str(FIXTURES / "red_riding_hood.analysis.json"))


@pytest.fixture(scope="session")
def sb_story() -> str:
    return (FIXTURES / "sleeping_beauty.txt").read_text(encoding="utf-8")


@pytest.fixture(scope="session")
def rrh_story() -> str:
    return (FIXTURES / "red_riding_hood.txt").read_text(encoding="utf-8")


@pytest.fixture(scope="session")
def sb_project(sb_story, sb_analyzer) -> ProjectDocument:
    return new_project(sb_story, sb_analyzer)


@pytest.fixture(scope="session")
def sb_compiled(sb_project) -> ProjectDocument:
    script = load_script(str(FIXTURES / "sleeping_beauty.authoring.json"))
    return apply_script(sb_project, script)


# ---------------------------------------------------------------------------
# randomized documents (built through the document ops so floats are
# already on the canonical grid)
# ---------------------------------------------------------------------------

def random_partition(rng: random.Random, n: int) -> list[SceneSpan]:
    cuts = sorted(rng.sample(range(1, n), rng.randint(0, min(n - 1, 4)))) if n > 1 else []
    bounds = [0] + cuts + [n]
    return [
        SceneSpan(id=i, begin_index=bounds[i], end_index=bounds[i + 1] - 1)
        for i in range(len(bounds) - 1)
    ]


def make_random_project(rng: random.Random) -> ProjectDocument:
    n = rng.randint(1, 8)
    story = tuple(Sentence(i, f"Sentence number {i} happens here.") for i in range(n))
    spans = random_partition(rng, n)
    categories = list(ActionCategory)
    scenes = []
    char_names = [f"actor{i}" for i in range(rng.randint(1, 3))]
    item_names = [f"prop{i}" for i in range(rng.randint(0, 2))]
    for span in spans:
        actions = tuple(
            SvoAction(
                id=k,
                subject=rng.choice(char_names),
                verb=rng.choice(["went", "said", "took", "waved", "ate", "cried", "thought"]),
                object=rng.choice(item_names + ["somewhere", "something"]),
                receiver="",
                category=rng.choice(categories),
            )
            for k in range(rng.randint(0, 3))
        )
        scenes.append(
            Scene(
                span=span,
                characters=tuple(EntityRef(c, "character") for c in char_names),
                items=tuple(EntityRef(i, "item") for i in item_names),
                actions=actions,
            )
        )
    doc = ProjectDocument(
        schema_version="1.0",
        story=story,
        scenes=tuple(SceneRecord(scene=s) for s in scenes),
        prototypes=tuple(
            Prototype(entity=EntityRef(c, "character"), variants={"default": default_character_variant()})
            for c in char_names
        ),
        item_prototypes=tuple(
            Prototype(entity=EntityRef(i, "item"), variants={"default": default_item_variant()})
            for i in item_names
        ),
    )

    for rec in doc.scenes:
        sid = rec.scene.span.id
        if rng.random() < 0.3:
            continue  # some scenes stay unlaid-out
        doc = set_background(doc, sid, rng.choice(["bg.kingdom", "bg.room", "bg.forest", None]))
        eids = []
        for name in char_names + item_names:
            if rng.random() < 0.8:
                tr = Transform(
                    x=rng.uniform(50, 1550), y=rng.uniform(50, 850),
                    scale_x=rng.uniform(0.5, 1.5), scale_y=rng.uniform(0.5, 1.5),
                    rotation=rng.uniform(-math.pi, math.pi),
                    opacity=rng.uniform(0.2, 1.0), blur=rng.choice([0.0, 0.0, 2.5]),
                )
                doc, eid = place_element(doc, sid, name, "default", tr, rng.randint(0, 5))
                eids.append(eid)
        doc = save_layout(doc, sid)
        for _ in range(rng.randint(0, 3)):
            if not eids:
                break
            eid = rng.choice(eids)
            kind = rng.randrange(5)
            if kind == 0:
                pts = tuple(
                    (rng.uniform(0, 1600), rng.uniform(0, 900)) for _ in range(rng.randint(2, 5))
                )
                op = PathMove(polyline=pts, speed=rng.uniform(50, 500))
            elif kind == 1:
                op = ScaleTo(rng.uniform(0.2, 2.0), rng.uniform(0.2, 2.0), rng.uniform(0.1, 1.0))
            elif kind == 2:
                op = RotateBy(rng.uniform(-3, 3), rng.uniform(0.1, 1.0))
            elif kind == 3:
                op = FlipAxis(rng.choice(["h", "v"]))
            else:
                op = rng.choice([Appear(), Disappear()])
            clip = AnimationClip(id="", label="random", stages=(Stage(bindings=((eid, op),)),))
            doc, _ = add_clip(doc, sid, clip)
    return doc


@pytest.fixture
def rng() -> random.Random:
    return random.Random(20240817)
