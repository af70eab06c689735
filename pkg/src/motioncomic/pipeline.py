"""Three-step story analysis: segment, extract, classify.

No analyzer response is trusted raw. Each step parses the response
(first fenced code block if present, else the whole body), validates it
against the expected schema, and on failure re-asks the analyzer with
the error appended, up to ``analyzer.max_retries`` extra attempts.
Scene spans additionally pass through a validate/repair stage so the
pipeline never returns a non-contiguous partition.
"""

from __future__ import annotations

import hashlib
import json
import re
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

from .analyzers import AnalyzerContract
from .errors import (
    EmptyStory,
    InvalidSpans,
    MalformedResponse,
    MissingField,
    UnknownCategory,
    Unrepairable,
)
from .story import ActionCategory, EntityRef, Scene, SceneSpan, Sentence, SvoAction, rebuild_scene_text

_CODE_FENCE = re.compile(r"```[a-zA-Z0-9_-]*\n(.*?)```", re.S)

# Errors that mean "the analyzer answered badly": worth a retry.
_RETRYABLE = (MalformedResponse, MissingField, UnknownCategory, InvalidSpans)


@dataclass(frozen=True)
class Violation:
    rule: str
    span_id: int
    message: str


@dataclass(frozen=True)
class ExtractedSvo:
    subject: str
    verb: str
    object: str = ""
    receiver: str = ""


@dataclass(frozen=True)
class SceneInfo:
    characters: tuple[str, ...]
    objects: tuple[str, ...]
    svo: tuple[ExtractedSvo, ...]


@dataclass(frozen=True)
class ClassifiedAction:
    action: str
    category: ActionCategory


def scene_text_digest(text: str) -> str:
    return hashlib.sha256(text.encode("utf-8")).hexdigest()


# ---------------------------------------------------------------------------
# span validation and repair
# ---------------------------------------------------------------------------

def validate_spans(spans: list[SceneSpan], n_sentences: int) -> list[Violation]:
    """Check the contiguity invariants; empty list means ok.

    Total function: never raises. Violations come back in scan order,
    so the first entry names the first broken rule.
    """
    if n_sentences < 1:
        raise ValueError("n_sentences must be >= 1")
    out: list[Violation] = []
    if not spans:
        return [Violation("empty", -1, "no spans for a non-empty story")]
    for pos, s in enumerate(spans):
        if s.id != pos:
            out.append(Violation("id_sequence", s.id, f"expected id {pos} at position {pos}, got {s.id}"))
        if s.begin_index > s.end_index:
            out.append(Violation("inverted", s.id, f"begin {s.begin_index} > end {s.end_index}"))
        if s.begin_index < 0 or s.end_index > n_sentences - 1:
            out.append(
                Violation("out_of_range", s.id, f"{s.begin_index}..{s.end_index} outside 0..{n_sentences - 1}")
            )
    if spans[0].begin_index != 0:
        out.append(Violation("first_begin", spans[0].id, f"first span begins at {spans[0].begin_index}, not 0"))
    for prev, nxt in zip(spans, spans[1:]):
        if nxt.begin_index <= prev.end_index:
            out.append(
                Violation("overlap", nxt.id, f"span {nxt.id} begins at {nxt.begin_index} inside span {prev.id}")
            )
        elif nxt.begin_index > prev.end_index + 1:
            out.append(
                Violation("gap", nxt.id, f"sentences {prev.end_index + 1}..{nxt.begin_index - 1} uncovered")
            )
    if spans[-1].end_index != n_sentences - 1:
        out.append(
            Violation("last_end", spans[-1].id, f"last span ends at {spans[-1].end_index}, not {n_sentences - 1}")
        )
    return out


def repair_spans(spans: list[SceneSpan], n_sentences: int) -> list[SceneSpan]:
    """Apply the three mechanical repairs, or raise Unrepairable.

    Repairs, in order: clamp indices into [0, n-1]; stretch the last
    span's end to n-1; close single-index gaps by extending the earlier
    span. Ids are renumbered to their positional ordinals. Overlaps,
    gaps wider than one sentence, and a first span that does not begin
    at 0 are unrepairable.
    """
    if not spans:
        raise Unrepairable("no spans to repair")
    ordered = sorted(spans, key=lambda s: (s.begin_index, s.end_index))
    begins = [max(0, min(s.begin_index, n_sentences - 1)) for s in ordered]
    ends = [max(0, min(s.end_index, n_sentences - 1)) for s in ordered]
    for b, e in zip(begins, ends):
        if b > e:
            raise Unrepairable(f"span {b}..{e} inverted after clamping")
    if ends[-1] < n_sentences - 1:
        ends[-1] = n_sentences - 1
    if begins[0] != 0:
        raise Unrepairable(f"first span begins at {begins[0]}; no earlier span to extend")
    for i in range(len(ordered) - 1):
        if begins[i + 1] <= ends[i]:
            raise Unrepairable(f"spans {i} and {i + 1} overlap at sentence {begins[i + 1]}")
        if begins[i + 1] == ends[i] + 2:
            ends[i] += 1
        elif begins[i + 1] > ends[i] + 2:
            raise Unrepairable(
                f"gap of {begins[i + 1] - ends[i] - 1} sentences between spans {i} and {i + 1}"
            )
    repaired = [SceneSpan(id=i, begin_index=b, end_index=e) for i, (b, e) in enumerate(zip(begins, ends))]
    leftover = validate_spans(repaired, n_sentences)
    assert not leftover, f"repair produced invalid spans: {leftover[0].message}"
    return repaired


# ---------------------------------------------------------------------------
# response parsing
# ---------------------------------------------------------------------------

def _parse_json_response(text: str):
    m = _CODE_FENCE.search(text)
    body = m.group(1) if m else text
    try:
        return json.loads(body)
    except json.JSONDecodeError as exc:
        raise MalformedResponse(f"response is not valid JSON: {exc}", detail=body[:200]) from exc


def _ask(analyzer: AnalyzerContract, kind: str, payload: str, parse):
    attempts = getattr(analyzer, "max_retries", 0) + 1
    request = payload
    last: Exception | None = None
    for _ in range(attempts):
        raw = analyzer.complete(kind, request)
        try:
            return parse(raw)
        except _RETRYABLE as exc:
            last = exc
            request = (
                f"{payload}\n\n# Previous attempt failed\n{exc}\n"
                "Return only valid JSON matching the required schema."
            )
    assert last is not None
    raise last


# ---------------------------------------------------------------------------
# pipeline steps
# ---------------------------------------------------------------------------

def segment_story(sentences: list[Sentence], analyzer: AnalyzerContract) -> list[SceneSpan]:
    """Step 1: partition the sentence list into contiguous scene spans."""
    if not sentences:
        raise EmptyStory("cannot segment an empty story")
    n = len(sentences)
    if n == 1:
        return [SceneSpan(id=0, begin_index=0, end_index=0)]
    payload = json.dumps([s.text for s in sentences], ensure_ascii=False)

    def parse(raw: str) -> list[SceneSpan]:
        data = _parse_json_response(raw)
        if not isinstance(data, list) or not data:
            raise MalformedResponse("expected a non-empty JSON array of scene spans")
        spans = []
        for i, item in enumerate(data):
            if not isinstance(item, dict):
                raise MalformedResponse(f"span {i} is not an object")
            for key in ("id", "begin_index", "end_index"):
                if key not in item:
                    raise MissingField(f"[{i}].{key}")
            try:
                spans.append(
                    SceneSpan(id=int(item["id"]), begin_index=int(item["begin_index"]), end_index=int(item["end_index"]))
                )
            except (TypeError, ValueError) as exc:
                raise MalformedResponse(f"span {i} has non-integer indices") from exc
        spans.sort(key=lambda s: (s.begin_index, s.end_index))
        violations = validate_spans(spans, n)
        if not violations:
            return spans
        try:
            return repair_spans(spans, n)
        except Unrepairable as exc:
            raise InvalidSpans(
                f"scene spans invalid and unrepairable: {violations[0].message}",
                detail=[v.__dict__ for v in violations],
            ) from exc

    return _ask(analyzer, "segment", payload, parse)


def extract_scene_info(scene_text: str, analyzer: AnalyzerContract) -> SceneInfo:
    """Step 2: pull characters, objects, and SVO actions out of one scene."""
    if not scene_text.strip():
        raise EmptyStory("scene text is empty")

    def parse(raw: str) -> SceneInfo:
        data = _parse_json_response(raw)
        if not isinstance(data, dict):
            raise MalformedResponse("expected a JSON object")
        for key in ("character", "object", "svo"):
            if key not in data:
                raise MissingField(key)
        characters = data["character"]
        objects = data["object"]
        svo = data["svo"]
        if not isinstance(characters, list) or not isinstance(objects, list) or not isinstance(svo, list):
            raise MalformedResponse("character, object and svo must all be arrays")
        entries = []
        for i, item in enumerate(svo):
            if not isinstance(item, dict):
                raise MalformedResponse(f"svo[{i}] is not an object")
            subject = str(item.get("subject", "") or "")
            verb = str(item.get("verb", "") or "")
            if not subject:
                raise MissingField(f"svo[{i}].subject")
            if not verb:
                raise MissingField(f"svo[{i}].verb")
            entries.append(
                ExtractedSvo(
                    subject=subject,
                    verb=verb,
                    object=str(item.get("object", "") or ""),
                    receiver=str(item.get("receiver", "") or ""),
                )
            )
        return SceneInfo(
            characters=tuple(str(c) for c in characters),
            objects=tuple(str(o) for o in objects),
            svo=tuple(entries),
        )

    return _ask(analyzer, "extract", scene_text, parse)


def classify_actions(svo: list[SvoAction] | list[ExtractedSvo], analyzer: AnalyzerContract) -> list[ClassifiedAction]:
    """Step 3: assign one of the eight categories to every verb, in order."""
    if not svo:
        raise ValueError("svo list must be non-empty")
    for i, entry in enumerate(svo):
        if not entry.verb:
            raise ValueError(f"svo[{i}] has an empty verb")
    payload = json.dumps(
        [{"subject": e.subject, "verb": e.verb, "object": e.object, "receiver": e.receiver} for e in svo],
        ensure_ascii=False,
    )

    def parse(raw: str) -> list[ClassifiedAction]:
        data = _parse_json_response(raw)
        if not isinstance(data, list):
            raise MalformedResponse("expected a JSON array of classifications")
        if len(data) != len(svo):
            raise MalformedResponse(f"expected {len(svo)} classifications, got {len(data)}")
        out = []
        for i, item in enumerate(data):
            if not isinstance(item, dict) or "action" not in item or "category" not in item:
                raise MalformedResponse(f"classification {i} must carry action and category")
            action = str(item["action"])
            if action != svo[i].verb:
                raise MalformedResponse(f"classification {i} is for {action!r}, expected {svo[i].verb!r}")
            out.append(ClassifiedAction(action=action, category=ActionCategory.from_token(str(item["category"]))))
        return out

    return _ask(analyzer, "classify", payload, parse)


# ---------------------------------------------------------------------------
# orchestration
# ---------------------------------------------------------------------------

def _build_scene(span: SceneSpan, info: SceneInfo, classified: list[ClassifiedAction]) -> Scene:
    actions = tuple(
        SvoAction(
            id=i,
            subject=e.subject,
            verb=e.verb,
            object=e.object,
            receiver=e.receiver,
            category=c.category,
        )
        for i, (e, c) in enumerate(zip(info.svo, classified))
    )
    return Scene(
        span=span,
        characters=tuple(EntityRef(name=c, kind="character") for c in info.characters),
        items=tuple(EntityRef(name=o, kind="item") for o in info.objects),
        actions=actions,
    )


def _analyze_span(story: list[Sentence], span: SceneSpan, analyzer: AnalyzerContract) -> Scene:
    text = rebuild_scene_text(story, span)
    info = extract_scene_info(text, analyzer)
    classified = classify_actions(list(info.svo), analyzer) if info.svo else []
    return _build_scene(span, info, classified)


def analyze_story(story: list[Sentence], analyzer: AnalyzerContract) -> list[Scene]:
    """Run the full pipeline. Extraction is independent per scene, so
    scenes are analyzed concurrently; results keep span order."""
    spans = segment_story(story, analyzer)
    if len(spans) == 1:
        return [_analyze_span(story, spans[0], analyzer)]
    with ThreadPoolExecutor(max_workers=min(4, len(spans))) as pool:
        return list(pool.map(lambda sp: _analyze_span(story, sp, analyzer), spans))


def reclassify_action(scene: Scene, action_id: int, category: ActionCategory) -> Scene:
    """Point update of one action's category; everything else is untouched."""
    target = scene.action(action_id)  # raises UnknownAction
    if target.category == category:
        return scene
    actions = tuple(
        SvoAction(a.id, a.subject, a.verb, a.object, a.receiver, category) if a.id == action_id else a
        for a in scene.actions
    )
    return Scene(span=scene.span, characters=scene.characters, items=scene.items, actions=actions)


def resegment(
    story: list[Sentence],
    old_scenes: list[Scene],
    edited_spans: list[SceneSpan],
    analyzer: AnalyzerContract,
) -> list[tuple[Scene, int | None]]:
    """Re-run extract+classify for spans whose text changed.

    Returns (scene, reused_index) pairs: ``reused_index`` points at the
    old scene whose text matched (so callers can carry layouts over),
    or None when the scene was re-analyzed. Raises InvalidSpans without
    touching anything when the edited spans fail validation.
    """
    violations = validate_spans(edited_spans, len(story))
    if violations:
        raise InvalidSpans(violations[0].message, detail=[v.__dict__ for v in violations])

    by_digest: dict[str, list[int]] = {}
    for idx, scene in enumerate(old_scenes):
        digest = scene_text_digest(rebuild_scene_text(story, scene.span))
        by_digest.setdefault(digest, []).append(idx)

    out: list[tuple[Scene, int | None]] = []
    for span in edited_spans:
        text = rebuild_scene_text(story, span)
        digest = scene_text_digest(text)
        candidates = by_digest.get(digest)
        if candidates:
            old_idx = candidates.pop(0)
            old = old_scenes[old_idx]
            out.append(
                (Scene(span=span, characters=old.characters, items=old.items, actions=old.actions), old_idx)
            )
        else:
            out.append((_analyze_span(story, span, analyzer), None))
    return out
