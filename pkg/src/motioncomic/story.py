"""Narrative model: sentences, scene spans, entities, and SVO actions.

All types here are plain values; mutation happens only through the
document store. The sentence splitter is intentionally simple and
deterministic: it cuts after ``.``, ``!`` or ``?`` when the terminator
(plus any immediately following closing quotes) is followed by
whitespace or end of text. Abbreviations are not special-cased.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from enum import Enum

from .errors import EmptyStory, SpanOutOfRange

# Terminator, optionally trailed by closing quotes that stay with the sentence.
_SENTENCE_END = re.compile(r"[.!?][\"'”’»]*")
_WS_RUN = re.compile(r"\s+")


class ActionCategory(str, Enum):
    """The eight fundamental action types, serialized as lowercase tokens."""

    ATRANS = "atrans"
    PTRANS = "ptrans"
    PROPEL = "propel"
    MOVE = "move"
    INGEST = "ingest"
    EXPEL = "expel"
    SPEAK = "speak"
    MENTAL = "mental"

    @classmethod
    def from_token(cls, token: str) -> "ActionCategory":
        try:
            return cls(token)
        except ValueError:
            from .errors import UnknownCategory

            raise UnknownCategory(token) from None


@dataclass(frozen=True)
class Sentence:
    index: int
    text: str

    def to_dict(self) -> dict:
        return {"index": self.index, "text": self.text}

    @classmethod
    def from_dict(cls, d: dict) -> "Sentence":
        return cls(index=int(d["index"]), text=str(d["text"]))


@dataclass(frozen=True)
class SceneSpan:
    """Contiguous sentence range [begin_index, end_index], both inclusive."""

    id: int
    begin_index: int
    end_index: int

    def to_dict(self) -> dict:
        return {"id": self.id, "begin_index": self.begin_index, "end_index": self.end_index}

    @classmethod
    def from_dict(cls, d: dict) -> "SceneSpan":
        return cls(id=int(d["id"]), begin_index=int(d["begin_index"]), end_index=int(d["end_index"]))


@dataclass(frozen=True)
class EntityRef:
    name: str
    kind: str  # "character" | "item"

    def to_dict(self) -> dict:
        return {"name": self.name, "kind": self.kind}

    @classmethod
    def from_dict(cls, d: dict) -> "EntityRef":
        return cls(name=str(d["name"]), kind=str(d["kind"]))


@dataclass(frozen=True)
class SvoAction:
    """One extracted action. For speak/mental the object carries the utterance text."""

    id: int
    subject: str
    verb: str
    object: str = ""
    receiver: str = ""
    category: ActionCategory | None = None

    def to_dict(self) -> dict:
        return {
            "id": self.id,
            "subject": self.subject,
            "verb": self.verb,
            "object": self.object,
            "receiver": self.receiver,
            "category": self.category.value if self.category else None,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "SvoAction":
        cat = d.get("category")
        return cls(
            id=int(d["id"]),
            subject=str(d["subject"]),
            verb=str(d["verb"]),
            object=str(d.get("object", "")),
            receiver=str(d.get("receiver", "")),
            category=ActionCategory(cat) if cat else None,
        )


@dataclass(frozen=True)
class Scene:
    span: SceneSpan
    characters: tuple[EntityRef, ...] = ()
    items: tuple[EntityRef, ...] = ()
    actions: tuple[SvoAction, ...] = ()

    def action(self, action_id: int) -> SvoAction:
        for a in self.actions:
            if a.id == action_id:
                return a
        from .errors import UnknownAction

        raise UnknownAction(f"scene {self.span.id} has no action {action_id}")

    def to_dict(self) -> dict:
        return {
            "span": self.span.to_dict(),
            "characters": [e.to_dict() for e in self.characters],
            "items": [e.to_dict() for e in self.items],
            "actions": [a.to_dict() for a in self.actions],
        }

    @classmethod
    def from_dict(cls, d: dict) -> "Scene":
        return cls(
            span=SceneSpan.from_dict(d["span"]),
            characters=tuple(EntityRef.from_dict(e) for e in d.get("characters", [])),
            items=tuple(EntityRef.from_dict(e) for e in d.get("items", [])),
            actions=tuple(SvoAction.from_dict(a) for a in d.get("actions", [])),
        )


def tokenize_sentences(story_text: str) -> list[Sentence]:
    """Split a story into indexed sentences.

    Raises EmptyStory for whitespace-only input. Whitespace runs inside a
    sentence collapse to single spaces, so joining the results preserves
    the input's word sequence.
    """
    if not story_text or not story_text.strip():
        raise EmptyStory("story text is empty")

    text = story_text.strip()
    sentences: list[str] = []
    start = 0
    for m in _SENTENCE_END.finditer(text):
        end = m.end()
        if end >= len(text) or text[end].isspace():
            chunk = text[start:end].strip()
            if chunk:
                sentences.append(_WS_RUN.sub(" ", chunk))
            start = end
    tail = text[start:].strip()
    if tail:
        sentences.append(_WS_RUN.sub(" ", tail))
    return [Sentence(index=i, text=s) for i, s in enumerate(sentences)]


def rebuild_scene_text(story: list[Sentence], span: SceneSpan) -> str:
    """Join the sentences covered by ``span`` with single spaces."""
    n = len(story)
    if span.begin_index < 0 or span.end_index >= n or span.begin_index > span.end_index:
        raise SpanOutOfRange(
            f"span {span.begin_index}..{span.end_index} invalid for {n} sentences"
        )
    return " ".join(s.text for s in story[span.begin_index : span.end_index + 1])
