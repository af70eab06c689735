"""Typed error hierarchy shared across the engine, service, and CLI.

Every error carries a stable ``code`` string; the HTTP layer serializes
errors as ``{code, message, detail}`` and the CLI maps them to exit codes.
"""

from __future__ import annotations

from typing import Any


class MotionComicError(Exception):
    """Base class; ``code`` is stable across releases."""

    code = "Error"

    def __init__(self, message: str = "", detail: Any = None):
        super().__init__(message or self.code)
        self.message = message or self.code
        self.detail = detail

    def as_dict(self) -> dict:
        return {"code": self.code, "message": self.message, "detail": self.detail}


# --- story / narrative model ---

class EmptyStory(MotionComicError):
    code = "EmptyStory"


class SpanOutOfRange(MotionComicError):
    code = "SpanOutOfRange"


# --- analysis pipeline ---

class AnalyzerUnavailable(MotionComicError):
    """Transport-level failure talking to the analyzer backend."""

    code = "AnalyzerUnavailable"


class MalformedResponse(MotionComicError):
    """Analyzer answered, but the payload does not parse as the expected schema."""

    code = "MalformedResponse"


class MissingField(MotionComicError):
    code = "MissingField"

    def __init__(self, path: str):
        super().__init__(f"required field missing: {path}", detail=path)
        self.path = path


class InvalidSpans(MotionComicError):
    code = "InvalidSpans"


class Unrepairable(MotionComicError):
    code = "Unrepairable"


class UnknownCategory(MotionComicError):
    code = "UnknownCategory"

    def __init__(self, token: str):
        super().__init__(f"not one of the eight action categories: {token!r}", detail=token)
        self.token = token


class UnknownAction(MotionComicError):
    code = "UnknownAction"


# --- design space / composition ---

class UnclassifiedAction(MotionComicError):
    code = "UnclassifiedAction"


class UnknownTemplate(MotionComicError):
    code = "UnknownTemplate"


class MissingActor(MotionComicError):
    """A template role (subject/object/receiver/slot) has no placed element."""

    code = "MissingActor"

    def __init__(self, role: str, message: str = ""):
        super().__init__(message or f"no placed element for role: {role}", detail=role)
        self.role = role


# --- animation engine ---

class UnknownClip(MotionComicError):
    code = "UnknownClip"


class BadPermutation(MotionComicError):
    code = "BadPermutation"


# --- document store ---

class UnknownAsset(MotionComicError):
    code = "UnknownAsset"


class UnknownVariant(MotionComicError):
    code = "UnknownVariant"


class UnknownEntity(MotionComicError):
    code = "UnknownEntity"


class UnknownScene(MotionComicError):
    code = "UnknownScene"


class UnknownProject(MotionComicError):
    code = "UnknownProject"


class SchemaMismatch(MotionComicError):
    code = "SchemaMismatch"


class CorruptDocument(MotionComicError):
    code = "CorruptDocument"


class InvariantViolation(MotionComicError):
    code = "InvariantViolation"


# --- render / export ---

class UnsavedLayout(MotionComicError):
    code = "UnsavedLayout"


class NothingToExport(MotionComicError):
    code = "NothingToExport"


# --- configuration ---

class ConfigError(MotionComicError):
    code = "ConfigError"


class UploadTooLarge(MotionComicError):
    code = "UploadTooLarge"
