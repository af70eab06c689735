"""Batch driver: analyze, suggest, compile, render, and serve.

Exit codes are stable: 0 ok, 2 input error, 3 config error,
4 authoring error, 5 analyzer error.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path

from . import document as docmod
from .analyzers import FixtureAnalyzer, LlmAnalyzer, LlmAnalyzerConfig
from .authoring import AuthoringError, apply_script, load_script
from .designspace import suggest
from .errors import (
    AnalyzerUnavailable,
    BadPermutation,
    ConfigError,
    CorruptDocument,
    EmptyStory,
    InvalidSpans,
    MalformedResponse,
    MissingActor,
    MissingField,
    MotionComicError,
    NothingToExport,
    SchemaMismatch,
    SpanOutOfRange,
    UnclassifiedAction,
    UnknownAction,
    UnknownAsset,
    UnknownCategory,
    UnknownClip,
    UnknownEntity,
    UnknownScene,
    UnknownTemplate,
    UnknownVariant,
    UnsavedLayout,
)
from .render import DEFAULT_FPS, write_export

EXIT_OK = 0
EXIT_INPUT = 2
EXIT_CONFIG = 3
EXIT_AUTHORING = 4
EXIT_ANALYZER = 5

_INPUT_ERRORS = (EmptyStory, CorruptDocument, SchemaMismatch, SpanOutOfRange)
_CONFIG_ERRORS = (ConfigError,)
_AUTHORING_ERRORS = (
    AuthoringError, UnknownTemplate, MissingActor, UnknownScene, UnknownAction, UnknownAsset,
    UnknownVariant, UnknownEntity, UnknownClip, BadPermutation, UnsavedLayout, NothingToExport,
    UnclassifiedAction,
)
_ANALYZER_ERRORS = (AnalyzerUnavailable, MalformedResponse, InvalidSpans, MissingField, UnknownCategory)


def _exit_code(exc: MotionComicError) -> int:
    if isinstance(exc, _CONFIG_ERRORS):
        return EXIT_CONFIG
    if isinstance(exc, _ANALYZER_ERRORS):
        return EXIT_ANALYZER
    if isinstance(exc, _AUTHORING_ERRORS):
        return EXIT_AUTHORING
    if isinstance(exc, _INPUT_ERRORS):
        return EXIT_INPUT
    return EXIT_INPUT


def _build_analyzer(args):
    if args.analyzer == "fixture":
        if not args.fixture:
            raise ConfigError("--analyzer fixture requires --fixture FILE")
        if not os.path.exists(args.fixture):
            raise EmptyStory(f"fixture file not found: {args.fixture}")
        return FixtureAnalyzer.from_file(args.fixture)
    return LlmAnalyzer(LlmAnalyzerConfig.from_env())


def _read_story(path: str) -> str:
    if not os.path.exists(path):
        raise EmptyStory(f"story file not found: {path}")
    return Path(path).read_text(encoding="utf-8")


def cmd_analyze(args) -> int:
    analyzer = _build_analyzer(args)
    doc = docmod.new_project(_read_story(args.story), analyzer)
    docmod.save(doc, args.out)
    print(f"analyzed {len(doc.story)} sentences into {len(doc.scenes)} scenes -> {args.out}")
    return EXIT_OK


def cmd_suggest(args) -> int:
    doc = docmod.load(args.project)
    rec = doc.scene_record(args.scene)
    print(f"scene {args.scene}: {len(rec.scene.actions)} actions")
    for action in rec.scene.actions:
        cat = action.category.value if action.category else "unclassified"
        print(f"  [{action.id}] {action.subject} {action.verb.upper()} {action.object} ({cat})")
        if action.category is None:
            continue
        for s in suggest(action):
            print(f"      #{s.rank} {s.template.id} score={s.score}")
    return EXIT_OK


def cmd_compile(args) -> int:
    doc = docmod.load(args.project)
    script = load_script(args.authoring)
    doc = apply_script(doc, script)
    if args.save_project:
        docmod.save(doc, args.save_project)
    counts = write_export(doc, args.out, fps=args.fps)
    total = sum(counts.values())
    print(f"exported {len(counts)} scenes, {total} frames at {args.fps} fps -> {args.out}")
    return EXIT_OK


def cmd_render(args) -> int:
    doc = docmod.load(args.project)
    from .render import _SceneGeometry, render_frames  # frame writer shares export layout
    import shutil

    frames = render_frames(doc, args.scene, args.fps)
    out = Path(args.out)
    scene_dir = out / f"scene-{args.scene:03d}"
    scene_dir.mkdir(parents=True, exist_ok=True)
    for k, data in enumerate(frames):
        (scene_dir / f"frame-{k:06d}.svg").write_bytes(data)
    rec = doc.scene_record(args.scene)
    for ref in _SceneGeometry(doc, rec).asset_refs():
        if ref.kind == "builtin":
            from .assets import builtin_file

            target = out / "assets" / "builtin" / ref.path
            target.parent.mkdir(parents=True, exist_ok=True)
            shutil.copyfile(builtin_file(ref), target)
    print(f"rendered {len(frames)} frames -> {scene_dir}")
    return EXIT_OK


def cmd_serve(args) -> int:
    from .service import main as serve_main

    serve_main(port=args.port)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="motioncomic", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("analyze", help="run the story analysis pipeline")
    p.add_argument("--story", required=True)
    p.add_argument("--analyzer", choices=("llm", "fixture"), default="llm")
    p.add_argument("--fixture", default=None)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_analyze)

    p = sub.add_parser("suggest", help="print ranked animation suggestions for a scene")
    p.add_argument("--project", required=True)
    p.add_argument("--scene", type=int, required=True)
    p.set_defaults(func=cmd_suggest)

    p = sub.add_parser("compile", help="apply an authoring script and export")
    p.add_argument("--project", required=True)
    p.add_argument("--authoring", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--fps", type=float, default=DEFAULT_FPS)
    p.add_argument("--save-project", default=None)
    p.set_defaults(func=cmd_compile)

    p = sub.add_parser("render", help="render one scene to SVG frames")
    p.add_argument("--project", required=True)
    p.add_argument("--scene", type=int, required=True)
    p.add_argument("--fps", type=float, default=DEFAULT_FPS)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_render)

    p = sub.add_parser("serve", help="run the HTTP service")
    p.add_argument("--port", type=int, default=None)
    p.set_defaults(func=cmd_serve)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except MotionComicError as exc:
        print(f"error [{exc.code}]: {exc.message}", file=sys.stderr)
        if exc.detail:
            print(json.dumps(exc.detail, default=str)[:500], file=sys.stderr)
        return _exit_code(exc)


if __name__ == "__main__":
    sys.exit(main())
