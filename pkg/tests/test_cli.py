"""CLI exit codes and batch determinism."""

import json
import os
import subprocess
import sys
from pathlib import Path

import pytest

from motioncomic.cli import main

FIXTURES = Path(__file__).resolve().parent.parent / "fixtures"


def run_cli(*args, env=None):
    e = dict(os.environ)
    e.pop("DB_LLM_BASE_URL", None)
    e.pop("DB_LLM_API_KEY", None)
    if env:
        e.update(env)
    return subprocess.run(
        [sys.executable, "-m", "motioncomic.cli", *args],
        capture_output=True, text=True, env=e,
    )


@pytest.fixture(scope="module")
def analyzed(tmp_path_factory):
    out = tmp_path_factory.mktemp("cli") / "project.json"
    code = main([
        "analyze", "--story", str(FIXTURES / "sleeping_beauty.txt"),
        "--analyzer", "fixture", "--fixture", str(FIXTURES / "sleeping_beauty.analysis.json"),
        "--out", str(out),
    ])
    assert code == 0
    return out


class TestExitCodes:
    def test_missing_story_file_is_input_error(self, tmp_path):
        r = run_cli("analyze", "--story", "nope.txt", "--analyzer", "fixture",
                    "--fixture", str(FIXTURES / "sleeping_beauty.analysis.json"),
                    "--out", str(tmp_path / "p.json"))
        assert r.returncode == 2

    def test_llm_without_credentials_is_config_error(self, tmp_path):
        r = run_cli("analyze", "--story", str(FIXTURES / "sleeping_beauty.txt"),
                    "--out", str(tmp_path / "p.json"))
        assert r.returncode == 3
        assert "ConfigError" in r.stderr

    def test_fixture_without_file_is_config_error(self, tmp_path):
        r = run_cli("analyze", "--story", str(FIXTURES / "sleeping_beauty.txt"),
                    "--analyzer", "fixture", "--out", str(tmp_path / "p.json"))
        assert r.returncode == 3

    def test_unknown_template_is_authoring_error(self, analyzed, tmp_path):
        script = tmp_path / "script.json"
        script.write_text(json.dumps({"version": 1, "ops": [
            {"op": "put_layout", "scene": 0, "placements": [{"entity": "princess", "x": 1, "y": 1}]},
            {"op": "add_clip", "scene": 0, "template": "ptrans.warp", "params": {}},
        ]}))
        r = run_cli("compile", "--project", str(analyzed), "--authoring", str(script),
                    "--out", str(tmp_path / "out"))
        assert r.returncode == 4
        assert "ptrans.warp" in r.stderr

    def test_analyzer_gap_is_analyzer_error(self, tmp_path):
        # a fixture that knows nothing about the story: replay misses -> exit 5
        empty = tmp_path / "empty.json"
        empty.write_text('{"segment": {}, "extract": {}, "classify": {}}')
        r = run_cli("analyze", "--story", str(FIXTURES / "sleeping_beauty.txt"),
                    "--analyzer", "fixture", "--fixture", str(empty),
                    "--out", str(tmp_path / "p.json"))
        assert r.returncode == 5
        assert "AnalyzerUnavailable" in r.stderr

    def test_render_unsaved_layout_is_authoring_error(self, analyzed, tmp_path):
        r = run_cli("render", "--project", str(analyzed), "--scene", "0",
                    "--out", str(tmp_path / "frames"))
        assert r.returncode == 4


class TestDeterminism:
    def test_analyze_twice_byte_identical(self, tmp_path):
        outs = []
        for name in ("a.json", "b.json"):
            out = tmp_path / name
            code = main([
                "analyze", "--story", str(FIXTURES / "sleeping_beauty.txt"),
                "--analyzer", "fixture", "--fixture", str(FIXTURES / "sleeping_beauty.analysis.json"),
                "--out", str(out),
            ])
            assert code == 0
            outs.append(out.read_bytes())
        assert outs[0] == outs[1]

    def test_compile_empty_script_exports_static_layouts(self, analyzed, tmp_path):
        script = tmp_path / "empty.json"
        script.write_text(json.dumps({"version": 1, "ops": [
            {"op": "put_layout", "scene": 0, "placements": [{"entity": "princess", "x": 400, "y": 600}]},
        ]}))
        code = main(["compile", "--project", str(analyzed), "--authoring", str(script),
                     "--out", str(tmp_path / "out")])
        assert code == 0
        frames = list((tmp_path / "out" / "scene-000").glob("frame-*.svg"))
        assert len(frames) == 1  # static layout: one frame

    def test_suggest_prints_ranked_table(self, analyzed, capsys):
        code = main(["suggest", "--project", str(analyzed), "--scene", "0"])
        assert code == 0
        out = capsys.readouterr().out
        assert "#1 ptrans.path score=593" in out
        assert "#2 ptrans.dis_reappear score=18" in out
