import json

from fixpoint_sets.fps_engine import is_fixed_point_set
from fixpoint_sets.reports import classification_table, render, save_reports


PAYLOAD = {
    "verdict": "AGREE",
    "p": 2,
    "misses": [],
    "ledger": {"total_summands": 2, "sum_np": 2, "ok": True},
    "all": [
        {"degree": 2, "size": 1, "set": "{ (1 2) }", "closed": True, "exact": True, "projective": False,
         "np": 1, "verdict": "yes"},
    ],
}


def test_json_round_trip():
    assert json.loads(render(PAYLOAD, "json")) == PAYLOAD


def test_text_carries_the_same_verdicts(xi24):
    payload = is_fixed_point_set(xi24, 2).to_dict()
    text = render(payload, "text", title="is-fps")
    assert "fixed_point_set: true" in text
    assert f"np: {payload['np']}" in text
    assert text.startswith("IS-FPS\n")


def test_text_includes_table():
    text = render(PAYLOAD, "text")
    assert "verdict: AGREE" in text
    assert "misses: -" in text
    assert "{ (1 2) }" in text.split("FIXED POINT SETS")[1]


def test_markdown_table():
    lines = classification_table(PAYLOAD["all"])
    assert lines[0].startswith("| degree | size | set |")
    assert lines[2] == "| 2 | 1 | { (1 2) } | true | true | false | 1 | - | yes |"
    markdown = render(PAYLOAD, "markdown", title="classify")
    assert "- **verdict:** AGREE" in markdown


def test_save_reports_respects_format_toggles(tmp_path):
    saved = save_reports(PAYLOAD, tmp_path / "out", "verify-p2-q2-n2",
                         {"json": True, "text": False, "markdown": True, "pdf": True})
    assert sorted(p.name for p in saved) == ["verify-p2-q2-n2.json", "verify-p2-q2-n2.md"]
    assert json.loads((tmp_path / "out" / "verify-p2-q2-n2.json").read_text()) == PAYLOAD
