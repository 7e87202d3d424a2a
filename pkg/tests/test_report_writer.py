import json

from client.report_writer import canonical_json, render, render_text, write_artifacts, write_output

PAYLOAD = {
    "command": "verify",
    "subject": "agl1(5)",
    "passed": False,
    "report": {
        "checks": [
            {"name": "axiom_a_lines_determined", "pass": True, "detail": "10 pairs"},
            {"name": "lines_invariant", "pass": False, "detail": "", "witness": [3, 1, 2]},
        ],
        "stats": {"Q": 5, "lines": 1},
    },
}


def test_canonical_json_is_stable():
    shuffled = dict(reversed(list(PAYLOAD.items())))
    assert canonical_json(PAYLOAD) == canonical_json(shuffled)
    assert canonical_json(PAYLOAD).endswith("}\n")
    assert json.loads(canonical_json(PAYLOAD)) == PAYLOAD


def test_render_text():
    text = render_text(PAYLOAD)
    lines = text.splitlines()
    assert lines[0] == "verify agl1(5): FAIL"
    assert lines[1] == "  axiom_a_lines_determined  PASS  10 pairs"
    assert lines[2] == "  lines_invariant           FAIL  witness=[3, 1, 2]"
    assert lines[3:] == ["  Q: 5", "  lines: 1"]


def test_render_sweep_entries():
    sweep = {
        "command": "sweep",
        "passed": True,
        "entries": [{"name": "j9", "passed": True, "report": {"checks": [], "stats": {"order": 72}}}],
        "timing": {"seconds": 0.5},
    }
    lines = render(sweep, "text").splitlines()
    assert lines == ["sweep: PASS", "  [PASS] j9", "    order: 72", "  timing: {'seconds': 0.5}"]
    assert render(sweep, "json") == canonical_json(sweep)


def test_write_output_to_stdout_and_file(tmp_path, capsys):
    write_output("hello\n", None)
    assert capsys.readouterr().out == "hello\n"
    target = tmp_path / "nested" / "report.json"
    write_output("{}\n", str(target))
    assert target.read_text(encoding="utf-8") == "{}\n"


def test_write_artifacts(tmp_path):
    output = tmp_path / "frob.json"
    paths = write_artifacts({"lines": {"lines": [[1, 2, 3]]}, "group": {"order": 21}}, str(output))
    assert paths == [str(tmp_path / "frob.group.json"), str(tmp_path / "frob.lines.json")]
    assert json.loads((tmp_path / "frob.group.json").read_text(encoding="utf-8")) == {"order": 21}
