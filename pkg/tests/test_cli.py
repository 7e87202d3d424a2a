import json
import subprocess
import sys
from pathlib import Path

import pytest

import main

from core.errors import LemmaViolationError
from core.main_functions import run_command

from tests.test_variables import NOT_LATIN_TABLE, S3_TABLE

REPO_ROOT = Path(__file__).resolve().parent.parent


def test_verify_prints_canonical_json(capsys):
    assert main.main(["verify", "--catalog", "agl1(5)"]) == 0
    out = capsys.readouterr().out
    payload = json.loads(out)
    assert payload["passed"]
    assert out == json.dumps(payload, sort_keys=True, indent=2) + "\n"


def test_text_format(capsys):
    assert main.main(["split-suite", "--catalog", "agl1(5)", "--format", "text"]) == 0
    lines = capsys.readouterr().out.splitlines()
    assert lines[0] == "split-suite agl1(5): PASS"
    assert any(line.strip().startswith("equivalence") for line in lines)


def test_output_is_deterministic(tmp_path):
    """
    Two runs without --timing write byte-identical reports.
    """
    first, second = tmp_path / "a.json", tmp_path / "b.json"
    assert main.main(["verify", "--catalog", "j9", "--output", str(first)]) == 0
    assert main.main(["verify", "--catalog", "j9", "--output", str(second)]) == 0
    assert first.read_bytes() == second.read_bytes()


@pytest.mark.slow
def test_default_sweep_is_deterministic(tmp_path):
    """
    Two serial sweeps of the default corpus and one over a process pool write
    byte-identical reports.
    """
    outputs = [tmp_path / "serial_a.json", tmp_path / "serial_b.json", tmp_path / "parallel.json"]
    assert main.main(["sweep", "--output", str(outputs[0])]) == 0
    assert main.main(["sweep", "--output", str(outputs[1])]) == 0
    assert main.main(["sweep", "--jobs", "2", "--output", str(outputs[2])]) == 0
    reports = [path.read_bytes() for path in outputs]
    assert reports[0] == reports[1] == reports[2]
    assert len(json.loads(reports[0])["entries"]) == 8


def test_failed_check_exits_one(tmp_path, capsys):
    document = {"type": "cayley", "table": S3_TABLE, "geometry": {"Q": [1, 2, 5], "lines": [[1, 2]]}}
    path = tmp_path / "s3_bad_lines.json"
    path.write_text(json.dumps(document), encoding="utf-8")
    assert main.main(["verify", "--input", str(path)]) == 1
    assert not json.loads(capsys.readouterr().out)["passed"]


def test_extend_writes_artifacts(tmp_path):
    output = tmp_path / "out" / "c5.json"
    assert main.main(["extend", "--catalog", "cyclic(5)", "--output", str(output)]) == 0
    payload = json.loads(output.read_text(encoding="utf-8"))
    assert "artifacts" not in payload
    group = json.loads((output.parent / "c5.group.json").read_text(encoding="utf-8"))
    geometry = json.loads((output.parent / "c5.geometry.json").read_text(encoding="utf-8"))
    assert len(group["table"]) == 10
    assert len(geometry["Q"]) == 5


def test_artifacts_stay_inline_without_output(capsys):
    assert main.main(["kloop", "--catalog", "cyclic(7)"]) == 0
    payload = json.loads(capsys.readouterr().out)
    assert payload["artifacts"]["loop"]["carrier"] == list(range(7))


def test_usage_errors_exit_two(capsys):
    assert main.main([]) == 2
    assert main.main(["verify"]) == 2
    assert main.main(["verify", "--catalog", "j9", "--input", "j9.json"]) == 2
    assert main.main(["extend", "--catalog", "j9", "--class", "1"]) == 2
    assert "[_UsageError]" in capsys.readouterr().err


def test_input_errors_exit_two(tmp_path, capsys):
    assert main.main(["verify", "--catalog", "bogus(3)"]) == 2
    assert "[InputError]" in capsys.readouterr().err
    assert main.main(["verify", "--input", str(tmp_path / "missing.json")]) == 2
    assert main.main(["verify", "--catalog", "frob(7,3)"]) == 2
    assert "[PreconditionError]" in capsys.readouterr().err
    assert main.main(["sweep", "--jobs", "0"]) == 2


def test_sweep_exit_codes(tmp_path, capsys):
    corrupted = tmp_path / "corrupted.json"
    corrupted.write_text(json.dumps({"type": "cayley", "table": NOT_LATIN_TABLE}), encoding="utf-8")
    assert main.main(["sweep", "cyclic_ext(3)", str(corrupted)]) == 1
    entries = json.loads(capsys.readouterr().out)["entries"]
    assert [entry["passed"] for entry in entries] == [True, False]

    assert main.main(["sweep", "cyclic_ext(3)", "bogus(3)"]) == 2
    assert "[InputError]" in capsys.readouterr().err


def test_lemma_violation_exits_one(monkeypatch, capsys):
    def violated(*args, **kwargs):
        raise LemmaViolationError("inverse formula fails in the quasidirect product", witness=[3])

    monkeypatch.setattr(run_command, "extend_frobenius", violated)
    assert main.main(["extend", "--catalog", "cyclic(5)"]) == 1
    payload = json.loads(capsys.readouterr().out)
    assert [check["name"] for check in payload["report"]["checks"]] == ["lemma_violation"]


def test_unexpected_errors_exit_two(monkeypatch, capsys):
    def broken(*args, **kwargs):
        raise RuntimeError("worker died")

    monkeypatch.setattr(main, "run", broken)
    assert main.main(["catalog", "j9"]) == 2
    assert "[Error] RuntimeError: worker died" in capsys.readouterr().err


def test_bad_config_exits_two(monkeypatch, capsys):
    monkeypatch.setenv("MOCKHYP_MAX_ORDER", "lots")
    assert main.main(["catalog", "j9"]) == 2
    assert "[ConfigError]" in capsys.readouterr().err


def test_debug_banners_go_to_stderr(monkeypatch, capsys):
    monkeypatch.setenv("PRINT_DEBUG_COMMENTS", "true")
    assert main.main(["catalog", "agl1(5)"]) == 0
    captured = capsys.readouterr()
    assert "--- DEBUG, RUNNING CATALOG ---" in captured.err
    assert json.loads(captured.out)["subject"] == "agl1(5)"


def test_subprocess_catalog():
    """
    Run main.py as a script to check the real process exit code.
    """
    result = subprocess.run(
        [sys.executable, "main.py", "catalog", "j9", "--format", "text"],
        cwd=REPO_ROOT, capture_output=True, text=True, check=False,
    )
    assert result.returncode == 0, result.stderr
    assert result.stdout.startswith("catalog j9: PASS")
