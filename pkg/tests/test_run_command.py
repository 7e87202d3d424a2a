import json

import pytest

from core.errors import BadParamsError, EvenOrderError, InputError, LemmaViolationError, PreconditionError
from core.helper_functions.catalog import build_catalog_entry
from core.main_functions.analyze_kloop import choose_loop_carrier
from core.main_functions import run_command
from core.main_functions.run_command import (
    EXIT_CHECK_FAILED,
    EXIT_OK,
    build_command,
    run,
)
from core.main_functions.run_sweep import run_sweep, sweep_entry

from tests.test_variables import NOT_LATIN_TABLE, S3_TABLE


def _names(payload: dict) -> list[str]:
    return [check["name"] for check in payload["report"]["checks"]]


def _write_group(tmp_path, name: str, table) -> str:
    path = tmp_path / name
    path.write_text(json.dumps({"type": "cayley", "table": table}), encoding="utf-8")
    return str(path)


# --- COMMAND VALIDATION ---
@pytest.mark.parametrize(
    "options",
    [
        {"verb": "verify"},
        {"verb": "verify", "catalog": "j9", "input": "j9.json"},
        {"verb": "catalog"},
        {"verb": "catalog", "catalog": "j9", "input": "j9.json"},
        {"verb": "sweep", "catalog": "j9"},
        {"verb": "sweep", "jobs": 0},
        {"verb": "kloop", "catalog": "j9", "involution": -1},
        {"verb": "delete", "catalog": "j9"},
    ],
)
def test_invalid_commands(options):
    with pytest.raises(InputError, match="invalid command"):
        build_command(**options)


def test_valid_commands():
    assert build_command(verb="sweep").names is None
    assert build_command(verb="verify", document={"type": "cayley", "table": [[0]]}).format == "json"
    assert build_command(verb="catalog", catalog="j9", format="text").format == "text"


# --- VERBS ---
def test_verify_sharply_2_transitive_group():
    exit_code, payload = run(build_command(verb="verify", catalog="agl1(5)"))
    assert exit_code == EXIT_OK
    assert payload["command"] == "verify"
    assert payload["subject"] == "agl1(5)"
    assert payload["passed"]
    names = _names(payload)
    assert names == sorted(names)
    assert "lemma_basic_b_square_is_coset" in names
    assert "sharp2_conditions_agree" in names


def test_verify_needs_involutions():
    with pytest.raises(PreconditionError):
        run(build_command(verb="verify", catalog="frob(7,3)"))


def test_verify_user_lines_that_are_not_invariant():
    document = {"type": "cayley", "table": S3_TABLE, "geometry": {"Q": [1, 2, 5], "lines": [[1, 2]]}}
    with pytest.warns(UserWarning, match="not conjugation invariant"):
        exit_code, payload = run(build_command(verb="verify", document=document))
    assert exit_code == EXIT_CHECK_FAILED
    assert not payload["passed"]
    assert payload["subject"] == "document"


def test_split_suite():
    exit_code, payload = run(build_command(verb="split-suite", catalog="agl1(5)"))
    assert exit_code == EXIT_OK
    assert "equivalence" in _names(payload)
    assert payload["report"]["stats"]["iQ"] == 5


def test_kloop_on_whole_group():
    exit_code, payload = run(build_command(verb="kloop", catalog="frob(7,3)"))
    assert exit_code == EXIT_OK
    assert payload["report"]["stats"]["carrier"] == "G"
    assert payload["artifacts"]["loop"]["carrier"] == list(range(21))
    assert len(payload["artifacts"]["loop"]["otimes"]) == 21


def test_kloop_on_translations():
    exit_code, payload = run(build_command(verb="kloop", catalog="agl1(5)"))
    assert exit_code == EXIT_OK
    assert payload["report"]["stats"]["carrier"] == "iQ"
    assert len(payload["artifacts"]["loop"]["carrier"]) == 5


def test_choose_loop_carrier():
    g = build_catalog_entry("frob(7,3)").group
    assert choose_loop_carrier(g) == (tuple(range(21)), None)
    s3 = build_catalog_entry("agl1(3)").group
    carrier, i = choose_loop_carrier(s3)
    assert len(carrier) == 3
    assert carrier[0] == 0
    assert s3.element_orders[i] == 2


def test_extend_abelian_group():
    exit_code, payload = run(build_command(verb="extend", catalog="cyclic(5)"))
    assert exit_code == EXIT_OK
    artifacts = payload["artifacts"]
    assert len(artifacts["group"]["table"]) == 10
    assert artifacts["geometry"]["lines"] == [artifacts["geometry"]["Q"]]
    assert "frobenius_kernel_splits" not in _names(payload)


def test_extend_frobenius_group():
    exit_code, payload = run(build_command(verb="extend", catalog="frob(7,3)"))
    assert exit_code == EXIT_OK
    names = _names(payload)
    for name in ("frob_normalizer", "involutions_centralizer_of_iota", "action_faithful", "frobenius_kernel_splits"):
        assert name in names
    stats = payload["report"]["stats"]
    assert stats["extension_order"] == 882
    assert stats["lines"] == 49
    assert len(payload["artifacts"]["geometry"]["lines"]) == 49


def test_extend_rejects_nonabelian_group_without_complement():
    document = {"type": "cayley", "table": S3_TABLE}
    with pytest.raises(PreconditionError):
        run(build_command(verb="extend", document=document))


def test_catalog_description():
    exit_code, payload = run(build_command(verb="catalog", catalog="j9", timing=True))
    assert exit_code == EXIT_OK
    stats = payload["report"]["stats"]
    assert stats["order"] == 72
    assert stats["sharply_2_transitive"]
    assert stats["characteristic"] == 3
    assert stats["frobenius_type"] == "odd"
    assert payload["artifacts"]["group"]["type"] == "cayley"
    assert payload["timing"]["seconds"] >= 0


def test_catalog_rejects_unknown_family():
    with pytest.raises(InputError):
        run(build_command(verb="catalog", catalog="bogus(3)"))


def test_lemma_violation_is_a_failed_check(monkeypatch):
    def violated(*args, **kwargs):
        raise LemmaViolationError("line square differs from iλ", witness=[1, 2])

    monkeypatch.setattr(run_command, "verify_space", violated)
    exit_code, payload = run(build_command(verb="verify", catalog="agl1(5)"))
    assert exit_code == EXIT_CHECK_FAILED
    assert payload["subject"] == "agl1(5)"
    [check] = payload["report"]["checks"]
    assert check["name"] == "lemma_violation"
    assert check["witness"] == [1, 2]


def test_catalog_paths_can_be_refused(tmp_path):
    path = _write_group(tmp_path, "s3.json", S3_TABLE)
    exit_code, payload = run(build_command(verb="catalog", catalog=path))
    assert exit_code == EXIT_OK
    assert payload["subject"] == "s3.json"
    with pytest.raises(InputError, match="cannot parse"):
        run(build_command(verb="catalog", catalog=path, allow_files=False))


# --- SWEEP ---
def test_sweep_entry_records_algebra_errors(tmp_path):
    path = _write_group(tmp_path, "corrupted.json", NOT_LATIN_TABLE)
    result = sweep_entry(path)
    assert result["name"] == path
    assert not result["passed"]
    [check] = result["report"]["checks"]
    assert check["name"] == "entry_error"
    assert "E_NOT_GROUP" in check["detail"]


@pytest.mark.parametrize(
    "name, error",
    [("bogus(3)", InputError), ("frob(9,3)", BadParamsError), ("cyclic_ext(4)", EvenOrderError)],
)
def test_sweep_entry_raises_for_bad_names(name, error):
    with pytest.raises(error):
        sweep_entry(name)


def test_sweep_entry_can_refuse_files(tmp_path):
    path = _write_group(tmp_path, "s3.json", S3_TABLE)
    assert sweep_entry(path)["passed"]
    with pytest.raises(InputError):
        sweep_entry(path, allow_files=False)


def test_sweep_entry_for_odd_frobenius_group():
    result = sweep_entry("frob(7,3)")
    assert result["passed"], result["report"]["checks"]
    names = [check["name"] for check in result["report"]["checks"]]
    assert any(name.startswith("kloop_") for name in names)
    assert any(name.startswith("extend_") for name in names)
    assert not any(name.startswith("verify_") for name in names)


def test_sweep_keeps_corpus_order_across_workers(tmp_path):
    """
    A process pool returns the same records as a serial run, in corpus order,
    with a corrupted fixture recorded as a failed entry.
    """
    names = ["cyclic_ext(3)", "agl1(5)", _write_group(tmp_path, "corrupted.json", NOT_LATIN_TABLE)]
    serial = run_sweep(names, jobs=1)
    parallel = run_sweep(names, jobs=2)
    assert [entry["name"] for entry in serial] == names
    assert serial == parallel
    assert [entry["passed"] for entry in serial] == [True, True, False]


def test_sweep_bad_name_fails_in_workers_too():
    with pytest.raises(InputError):
        run_sweep(["cyclic_ext(3)", "bogus(3)"], jobs=2)


def test_sweep_exit_codes(tmp_path):
    corrupted = _write_group(tmp_path, "corrupted.json", NOT_LATIN_TABLE)
    exit_code, payload = run(build_command(verb="sweep", names=["cyclic_ext(3)", corrupted]))
    assert exit_code == EXIT_CHECK_FAILED
    assert not payload["passed"]
    assert len(payload["entries"]) == 2

    exit_code, payload = run(build_command(verb="sweep", names=[]))
    assert exit_code == EXIT_OK
    assert payload["entries"] == []

    with pytest.raises(InputError):
        run(build_command(verb="sweep", names=["cyclic_ext(3)", "bogus(3)"]))
