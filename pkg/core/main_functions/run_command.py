"""
The command model shared by the CLI and the API, and the dispatcher that turns a
command into an exit code and a canonical payload.

Exit codes: 0 when every check passes, 1 when some check fails (a lemma violation
counts as a failed check). Input and usage errors are raised (the callers map them
to exit code 2 / HTTP 400).
"""

import time
from typing import Literal, Optional, Tuple

from pydantic import BaseModel, Field, ValidationError, model_validator

from client.group_loader import LoadedInput, load_entry, load_group_document, load_group_file
from core.errors import InputError, LemmaViolationError
from core.helper_functions.catalog import build_catalog_entry
from core.helper_functions.reports import AxiomReport
from core.main_functions.analyze_kloop import analyze_kloop
from core.main_functions.describe_catalog import describe_catalog
from core.main_functions.extend_frobenius import extend_frobenius
from core.main_functions.run_sweep import run_sweep
from core.main_functions.split_suite import split_suite
from core.main_functions.verify_space import verify_space

Verb = Literal["verify", "split-suite", "kloop", "extend", "catalog", "sweep"]
EXIT_OK = 0
EXIT_CHECK_FAILED = 1
EXIT_USAGE = 2


class Command(BaseModel):
    verb: Verb
    input: Optional[str] = None
    catalog: Optional[str] = None
    document: Optional[dict] = None
    names: Optional[list[str]] = None
    involution: Optional[int] = Field(default=None, ge=0)
    output: Optional[str] = None
    format: Literal["json", "text"] = "json"
    jobs: int = Field(default=1, ge=1)
    timing: bool = False
    allow_files: bool = True

    @model_validator(mode="after")
    def _check_sources(self) -> "Command":
        sources = sum(source is not None for source in (self.input, self.catalog, self.document))
        if self.verb == "sweep":
            if sources:
                raise ValueError("sweep takes names, not --input/--catalog")
        elif self.verb == "catalog":
            if self.catalog is None or sources != 1:
                raise ValueError("catalog needs exactly one catalog name")
        elif sources != 1:
            raise ValueError(f"{self.verb} needs exactly one of --input or --catalog")
        return self


def build_command(**options) -> Command:
    """Validate raw options into a Command; raises InputError on bad combinations."""
    try:
        return Command(**options)
    except ValidationError as e:
        messages = "; ".join(error["msg"] for error in e.errors())
        raise InputError(f"invalid command: {messages}") from e


def _load(cmd: Command) -> LoadedInput:
    if cmd.input is not None:
        return load_group_file(cmd.input)
    if cmd.document is not None:
        return load_group_document(cmd.document)
    return LoadedInput(entry=build_catalog_entry(cmd.catalog))


def _payload(cmd: Command, subject: str, report: AxiomReport) -> dict:
    return {
        "command": cmd.verb,
        "subject": subject,
        "passed": report.passed,
        "report": report.canonical(),
    }


def _subject(cmd: Command) -> str:
    if cmd.catalog is not None:
        return cmd.catalog
    return cmd.input if cmd.input is not None else "document"


def _run_single(cmd: Command, print_debug_comments: Optional[bool]) -> dict:
    loaded = _load(cmd) if cmd.verb != "catalog" else load_entry(cmd.catalog, allow_files=cmd.allow_files)
    entry = loaded.entry
    if cmd.verb == "verify":
        report = verify_space(entry, cmd.involution, loaded.geometry, print_debug_comments)
        return _payload(cmd, entry.name, report)
    if cmd.verb == "split-suite":
        return _payload(cmd, entry.name, split_suite(entry, cmd.involution, print_debug_comments))
    if cmd.verb == "kloop":
        report, loop = analyze_kloop(entry, cmd.involution, print_debug_comments)
        payload = _payload(cmd, entry.name, report)
        payload["artifacts"] = {"loop": loop.to_json_dict()}
        return payload
    if cmd.verb == "extend":
        report, ext = extend_frobenius(entry, print_debug_comments)
        payload = _payload(cmd, entry.name, report)
        payload["artifacts"] = {
            "group": ext.quasidirect.group.to_json_dict(),
            "geometry": ext.geometry.to_json_dict(),
        }
        return payload
    payload = _payload(cmd, entry.name, describe_catalog(entry, print_debug_comments))
    payload["artifacts"] = {"group": entry.group.to_json_dict()}
    return payload


def run(cmd: Command, print_debug_comments: Optional[bool] = False) -> Tuple[int, dict]:
    """
    Execute one command.

    Args:
        cmd (Command): A validated command.
        print_debug_comments (bool): Print progress banners to stderr.
    Returns:
        Tuple[int, dict]: The exit code (0 or 1) and the payload. `extend` and
            `catalog` add an "artifacts" mapping; `--timing` adds "timing". A
            LemmaViolationError becomes a failed `lemma_violation` check.
    Raises:
        InputError: For unreadable inputs or unknown catalog names.
        AlgebraError: When a precondition of the selected pipeline fails.
    """
    started = time.perf_counter()
    if cmd.verb == "sweep":
        entries = run_sweep(
            cmd.names, jobs=cmd.jobs, print_debug_comments=print_debug_comments, allow_files=cmd.allow_files,
        )
        payload = {
            "command": cmd.verb,
            "passed": all(entry["passed"] for entry in entries),
            "entries": entries,
        }
    else:
        try:
            payload = _run_single(cmd, print_debug_comments)
        except LemmaViolationError as e:
            report = AxiomReport()
            report.add("lemma_violation", False, e.witness, detail=str(e))
            payload = _payload(cmd, _subject(cmd), report)

    if cmd.timing:
        payload["timing"] = {"seconds": round(time.perf_counter() - started, 3)}
    return (EXIT_OK if payload["passed"] else EXIT_CHECK_FAILED), payload
