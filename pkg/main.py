"""
Command-line entry point to run the reflection space verification suites.

Usage:
    python main.py verify --catalog "agl1(5)"
    python main.py split-suite --input group.json --class 3
    python main.py kloop --catalog "frob(7,3)"
    python main.py extend --catalog "frob(7,3)" --output out/frob73.json
    python main.py catalog j9
    python main.py sweep [NAME_OR_PATH ...] --jobs 4

Exit codes: 0 all checks pass, 1 some check fails (lemma violations included),
2 input or usage error and unexpected failures.
"""
import argparse
import sys
from typing import Optional, Sequence

from client.report_writer import render, write_artifacts, write_output
from core.errors import AlgebraError, ConfigError
from core.main_functions.run_command import EXIT_USAGE, build_command, run
from core.settings import debug, print_debug_comments


class _UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    """Raise on usage errors instead of exiting, so callers get exit code 2 back."""

    def error(self, message):
        raise _UsageError(message)


def _add_common(parser: argparse.ArgumentParser, with_source: bool = True, with_class: bool = True) -> None:
    if with_source:
        source = parser.add_mutually_exclusive_group(required=True)
        source.add_argument("--input", type=str, help="Path to a group JSON document.")
        source.add_argument("--catalog", type=str, help="Catalog name, e.g. agl1(5) or frob(7,3).")
    if with_class:
        parser.add_argument(
            "--class", dest="involution", type=int, default=None,
            help="Element index selecting the involution class (default: smallest involution).",
        )
    parser.add_argument("--output", type=str, default=None, help="Write the report here instead of stdout.")
    parser.add_argument("--format", choices=["json", "text"], default="json", help="Report format.")
    parser.add_argument("--timing", action="store_true", help="Add a non-canonical timing field.")


def build_parser() -> argparse.ArgumentParser:
    # Get argument parsers
    parser = _Parser(prog="main.py", description="Verify reflection spaces, K-loops and Frobenius extensions.")
    subparsers = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    # Get "verify" / "split-suite" / "kloop" parameters
    _add_common(subparsers.add_parser("verify", help="Run the reflection space axioms and lemma battery."))
    _add_common(subparsers.add_parser("split-suite", help="Evaluate the eight splitting conditions."))
    _add_common(subparsers.add_parser("kloop", help="Build the K-loop and check its identities."))

    # Get "extend" parameters (no class selector: J is fixed by the construction)
    _add_common(
        subparsers.add_parser("extend", help="Build the quasidirect extension and verify its geometry."),
        with_class=False,
    )

    # Get "catalog" parameters
    catalog_parser = subparsers.add_parser("catalog", help="Describe a catalog entry.")
    catalog_parser.add_argument("name", type=str, help="Catalog name.")
    _add_common(catalog_parser, with_source=False, with_class=False)

    # Get "sweep" parameters
    sweep_parser = subparsers.add_parser("sweep", help="Run every suite over a corpus.")
    sweep_parser.add_argument("names", nargs="*", help="Catalog names or group JSON paths (default corpus if empty).")
    sweep_parser.add_argument("--jobs", type=int, default=1, help="Worker processes.")
    _add_common(sweep_parser, with_source=False, with_class=False)
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    debug_enabled = False
    try:
        debug_enabled = print_debug_comments()
        args = build_parser().parse_args(argv)
        options = {
            "verb": args.command,
            "output": args.output,
            "format": args.format,
            "timing": args.timing,
        }
        if args.command == "catalog":
            options["catalog"] = args.name
        elif args.command == "sweep":
            options["names"] = args.names or None
            options["jobs"] = args.jobs
        else:
            options["input"] = args.input
            options["catalog"] = args.catalog
            options["involution"] = getattr(args, "involution", None)
        cmd = build_command(**options)

        debug(f"RUNNING {cmd.verb.upper()}", debug_enabled)
        exit_code, payload = run(cmd, print_debug_comments=debug_enabled)

        artifacts = payload.pop("artifacts", None)
        if artifacts and cmd.output is not None:
            for path in write_artifacts(artifacts, cmd.output):
                debug(f"WROTE {path}", debug_enabled)
        elif artifacts:
            payload["artifacts"] = artifacts
        write_output(render(payload, cmd.format), cmd.output)
        return exit_code
    except (_UsageError, AlgebraError, ConfigError) as e:
        # Display the type of exception + message
        print(f"[{type(e).__name__}] {e}", file=sys.stderr)
        return EXIT_USAGE
    except Exception as e:
        # Catch-all for unexpected errors
        print(f"[Error] {type(e).__name__}: {e}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
