"""
Function to run every applicable suite over a corpus of catalog names or group files.
"""

from concurrent.futures import ProcessPoolExecutor
from functools import partial
from typing import Optional, Sequence

from client.group_loader import load_entry
from core.errors import AlgebraError, BadParamsError, EvenOrderError, InputError, UnsupportedOrderError
from core.helper_functions.catalog import DEFAULT_CORPUS
from core.helper_functions.finite_group import involutions
from core.helper_functions.reports import AxiomReport
from core.main_functions.analyze_kloop import analyze_kloop
from core.main_functions.extend_frobenius import extend_frobenius
from core.main_functions.split_suite import split_suite
from core.main_functions.verify_space import verify_space
from core.settings import debug

# Bad names and unreadable files are usage errors, not failed checks.
_NAME_ERRORS = (InputError, BadParamsError, EvenOrderError, UnsupportedOrderError)


def sweep_entry(name: str, allow_files: bool = True) -> dict:
    """
    One corpus entry: the geometry suites when the group has involutions, the K-loop
    suite (with the solvability check) always, and the extension for odd order.

    Other algebra errors (a fixture whose table is not a group, a violated lemma)
    are recorded as a failed `entry_error` check.

    Raises:
        InputError: For unknown names and unreadable or malformed files.
        BadParamsError, EvenOrderError, UnsupportedOrderError: For bad catalog parameters.
    """
    report = AxiomReport()
    try:
        loaded = load_entry(name, allow_files=allow_files)
        entry = loaded.entry
        if involutions(entry.group):
            report.merge(verify_space(entry, geometry=loaded.geometry), prefix="verify_")
            report.merge(split_suite(entry), prefix="split_")
        kloop_report, _ = analyze_kloop(entry)
        report.merge(kloop_report, prefix="kloop_")
        if entry.group.order % 2 and (entry.pair is not None or entry.group.is_abelian):
            extend_report, _ = extend_frobenius(entry)
            report.merge(extend_report, prefix="extend_")
    except _NAME_ERRORS:
        raise
    except AlgebraError as e:
        report.add("entry_error", False, e.witness, detail=str(e))
    return {"name": name, "passed": report.passed, "report": report.canonical()}


def run_sweep(
    names: Optional[Sequence[str]] = None,
    jobs: int = 1,
    print_debug_comments: Optional[bool] = False,
    allow_files: bool = True,
) -> list[dict]:
    """
    Sweep `names` (DEFAULT_CORPUS when None) in corpus order.

    Args:
        names (Sequence[str]): Catalog names or paths to group JSON files.
        jobs (int): Worker processes; results keep corpus order either way.
        print_debug_comments (bool): Print progress banners to stderr.
        allow_files (bool): Read names that look like paths as group files.
    Returns:
        list[dict]: One `{"name", "passed", "report"}` record per entry.
    """
    corpus = list(DEFAULT_CORPUS if names is None else names)
    run_entry = partial(sweep_entry, allow_files=allow_files)
    if jobs > 1 and len(corpus) > 1:
        debug(f"SWEEPING {len(corpus)} ENTRIES WITH {jobs} WORKERS", print_debug_comments)
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            return list(pool.map(run_entry, corpus))
    results = []
    for name in corpus:
        debug(f"SWEEPING {name}", print_debug_comments)
        results.append(run_entry(name))
    return results
