"""
Function to describe a catalog entry: its size, involutions, action and Frobenius data.
"""

from typing import Optional

from core.helper_functions.catalog import (
    CatalogEntry,
    is_sharply_2_transitive,
    permutation_characteristic,
)
from core.helper_functions.finite_group import (
    Subgroup,
    center,
    involutions,
    is_solvable,
)
from core.helper_functions.frobenius import verify_frobenius_facts
from core.helper_functions.reports import AxiomReport
from core.settings import debug


def describe_catalog(entry: CatalogEntry, print_debug_comments: Optional[bool] = False) -> AxiomReport:
    g = entry.group
    debug(f"DESCRIBING {entry.name} OF ORDER {g.order}", print_debug_comments)
    report = AxiomReport()
    report.stats.update({
        "order": g.order,
        "involutions": len(involutions(g)),
        "abelian": g.is_abelian,
        "center": center(g).order,
        "solvable": is_solvable(Subgroup.whole(g)),
    })
    if entry.action is not None:
        sharp = is_sharply_2_transitive(entry.action)
        report.stats.update({"degree": entry.action.degree, "sharply_2_transitive": sharp})
        if sharp:
            report.stats["characteristic"] = permutation_characteristic(entry.action)
    if entry.pair is not None:
        report.merge(verify_frobenius_facts(entry.pair), prefix="frobenius_")
    return report
