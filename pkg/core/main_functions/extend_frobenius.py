"""
Function to extend a uniquely 2-divisible Frobenius group with abelian complement
(or a uniquely 2-divisible abelian group) to the quasidirect product 𝒢 and verify
the reflection geometry on its involutions.
"""

from typing import Optional, Tuple

from core.errors import PreconditionError
from core.helper_functions.catalog import CatalogEntry
from core.helper_functions.frobenius import (
    FrobeniusExtension,
    extend_degenerate,
    extension_from_abelian,
    verify_frobenius_facts,
    verify_frobenius_mhrs,
)
from core.helper_functions.quasidirect import natural_action, verify_quasidirect_involutions
from core.helper_functions.reports import AxiomReport
from core.settings import debug


def extend_frobenius(
    entry: CatalogEntry,
    print_debug_comments: Optional[bool] = False,
) -> Tuple[AxiomReport, FrobeniusExtension]:
    """
    Build and verify the extension.

    Args:
        entry (CatalogEntry): A group with a Frobenius complement, or an abelian group.
        print_debug_comments (bool): Print progress banners to stderr.
    Returns:
        Tuple[AxiomReport, FrobeniusExtension]: The merged report (geometry checks,
            `involutions_` checks, `action_` checks and `frobenius_` facts) and the extension.
    Raises:
        PreconditionError: If the entry has neither a Frobenius complement nor an abelian group.
    """
    g = entry.group
    if entry.pair is not None:
        debug(f"EXTENDING {entry.name} WITH |H| = {entry.pair.complement.order}", print_debug_comments)
        ext = extend_degenerate(entry.pair)
    elif g.is_abelian:
        debug(f"EXTENDING ABELIAN {entry.name} BY INVERSION", print_debug_comments)
        ext = extension_from_abelian(g)
    else:
        raise PreconditionError(f"{entry.name} has no Frobenius complement and is not abelian")
    debug(
        f"EXTENSION OF ORDER {ext.quasidirect.group.order}, {len(ext.geometry.lines)} LINES",
        print_debug_comments,
    )

    report = verify_frobenius_mhrs(ext)
    report.merge(verify_quasidirect_involutions(ext.quasidirect), prefix="involutions_")
    report.merge(natural_action(ext.quasidirect).to_report())
    if entry.pair is not None:
        report.merge(verify_frobenius_facts(entry.pair), prefix="frobenius_")
    return report, ext
