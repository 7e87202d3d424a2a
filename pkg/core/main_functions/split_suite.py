"""
Function to evaluate the eight splitting conditions on the complete geometry of a group.
"""

from typing import Optional

from core.helper_functions.catalog import CatalogEntry
from core.helper_functions.geometry import complete_geometry, splitting_suite
from core.helper_functions.reports import AxiomReport
from core.settings import debug


def split_suite(
    entry: CatalogEntry,
    involution: Optional[int] = None,
    print_debug_comments: Optional[bool] = False,
) -> AxiomReport:
    geo = complete_geometry(entry.group, involution)
    debug(f"SPLITTING SUITE ON {entry.name}: |Q| = {len(geo.points)}", print_debug_comments)
    return splitting_suite(geo)
