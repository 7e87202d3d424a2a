"""
Function to build the reflection geometry of a group and run the axiom checks and
the lemma battery on it.
"""

import warnings
from typing import Optional

from client.group_loader import GeometryInput
from core.helper_functions.catalog import (
    CatalogEntry,
    permutation_characteristic,
    verify_geometry_conditions,
)
from core.helper_functions.geometry import (
    Geometry,
    complete_geometry,
    verify_line_lemmas,
    verify_mhrs,
    verify_partial_mhrs,
)
from core.helper_functions.reports import AxiomReport
from core.settings import debug


def verify_space(
    entry: CatalogEntry,
    involution: Optional[int] = None,
    geometry: Optional[GeometryInput] = None,
    print_debug_comments: Optional[bool] = False,
) -> AxiomReport:
    """
    Verify the reflection space on one involution class of `entry.group`.

    Args:
        entry (CatalogEntry): The group (and its action, when it has one).
        involution (int): Selects the involution class; defaults to the class of the
            smallest involution index.
        geometry (GeometryInput): A user line family. It is checked as a partial
            space instead of the complete line set.
        print_debug_comments (bool): Print progress banners to stderr.
    Returns:
        AxiomReport: Axiom checks, the lemma battery (prefixed `lemma_`) and, for
            sharply 2-transitive actions of odd characteristic, the geometry
            conditions (prefixed `sharp2_`).
    """
    g = entry.group
    if geometry is not None:
        debug(f"CHECKING {len(geometry.lines)} USER LINES ON {entry.name}", print_debug_comments)
        geo = Geometry(parent=g, points=tuple(geometry.Q), lines=frozenset(tuple(line) for line in geometry.lines))
        report = verify_partial_mhrs(geo)
        if not report.check("lines_invariant").passed:
            warnings.warn(f"line family of {entry.name} is not conjugation invariant", UserWarning)
    else:
        geo = complete_geometry(g, involution)
        debug(f"COMPLETE GEOMETRY: |Q| = {len(geo.points)}, {len(geo.lines)} LINES", print_debug_comments)
        report = verify_mhrs(geo)

    debug("RUNNING LINE LEMMAS", print_debug_comments)
    report.merge(verify_line_lemmas(geo), prefix="lemma_")

    if entry.is_sharply_2_transitive and permutation_characteristic(entry.action) != 2:
        debug("RUNNING SHARPLY 2-TRANSITIVE CONDITIONS", print_debug_comments)
        report.merge(verify_geometry_conditions(entry.action), prefix="sharp2_")
    return report
