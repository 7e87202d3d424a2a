"""
Function to build the K-loop of a group (on G itself when G has odd order, on iQ
otherwise) and run the loop axioms and precession identities on it.
"""

from typing import Iterable, Optional, Tuple

from core.helper_functions.catalog import CatalogEntry
from core.helper_functions.finite_group import (
    FiniteGroup,
    as_index_set,
    centralizer,
    is_uniquely_2_divisible,
)
from core.helper_functions.geometry import involution_class
from core.helper_functions.kloop import (
    Automorphism,
    KLoop,
    generated_subgroup_is_solvable,
    kloop_from_twisted,
    precession_group,
    verify_kloop_axioms,
    verify_precession_identities,
)
from core.helper_functions.quasidirect import inversion_automorphism
from core.helper_functions.reports import AxiomReport
from core.settings import debug


def choose_loop_carrier(g: FiniteGroup, involution: Optional[int] = None) -> Tuple[tuple[int, ...], Optional[int]]:
    """L = G when G is uniquely 2-divisible, else L = iQ; returns L and i (None for L = G)."""
    if is_uniquely_2_divisible(g, range(g.order)):
        return tuple(range(g.order)), None
    points = involution_class(g, involution)
    i = points[0]
    return as_index_set(g.mul[i, list(points)]), i


def restricted_conjugations(loop: KLoop, movers: Iterable[int]) -> list[Automorphism]:
    """x ↦ h x h^-1 on the carrier, for movers h that keep the carrier invariant."""
    g, carrier = loop.ambient, loop.carrier_array
    return [
        Automorphism(loop=loop, images=loop.position[g.mul[g.mul[h, carrier], g.inv[h]]], name=f"c{h}")
        for h in movers
    ]


def analyze_kloop(
    entry: CatalogEntry,
    involution: Optional[int] = None,
    print_debug_comments: Optional[bool] = False,
) -> Tuple[AxiomReport, KLoop]:
    """
    Run the K-loop suite.

    Args:
        entry (CatalogEntry): The ambient group.
        involution (int): Selects the class Q when G has even order.
        print_debug_comments (bool): Print progress banners to stderr.
    Returns:
        Tuple[AxiomReport, KLoop]: The report and the loop it was run on.
    """
    g = entry.group
    carrier, i = choose_loop_carrier(g, involution)
    debug(f"K-LOOP ON {'G' if i is None else f'iQ WITH i = {i}'}, |L| = {len(carrier)}", print_debug_comments)
    loop = kloop_from_twisted(g, carrier)

    report = verify_kloop_axioms(loop)
    movers = range(g.order) if i is None else centralizer(g, [i]).members
    auts = [inversion_automorphism(loop), *restricted_conjugations(loop, movers)]
    debug(f"PRECESSION IDENTITIES OVER {len(auts)} AUTOMORPHISMS", print_debug_comments)
    report.merge(verify_precession_identities(loop, auts))

    report.add(
        "glauberman_solvable", generated_subgroup_is_solvable(g, carrier),
        detail="⟨L⟩ is solvable",
    )
    report.stats.update({
        "carrier": "G" if i is None else "iQ",
        "precession_group": len(precession_group(loop)),
    })
    return report, loop
