"""
Frobenius pairs (H < G proper, nontrivial, malnormal), their kernels and types,
and the extension of a uniquely 2-divisible Frobenius group with abelian
complement to a partial reflection space on J = G × {ε}.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from itertools import combinations
from typing import Iterable, Literal, Optional

import numpy as np

from core.errors import (
    ComplementNotAbelianError,
    KernelNotSubgroupError,
    LemmaViolationError,
    NotFrobeniusError,
    NotSubgroupError,
)
from core.helper_functions.finite_group import (
    IDENTITY,
    FiniteGroup,
    Subgroup,
    as_index_set,
    centralizer,
    conjugate_set,
    involutions,
    normalizer_of_set,
)
from core.helper_functions.geometry import (
    Geometry,
    Line,
    line_through,
    point_products,
    verify_partial_mhrs,
)
from core.helper_functions.kloop import generated_subgroup_is_solvable, kloop_from_twisted
from core.helper_functions.quasidirect import (
    QuasidirectGroup,
    extend_abelian,
    group_with_inversion,
    quasidirect_product,
)
from core.helper_functions.reports import AxiomReport

FrobeniusType = Literal["odd", "degenerate", "even"]


# --- PREDICATES ---
def _complement(g: FiniteGroup, h: Subgroup | Iterable[int]) -> Subgroup:
    return h if isinstance(h, Subgroup) else Subgroup.of(g, h)


def _conjugates(g: FiniteGroup, h: Subgroup) -> np.ndarray:
    """Row x holds x^-1 H x."""
    return g.mul[g.mul[g.inv[:, None], h.array[None, :]], g.elements[:, None]]


def _malnormal_witness(g: FiniteGroup, h: Subgroup) -> Optional[int]:
    """Some x outside H with H ∩ H^x != {1}, or None."""
    nontrivial = h.array != IDENTITY
    meets = (h.mask[_conjugates(g, h)] & nontrivial[None, :]).any(axis=1)
    bad = np.flatnonzero(meets & ~h.mask)
    return int(bad[0]) if bad.size else None


def is_frobenius(g: FiniteGroup, h: Subgroup | Iterable[int]) -> bool:
    h = _complement(g, h)
    if h.order == 1 or h.order == g.order:
        return False
    return _malnormal_witness(g, h) is None


@dataclass(frozen=True, eq=False)
class FrobeniusPair:
    group: FiniteGroup
    complement: Subgroup

    @cached_property
    def conjugate_union(self) -> np.ndarray:
        """Mask of ⋃_g H^g."""
        mask = np.zeros(self.group.order, dtype=bool)
        mask[_conjugates(self.group, self.complement).ravel()] = True
        return mask

    @cached_property
    def kernel(self) -> Subgroup:
        return frobenius_kernel(self)

    @cached_property
    def type(self) -> FrobeniusType:
        return classify_type(self)


def frobenius_pair(g: FiniteGroup, h: Subgroup | Iterable[int]) -> FrobeniusPair:
    """
    Validate H < G as a Frobenius complement.

    Raises:
        NotFrobeniusError: If H is trivial, equal to G, or not malnormal.
    """
    h = _complement(g, h)
    if h.order == 1:
        raise NotFrobeniusError("complement is trivial")
    if h.order == g.order:
        raise NotFrobeniusError("complement is not proper")
    witness = _malnormal_witness(g, h)
    if witness is not None:
        raise NotFrobeniusError("complement is not malnormal", witness=[witness])
    return FrobeniusPair(group=g, complement=h)


def is_full(pair: FrobeniusPair) -> bool:
    """G = ⋃_g H^g."""
    return bool(pair.conjugate_union.all())


def frobenius_kernel(pair: FrobeniusPair) -> Subgroup:
    """
    K = (G \\ ⋃ H^g) ∪ {1}, verified to be a normal subgroup with G = K ⋊ H.

    Raises:
        KernelNotSubgroupError: If K is not a normal complement of H.
    """
    g, h = pair.group, pair.complement
    members = np.flatnonzero(~pair.conjugate_union).tolist() + [IDENTITY]
    try:
        kernel = Subgroup.of(g, members)
    except NotSubgroupError as e:
        raise KernelNotSubgroupError(f"kernel candidate is not a subgroup: {e.args[0]}", witness=e.witness) from e
    if not kernel.is_normal:
        raise KernelNotSubgroupError("kernel candidate is not normal", witness=list(kernel.members))
    if kernel.order * h.order != g.order or set(kernel.members) & set(h.members) != {IDENTITY}:
        raise KernelNotSubgroupError(
            f"|K|·|H| = {kernel.order}·{h.order} does not split a group of order {g.order}",
        )
    return kernel


def classify_type(pair: FrobeniusPair) -> FrobeniusType:
    """
    odd: H contains an involution; degenerate: G has none; even: some involution
    lies outside ⋃ H^g. Exactly one case holds for a finite pair.
    """
    found = involutions(pair.group)
    cases = {
        "odd": any(x in pair.complement for x in found),
        "degenerate": not found,
        "even": any(not pair.conjugate_union[x] for x in found),
    }
    holding = [name for name, value in cases.items() if value]
    if len(holding) != 1:
        raise LemmaViolationError(f"type cases are not exclusive: {holding}")
    return holding[0]


def verify_frobenius_facts(pair: FrobeniusPair) -> AxiomReport:
    """Kernel splitting, the type trichotomy, fullness and (odd order) solvability of ⟨G⟩."""
    report = AxiomReport()
    try:
        kernel = frobenius_kernel(pair)
        report.add("kernel_splits", True, detail=f"|K| = {kernel.order}, |H| = {pair.complement.order}")
    except KernelNotSubgroupError as e:
        report.add("kernel_splits", False, e.witness, detail=e.args[0])
    try:
        tag = classify_type(pair)
        report.add("type_exclusive", True, detail=tag)
        report.stats["type"] = tag
    except LemmaViolationError as e:
        report.add("type_exclusive", False, detail=e.args[0])
    full = is_full(pair)
    report.add("not_full", not full, detail=f"conjugates cover {int(pair.conjugate_union.sum())} elements")
    report.stats.update({"order": pair.group.order, "complement": pair.complement.order})
    return report


# --- EXTENSION ---
@dataclass(frozen=True, eq=False)
class FrobeniusExtension:
    """
    𝒢 = L ⋊_Q (G × ⟨ε⟩) with the geometry (J, Λ) and the base line λ₀ = H × {ε}.

    `pair` and `base_line` are None for the abelian route (A ⋊ ⟨ε⟩, Λ = {J}).
    """
    quasidirect: QuasidirectGroup
    geometry: Geometry
    pair: Optional[FrobeniusPair] = None
    base_line: Optional[Line] = None
    normalizer_order: Optional[int] = None
    group_orbit_size: Optional[int] = None

    def to_stats(self) -> dict:
        stats = {
            "extension_order": self.quasidirect.group.order,
            "J": len(self.geometry.points),
            "lines": len(self.geometry.lines),
            "line_sizes": sorted({len(line) for line in self.geometry.lines}),
        }
        if self.base_line is not None:
            stats["normalizer_of_base_line"] = self.normalizer_order
            stats["group_orbit_size"] = self.group_orbit_size
        return stats


def _conjugation_orbit(g: FiniteGroup, line: Line, movers: Iterable[int]) -> frozenset[Line]:
    movers = list(movers)
    orbit = {line}
    frontier = [line]
    while frontier:
        fresh = []
        for current in frontier:
            for x in movers:
                image = conjugate_set(g, current, x)
                if image not in orbit:
                    orbit.add(image)
                    fresh.append(image)
        frontier = fresh
    return frozenset(orbit)


def extend_degenerate(pair: FrobeniusPair) -> FrobeniusExtension:
    """
    Build L = (G, ⊗), 𝒜 = G × ⟨ε⟩, 𝒢 = L ⋊_Q 𝒜, J = L × {ε}, λ₀ = H × {ε} and
    Λ = the 𝒢-conjugation orbit of λ₀.

    Raises:
        ComplementNotAbelianError: If H is not abelian.
        NotUniquely2DivisibleError: If G has even order.
        NontrivialCenterError: If Z(G) != 1.
    """
    g, h = pair.group, pair.complement
    if not h.is_abelian:
        raise ComplementNotAbelianError("the extension needs an abelian complement", witness=list(h.members))
    loop = kloop_from_twisted(g, range(g.order))
    auts = group_with_inversion(g, loop)
    q = quasidirect_product(loop, auts)
    big = q.group
    eps = q.epsilon_index

    base = as_index_set(q.index(int(loop.position[x]), eps) for x in h.members)
    lines = _conjugation_orbit(big, base, big.generators)
    group_movers = [q.index(int(loop.position[x]), IDENTITY) for x in g.generators]
    group_orbit = _conjugation_orbit(big, base, group_movers)
    geometry = Geometry(parent=big, points=q.involution_set, lines=lines)
    return FrobeniusExtension(
        quasidirect=q,
        geometry=geometry,
        pair=pair,
        base_line=base,
        normalizer_order=normalizer_of_set(big, base).order,
        group_orbit_size=len(group_orbit),
    )


def extension_from_abelian(g: FiniteGroup) -> FrobeniusExtension:
    q, geometry = extend_abelian(g)
    return FrobeniusExtension(quasidirect=q, geometry=geometry)


# --- VERIFICATION ---
def _scan_line(geo: Geometry, i: int, j: int) -> Line:
    """ℓ_ij = {k ∈ J : ij ∈ kJ} by scanning the cosets kJ."""
    big, q = geo.parent, geo.q_array
    cosets = big.mul[np.ix_(q, q)]
    return tuple(int(k) for k in q[(cosets == big.mul[i, j]).any(axis=1)])


def verify_frobenius_mhrs(ext: FrobeniusExtension) -> AxiomReport:
    """
    The partial reflection space axioms on (J, Λ) plus the supporting facts of the
    extension: lines recomputed by scan, N_𝒢(λ₀) ∩ J^{·2} = λ₀^{·2}, the normalizer
    of λ₀ lies in H × N(H), lines through ι are the H^g × {ε}, 𝒢 acts faithfully
    on J, and Cen_𝒢(i, j, k) = 1 for non-collinear triples spanning two lines.
    Frobenius-specific checks are skipped on the abelian route.
    """
    geo, q = ext.geometry, ext.quasidirect
    big = q.group
    report = verify_partial_mhrs(geo) if geo.lines else AxiomReport()

    witness = None
    for line in geo.sorted_lines:
        for i, j in combinations(line, 2):
            if _scan_line(geo, i, j) != line or line_through(geo, i, j) != line:
                witness = [i, j]
                break
        if witness:
            break
    report.add("correct_lines", witness is None, witness, detail="both line formulas reproduce Λ")

    center_of_j = centralizer(big, geo.points)
    report.add(
        "faithful_action_on_j", center_of_j.order == 1,
        None if center_of_j.order == 1 else list(center_of_j.members[1:2]),
        detail=f"kernel of the action has order {center_of_j.order}",
    )

    if ext.pair is None or ext.base_line is None:
        report.stats.update(ext.to_stats())
        return report

    pair, base = ext.pair, ext.base_line
    g, h = pair.group, pair.complement
    loop, auts = q.loop, q.automorphisms
    eps = q.epsilon_index

    normalizer = normalizer_of_set(big, base)
    products = set(point_products(geo))
    square = as_index_set(big.mul[np.ix_(np.asarray(base), np.asarray(base))].ravel())
    meet = as_index_set(x for x in normalizer.members if x in products)
    report.add(
        "quasidirect_normalizer", meet == square,
        None if meet == square else sorted(set(meet) ^ set(square))[:1],
        detail=f"|N(λ₀) ∩ J^2| = {len(meet)}, |λ₀^2| = {len(square)}",
    )

    h_positions = set(int(loop.position[x]) for x in h.members)
    witness = None
    for x in normalizer.members:
        a, alpha = q.pair(x)
        moved = set(int(v) for v in auts.table[alpha][sorted(h_positions)])
        if a not in h_positions or moved != h_positions:
            witness = [x]
            break
    report.add("frob_normalizer", witness is None, witness, detail=f"|N(λ₀)| = {normalizer.order}")

    iota = q.iota
    through = set(geo.lines_through(iota))
    expected = {
        as_index_set(q.index(int(loop.position[y]), eps) for y in conjugate_set(g, h.members, x))
        for x in range(g.order)
    }
    report.add(
        "lines_through_iota", through == expected,
        detail=f"{len(through)} lines through ι, {len(expected)} conjugates of H",
    )

    checked, witness = _faithful_triples(geo)
    report.add(
        "faithful_triples", witness is None, witness,
        detail=f"{checked} non-collinear triples with Cen(i,j,k) = 1",
    )

    if is_full(pair):
        complete = all(line_through(geo, i, j) in geo.lines for i, j in combinations(geo.points, 2))
        report.add("full_implies_complete", complete, detail="pair is full")
    else:
        report.add("full_implies_complete", True, detail="pair is not full")

    report.add(
        "glauberman_solvable", generated_subgroup_is_solvable(g, range(g.order)),
        detail="⟨L⟩ is solvable",
    )
    report.stats.update(ext.to_stats())
    return report


def _faithful_triples(geo: Geometry) -> tuple[int, Optional[list[int]]]:
    big = geo.parent
    commutes = {int(p): big.mul[:, p] == big.mul[p, :] for p in geo.points}
    checked = 0
    for i, j, k in combinations(geo.points, 3):
        line_ij = line_through(geo, i, j)
        if k in line_ij:
            continue
        existing = sum(
            line in geo.lines
            for line in (line_ij, line_through(geo, i, k), line_through(geo, j, k))
        )
        if existing < 2:
            continue
        checked += 1
        common = commutes[i] & commutes[j] & commutes[k]
        if common.sum() != 1:
            return checked, [i, j, k]
    return checked, None
