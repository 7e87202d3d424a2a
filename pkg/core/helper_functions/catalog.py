"""
Deterministic constructors for the groups the verifiers run on, and the
sharply 2-transitive predicates (characteristic, geometry conditions, splitting).

Catalog names: cyclic(n), cyclic_ext(n), elemab_ext(p,k), agl1(q), frob(p,d), j9.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from functools import cached_property
from itertools import permutations
from typing import Optional, Sequence

import galois
import numpy as np

from core.errors import (
    BadParamsError,
    EvenOrderError,
    InconsistentCharacteristicError,
    InputError,
    KernelNotSubgroupError,
    LemmaViolationError,
    NotFrobeniusError,
    NotGroupError,
    PreconditionError,
    UnsupportedOrderError,
)
from core.helper_functions.finite_group import (
    IDENTITY,
    FiniteGroup,
    Subgroup,
    as_index_set,
    centralizer,
    conjugate_set,
    involutions,
    is_uniquely_2_divisible,
)
from core.helper_functions.frobenius import FrobeniusPair, frobenius_kernel, frobenius_pair
from core.helper_functions.geometry import complete_geometry, line_through, verify_mhrs
from core.helper_functions.reports import AxiomReport

SUPPORTED_FIELD_ORDERS = tuple(p for p in range(3, 98) if galois.is_prime(p)) + (9, 27)

# The order-9 Dickson near-field on a + b·i (i² = -1, index a + 3b): x∘y = xy when
# y is a square in F_9 and x³y otherwise.
NEARFIELD_9_SQUARES = (1, 2, 3, 6)
NEARFIELD_9 = (
    (0, 0, 0, 0, 0, 0, 0, 0, 0),
    (0, 1, 2, 3, 4, 5, 6, 7, 8),
    (0, 2, 1, 6, 8, 7, 3, 5, 4),
    (0, 3, 6, 2, 7, 4, 1, 8, 5),
    (0, 4, 8, 5, 2, 6, 7, 3, 1),
    (0, 5, 7, 8, 3, 2, 4, 1, 6),
    (0, 6, 3, 1, 5, 8, 2, 4, 7),
    (0, 7, 5, 4, 6, 1, 8, 2, 3),
    (0, 8, 4, 7, 1, 3, 5, 6, 2),
)


# --- ACTIONS ---
@dataclass(frozen=True, eq=False)
class ActionGroup:
    """A group with its faithful permutation action on 0..degree-1."""
    group: FiniteGroup

    def __post_init__(self):
        if self.group.perm_rep is None:
            raise PreconditionError("group has no permutation action")

    @property
    def degree(self) -> int:
        return self.group.perm_rep.degree

    @property
    def images(self) -> np.ndarray:
        return self.group.perm_rep.images

    def stabilizer(self, point: int) -> Subgroup:
        return Subgroup.of(self.group, np.flatnonzero(self.images[:, point] == point))

    def fixed_points(self, x: int) -> tuple[int, ...]:
        return tuple(int(p) for p in np.flatnonzero(self.images[x] == np.arange(self.degree)))


# --- CONSTRUCTORS ---
def cyclic_group(n: int) -> ActionGroup:
    """C_n acting regularly on n points."""
    if n < 1:
        raise BadParamsError("cyclic order must be positive", witness=[n])
    shift = np.roll(np.arange(n), -1)
    return ActionGroup(FiniteGroup.from_permutation_generators(n, [shift] if n > 1 else []))


def abelian_inversion_extension(invariants: Sequence[int]) -> FiniteGroup:
    """
    A ⋊ ⟨ε⟩ with A = C_{n1} × ... × C_{nk} and ε inverting A; (x, e) has index e·|A| + x.

    Raises:
        EvenOrderError: If some n_i is even.
    """
    invariants = [int(n) for n in invariants]
    for n in invariants:
        if n < 1:
            raise BadParamsError("cyclic orders must be positive", witness=[n])
        if n % 2 == 0:
            raise EvenOrderError(f"inversion extension needs odd cyclic orders, got {n}", witness=[n])
    shape = tuple(invariants or [1])
    moduli = np.asarray(shape, dtype=np.int64)
    size = int(np.prod(moduli))
    coords = np.stack(np.unravel_index(np.arange(size), shape), axis=1)
    add = np.ravel_multi_index(
        tuple(((coords[:, None, :] + coords[None, :, :]) % moduli).transpose(2, 0, 1)),
        shape,
    )
    neg = np.ravel_multi_index(tuple(((-coords) % moduli).T), shape)

    table = np.empty((2 * size, 2 * size), dtype=np.int64)
    for e in (0, 1):
        acted = np.arange(size) if e == 0 else neg             # ε^e(y)
        for f in (0, 1):
            block = add[:, acted] + ((e + f) % 2) * size
            table[e * size:(e + 1) * size, f * size:(f + 1) * size] = block
    return FiniteGroup.from_cayley_table(table)


def agl1(q: int) -> ActionGroup:
    """
    AGL₁(F_q) = {x ↦ ax + b : a != 0} on the q field elements (galois integer
    representation), generated by translations by a basis and by multiplication
    with a primitive element.

    Raises:
        UnsupportedOrderError: If q is not an odd prime ≤ 97, 9 or 27.
    """
    if q not in SUPPORTED_FIELD_ORDERS:
        raise UnsupportedOrderError(f"no built-in field of order {q}", witness=[q])
    field = galois.GF(q)
    elements = field.elements
    alpha = field.primitive_element
    degree = field.degree
    gens = [elements + alpha ** k for k in range(degree)] + [elements * alpha]
    perms = [np.asarray(gen.view(np.ndarray), dtype=np.int64) for gen in gens]
    return ActionGroup(FiniteGroup.from_permutation_generators(q, perms))


def frobenius_semidirect(p: int, d: int) -> FrobeniusPair:
    """
    F_p ⋊ C_d on p points, C_d generated by x ↦ ux with u = g^((p-1)/d) for the
    smallest primitive root g. The complement is the stabilizer of 0.

    Raises:
        BadParamsError: If p is not an odd prime or d is not an odd divisor of p-1 above 1.
    """
    if p < 3 or not galois.is_prime(p):
        raise BadParamsError(f"p must be an odd prime, got {p}", witness=[p])
    if d <= 1 or d % 2 == 0 or (p - 1) % d:
        raise BadParamsError(f"d must be an odd divisor of {p - 1} above 1, got {d}", witness=[p, d])
    unit = pow(int(galois.primitive_root(p)), (p - 1) // d, p)
    points = np.arange(p)
    group = FiniteGroup.from_permutation_generators(p, [(points + 1) % p, (points * unit) % p])
    return frobenius_pair(group, ActionGroup(group).stabilizer(0))


def _nearfield_addition(x: np.ndarray, y: np.ndarray) -> np.ndarray:
    return (x % 3 + y % 3) % 3 + 3 * ((x // 3 + y // 3) % 3)


def _validate_nearfield(table: np.ndarray) -> None:
    """Nonzero elements form a group under ∘ and ∘ distributes over + from the right."""
    nonzero = table[1:, 1:] - 1
    try:
        FiniteGroup.from_cayley_table(nonzero)
    except NotGroupError as e:
        raise LemmaViolationError(f"near-field multiplication is not a group: {e}") from e
    ar = np.arange(9)
    x, y = ar[:, None, None], ar[None, :, None]
    z = ar[None, None, :]
    left = table[_nearfield_addition(x, y), z]
    right = _nearfield_addition(table[x, z], table[y, z])
    if not np.array_equal(left, right):
        raise LemmaViolationError("near-field multiplication is not right distributive")


def nearfield_j9_group() -> ActionGroup:
    """
    The sharply 2-transitive group {x ↦ x∘a + b} of the order-9 near-field, order 72.

    Generated by the translations by 1 and i and the right multiplications by i
    and 1+i, which generate the quaternion group of the near-field.
    """
    table = np.asarray(NEARFIELD_9, dtype=np.int64)
    _validate_nearfield(table)
    points = np.arange(9)
    gens = [
        _nearfield_addition(points, 1),
        _nearfield_addition(points, 3),
        table[points, 3],
        table[points, 4],
    ]
    return ActionGroup(FiniteGroup.from_permutation_generators(9, gens))


# --- SHARPLY 2-TRANSITIVE GROUPS ---
def is_sharply_2_transitive(a: ActionGroup) -> bool:
    d = a.degree
    if d < 2 or a.group.order != d * (d - 1):
        return False
    pairs = a.images[:, 0] * d + a.images[:, 1]
    return np.unique(pairs).size == d * (d - 1)


def _translations(g: FiniteGroup) -> tuple[int, ...]:
    """J^{·2} \\ {1}."""
    found = np.asarray(involutions(g), dtype=np.int64)
    if found.size == 0:
        return ()
    return tuple(x for x in as_index_set(g.mul[np.ix_(found, found)].ravel()) if x != IDENTITY)


def permutation_characteristic(a: ActionGroup) -> int:
    """
    2 when involutions are fixed-point-free, otherwise the common order p of the
    nontrivial translations. Never 0 on a finite group.

    Raises:
        PreconditionError: If the action is not sharply 2-transitive.
        InconsistentCharacteristicError: If translations have different orders.
    """
    if not is_sharply_2_transitive(a):
        raise PreconditionError("characteristic needs a sharply 2-transitive action")
    found = involutions(a.group)
    if all(not a.fixed_points(i) for i in found):
        return 2
    orders = {int(a.group.element_orders[t]): t for t in _translations(a.group)}
    if len(orders) != 1:
        raise InconsistentCharacteristicError(
            f"translations have orders {sorted(orders)}",
            witness=sorted(orders.values())[:2],
        )
    return next(iter(orders))


def _is_subgroup(g: FiniteGroup, members: Sequence[int]) -> bool:
    arr = np.asarray(members, dtype=np.int64)
    mask = np.zeros(g.order, dtype=bool)
    mask[arr] = True
    return bool(mask[IDENTITY] and mask[g.mul[np.ix_(arr, arr)]].all() and mask[g.inv[arr]].all())


def split_kernel(a: ActionGroup) -> Optional[Subgroup]:
    """The normal complement of the point stabilizer, or None when the group does not split."""
    try:
        return frobenius_kernel(frobenius_pair(a.group, a.stabilizer(0)))
    except (KernelNotSubgroupError, NotFrobeniusError):
        return None


def verify_geometry_conditions(a: ActionGroup) -> AxiomReport:
    """
    The four equivalent commuting conditions on J^{·2}, then (when they hold) the
    reflection space on J with its line formulas, and the splitting criterion:
    G splits iff J^{·2} is a subgroup.

    Raises:
        PreconditionError: If the action is not sharply 2-transitive or has characteristic 2.
    """
    if not is_sharply_2_transitive(a):
        raise PreconditionError("geometry conditions need a sharply 2-transitive action")
    char = permutation_characteristic(a)
    if char == 2:
        raise PreconditionError("geometry conditions need characteristic other than 2", witness=[char])
    g = a.group
    j_arr = np.asarray(involutions(g), dtype=np.int64)
    translations = _translations(g)
    report = AxiomReport()

    # a) commuting is transitive on J^{·2} \ {1}
    t = np.asarray(translations, dtype=np.int64)
    commute = (g.mul[np.ix_(t, t)] == g.mul[np.ix_(t, t)].T).astype(np.int64)
    broken = ((commute @ commute) > 0) & (commute == 0)
    hits = np.argwhere(broken)
    cond_a = report.add(
        "condition_a_commuting_transitive", not hits.size,
        None if not hits.size else [int(t[v]) for v in hits[0]],
        detail=f"{t.size} translations",
    )

    cosets = {int(i): set(g.mul[i, j_arr].tolist()) for i in j_arr}
    witness_b = witness_c = None
    for i, k in permutations(cosets, 2):
        meet = as_index_set(cosets[i] & cosets[k])
        if witness_b is None and not is_uniquely_2_divisible(g, meet):
            witness_b = [i, k]
        if witness_c is None:
            cen = centralizer(g, [int(g.mul[i, k])])
            inverted = all(g.conjugate(x, k) == g.inv[x] for x in meet)
            if cen.members != meet or not cen.is_abelian or not inverted:
                witness_c = [i, k]
        if witness_b is not None and witness_c is not None:
            break
    cond_b = report.add("condition_b_meets_uniquely_2_divisible", witness_b is None, witness_b,
                        detail="iJ ∩ kJ uniquely 2-divisible")
    cond_c = report.add("condition_c_centralizers_abelian_inverted", witness_c is None, witness_c,
                        detail="Cen(ik) = iJ ∩ kJ abelian and inverted by k")

    blocks = {frozenset(centralizer(g, [int(s)]).members) - {IDENTITY} for s in t}
    covered = set().union(*blocks) if blocks else set()
    cond_d = report.add(
        "condition_d_centralizers_partition",
        covered == set(translations) and sum(len(b) for b in blocks) == len(covered),
        detail=f"{len(blocks)} blocks",
    )
    agree = len({cond_a, cond_b, cond_c, cond_d}) == 1
    report.add("conditions_agree", agree, detail="a)-d) agree" if agree else "a)-d) disagree")

    if cond_a and cond_b and cond_c and cond_d:
        geo = complete_geometry(g)
        report.merge(verify_mhrs(geo), prefix="mhrs_")

        witness = None
        for i, j in permutations(geo.points, 2):
            line = line_through(geo, i, j)
            sigma = int(g.mul[i, j])
            via_centralizer = as_index_set(g.mul[i, centralizer(g, [sigma]).array])
            via_reflection = as_index_set(k for k in geo.points if g.conjugate(sigma, k) == g.mul[j, i])
            if not (line == via_centralizer == via_reflection):
                witness = [i, j]
                break
        report.add("line_formula", witness is None, witness, detail="ℓ_ij = i·Cen(ij) = {k : (ij)^k = ji}")

        witness = None
        for line in geo.sorted_lines:
            images: dict[tuple[int, ...], list[int]] = {}
            for k in geo.points:
                images.setdefault(conjugate_set(g, line, k), []).append(k)
            for movers in images.values():
                if len(movers) >= 2 and not set(line).issuperset(movers):
                    witness = [*movers[:2], *line]
                    break
            if witness:
                break
        report.add("line_reflections_on_line", witness is None, witness,
                   detail="λ^i = λ^j with i != j forces i, j ∈ λ")

    splits = split_kernel(a) is not None
    subgroup = _is_subgroup(g, (IDENTITY, *translations))
    report.add("neumann_splits", splits, detail="normal complement of the stabilizer")
    report.add("neumann_translations_subgroup", subgroup, detail="J^{·2} is a subgroup")
    report.add("neumann_biconditional", splits == subgroup, detail=f"split: {splits}, subgroup: {subgroup}")
    if subgroup:
        report.add(
            "neumann_translations_abelian",
            Subgroup.of(g, (IDENTITY, *translations)).is_abelian,
            detail="J^{·2} is abelian",
        )

    report.stats.update({"order": g.order, "degree": a.degree, "characteristic": char, "J": int(j_arr.size)})
    return report


# --- NAMES ---
_CATALOG_NAME = re.compile(r"^\s*([a-z][a-z0-9_]*)\s*(?:\(\s*([0-9,\s]*)\))?\s*$")
_ARITY = {"cyclic": 1, "cyclic_ext": 1, "elemab_ext": 2, "agl1": 1, "frob": 2, "j9": 0}

DEFAULT_CORPUS = (
    "cyclic_ext(3)",
    "elemab_ext(3,2)",
    "agl1(5)",
    "agl1(7)",
    "agl1(9)",
    "j9",
    "frob(7,3)",
    "frob(13,3)",
)


def parse_catalog_name(name: str) -> tuple[str, tuple[int, ...]]:
    """'frob(7, 3)' -> ('frob', (7, 3)). Raises InputError for unknown families or arities."""
    match = _CATALOG_NAME.match(name)
    if not match:
        raise InputError(f"cannot parse catalog name {name!r}", source=name)
    family, raw = match.group(1), match.group(2)
    if family not in _ARITY:
        raise InputError(f"unknown catalog family {family!r}", source=name)
    params = tuple(int(p) for p in raw.split(",") if p.strip()) if raw else ()
    if len(params) != _ARITY[family]:
        raise InputError(f"{family} takes {_ARITY[family]} parameter(s), got {len(params)}", source=name)
    return family, params


@dataclass(frozen=True, eq=False)
class CatalogEntry:
    """A named group with its action and Frobenius complement where it has them."""
    name: str
    group: FiniteGroup
    action: Optional[ActionGroup] = None
    pair: Optional[FrobeniusPair] = None

    @cached_property
    def is_sharply_2_transitive(self) -> bool:
        return self.action is not None and is_sharply_2_transitive(self.action)


def _inversion_pair(g: FiniteGroup, size: int) -> Optional[FrobeniusPair]:
    """⟨ε⟩ in A ⋊ ⟨ε⟩, where ε has index |A|."""
    if size == 1:
        return None
    return frobenius_pair(g, (IDENTITY, size))


def build_catalog_entry(name: str) -> CatalogEntry:
    family, params = parse_catalog_name(name)
    canonical = f"{family}({','.join(str(p) for p in params)})" if params else family
    if family == "cyclic":
        action = cyclic_group(params[0])
        return CatalogEntry(name=canonical, group=action.group, action=action)
    if family == "cyclic_ext":
        g = abelian_inversion_extension(params)
        return CatalogEntry(name=canonical, group=g, pair=_inversion_pair(g, params[0]))
    if family == "elemab_ext":
        p, k = params
        if not galois.is_prime(p):
            raise BadParamsError(f"p must be prime, got {p}", witness=[p])
        if k < 1:
            raise BadParamsError("rank must be positive", witness=[k])
        g = abelian_inversion_extension([p] * k)
        return CatalogEntry(name=canonical, group=g, pair=_inversion_pair(g, p ** k))
    if family == "agl1":
        action = agl1(params[0])
        return CatalogEntry(
            name=canonical, group=action.group, action=action,
            pair=frobenius_pair(action.group, action.stabilizer(0)),
        )
    if family == "frob":
        pair = frobenius_semidirect(*params)
        return CatalogEntry(name=canonical, group=pair.group, action=ActionGroup(pair.group), pair=pair)
    action = nearfield_j9_group()
    return CatalogEntry(
        name=canonical, group=action.group, action=action,
        pair=frobenius_pair(action.group, action.stabilizer(0)),
    )
