"""
Automorphism groups of K-loops and the quasidirect product
𝒢 = L ⋊_Q 𝒜 with (a,α)(b,β) = (a ⊗ α(b), δ_{a,α(b)} αβ).

A materialized 𝒢 is an ordinary FiniteGroup whose element (a, α) has index
rank(a)·|𝒜| + index(α); the loop neutral has rank 0 and the identity
automorphism index 0, so (1, id) is the group identity.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Optional, Sequence

import numpy as np

from core import settings
from core.errors import (
    LemmaViolationError,
    NontrivialCenterError,
    PrecessionNotInAError,
    PreconditionError,
    TooLargeError,
)
from core.helper_functions.finite_group import (
    IDENTITY,
    FiniteGroup,
    center,
    centralizer,
    involutions,
)
from core.helper_functions.geometry import Geometry
from core.helper_functions.kloop import (
    Automorphism,
    KLoop,
    all_precession_maps,
    kloop_from_twisted,
)
from core.helper_functions.reports import AxiomReport


# --- AUTOMORPHISMS OF A LOOP ---
def inversion_automorphism(l: KLoop) -> Automorphism:
    """ε: x ↦ x^-1. Raises NotAutomorphismError when the loop lacks the automorphic inverse property."""
    return Automorphism(loop=l, images=l.inverse, name="eps")


def conjugation_automorphisms(g: FiniteGroup, l: KLoop) -> list[Automorphism]:
    """
    c_h(x) = h x h^-1 for every h in g, as automorphisms of (L, ⊗) with L = g.

    Raises:
        PreconditionError: If the loop carrier is not the whole group.
        NontrivialCenterError: If Z(g) != 1 (this includes the trivial group), so
            h ↦ c_h does not embed g into Aut(L).
    """
    if l.ambient is not g or l.order != g.order:
        raise PreconditionError("conjugation automorphisms need the loop on the whole group")
    z = center(g)
    if g.order == 1 or z.order > 1:
        witness = [m for m in z.members if m != IDENTITY]
        raise NontrivialCenterError(
            f"center has order {z.order}; conjugation does not embed the group into Aut(L)",
            witness=witness or None,
        )
    eps = inversion_automorphism(l)
    auts = []
    for h in range(g.order):
        images = g.mul[g.mul[h, g.elements], g.inv[h]]
        alpha = Automorphism(loop=l, images=images, name=f"c{h}")
        if not np.array_equal(alpha.images[eps.images], eps.images[alpha.images]):
            raise LemmaViolationError("conjugation does not commute with inversion", witness=[h])
        auts.append(alpha)
    return auts


@dataclass(frozen=True, eq=False)
class AutomorphismGroup:
    """
    A finite group 𝒜 of loop automorphisms, identity first.

    `compose[i, j]` is the index of members[i]∘members[j] and `table[i]` the images
    of members[i], so 𝒜 acts on positions by a single lookup.
    """
    loop: KLoop
    members: tuple[Automorphism, ...]
    compose: np.ndarray
    inverse: np.ndarray

    @classmethod
    def from_list(cls, loop: KLoop, auts: Iterable[Automorphism]) -> "AutomorphismGroup":
        """
        Use an explicit list; duplicates are dropped, the identity is moved first.

        Raises:
            PreconditionError: If the identity is missing or the list is not closed
                under composition.
        """
        unique: dict[bytes, Automorphism] = {}
        for alpha in auts:
            unique.setdefault(alpha.key(), alpha)
        identity = Automorphism(loop=loop, images=np.arange(loop.order), name="id")
        if identity.key() not in unique:
            raise PreconditionError("automorphism list does not contain the identity")
        del unique[identity.key()]
        members = (identity, *unique.values())
        index = {alpha.key(): k for k, alpha in enumerate(members)}

        m = len(members)
        table = np.stack([alpha.images for alpha in members])
        compose = np.empty((m, m), dtype=np.int64)
        for i in range(m):
            for j in range(m):
                k = index.get(table[i][table[j]].tobytes())
                if k is None:
                    raise PreconditionError("automorphism list is not closed under composition", witness=[i, j])
                compose[i, j] = k
        inverse = np.argmax(compose == 0, axis=1).astype(np.int64)
        return cls(loop=loop, members=members, compose=compose, inverse=inverse)

    @classmethod
    def generate(
        cls,
        loop: KLoop,
        gens: Sequence[Automorphism],
        max_order: Optional[int] = None,
    ) -> "AutomorphismGroup":
        """Close `gens` under composition breadth-first; raises TooLargeError past the bound."""
        limit = max_order if max_order is not None else settings.get_max_order()
        identity = Automorphism(loop=loop, images=np.arange(loop.order), name="id")
        found = [identity]
        seen = {identity.key()}
        k = 0
        while k < len(found):
            for gen in gens:
                candidate = found[k].compose(gen) if k else gen
                if candidate.key() in seen:
                    continue
                if len(found) >= limit:
                    raise TooLargeError(f"automorphism closure exceeds {limit} elements", witness=[limit])
                seen.add(candidate.key())
                found.append(candidate)
            k += 1
        return cls.from_list(loop, found)

    @property
    def order(self) -> int:
        return len(self.members)

    @cached_property
    def table(self) -> np.ndarray:
        return np.stack([alpha.images for alpha in self.members])

    @cached_property
    def _index(self) -> dict[bytes, int]:
        return {alpha.key(): k for k, alpha in enumerate(self.members)}

    def index_of(self, images: np.ndarray) -> int:
        """Index of the automorphism with these images, or -1."""
        return self._index.get(np.asarray(images, dtype=np.int64).tobytes(), -1)

    @cached_property
    def epsilon(self) -> Optional[int]:
        k = self.index_of(self.loop.inverse)
        return k if k >= 0 else None

    @property
    def names(self) -> list[str]:
        return [alpha.name for alpha in self.members]


def group_with_inversion(g: FiniteGroup, l: KLoop) -> AutomorphismGroup:
    """𝒜 = G × ⟨ε⟩ from conjugations and inversion."""
    eps = inversion_automorphism(l)
    conjugations = conjugation_automorphisms(g, l)
    named = []
    for alpha in conjugations:
        name = "id" if alpha.is_identity else alpha.name
        named.append(Automorphism(loop=l, images=alpha.images, name=name))
        twisted = eps.compose(alpha)
        twisted_name = "eps" if alpha.is_identity else f"eps.{alpha.name}"
        named.append(Automorphism(loop=l, images=twisted.images, name=twisted_name))
    group = AutomorphismGroup.from_list(l, named)
    if group.order != 2 * g.order:
        warnings.warn(
            f"expected |G × ⟨ε⟩| = {2 * g.order}, got {group.order}",
            UserWarning,
        )
    return group


# --- QUASIDIRECT PRODUCT ---
@dataclass(frozen=True, eq=False)
class QuasidirectGroup:
    """L ⋊_Q 𝒜 materialized as `group`; `precession_index[a, b]` is the 𝒜-index of δ_{a,b}."""
    loop: KLoop
    automorphisms: AutomorphismGroup
    group: FiniteGroup
    precession_index: np.ndarray
    loop_order: np.ndarray

    @cached_property
    def rank(self) -> np.ndarray:
        rank = np.empty(self.loop.order, dtype=np.int64)
        rank[self.loop_order] = np.arange(self.loop.order)
        return rank

    def index(self, a: int, alpha: int) -> int:
        """Element index of (a, α), with a a carrier position."""
        return int(self.rank[a]) * self.automorphisms.order + int(alpha)

    def pair(self, x: int) -> tuple[int, int]:
        m = self.automorphisms.order
        return int(self.loop_order[x // m]), int(x % m)

    @property
    def epsilon_index(self) -> Optional[int]:
        return self.automorphisms.epsilon

    @property
    def iota(self) -> int:
        """ι = (1, ε)."""
        if self.epsilon_index is None:
            raise PreconditionError("ε is not in the automorphism group")
        return self.index(self.loop.neutral, self.epsilon_index)

    @cached_property
    def involution_set(self) -> tuple[int, ...]:
        """J = L × {ε}."""
        eps = self.epsilon_index
        if eps is None:
            raise PreconditionError("ε is not in the automorphism group")
        return tuple(sorted(self.index(a, eps) for a in range(self.loop.order)))


def _precession_indices(l: KLoop, auts: AutomorphismGroup) -> np.ndarray:
    n = l.order
    distinct, which = np.unique(all_precession_maps(l).reshape(n * n, n), axis=0, return_inverse=True)
    which = np.asarray(which).reshape(n, n)
    lookup = np.array([auts.index_of(row) for row in distinct], dtype=np.int64)
    missing = np.flatnonzero(lookup < 0)
    if missing.size:
        a, b = (int(v) for v in np.argwhere(which == missing[0])[0])
        raise PrecessionNotInAError("δ_{a,b} is not in the automorphism group", witness=[a, b])
    return lookup[which]


def quasidirect_product(l: KLoop, auts: AutomorphismGroup) -> QuasidirectGroup:
    """
    Materialize L ⋊_Q 𝒜 and validate it as a group.

    Raises:
        PrecessionNotInAError: If some δ_{a,b} is missing from 𝒜 (witness: a, b).
        NotGroupError: If the product table fails the group axioms.
        LemmaViolationError: If (a,α)^-1 differs from (α^-1(a^-1), α^-1).
    """
    n, m = l.order, auts.order
    T, A = l.otimes, auts.table
    delta = _precession_indices(l, auts)

    loop_order = np.array([l.neutral] + [x for x in range(n) if x != l.neutral], dtype=np.int64)
    rank = np.empty(n, dtype=np.int64)
    rank[loop_order] = np.arange(n)
    a_of = np.repeat(loop_order, m)
    alpha_of = np.tile(np.arange(m), n)

    size = n * m
    mul = np.empty((size, size), dtype=np.int64)
    for x in range(size):
        a, alpha = a_of[x], alpha_of[x]
        moved = A[alpha, a_of]                          # α(b) for every right factor
        first = T[a, moved]
        second = auts.compose[delta[a, moved], auts.compose[alpha, alpha_of]]
        mul[x] = rank[first] * m + second

    labels = [f"({l.carrier[a]},{auts.members[alpha].name})" for a, alpha in zip(a_of, alpha_of)]
    group = FiniteGroup.from_cayley_table(mul, labels=labels)

    alpha_inv = auts.inverse[alpha_of]
    expected = rank[A[alpha_inv, l.inverse[a_of]]] * m + alpha_inv
    bad = np.flatnonzero(expected != group.inv)
    if bad.size:
        raise LemmaViolationError("inverse formula fails in the quasidirect product", witness=[int(bad[0])])
    return QuasidirectGroup(
        loop=l, automorphisms=auts, group=group, precession_index=delta, loop_order=loop_order,
    )


def verify_quasidirect_involutions(q: QuasidirectGroup) -> AxiomReport:
    """
    J = L × {ε} is the set of involutions, Cen(ι) = 1 × 𝒜, and J acts regularly on
    itself by conjugation. The midpoint of (a,ε) and (c,ε) is (b,ε) with
    b ⊗ a^{-1/2} = c^{1/2}; this solution is compared with the table scan.
    """
    if q.epsilon_index is None:
        raise PreconditionError("ε is not in the automorphism group")
    g, l = q.group, q.loop
    T, n, m, eps = l.otimes, l.order, q.automorphisms.order, q.epsilon_index
    report = AxiomReport()

    j_set = q.involution_set
    found = set(involutions(g))
    diff = sorted(found.symmetric_difference(j_set))
    report.add(
        "involutions_are_l_times_eps", not diff, diff[:1] or None,
        detail=f"|J| = {len(j_set)}, involutions = {len(found)}",
    )

    cen = centralizer(g, [q.iota]).members
    expected = tuple(q.index(l.neutral, alpha) for alpha in range(m))
    diff = sorted(set(cen).symmetric_difference(expected))
    report.add(
        "centralizer_of_iota", not diff, diff[:1] or None,
        detail=f"|Cen(ι)| = {len(cen)}, |𝒜| = {m}",
    )

    j_of = np.array([q.index(a, eps) for a in range(n)], dtype=np.int64)    # position -> (a, ε)
    j_arr = np.asarray(j_set, dtype=np.int64)
    reflections = g.mul[g.mul[j_of[:, None], j_of[None, :]], j_of[:, None]]    # [b, a] -> (b,ε)(a,ε)(b,ε)
    witness = None
    for a in range(n):
        column = np.sort(reflections[:, a])
        if not np.array_equal(column, j_arr):
            witness = [int(j_of[a])]
            break
    report.add("regular_action_on_j", witness is None, witness, detail=f"{n * n} pairs")

    roots, inv = l.sqrt, l.inverse
    witness = None
    for a in range(n):
        column = T[:, inv[roots[a]]]                    # b ↦ b ⊗ a^{-1/2}
        solution = np.argsort(column)[roots]            # c ↦ b
        if not np.array_equal(reflections[solution, a], j_of):
            c = int(np.flatnonzero(reflections[solution, a] != j_of)[0])
            witness = [int(j_of[a]), int(j_of[c])]
            break
    report.add("explicit_midpoint_solution", witness is None, witness, detail="b ⊗ a^{-1/2} = c^{1/2}")

    halves = T[:, inv[roots]]                           # [b, a] -> b ⊗ a^{-1/2}
    formula = j_of[T[halves, halves]]
    bad = np.argwhere(formula != reflections)
    witness = None if not bad.size else [int(j_of[v]) for v in bad[0]]
    report.add("conjugation_formula", witness is None, witness, detail="(b,ε)(a,ε)(b,ε) = ((b ⊗ a^{-1/2})², ε)")

    report.stats.update({"order": g.order, "J": len(j_set), "automorphisms": m})
    return report


# --- NATURAL ACTION ---
@dataclass(frozen=True, eq=False)
class NaturalAction:
    """(a,α)(x) = a ⊗ α(x); row k of `images` is the permutation of element k."""
    quasidirect: QuasidirectGroup
    images: np.ndarray

    @cached_property
    def homomorphism_witness(self) -> Optional[list[int]]:
        g = self.quasidirect.group
        for y in g.generators:
            bad = np.flatnonzero((self.images[g.mul[:, y]] != self.images[:, self.images[y]]).any(axis=1))
            if bad.size:
                return [int(bad[0]), int(y)]
        return None

    @property
    def is_homomorphism(self) -> bool:
        return self.homomorphism_witness is None

    @property
    def is_faithful(self) -> bool:
        return np.unique(self.images, axis=0).shape[0] == self.images.shape[0]

    @property
    def is_transitive(self) -> bool:
        orbit = np.unique(self.images[:, self.quasidirect.loop.neutral])
        return orbit.size == self.quasidirect.loop.order

    def to_report(self) -> AxiomReport:
        report = AxiomReport()
        report.add("action_homomorphism", self.is_homomorphism, self.homomorphism_witness,
                   detail="checked on group generators")
        faithful = self.is_faithful
        report.add(
            "action_faithful", faithful,
            detail="distinct permutations" if faithful else "two elements act alike",
        )
        report.add("action_transitive", self.is_transitive, detail="orbit of the neutral element")
        report.stats.update({"degree": self.quasidirect.loop.order, "order": self.quasidirect.group.order})
        return report


def natural_action(q: QuasidirectGroup) -> NaturalAction:
    l, auts = q.loop, q.automorphisms
    m = auts.order
    a_of = np.repeat(q.loop_order, m)
    alpha_of = np.tile(np.arange(m), l.order)
    images = l.otimes[a_of[:, None], auts.table[alpha_of, :]]
    return NaturalAction(quasidirect=q, images=images)


# --- ABELIAN ROUTE ---
def extend_abelian(g: FiniteGroup) -> tuple[QuasidirectGroup, Geometry]:
    """
    A ⋊ ⟨ε⟩ for a uniquely 2-divisible abelian group A, with J = A × {ε} and
    Λ = {J}: a single-line reflection space.
    """
    if not g.is_abelian:
        raise PreconditionError("the abelian route needs an abelian group")
    l = kloop_from_twisted(g, range(g.order))
    auts = AutomorphismGroup.from_list(
        l,
        [Automorphism(loop=l, images=np.arange(l.order), name="id"), inversion_automorphism(l)],
    )
    q = quasidirect_product(l, auts)
    j_set = q.involution_set
    lines = frozenset({j_set}) if len(j_set) >= 2 else frozenset()
    return q, Geometry(parent=q.group, points=j_set, lines=lines)
