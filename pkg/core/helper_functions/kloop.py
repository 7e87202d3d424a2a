"""
K-loops built from uniquely 2-divisible twisted subgroups, a ⊗ b = a^{1/2} b a^{1/2},
together with their precession maps δ_{a,b} = λ_{ab}^{-1} λ_a λ_b.

Loops are stored on carrier positions 0..|L|-1; `carrier[p]` is the ambient index
of position p. Automorphisms are permutations of positions and compose as
functions, (α∘β)(x) = α(β(x)).
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Optional

import numpy as np

from core.errors import (
    LemmaViolationError,
    NotAutomorphismError,
    NotTwistedError,
    NotUniquely2DivisibleError,
    PreconditionError,
)
from core.helper_functions.finite_group import (
    IDENTITY,
    FiniteGroup,
    as_index_set,
    is_solvable,
    square_roots,
    subgroup_closure,
)
from core.helper_functions.reports import AxiomReport


@dataclass(frozen=True, eq=False)
class KLoop:
    """
    A loop (L, ⊗) on carrier positions.

    `ambient` is the group the carrier lives in; it is None for loops read from a
    bare ⊗-table, in which case the ambient-group checks are skipped.
    """
    ambient: Optional[FiniteGroup]
    carrier: tuple[int, ...]
    otimes: np.ndarray
    sqrt: np.ndarray
    neutral: int

    def __post_init__(self):
        otimes = np.array(self.otimes, dtype=np.int64)
        n = len(self.carrier)
        if otimes.shape != (n, n) or otimes.min() < 0 or otimes.max() >= n:
            raise PreconditionError(f"⊗-table must be {n}×{n} with entries in 0..{n - 1}")
        otimes.setflags(write=False)
        object.__setattr__(self, "otimes", otimes)
        sqrt = np.array(self.sqrt, dtype=np.int64)
        sqrt.setflags(write=False)
        object.__setattr__(self, "sqrt", sqrt)

    @classmethod
    def from_table(cls, otimes, carrier: Optional[Iterable[int]] = None) -> "KLoop":
        """A loop without an ambient group; the square roots come from the table diagonal."""
        table = np.asarray(otimes, dtype=np.int64)
        n = table.shape[0]
        ar = np.arange(n)
        neutral = np.flatnonzero((table == ar[None, :]).all(axis=1) & (table == ar[:, None]).all(axis=0))
        if neutral.size == 0:
            raise PreconditionError("⊗-table has no neutral element")
        diagonal = table[ar, ar]
        if not np.array_equal(np.sort(diagonal), ar):
            x = int(np.flatnonzero(np.bincount(diagonal, minlength=n) != 1)[0])
            raise NotUniquely2DivisibleError("squaring is not a bijection of the loop", witness=[x])
        carrier = tuple(int(c) for c in carrier) if carrier is not None else tuple(range(n))
        return cls(ambient=None, carrier=carrier, otimes=table, sqrt=np.argsort(diagonal), neutral=int(neutral[0]))

    @property
    def order(self) -> int:
        return len(self.carrier)

    @cached_property
    def carrier_array(self) -> np.ndarray:
        return np.asarray(self.carrier, dtype=np.int64)

    @cached_property
    def position(self) -> np.ndarray:
        """Ambient index -> carrier position (-1 outside the carrier)."""
        size = self.ambient.order if self.ambient is not None else max(self.carrier) + 1
        pos = np.full(size, -1, dtype=np.int64)
        pos[self.carrier_array] = np.arange(self.order)
        return pos

    @cached_property
    def inverse(self) -> np.ndarray:
        """Right inverses read off the table: a ⊗ inverse[a] = 1."""
        return np.argmax(self.otimes == self.neutral, axis=1).astype(np.int64)

    def to_json_dict(self) -> dict:
        return {"carrier": list(self.carrier), "otimes": self.otimes.tolist()}


# --- TWISTED SUBGROUPS ---
def _twisted_witness(g: FiniteGroup, members: tuple[int, ...]) -> Optional[tuple[str, list[int]]]:
    if not members or members[0] != IDENTITY:
        return "identity is missing", [IDENTITY]
    arr = np.asarray(members, dtype=np.int64)
    mask = np.zeros(g.order, dtype=bool)
    mask[arr] = True
    bad = arr[~mask[g.inv[arr]]]
    if bad.size:
        return "not closed under inverses", [int(bad[0])]
    aba = g.mul[g.mul[arr[:, None], arr[None, :]], arr[:, None]]     # [a, b] -> a b a
    bad = np.argwhere(~mask[aba])
    if bad.size:
        a, b = (int(arr[v]) for v in bad[0])
        return "aba leaves the set", [a, b]
    return None


def is_twisted_subgroup(g: FiniteGroup, s: Iterable[int]) -> bool:
    """1 ∈ L, L^-1 ⊆ L and aLa ⊆ L for every a ∈ L."""
    return _twisted_witness(g, as_index_set(s)) is None


def kloop_from_twisted(g: FiniteGroup, s: Iterable[int]) -> KLoop:
    """
    Build (L, ⊗) on a uniquely 2-divisible twisted subgroup L.

    Raises:
        NotTwistedError: If L fails one of the twisted-subgroup conditions.
        NotUniquely2DivisibleError: If squaring is not a bijection of L.
    """
    members = as_index_set(s)
    failure = _twisted_witness(g, members)
    if failure is not None:
        message, witness = failure
        raise NotTwistedError(f"set is not a twisted subgroup: {message}", witness=witness)
    roots = square_roots(g, members)
    arr = np.asarray(members, dtype=np.int64)
    pos = np.full(g.order, -1, dtype=np.int64)
    pos[arr] = np.arange(arr.size)

    products = g.mul[g.mul[roots[:, None], arr[None, :]], roots[:, None]]
    otimes = pos[products]
    if (otimes < 0).any():
        a, b = (int(arr[v]) for v in np.argwhere(otimes < 0)[0])
        raise NotTwistedError("a^{1/2} b a^{1/2} leaves the set", witness=[a, b])
    return KLoop(ambient=g, carrier=members, otimes=otimes, sqrt=pos[roots], neutral=int(pos[IDENTITY]))


def generated_subgroup_is_solvable(g: FiniteGroup, s: Iterable[int]) -> bool:
    """⟨L⟩ is solvable for every uniquely 2-divisible twisted subgroup L of a finite group."""
    return is_solvable(subgroup_closure(g, s))


# --- LOOP AXIOMS ---
def loop_power(l: KLoop, a: int, n: int) -> int:
    """a^{⊗n} on carrier positions, a^{⊗(k+1)} = a ⊗ a^{⊗k}; negative n uses the inverse."""
    if n < 0:
        a, n = int(l.inverse[a]), -n
    result = l.neutral
    for _ in range(n):
        result = int(l.otimes[a, result])
    return result


def _first(bad: np.ndarray) -> Optional[list[int]]:
    hits = np.argwhere(bad)
    return [int(v) for v in hits[0]] if hits.size else None


def verify_kloop_axioms(l: KLoop) -> AxiomReport:
    """
    Unique solvability of a ⊗ x = b and x ⊗ a = b, the Bol identity
    a ⊗ (b ⊗ (a ⊗ c)) = (a ⊗ (b ⊗ a)) ⊗ c and the automorphic inverse property,
    all exhaustively. Witnesses are carrier positions.
    """
    T, n, e = l.otimes, l.order, l.neutral
    ar = np.arange(n)
    report = AxiomReport()

    rows = ~(np.sort(T, axis=1) == ar[None, :]).all(axis=1)
    report.add("loop_rows_solvable", not rows.any(), _first(rows), detail="a ⊗ x = b uniquely solvable")
    cols = ~(np.sort(T, axis=0) == ar[:, None]).all(axis=0)
    report.add("loop_columns_solvable", not cols.any(), _first(cols), detail="x ⊗ a = b uniquely solvable")
    neutral_ok = np.array_equal(T[e], ar) and np.array_equal(T[:, e], ar)
    report.add("loop_neutral", neutral_ok, None if neutral_ok else [e], detail=f"neutral at position {e}")
    two_sided = T[l.inverse, ar] == e
    report.add("loop_inverses_two_sided", bool(two_sided.all()), _first(~two_sided), detail="a^-1 ⊗ a = 1")

    witness = None
    for a in range(n):
        left = T[a][T[:, T[a]]]           # [b, c] -> a(b(ac))
        right = T[T[a][T[:, a]], :]       # [b, c] -> (a(ba))c
        hit = _first(left != right)
        if hit:
            witness = [a, *hit]
            break
    report.add("bol_identity", witness is None, witness, detail=f"{n ** 3} triples")

    inv = l.inverse
    bad = inv[T] != T[np.ix_(inv, inv)]
    report.add("automorphic_inverse", not bad.any(), _first(bad), detail=f"{n * n} pairs")

    if l.ambient is not None:
        g, carrier = l.ambient, l.carrier_array
        loop_powers = np.full(n, e, dtype=np.int64)
        group_powers = np.full(n, IDENTITY, dtype=np.int64)
        witness = None
        for k in range(1, n + 1):
            loop_powers = T[ar, loop_powers]
            group_powers = g.mul[group_powers, carrier]
            bad = np.flatnonzero(carrier[loop_powers] != group_powers)
            if bad.size:
                witness = [int(bad[0]), k]
                break
        report.add("powers_agree", witness is None, witness, detail=f"powers up to {n}")

    report.stats.update({"order": n, "commutative": bool((T == T.T).all())})
    return report


# --- AUTOMORPHISMS ---
@dataclass(frozen=True, eq=False)
class Automorphism:
    """A permutation of carrier positions preserving ⊗ (checked at construction)."""
    loop: KLoop
    images: np.ndarray
    name: str = ""

    def __post_init__(self):
        n = self.loop.order
        images = np.array(self.images, dtype=np.int64)
        if images.shape != (n,) or not np.array_equal(np.sort(images), np.arange(n)):
            raise NotAutomorphismError(f"map {self.name or '?'} is not a permutation of the carrier")
        T = self.loop.otimes
        bad = np.argwhere(images[T] != T[np.ix_(images, images)])
        if bad.size:
            raise NotAutomorphismError(
                f"map {self.name or '?'} does not preserve ⊗",
                witness=[int(v) for v in bad[0]],
            )
        images.setflags(write=False)
        object.__setattr__(self, "images", images)

    def __call__(self, x: int) -> int:
        return int(self.images[x])

    def compose(self, other: "Automorphism") -> "Automorphism":
        """self∘other: apply `other` first."""
        return Automorphism(loop=self.loop, images=self.images[other.images], name=f"{self.name}*{other.name}")

    def inverse(self) -> "Automorphism":
        return Automorphism(loop=self.loop, images=np.argsort(self.images), name=f"{self.name}^-1")

    @property
    def is_identity(self) -> bool:
        return bool(np.array_equal(self.images, np.arange(self.loop.order)))

    def key(self) -> bytes:
        return self.images.tobytes()

    def __eq__(self, other) -> bool:
        if not isinstance(other, Automorphism):
            return NotImplemented
        return self.loop is other.loop and self.key() == other.key()

    def __hash__(self) -> int:
        return hash((id(self.loop), self.key()))


# --- PRECESSIONS ---
def precession_map(l: KLoop, a: int, b: int) -> np.ndarray:
    """δ_{a,b} from left translations, as a permutation of positions."""
    T = l.otimes
    return np.argsort(T[T[a, b]])[T[a][T[b]]]


def _twisted_factor(l: KLoop, a: int, b: int) -> int:
    """d_{a,b} = b^{1/2} a^{1/2} (a^{1/2} b a^{1/2})^{-1/2} in the ambient group."""
    g, roots = l.ambient, l.carrier_array[l.sqrt]
    c = int(l.otimes[a, b])
    return int(g.mul[g.mul[roots[b], roots[a]], g.inv[roots[c]]])


def twisted_precession_map(l: KLoop, a: int, b: int) -> np.ndarray:
    """δ_{a,b} as conjugation x ↦ d^-1 x d by d = d_{a,b}, restricted to the carrier."""
    if l.ambient is None:
        raise PreconditionError("the twisted form needs an ambient group")
    g = l.ambient
    d = _twisted_factor(l, a, b)
    images = l.position[g.mul[g.mul[g.inv[d], l.carrier_array], d]]
    if (images < 0).any():
        raise LemmaViolationError("conjugation by d_{a,b} leaves the carrier", witness=[a, b])
    return images


def precession(l: KLoop, a: int, b: int) -> Automorphism:
    """
    δ_{a,b} as a validated automorphism. For loops with an ambient group the
    twisted form is computed as well and must agree elementwise.
    """
    images = precession_map(l, a, b)
    if l.ambient is not None:
        twisted = twisted_precession_map(l, a, b)
        if not np.array_equal(images, twisted):
            x = int(np.flatnonzero(images != twisted)[0])
            raise LemmaViolationError("δ_{a,b} differs from conjugation by d_{a,b}", witness=[a, b, x])
    return Automorphism(loop=l, images=images, name=f"delta({a},{b})")


def all_precession_maps(l: KLoop) -> np.ndarray:
    """D[a, b] = δ_{a,b} for every pair of positions, shape (n, n, n)."""
    T = l.otimes
    left_inverse = np.argsort(T, axis=1)                 # row k: λ_k^-1
    composed = T[np.arange(l.order)[:, None, None], T[None, :, :]]    # a ⊗ (b ⊗ x)
    return left_inverse[T[:, :, None], composed]


def _twisted_maps(l: KLoop) -> np.ndarray:
    g, carrier = l.ambient, l.carrier_array
    roots = carrier[l.sqrt]
    d = g.mul[g.mul[roots[None, :], roots[:, None]], g.inv[roots[l.otimes]]]    # [a, b] -> d_{a,b}
    conjugated = g.mul[g.mul[g.inv[d][:, :, None], carrier[None, None, :]], d[:, :, None]]
    return l.position[conjugated]


def verify_precession_identities(l: KLoop, auts: Iterable[Automorphism] = ()) -> AxiomReport:
    """
    The precession identities over all pairs (a, b):
    α^-1 δ_{a,b} α = δ_{α^-1(a), α^-1(b)} for each supplied α, δ_{a,a^-1} = id,
    δ_{a,b⊗a} = δ_{a,b}, δ_{a,b} = δ_{b,a}^-1 and δ_{a,b} = δ_{a^-1,b^-1}.
    Every distinct δ must preserve ⊗, and the twisted form must agree when an
    ambient group is present.
    """
    T, n = l.otimes, l.order
    ar = np.arange(n)
    inv = l.inverse
    D = all_precession_maps(l)
    report = AxiomReport()

    def pair_witness(bad: np.ndarray) -> Optional[list[int]]:
        return _first(bad.reshape(n, n, -1).any(axis=2))

    auts = list(auts)
    witness = None
    for alpha in auts:
        alpha_inv = np.argsort(alpha.images)
        left = alpha_inv[D[:, :, alpha.images]]
        right = D[alpha_inv[:, None], alpha_inv[None, :]]
        hit = pair_witness(left != right)
        if hit:
            witness = hit
            break
    report.add(
        "precession_conjugation", witness is None, witness,
        detail=f"{len(auts)} automorphisms, {n * n} pairs each",
    )

    bad = D[ar, inv] != ar[None, :]
    hit = _first(bad.any(axis=1))
    report.add("precession_inverse_pair_trivial", hit is None, None if hit is None else [hit[0], int(inv[hit[0]])],
               detail="δ_{a,a^-1} = id")

    hit = pair_witness(D[ar[:, None], T.T] != D)
    report.add("precession_absorbs_product", hit is None, hit, detail="δ_{a,b⊗a} = δ_{a,b}")

    hit = pair_witness(D != np.argsort(D, axis=2).transpose(1, 0, 2))
    report.add("precession_swap_inverts", hit is None, hit, detail="δ_{a,b} = δ_{b,a}^-1")

    hit = pair_witness(D[inv[:, None], inv[None, :]] != D)
    report.add("precession_inverse_arguments", hit is None, hit, detail="δ_{a,b} = δ_{a^-1,b^-1}")

    distinct = np.unique(D.reshape(n * n, n), axis=0)
    witness = None
    for images in distinct:
        bad = images[T] != T[np.ix_(images, images)]
        if bad.any():
            witness = [int(v) for v in np.argwhere(bad)[0]]
            break
    report.add(
        "precessions_are_automorphisms", witness is None, witness,
        detail=f"{len(distinct)} distinct maps",
    )

    if l.ambient is not None:
        hit = pair_witness(_twisted_maps(l) != D)
        report.add("precession_twisted_form", hit is None, hit, detail="δ_{a,b} = conjugation by d_{a,b}")

    report.stats.update({"order": n, "distinct_precessions": len(distinct)})
    return report


def precession_group(l: KLoop) -> list[Automorphism]:
    """
    𝒟(L) = ⟨δ_{a,b}⟩ as a list of automorphisms, identity first.

    Raises:
        TooLargeError: If the closure passes MOCKHYP_MAX_ORDER.
    """
    n = l.order
    distinct = np.unique(all_precession_maps(l).reshape(n * n, n), axis=0)
    gens = [row for row in distinct if not np.array_equal(row, np.arange(n))]
    closure = FiniteGroup.from_permutation_generators(n, gens)
    return [
        Automorphism(loop=l, images=closure.perm_rep.images[k], name="id" if k == 0 else f"D{k}")
        for k in range(closure.order)
    ]
