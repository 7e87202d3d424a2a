"""
Finite groups stored as Cayley tables, plus the element-level algebra the rest of
the package is built on (classes, centralizers, normalizers, closures, square roots).

Elements are the indices 0..n-1 and the identity is always index 0. Permutation
groups act on the right, x^(gh) = (x^g)^h, so the image table of g·h is h[g].
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property, lru_cache
from typing import Iterable, Mapping, Optional, Sequence

import numpy as np

from core import settings
from core.errors import (
    NotAutomorphismError,
    NotGroupError,
    NotHomomorphismError,
    NotMemberError,
    NotPermutationError,
    NotSubgroupError,
    NotUniquely2DivisibleError,
    TooLargeError,
)

IDENTITY = 0


def as_index_set(values: Iterable[int]) -> tuple[int, ...]:
    """Canonical form of an index set: sorted, deduplicated Python ints."""
    return tuple(sorted({int(v) for v in values}))


# --- TABLE VALIDATION ---
def _closure_mask(mul: np.ndarray, gens: Sequence[int]) -> np.ndarray:
    """Elements reachable from the identity by right multiplication with `gens`."""
    mask = np.zeros(mul.shape[0], dtype=bool)
    mask[IDENTITY] = True
    gens = np.asarray(list(gens), dtype=np.int64)
    frontier = np.array([IDENTITY], dtype=np.int64)
    while frontier.size and gens.size:
        reached = np.unique(mul[np.ix_(frontier, gens)])
        fresh = reached[~mask[reached]]
        mask[fresh] = True
        frontier = fresh
    return mask


def _greedy_generators(mul: np.ndarray) -> tuple[int, ...]:
    covered = _closure_mask(mul, [])
    gens: list[int] = []
    for x in range(mul.shape[0]):
        if not covered[x]:
            gens.append(x)
            covered = _closure_mask(mul, gens)
    return tuple(gens)


def _check_associativity(mul: np.ndarray) -> None:
    n = mul.shape[0]
    if n <= settings.get_full_associativity_limit():
        for x in range(n):
            left = mul[mul[x], :]      # (x*y)*z
            right = mul[x][mul]        # x*(y*z)
            bad = np.argwhere(left != right)
            if bad.size:
                y, z = (int(v) for v in bad[0])
                raise NotGroupError("associativity fails", witness=[x, y, z])
        return

    # Light's test: the g with (x*g)*y == x*(g*y) for all x, y are closed under
    # products, so checking a generating set covers the whole table.
    for g in _greedy_generators(mul):
        left = mul[mul[:, g], :]
        right = mul[:, mul[g, :]]
        bad = np.argwhere(left != right)
        if bad.size:
            x, y = (int(v) for v in bad[0])
            raise NotGroupError("associativity fails", witness=[x, g, y])


def _validate_table(mul: np.ndarray, check_associativity: bool = True) -> np.ndarray:
    """Check a table whose identity sits at index 0; return its inverse table."""
    n = mul.shape[0]
    ar = np.arange(n)
    if not (np.array_equal(mul[IDENTITY], ar) and np.array_equal(mul[:, IDENTITY], ar)):
        raise NotGroupError("index 0 is not a two-sided identity", witness=[IDENTITY])

    has_inverse = (mul == IDENTITY).any(axis=1)
    if not has_inverse.all():
        x = int(np.flatnonzero(~has_inverse)[0])
        raise NotGroupError(f"element {x} has no inverse", witness=[x])
    inv = np.argmax(mul == IDENTITY, axis=1).astype(np.int64)
    two_sided = mul[inv, ar] == IDENTITY
    if not two_sided.all():
        x = int(np.flatnonzero(~two_sided)[0])
        raise NotGroupError(f"element {x} has no two-sided inverse", witness=[x])

    bad_rows = ~(np.sort(mul, axis=1) == ar[None, :]).all(axis=1)
    if bad_rows.any():
        x = int(np.flatnonzero(bad_rows)[0])
        raise NotGroupError(f"row {x} is not a permutation", witness=[x])
    bad_cols = ~(np.sort(mul, axis=0) == ar[:, None]).all(axis=0)
    if bad_cols.any():
        x = int(np.flatnonzero(bad_cols)[0])
        raise NotGroupError(f"column {x} is not a permutation", witness=[x])

    if check_associativity:
        _check_associativity(mul)
    return inv


# --- GROUPS ---
@dataclass(frozen=True)
class PermutationRepresentation:
    """Image table of a permutation action: row x holds the images of 0..degree-1 under x."""
    degree: int
    images: np.ndarray

    def of(self, x: int) -> tuple[int, ...]:
        return tuple(int(v) for v in self.images[x])


@dataclass(frozen=True, eq=False)
class FiniteGroup:
    """
    An immutable finite group.

    `mul[x, y]` is the index of x·y and `inv[x]` the index of x^-1; index 0 is the
    identity. Use `from_cayley_table` or `from_permutation_generators`, which both
    validate the table before returning.
    """
    mul: np.ndarray
    inv: np.ndarray
    labels: Optional[tuple[str, ...]] = None
    perm_rep: Optional[PermutationRepresentation] = None

    def __post_init__(self):
        self.mul.setflags(write=False)
        self.inv.setflags(write=False)

    @classmethod
    def from_cayley_table(
        cls,
        table: Sequence[Sequence[int]] | np.ndarray,
        labels: Optional[Sequence[str]] = None,
    ) -> "FiniteGroup":
        """
        Validate a Cayley table and relabel it so that the identity is index 0.

        The remaining elements keep their input order. Raises NotGroupError with a
        witness (an element without an inverse, or a non-associative triple).
        """
        try:
            arr = np.asarray(table, dtype=np.int64)
        except (TypeError, ValueError) as e:
            raise NotGroupError("table is not an integer matrix") from e
        if arr.ndim != 2 or arr.shape[0] != arr.shape[1] or arr.shape[0] == 0:
            raise NotGroupError(f"table must be a non-empty square matrix, got shape {arr.shape}")
        n = arr.shape[0]
        if arr.min() < 0 or arr.max() >= n:
            raise NotGroupError(f"table entries must lie in 0..{n - 1}")
        if labels is not None and len(labels) != n:
            raise NotGroupError(f"expected {n} labels, got {len(labels)}")

        ar = np.arange(n)
        two_sided = (arr == ar[None, :]).all(axis=1) & (arr == ar[:, None]).all(axis=0)
        if not two_sided.any():
            raise NotGroupError("table has no two-sided identity")
        e = int(np.flatnonzero(two_sided)[0])

        order = np.array([e] + [x for x in range(n) if x != e], dtype=np.int64)
        position = np.empty(n, dtype=np.int64)
        position[order] = ar
        mul = position[arr[np.ix_(order, order)]]
        inv = _validate_table(mul)
        new_labels = tuple(str(labels[x]) for x in order) if labels is not None else None
        return cls(mul=mul, inv=inv, labels=new_labels)

    @classmethod
    def from_permutation_generators(
        cls,
        degree: int,
        gens: Sequence[Sequence[int]],
        max_order: Optional[int] = None,
    ) -> "FiniteGroup":
        """
        Close a set of permutations of 0..degree-1 breadth-first.

        The identity is index 0 and the other elements follow in discovery order.
        Raises NotPermutationError for bad generators and TooLargeError once the
        closure passes `max_order` (default: MOCKHYP_MAX_ORDER).
        """
        if degree < 1:
            raise NotPermutationError("degree must be positive", witness=[degree])
        ar = np.arange(degree, dtype=np.int64)
        perms: list[np.ndarray] = []
        for k, gen in enumerate(gens):
            try:
                perm = np.asarray(gen, dtype=np.int64)
            except (TypeError, ValueError) as e:
                raise NotPermutationError(f"generator {k} is not an integer list", witness=[k]) from e
            if perm.shape != (degree,) or not np.array_equal(np.sort(perm), ar):
                raise NotPermutationError(f"generator {k} is not a permutation of 0..{degree - 1}", witness=[k])
            perms.append(perm)
        limit = max_order if max_order is not None else settings.get_max_order()

        elements = [ar]
        index = {ar.tobytes(): 0}
        parent = [-1]
        parent_gen = [-1]
        right_mult: list[list[int]] = [[] for _ in perms]
        i = 0
        while i < len(elements):
            current = elements[i]
            for k, perm in enumerate(perms):
                product = perm[current]
                key = product.tobytes()
                j = index.get(key)
                if j is None:
                    j = len(elements)
                    if j >= limit:
                        raise TooLargeError(f"closure exceeds {limit} elements", witness=[limit])
                    index[key] = j
                    elements.append(product)
                    parent.append(i)
                    parent_gen.append(k)
                right_mult[k].append(j)
            i += 1

        # Column j = parent(j)·gen, so x·j = (x·parent(j))·gen.
        n = len(elements)
        columns = [np.asarray(c, dtype=np.int64) for c in right_mult]
        mul = np.empty((n, n), dtype=np.int64)
        mul[:, 0] = np.arange(n)
        for j in range(1, n):
            mul[:, j] = columns[parent_gen[j]][mul[:, parent[j]]]
        inv = _validate_table(mul, check_associativity=False)
        return cls(
            mul=mul,
            inv=inv,
            perm_rep=PermutationRepresentation(degree=degree, images=np.stack(elements)),
        )

    # --- BASIC QUERIES ---
    @property
    def order(self) -> int:
        return int(self.mul.shape[0])

    @property
    def identity(self) -> int:
        return IDENTITY

    @cached_property
    def elements(self) -> np.ndarray:
        return np.arange(self.order, dtype=np.int64)

    @cached_property
    def squares(self) -> np.ndarray:
        return self.mul[self.elements, self.elements]

    @cached_property
    def is_abelian(self) -> bool:
        return bool((self.mul == self.mul.T).all())

    @cached_property
    def generators(self) -> tuple[int, ...]:
        """A greedy generating set (each generator is the first element not yet reached)."""
        return _greedy_generators(self.mul)

    @cached_property
    def element_orders(self) -> np.ndarray:
        orders = np.zeros(self.order, dtype=np.int64)
        current = self.elements.copy()
        for k in range(1, self.order + 1):
            orders[(current == IDENTITY) & (orders == 0)] = k
            if (orders > 0).all():
                break
            current = self.mul[current, self.elements]
        return orders

    def label(self, x: int) -> str:
        return self.labels[x] if self.labels is not None else str(x)

    def product(self, *xs: int) -> int:
        result = IDENTITY
        for x in xs:
            result = int(self.mul[result, x])
        return result

    def conjugate(self, x: int, h: int) -> int:
        """x^h = h^-1 x h."""
        return int(self.mul[self.mul[self.inv[h], x], h])

    def power(self, x: int, n: int) -> int:
        if n < 0:
            x, n = int(self.inv[x]), -n
        n %= int(self.element_orders[x])
        result = IDENTITY
        for _ in range(n):
            result = int(self.mul[result, x])
        return result

    @cached_property
    def _permutation_index(self) -> dict[bytes, int]:
        if self.perm_rep is None:
            return {}
        return {row.tobytes(): k for k, row in enumerate(self.perm_rep.images)}

    def index_of_permutation(self, perm: Sequence[int]) -> int:
        """Element index of a permutation in the group's own action."""
        key = np.asarray(perm, dtype=np.int64).tobytes()
        if key not in self._permutation_index:
            raise NotMemberError(f"permutation {list(perm)} is not in the group")
        return self._permutation_index[key]

    def to_json_dict(self) -> dict:
        data = {"type": "cayley", "table": self.mul.tolist()}
        if self.labels is not None:
            data["labels"] = list(self.labels)
        return data


# --- SUBGROUPS ---
@dataclass(frozen=True, eq=False)
class Subgroup:
    """A sorted member set of `parent`, closed under products and inverses (checked)."""
    parent: FiniteGroup
    members: tuple[int, ...]

    def __post_init__(self):
        arr = self.array
        if arr.size == 0 or arr[0] != IDENTITY or (np.diff(arr) <= 0).any():
            raise NotSubgroupError("members must be sorted, distinct and contain the identity")
        outside = ~self.mask[self.parent.mul[np.ix_(arr, arr)]]
        if outside.any():
            x, y = (int(arr[v]) for v in np.argwhere(outside)[0])
            raise NotSubgroupError("set is not closed under products", witness=[x, y])
        if not self.mask[self.parent.inv[arr]].all():
            x = int(arr[~self.mask[self.parent.inv[arr]]][0])
            raise NotSubgroupError("set is not closed under inverses", witness=[x])

    @classmethod
    def of(cls, parent: FiniteGroup, members: Iterable[int]) -> "Subgroup":
        return cls(parent=parent, members=as_index_set(members))

    @classmethod
    def whole(cls, parent: FiniteGroup) -> "Subgroup":
        return cls(parent=parent, members=tuple(range(parent.order)))

    @cached_property
    def array(self) -> np.ndarray:
        return np.asarray(self.members, dtype=np.int64)

    @cached_property
    def mask(self) -> np.ndarray:
        mask = np.zeros(self.parent.order, dtype=bool)
        mask[self.array] = True
        return mask

    @property
    def order(self) -> int:
        return len(self.members)

    def __contains__(self, x: int) -> bool:
        return 0 <= x < self.parent.order and bool(self.mask[x])

    def __iter__(self):
        return iter(self.members)

    def __len__(self) -> int:
        return len(self.members)

    def __eq__(self, other) -> bool:
        if not isinstance(other, Subgroup):
            return NotImplemented
        return self.parent is other.parent and self.members == other.members

    def __hash__(self) -> int:
        return hash((id(self.parent), self.members))

    @cached_property
    def is_abelian(self) -> bool:
        products = self.parent.mul[np.ix_(self.array, self.array)]
        return bool((products == products.T).all())

    @cached_property
    def is_normal(self) -> bool:
        return normalizer_of_set(self.parent, self.members).order == self.parent.order


# --- ELEMENT-LEVEL OPERATIONS ---
def conjugate_set(g: FiniteGroup, s: Iterable[int], h: int) -> tuple[int, ...]:
    """s^h = {h^-1 x h : x in s}, canonical."""
    arr = np.asarray(list(s), dtype=np.int64)
    return as_index_set(g.mul[g.mul[g.inv[h], arr], h])


def conjugacy_class(g: FiniteGroup, x: int) -> tuple[int, ...]:
    return as_index_set(g.mul[g.mul[g.inv, x], g.elements])


def involutions(g: FiniteGroup) -> tuple[int, ...]:
    found = (g.squares == IDENTITY) & (g.elements != IDENTITY)
    return tuple(int(x) for x in np.flatnonzero(found))


def centralizer(g: FiniteGroup, s: Iterable[int]) -> Subgroup:
    arr = np.asarray(as_index_set(s), dtype=np.int64)
    if arr.size == 0:
        return Subgroup.whole(g)
    commutes = (g.mul[:, arr] == g.mul[arr, :].T).all(axis=1)
    return Subgroup.of(g, np.flatnonzero(commutes))


def normalizer_of_set(g: FiniteGroup, s: Iterable[int]) -> Subgroup:
    """{h : s^h = s}; conjugation is injective, so s^h ⊆ s already forces equality."""
    arr = as_index_set(s)
    in_s = np.zeros(g.order, dtype=bool)
    in_s[list(arr)] = True
    keep = np.ones(g.order, dtype=bool)
    for x in arr:
        keep &= in_s[g.mul[g.mul[g.inv, x], g.elements]]
    return Subgroup.of(g, np.flatnonzero(keep))


def subgroup_closure(g: FiniteGroup, gens: Iterable[int]) -> Subgroup:
    return Subgroup.of(g, np.flatnonzero(_closure_mask(g.mul, as_index_set(gens))))


def center(g: FiniteGroup) -> Subgroup:
    return Subgroup.of(g, np.flatnonzero((g.mul == g.mul.T).all(axis=1)))


def commutator_subgroup(s: Subgroup) -> Subgroup:
    g = s.parent
    arr = s.array
    inverses = g.inv[arr]
    left = g.mul[np.ix_(inverses, inverses)]     # x^-1 y^-1
    right = g.mul[np.ix_(arr, arr)]              # x y
    return subgroup_closure(g, np.unique(g.mul[left, right]))


def is_solvable(s: Subgroup) -> bool:
    """Walk the derived series until it reaches {1} or stabilizes."""
    current = s
    while current.order > 1:
        derived = commutator_subgroup(current)
        if derived.order == current.order:
            return False
        current = derived
    return True


def is_uniquely_2_divisible(g: FiniteGroup, s: Iterable[int]) -> bool:
    arr = np.asarray(as_index_set(s), dtype=np.int64)
    return bool(np.array_equal(np.unique(g.mul[arr, arr]), arr))


@lru_cache(maxsize=64)
def _root_table(g: FiniteGroup, members: tuple[int, ...]) -> np.ndarray:
    arr = np.asarray(members, dtype=np.int64)
    squares = g.mul[arr, arr]
    counts = np.bincount(squares, minlength=g.order)
    bad = arr[counts[arr] != 1]
    if bad.size:
        x = int(bad[0])
        roots = [int(r) for r in arr[squares == x]]
        raise NotUniquely2DivisibleError(
            f"element {x} has {len(roots)} square roots in the set",
            witness=[x, *roots],
        )
    root_of = np.full(g.order, -1, dtype=np.int64)
    root_of[squares] = arr
    roots = root_of[arr]
    roots.setflags(write=False)
    return roots


def square_roots(g: FiniteGroup, s: Iterable[int]) -> np.ndarray:
    """Square roots of the sorted members of `s`, aligned with that order."""
    return _root_table(g, as_index_set(s))


def sqrt_in(g: FiniteGroup, s: Iterable[int], x: int) -> int:
    """
    The unique y in `s` with y² = x.

    Works by inverting the square table of `s`, so `s` need not be a subgroup.

    Raises:
        NotMemberError: If x is not in s.
        NotUniquely2DivisibleError: If squaring is not a bijection of s.
    """
    members = as_index_set(s)
    position = int(np.searchsorted(members, x))
    if position >= len(members) or members[position] != x:
        raise NotMemberError(f"element {x} is not in the set", witness=[x])
    return int(_root_table(g, members)[position])


def homomorphism_from_generators(
    source: FiniteGroup,
    target: FiniteGroup,
    images: Mapping[int, int],
) -> np.ndarray:
    """
    Extend generator images to a full map source -> target and verify the
    homomorphism law on every pair.

    Raises:
        NotHomomorphismError: If two words for the same element disagree, the keys do
            not generate `source`, or the extended map breaks the law.
    """
    gens = sorted(int(k) for k in images)
    for gen in gens:
        if not (0 <= images[gen] < target.order):
            raise NotHomomorphismError(f"image of {gen} is outside the target", witness=[gen])
    mapping = np.full(source.order, -1, dtype=np.int64)
    mapping[IDENTITY] = IDENTITY
    frontier = [IDENTITY]
    while frontier:
        fresh = []
        for x in frontier:
            for gen in gens:
                y = int(source.mul[x, gen])
                image = int(target.mul[mapping[x], images[gen]])
                if mapping[y] < 0:
                    mapping[y] = image
                    fresh.append(y)
                elif mapping[y] != image:
                    raise NotHomomorphismError("generator images are inconsistent", witness=[x, gen])
        frontier = fresh
    if (mapping < 0).any():
        x = int(np.flatnonzero(mapping < 0)[0])
        raise NotHomomorphismError("generators do not generate the source group", witness=[x])
    bad = np.argwhere(mapping[source.mul] != target.mul[np.ix_(mapping, mapping)])
    if bad.size:
        raise NotHomomorphismError("map breaks the homomorphism law", witness=[int(v) for v in bad[0]])
    return mapping


@dataclass(frozen=True, eq=False)
class InvolutoryAutomorphism:
    """An automorphism α of `parent` with α² = id (checked at construction)."""
    parent: FiniteGroup
    images: np.ndarray
    order_two: bool = field(init=False)

    def __post_init__(self):
        g = self.parent
        images = np.asarray(self.images, dtype=np.int64)
        object.__setattr__(self, "images", images)
        if images.shape != (g.order,) or not np.array_equal(np.sort(images), g.elements):
            raise NotAutomorphismError("images are not a permutation of the group")
        bad = np.argwhere(images[g.mul] != g.mul[np.ix_(images, images)])
        if bad.size:
            raise NotAutomorphismError("map is not a homomorphism", witness=[int(v) for v in bad[0]])
        if not np.array_equal(images[images], g.elements):
            x = int(np.flatnonzero(images[images] != g.elements)[0])
            raise NotAutomorphismError("map does not square to the identity", witness=[x])
        object.__setattr__(self, "order_two", not np.array_equal(images, g.elements))

    @classmethod
    def from_generator_images(cls, g: FiniteGroup, images: Mapping[int, int]) -> "InvolutoryAutomorphism":
        try:
            mapping = homomorphism_from_generators(g, g, images)
        except NotHomomorphismError as e:
            raise NotAutomorphismError(e.args[0], witness=e.witness) from e
        return cls(parent=g, images=mapping)

    def __call__(self, x: int) -> int:
        return int(self.images[x])


def inverted_set(alpha: InvolutoryAutomorphism) -> tuple[int, ...]:
    """Inv(α) = {x : α(x) = x^-1}."""
    g = alpha.parent
    return tuple(int(x) for x in np.flatnonzero(alpha.images == g.inv))


def fixed_set(alpha: InvolutoryAutomorphism) -> tuple[int, ...]:
    """Cen(α) = {x : α(x) = x}."""
    g = alpha.parent
    return tuple(int(x) for x in np.flatnonzero(alpha.images == g.elements))


def neumann_decompose(g: FiniteGroup, alpha: InvolutoryAutomorphism, x: int) -> tuple[int, int]:
    """
    Split x = a·b with a in Inv(α) and b in Cen(α).

    a = (x·(x^α)^-1)^(1/2) and b = a^-1·x. Fails fast with
    NotUniquely2DivisibleError when g is not uniquely 2-divisible.
    """
    roots = square_roots(g, range(g.order))
    a = int(roots[g.mul[x, g.inv[alpha.images[x]]]])
    b = int(g.mul[g.inv[a], x])
    return a, b
