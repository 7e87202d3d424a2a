import numpy as np
import pytest

from core.errors import (
    NontrivialCenterError,
    PrecessionNotInAError,
    PreconditionError,
    TooLargeError,
)
from core.helper_functions.catalog import build_catalog_entry, cyclic_group
from core.helper_functions.finite_group import FiniteGroup, centralizer, homomorphism_from_generators, involutions
from core.helper_functions.kloop import Automorphism, kloop_from_twisted
from core.helper_functions.quasidirect import (
    AutomorphismGroup,
    conjugation_automorphisms,
    extend_abelian,
    group_with_inversion,
    inversion_automorphism,
    natural_action,
    quasidirect_product,
    verify_quasidirect_involutions,
)

from tests.test_variables import S3_PERMUTATIONS, S3_TABLE, relabel_table


@pytest.fixture(scope="module")
def frob73_loop():
    g = build_catalog_entry("frob(7,3)").group
    return g, kloop_from_twisted(g, range(g.order))


@pytest.fixture(scope="module")
def frob73_quasidirect(frob73_loop):
    g, loop = frob73_loop
    return quasidirect_product(loop, group_with_inversion(g, loop))


def _identity(loop) -> Automorphism:
    return Automorphism(loop=loop, images=np.arange(loop.order), name="id")


# --- AUTOMORPHISM GROUPS ---
def test_conjugations_and_inversion(frob73_loop):
    g, loop = frob73_loop
    conjugations = conjugation_automorphisms(g, loop)
    assert len(conjugations) == 21
    assert len({alpha.key() for alpha in conjugations}) == 21
    auts = group_with_inversion(g, loop)
    assert auts.order == 42
    assert auts.names[:2] == ["id", "eps"]
    assert auts.epsilon == 1
    assert np.array_equal(auts.compose[auts.epsilon, auts.epsilon], 0)
    assert all(auts.compose[k, auts.inverse[k]] == 0 for k in range(auts.order))


def test_conjugations_need_trivial_center():
    c3 = cyclic_group(3).group
    loop = kloop_from_twisted(c3, range(3))
    with pytest.raises(NontrivialCenterError):
        conjugation_automorphisms(c3, loop)
    trivial = FiniteGroup.from_cayley_table([[0]])
    with pytest.raises(NontrivialCenterError):
        conjugation_automorphisms(trivial, kloop_from_twisted(trivial, [0]))


def test_conjugations_need_whole_group_carrier():
    s3 = FiniteGroup.from_cayley_table(S3_TABLE)
    rotations = [x for x in range(6) if s3.element_orders[x] in (1, 3)]
    loop = kloop_from_twisted(s3, rotations)
    with pytest.raises(PreconditionError):
        conjugation_automorphisms(s3, loop)


def test_automorphism_group_from_list_errors(frob73_loop):
    g, loop = frob73_loop
    eps = inversion_automorphism(loop)
    with pytest.raises(PreconditionError):
        AutomorphismGroup.from_list(loop, [eps])
    order_three = next(alpha for alpha in conjugation_automorphisms(g, loop)
                       if not alpha.is_identity)
    with pytest.raises(PreconditionError):
        AutomorphismGroup.from_list(loop, [_identity(loop), order_three])


def test_automorphism_group_generation(frob73_loop):
    g, loop = frob73_loop
    gens = [inversion_automorphism(loop), *conjugation_automorphisms(g, loop)]
    generated = AutomorphismGroup.generate(loop, gens)
    assert generated.order == 42
    assert generated.index_of(np.arange(loop.order)) == 0
    assert generated.index_of(np.roll(np.arange(loop.order), 1)) == -1
    with pytest.raises(TooLargeError):
        AutomorphismGroup.generate(loop, gens, max_order=5)


# --- QUASIDIRECT PRODUCTS ---
def test_cyclic_loop_with_inversion_is_s3():
    """
    C_3 ⋊ ⟨ε⟩ relabels onto the S3 table: the rotation (1, id) goes to a 3-cycle
    and ι = (0, ε) to a transposition.
    """
    q, geometry = extend_abelian(cyclic_group(3).group)
    s3 = FiniteGroup.from_cayley_table(S3_TABLE)
    images = {
        q.index(1, 0): S3_PERMUTATIONS.index((1, 2, 0)),
        q.iota: S3_PERMUTATIONS.index((0, 2, 1)),
    }
    mapping = homomorphism_from_generators(q.group, s3, images)
    assert sorted(mapping.tolist()) == list(range(6))
    assert relabel_table(q.group.mul.tolist(), mapping.tolist()) == S3_TABLE
    assert sorted(mapping[list(q.involution_set)].tolist()) == list(involutions(s3))
    assert geometry.sorted_lines == [q.involution_set]
    report = verify_quasidirect_involutions(q)
    assert report.passed, report.failures()


def test_extend_abelian_rejects_nonabelian():
    with pytest.raises(PreconditionError):
        extend_abelian(build_catalog_entry("frob(7,3)").group)


def test_missing_precessions_are_rejected(frob73_loop):
    """
    ⟨ε⟩ alone does not contain the precessions of a non-commutative loop.
    """
    _, loop = frob73_loop
    auts = AutomorphismGroup.from_list(loop, [_identity(loop), inversion_automorphism(loop)])
    with pytest.raises(PrecessionNotInAError) as exc_info:
        quasidirect_product(loop, auts)
    assert len(exc_info.value.witness) == 2


def test_frobenius_quasidirect_product(frob73_quasidirect):
    q = frob73_quasidirect
    assert q.group.order == 882
    assert len(q.involution_set) == 21
    assert q.index(q.loop.neutral, 0) == 0
    for x in (0, 1, 100, 881):
        assert q.index(*q.pair(x)) == x
    assert q.group.label(q.iota) == "(0,eps)"


def test_full_associativity_of_frobenius_extension(monkeypatch, frob73_loop):
    """
    Raise the exhaustive limit above 882 so the product table gets the full
    triple check instead of the generator test.
    """
    monkeypatch.setenv("MOCKHYP_FULL_ASSOCIATIVITY_LIMIT", "1000")
    g, loop = frob73_loop
    q = quasidirect_product(loop, group_with_inversion(g, loop))
    assert q.group.order == 882


def test_quasidirect_involutions(frob73_quasidirect):
    q = frob73_quasidirect
    report = verify_quasidirect_involutions(q)
    assert report.passed, report.failures()
    assert report.stats == {"order": 882, "J": 21, "automorphisms": 42}
    assert centralizer(q.group, [q.iota]).order == 42
    assert report.check("regular_action_on_j").detail == "441 pairs"


def test_natural_action(frob73_quasidirect):
    action = natural_action(frob73_quasidirect)
    assert action.images.shape == (882, 21)
    assert action.is_homomorphism
    assert action.is_faithful
    assert action.is_transitive
    report = action.to_report()
    assert report.passed
    assert report.stats == {"degree": 21, "order": 882}


def test_natural_action_of_small_extension():
    q, _ = extend_abelian(cyclic_group(5).group)
    action = natural_action(q)
    assert action.to_report().passed
    # ι = (1, ε) acts as inversion.
    assert np.array_equal(action.images[q.iota], q.loop.inverse)
