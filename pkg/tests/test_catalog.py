import galois
import numpy as np
import pytest

from core.errors import BadParamsError, EvenOrderError, InputError, PreconditionError, UnsupportedOrderError
from core.helper_functions.catalog import (
    DEFAULT_CORPUS,
    NEARFIELD_9,
    NEARFIELD_9_SQUARES,
    ActionGroup,
    build_catalog_entry,
    is_sharply_2_transitive,
    parse_catalog_name,
    permutation_characteristic,
    split_kernel,
    verify_geometry_conditions,
)
from core.helper_functions.finite_group import FiniteGroup, involutions

from tests.test_variables import expected_catalog


# --- NAMES ---
def test_parse_catalog_name():
    assert parse_catalog_name("frob(7, 3)") == ("frob", (7, 3))
    assert parse_catalog_name(" j9 ") == ("j9", ())
    assert parse_catalog_name("agl1(9)") == ("agl1", (9,))
    for bad in ("agl1(", "bogus(3)", "agl1(3,4)", "j9(1)", "Frob(7,3)"):
        with pytest.raises(InputError):
            parse_catalog_name(bad)


def test_canonical_names():
    assert build_catalog_entry("frob( 7 , 3 )").name == "frob(7,3)"
    assert build_catalog_entry("j9").name == "j9"


@pytest.mark.parametrize("name", sorted(expected_catalog))
def test_catalog_orders(name):
    entry = build_catalog_entry(name)
    assert entry.group.order == expected_catalog[name]["order"]
    assert len(involutions(entry.group)) == expected_catalog[name]["involutions"]


def test_default_corpus_is_buildable():
    assert set(DEFAULT_CORPUS) <= set(expected_catalog)


def test_cyclic_family():
    entry = build_catalog_entry("cyclic(5)")
    assert entry.group.order == 5
    assert entry.group.is_abelian
    assert entry.pair is None
    assert not entry.is_sharply_2_transitive


@pytest.mark.parametrize(
    "name, error",
    [
        ("cyclic(0)", BadParamsError),
        ("cyclic_ext(4)", EvenOrderError),
        ("elemab_ext(3,0)", BadParamsError),
        ("elemab_ext(2,2)", EvenOrderError),
        ("elemab_ext(9,1)", BadParamsError),
        ("elemab_ext(15,2)", BadParamsError),
        ("agl1(2)", UnsupportedOrderError),
        ("agl1(15)", UnsupportedOrderError),
        ("frob(9,3)", BadParamsError),
        ("frob(7,2)", BadParamsError),
        ("frob(7,5)", BadParamsError),
    ],
)
def test_bad_parameters(name, error):
    with pytest.raises(error):
        build_catalog_entry(name)


# --- SHARPLY 2-TRANSITIVE GROUPS ---
@pytest.mark.parametrize("name, char", [("agl1(3)", 3), ("agl1(5)", 5), ("agl1(7)", 7), ("agl1(9)", 3), ("j9", 3)])
def test_sharply_2_transitive_characteristic(name, char):
    entry = build_catalog_entry(name)
    assert entry.is_sharply_2_transitive
    assert permutation_characteristic(entry.action) == char


def test_frobenius_action_is_not_sharply_2_transitive():
    entry = build_catalog_entry("frob(7,3)")
    assert not is_sharply_2_transitive(entry.action)
    with pytest.raises(PreconditionError):
        permutation_characteristic(entry.action)


def test_characteristic_two():
    # A4 on four points is AGL1(F_4): its involutions fix no point.
    a4 = ActionGroup(FiniteGroup.from_permutation_generators(4, [[1, 2, 0, 3], [1, 0, 3, 2]]))
    assert is_sharply_2_transitive(a4)
    assert permutation_characteristic(a4) == 2
    assert split_kernel(a4).order == 4
    with pytest.raises(PreconditionError):
        verify_geometry_conditions(a4)


def test_j9_point_stabilizer_is_quaternion():
    action = build_catalog_entry("j9").action
    stabilizer = action.stabilizer(0)
    assert stabilizer.order == 8
    assert not stabilizer.is_abelian
    assert len([x for x in stabilizer.members if action.group.element_orders[x] == 2]) == 1


def test_nearfield_table_against_gf9():
    """
    x∘y = xy for square y and x^3·y otherwise, computed in GF(9) = F_3[i].
    """
    field = galois.GF(9, irreducible_poly="x^2 + 1")
    table = np.asarray(NEARFIELD_9)
    for x in range(9):
        for y in range(1, 9):
            fx, fy = field(x), field(y)
            expected = fx * fy if y in NEARFIELD_9_SQUARES else fx ** 3 * fy
            assert table[x, y] == int(expected)
    assert sorted({int(field(y) ** 2) for y in range(1, 9)}) == list(NEARFIELD_9_SQUARES)


@pytest.mark.parametrize("name, kernel_order", [("agl1(5)", 5), ("agl1(9)", 9), ("j9", 9)])
def test_split_kernel(name, kernel_order):
    kernel = split_kernel(build_catalog_entry(name).action)
    assert kernel is not None
    assert kernel.order == kernel_order
    assert kernel.is_abelian


# --- GEOMETRY CONDITIONS ---
@pytest.mark.parametrize("name", ["agl1(5)", "agl1(7)", "agl1(9)", "j9"])
def test_geometry_conditions_hold(name):
    entry = build_catalog_entry(name)
    report = verify_geometry_conditions(entry.action)
    assert report.passed, report.failures()
    assert report.check("conditions_agree").passed
    assert report.check("line_formula").passed
    assert report.check("neumann_biconditional").passed
    assert report.check("mhrs_complete_space_single_line").passed


def test_geometry_condition_stats():
    report = verify_geometry_conditions(build_catalog_entry("agl1(5)").action)
    stats = report.stats
    assert (stats["order"], stats["degree"], stats["characteristic"], stats["J"]) == (20, 5, 5, 5)
    assert stats["mhrs_Q"] == 5
