from itertools import combinations

import pytest

from core.errors import (
    LemmaViolationError,
    MidpointNotUniqueError,
    NoMidpointError,
    NotClosedError,
    NotInClassError,
    PreconditionError,
)
from core.helper_functions.catalog import build_catalog_entry
from core.helper_functions.finite_group import FiniteGroup, involutions
from core.helper_functions.frobenius import extend_degenerate
from core.helper_functions.geometry import (
    Geometry,
    complete_geometry,
    involution_class,
    is_projective_plane,
    line_closure,
    line_square,
    line_through,
    lines_inside,
    midpoint,
    point_products,
    splitting_suite,
    translations,
    verify_line_lemmas,
    verify_mhrs,
    verify_partial_mhrs,
)

from tests.test_variables import S3_TABLE


@pytest.fixture(scope="module")
def s3_geometry() -> Geometry:
    return complete_geometry(FiniteGroup.from_cayley_table(S3_TABLE))


@pytest.fixture(scope="module")
def frob73_extension():
    return extend_degenerate(build_catalog_entry("frob(7,3)").pair)


# --- CONSTRUCTION ---
def test_s3_complete_geometry_is_one_line(s3_geometry):
    assert len(s3_geometry.points) == 3
    assert s3_geometry.complete
    assert s3_geometry.sorted_lines == [s3_geometry.points]
    assert s3_geometry.to_json_dict() == {"Q": [1, 2, 5], "lines": [[1, 2, 5]]}


def test_involution_class_errors():
    odd = build_catalog_entry("frob(7,3)").group
    with pytest.raises(PreconditionError):
        involution_class(odd)
    s3 = FiniteGroup.from_cayley_table(S3_TABLE)
    with pytest.raises(NotInClassError):
        involution_class(s3, 3)


def test_geometry_rejects_bad_input():
    s3 = FiniteGroup.from_cayley_table(S3_TABLE)
    with pytest.raises(PreconditionError):
        Geometry(parent=s3, points=(1, 2), lines=frozenset())
    with pytest.raises(NotInClassError):
        Geometry(parent=s3, points=(1, 2, 5), lines=frozenset({(1, 3)}))
    with pytest.raises(PreconditionError):
        Geometry(parent=s3, points=(1, 2, 5), lines=frozenset({(1,)}))


# --- POINTS AND LINES ---
def test_lines_and_midpoints_in_s3(s3_geometry):
    g = s3_geometry.parent
    for i, j in combinations(s3_geometry.points, 2):
        assert line_through(s3_geometry, i, j) == (1, 2, 5)
        k = midpoint(s3_geometry, i, j)
        assert g.conjugate(i, k) == j
    assert midpoint(s3_geometry, 1, 1) == 1
    with pytest.raises(PreconditionError):
        line_through(s3_geometry, 1, 1)
    with pytest.raises(NotInClassError):
        midpoint(s3_geometry, 1, 3)


def test_midpoint_errors_in_dihedral_group():
    # D4 on the square: the reflection class {s, sr^2} consists of commuting involutions.
    d4 = FiniteGroup.from_permutation_generators(4, [[1, 2, 3, 0], [0, 3, 2, 1]])
    s = d4.index_of_permutation([0, 3, 2, 1])
    geo = complete_geometry(d4, s)
    assert len(geo.points) == 2
    other = next(p for p in geo.points if p != s)
    with pytest.raises(MidpointNotUniqueError) as exc_info:
        midpoint(geo, s, s)
    assert exc_info.value.witness[:2] == [s, s]
    with pytest.raises(NoMidpointError):
        midpoint(geo, s, other)
    report = verify_partial_mhrs(geo)
    assert not report.check("axiom_b_unique_midpoints").passed
    assert "internal_axiom_c_forms_agree" not in [check.name for check in report.checks]


def test_line_square_and_translations(s3_geometry):
    g = s3_geometry.parent
    rotations = tuple(x for x in range(6) if g.element_orders[x] in (1, 3))
    assert line_square(s3_geometry, (1, 2, 5)) == rotations
    with pytest.raises(LemmaViolationError):
        line_square(s3_geometry, (1, 2))
    assert translations(s3_geometry) == rotations
    assert point_products(s3_geometry) == rotations


# --- AXIOMS ---
@pytest.mark.parametrize("name", ["cyclic_ext(3)", "elemab_ext(3,2)", "agl1(5)", "agl1(7)", "agl1(9)", "j9"])
def test_complete_spaces_pass(name):
    geo = complete_geometry(build_catalog_entry(name).group)
    report = verify_mhrs(geo)
    assert report.passed, report.failures()
    assert report.check("complete_space_single_line").passed
    assert len(geo.lines) == 1
    lemmas = verify_line_lemmas(geo)
    assert lemmas.passed, lemmas.failures()


def test_missing_conjugate_line_is_reported(s3_geometry):
    partial = Geometry(parent=s3_geometry.parent, points=s3_geometry.points, lines=frozenset({(1, 2)}))
    report = verify_partial_mhrs(partial)
    assert not report.check("lines_invariant").passed
    assert not report.check("axiom_a_lines_determined").passed
    assert report.check("axiom_b_unique_midpoints").passed


def test_frobenius_extension_is_partial_space(frob73_extension):
    geo = frob73_extension.geometry
    report = verify_partial_mhrs(geo)
    assert report.passed, report.failures()
    assert report.stats["Q"] == 21
    assert report.stats["line_sizes"] == [3]


def test_frobenius_extension_translations(frob73_extension):
    """
    S is a proper subset of Q^2 on the partial space, of size 1 + 2·|Λ|.
    """
    geo = frob73_extension.geometry
    s = translations(geo)
    assert 0 in s
    assert set(s) < set(point_products(geo))
    # The line squares partition S \ {1}; each contributes |λ| - 1 = 2 elements.
    assert len(s) == 1 + 2 * len(geo.lines)
    assert len(s) == 99


def test_frobenius_extension_line_closure(frob73_extension):
    geo = frob73_extension.geometry
    i = geo.points[0]
    line = geo.lines_through(i)[0]
    j = next(p for p in line if p != i)
    k = next(p for p in geo.points if p not in line_through(geo, i, j))
    closure = line_closure(geo, (i, j, k))
    assert {i, j, k} < set(closure)
    assert lines_inside(geo, closure)
    with pytest.raises(NotClosedError):
        lines_inside(geo, (i, j, k))
    with pytest.raises(PreconditionError):
        line_closure(geo, (i,))


def test_lemmas_on_frobenius_extension(frob73_extension):
    report = verify_line_lemmas(frob73_extension.geometry)
    assert report.passed, report.failures()


# --- SPLITTING SUITE ---
@pytest.mark.parametrize("name, iq", [("agl1(5)", 5), ("j9", 9), ("cyclic_ext(3)", 3), ("elemab_ext(3,2)", 9)])
def test_splitting_conditions_hold(name, iq):
    """
    All eight splitting conditions hold (and so agree) on split sharply
    2-transitive groups and abelian inversion extensions.
    """
    report = splitting_suite(complete_geometry(build_catalog_entry(name).group))
    assert report.passed, report.failures()
    assert report.stats["iQ"] == iq


def test_splitting_suite_needs_two_points():
    klein = FiniteGroup.from_cayley_table([[0, 1, 2, 3], [1, 0, 3, 2], [2, 3, 0, 1], [3, 2, 1, 0]])
    with pytest.raises(PreconditionError):
        splitting_suite(complete_geometry(klein, 1))


def test_projective_plane_on_single_line(s3_geometry):
    assert is_projective_plane(s3_geometry, s3_geometry.points)
    assert involutions(s3_geometry.parent) == s3_geometry.points
