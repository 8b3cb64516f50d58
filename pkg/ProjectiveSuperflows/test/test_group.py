from __future__ import annotations

from pytest import mark, raises

from ..consts import GroupFamily, GroupTag
from ..group import (QUARTER_TURN_Z, GroupNotFiniteError, GroupSpec, build_catalog_group, contains_minus_identity,
                     generate_group, rotation_z, signed_permutations)
from ..matrix import ExactMatrix, SingularMatrixError


@mark.parametrize("text,family,parameter,diagonalized", [
    ("icosahedral", GroupFamily.ICOSAHEDRAL, None, False),
    ("mixed-dihedral:4", GroupFamily.MIXED_DIHEDRAL, 4, False),
    ("cyclic:5:diag", GroupFamily.CYCLIC, 5, True),
    (" symmetric-rep:3 ", GroupFamily.SYMMETRIC_REP, 3, False),
])
def test_parse(text: str, family: GroupFamily, parameter: int, diagonalized: bool) -> None:
    spec = GroupSpec.parse(text)
    assert spec == GroupSpec(family, parameter, diagonalized)
    assert GroupSpec.parse(str(spec)) == spec


@mark.parametrize("text", ["cyclic", "icosahedral:3", "icosahedral:diag", "cyclic:2:3", "cyclic:x", "nonsense",
                           "symmetric-rep:1", "cyclic:0"])
def test_parse_errors(text: str) -> None:
    with raises(ValueError):
        GroupSpec.parse(text)


def test_tags() -> None:
    """Odd mixed dihedral groups are prisms and even ones antiprisms."""
    assert GroupSpec.parse("mixed-dihedral:3").tag is GroupTag.PRISM
    assert GroupSpec.parse("mixed-dihedral:4").tag is GroupTag.ANTIPRISM
    assert GroupSpec.parse("icosahedral-z2").tag is GroupTag.PRODUCT_WITH_MINUS_I


@mark.parametrize("text,order", [
    ("cyclic:1", 1),
    ("cyclic:5", 5),
    ("cyclic-z2:3", 6),
    ("mixed-cyclic:2", 4),
    ("dihedral:3", 6),
    ("dihedral-z2:2", 8),
    ("mixed-dihedral-cyclic:4", 8),
    ("tetrahedral", 12),
    ("mixed-tetrahedral", 24),
    ("octahedral", 24),
    ("octahedral-z2", 48),
    ("mixed-dihedral:3", 12),
    ("mixed-dihedral:4", 16),
    ("icosahedral", 60),
    ("symmetric-rep:2", 6),
    ("symmetric-rep:3", 24),
])
def test_catalog_orders(text: str, order: int) -> None:
    """Each catalog group closes at its tabulated order."""
    spec = GroupSpec.parse(text)
    assert spec.expected_order == order
    group = build_catalog_group(spec)
    assert group.order == order
    assert group.is_closed()
    assert group.spec == spec


def test_generate_group_errors() -> None:
    with raises(GroupNotFiniteError):
        generate_group([ExactMatrix.diagonal([2, 1, 1])], cap=10)
    with raises(SingularMatrixError):
        generate_group([ExactMatrix.diagonal([0, 1, 1])])
    with raises(ValueError):
        generate_group([])
    with raises(ValueError):
        generate_group([ExactMatrix.identity(2), ExactMatrix.identity(3)])


def test_minus_identity() -> None:
    assert contains_minus_identity(build_catalog_group(GroupSpec.parse("cyclic-z2:2")))
    assert not contains_minus_identity(build_catalog_group(GroupSpec.parse("mixed-cyclic:2")))
    assert not contains_minus_identity(build_catalog_group(GroupSpec.parse("icosahedral")))


def test_mixed_groups_have_index_two_rotations() -> None:
    group = build_catalog_group(GroupSpec.parse("mixed-tetrahedral"))
    assert len(group.rotation_subgroup()) == 12
    assert group.has_index_two_rotation_subgroup()
    assert group.is_orthogonal()
    assert not build_catalog_group(GroupSpec.parse("tetrahedral")).has_index_two_rotation_subgroup()


def test_diagonalized_rotations() -> None:
    """Conjugating by τ makes rotations about the z-axis diagonal."""
    group = build_catalog_group(GroupSpec.parse("cyclic:4:diag"))
    assert group.order == 4
    assert group.conjugator is not None
    for g in group:
        assert all(not g[i, j] for i in range(3) for j in range(3) if i != j)
        assert g[2, 2] == 1
    assert group.is_unitary()


def test_octahedral_is_rotational_signed_permutations() -> None:
    perms = signed_permutations(3)
    assert len(perms) == 48
    assert all(p.is_orthogonal() for p in perms)
    rotations = [p for p in perms if p.determinant() == 1]
    assert generate_group(rotations) == build_catalog_group(GroupSpec.parse("octahedral"))


def test_rotation_z() -> None:
    assert rotation_z(1, 4) == QUARTER_TURN_Z
    assert rotation_z(1, 5).is_orthogonal()
    assert rotation_z(1, 1).is_identity()
    assert (rotation_z(1, 3) @ rotation_z(1, 3) @ rotation_z(1, 3)).is_identity()


def test_determinant_census_and_json() -> None:
    group = build_catalog_group(GroupSpec.parse("mixed-tetrahedral"))
    assert group.determinants() == {"1": 12, "-1": 12}
    assert build_catalog_group(GroupSpec.parse("octahedral")).determinants() == {"1": 24}
    data = group.to_json()
    assert data["order"] == 24
    assert data["spec"] == "mixed-tetrahedral"
    assert len(data["elements"]) == 24
