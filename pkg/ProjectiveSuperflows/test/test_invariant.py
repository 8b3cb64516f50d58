from __future__ import annotations

from pytest import mark, raises

from ..catalog import build_superflow
from ..consts import GroupFamily, SuperflowName, VerdictReason
from ..group import SWAP_XY, GroupSpec, MatrixGroup, build_catalog_group, rotation_z
from ..invariant import (AnsatzField, NotRelativeInvariantError, SuperflowVerdict, character_of, conjugation_action,
                         extending_symmetry, galois_swap_conjugate, relative_invariants, solve_invariant_space,
                         superflow_verdict, verify_symmetric_extension)
from ..matrix import ExactMatrix
from ..poly import XYZ, MultiPoly, RationalVF

x, y, z = MultiPoly.generators(XYZ)
ONE = MultiPoly.constant(1, XYZ)
ZERO = MultiPoly.zero(XYZ)
W = x * x + y * y + z * z


def group(text: str) -> MatrixGroup:
    return build_catalog_group(GroupSpec.parse(text))


def test_character_of() -> None:
    assert character_of(W, rotation_z(1, 5)) == 1
    assert character_of(x, ExactMatrix.diagonal([-1, 1, 1])) == -1
    with raises(NotRelativeInvariantError):
        character_of(x, SWAP_XY)
    with raises(ValueError):
        character_of(x + y * y, SWAP_XY)


def test_conjugation_action() -> None:
    """A rotation about the z-axis fixes the rotation field, and the identity fixes everything."""
    rotation = RationalVF.polynomial((-y, x, ZERO))
    assert conjugation_action(rotation, rotation_z(1, 7)).equivalent(rotation)
    v = RationalVF((x * y * z, y * y * x, z ** 3), x)
    assert conjugation_action(v, ExactMatrix.identity(3)).equivalent(v)
    flipped = conjugation_action(RationalVF.polynomial((x * x, ZERO, ZERO)), ExactMatrix.diagonal([-1, 1, 1]))
    assert flipped.equivalent(RationalVF.polynomial((-x * x, ZERO, ZERO)))
    with raises(ValueError):
        conjugation_action(rotation, ExactMatrix.identity(2))


def test_ansatz_validation() -> None:
    assert len(AnsatzField.general(ONE).basis) == 18
    assert len(AnsatzField.general(W).basis) == 45
    with raises(ValueError):
        AnsatzField.general(x + ONE)
    with raises(ValueError):
        AnsatzField(ONE, [(x * x, ZERO, ZERO)], ["a", "b"])
    with raises(ValueError):
        AnsatzField(ONE, [(x, ZERO, ZERO)], ["a"])


def test_relative_invariants_of_a_reflection() -> None:
    """Under z ↦ −z the linear forms split into the even plane and the odd axis."""
    spaces = relative_invariants(group("mixed-cyclic:1"), 1)
    by_character = {s.character: s.dimension for s in spaces}
    assert by_character == {(1, ): 2, (-1, ): 1}


def test_invariant_space_of_rotations() -> None:
    space = solve_invariant_space(group("cyclic:4"), ONE)
    assert space.dimension > 0
    for v in space.basis:
        assert v.is_two_homogenic()
        for g in group("cyclic:4"):
            assert conjugation_action(v, g).equivalent(v)
    assert space.to_json()["dimension"] == space.dimension
    with raises(ValueError):
        solve_invariant_space(group("cyclic:4"), ZERO)
    with raises(NotRelativeInvariantError):
        solve_invariant_space(group("cyclic:4"), x)


def test_trivial_group_verdict() -> None:
    """Every quadratic field is invariant under the trivial group, so the family is 18-dimensional."""
    verdict = superflow_verdict(group("cyclic:1"), 0)
    assert not verdict.exists
    assert verdict.reason is VerdictReason.FAMILY_DIMENSION_GT_1
    assert verdict.degree == 0
    assert verdict.family_dimension == 18
    assert verdict.to_json()["reason"] == "family_dimension_gt_1"


def test_minus_identity_verdict() -> None:
    verdict = superflow_verdict(group("cyclic-z2:2"), 4)
    assert verdict.reason is VerdictReason.CONTAINS_MINUS_I
    assert verdict.witness is None
    assert verdict.family_dimension == 0
    with raises(ValueError):
        superflow_verdict(group("cyclic:1"), -1)


def test_verdict_consistency() -> None:
    with raises(ValueError):
        SuperflowVerdict(True, VerdictReason.ZERO_ONLY)
    with raises(ValueError):
        SuperflowVerdict(False, VerdictReason.UNIQUE_FIELD)


def test_mixed_cyclic_family() -> None:
    assert superflow_verdict(group("mixed-cyclic:1"), 2).reason is VerdictReason.FAMILY_DIMENSION_GT_1


def test_prism_has_a_unique_polynomial_field() -> None:
    verdict = superflow_verdict(group("mixed-dihedral:3"), 1)
    assert verdict.exists
    assert verdict.reason is VerdictReason.UNIQUE_FIELD
    assert verdict.degree == 0
    assert verdict.witness is not None and verdict.witness.is_two_homogenic()
    assert verdict.to_json()["exists"] is True


def test_smallest_antiprism_family() -> None:
    verdict = superflow_verdict(group("mixed-dihedral:2"), 0)
    assert (verdict.degree, verdict.family_dimension) == (0, 2)


@mark.slow
def test_icosahedral_space_over_w_squared() -> None:
    """The icosahedral fields over W² form a line."""
    space = solve_invariant_space(build_catalog_group(GroupSpec(GroupFamily.ICOSAHEDRAL)), W * W)
    assert space.dimension == 1
    assert space.character == (1, 1, 1)


@mark.slow
def test_symmetric_extension() -> None:
    report = verify_symmetric_extension(3)
    assert report.group_order == 48
    assert report.passed
    assert report.to_json()["passed"]
    with raises(ValueError):
        verify_symmetric_extension(2)


def test_extending_symmetry() -> None:
    """The tetrahedral field is fixed by all 24 signed permutations with sign product +1 and by no other one."""
    s = build_superflow(SuperflowName.TETRAHEDRAL)
    assert extending_symmetry(s.symmetry_group, s.field) is None
    trivial = group("cyclic:1")
    extra = extending_symmetry(trivial, s.field)
    assert extra is not None
    assert extra not in trivial
    assert conjugation_action(s.field, extra).equivalent(s.field)


def test_galois_swap_fixes_icosahedral_field() -> None:
    v = build_superflow(SuperflowName.ICOSAHEDRAL).field
    assert galois_swap_conjugate(v).equivalent(v)
    assert not v.conjugate().equivalent(v)
