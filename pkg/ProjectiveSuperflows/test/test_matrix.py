from __future__ import annotations

from fractions import Fraction

import numpy as np
from pytest import raises

from ..field import PHI, CyclotomicNumber, GoldenNumber
from ..matrix import ExactMatrix, SingularMatrixError, nullspace


def test_shape_and_carrier() -> None:
    with raises(ValueError):
        ExactMatrix([[1, 2], [3]])
    assert ExactMatrix([[1, PHI], [0, 1]]).is_real()
    assert not ExactMatrix([[CyclotomicNumber.imaginary_unit(), 0], [0, 1]]).is_real()


def test_inverse_and_determinant() -> None:
    """Exact elimination over the golden field."""
    m = ExactMatrix([[PHI, 1], [1, PHI]])
    assert m.determinant() == PHI
    assert (m @ m.inverse()).is_identity()
    assert (m.inverse() @ m).is_identity()
    assert ExactMatrix([[2, 0], [0, 4]]).inverse() == ExactMatrix.diagonal([Fraction(1, 2), Fraction(1, 4)])
    assert ExactMatrix([[0, 1], [1, 0]]).determinant() == -1


def test_singular() -> None:
    m = ExactMatrix([[1, 2], [2, 4]])
    assert m.determinant() == 0
    with raises(SingularMatrixError):
        m.inverse()
    with raises(ZeroDivisionError):
        m.inverse()


def test_permutation_matrices() -> None:
    """e_j goes to signs[j]·e_perm[j]."""
    m = ExactMatrix.permutation([1, 2, 0], [1, -1, 1])
    assert m @ (1, 0, 0) == (0, 1, 0)
    assert m @ (0, 1, 0) == (0, 0, -1)
    assert m @ (0, 0, 1) == (1, 0, 0)
    assert m.is_orthogonal()
    assert m.determinant() == -1
    assert ExactMatrix.permutation([0, 1, 2]).is_identity()


def test_block_diagonal() -> None:
    rot = ExactMatrix([[0, -1], [1, 0]])
    m = ExactMatrix.block_diagonal(rot, ExactMatrix.identity(1))
    assert m == ExactMatrix([[0, -1, 0], [1, 0, 0], [0, 0, 1]])
    assert m.is_orthogonal()
    assert m.transpose() == m.inverse()


def test_numeric_export() -> None:
    m = ExactMatrix([[PHI, 0], [0, -1]])
    np.testing.assert_allclose(m.to_numpy(), [[(1 + 5 ** 0.5) / 2, 0], [0, -1]])
    assert m.to_json()[0][0] == [1, 2, 1, 2]
    assert (-m).scale(-1) == m


def test_nullspace() -> None:
    """The free variable is set to one and pivots are solved for."""
    assert nullspace([{0: GoldenNumber(1), 1: GoldenNumber(1)}], 2) == [{1: GoldenNumber(1), 0: GoldenNumber(-1)}]
    assert nullspace([], 2) == [{0: GoldenNumber(1)}, {1: GoldenNumber(1)}]
    assert nullspace([{0: GoldenNumber(1)}, {1: PHI}], 2) == []
    rows = [{0: GoldenNumber(1), 1: PHI, 2: GoldenNumber(1)}, {0: GoldenNumber(2), 1: 2 * PHI, 2: GoldenNumber(2)}]
    basis = nullspace(rows, 3)
    assert len(basis) == 2
    for vec in basis:
        assert sum((rows[0].get(c, GoldenNumber(0)) * v for c, v in vec.items()), GoldenNumber(0)) == 0


def test_cyclotomic_kernel_and_inverse() -> None:
    """Kernels and inverses over Q(zeta_N) come out in the carrier of the entries."""
    i = CyclotomicNumber.imaginary_unit()
    basis = nullspace([{0: i, 1: GoldenNumber(1)}, {0: GoldenNumber(1), 1: -i}], 2)
    assert basis == [{0: i, 1: GoldenNumber(1)}]
    rotation = ExactMatrix([[0, -i], [i, 0]])
    assert rotation.determinant() == -1
    assert rotation.inverse() == rotation
    mixed = nullspace([{0: PHI, 1: i}], 2)
    assert len(mixed) == 1
    assert PHI * mixed[0][0] + i * mixed[0][1] == 0
    assert mixed[0][1] == 1
