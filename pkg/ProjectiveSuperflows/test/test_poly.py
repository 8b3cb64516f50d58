from __future__ import annotations

from fractions import Fraction

import numpy as np
from pytest import raises

from ..field import GOLDEN_FIELD, PHI, CyclotomicNumber, GoldenNumber, cyclotomic_field
from ..matrix import ExactMatrix
from ..poly import (XYZ, MultiPoly, RationalFunction, RationalVF, lie_derivative, monomials, poly_compose_linear,
                    polynomial_ring, vf_curl, vf_divergence)

x, y, z = MultiPoly.generators(XYZ)
ONE = MultiPoly.constant(1, XYZ)


def test_structural_equality() -> None:
    """Expanded forms decide equality, and zero terms never survive."""
    assert (x + y) ** 2 == x * x + 2 * x * y + y * y
    assert (x - x).is_zero()
    assert not (x - x)
    assert x * 0 == MultiPoly.zero(XYZ)
    assert MultiPoly.constant(3, XYZ) == 3
    assert (x + y).degree == 1
    assert MultiPoly.zero(XYZ).degree == -1


def test_bad_exponents() -> None:
    with raises(ValueError):
        MultiPoly(XYZ, {(1, 0): 1})
    with raises(ValueError):
        MultiPoly(XYZ, {(-1, 0, 0): 1})
    with raises(ValueError):
        MultiPoly.variable('w', XYZ)
    with raises(ValueError):
        x + MultiPoly.variable('a', ('a', ))


def test_homogeneity() -> None:
    assert (x * y + z * z).is_homogeneous(2)
    assert not (x * y + z).is_homogeneous()
    assert (x * y + z).homogeneous_degree() is None
    assert MultiPoly.zero(XYZ).is_homogeneous()


def test_derivatives() -> None:
    p = x ** 3 * y + PHI * y * z
    assert p.diff('x') == 3 * x ** 2 * y
    assert p.diff(1) == x ** 3 + PHI * z
    assert p.gradient() == (3 * x ** 2 * y, x ** 3 + PHI * z, PHI * y)


def test_substitute() -> None:
    """Substitution is composition, here the cyclic shift and a linear map."""
    p = x * x * y
    assert p.substitute((y, z, x)) == y * y * z
    assert p.substitute((x + y, ONE, ONE)) == (x + y) ** 2
    assert p.compose_linear([[0, 1, 0], [1, 0, 0], [0, 0, 1]]) == y * y * x
    with raises(ValueError):
        p.substitute((x, y))


def test_compose_linear_round_trip() -> None:
    m = ExactMatrix([[1, PHI, 0], [0, 1, Fraction(1, 2)], [2, 0, -1]])
    for p in (x * x * y - z ** 3, (x + PHI * y) * z, ONE):
        assert poly_compose_linear(poly_compose_linear(p, m), m.inverse()) == p
    assert poly_compose_linear(x, m) == x + PHI * y


def test_homogenize() -> None:
    (t, ) = MultiPoly.generators(('t', ))
    p = t ** 2 + 3 * t + 1
    assert p.homogenize('u') == MultiPoly(('t', 'u'), {(2, 0): 1, (1, 1): 3, (0, 2): 1})
    assert p.homogenize('u', 3).is_homogeneous(3)
    with raises(ValueError):
        p.homogenize('u', 1)


def test_exact_divide() -> None:
    assert (x * x - y * y).exact_divide(x - y) == x + y
    assert (x * x + y * y).exact_divide(x - y) is None
    assert (PHI * x * y).exact_divide(x) == PHI * y
    with raises(ZeroDivisionError):
        x.exact_divide(MultiPoly.zero(XYZ))


def test_ratio_and_monic() -> None:
    assert (PHI * (x + y)).ratio_to(x + y) == PHI
    assert (x + 2 * y).ratio_to(x + y) is None
    assert (PHI * x + PHI * y).monic() == x + y


def test_exact_evaluation() -> None:
    w = x * x + y * y + z * z
    assert w.evaluate((PHI, 1, 0)) == PHI * PHI + 1
    i = CyclotomicNumber.imaginary_unit()
    assert w.evaluate((i, 1, 0)) == 0


def test_numeric_evaluation_is_vectorized() -> None:
    w = x * x + y * y + z * z
    points = np.arange(24, dtype=float).reshape(2, 4, 3)
    values = w.evaluate_numeric(points)
    assert values.shape == (2, 4)
    np.testing.assert_allclose(values, np.sum(points ** 2, axis=-1))
    with raises(ValueError):
        w.evaluate_numeric(np.zeros((4, 2)))


def test_json_encoding() -> None:
    """Golden terms use [exponents..., a_num, a_den, b_num, b_den]; cyclotomic ones record their field."""
    p = PHI * x * y + Fraction(1, 3) * z * z
    data = p.to_json()
    assert data == {"variables": ["x", "y", "z"], "terms": [[1, 1, 0, 1, 2, 1, 2], [0, 0, 2, 1, 3, 0, 1]]}
    assert MultiPoly.from_json(data) == p
    q = CyclotomicNumber.imaginary_unit() * x
    assert q.to_json()["field"] == 4
    assert MultiPoly.from_json(q.to_json()) == q


def test_sympy_rings() -> None:
    """Golden polynomials live over QQ<sqrt(5)>, and mixing in i moves both operands to Q(zeta_20)."""
    p = PHI * x * y + z
    assert p.order is None
    assert p.poly.ring == polynomial_ring(XYZ)
    assert p.poly.ring.domain == GOLDEN_FIELD
    q = p * CyclotomicNumber.imaginary_unit()
    assert q.order == 20
    assert q.poly.ring.domain == cyclotomic_field(20)
    assert q * CyclotomicNumber.imaginary_unit() == -p
    assert (q - q).order == 20 and not (q - q)
    assert (x * x - PHI * PHI * y * y).exact_divide(x + PHI * y) == x - PHI * y


def test_conjugate() -> None:
    assert (PHI * x).conjugate() == (1 - PHI) * x


def test_rational_function_reduce() -> None:
    """Common monomials and exact quotients cancel; what is left is scaled to a monic denominator."""
    assert RationalFunction(x * x * y, x * y).reduce() == RationalFunction.of(x)
    reduced = RationalFunction(x * x - y * y, x - y).reduce()
    assert reduced.denominator == ONE
    assert reduced.numerator == x + y
    kept = RationalFunction(2 * x, 4 * (x + y)).reduce()
    assert kept.denominator == x + y
    assert kept.numerator == x.scale(Fraction(1, 2))
    with raises(ZeroDivisionError):
        RationalFunction(x, MultiPoly.zero(XYZ))


def test_rational_function_calculus() -> None:
    f = RationalFunction(x, y)
    assert f.diff('y') == RationalFunction(-x, y * y)
    assert (f + f) == RationalFunction(2 * x, y)
    assert (f - f).is_zero()
    assert f.evaluate((PHI, 2, 0)) == PHI / 2


def test_vector_field_basics() -> None:
    v = RationalVF((x * x, y * y, z * z), ONE)
    assert v.is_two_homogenic()
    assert not RationalVF.polynomial((x, y, z)).is_two_homogenic()
    assert v.scale(PHI).ratio_to(v) == PHI
    assert v.scale(2).normalized() == v
    assert RationalVF((x ** 3, x * y * y, x * z * z), x).equivalent(v)
    assert not RationalVF((x ** 3, y ** 3, z ** 3), x).equivalent(v)
    assert RationalVF((x ** 3, x * y * y, x * z * z), x) != v
    with raises(ZeroDivisionError):
        RationalVF((x, y, z), MultiPoly.zero(XYZ))
    with raises(ValueError):
        RationalVF((x, MultiPoly.variable('a', ('a', ))), ONE)


def test_divergence_curl_and_lie() -> None:
    """A rotation field is divergence free with constant curl, and W is one of its integrals."""
    rotation = RationalVF.polynomial((-y, x, MultiPoly.zero(XYZ)))
    assert vf_divergence(rotation).is_zero()
    curl = vf_curl(rotation)
    assert curl[0].is_zero() and curl[1].is_zero()
    assert curl[2] == RationalFunction.of(MultiPoly.constant(2, XYZ))
    assert lie_derivative(rotation, x * x + y * y + z * z).is_zero()
    assert not lie_derivative(rotation, x).is_zero()
    gradient = RationalVF.polynomial((x, y, z))
    assert all(c.is_zero() for c in vf_curl(gradient))


def test_monomials() -> None:
    assert len(monomials(2, 3)) == 6
    assert monomials(2, 3)[0] == (2, 0, 0)
    assert monomials(2, 3)[-1] == (0, 0, 2)
    assert len(monomials(6, 3)) == 28
    assert GoldenNumber(len(monomials(1, 4))) == 4
