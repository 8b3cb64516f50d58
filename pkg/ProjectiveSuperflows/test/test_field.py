from __future__ import annotations

from fractions import Fraction
from math import cos, isclose, pi, sqrt

from pytest import mark, raises

from ..field import (GOLDEN_FIELD, ONE, PHI, SQRT5, ZERO, CyclotomicNumber, GoldenNumber, as_scalar, cyclotomic_field,
                     cyclotomic_polynomial, from_domain, golden_arith, golden_conjugate, roots_of_unity, scalar_domain,
                     to_domain, totient, unify)
from ..util import seeded_rng


def test_golden_identities() -> None:
    """φ² = φ + 1, φφ̄ = −1, and 1/φ = φ − 1 hold exactly."""
    assert PHI * PHI == PHI + 1
    assert PHI * PHI.conjugate() == -1
    assert PHI.norm() == -1
    assert PHI.inv() == PHI - 1
    assert PHI ** 3 == GoldenNumber(2, 1)
    assert PHI ** -2 == 2 - PHI
    assert SQRT5 * SQRT5 == 5


def test_golden_normal_form() -> None:
    """Equal values have one representation, and rationals hash like Fractions."""
    assert GoldenNumber(Fraction(2, 4), Fraction(3, 6)) == PHI
    assert GoldenNumber(Fraction(1, 3)) == Fraction(1, 3)
    assert hash(GoldenNumber(Fraction(1, 3))) == hash(Fraction(1, 3))
    assert PHI.to_json() == [1, 2, 1, 2]
    assert GoldenNumber.from_json([1, 2, 1, 2]) == PHI
    assert str(PHI) == "1/2+1/2√5"
    assert not ZERO
    assert ONE


@mark.parametrize("value,sign", [
    (GoldenNumber(1, 1), 1),
    (GoldenNumber(-3, 1), -1),
    (GoldenNumber(3, -1), 1),
    (GoldenNumber(-2, 1), 1),
    (GoldenNumber(0, -1), -1),
    (GoldenNumber(0), 0),
])
def test_golden_sign(value: GoldenNumber, sign: int) -> None:
    """The exact sign agrees with the float value."""
    assert value.sign() == sign
    assert (float(value) > 0) - (float(value) < 0) == sign


def test_golden_ordering() -> None:
    assert GoldenNumber(2) < PHI * PHI
    assert -PHI ** 3 / 5 < Fraction(-1, 20)
    assert not PHI < 1
    assert sorted([PHI, GoldenNumber(1), SQRT5 - 1]) == [GoldenNumber(1), SQRT5 - 1, PHI]


def test_golden_division_by_zero() -> None:
    with raises(ZeroDivisionError):
        ZERO.inv()
    with raises(ZeroDivisionError):
        PHI / 0
    with raises(ValueError):
        PHI.as_fraction()


def test_golden_conjugate_is_a_homomorphism() -> None:
    rng = seeded_rng("golden-conjugate")
    for _ in range(50):
        nums, dens = rng.integers(-20, 21, size=4), rng.integers(1, 10, size=4)
        a, b, c, d = (Fraction(int(n), int(m)) for n, m in zip(nums, dens))
        u, v = GoldenNumber(a, b), GoldenNumber(c, d)
        assert golden_conjugate(u * v) == golden_conjugate(u) * golden_conjugate(v)
        assert golden_conjugate(u + v) == golden_conjugate(u) + golden_conjugate(v)
        assert golden_conjugate(golden_conjugate(u)) == u
    assert golden_conjugate(PHI) == 1 - PHI
    assert golden_conjugate(GoldenNumber(Fraction(2, 3))) == Fraction(2, 3)


def test_golden_arith() -> None:
    """The dispatcher runs each operation and refuses bad calls."""
    assert golden_arith('add', PHI, ONE) == PHI + 1
    assert golden_arith('mul', PHI, PHI) == PHI + 1
    assert golden_arith('inv', PHI) == PHI - 1
    assert golden_arith('neg', PHI) == -PHI
    with raises(ValueError):
        golden_arith('add', PHI)
    with raises(ValueError):
        golden_arith('pow', PHI, PHI)
    with raises(ZeroDivisionError):
        golden_arith('inv', ZERO)


def test_cyclotomic_polynomials() -> None:
    assert cyclotomic_polynomial(1) == (-1, 1)
    assert cyclotomic_polynomial(4) == (1, 0, 1)
    assert cyclotomic_polynomial(5) == (1, 1, 1, 1, 1)
    assert totient(12) == 4
    assert totient(20) == 8


def test_cyclotomic_arithmetic() -> None:
    """i² = −1, √2² = 2, √3² = 3, and inverses multiply back to one."""
    i = CyclotomicNumber.imaginary_unit(4)
    assert i * i == -1
    assert CyclotomicNumber.sqrt2() ** 2 == 2
    assert CyclotomicNumber.sqrt3() ** 2 == 3
    z = CyclotomicNumber.root_of_unity(5) + 1
    assert z * z.inv() == 1
    assert z / z == 1
    assert CyclotomicNumber.root_of_unity(7) ** 7 == 1
    with raises(ZeroDivisionError):
        CyclotomicNumber.rational(0, 5).inv()


def test_cyclotomic_trigonometry() -> None:
    """cos and sin of rational multiples of 2π land on the right complex numbers."""
    for k, m in [(1, 3), (1, 5), (2, 5), (1, 8), (3, 10)]:
        c = CyclotomicNumber.cos_2pi(k, m)
        s = CyclotomicNumber.sin_2pi(k, m)
        assert isclose(float(c), cos(2 * pi * k / m), abs_tol=1e-12)
        assert c * c + s * s == 1
    assert CyclotomicNumber.cos_2pi(1, 5) == CyclotomicNumber.from_golden((PHI - 1) / 2, 20)


def test_cyclotomic_golden_embedding() -> None:
    assert isclose(float(CyclotomicNumber.from_golden(PHI, 5)), (1 + sqrt(5)) / 2)
    assert CyclotomicNumber.from_golden(SQRT5, 5) ** 2 == 5
    with raises(ValueError):
        CyclotomicNumber.from_golden(SQRT5, 4)


def test_cyclotomic_galois_and_conjugation() -> None:
    zeta = CyclotomicNumber.root_of_unity(5)
    assert zeta.galois(2) == CyclotomicNumber.root_of_unity(5, 2)
    assert zeta.complex_conjugate() == CyclotomicNumber.root_of_unity(5, 4)
    assert zeta * zeta.complex_conjugate() == 1
    with raises(ValueError):
        zeta.galois(5)
    with raises(ValueError):
        float(CyclotomicNumber.imaginary_unit())


def test_lift_between_orders() -> None:
    """Values compare equal across orders once lifted to a common field."""
    i4 = CyclotomicNumber.imaginary_unit(4)
    i8 = CyclotomicNumber.imaginary_unit(8)
    assert i4 == i8
    assert i4.lift(8) == i8
    with raises(ValueError):
        i8.lift(12)


def test_unify() -> None:
    """Golden carriers are kept when they suffice, else everything moves to one cyclotomic field."""
    assert all(isinstance(v, GoldenNumber) for v in unify([1, Fraction(1, 2), PHI]))
    mixed = unify([PHI, CyclotomicNumber.imaginary_unit(4)])
    assert all(isinstance(v, CyclotomicNumber) and v.order == 20 for v in mixed)
    assert abs(complex(mixed[1]) - 1j) < 1e-12
    with raises(TypeError):
        as_scalar(0.5)


def test_roots_of_unity() -> None:
    assert roots_of_unity(PHI) == [GoldenNumber(1), GoldenNumber(-1)]
    assert len(roots_of_unity(CyclotomicNumber.root_of_unity(3))) == 6
    assert len(roots_of_unity(CyclotomicNumber.root_of_unity(8))) == 8


def test_sympy_domains() -> None:
    """Both carriers are views of elements of sympy algebraic fields, and move between them exactly."""
    assert scalar_domain(None) is GOLDEN_FIELD
    assert scalar_domain(5) is cyclotomic_field(5)
    i = to_domain(CyclotomicNumber.imaginary_unit(4), 4)
    assert from_domain(i * i, 4) == -1
    phi = to_domain(PHI, None)
    assert from_domain(phi * phi - phi, None) == 1
    lifted = to_domain(PHI, 20)
    assert from_domain(lifted, 20) == PHI
    assert from_domain(to_domain(Fraction(3, 7), 1), 1) == Fraction(3, 7)
    with raises(ValueError):
        cyclotomic_field(0)


def test_cyclotomic_division_agrees_with_the_norm() -> None:
    """Field inversion matches the product of the other Galois conjugates over the norm."""
    z = CyclotomicNumber.root_of_unity(12) + 2
    others = CyclotomicNumber.rational(1, 12)
    for k in (5, 7, 11):
        others = others * z.galois(k)
    norm = z * others
    assert norm.is_rational
    assert z.inv() == others / norm.as_fraction()
    assert CyclotomicNumber.from_json(12, z.to_json()) == z
