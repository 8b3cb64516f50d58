"""Exact scalars: the golden field ℚ(√5) and the cyclotomic fields ℚ(ζ_N).

All symbolic work runs over :class:`GoldenNumber`. Groups whose matrices need √2, √3, i or a general
cos(2π/d) use :class:`CyclotomicNumber` instead; the two carriers interoperate, so a polynomial with golden
coefficients can be composed with a cyclotomic matrix as long as √5 lives in the target field.

Both types wrap an element of a sympy algebraic field (``QQ.algebraic_field``), which does the arithmetic and
the inversion. The wrappers add what the catalog needs on top: mixing the two carriers, an exact ordering of
golden numbers, Fraction-compatible hashing and a stable JSON encoding.
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache, total_ordering
from math import cos, gcd, pi, sin, sqrt
from typing import TYPE_CHECKING, Union

import sympy as sp
from sympy import ilcm
from sympy.polys.domains import QQ

if TYPE_CHECKING:  # pragma: no cover
    from typing import Any, Iterable, List, Optional, Sequence, Tuple

    from sympy.polys.domains.domain import Domain

    Rational = Union[int, Fraction]

SQRT5_FLOAT = sqrt(5)
GOLDEN_FIELD = QQ.algebraic_field(sp.sqrt(5))


def _as_fraction(value: Rational) -> Fraction:
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    raise TypeError(f"Expected a rational number, got {value!r}")


def _qq(value: Rational) -> Any:
    f = _as_fraction(value)
    return QQ(f.numerator, f.denominator)


def _fraction(value: Any) -> Fraction:
    return Fraction(int(value.numerator), int(value.denominator))


@total_ordering
class GoldenNumber:
    """An exact element (a + b√5) of ℚ(√5), with rational a and b."""

    __slots__ = ('_rep', )

    _rep: Any

    def __init__(self, a: Rational = 0, b: Rational = 0) -> None:
        """Build a + b√5 from rationals."""
        self._rep = GOLDEN_FIELD([_qq(b), _qq(a)])

    @classmethod
    def _wrap(cls, rep: Any) -> GoldenNumber:
        ret = object.__new__(cls)
        ret._rep = rep
        return ret

    @classmethod
    def coerce(cls, value: object) -> Optional[GoldenNumber]:
        """Return value as a GoldenNumber, or None if it is not a rational or golden scalar."""
        if isinstance(value, GoldenNumber):
            return value
        if isinstance(value, (int, Fraction)):
            return cls(int(value) if isinstance(value, bool) else value)
        return None

    # components

    def _parts(self) -> Tuple[Any, Any]:
        coeffs = self._rep.to_list()
        a = coeffs[-1] if coeffs else QQ.zero
        b = coeffs[-2] if len(coeffs) > 1 else QQ.zero
        return a, b

    @property
    def a(self) -> Fraction:
        """The rational part."""
        return _fraction(self._parts()[0])

    @property
    def b(self) -> Fraction:
        """The coefficient of √5."""
        return _fraction(self._parts()[1])

    @property
    def is_rational(self) -> bool:
        return len(self._rep.to_list()) <= 1

    def as_fraction(self) -> Fraction:
        """Return the value as a Fraction, raising ValueError if it is irrational."""
        if not self.is_rational:
            raise ValueError(f"{self} is not rational")
        return self.a

    # arithmetic

    def __add__(self, other: object) -> GoldenNumber:
        o = GoldenNumber.coerce(other)
        if o is None:
            return NotImplemented
        return GoldenNumber._wrap(self._rep + o._rep)

    __radd__ = __add__

    def __neg__(self) -> GoldenNumber:
        return GoldenNumber._wrap(-self._rep)

    def __pos__(self) -> GoldenNumber:
        return self

    def __sub__(self, other: object) -> GoldenNumber:
        o = GoldenNumber.coerce(other)
        if o is None:
            return NotImplemented
        return GoldenNumber._wrap(self._rep - o._rep)

    def __rsub__(self, other: object) -> GoldenNumber:
        o = GoldenNumber.coerce(other)
        if o is None:
            return NotImplemented
        return o - self

    def __mul__(self, other: object) -> GoldenNumber:
        o = GoldenNumber.coerce(other)
        if o is None:
            return NotImplemented
        return GoldenNumber._wrap(self._rep * o._rep)

    __rmul__ = __mul__

    def norm(self) -> Fraction:
        """Return the field norm a² − 5b²."""
        return (self * self.conjugate()).as_fraction()

    def inv(self) -> GoldenNumber:
        if not self:
            raise ZeroDivisionError("GoldenNumber division by zero")
        return GoldenNumber._wrap(GOLDEN_FIELD.quo(GOLDEN_FIELD.one, self._rep))

    def __truediv__(self, other: object) -> GoldenNumber:
        o = GoldenNumber.coerce(other)
        if o is None:
            return NotImplemented
        return self * o.inv()

    def __rtruediv__(self, other: object) -> GoldenNumber:
        o = GoldenNumber.coerce(other)
        if o is None:
            return NotImplemented
        return o * self.inv()

    def __pow__(self, exponent: int) -> GoldenNumber:
        if not isinstance(exponent, int):
            return NotImplemented
        if exponent < 0:
            return self.inv() ** -exponent
        return GoldenNumber._wrap(self._rep ** exponent)

    def conjugate(self) -> GoldenNumber:
        """Return the Galois conjugate a − b√5."""
        a, b = self._parts()
        return GoldenNumber._wrap(GOLDEN_FIELD([-b, a]))

    def complex_conjugate(self) -> GoldenNumber:
        return self

    # comparisons

    def sign(self) -> int:
        """Return the exact sign of the real number a + b√5."""
        a, b = self._parts()
        sa = (a > 0) - (a < 0)
        sb = (b > 0) - (b < 0)
        if sb == 0 or sa == sb:
            return sa or sb
        if sa == 0:
            return sb
        return sa if a * a > 5 * b * b else sb

    def __eq__(self, other: object) -> bool:
        o = GoldenNumber.coerce(other)
        if o is None:
            if isinstance(other, float):
                return False
            return NotImplemented
        return bool(self._rep == o._rep)

    def __lt__(self, other: object) -> bool:
        o = GoldenNumber.coerce(other)
        if o is None:
            return NotImplemented
        return (self - o).sign() < 0

    def __hash__(self) -> int:
        if self.is_rational:
            return hash(self.a)
        return hash((self.a, self.b))

    def __bool__(self) -> bool:
        return bool(self._rep)

    # conversions

    def __float__(self) -> float:
        return float(self.a) + float(self.b) * SQRT5_FLOAT

    def __complex__(self) -> complex:
        return complex(float(self))

    def to_json(self) -> List[int]:
        """Encode as [a_num, a_den, b_num, b_den]."""
        a, b = self.a, self.b
        return [a.numerator, a.denominator, b.numerator, b.denominator]

    @classmethod
    def from_json(cls, data: Sequence[int]) -> GoldenNumber:
        a_num, a_den, b_num, b_den = data
        return cls(Fraction(a_num, a_den), Fraction(b_num, b_den))

    def __repr__(self) -> str:
        return f"GoldenNumber({self.a}, {self.b})"

    def __str__(self) -> str:
        a, b = self.a, self.b
        if not b:
            return str(a)
        if not a:
            return f"{b}√5"
        return f"{a}{'+' if b > 0 else '-'}{abs(b)}√5"


PHI = GoldenNumber(Fraction(1, 2), Fraction(1, 2))
SQRT5 = GoldenNumber(0, 1)
ZERO = GoldenNumber(0)
ONE = GoldenNumber(1)


def golden_conjugate(x: GoldenNumber) -> GoldenNumber:
    """Apply the non-trivial automorphism √5 ↦ −√5."""
    return x.conjugate()


def golden_arith(op: str, x: GoldenNumber, y: Optional[GoldenNumber] = None) -> GoldenNumber:
    """Dispatch one of add, mul, inv, neg on golden numbers."""
    if op == 'add':
        return x + _require_operand(op, y)
    if op == 'mul':
        return x * _require_operand(op, y)
    if op == 'inv':
        return x.inv()
    if op == 'neg':
        return -x
    raise ValueError(f"Unknown golden operation {op!r}")


def _require_operand(op: str, y: Optional[GoldenNumber]) -> GoldenNumber:
    if y is None:
        raise ValueError(f"{op} needs two operands")
    return y


@lru_cache(maxsize=None)
def cyclotomic_polynomial(order: int) -> Tuple[int, ...]:
    """Return the integer coefficients (lowest degree first) of the order-th cyclotomic polynomial."""
    if order < 1:
        raise ValueError(order)
    return tuple(int(c) for c in reversed(sp.cyclotomic_poly(order, polys=True).all_coeffs()))


@lru_cache(maxsize=None)
def totient(order: int) -> int:
    return int(sp.totient(order))


@lru_cache(maxsize=None)
def cyclotomic_field(order: int) -> Domain:
    """Return ℚ(ζ_order) as a sympy domain; ℚ itself for orders 1 and 2."""
    if order < 1:
        raise ValueError(f"Invalid cyclotomic order {order}")
    if order <= 2:
        return QQ
    return QQ.algebraic_field(sp.exp(2 * sp.pi * sp.I / order))


@lru_cache(maxsize=None)
def _zeta_powers(order: int) -> Tuple[Any, ...]:
    domain = cyclotomic_field(order)
    if order <= 2:
        zeta = QQ(3 - 2 * order)
    else:
        zeta = domain([QQ.one, QQ.zero])
    powers = [domain.one]
    for _ in range(order - 1):
        powers.append(powers[-1] * zeta)
    return tuple(powers)


def _embed(order: int, terms: Iterable[Tuple[int, Any]]) -> Any:
    """Return Σ c ζ_order^j for (j, c) pairs with rational c, as an element of ℚ(ζ_order)."""
    domain = cyclotomic_field(order)
    powers = _zeta_powers(order)
    ret = domain.zero
    for j, c in terms:
        if c:
            ret = ret + domain.convert(c) * powers[j % order]
    return ret


class CyclotomicNumber:
    """An exact element of ℚ(ζ_N), read as Σ c_j ζ^j with j < φ(N).

    Equality and hashing are structural inside one field; values from different orders are lifted to the least
    common order before comparing. Rational values hash like the matching Fraction.
    """

    __slots__ = ('order', '_rep')

    order: int
    _rep: Any

    def __init__(self, order: int, coefficients: Iterable[Rational]) -> None:
        """Build Σ coefficients[j] ζ_order^j, reducing modulo the cyclotomic polynomial."""
        self.order = order
        self._rep = _embed(order, ((j, _qq(c)) for j, c in enumerate(coefficients)))

    @classmethod
    def _wrap(cls, order: int, rep: Any) -> CyclotomicNumber:
        ret = object.__new__(cls)
        ret.order, ret._rep = order, rep
        return ret

    @property
    def domain(self) -> Domain:
        return cyclotomic_field(self.order)

    # constructors

    @classmethod
    def rational(cls, value: Rational, order: int = 1) -> CyclotomicNumber:
        return cls._wrap(order, cyclotomic_field(order).convert(_qq(value)))

    @classmethod
    def root_of_unity(cls, order: int, k: int = 1) -> CyclotomicNumber:
        """Return ζ_order^k."""
        return cls._wrap(order, _zeta_powers(order)[k % order])

    @classmethod
    def imaginary_unit(cls, order: int = 4) -> CyclotomicNumber:
        if order % 4:
            raise ValueError(f"i is not in Q(zeta_{order})")
        return cls.root_of_unity(order, order // 4)

    @classmethod
    def cos_2pi(cls, k: int, m: int, order: Optional[int] = None) -> CyclotomicNumber:
        """Return cos(2πk/m), inside ℚ(ζ_order) (default the smallest convenient order)."""
        order = order or ilcm(4, m)
        if order % m:
            raise ValueError(f"cos(2pi*{k}/{m}) is not in Q(zeta_{order})")
        step = order // m
        return cls._wrap(order, _embed(order, [(k * step, QQ(1, 2)), (-k * step, QQ(1, 2))]))

    @classmethod
    def sin_2pi(cls, k: int, m: int, order: Optional[int] = None) -> CyclotomicNumber:
        """Return sin(2πk/m) = (ζ^k − ζ^{−k})/(2i)."""
        order = order or ilcm(4, m)
        if order % m or order % 4:
            raise ValueError(f"sin(2pi*{k}/{m}) is not in Q(zeta_{order})")
        step, quarter = order // m, order // 4
        return cls._wrap(order, _embed(order, [(k * step - quarter, QQ(1, 2)), (-k * step - quarter, QQ(-1, 2))]))

    @classmethod
    def sqrt2(cls, order: int = 8) -> CyclotomicNumber:
        return cls.cos_2pi(1, 8, order) * 2

    @classmethod
    def sqrt3(cls, order: int = 12) -> CyclotomicNumber:
        return cls.cos_2pi(1, 12, order) * 2

    @classmethod
    def from_golden(cls, value: GoldenNumber, order: int) -> CyclotomicNumber:
        """Embed a golden number, using √5 = 1 + 2(ζ₅ + ζ₅⁴)."""
        a, b = value._parts()
        if not b:
            return cls._wrap(order, cyclotomic_field(order).convert(a))
        if order % 5:
            raise ValueError(f"sqrt(5) is not in Q(zeta_{order})")
        step = order // 5
        return cls._wrap(order, _embed(order, [(0, a + b), (step, 2 * b), (4 * step, 2 * b)]))

    # coercion

    def _terms(self) -> List[Any]:
        """Coefficients in the power basis of ζ, lowest degree first, as sympy rationals."""
        if self.order <= 2:
            return [self._rep]
        return list(reversed(self._rep.to_list()))

    def lift(self, order: int) -> CyclotomicNumber:
        """Return the same value inside ℚ(ζ_order), where self.order divides order."""
        if order == self.order:
            return self
        if order % self.order:
            raise ValueError(f"Q(zeta_{self.order}) is not inside Q(zeta_{order})")
        step = order // self.order
        return CyclotomicNumber._wrap(order, _embed(order, ((j * step, c) for j, c in enumerate(self._terms()))))

    def _pair(self, other: object) -> Optional[Tuple[CyclotomicNumber, CyclotomicNumber]]:
        if isinstance(other, CyclotomicNumber):
            order = ilcm(self.order, other.order)
            return self.lift(order), other.lift(order)
        golden = GoldenNumber.coerce(other)
        if golden is None:
            return None
        if golden.is_rational:
            return self, CyclotomicNumber.from_golden(golden, self.order)
        order = ilcm(self.order, 5)
        return self.lift(order), CyclotomicNumber.from_golden(golden, order)

    # arithmetic

    def __add__(self, other: object) -> CyclotomicNumber:
        pair = self._pair(other)
        if pair is None:
            return NotImplemented
        x, y = pair
        return CyclotomicNumber._wrap(x.order, x._rep + y._rep)

    __radd__ = __add__

    def __neg__(self) -> CyclotomicNumber:
        return CyclotomicNumber._wrap(self.order, -self._rep)

    def __pos__(self) -> CyclotomicNumber:
        return self

    def __sub__(self, other: object) -> CyclotomicNumber:
        pair = self._pair(other)
        if pair is None:
            return NotImplemented
        x, y = pair
        return CyclotomicNumber._wrap(x.order, x._rep - y._rep)

    def __rsub__(self, other: object) -> CyclotomicNumber:
        pair = self._pair(other)
        if pair is None:
            return NotImplemented
        x, y = pair
        return y - x

    def __mul__(self, other: object) -> CyclotomicNumber:
        pair = self._pair(other)
        if pair is None:
            return NotImplemented
        x, y = pair
        return CyclotomicNumber._wrap(x.order, x._rep * y._rep)

    __rmul__ = __mul__

    def galois(self, k: int) -> CyclotomicNumber:
        """Apply the automorphism ζ ↦ ζ^k (k coprime to the order)."""
        if gcd(k, self.order) != 1:
            raise ValueError(f"{k} is not a unit modulo {self.order}")
        return CyclotomicNumber._wrap(self.order, _embed(self.order, ((j * k, c) for j, c in enumerate(self._terms()))))

    def complex_conjugate(self) -> CyclotomicNumber:
        if self.order <= 2:
            return self
        return self.galois(self.order - 1)

    def conjugate(self) -> CyclotomicNumber:
        """Complex conjugation; the Galois action is available through :meth:`galois`."""
        return self.complex_conjugate()

    def inv(self) -> CyclotomicNumber:
        if not self:
            raise ZeroDivisionError("CyclotomicNumber division by zero")
        return CyclotomicNumber._wrap(self.order, self.domain.quo(self.domain.one, self._rep))

    def __truediv__(self, other: object) -> CyclotomicNumber:
        pair = self._pair(other)
        if pair is None:
            return NotImplemented
        x, y = pair
        return x * y.inv()

    def __rtruediv__(self, other: object) -> CyclotomicNumber:
        pair = self._pair(other)
        if pair is None:
            return NotImplemented
        x, y = pair
        return y * x.inv()

    def __pow__(self, exponent: int) -> CyclotomicNumber:
        if not isinstance(exponent, int):
            return NotImplemented
        if exponent < 0:
            return self.inv() ** -exponent
        return CyclotomicNumber._wrap(self.order, self._rep ** exponent)

    # inspection

    @property
    def is_rational(self) -> bool:
        return not any(self._terms()[1:])

    def as_fraction(self) -> Fraction:
        if not self.is_rational:
            raise ValueError(f"{self} is not rational")
        return self.coefficients[0]

    @property
    def coefficients(self) -> Tuple[Fraction, ...]:
        """All φ(N) power-basis coefficients, lowest degree first."""
        terms = [_fraction(c) for c in self._terms()]
        return tuple(terms + [Fraction(0)] * (totient(self.order) - len(terms)))

    def __eq__(self, other: object) -> bool:
        pair = self._pair(other)
        if pair is None:
            if isinstance(other, float):
                return False
            return NotImplemented
        x, y = pair
        return bool(x._rep == y._rep)

    def __hash__(self) -> int:
        if self.is_rational:
            return hash(self.as_fraction())
        return hash((self.order, self.coefficients))

    def __bool__(self) -> bool:
        return bool(self._rep)

    def __complex__(self) -> complex:
        total = complex(0)
        for j, c in enumerate(self.coefficients):
            if c:
                angle = 2 * pi * j / self.order
                total += float(c) * complex(cos(angle), sin(angle))
        return total

    def __float__(self) -> float:
        value = complex(self)
        if abs(value.imag) > 1e-12 * max(1.0, abs(value.real)):
            raise ValueError(f"{self} is not real")
        return value.real

    def to_json(self) -> List[int]:
        """Encode as [den, c_0, c_1, ...] over the least common denominator."""
        coeffs = self.coefficients
        den = 1
        for c in coeffs:
            den = ilcm(den, c.denominator)
        return [den, *(int(c * den) for c in coeffs)]

    @classmethod
    def from_json(cls, order: int, data: Sequence[int]) -> CyclotomicNumber:
        den, *coeffs = data
        return cls(order, [Fraction(c, den) for c in coeffs])

    def __repr__(self) -> str:
        return f"CyclotomicNumber({self.order}, {list(self.coefficients)})"

    def __str__(self) -> str:
        terms = []
        for j, c in enumerate(self.coefficients):
            if c:
                terms.append(str(c) if j == 0 else f"{c}ζ{self.order}^{j}")
        return " + ".join(terms) or "0"


Scalar = Union[GoldenNumber, CyclotomicNumber]


def as_scalar(value: object) -> Scalar:
    """Coerce ints, Fractions and the two exact carriers into an exact scalar."""
    if isinstance(value, CyclotomicNumber):
        return value
    golden = GoldenNumber.coerce(value)
    if golden is None:
        raise TypeError(f"Cannot use {value!r} as an exact scalar")
    return golden


def common_order(values: Iterable[Scalar]) -> Optional[int]:
    """Return the cyclotomic order all values fit in, or None if they are all golden."""
    order: Optional[int] = None
    needs_sqrt5 = False
    for value in values:
        if isinstance(value, CyclotomicNumber):
            order = value.order if order is None else ilcm(order, value.order)
        elif not value.is_rational:
            needs_sqrt5 = True
    if order is not None and needs_sqrt5:
        order = ilcm(order, 5)
    return order


def scalar_domain(order: Optional[int]) -> Domain:
    """Return the sympy domain of a carrier: ℚ(√5) for None, else ℚ(ζ_order)."""
    return GOLDEN_FIELD if order is None else cyclotomic_field(order)


def to_domain(value: object, order: Optional[int]) -> Any:
    """Return value as an element of scalar_domain(order), lifting or embedding as needed."""
    scalar = as_scalar(value)
    if order is None:
        if isinstance(scalar, CyclotomicNumber):
            return GOLDEN_FIELD.convert(_qq(scalar.as_fraction()))
        return scalar._rep
    if isinstance(scalar, CyclotomicNumber):
        return scalar.lift(order)._rep
    return CyclotomicNumber.from_golden(scalar, order)._rep


def from_domain(element: Any, order: Optional[int]) -> Scalar:
    """Wrap an element of scalar_domain(order) back into its carrier."""
    if order is None:
        return GoldenNumber._wrap(element)
    return CyclotomicNumber._wrap(order, element)


def unify(values: Sequence[object]) -> List[Scalar]:
    """Bring values into one carrier, preferring the golden field whenever it suffices."""
    scalars = [as_scalar(v) for v in values]
    order = common_order(scalars)
    if order is None:
        return scalars
    if all(s.is_rational for s in scalars):
        return [GoldenNumber(s.as_fraction()) for s in scalars]
    ret: List[Scalar] = []
    for s in scalars:
        if isinstance(s, CyclotomicNumber):
            ret.append(s.lift(order))
        else:
            ret.append(CyclotomicNumber.from_golden(s, order))
    return ret


def roots_of_unity(sample: Scalar) -> List[Scalar]:
    """Return every root of unity in the field that sample belongs to."""
    if isinstance(sample, GoldenNumber):
        return [GoldenNumber(1), GoldenNumber(-1)]
    order = sample.order
    base = CyclotomicNumber.root_of_unity(order, 1)
    powers = [base ** k for k in range(order)]
    if order % 2 == 0:
        return list(powers)
    return [*powers, *(-p for p in powers)]
