"""Sparse multivariate polynomials, rational functions, and rational vector fields over the exact scalars.

:class:`MultiPoly` wraps a sympy ``PolyElement`` from ``sympy.polys.rings.ring``, over the golden field or a
cyclotomic field. Mixed operands are moved to the smallest ring holding both before sympy does the arithmetic.
"""

from __future__ import annotations

from functools import lru_cache
from logging import getLogger
from typing import TYPE_CHECKING, Dict, Tuple

import numpy as np
from attrs import field, frozen
from sympy import ilcm
from sympy.polys.rings import ring

from .field import CyclotomicNumber, GoldenNumber, as_scalar, common_order, from_domain, scalar_domain, to_domain

if TYPE_CHECKING:  # pragma: no cover
    from typing import Any, Callable, Iterable, List, Mapping, Optional, Sequence, Union

    from numpy.typing import ArrayLike, NDArray
    from sympy.polys.rings import PolyElement, PolyRing

    from .field import Scalar

Exponents = Tuple[int, ...]
logger = getLogger(__name__)


@lru_cache(maxsize=None)
def polynomial_ring(variables: Tuple[str, ...], order: Optional[int] = None) -> PolyRing:
    """Return the lex-ordered sympy ring in variables over ℚ(√5) (order None) or ℚ(ζ_order)."""
    return ring(variables, scalar_domain(order))[0]


class MultiPoly:
    """A polynomial in a fixed, ordered list of variables.

    The coefficients live in one carrier field, recorded by ``order`` (None for the golden field). Equality
    compares expanded forms, lifting both sides to a common field first.
    """

    __slots__ = ('variables', 'order', 'poly', '_terms', '_numeric')

    variables: Tuple[str, ...]
    order: Optional[int]
    poly: PolyElement
    _terms: Optional[Dict[Exponents, Scalar]]
    _numeric: Optional[Tuple[NDArray[np.int64], NDArray[Any]]]

    def __init__(
        self,
        variables: Sequence[str],
        terms: Union[Mapping[Exponents, Any], Iterable[Tuple[Exponents, Any]]] = ()
    ) -> None:
        variables = tuple(variables)
        n = len(variables)
        items = terms.items() if hasattr(terms, 'items') else terms
        acc: Dict[Exponents, Scalar] = {}
        for exps, coef in items:
            key = tuple(int(e) for e in exps)
            if len(key) != n or any(e < 0 for e in key):
                raise ValueError(f"Exponent vector {key} does not fit variables {variables}")
            value = as_scalar(coef)
            acc[key] = acc[key] + value if key in acc else value
        order = common_order(acc.values())
        element = polynomial_ring(variables, order).from_dict({e: to_domain(c, order) for e, c in acc.items()})
        self._set(variables, order, element)

    def _set(self, variables: Tuple[str, ...], order: Optional[int], element: PolyElement) -> None:
        self.variables = variables
        self.order = order
        self.poly = element
        self._terms = None
        self._numeric = None

    @classmethod
    def _of(cls, variables: Tuple[str, ...], order: Optional[int], element: PolyElement) -> MultiPoly:
        ret = object.__new__(cls)
        ret._set(variables, order, element)
        return ret

    def _rebuild(self, variables: Tuple[str, ...], monomials: Mapping[Exponents, Any]) -> MultiPoly:
        """A polynomial over new variables with raw coefficients from this polynomial's field."""
        return MultiPoly._of(variables, self.order, polynomial_ring(variables, self.order).from_dict(dict(monomials)))

    # constructors

    @classmethod
    def constant(cls, value: Any, variables: Sequence[str]) -> MultiPoly:
        variables = tuple(variables)
        return cls(variables, {(0, ) * len(variables): value})

    @classmethod
    def zero(cls, variables: Sequence[str]) -> MultiPoly:
        variables = tuple(variables)
        return cls._of(variables, None, polynomial_ring(variables).zero)

    @classmethod
    def variable(cls, name: str, variables: Sequence[str]) -> MultiPoly:
        variables = tuple(variables)
        if name not in variables:
            raise ValueError(f"{name} is not one of {variables}")
        return cls._of(variables, None, polynomial_ring(variables).gens[variables.index(name)])

    @classmethod
    def generators(cls, variables: Sequence[str]) -> Tuple[MultiPoly, ...]:
        """Return the coordinate polynomials, one per variable."""
        return tuple(cls.variable(v, variables) for v in variables)

    @classmethod
    def monomial(cls, exps: Sequence[int], variables: Sequence[str], coefficient: Any = 1) -> MultiPoly:
        return cls(variables, {tuple(exps): coefficient})

    # structure

    @property
    def terms(self) -> Dict[Exponents, Scalar]:
        """Exponent vectors mapped to their nonzero coefficients."""
        if self._terms is None:
            self._terms = {e: from_domain(c, self.order) for e, c in self.poly.items()}
        return self._terms

    @property
    def nvars(self) -> int:
        return len(self.variables)

    def is_zero(self) -> bool:
        return not self.poly

    def __bool__(self) -> bool:
        return bool(self.poly)

    @property
    def degree(self) -> int:
        """Total degree; -1 for the zero polynomial."""
        return max((sum(e) for e in self.poly), default=-1)

    def homogeneous_degree(self) -> Optional[int]:
        """Return the common degree of all terms, or None if the polynomial is zero or mixed."""
        degrees = {sum(e) for e in self.poly}
        if len(degrees) != 1:
            return None
        return degrees.pop()

    def is_homogeneous(self, degree: Optional[int] = None) -> bool:
        if not self.poly:
            return True
        found = self.homogeneous_degree()
        return found is not None and (degree is None or found == degree)

    def coefficient(self, exps: Sequence[int]) -> Scalar:
        return self.terms.get(tuple(exps), GoldenNumber(0))

    def sorted_terms(self) -> List[Tuple[Exponents, Scalar]]:
        """Terms in descending lexicographic order of exponents."""
        return sorted(self.terms.items(), reverse=True)

    def leading_term(self) -> Tuple[Exponents, Scalar]:
        if not self.poly:
            raise ValueError("The zero polynomial has no leading term")
        return self.poly.LM, from_domain(self.poly.LC, self.order)

    def is_constant(self) -> bool:
        return not self.poly or (len(self.poly) == 1 and not any(self.poly.LM))

    def constant_value(self) -> Scalar:
        if not self.is_constant():
            raise ValueError(f"{self} is not constant")
        return self.coefficient((0, ) * self.nvars)

    # arithmetic

    def _is_rational(self) -> bool:
        return all(c.is_rational for c in self.terms.values())

    def _in(self, order: Optional[int]) -> PolyElement:
        if order == self.order:
            return self.poly
        return polynomial_ring(self.variables, order).from_dict(
            {e: to_domain(c, order) for e, c in self.terms.items()}
        )

    def _align(self, other: MultiPoly) -> Tuple[PolyElement, PolyElement, Optional[int]]:
        """Both operands in the smallest common ring, and that ring's order."""
        if other.variables != self.variables:
            raise ValueError(f"Variable mismatch: {self.variables} vs {other.variables}")
        if self.order == other.order:
            return self.poly, other.poly, self.order
        if self.order is None or other.order is None:
            golden, cyclotomic = (self, other) if self.order is None else (other, self)
            assert cyclotomic.order is not None
            order = cyclotomic.order if golden._is_rational() else ilcm(cyclotomic.order, 5)
        else:
            order = ilcm(self.order, other.order)
        return self._in(order), other._in(order), order

    def _coerce(self, other: object) -> Optional[MultiPoly]:
        if isinstance(other, MultiPoly):
            if other.variables != self.variables:
                raise ValueError(f"Variable mismatch: {self.variables} vs {other.variables}")
            return other
        try:
            return MultiPoly.constant(other, self.variables)
        except TypeError:
            return None

    def __add__(self, other: object) -> MultiPoly:
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        a, b, order = self._align(o)
        return MultiPoly._of(self.variables, order, a + b)

    __radd__ = __add__

    def __neg__(self) -> MultiPoly:
        return MultiPoly._of(self.variables, self.order, -self.poly)

    def __sub__(self, other: object) -> MultiPoly:
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        a, b, order = self._align(o)
        return MultiPoly._of(self.variables, order, a - b)

    def __rsub__(self, other: object) -> MultiPoly:
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o - self

    def scale(self, value: Any) -> MultiPoly:
        return self * MultiPoly.constant(value, self.variables)

    def __mul__(self, other: object) -> MultiPoly:
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        a, b, order = self._align(o)
        return MultiPoly._of(self.variables, order, a * b)

    __rmul__ = __mul__

    def __truediv__(self, other: object) -> MultiPoly:
        try:
            c = as_scalar(other)
        except TypeError:
            return NotImplemented
        return self.scale(c ** -1)

    def __pow__(self, exponent: int) -> MultiPoly:
        if not isinstance(exponent, int) or exponent < 0:
            return NotImplemented
        return MultiPoly._of(self.variables, self.order, self.poly ** exponent)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, MultiPoly):
            try:
                other = MultiPoly.constant(other, self.variables)
            except TypeError:
                return NotImplemented
        if self.variables != other.variables:
            return False
        a, b, _ = self._align(other)
        return bool(a == b)

    def __hash__(self) -> int:
        return hash((self.variables, frozenset(self.poly)))

    # calculus and substitution

    def diff(self, var: Union[int, str]) -> MultiPoly:
        """Partial derivative with respect to a variable name or index."""
        idx = self.variables.index(var) if isinstance(var, str) else var
        return MultiPoly._of(self.variables, self.order, self.poly.diff(self.poly.ring.gens[idx]))

    def gradient(self) -> Tuple[MultiPoly, ...]:
        return tuple(self.diff(i) for i in range(self.nvars))

    def substitute(self, images: Sequence[MultiPoly]) -> MultiPoly:
        """Replace each variable by the matching polynomial; all images share one variable list."""
        if len(images) != self.nvars:
            raise ValueError(f"Need {self.nvars} images, got {len(images)}")
        target = images[0].variables
        powers: List[Dict[int, MultiPoly]] = [{0: MultiPoly.constant(1, target), 1: img} for img in images]

        def power(i: int, k: int) -> MultiPoly:
            cache = powers[i]
            if k not in cache:
                cache[k] = power(i, k - 1) * images[i]
            return cache[k]

        ret = MultiPoly.zero(target)
        for e, c in self.sorted_terms():
            term = MultiPoly.constant(c, target)
            for i, k in enumerate(e):
                if k:
                    term = term * power(i, k)
            ret = ret + term
        return ret

    def compose_linear(self, matrix: Any) -> MultiPoly:
        """Return p(Mx) for a square matrix M given as an ExactMatrix or nested rows."""
        return LinearSubstitution(matrix, self.variables).apply(self)

    def homogenize(self, var: str, degree: Optional[int] = None) -> MultiPoly:
        """Append var and pad every term up to degree (default: the total degree)."""
        top = self.degree if degree is None else degree
        if top < self.degree:
            raise ValueError(f"Cannot homogenize degree {self.degree} to {top}")
        return self._rebuild((*self.variables, var), {(*e, top - sum(e)): c for e, c in self.poly.items()})

    def with_variables(self, variables: Sequence[str]) -> MultiPoly:
        """Re-express the polynomial over a variable list containing every variable it uses."""
        variables = tuple(variables)
        index = []
        for i, v in enumerate(self.variables):
            if v in variables:
                index.append(variables.index(v))
            elif any(e[i] for e in self.poly):
                raise ValueError(f"{v} is used but missing from {variables}")
            else:
                index.append(-1)
        monomials: Dict[Exponents, Any] = {}
        for e, c in self.poly.items():
            new = [0] * len(variables)
            for i, k in enumerate(e):
                if k:
                    new[index[i]] = k
            monomials[tuple(new)] = c
        return self._rebuild(variables, monomials)

    def map_coefficients(self, func: Callable[[Scalar], Any]) -> MultiPoly:
        return MultiPoly(self.variables, {e: func(c) for e, c in self.terms.items()})

    def conjugate(self) -> MultiPoly:
        """Apply the Galois conjugation √5 ↦ −√5 to every (golden) coefficient."""
        def conj(c: Scalar) -> Scalar:
            if isinstance(c, CyclotomicNumber):
                if not c.is_rational:
                    raise TypeError("Galois conjugation is only defined for golden coefficients")
                return c
            return c.conjugate()
        return self.map_coefficients(conj)

    def complex_conjugate(self) -> MultiPoly:
        return self.map_coefficients(lambda c: c.complex_conjugate())

    def exact_divide(self, other: MultiPoly) -> Optional[MultiPoly]:
        """Return self / other when the division is exact, else None."""
        if not other:
            raise ZeroDivisionError("polynomial division by zero")
        a, b, order = self._align(other)
        quotient, remainder = a.div(b)
        if remainder:
            return None
        return MultiPoly._of(self.variables, order, quotient)

    def monic(self) -> MultiPoly:
        """Scale so the lexicographically leading coefficient is 1."""
        return MultiPoly._of(self.variables, self.order, self.poly.monic())

    def common_monomial(self) -> Exponents:
        if not self.poly:
            return (0, ) * self.nvars
        return tuple(min(e[i] for e in self.poly) for i in range(self.nvars))

    def ratio_to(self, other: MultiPoly) -> Optional[Scalar]:
        """Return λ with self = λ·other, or None when they are not proportional."""
        if not other:
            return None if self else GoldenNumber(0)
        lead, lc = other.leading_term()
        lam = self.coefficient(lead) * lc ** -1
        return lam if self == other.scale(lam) else None

    # evaluation

    def evaluate(self, point: Sequence[Any]) -> Scalar:
        """Exact evaluation at a point of exact scalars."""
        values = [as_scalar(v) for v in point]
        if len(values) != self.nvars:
            raise ValueError(f"Expected {self.nvars} coordinates")
        order = common_order([*values, *self.terms.values()])
        return from_domain(self._in(order)(*(to_domain(v, order) for v in values)), order)

    def _numeric_terms(self) -> Tuple[NDArray[np.int64], NDArray[Any]]:
        if self._numeric is None:
            terms = self.terms
            exps = np.array(list(terms), dtype=np.int64).reshape(len(terms), self.nvars)
            values = [complex(c) for c in terms.values()]
            if all(v.imag == 0 for v in values):
                coeffs = np.array([v.real for v in values], dtype=float)
            else:
                coeffs = np.array(values, dtype=complex)
            self._numeric = (exps, coeffs)
        return self._numeric

    def evaluate_numeric(self, points: ArrayLike) -> NDArray[Any]:
        """Vectorized float evaluation; the last axis of points holds the coordinates."""
        pts = np.asarray(points)
        if pts.shape[-1] != self.nvars:
            raise ValueError(f"Expected points with {self.nvars} coordinates, got shape {pts.shape}")
        exps, coeffs = self._numeric_terms()
        dtype = np.result_type(pts.dtype, coeffs.dtype, float)
        out = np.zeros(pts.shape[:-1], dtype=dtype)
        for e, c in zip(exps, coeffs):
            term = np.full(pts.shape[:-1], c, dtype=dtype)
            for i, k in enumerate(e):
                if k:
                    term = term * pts[..., i] ** int(k)
            out += term
        return out

    # serialization

    def to_json(self) -> Dict[str, Any]:
        """Canonical JSON: golden terms are [exponents..., a_num, a_den, b_num, b_den]."""
        order = common_order(self.terms.values())
        if order is None:
            return {
                "variables": list(self.variables),
                "terms": [[*e, *c.to_json()] for e, c in self.sorted_terms()],  # type: ignore[union-attr]
            }
        return {
            "variables": list(self.variables),
            "field": order,
            "terms": [
                [*e, *(c.lift(order) if isinstance(c, CyclotomicNumber)
                       else CyclotomicNumber.from_golden(c, order)).to_json()]
                for e, c in self.sorted_terms()
            ],
        }

    @classmethod
    def from_json(cls, data: Mapping[str, Any]) -> MultiPoly:
        variables = tuple(data["variables"])
        n = len(variables)
        terms: Dict[Exponents, Any] = {}
        order = data.get("field")
        for row in data["terms"]:
            exps, rest = tuple(row[:n]), row[n:]
            terms[exps] = GoldenNumber.from_json(rest) if order is None else CyclotomicNumber.from_json(order, rest)
        return cls(variables, terms)

    def __repr__(self) -> str:
        return f"MultiPoly({self.variables}, {self})"

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for e, c in self.sorted_terms():
            mono = "*".join(
                v if k == 1 else f"{v}^{k}" for v, k in zip(self.variables, e) if k
            )
            coef = str(c)
            if not mono:
                parts.append(f"({coef})")
            elif coef == "1":
                parts.append(mono)
            elif coef == "-1":
                parts.append(f"-{mono}")
            else:
                parts.append(f"({coef})*{mono}")
        return " + ".join(parts)


class LinearSubstitution:
    """Cached images of monomials under x ↦ Mx, for repeated composition with one matrix."""

    def __init__(self, matrix: Any, variables: Sequence[str]) -> None:
        rows = getattr(matrix, 'rows', matrix)
        self.variables = tuple(variables)
        n = len(self.variables)
        if len(rows) != n or any(len(row) != n for row in rows):
            raise ValueError(f"Matrix shape does not match {n} variables")
        self.forms = [
            MultiPoly(self.variables, {tuple(int(i == j) for i in range(n)): row[j] for j in range(n)})
            for row in rows
        ]
        self._powers: List[Dict[int, MultiPoly]] = [
            {0: MultiPoly.constant(1, self.variables), 1: form} for form in self.forms
        ]
        self._images: Dict[Exponents, MultiPoly] = {}

    def _power(self, i: int, k: int) -> MultiPoly:
        cache = self._powers[i]
        if k not in cache:
            half = self._power(i, k // 2)
            cache[k] = half * half if k % 2 == 0 else half * half * self.forms[i]
        return cache[k]

    def image(self, exps: Exponents) -> MultiPoly:
        """Return the monomial x^exps composed with M."""
        if exps not in self._images:
            ret = self._powers[0][0]
            for i, k in enumerate(exps):
                if k:
                    ret = ret * self._power(i, k)
            self._images[exps] = ret
        return self._images[exps]

    def apply(self, poly: MultiPoly) -> MultiPoly:
        if poly.variables != self.variables:
            raise ValueError(f"Variable mismatch: {poly.variables} vs {self.variables}")
        ret = MultiPoly.zero(self.variables)
        for e, c in poly.terms.items():
            ret = ret + self.image(e).scale(c)
        return ret


def poly_compose_linear(p: MultiPoly, m: Any) -> MultiPoly:
    """Return p(Mx), expanded and canonical."""
    return p.compose_linear(m)


@frozen(eq=False)
class RationalFunction:
    """numerator / denominator, kept unreduced apart from what :meth:`reduce` does."""

    numerator: MultiPoly
    denominator: MultiPoly = field()

    @denominator.validator
    def _check_denominator(self, attribute: Any, value: MultiPoly) -> None:
        if not value:
            raise ZeroDivisionError("RationalFunction with a zero denominator")
        if value.variables != self.numerator.variables:
            raise ValueError("numerator and denominator use different variables")

    @classmethod
    def of(cls, numerator: MultiPoly, denominator: Optional[MultiPoly] = None) -> RationalFunction:
        return cls(numerator, denominator if denominator is not None else MultiPoly.constant(1, numerator.variables))

    @property
    def variables(self) -> Tuple[str, ...]:
        return self.numerator.variables

    def is_zero(self) -> bool:
        return not self.numerator

    def __add__(self, other: RationalFunction) -> RationalFunction:
        if self.denominator == other.denominator:
            return RationalFunction(self.numerator + other.numerator, self.denominator)
        return RationalFunction(
            self.numerator * other.denominator + other.numerator * self.denominator,
            self.denominator * other.denominator
        )

    def __neg__(self) -> RationalFunction:
        return RationalFunction(-self.numerator, self.denominator)

    def __sub__(self, other: RationalFunction) -> RationalFunction:
        return self + (-other)

    def __mul__(self, other: Union[RationalFunction, MultiPoly]) -> RationalFunction:
        if isinstance(other, MultiPoly):
            return RationalFunction(self.numerator * other, self.denominator)
        return RationalFunction(self.numerator * other.numerator, self.denominator * other.denominator)

    def diff(self, var: Union[int, str]) -> RationalFunction:
        return RationalFunction(
            self.numerator.diff(var) * self.denominator - self.numerator * self.denominator.diff(var),
            self.denominator * self.denominator
        )

    def __eq__(self, other: object) -> bool:
        if isinstance(other, MultiPoly):
            other = RationalFunction.of(other)
        if not isinstance(other, RationalFunction):
            return NotImplemented
        return self.numerator * other.denominator == other.numerator * self.denominator

    __hash__ = None  # type: ignore[assignment]

    def reduce(self) -> RationalFunction:
        """Cancel scalar content, common monomials, and an exact polynomial quotient (no general gcd)."""
        num, den = self.numerator, self.denominator
        if not num:
            return RationalFunction(num, MultiPoly.constant(1, num.variables))
        shared = tuple(min(a, b) for a, b in zip(num.common_monomial(), den.common_monomial()))
        if any(shared):
            mono = MultiPoly.monomial(shared, num.variables)
            num = num.exact_divide(mono) or num
            den = den.exact_divide(mono) or den
        quotient = num.exact_divide(den)
        if quotient is not None:
            return RationalFunction.of(quotient)
        lc = den.leading_term()[1]
        return RationalFunction(num / lc, den / lc)

    def evaluate(self, point: Sequence[Any]) -> Scalar:
        return self.numerator.evaluate(point) / self.denominator.evaluate(point)

    def evaluate_numeric(self, points: ArrayLike) -> NDArray[Any]:
        return self.numerator.evaluate_numeric(points) / self.denominator.evaluate_numeric(points)

    def __str__(self) -> str:
        if self.denominator.is_constant() and self.denominator.constant_value() == 1:
            return str(self.numerator)
        return f"({self.numerator}) / ({self.denominator})"


def _check_components(instance: RationalVF, attribute: Any, value: Tuple[MultiPoly, ...]) -> None:
    if not value:
        raise ValueError("A vector field needs at least one component")
    variables = value[0].variables
    if any(c.variables != variables for c in value):
        raise ValueError("Components use different variable lists")


@frozen
class RationalVF:
    """n numerator polynomials over one shared denominator."""

    components: Tuple[MultiPoly, ...] = field(converter=tuple, validator=_check_components)
    denominator: MultiPoly = field()

    @denominator.validator
    def _check_denominator(self, attribute: Any, value: MultiPoly) -> None:
        if not value:
            raise ZeroDivisionError("RationalVF with a zero denominator")
        if value.variables != self.components[0].variables:
            raise ValueError("Denominator uses different variables from the components")

    @classmethod
    def polynomial(cls, components: Sequence[MultiPoly]) -> RationalVF:
        return cls(tuple(components), MultiPoly.constant(1, components[0].variables))

    @property
    def n(self) -> int:
        return len(self.components)

    @property
    def variables(self) -> Tuple[str, ...]:
        return self.denominator.variables

    def is_zero(self) -> bool:
        return not any(self.components)

    def is_two_homogenic(self) -> bool:
        """Each nonzero numerator is homogeneous of degree deg(denominator) + 2."""
        den = self.denominator.homogeneous_degree()
        if den is None:
            return False
        return all(c.is_homogeneous(den + 2) for c in self.components)

    def scale(self, value: Any) -> RationalVF:
        return RationalVF(tuple(c.scale(value) for c in self.components), self.denominator)

    def map_coefficients(self, func: Callable[[Scalar], Any]) -> RationalVF:
        return RationalVF(
            tuple(c.map_coefficients(func) for c in self.components), self.denominator.map_coefficients(func)
        )

    def conjugate(self) -> RationalVF:
        """Galois-conjugate every coefficient."""
        return RationalVF(tuple(c.conjugate() for c in self.components), self.denominator.conjugate())

    def equivalent(self, other: RationalVF) -> bool:
        """Compare as rational maps, cross-multiplying denominators."""
        if self.n != other.n or self.variables != other.variables:
            return False
        if self.denominator == other.denominator:
            return self.components == other.components
        return all(
            a * other.denominator == b * self.denominator for a, b in zip(self.components, other.components)
        )

    def ratio_to(self, other: RationalVF) -> Optional[Scalar]:
        """Return λ with self = λ·other over a common denominator, or None."""
        if self.denominator != other.denominator:
            return None
        lam: Optional[Scalar] = None
        for a, b in zip(self.components, other.components):
            if not b:
                if a:
                    return None
                continue
            r = a.ratio_to(b)
            if r is None or (lam is not None and r != lam):
                return None
            lam = r
        return lam

    def normalized(self) -> RationalVF:
        """Scale so the leading coefficient of the first nonzero numerator is 1."""
        for c in self.components:
            if c:
                return self.scale(c.leading_term()[1] ** -1)
        return self

    def component(self, i: int) -> RationalFunction:
        return RationalFunction(self.components[i], self.denominator)

    def evaluate(self, point: Sequence[Any]) -> Tuple[Scalar, ...]:
        den = self.denominator.evaluate(point)
        if not den:
            raise ZeroDivisionError(f"Denominator vanishes at {point}")
        inv = den ** -1
        return tuple(c.evaluate(point) * inv for c in self.components)

    def evaluate_numerators(self, points: ArrayLike) -> NDArray[Any]:
        return np.stack([c.evaluate_numeric(points) for c in self.components], axis=-1)

    def evaluate_numeric(self, points: ArrayLike) -> NDArray[Any]:
        """Vectorized evaluation, returning an array with the field components on the last axis."""
        den = self.denominator.evaluate_numeric(points)
        return self.evaluate_numerators(points) / den[..., None]

    def to_json(self) -> Dict[str, Any]:
        return {
            "components": [c.to_json() for c in self.components],
            "denominator": self.denominator.to_json(),
        }

    @classmethod
    def from_json(cls, data: Mapping[str, Any]) -> RationalVF:
        return cls(
            tuple(MultiPoly.from_json(c) for c in data["components"]), MultiPoly.from_json(data["denominator"])
        )

    def __str__(self) -> str:
        body = " • ".join(f"[{c}]" for c in self.components)
        if self.denominator.is_constant() and self.denominator.constant_value() == 1:
            return body
        return f"({body}) / ({self.denominator})"


def vf_divergence(v: RationalVF) -> RationalFunction:
    """Exact divergence, over the squared denominator (unreduced)."""
    d = v.denominator
    num = MultiPoly.zero(v.variables)
    for i, c in enumerate(v.components):
        num = num + c.diff(i) * d - c * d.diff(i)
    return RationalFunction(num, d * d)


def vf_curl(v: RationalVF) -> Tuple[RationalFunction, RationalFunction, RationalFunction]:
    """Exact curl of a 3-dimensional field, each component over the squared denominator."""
    if v.n != 3 or len(v.variables) != 3:
        raise ValueError(f"curl needs a 3-dimensional field, got n={v.n}")
    d = v.denominator
    d2 = d * d

    def partial(i: int, j: int) -> MultiPoly:
        c = v.components[i]
        return c.diff(j) * d - c * d.diff(j)

    return (
        RationalFunction(partial(2, 1) - partial(1, 2), d2),
        RationalFunction(partial(0, 2) - partial(2, 0), d2),
        RationalFunction(partial(1, 0) - partial(0, 1), d2),
    )


def lie_derivative(v: RationalVF, f: MultiPoly) -> MultiPoly:
    """Return the numerator of Σ F_i V_i; zero iff F is a first integral of V."""
    ret = MultiPoly.zero(v.variables)
    for i, c in enumerate(v.components):
        ret = ret + f.diff(i) * c
    return ret


def monomials(degree: int, nvars: int) -> List[Exponents]:
    """Every exponent vector of the given total degree, in descending lexicographic order."""
    if nvars == 1:
        return [(degree, )]
    ret: List[Exponents] = []
    for first in range(degree, -1, -1):
        ret.extend((first, *rest) for rest in monomials(degree - first, nvars - 1))
    return ret


XYZ = ('x', 'y', 'z')
