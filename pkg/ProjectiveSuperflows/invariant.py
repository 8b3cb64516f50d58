"""The classification engine.

A 2-homogenic field N/D is invariant under a group element g when g⁻¹N(gx)/D(gx) = N(x)/D(x). For a relative
invariant denominator, D(gx) = χ(g)D(x), so the condition becomes the linear equation g⁻¹N(gx) = χ(g)N(x) on the
numerator coefficients. Those equations are imposed generator by generator, the exact kernel is kept, and the full
group is checked afterwards.
"""

from __future__ import annotations

from fractions import Fraction
from itertools import permutations
from logging import getLogger
from typing import TYPE_CHECKING, Dict, Optional, Tuple

from attrs import field, frozen

from .consts import GroupFamily, VerdictReason
from .field import GoldenNumber, roots_of_unity
from .group import (SWAP_XY, GroupSpec, MatrixGroup, build_catalog_group, contains_minus_identity,
                    signed_permutations)
from .matrix import ExactMatrix, nullspace
from .poly import XYZ, LinearSubstitution, MultiPoly, RationalVF, monomials

if TYPE_CHECKING:  # pragma: no cover
    from typing import Any, List, Mapping, Sequence

    from .field import Scalar
    from .poly import Exponents

    Numerator = Tuple[MultiPoly, ...]

logger = getLogger(__name__)


class NotRelativeInvariantError(ValueError):
    """Raised when a denominator is not sent to a multiple of itself by some group element."""


def default_variables(n: int) -> Tuple[str, ...]:
    return XYZ if n == 3 else tuple(f"x{i + 1}" for i in range(n))


@frozen
class AnsatzField:
    """A denominator and a finite list of candidate numerators, one unknown coefficient per candidate."""

    denominator: MultiPoly
    basis: Tuple[Numerator, ...] = field(converter=lambda b: tuple(tuple(v) for v in b))
    labels: Tuple[str, ...] = field(converter=tuple)

    def __attrs_post_init__(self) -> None:
        if not self.denominator:
            raise ValueError("The denominator vanishes identically")
        deg = self.denominator.homogeneous_degree()
        if deg is None:
            raise ValueError(f"Denominator {self.denominator} is not homogeneous")
        if len(self.labels) != len(self.basis):
            raise ValueError("Need one label per ansatz numerator")
        for numerator in self.basis:
            if not all(c.is_homogeneous(deg + 2) for c in numerator):
                raise ValueError(f"Ansatz numerator {numerator} is not of degree {deg + 2}")

    @classmethod
    def general(cls, denominator: MultiPoly, n: Optional[int] = None) -> AnsatzField:
        """Every monomial of degree deg(D) + 2 in every component."""
        variables = denominator.variables
        n = n or len(variables)
        deg = (denominator.homogeneous_degree() or 0) + 2
        zero = MultiPoly.zero(variables)
        basis = []
        labels = []
        for i in range(n):
            for exps in monomials(deg, len(variables)):
                basis.append(tuple(MultiPoly.monomial(exps, variables) if k == i else zero for k in range(n)))
                labels.append(f"c{i}_{''.join(map(str, exps))}")
        return cls(denominator, basis, labels)

    @property
    def basis_monomials(self) -> Tuple[Tuple[Exponents, ...], ...]:
        """Per component, the numerator monomials the ansatz can reach."""
        n = len(self.basis[0]) if self.basis else 0
        return tuple(
            tuple(sorted({e for numerator in self.basis for e in numerator[i].terms}, reverse=True))
            for i in range(n)
        )

    def combine(self, coefficients: Mapping[int, Scalar]) -> RationalVF:
        return RationalVF(_combine(self.basis, coefficients), self.denominator)

    def fields(self) -> Tuple[RationalVF, ...]:
        return tuple(RationalVF(b, self.denominator) for b in self.basis)


def _combine(basis: Sequence[Numerator], coefficients: Mapping[int, Scalar]) -> Numerator:
    n = len(basis[0])
    variables = basis[0][0].variables
    out = [MultiPoly.zero(variables) for _ in range(n)]
    for j, c in coefficients.items():
        for i in range(n):
            if basis[j][i]:
                out[i] = out[i] + basis[j][i].scale(c)
    return tuple(out)


@frozen
class InvariantSpace:
    """The exact space of invariant fields over one denominator."""

    basis: Tuple[RationalVF, ...]
    group: MatrixGroup = field(repr=False)
    denominator: MultiPoly
    character: Tuple[Scalar, ...]
    coefficients: Tuple[Dict[int, Scalar], ...] = field(repr=False)
    ansatz: AnsatzField = field(repr=False)

    @property
    def dimension(self) -> int:
        return len(self.basis)

    @property
    def denominator_degree(self) -> int:
        return self.denominator.degree

    def to_json(self) -> Dict[str, Any]:
        return {
            "dimension": self.dimension,
            "denominator_degree": self.denominator_degree,
            "denominator": self.denominator.to_json(),
            "character": [c.to_json() for c in self.character],
            "basis": [v.normalized().to_json() for v in self.basis],
        }


@frozen
class RelativeInvariantSpace:
    """A basis of the degree-k polynomials with D(gx) = χ(g)D(x), χ given on the generators."""

    degree: int
    character: Tuple[Scalar, ...]
    basis: Tuple[MultiPoly, ...]

    @property
    def dimension(self) -> int:
        return len(self.basis)


def character_of(denominator: MultiPoly, g: ExactMatrix) -> Scalar:
    """Return λ with D(gx) = λD(x)."""
    lam = denominator.compose_linear(g).ratio_to(denominator)
    if lam is None or not lam:
        raise NotRelativeInvariantError(f"{denominator} is not a relative invariant of {g}")
    return lam


def conjugation_action(v: RationalVF, g: ExactMatrix) -> RationalVF:
    """Return g⁻¹ ∘ V ∘ g, expressed over V's own denominator whenever that denominator is a relative invariant."""
    if g.n != v.n or len(v.variables) != v.n:
        raise ValueError(f"Cannot act with a {g.n}x{g.n} matrix on a field of dimension {v.n}")
    g_inv = g.inverse()
    sub = LinearSubstitution(g, v.variables)
    composed = [sub.apply(c) for c in v.components]
    den = sub.apply(v.denominator)
    numerators = tuple(_apply_matrix(g_inv, composed))
    lam = den.ratio_to(v.denominator)
    if lam:
        inv = lam ** -1
        return RationalVF(tuple(c.scale(inv) for c in numerators), v.denominator)
    return RationalVF(numerators, den)


def _apply_matrix(m: ExactMatrix, vector: Sequence[MultiPoly]) -> List[MultiPoly]:
    ret = []
    for row in m.rows:
        total = MultiPoly.zero(vector[0].variables)
        for coef, comp in zip(row, vector):
            if coef and comp:
                total = total + comp.scale(coef)
        ret.append(total)
    return ret


def _twisted_residual(sub: LinearSubstitution, g_inv: ExactMatrix, chi: Scalar, numerator: Numerator) -> Numerator:
    composed = [sub.apply(c) if c else c for c in numerator]
    moved = _apply_matrix(g_inv, composed)
    return tuple(a - b.scale(chi) for a, b in zip(moved, numerator))


def _kernel(vectors: Sequence[Sequence[MultiPoly]]) -> List[Dict[int, Scalar]]:
    """Exact kernel of the linear map j ↦ vectors[j] (vectors of polynomials)."""
    keys: Dict[Tuple[int, Exponents], int] = {}
    rows: List[Dict[int, Scalar]] = []
    for j, vector in enumerate(vectors):
        for i, comp in enumerate(vector):
            for exps, coef in comp.terms.items():
                key = (i, exps)
                if key not in keys:
                    keys[key] = len(rows)
                    rows.append({})
                rows[keys[key]][j] = coef
    return nullspace(rows, len(vectors))


def _compose_coefficients(
    outer: Sequence[Mapping[int, Scalar]], inner: Sequence[Mapping[int, Scalar]]
) -> List[Dict[int, Scalar]]:
    ret = []
    for vec in outer:
        acc: Dict[int, Scalar] = {}
        for j, c in vec.items():
            for k, v in inner[j].items():
                acc[k] = acc[k] + c * v if k in acc else c * v
        ret.append({k: v for k, v in acc.items() if v})
    return ret


def solve_invariant_space(
    group: MatrixGroup,
    denominator: MultiPoly,
    ansatz: Optional[AnsatzField] = None,
    generators: Optional[Sequence[ExactMatrix]] = None,
) -> InvariantSpace:
    """Solve for every field over the denominator that is invariant under the group.

    Parameters
    ----------
    group : MatrixGroup
        The finite group.
    denominator : MultiPoly
        A homogeneous relative invariant of the group.
    ansatz : AnsatzField, optional
        Restrict the numerators to a span; by default every monomial of the right degree.
    generators : Sequence[ExactMatrix], optional
        Impose invariance under these elements only and skip the full-group check; by default the group's own
        generators, followed by the check over every element.

    Raises
    ------
    NotRelativeInvariantError
        If the denominator is not a relative invariant of an imposed element
    ArithmeticError
        If a kernel vector fails the full-group check
    """
    if not denominator:
        raise ValueError("The denominator vanishes identically")
    if len(denominator.variables) != group.dimension:
        raise ValueError(f"Denominator has {len(denominator.variables)} variables, group acts on {group.dimension}")
    if ansatz is None:
        ansatz = AnsatzField.general(denominator, group.dimension)
    elif ansatz.denominator != denominator:
        raise ValueError("The ansatz uses a different denominator")
    imposed = tuple(generators) if generators is not None else group.generators
    chis = tuple(character_of(denominator, g) for g in imposed)
    basis: List[Numerator] = list(ansatz.basis)
    coefficients: List[Dict[int, Scalar]] = [{j: GoldenNumber(1)} for j in range(len(basis))]
    for idx, (g, chi) in enumerate(zip(imposed, chis)):
        if not basis:
            break
        sub = LinearSubstitution(g, denominator.variables)
        g_inv = g.inverse()
        kernel = _kernel([_twisted_residual(sub, g_inv, chi, b) for b in basis])
        basis = [_combine(basis, vec) for vec in kernel]
        coefficients = _compose_coefficients(kernel, coefficients)
        logger.debug("after element %d of %d: kernel dimension %d", idx + 1, len(imposed), len(basis))
    fields = tuple(RationalVF(b, denominator) for b in basis)
    if generators is None:
        for h in group.elements:
            chi = character_of(denominator, h)
            sub = LinearSubstitution(h, denominator.variables)
            h_inv = h.inverse()
            for b in basis:
                if any(_twisted_residual(sub, h_inv, chi, b)):
                    raise ArithmeticError(f"kernel vector is not invariant under {h}")
    return InvariantSpace(fields, group, denominator, chis, tuple(coefficients), ansatz)


def _element_order(g: ExactMatrix, cap: int = 1000) -> int:
    current = g
    for k in range(1, cap + 1):
        if current.is_identity():
            return k
        current = current @ g
    raise ValueError(f"{g} has no finite order below {cap}")


def _eigenvalue_candidates(g: ExactMatrix) -> List[Scalar]:
    sample = next((v for row in g.rows for v in row if not isinstance(v, GoldenNumber)), GoldenNumber(1))
    order = _element_order(g)
    return [lam for lam in roots_of_unity(sample) if lam ** order == 1]


def relative_invariants(group: MatrixGroup, degree: int) -> List[RelativeInvariantSpace]:
    """Every character with a nonzero space of degree-k relative invariants, with an exact basis.

    Characters are searched among the roots of unity of the group's own scalar field.
    """
    variables = default_variables(group.dimension)
    spaces: List[Tuple[Tuple[Scalar, ...], List[MultiPoly]]] = [
        ((), [MultiPoly.monomial(e, variables) for e in monomials(degree, len(variables))])
    ]
    for g in group.generators:
        sub = LinearSubstitution(g, variables)
        candidates = _eigenvalue_candidates(g)
        refined = []
        for chars, basis in spaces:
            images = [sub.apply(b) for b in basis]
            for lam in candidates:
                kernel = _kernel([(img - b.scale(lam), ) for img, b in zip(images, basis)])
                if kernel:
                    refined.append((chars + (lam, ), [_combine([(b, ) for b in basis], vec)[0] for vec in kernel]))
        spaces = refined
    ret = [
        RelativeInvariantSpace(degree, chars, tuple(p.monic() for p in basis)) for chars, basis in spaces
    ]
    logger.debug("degree %d: %d characters with relative invariants", degree, len(ret))
    return ret


@frozen
class VerdictEntry:
    """One (character, denominator) pair examined by the sweep."""

    degree: int
    character: Tuple[Scalar, ...]
    denominator: MultiPoly
    invariant_dimension: int
    numerator_dimension: int

    @property
    def family_dimension(self) -> int:
        return self.invariant_dimension * self.numerator_dimension

    def to_json(self) -> Dict[str, Any]:
        return {
            "degree": self.degree,
            "character": [c.to_json() for c in self.character],
            "denominator": str(self.denominator),
            "relative_invariants": self.invariant_dimension,
            "numerators": self.numerator_dimension,
            "family_dimension": self.family_dimension,
        }


def _reason_matches(instance: SuperflowVerdict, attribute: Any, value: bool) -> None:
    if value != (instance.reason is VerdictReason.UNIQUE_FIELD):
        raise ValueError("exists must be true exactly for a unique field")


@frozen
class SuperflowVerdict:
    exists: bool = field(validator=_reason_matches)
    reason: VerdictReason
    witness: Optional[RationalVF] = None
    degree: Optional[int] = None
    entries: Tuple[VerdictEntry, ...] = ()
    extension: Optional[ExactMatrix] = None

    @property
    def family_dimension(self) -> int:
        if self.degree is None:
            return 0
        return sum(e.family_dimension for e in self.entries if e.degree == self.degree)

    def to_json(self) -> Dict[str, Any]:
        return {
            "exists": self.exists,
            "reason": self.reason.value,
            "degree": self.degree,
            "family_dimension": self.family_dimension,
            "witness": self.witness.normalized().to_json() if self.witness is not None else None,
            "witness_text": str(self.witness.normalized()) if self.witness is not None else None,
            "extension": self.extension.to_json() if self.extension is not None else None,
            "entries": [e.to_json() for e in self.entries],
        }


def extending_symmetry(group: MatrixGroup, v: RationalVF) -> Optional[ExactMatrix]:
    """Look for a signed permutation (in the group's own coordinates) outside the group that also fixes V."""
    s = group.conjugator
    s_inv = s.inverse() if s is not None else None
    for h in signed_permutations(group.dimension):
        candidate = h if s is None else s @ h @ s_inv
        if candidate in group:
            continue
        if conjugation_action(v, candidate).equivalent(v):
            return candidate
    return None


def superflow_verdict(group: MatrixGroup, max_denominator_degree: int) -> SuperflowVerdict:
    """Sweep relative-invariant denominators by increasing degree and classify the first nonzero family."""
    if max_denominator_degree < 0:
        raise ValueError("max_denominator_degree must be non-negative")
    if contains_minus_identity(group):
        return SuperflowVerdict(False, VerdictReason.CONTAINS_MINUS_I)
    entries: List[VerdictEntry] = []
    for degree in range(max_denominator_degree + 1):
        total = 0
        witness: Optional[RationalVF] = None
        for rel in relative_invariants(group, degree):
            space = solve_invariant_space(group, rel.basis[0])
            entries.append(VerdictEntry(degree, rel.character, rel.basis[0], rel.dimension, space.dimension))
            total += rel.dimension * space.dimension
            if space.dimension:
                witness = space.basis[0]
        logger.debug("denominator degree %d: family dimension %d", degree, total)
        if not total:
            continue
        if total > 1:
            return SuperflowVerdict(False, VerdictReason.FAMILY_DIMENSION_GT_1, witness, degree, tuple(entries))
        extension = extending_symmetry(group, witness)  # type: ignore[arg-type]
        if extension is not None:
            return SuperflowVerdict(
                False, VerdictReason.SYMMETRY_EXTENDS, witness, degree, tuple(entries), extension
            )
        return SuperflowVerdict(True, VerdictReason.UNIQUE_FIELD, witness, degree, tuple(entries))
    return SuperflowVerdict(False, VerdictReason.ZERO_ONLY, None, None, tuple(entries))


def galois_swap_conjugate(v: RationalVF) -> RationalVF:
    """Galois-conjugate the coefficients, then conjugate by the swap of x and y."""
    return conjugation_action(v.conjugate(), SWAP_XY)


@frozen
class SymmetricExtensionReport:
    n: int
    group_order: int
    dimension: int
    field: Optional[RationalVF]
    coefficients: Dict[str, Fraction]
    permutation_residual_zero: bool

    @property
    def passed(self) -> bool:
        return (
            self.dimension == 1
            and self.coefficients.get("a") == 0
            and self.coefficients.get("b") == 0
            and self.permutation_residual_zero
        )

    def to_json(self) -> Dict[str, Any]:
        return {
            "n": self.n,
            "group_order": self.group_order,
            "dimension": self.dimension,
            "field": str(self.field) if self.field is not None else None,
            "coefficients": {k: [v.numerator, v.denominator] for k, v in self.coefficients.items()},
            "permutation_residual_zero": self.permutation_residual_zero,
            "passed": self.passed,
        }


def quadratic_field(n: int, variables: Sequence[str]) -> Tuple[MultiPoly, ...]:
    """Q_k = x_k² − 2/(n−1)·x_k·Σ_{i≠k} x_i for k = 1…n, over the given variables."""
    xs = MultiPoly.generators(variables)[:n]
    total = sum(xs, MultiPoly.zero(variables))
    return tuple(x * x - (x * (total - x)).scale(Fraction(2, n - 1)) for x in xs)


def verify_symmetric_extension(n: int) -> SymmetricExtensionReport:
    """Solve the constrained ansatz of the reducible family in dimension n + 1 and confirm a = b = 0."""
    if n < 3:
        raise ValueError("verify_symmetric_extension needs n >= 3")
    group = build_catalog_group(GroupSpec(GroupFamily.SYMMETRIC_REP_TIMES_Z2, n))
    variables = default_variables(n + 1)
    xs = MultiPoly.generators(variables)
    last = xs[-1]
    zero = MultiPoly.zero(variables)
    q_hat = (*quadratic_field(n, variables), zero)
    a_field = (*([last * last] * n), zero)
    b_field = (*([zero] * n), last * sum(xs[:n], zero))
    one = MultiPoly.constant(1, variables)
    ansatz = AnsatzField(one, (q_hat, a_field, b_field), ("lambda", "a", "b"))
    space = solve_invariant_space(group, one, ansatz)
    coefficients: Dict[str, Fraction] = {}
    witness = space.basis[0] if space.dimension else None
    if space.dimension == 1:
        vec = space.coefficients[0]
        lead = vec.get(0)
        if lead:
            coefficients = {
                label: (vec.get(j, GoldenNumber(0)) * lead ** -1).as_fraction()
                for j, label in enumerate(ansatz.labels)
            }
    # Q on its own, in n variables, against every permutation matrix of S_n
    small = default_variables(n)
    q_small = RationalVF.polynomial(quadratic_field(n, small))
    permutation_zero = all(
        conjugation_action(q_small, ExactMatrix.permutation(perm)) == q_small
        for perm in permutations(range(n))
    )
    report = SymmetricExtensionReport(n, group.order, space.dimension, witness, coefficients, permutation_zero)
    logger.info("symmetric extension n=%d: group order %d, dimension %d, passed=%s", n, group.order, space.dimension,
                report.passed)
    return report
