"""Finite matrix groups: closure, the catalog of finite subgroups of O(3), and diagonalizing conjugation."""

from __future__ import annotations

from collections import deque
from fractions import Fraction
from functools import lru_cache
from itertools import permutations, product
from logging import getLogger
from math import factorial
from typing import TYPE_CHECKING, FrozenSet, Optional, Tuple

from attrs import field, frozen

from .consts import GROUP_CAP, GroupFamily, GroupTag
from .field import PHI, CyclotomicNumber
from .matrix import ExactMatrix, SingularMatrixError

if TYPE_CHECKING:  # pragma: no cover
    from typing import Any, Dict, Iterable, Iterator

logger = getLogger(__name__)


class GroupNotFiniteError(RuntimeError):
    """Raised when a closure search exceeds its cap."""


class OrderMismatchError(ArithmeticError):
    """Raised when a catalog group does not have its tabulated order."""


@frozen
class GroupSpec:
    """A row of the catalog: a family plus its integer parameter (d, ℓ or n) where the family has one."""

    family: GroupFamily = field(converter=GroupFamily)
    parameter: Optional[int] = None
    diagonalized: bool = False

    def __attrs_post_init__(self) -> None:
        if self.family.parametric:
            minimum = 2 if self.family in (GroupFamily.SYMMETRIC_REP, GroupFamily.SYMMETRIC_REP_TIMES_Z2) else 1
            if self.parameter is None or self.parameter < minimum:
                raise ValueError(f"{self.family.value} needs an integer parameter >= {minimum}")
        elif self.parameter is not None:
            raise ValueError(f"{self.family.value} takes no parameter")
        if self.diagonalized and not self.family.diagonalizable:
            raise ValueError(f"{self.family.value} has no diagonalized form")

    @classmethod
    def parse(cls, text: str) -> GroupSpec:
        """Parse ``family[:parameter][:diag]``, e.g. ``icosahedral`` or ``mixed-dihedral:4:diag``."""
        family, *rest = text.strip().split(":")
        diagonalized = False
        if rest and rest[-1] == "diag":
            diagonalized = True
            rest = rest[:-1]
        if len(rest) > 1:
            raise ValueError(f"Cannot parse group spec {text!r}")
        return cls(family, int(rest[0]) if rest else None, diagonalized)

    @property
    def expected_order(self) -> int:
        d = self.parameter or 1
        return {
            GroupFamily.CYCLIC: d,
            GroupFamily.CYCLIC_TIMES_Z2: 2 * d,
            GroupFamily.MIXED_CYCLIC: 2 * d,
            GroupFamily.DIHEDRAL: 2 * d,
            GroupFamily.DIHEDRAL_TIMES_Z2: 4 * d,
            GroupFamily.MIXED_DIHEDRAL_CYCLIC: 2 * d,
            GroupFamily.TETRAHEDRAL: 12,
            GroupFamily.TETRAHEDRAL_TIMES_Z2: 24,
            GroupFamily.MIXED_TETRAHEDRAL: 24,
            GroupFamily.OCTAHEDRAL: 24,
            GroupFamily.OCTAHEDRAL_TIMES_Z2: 48,
            GroupFamily.MIXED_DIHEDRAL: 4 * d,
            GroupFamily.ICOSAHEDRAL: 60,
            GroupFamily.ICOSAHEDRAL_TIMES_Z2: 120,
            GroupFamily.SYMMETRIC_REP: factorial(d + 1),
            GroupFamily.SYMMETRIC_REP_TIMES_Z2: 2 * factorial(d + 1),
        }[self.family]

    @property
    def tag(self) -> GroupTag:
        if self.family is GroupFamily.MIXED_DIHEDRAL:
            return GroupTag.PRISM if (self.parameter or 1) % 2 else GroupTag.ANTIPRISM
        return _TAGS[self.family]

    def __str__(self) -> str:
        ret = self.family.value
        if self.parameter is not None:
            ret += f":{self.parameter}"
        if self.diagonalized:
            ret += ":diag"
        return ret


_TAGS = {
    GroupFamily.CYCLIC: GroupTag.CYCLIC,
    GroupFamily.CYCLIC_TIMES_Z2: GroupTag.PRODUCT_WITH_MINUS_I,
    GroupFamily.MIXED_CYCLIC: GroupTag.MIXED,
    GroupFamily.DIHEDRAL: GroupTag.DIHEDRAL,
    GroupFamily.DIHEDRAL_TIMES_Z2: GroupTag.PRODUCT_WITH_MINUS_I,
    GroupFamily.MIXED_DIHEDRAL_CYCLIC: GroupTag.MIXED,
    GroupFamily.TETRAHEDRAL: GroupTag.TETRAHEDRAL,
    GroupFamily.TETRAHEDRAL_TIMES_Z2: GroupTag.PRODUCT_WITH_MINUS_I,
    GroupFamily.MIXED_TETRAHEDRAL: GroupTag.MIXED_TETRAHEDRAL,
    GroupFamily.OCTAHEDRAL: GroupTag.OCTAHEDRAL,
    GroupFamily.OCTAHEDRAL_TIMES_Z2: GroupTag.PRODUCT_WITH_MINUS_I,
    GroupFamily.ICOSAHEDRAL: GroupTag.ICOSAHEDRAL,
    GroupFamily.ICOSAHEDRAL_TIMES_Z2: GroupTag.PRODUCT_WITH_MINUS_I,
    GroupFamily.SYMMETRIC_REP: GroupTag.SYMMETRIC_REP,
    GroupFamily.SYMMETRIC_REP_TIMES_Z2: GroupTag.SYMMETRIC_REP,
}


@frozen(eq=False)
class MatrixGroup:
    """A finite group of exact matrices, in breadth-first discovery order, with its provenance."""

    elements: Tuple[ExactMatrix, ...]
    generators: Tuple[ExactMatrix, ...]
    tag: GroupTag = GroupTag.GENERATED
    spec: Optional[GroupSpec] = None
    conjugator: Optional[ExactMatrix] = None
    _index: FrozenSet[ExactMatrix] = field(init=False, repr=False)

    def __attrs_post_init__(self) -> None:
        object.__setattr__(self, '_index', frozenset(self.elements))

    @property
    def order(self) -> int:
        return len(self.elements)

    @property
    def dimension(self) -> int:
        return self.elements[0].n

    def __len__(self) -> int:
        return len(self.elements)

    def __iter__(self) -> Iterator[ExactMatrix]:
        return iter(self.elements)

    def __contains__(self, item: object) -> bool:
        return item in self._index

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, MatrixGroup):
            return NotImplemented
        return self._index == other._index

    def __hash__(self) -> int:
        return hash(self._index)

    def is_closed(self) -> bool:
        """Closure under product and inverse, checked element by element."""
        return all(a @ b in self for a in self.elements for b in self.generators) and \
            all(g.inverse() in self for g in self.elements)

    def is_orthogonal(self) -> bool:
        return all(g.is_orthogonal() for g in self.elements)

    def is_unitary(self) -> bool:
        return all(g.is_unitary() for g in self.elements)

    def determinants(self) -> Dict[str, int]:
        """Count elements by determinant."""
        census: Dict[str, int] = {}
        for g in self.elements:
            key = str(g.determinant())
            census[key] = census.get(key, 0) + 1
        return census

    def rotation_subgroup(self) -> Tuple[ExactMatrix, ...]:
        return tuple(g for g in self.elements if g.determinant() == 1)

    def has_index_two_rotation_subgroup(self) -> bool:
        """For mixed groups: H = Γ ∩ SO(3) is a subgroup of index 2."""
        rotations = self.rotation_subgroup()
        index = set(rotations)
        closed = all(a @ b in index for a in rotations for b in rotations)
        return closed and 2 * len(rotations) == self.order

    def to_json(self) -> Dict[str, Any]:
        return {
            "tag": self.tag.value,
            "order": self.order,
            "spec": str(self.spec) if self.spec else None,
            "elements": [g.to_json() for g in self.elements],
        }

    def __str__(self) -> str:
        return f"MatrixGroup({self.spec or self.tag.value}, order={self.order})"


def generate_group(
    generators: Iterable[ExactMatrix],
    cap: int = GROUP_CAP,
    tag: GroupTag = GroupTag.GENERATED,
    spec: Optional[GroupSpec] = None,
) -> MatrixGroup:
    """Breadth-first closure of the generators under multiplication.

    Parameters
    ----------
    generators : Iterable[ExactMatrix]
        Square invertible matrices of one dimension.
    cap : int, optional
        Give up once more than this many elements are found, by default GROUP_CAP

    Raises
    ------
    SingularMatrixError
        If a generator is not invertible
    GroupNotFiniteError
        If the closure exceeds cap
    """
    gens = tuple(generators)
    if not gens:
        raise ValueError("generate_group needs at least one generator")
    n = gens[0].n
    if any(g.n != n for g in gens):
        raise ValueError("Generators have different dimensions")
    for g in gens:
        if not g.determinant():
            raise SingularMatrixError(f"Generator {g} is not invertible")
    identity = ExactMatrix.identity(n)
    seen = {identity}
    found = [identity]
    queue = deque(found)
    while queue:
        current = queue.popleft()
        for g in gens:
            nxt = current @ g
            if nxt not in seen:
                seen.add(nxt)
                found.append(nxt)
                queue.append(nxt)
                if len(found) > cap:
                    raise GroupNotFiniteError(f"closure exceeds {cap} elements")
    logger.debug("closure of %d generators in dimension %d has %d elements", len(gens), n, len(found))
    return MatrixGroup(tuple(found), gens, tag, spec)


def rotation_z(k: int, m: int, z_sign: int = 1, order: Optional[int] = None) -> ExactMatrix:
    """Rotation by 2πk/m about the z-axis, with z_sign on the axis."""
    c = CyclotomicNumber.cos_2pi(k, m, order)
    s = CyclotomicNumber.sin_2pi(k, m, order)
    return ExactMatrix([[c, -s, 0], [s, c, 0], [0, 0, z_sign]])


SWAP_XY = ExactMatrix.permutation((1, 0, 2))
CYCLE_XYZ = ExactMatrix([[0, 0, 1], [1, 0, 0], [0, 1, 0]])
MINUS_I3 = -ExactMatrix.identity(3)
HALF_TURN_Z = ExactMatrix.diagonal((-1, -1, 1))
QUARTER_TURN_Z = ExactMatrix([[0, -1, 0], [1, 0, 0], [0, 0, 1]])
DIHEDRAL_FLIP = ExactMatrix([[0, 1, 0], [1, 0, 0], [0, 0, -1]])
ICOSAHEDRAL_GENERATORS = (
    HALF_TURN_Z,
    CYCLE_XYZ,
    ExactMatrix([
        [Fraction(1, 2), -PHI / 2, PHI.inv() / 2],
        [PHI / 2, PHI.inv() / 2, Fraction(-1, 2)],
        [PHI.inv() / 2, Fraction(1, 2), PHI / 2],
    ]),
)


def tau_matrix() -> ExactMatrix:
    """τ = 2^{-1/2}[[1, i], [i, 1]] ⊕ 1, which diagonalizes rotations about the z-axis."""
    r = CyclotomicNumber.sqrt2(8) * Fraction(1, 2)
    i = CyclotomicNumber.imaginary_unit(8)
    return ExactMatrix([[r, r * i, 0], [r * i, r, 0], [0, 0, 1]])


def symmetric_generators(n: int) -> Tuple[ExactMatrix, ...]:
    """κ together with a transposition and an n-cycle: the n-dimensional representation of S_{n+1}."""
    negate_first = ExactMatrix([[-1 if j == 0 else int(i == j) for j in range(n)] for i in range(n)])
    swap = ExactMatrix.permutation((1, 0, *range(2, n)))
    cycle = ExactMatrix.permutation((*range(1, n), 0))
    return negate_first, swap, cycle


def _catalog_generators(spec: GroupSpec) -> Tuple[ExactMatrix, ...]:
    fam = spec.family
    d = spec.parameter or 1
    if fam is GroupFamily.CYCLIC:
        return (rotation_z(1, d), )
    if fam is GroupFamily.CYCLIC_TIMES_Z2:
        return rotation_z(1, d), MINUS_I3
    if fam is GroupFamily.MIXED_CYCLIC:
        return (-rotation_z(1, 2 * d), )
    if fam is GroupFamily.DIHEDRAL:
        return rotation_z(1, d), DIHEDRAL_FLIP
    if fam is GroupFamily.DIHEDRAL_TIMES_Z2:
        return rotation_z(1, d), DIHEDRAL_FLIP, MINUS_I3
    if fam is GroupFamily.MIXED_DIHEDRAL_CYCLIC:
        return rotation_z(1, d), SWAP_XY
    if fam is GroupFamily.TETRAHEDRAL:
        return CYCLE_XYZ, HALF_TURN_Z
    if fam is GroupFamily.TETRAHEDRAL_TIMES_Z2:
        return CYCLE_XYZ, HALF_TURN_Z, MINUS_I3
    if fam is GroupFamily.MIXED_TETRAHEDRAL:
        return CYCLE_XYZ, HALF_TURN_Z, SWAP_XY
    if fam is GroupFamily.OCTAHEDRAL:
        return CYCLE_XYZ, QUARTER_TURN_Z
    if fam is GroupFamily.OCTAHEDRAL_TIMES_Z2:
        return CYCLE_XYZ, QUARTER_TURN_Z, MINUS_I3
    if fam is GroupFamily.MIXED_DIHEDRAL:
        # antiprism for even ℓ, prism for odd ℓ
        gamma = rotation_z(1, 2 * d, -1) if d % 2 == 0 else rotation_z(1, d, -1)
        return gamma, SWAP_XY
    if fam is GroupFamily.ICOSAHEDRAL:
        return ICOSAHEDRAL_GENERATORS
    if fam is GroupFamily.ICOSAHEDRAL_TIMES_Z2:
        return (*ICOSAHEDRAL_GENERATORS, MINUS_I3)
    if fam is GroupFamily.SYMMETRIC_REP:
        return symmetric_generators(d)
    flip = ExactMatrix.diagonal((*([1] * d), -1))
    return (*(ExactMatrix.block_diagonal(g, ExactMatrix.identity(1)) for g in symmetric_generators(d)), flip)


@lru_cache(maxsize=None)
def build_catalog_group(spec: GroupSpec) -> MatrixGroup:
    """Build a catalog group from its displayed generators and assert its tabulated order."""
    expected = spec.expected_order
    gens = _catalog_generators(spec)
    group = generate_group(gens, cap=max(GROUP_CAP, expected), tag=spec.tag, spec=spec)
    if group.order != expected:
        raise OrderMismatchError(f"{spec} generated {group.order} elements, expected {expected}")
    if spec.diagonalized:
        group = conjugate_group(group, tau_matrix())
    logger.debug("built %s", group)
    return group


def conjugate_group(group: MatrixGroup, s: ExactMatrix) -> MatrixGroup:
    """Return {S g S⁻¹ : g ∈ G}, recording S as (part of) the group's conjugator."""
    s_inv = s.inverse()
    elements = tuple(s @ g @ s_inv for g in group.elements)
    generators = tuple(s @ g @ s_inv for g in group.generators)
    conjugator = s if group.conjugator is None else s @ group.conjugator
    ret = MatrixGroup(elements, generators, group.tag, group.spec, conjugator)
    if ret.order != group.order:  # pragma: no cover
        raise OrderMismatchError("conjugation changed the group order")
    return ret


def contains_minus_identity(group: MatrixGroup) -> bool:
    return -ExactMatrix.identity(group.dimension) in group


@lru_cache(maxsize=None)
def signed_permutations(n: int = 3) -> Tuple[ExactMatrix, ...]:
    """All 2ⁿ·n! signed permutation matrices."""
    return tuple(
        ExactMatrix.permutation(perm, signs)
        for perm in permutations(range(n))
        for signs in product((1, -1), repeat=n)
    )
