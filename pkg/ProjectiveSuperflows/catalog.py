"""The five named superflows, their fixed points, and the intersections of the icosahedral integrals."""

from __future__ import annotations

from functools import lru_cache
from itertools import product
from logging import Logger, getLogger
from math import ceil, cos, log2
from typing import TYPE_CHECKING, Tuple

import numpy as np
from attrs import define, field, frozen
from scipy.sparse import coo_matrix
from scipy.sparse.csgraph import connected_components
from scipy.spatial import ConvexHull

from .consts import (BOUNDARY_TOLERANCE, FINITE_DIFFERENCE_STEP, INDEX_THRESHOLD, JITTER, MIN_RESOLUTION,
                     ComponentKind, FixedPointClass, GroupFamily, SuperflowName)
from .field import PHI, SQRT5, CyclotomicNumber, GoldenNumber
from .group import GroupSpec, MatrixGroup, build_catalog_group, tau_matrix
from .invariant import conjugation_action
from .matrix import ExactMatrix
from .poly import XYZ, MultiPoly, RationalVF, lie_derivative, vf_divergence
from .util import seeded_rng

if TYPE_CHECKING:  # pragma: no cover
    from typing import Any, Dict, List, Mapping, Optional, Sequence, Union

    from numpy.typing import ArrayLike, NDArray

logger = getLogger(__name__)


class SuperflowConstructionError(RuntimeError):
    """Raised when a catalog field fails one of its own exact checks."""


class BoundaryCaseError(ValueError):
    """Raised when a level is too close to a threshold for a grid to decide; refine manually."""


class DegenerateLinearizationError(ArithmeticError):
    """Raised when the tangent Jacobian at a fixed point is numerically singular."""


@define(slots=False)
class Superflow:
    """A catalog entry: an exact field, its symmetry group, and its first integrals."""

    name: SuperflowName
    field: RationalVF
    symmetry_group: MatrixGroup = field(repr=False)
    first_integrals: Tuple[MultiPoly, ...] = field(converter=tuple)
    integral_labels: Tuple[str, ...] = field(converter=tuple)
    genus_metadata: int
    logger: Logger = field(init=False, default=None, eq=False, repr=False)  # type: ignore[assignment]

    def __attrs_post_init__(self) -> None:
        """Initialize state that doesn't make sense to exist in the init."""
        self.logger = getLogger(f"{type(self).__qualname__}[{id(self)}]")

    def __getstate__(self) -> Mapping[str, Any]:
        """Drop the logger before pickling."""
        state = self.__dict__.copy()
        if 'logger' in state:
            del state['logger']
        return state

    def __setstate__(self, state: Mapping[str, Any]) -> None:
        self.__dict__.update(state)
        self.logger = getLogger(f"{type(self).__qualname__}[{id(self)}]")

    @property
    def spherical(self) -> bool:
        """Whether x²+y²+z² is one of the integrals, so the flow preserves the unit sphere."""
        return any(f == _sphere() for f in self.first_integrals)

    def verify(self) -> None:
        """Check the integrals, the divergence and the invariance under every group element."""
        for label, integral in zip(self.integral_labels, self.first_integrals):
            residual = lie_derivative(self.field, integral)
            if residual:
                raise SuperflowConstructionError(f"{self.name.display}: {label} is not a first integral ({residual})")
        if not vf_divergence(self.field).is_zero():
            raise SuperflowConstructionError(f"{self.name.display} is not solenoidal")
        for g in self.symmetry_group:
            if not conjugation_action(self.field, g).equivalent(self.field):
                raise SuperflowConstructionError(f"{self.name.display} is not invariant under {g}")
        self.logger.debug("verified %s against %d group elements", self.name.display, self.symmetry_group.order)

    def vector(self, points: ArrayLike) -> NDArray[np.float64]:
        """Evaluate the field at an array of points (last axis holds x, y, z)."""
        return np.real(self.field.evaluate_numeric(points))

    def integral_values(self, points: ArrayLike) -> NDArray[np.float64]:
        """Evaluate every first integral; the last axis indexes the integrals."""
        return np.stack([np.real(f.evaluate_numeric(points)) for f in self.first_integrals], axis=-1)

    def to_json(self) -> Dict[str, Any]:
        return {
            "name": self.name.value,
            "display": self.name.display,
            "field": str(self.field),
            "group_order": self.symmetry_group.order,
            "group_tag": self.symmetry_group.tag.value,
            "first_integrals": {k: str(f) for k, f in zip(self.integral_labels, self.first_integrals)},
            "genus": self.genus_metadata,
            "spherical": self.spherical,
        }


def _xyz() -> Tuple[MultiPoly, ...]:
    return MultiPoly.generators(XYZ)


def _sphere() -> MultiPoly:
    x, y, z = _xyz()
    return x * x + y * y + z * z


def icosahedral_numerator() -> MultiPoly:
    """ϖ, the first component of the icosahedral numerator; ϱ and σ are its cyclic shifts."""
    x, y, z = _xyz()
    return (
        (5 - SQRT5) * y * z ** 5 + (5 + SQRT5) * y ** 5 * z - 20 * y ** 3 * z ** 3
        + (10 + 10 * SQRT5) * x ** 2 * y * z ** 3 + (10 - 10 * SQRT5) * x ** 2 * y ** 3 * z
        - 10 * x ** 4 * y * z
    )


def icosahedral_invariant() -> MultiPoly:
    """𝒱 = (φ²x²−y²)(φ²y²−z²)(φ²z²−x²)."""
    x, y, z = _xyz()
    phi2 = PHI * PHI
    return (phi2 * x * x - y * y) * (phi2 * y * y - z * z) * (phi2 * z * z - x * x)


def _cyclic_components(first: MultiPoly) -> Tuple[MultiPoly, MultiPoly, MultiPoly]:
    x, y, z = _xyz()
    return first, first.substitute((y, z, x)), first.substitute((z, x, y))


def _build(name: SuperflowName) -> Superflow:
    x, y, z = _xyz()
    one = MultiPoly.constant(1, XYZ)
    zero = MultiPoly.zero(XYZ)
    w = _sphere()
    if name is SuperflowName.ICOSAHEDRAL:
        return Superflow(
            name, RationalVF(_cyclic_components(icosahedral_numerator()), w * w),
            build_catalog_group(GroupSpec(GroupFamily.ICOSAHEDRAL)),
            (w, icosahedral_invariant()), ("W", "V"), 25,
        )
    if name is SuperflowName.OCTAHEDRAL:
        return Superflow(
            name, RationalVF(_cyclic_components(y ** 3 * z - y * z ** 3), w),
            build_catalog_group(GroupSpec(GroupFamily.OCTAHEDRAL)),
            (w, x ** 4 + y ** 4 + z ** 4), ("W", "quartic"), 9,
        )
    if name is SuperflowName.TETRAHEDRAL:
        return Superflow(
            name, RationalVF((y * z, x * z, x * y), one),
            build_catalog_group(GroupSpec(GroupFamily.MIXED_TETRAHEDRAL)),
            (x * x - y * y, x * x - z * z), ("x2-y2", "x2-z2"), 1,
        )
    if name is SuperflowName.PRISMATIC:
        return Superflow(
            name, RationalVF((-x * x + 2 * x * y + y * y, x * x + 2 * x * y - y * y, zero), one),
            build_catalog_group(GroupSpec(GroupFamily.MIXED_DIHEDRAL, 3)),
            (x ** 3 + 3 * x * x * y - 3 * x * y * y - y ** 3, z), ("cubic", "z"), 1,
        )
    return Superflow(
        name, RationalVF((x ** 3 - 3 * x * y * y, y ** 3 - 3 * x * x * y, zero), z),
        build_catalog_group(GroupSpec(GroupFamily.MIXED_DIHEDRAL, 4)),
        (x ** 3 * y - x * y ** 3, z), ("quartic", "z"), 3,
    )


@lru_cache(maxsize=None)
def build_superflow(name: Union[str, SuperflowName]) -> Superflow:
    """Build a catalog superflow and verify it exactly.

    Raises
    ------
    SuperflowConstructionError
        If an integral, the divergence, or the group invariance fails to check out.
    """
    ret = _build(SuperflowName(name))
    ret.verify()
    logger.info("built superflow %s (group order %d)", ret.name.display, ret.symmetry_group.order)
    return ret


@frozen
class FixedPoint:
    location: Tuple[GoldenNumber, GoldenNumber, GoldenNumber]
    kind: FixedPointClass
    index: int

    def unit(self) -> NDArray[np.float64]:
        vec = np.array([float(c) for c in self.location])
        return vec / np.linalg.norm(vec)

    def to_json(self) -> Dict[str, Any]:
        return {"location": [str(c) for c in self.location], "class": self.kind.value, "index": self.index}


def _orbit(base: Sequence[GoldenNumber]) -> List[Tuple[GoldenNumber, ...]]:
    """All sign changes and cyclic shifts of a direction, without repeats."""
    found = set()
    for shift in range(3):
        shifted = tuple(base[(i - shift) % 3] for i in range(3))
        for signs in product((1, -1), repeat=3):
            found.add(tuple(c * s for c, s in zip(shifted, signs)))
    return sorted(found, key=lambda p: tuple(float(c) for c in p))


def _fixed_point_table() -> List[Tuple[Tuple[GoldenNumber, ...], FixedPointClass, int]]:
    one, zero = GoldenNumber(1), GoldenNumber(0)
    phi_inv = PHI.inv()
    table = []
    for loc in _orbit((PHI, one, zero)):
        table.append((loc, FixedPointClass.PENTAGON_CENTER, 1))
    for base in ((one, one, one), (phi_inv, PHI, zero)):
        for loc in _orbit(base):
            table.append((loc, FixedPointClass.TRIANGLE_CENTER, 1))
    for base in ((PHI, phi_inv, one), (one, zero, zero)):
        for loc in _orbit(base):
            table.append((loc, FixedPointClass.EDGE, -1))
    return table


def _require_icosahedral(s: Superflow) -> None:
    if s.name is not SuperflowName.ICOSAHEDRAL:
        raise ValueError(f"Only the icosahedral superflow carries the fixed-point table, not {s.name.display}")


def enumerate_fixed_points(s: Superflow) -> List[FixedPoint]:
    """Return the 62 fixed directions of 𝕀, each checked by exact evaluation."""
    _require_icosahedral(s)
    ret = []
    for loc, kind, index in _fixed_point_table():
        value = s.field.evaluate(loc)
        if any(value):
            raise SuperflowConstructionError(f"{loc} is not a zero of {s.name.display}: {value}")
        ret.append(FixedPoint(loc, kind, index))  # type: ignore[arg-type]
    logger.debug("checked %d fixed points", len(ret))
    return ret


def _tangent_frame(u: NDArray[np.float64]) -> Tuple[NDArray[np.float64], NDArray[np.float64]]:
    axis = np.zeros(3)
    axis[int(np.argmin(np.abs(u)))] = 1.0
    e1 = np.cross(u, axis)
    e1 /= np.linalg.norm(e1)
    return e1, np.cross(u, e1)


def numeric_index(s: Superflow, p: Union[FixedPoint, ArrayLike], h: float = FINITE_DIFFERENCE_STEP) -> int:
    """Sign of the determinant of the linearized tangent field at a fixed point.

    Raises
    ------
    DegenerateLinearizationError
        If the determinant is below ``INDEX_THRESHOLD`` in absolute value.
    """
    u = p.unit() if isinstance(p, FixedPoint) else np.asarray(p, dtype=float)
    u = u / np.linalg.norm(u)
    e1, e2 = _tangent_frame(u)

    def tangent(a: float, b: float) -> NDArray[np.float64]:
        q = u + a * e1 + b * e2
        q = q / np.linalg.norm(q)
        v = s.vector(q)
        v = v - np.dot(v, q) * q
        return np.array([np.dot(v, e1), np.dot(v, e2)])

    jac = np.column_stack([
        (tangent(h, 0) - tangent(-h, 0)) / (2 * h),
        (tangent(0, h) - tangent(0, -h)) / (2 * h),
    ])
    det = float(np.linalg.det(jac))
    if abs(det) < INDEX_THRESHOLD:
        raise DegenerateLinearizationError(f"tangent Jacobian at {u} has determinant {det:g}")
    return 1 if det > 0 else -1


LEVEL_MIN = -PHI ** 3 / 5
LEVEL_MAX = PHI ** 3 / 27


def level_extremes() -> Tuple[GoldenNumber, GoldenNumber]:
    """Return (min, max) of 𝒱 on the unit sphere, read off exactly at (φ,1,0) and (1,1,1)."""
    v = icosahedral_invariant()
    pentagon = (PHI, GoldenNumber(1), GoldenNumber(0))
    low = v.evaluate(pentagon) / (PHI * PHI + 1) ** 3
    high = v.evaluate((1, 1, 1)) / GoldenNumber(27)
    if low != LEVEL_MIN or high != LEVEL_MAX:
        raise SuperflowConstructionError(f"level extremes came out as {low}, {high}")
    return low, high  # type: ignore[return-value]


@frozen
class LevelSetClass:
    xi: float
    component_count: int
    component_kind: ComponentKind
    case: int

    def to_json(self) -> Dict[str, Any]:
        return {
            "xi": self.xi,
            "component_count": self.component_count,
            "component_kind": self.component_kind.value,
            "case": self.case,
        }


_CASES = {
    1: (0, ComponentKind.EMPTY),
    2: (12, ComponentKind.ISOLATED_POINTS),
    3: (12, ComponentKind.CIRCLES),
    4: (60, ComponentKind.GREAT_CIRCLE_ARCS),
    5: (20, ComponentKind.CIRCLES),
    6: (20, ComponentKind.ISOLATED_POINTS),
    7: (0, ComponentKind.EMPTY),
}


def proposition_case(xi: Any) -> LevelSetClass:
    """Classify the intersection of 𝒱 = ξ with the unit sphere using exact comparisons."""
    value = GoldenNumber.coerce(xi)
    if value is None:
        raise TypeError(f"proposition_case needs an exact rational or golden level, got {xi!r}")
    if value < LEVEL_MIN:
        case = 1
    elif value == LEVEL_MIN:
        case = 2
    elif value.sign() < 0:
        case = 3
    elif not value:
        case = 4
    elif value < LEVEL_MAX:
        case = 5
    elif value == LEVEL_MAX:
        case = 6
    else:
        case = 7
    count, kind = _CASES[case]
    return LevelSetClass(float(value), count, kind, case)


def _edge_table(faces: NDArray[np.int64]) -> Tuple[NDArray[np.int64], NDArray[np.int64]]:
    """Unique sorted edges, and for each face the indices of its three edges."""
    pairs = np.stack([faces[:, [0, 1]], faces[:, [1, 2]], faces[:, [2, 0]]], axis=1).reshape(-1, 2)
    edges, inverse = np.unique(np.sort(pairs, axis=1), axis=0, return_inverse=True)
    return edges, inverse.reshape(-1, 3)


def _subdivide(
    vertices: NDArray[np.float64], faces: NDArray[np.int64]
) -> Tuple[NDArray[np.float64], NDArray[np.int64]]:
    edges, face_edges = _edge_table(faces)
    mids = vertices[edges[:, 0]] + vertices[edges[:, 1]]
    mids /= np.linalg.norm(mids, axis=1, keepdims=True)
    m = face_edges + len(vertices)
    a, b, c = faces.T
    m01, m12, m20 = m.T
    new_faces = np.concatenate([
        np.stack([a, m01, m20], axis=1),
        np.stack([b, m12, m01], axis=1),
        np.stack([c, m20, m12], axis=1),
        np.stack([m01, m12, m20], axis=1),
    ])
    return np.concatenate([vertices, mids]), new_faces


@lru_cache(maxsize=4)
def icosphere(resolution: int) -> Tuple[NDArray[np.float64], NDArray[np.int64], NDArray[np.int64], NDArray[np.int64]]:
    """Geodesic grid with subdivision frequency the next power of two at or above resolution.

    Returns vertices (jittered, renormalized), faces, edges and the per-face edge indices. The arrays are
    shared between callers and must not be modified.
    """
    if resolution < MIN_RESOLUTION:
        raise ValueError(f"resolution must be at least {MIN_RESOLUTION}, got {resolution}")
    base = np.array([[float(c) for c in loc] for loc in _orbit((PHI, GoldenNumber(1), GoldenNumber(0)))])
    vertices = base / np.linalg.norm(base, axis=1, keepdims=True)
    faces = ConvexHull(vertices).simplices.astype(np.int64)
    for _ in range(ceil(log2(resolution))):
        vertices, faces = _subdivide(vertices, faces)
    rng = seeded_rng(f"icosphere:{resolution}")
    vertices = vertices + rng.uniform(-JITTER, JITTER, vertices.shape)
    vertices /= np.linalg.norm(vertices, axis=1, keepdims=True)
    edges, face_edges = _edge_table(faces)
    for arr in (vertices, faces, edges, face_edges):
        arr.setflags(write=False)
    logger.debug("icosphere at resolution %d: %d vertices, %d faces", resolution, len(vertices), len(faces))
    return vertices, faces, edges, face_edges


def _count_components(
    values: NDArray[np.float64],
    edges: NDArray[np.int64],
    face_edges: NDArray[np.int64],
    keep: Optional[NDArray[np.bool_]] = None,
) -> int:
    """Connected components of the piecewise-linear zero set, one node per sign-changing edge."""
    positive = values > 0
    crossing = positive[edges[:, 0]] != positive[edges[:, 1]]
    kept = face_edges if keep is None else face_edges[keep]
    cut = crossing[kept]
    hit = cut.sum(axis=1) == 2
    pairs = kept[hit][cut[hit]].reshape(-1, 2)
    if not len(pairs):
        return 0
    nodes, index = np.unique(pairs, return_inverse=True)
    index = index.reshape(-1, 2)
    graph = coo_matrix((np.ones(len(index)), (index[:, 0], index[:, 1])), shape=(len(nodes), len(nodes)))
    count, _ = connected_components(graph, directed=False)
    return int(count)


def _edge_directions() -> NDArray[np.float64]:
    table = _fixed_point_table()
    centres = np.array([[float(c) for c in loc] for loc, kind, _ in table if kind is FixedPointClass.EDGE])
    return centres / np.linalg.norm(centres, axis=1, keepdims=True)


def classify_level_set(xi: float, resolution: int = MIN_RESOLUTION, cut_radius: float = 0.05) -> LevelSetClass:
    """Count the components of {𝒱 = ξ} on the unit sphere on a jittered geodesic grid.

    At ξ = 0 the six great circles cross at the 30 edge points; a cap of angular radius ``cut_radius`` around
    each of them is removed so the arcs between crossings come out as separate components.

    Raises
    ------
    BoundaryCaseError
        If ξ lies within ``BOUNDARY_TOLERANCE`` of an extreme value, or is nonzero but within it of 0.
    """
    if resolution < MIN_RESOLUTION:
        raise ValueError(f"resolution must be at least {MIN_RESOLUTION}, got {resolution}")
    low, high = float(LEVEL_MIN), float(LEVEL_MAX)
    if abs(xi - low) < BOUNDARY_TOLERANCE or abs(xi - high) < BOUNDARY_TOLERANCE or 0 < abs(xi) < BOUNDARY_TOLERANCE:
        raise BoundaryCaseError(f"ξ = {xi!r} is a boundary case, refine manually")
    if xi < low or xi > high:
        return LevelSetClass(xi, 0, ComponentKind.EMPTY, 1 if xi < low else 7)
    vertices, faces, edges, face_edges = icosphere(resolution)
    values = np.real(icosahedral_invariant().evaluate_numeric(vertices)) - xi
    keep = None
    if xi == 0:
        centres = _edge_directions()
        centroids = vertices[faces].mean(axis=1)
        centroids /= np.linalg.norm(centroids, axis=1, keepdims=True)
        keep = (centroids @ centres.T).max(axis=1) < cos(cut_radius)
    count = _count_components(values, edges, face_edges, keep)
    case = 3 if xi < 0 else (4 if xi == 0 else 5)
    expected, kind = _CASES[case]
    if count != expected:
        logger.warning("ξ = %g: grid at resolution %d found %d components, expected %d", xi, resolution, count,
                       expected)
    return LevelSetClass(xi, count, kind, case)


@frozen
class ZeroScan:
    min_magnitude: float
    location: Tuple[float, float, float]
    samples: int


def zero_scan(s: Superflow, resolution: int = MIN_RESOLUTION, exclusion: float = 0.05) -> ZeroScan:
    """Smallest tangent-field magnitude on the grid, away from the listed fixed points."""
    points = np.array([fp.unit() for fp in enumerate_fixed_points(s)])
    vertices = icosphere(resolution)[0]
    mask = (vertices @ points.T).max(axis=1) < cos(exclusion)
    sample = vertices[mask]
    v = s.vector(sample)
    v = v - np.sum(v * sample, axis=1, keepdims=True) * sample
    magnitude = np.linalg.norm(v, axis=1)
    at = int(np.argmin(magnitude))
    location = (float(sample[at, 0]), float(sample[at, 1]), float(sample[at, 2]))
    return ZeroScan(float(magnitude[at]), location, int(mask.sum()))


def delta_matrix() -> ExactMatrix:
    """δ = [[1−√3, 1+√3, 0], [1+√3, 1−√3, 0], [0, 0, 1]]."""
    r3 = CyclotomicNumber.sqrt3(12)
    return ExactMatrix([[1 - r3, 1 + r3, 0], [1 + r3, 1 - r3, 0], [0, 0, 1]])


def delta_conjugated_prism() -> RationalVF:
    """δ⁻¹ ∘ P₃ ∘ δ, which comes out rational: −4(x²−2xy) • −4(y²−2xy) • 0."""
    return conjugation_action(build_superflow(SuperflowName.PRISMATIC).field, delta_matrix())


def diagonal_form(name: Union[str, SuperflowName]) -> RationalVF:
    """τ ∘ V ∘ τ⁻¹, the field in the coordinates where its rotations about the z-axis are diagonal."""
    s = build_superflow(name)
    if not (s.symmetry_group.spec and s.symmetry_group.spec.family.diagonalizable):
        raise ValueError(f"{s.name.display} has no diagonalized form")
    return conjugation_action(s.field, tau_matrix().inverse()).normalized()


def antiprism_case_six_form() -> RationalVF:
    """diag(ξ², ξ, ξ)⁻¹ ∘ A₄ ∘ diag(ξ², ξ, ξ) with ξ = e^{iπ/4}, which is y³/z • −x³/z • 0."""
    xi = CyclotomicNumber.root_of_unity(8)
    return conjugation_action(diagonal_form(SuperflowName.ANTIPRISMATIC), ExactMatrix.diagonal((xi * xi, xi, xi)))


def first_integral_residuals(s: Superflow) -> Dict[str, int]:
    """Number of nonzero terms in each Lie derivative; all zero for a catalog entry."""
    return {k: len(lie_derivative(s.field, f).terms) for k, f in zip(s.integral_labels, s.first_integrals)}
