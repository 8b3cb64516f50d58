"""Checks whose outcome is decided by exact arithmetic: group orders, kernel dimensions and polynomial identities."""

from __future__ import annotations

from typing import TYPE_CHECKING, Dict, List, Tuple

from attrs import Factory, define

from ..catalog import build_superflow
from ..consts import GroupFamily, SuperflowName, VerdictReason
from ..curves import rational_curve_remainder, verify_identity_chain
from ..group import GroupSpec, build_catalog_group
from ..invariant import galois_swap_conjugate, solve_invariant_space, superflow_verdict, verify_symmetric_extension
from ..poly import XYZ, MultiPoly, vf_curl, vf_divergence
from ..projection import alpha_beta_field, embed_flow_as_projective, orbit_equation_identity
from .abstract import EqualityCheck

if TYPE_CHECKING:  # pragma: no cover
    from typing import Any, ClassVar, Sequence

TABLE_ORDERS = {
    "icosahedral": 60,
    "mixed-tetrahedral": 24,
    "octahedral": 24,
    "mixed-dihedral:3": 12,
    "mixed-dihedral:4": 16,
    "icosahedral-z2": 120,
}


@define(slots=False)
class GroupOrders(EqualityCheck):
    """Generate each catalog group from its generators and compare the order against the table."""

    _explainer_stub: ClassVar[str] = "Each catalog group generates exactly the tabulated number of elements"

    orders: Dict[str, int] = Factory(lambda: dict(TABLE_ORDERS))

    def _pairs(self) -> Sequence[Tuple[str, Any, Any]]:
        ret: List[Tuple[str, Any, Any]] = []
        for spec, expected in self.orders.items():
            group = build_catalog_group(GroupSpec.parse(spec))
            ret.append((spec, expected, group.order))
            ret.append((f"{spec} closed", True, group.is_closed()))
        return ret


@define(slots=False)
class IcosahedralInvariantSpace(EqualityCheck):
    """Solve for icosahedral fields over (x²+y²+z²)² and compare against the catalog field."""

    _explainer_stub: ClassVar[str] = "The icosahedral fields over W² form a line spanned by the catalog field"

    def _pairs(self) -> Sequence[Tuple[str, Any, Any]]:
        group = build_catalog_group(GroupSpec(GroupFamily.ICOSAHEDRAL))
        w = sum((x * x for x in MultiPoly.generators(XYZ)), MultiPoly.zero(XYZ))
        space = solve_invariant_space(group, w * w)
        catalog = build_superflow(SuperflowName.ICOSAHEDRAL).field
        ret: List[Tuple[str, Any, Any]] = [("dimension", 1, space.dimension)]
        if space.dimension == 1:
            witness = space.basis[0]
            ret.append(("matches catalog", True, witness.equivalent(catalog)))
            ret.append(("galois swap", True, galois_swap_conjugate(witness).equivalent(witness)))
        return ret


@define(slots=False)
class ClassificationDimensions(EqualityCheck):
    """Reproduce the kernel dimensions of the mixed cyclic, dihedral, prism and antiprism cases."""

    _explainer_stub: ClassVar[str] = (
        "Mixed cyclic and split dihedral groups give families; the ℓ = 2d antiprism groups give d − 1 fields"
    )

    antiprism_d: List[int] = Factory(lambda: [1, 2, 3])

    def _pairs(self) -> Sequence[Tuple[str, Any, Any]]:
        ret: List[Tuple[str, Any, Any]] = []
        for spec in ("mixed-cyclic:1", "mixed-dihedral-cyclic:3"):
            verdict = superflow_verdict(build_catalog_group(GroupSpec.parse(spec)), 2)
            ret.append((spec, VerdictReason.FAMILY_DIMENSION_GT_1.value, verdict.reason.value))
        prism = superflow_verdict(build_catalog_group(GroupSpec.parse("mixed-dihedral:3")), 1)
        ret.append(("mixed-dihedral:3", (VerdictReason.UNIQUE_FIELD.value, 0), (prism.reason.value, prism.degree)))
        for d in self.antiprism_d:
            if d == 1:
                verdict = superflow_verdict(build_catalog_group(GroupSpec.parse("mixed-dihedral:2")), 0)
                ret.append(("mixed-dihedral:2", (0, 2), (verdict.degree, verdict.family_dimension)))
                continue
            spec = GroupSpec(GroupFamily.MIXED_DIHEDRAL, 2 * d, diagonalized=True)
            verdict = superflow_verdict(build_catalog_group(spec), 2 * d - 3)
            ret.append((str(spec), (2 * d - 3, d - 1), (verdict.degree, verdict.family_dimension)))
        return ret


@define(slots=False)
class SymmetricExtension(EqualityCheck):
    """Solve the constrained ansatz of the reducible family and confirm the extra parameters vanish."""

    _explainer_stub: ClassVar[str] = "In dimension n + 1 the quadratic-form ansatz forces a = b = 0"

    dimensions: List[int] = Factory(lambda: [3, 4])

    def _pairs(self) -> Sequence[Tuple[str, Any, Any]]:
        ret: List[Tuple[str, Any, Any]] = []
        for n in self.dimensions:
            report = verify_symmetric_extension(n)
            ret.append((f"n={n}", True, report.passed))
        return ret


@define(slots=False)
class Solenoidal(EqualityCheck):
    """Divergence of every catalog field and curl of the tetrahedral one."""

    _explainer_stub: ClassVar[str] = "Every catalog field is divergence free and the tetrahedral field is curl free"

    def _pairs(self) -> Sequence[Tuple[str, Any, Any]]:
        ret: List[Tuple[str, Any, Any]] = [
            (f"div {name.value}", True, vf_divergence(build_superflow(name).field).is_zero()) for name in SuperflowName
        ]
        curl = vf_curl(build_superflow(SuperflowName.TETRAHEDRAL).field)
        ret.append(("curl T", True, all(c.is_zero() for c in curl)))
        return ret


@define(slots=False)
class IdentityChain(EqualityCheck):
    """Every polynomial identity of the triple reduction, with ξ left symbolic."""

    _explainer_stub: ClassVar[str] = "Each identity of the reduction to the Υ-curve leaves a zero remainder"

    def _pairs(self) -> Sequence[Tuple[str, Any, Any]]:
        report = verify_identity_chain(None, strict=False)
        ret: List[Tuple[str, Any, Any]] = [(name, True, ok) for name, ok in sorted(report.checks.items())]
        ret.append(("rational-curve", True, not rational_curve_remainder()))
        return ret


@define(slots=False)
class OrbitEquation(EqualityCheck):
    """The orbit function of the diagonal projection, and the projective lift of that planar field."""

    _explainer_stub: ClassVar[str] = (
        "𝒲_α Π̂ + 𝒲_β Θ̂ vanishes identically and the planar field lifts to a 2-homogenic one"
    )

    def _pairs(self) -> Sequence[Tuple[str, Any, Any]]:
        lifted = embed_flow_as_projective(alpha_beta_field())
        return [
            ("orbit identity", True, orbit_equation_identity().is_zero()),
            ("lift is 2-homogenic", True, lifted.is_two_homogenic()),
            ("lift keeps z", True, not lifted.components[2]),
        ]
