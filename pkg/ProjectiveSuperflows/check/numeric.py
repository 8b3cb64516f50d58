"""Checks decided numerically, each residual held to a fixed bound."""

from __future__ import annotations

from fractions import Fraction
from typing import TYPE_CHECKING, List, Tuple

import numpy as np
from attrs import Factory, define

from ..catalog import (LEVEL_MAX, LEVEL_MIN, build_superflow, classify_level_set, enumerate_fixed_points,
                       level_extremes, numeric_index, proposition_case, zero_scan)
from ..consts import MIN_RESOLUTION, SuperflowName
from ..curves import RATIONAL_LEVEL, plane_curve_residual, point_on_level, rational_curve_residual, triple_reduction
from ..flow import (PHI_F, check_backward_orbit_relation, check_translation_equation, integrate_backward_system,
                    integrate_singular_system, singular_closed_form, verify_r_quintic)
from ..projection import hyperbola_drift, orbit_equation_check, scaled_zero_residual, singular_circle_images
from ..util import seeded_rng
from .abstract import EqualityCheck, ToleranceCheck

if TYPE_CHECKING:  # pragma: no cover
    from typing import Any, ClassVar, Sequence

    from numpy.typing import NDArray

    from ..catalog import Superflow

START_RADIUS = 0.25
DENOMINATOR_FLOOR = 0.7
MAX_START_DRAWS = 1000
ZERO_SCAN_FLOOR = 1e-3


def start_point(
    s: Superflow, rng: np.random.Generator, floor: float = DENOMINATOR_FLOOR, max_draws: int = MAX_START_DRAWS
) -> NDArray[np.float64]:
    """A random start for an orbit of s: on the unit sphere for spherical flows, else a short vector.

    Directions where the normalized denominator is below floor are redrawn, which keeps blow-up times well past
    the integration windows used here.

    Raises
    ------
    RuntimeError
        If none of max_draws directions clears the floor.
    """
    den = s.field.denominator
    for _ in range(max_draws):
        u = rng.normal(size=3)
        u /= np.linalg.norm(u)
        if abs(float(np.real(den.evaluate_numeric(u)))) >= floor:
            return u if s.spherical else START_RADIUS * u
    raise RuntimeError(f"No start direction for {s.name} cleared the denominator floor {floor} in {max_draws} draws")


@define(slots=False)
class FixedPoints(EqualityCheck):
    """The 62 listed zeros of the icosahedral field, with the sign of the linearization at each."""

    _explainer_stub: ClassVar[str] = (
        "𝕀 has exactly 62 fixed directions, index +1 at 32 of them and −1 at 30, summing to 2"
    )

    def _pairs(self) -> Sequence[Tuple[str, Any, Any]]:
        s = build_superflow(SuperflowName.ICOSAHEDRAL)
        points = enumerate_fixed_points(s)
        indices = [numeric_index(s, p) for p in points]
        mismatches = sum(1 for p, k in zip(points, indices) if p.index != k)
        scan = zero_scan(s)
        return [
            ("count", 62, len(points)),
            ("index mismatches", 0, mismatches),
            ("positive", 32, sum(1 for k in indices if k > 0)),
            ("index sum", 2, sum(indices)),
            ("no other zeros", True, scan.min_magnitude > ZERO_SCAN_FLOOR),
        ]


@define(slots=False)
class Conservation(ToleranceCheck):
    """Drift of every first integral along one backward orbit per superflow."""

    _explainer_stub: ClassVar[str] = "Each first integral drifts by at most 1e-9 along an orbit over t ∈ [0, 1]"

    t_end: float = 1.0
    bound: float = 1e-9

    def _residuals(self) -> Sequence[Tuple[str, float, float]]:
        ret = []
        for name in SuperflowName:
            s = build_superflow(name)
            start = start_point(s, seeded_rng(f"conservation-{name.value}"))
            trace = integrate_backward_system(s, start, self.t_end)
            for label, drift in trace.residuals.items():
                ret.append((f"{name.value}:{label}", drift, self.bound))
        return ret


@define(slots=False)
class TranslationEquation(ToleranceCheck):
    """F(F(x, t), s) against F(x, t+s) at random points and times."""

    _explainer_stub: ClassVar[str] = (
        "The flow of every catalog field satisfies the translation equation and the backward orbit relation to 1e-7"
    )

    cases: int = 20
    max_time: float = 0.2
    bound: float = 1e-7

    def _residuals(self) -> Sequence[Tuple[str, float, float]]:
        ret = []
        for name in SuperflowName:
            s = build_superflow(name)
            rng = seeded_rng(f"translation-{name.value}")
            worst = 0.0
            worst_relation = 0.0
            for _ in range(self.cases):
                x = start_point(s, rng)
                t, u = rng.uniform(0, self.max_time, size=2)
                worst = max(worst, check_translation_equation(s.field, x, float(t), float(u)).residual)
                if u > 0:
                    relation = check_backward_orbit_relation(s.field, x, float(t), float(u))
                    worst_relation = max(worst_relation, relation.residual)
            ret.append((name.value, worst, self.bound))
            ret.append((f"{name.value}:backward-orbit", worst_relation, self.bound))
        return ret


@define(slots=False)
class CurveResiduals(ToleranceCheck):
    """The plane curves of the reduction, evaluated along real orbits."""

    _explainer_stub: ClassVar[str] = "Orbits at ξ = −0.05 and ξ = −φ³/6 lie on their reduced curves"

    xi: float = -0.05
    t_end: float = 1.0

    def _residuals(self) -> Sequence[Tuple[str, float, float]]:
        s = build_superflow(SuperflowName.ICOSAHEDRAL)
        trace = integrate_backward_system(s, point_on_level(self.xi), self.t_end)
        ret: List[Tuple[str, float, float]] = [
            (f"curve-{which}", plane_curve_residual(trace, self.xi, which), 1e-7) for which in "PQR"
        ]
        reduction = triple_reduction(trace, self.xi)
        ret.append(("reduced-curve", reduction.residual, 1e-7))
        ret.append(("root-recovery", reduction.root_error, 1e-8))
        rational = integrate_backward_system(s, point_on_level(float(RATIONAL_LEVEL)), self.t_end)
        ret.append(("rational-curve", rational_curve_residual(rational), 1e-7))
        return ret


@define(slots=False)
class SingularCase(ToleranceCheck):
    """The closed-form orbit on the invariant plane y = φx against the quintic and against integration."""

    _explainer_stub: ClassVar[str] = "The closed form stays on the sphere, solves the quintic, and matches RK45"

    times: List[float] = Factory(lambda: [0.1, 0.25, 0.5, 0.75, 1.0])

    def _residuals(self) -> Sequence[Tuple[str, float, float]]:
        ret: List[Tuple[str, float, float]] = []
        phi2 = PHI_F ** 2
        for t in self.times:
            p, r = singular_closed_form(t)
            ret.append((f"sphere t={t:g}", abs(p * p * (1 + phi2) + r * r - 1), 1e-12))
            ret.append((f"quintic t={t:g}", verify_r_quintic(t).quintic_residual, 1e-10))
        trace = integrate_singular_system(min(self.times), max(self.times))
        closed = np.array([singular_closed_form(t) for t in trace.times])
        ret.append(("rk45 match", float(np.max(np.abs(trace.states - closed))), 1e-8))
        return ret


@define(slots=False)
class CircleImages(ToleranceCheck):
    """Stereographic images of the singular great circles, and the planar projections of the tetrahedral field."""

    _explainer_stub: ClassVar[str] = "Each singular great circle maps onto its stated circle or line"

    def _residuals(self) -> Sequence[Tuple[str, float, float]]:
        ret: List[Tuple[str, float, float]] = [
            (image.source, image.fit_residual, 1e-10) for image in singular_circle_images()
        ]
        ret.append(("scaled zeros", scaled_zero_residual(build_superflow(SuperflowName.ICOSAHEDRAL)), 1e-9))
        ret.append(("orbit equation", abs(orbit_equation_check(0.5, 0.3)), 1e-12))
        ret.append(("hyperbolas", hyperbola_drift((0.3, 0.1), 0.5), 1e-8))
        return ret


@define(slots=False)
class LevelSets(EqualityCheck):
    """Component counts of 𝒱 = ξ on the sphere, from the grid and from the exact case map."""

    _explainer_stub: ClassVar[str] = "The level sets ξ = ∓1/20 split into 12 and 20 circles, ξ = 0 into 60 arcs"

    resolution: int = MIN_RESOLUTION

    def _pairs(self) -> Sequence[Tuple[str, Any, Any]]:
        low, high = level_extremes()
        ret: List[Tuple[str, Any, Any]] = [
            ("minimum", str(LEVEL_MIN), str(low)),
            ("maximum", str(LEVEL_MAX), str(high)),
        ]
        for xi in (Fraction(-1, 20), Fraction(0), Fraction(1, 20)):
            expected = proposition_case(xi).component_count
            got = classify_level_set(float(xi), self.resolution).component_count
            ret.append((f"xi={xi}", expected, got))
        for outside in (float(LEVEL_MIN) - 0.01, float(LEVEL_MAX) + 0.01):
            ret.append((f"xi={outside:.4f}", 0, classify_level_set(outside, self.resolution).component_count))
        return ret
