"""Numerical flows of 2-homogenic fields, and the checks that make them projective flows.

A field V generates the flow F(x, t) = t⁻¹φ(xt), and F is the time-t state of ẏ = V(y), y(0) = x. Orbits are
integrated with scipy's adaptive Runge-Kutta 4(5) by default; a fixed-step RK4 is kept for cross-validation.
"""

from __future__ import annotations

from logging import getLogger
from math import asin, ceil, cos, exp, sin, sqrt, tanh
from typing import TYPE_CHECKING

import numpy as np
from attrs import field, frozen
from scipy.integrate import solve_ivp

from .catalog import icosahedral_numerator
from .consts import DEFAULT_TOL, MAX_STEP, SINGULAR_THRESHOLD, SPHERE_TOLERANCE, Direction, Stepper
from .field import PHI

if TYPE_CHECKING:  # pragma: no cover
    from typing import Any, Callable, Dict, List, Mapping, Optional, Tuple

    from numpy.typing import ArrayLike, NDArray

    from .catalog import Superflow
    from .poly import MultiPoly, RationalVF

    RHS = Callable[[float, NDArray[np.float64]], NDArray[np.float64]]
    Guard = Callable[[NDArray[np.float64]], float]

logger = getLogger(__name__)

SQRT5 = sqrt(5)
PHI_F = float(PHI)
UNIT_TOLERANCE = 1e-12


class IntegrationError(RuntimeError):
    """Raised when the integrator gives up, e.g. on step-size underflow."""


class SingularOrbitError(ArithmeticError):
    """Raised when an orbit runs into the zero set of the field's denominator."""

    def __init__(self, message: str, time: float, state: ArrayLike) -> None:
        super().__init__(message)
        self.time = time
        self.state = np.asarray(state, dtype=float)


class SphereDepartureError(IntegrationError):
    """Raised when a backward-system orbit leaves the unit sphere."""


@frozen
class OrbitTrace:
    """Samples of one integrated orbit, with the drift of each tracked integral."""

    times: NDArray[np.float64] = field(eq=False)
    states: NDArray[np.float64] = field(eq=False)
    drift: NDArray[np.float64] = field(eq=False)
    labels: Tuple[str, ...] = field(converter=tuple)
    stepper: Stepper
    direction: Direction

    @property
    def residuals(self) -> Dict[str, float]:
        """Maximal absolute drift per integral."""
        return {k: float(np.max(np.abs(self.drift[:, i]))) for i, k in enumerate(self.labels)}

    @property
    def final(self) -> NDArray[np.float64]:
        return self.states[-1]

    def columns(self) -> List[str]:
        coords = ["x", "y", "z"] if self.states.shape[1] == 3 else [f"x{i + 1}" for i in range(self.states.shape[1])]
        return ["t", *coords, *(f"{k}_drift" for k in self.labels)]

    def rows(self) -> NDArray[np.float64]:
        return np.column_stack([self.times, self.states, self.drift])

    def to_json(self) -> Dict[str, Any]:
        return {
            "samples": len(self.times),
            "t_end": float(self.times[-1]),
            "final": self.final,
            "residuals": self.residuals,
            "stepper": self.stepper.value,
            "direction": self.direction.value,
        }


@frozen
class FlowSample:
    """The flow map F(x, t), which equals x at t = 0."""

    x: Tuple[float, ...] = field(converter=lambda v: tuple(float(c) for c in v))
    t: float
    value: Tuple[float, ...] = field(converter=lambda v: tuple(float(c) for c in v))


def _check_tol(tol: float) -> None:
    if not tol > 0:
        raise ValueError(f"tol must be positive, got {tol!r}")


def _rk4(rhs: RHS, x0: NDArray[np.float64], t_end: float, guard: Optional[Guard]) -> Tuple[NDArray, NDArray]:
    steps = max(1, ceil(abs(t_end) / MAX_STEP))
    h = t_end / steps
    times = [0.0]
    states = [x0]
    y = x0
    for k in range(steps):
        t = k * h
        k1 = rhs(t, y)
        k2 = rhs(t + h / 2, y + h / 2 * k1)
        k3 = rhs(t + h / 2, y + h / 2 * k2)
        k4 = rhs(t + h, y + h * k3)
        y = y + h / 6 * (k1 + 2 * k2 + 2 * k3 + k4)
        if not np.all(np.isfinite(y)):
            raise IntegrationError(f"RK4 produced a non-finite state at t = {t + h:g}")
        if guard is not None and guard(y) < 0:
            return np.array(times + [t + h]), np.array(states + [y])
        times.append(t + h)
        states.append(y)
    return np.array(times), np.array(states)


def _integrate(
    rhs: RHS, x0: NDArray[np.float64], t_end: float, tol: float, stepper: Stepper, guard: Optional[Guard]
) -> Tuple[NDArray[np.float64], NDArray[np.float64], bool]:
    """Run the stepper; the flag is True when the guard fired before t_end."""
    if stepper is Stepper.RK4:
        times, states = _rk4(rhs, x0, t_end, guard)
        return times, states, guard is not None and guard(states[-1]) < 0
    events = None
    if guard is not None:
        def event(t: float, y: NDArray[np.float64]) -> float:
            return guard(y)  # type: ignore[misc]

        event.terminal = True  # type: ignore[attr-defined]
        events = [event]
    result = solve_ivp(rhs, (0.0, t_end), x0, method="RK45", rtol=tol, atol=tol, max_step=MAX_STEP, events=events)
    if result.status == -1:
        raise IntegrationError(result.message)
    return result.t, result.y.T, result.status == 1


def _drift(states: NDArray[np.float64], integrals: Mapping[str, MultiPoly]) -> NDArray[np.float64]:
    if not integrals:
        return np.zeros((len(states), 0))
    values = np.stack([np.real(f.evaluate_numeric(states)) for f in integrals.values()], axis=-1)
    return values - values[0]


def integrate_field(
    v: RationalVF,
    x0: ArrayLike,
    t_end: float,
    tol: float = DEFAULT_TOL,
    stepper: Stepper = Stepper.RK45,
    integrals: Optional[Mapping[str, MultiPoly]] = None,
) -> OrbitTrace:
    """Solve ẏ = V(y), y(0) = x0, up to t_end (which may be negative).

    Raises
    ------
    SingularOrbitError
        If |D| falls below ``SINGULAR_THRESHOLD`` at the start or along the way; carries the last state.
    IntegrationError
        If the adaptive stepper fails.
    """
    _check_tol(tol)
    start = np.asarray(x0, dtype=float)
    den = v.denominator

    def guard(y: NDArray[np.float64]) -> float:
        return abs(float(np.real(den.evaluate_numeric(y)))) - SINGULAR_THRESHOLD

    if guard(start) < 0:
        raise SingularOrbitError(f"denominator {den} vanishes at the start {start}", 0.0, start)
    integrals = integrals or {}
    if t_end == 0:
        times, states = np.zeros(1), start[None, :]
    else:
        def rhs(t: float, y: NDArray[np.float64]) -> NDArray[np.float64]:
            return np.real(v.evaluate_numeric(y))

        times, states, hit = _integrate(rhs, start, t_end, tol, stepper, None if den.is_constant() else guard)
        if hit:
            raise SingularOrbitError(
                f"orbit from {start} reached |{den}| < {SINGULAR_THRESHOLD:g} at t = {times[-1]:g}", times[-1],
                states[-1]
            )
    logger.debug("integrated %d samples to t = %g with %s", len(times), t_end, stepper.value)
    return OrbitTrace(times, states, _drift(states, integrals), tuple(integrals), stepper, Direction.FORWARD)


def superflow_integrals(s: Superflow) -> Dict[str, MultiPoly]:
    return dict(zip(s.integral_labels, s.first_integrals))


def integrate_backward_system(
    s: Superflow,
    x0: ArrayLike,
    t_end: float,
    tol: float = DEFAULT_TOL,
    stepper: Stepper = Stepper.RK45,
) -> OrbitTrace:
    """Integrate p′ = −ϖ, q′ = −ϱ, r′ = −σ, whose solution at t is the forward flow at −t.

    On the sphere the spherical superflows need no denominator, so the polynomial numerators are used directly
    and the orbit is aborted if it leaves the sphere by more than ``SPHERE_TOLERANCE``. The other superflows run
    the negated rational field.
    """
    _check_tol(tol)
    start = np.asarray(x0, dtype=float)
    integrals = superflow_integrals(s)
    if not s.spherical:
        trace = integrate_field(s.field.scale(-1), start, t_end, tol, stepper, integrals)
        return OrbitTrace(trace.times, trace.states, trace.drift, trace.labels, stepper, Direction.BACKWARD)
    if abs(np.linalg.norm(start) - 1) > UNIT_TOLERANCE:
        raise ValueError(f"{start} is not on the unit sphere")
    components = s.field.components

    def rhs(t: float, y: NDArray[np.float64]) -> NDArray[np.float64]:
        return -np.array([float(np.real(c.evaluate_numeric(y))) for c in components])

    def guard(y: NDArray[np.float64]) -> float:
        return SPHERE_TOLERANCE - abs(float(np.dot(y, y)) - 1)

    if t_end == 0:
        times, states = np.zeros(1), start[None, :]
    else:
        times, states, hit = _integrate(rhs, start, t_end, tol, stepper, guard)
        if hit:
            raise SphereDepartureError(f"orbit from {start} left the unit sphere at t = {times[-1]:g}")
    return OrbitTrace(times, states, _drift(states, integrals), tuple(integrals), stepper, Direction.BACKWARD)


def flow_map(
    v: RationalVF, x: ArrayLike, t: float, tol: float = DEFAULT_TOL, stepper: Stepper = Stepper.RK45
) -> FlowSample:
    """F(x, t), the time-t state of the orbit through x."""
    trace = integrate_field(v, x, t, tol, stepper)
    return FlowSample(np.asarray(x, dtype=float), t, trace.final)


@frozen
class ResidualReport:
    name: str
    residual: float
    tol: float

    @property
    def passed(self) -> bool:
        return self.residual <= self.tol

    def to_json(self) -> Dict[str, Any]:
        return {"name": self.name, "residual": self.residual, "tol": self.tol, "passed": self.passed}


def check_translation_equation(
    v: RationalVF, x: ArrayLike, t: float, s: float, tol: float = 1e-7, integrator_tol: float = DEFAULT_TOL
) -> ResidualReport:
    """Compare F(x, t+s) against F(F(x, t), s) in the max norm."""
    direct = flow_map(v, x, t + s, integrator_tol).value
    midway = flow_map(v, x, t, integrator_tol).value
    composed = flow_map(v, midway, s, integrator_tol).value
    residual = float(np.max(np.abs(np.subtract(direct, composed))))
    logger.debug("translation equation at t=%g, s=%g: residual %g", t, s, residual)
    return ResidualReport("translation-equation", residual, tol)


def check_scaling_law(
    v: RationalVF, x: ArrayLike, t: float, lam: float, tol: float = 1e-7, integrator_tol: float = DEFAULT_TOL
) -> ResidualReport:
    """Compare F(λx, t/λ) against λF(x, t), which 2-homogeneity forces."""
    point = np.asarray(x, dtype=float)
    scaled = flow_map(v, lam * point, t / lam, integrator_tol).value
    plain = flow_map(v, point, t, integrator_tol).value
    residual = float(np.max(np.abs(np.subtract(scaled, lam * np.asarray(plain)))))
    return ResidualReport(f"scaling-law[{lam:g}]", residual, tol)


def check_backward_orbit_relation(
    v: RationalVF, x: ArrayLike, s: float, varsigma: float, tol: float = 1e-7, integrator_tol: float = DEFAULT_TOL
) -> ResidualReport:
    """Compare φ(ςP(s)) against ςP(s−ς), where P is the orbit of the backward system through x and φ = F(·, 1).

    Only small |ς| is meaningful; the orbit has to exist on the whole of [s−ς, s].
    """
    if varsigma == 0:
        raise ValueError("ς must be nonzero")
    point = np.asarray(x, dtype=float)
    at_s = np.asarray(flow_map(v, point, -s, integrator_tol).value)
    shifted = np.asarray(flow_map(v, point, varsigma - s, integrator_tol).value)
    mapped = flow_map(v, varsigma * at_s, 1.0, integrator_tol).value
    residual = float(np.max(np.abs(np.subtract(mapped, varsigma * shifted))))
    logger.debug("backward orbit relation at s=%g, ς=%g: residual %g", s, varsigma, residual)
    return ResidualReport(f"backward-orbit-relation[{varsigma:g}]", residual, tol)


def singular_closed_form(t: float) -> Tuple[float, float]:
    """(p, r) on the invariant plane y = φx at time t of the backward system, starting from r = 0.

    T = 16r⁵−20r³+5r = tanh(2√5 t), u is the principal fifth root of √(1−T²) + iT, and then r = Im u and
    p = 2 Re u / √(10+2√5).
    """
    big_t = tanh(2 * SQRT5 * t)
    if abs(big_t) > 1:  # pragma: no cover
        raise ArithmeticError(f"|T| = {abs(big_t)} exceeds 1")
    u = complex(sqrt(1 - big_t * big_t), big_t) ** 0.2
    return 2 * u.real / sqrt(10 + 2 * SQRT5), u.imag


def singular_closed_form_angle(t: float) -> Tuple[float, float]:
    """The same point written with θ = arcsin(T)/5: (cos θ/√(φ²+1), sin θ)."""
    theta = asin(tanh(2 * SQRT5 * t)) / 5
    return cos(theta) / sqrt(PHI_F ** 2 + 1), sin(theta)


def _singular_rhs(t: float, y: NDArray[np.float64]) -> NDArray[np.float64]:
    p, r = y
    point = np.array([p, PHI_F * p, r])
    numerator = _PLANE_NUMERATOR
    return -np.array([
        float(np.real(numerator.evaluate_numeric(point))),
        float(np.real(numerator.evaluate_numeric(point[[2, 0, 1]]))),
    ])


_PLANE_NUMERATOR = icosahedral_numerator()


def integrate_singular_system(
    t_start: float, t_end: float, tol: float = DEFAULT_TOL, stepper: Stepper = Stepper.RK45
) -> OrbitTrace:
    """Integrate the reduced (p, r) system on y = φx from the closed-form state at t_start.

    The times of the returned trace are absolute, and its single drift column is p²(1+φ²)+r²−1.
    """
    _check_tol(tol)
    start = np.array(singular_closed_form(t_start))
    if t_end == t_start:
        times, states = np.zeros(1), start[None, :]
    else:
        times, states, _ = _integrate(_singular_rhs, start, t_end - t_start, tol, stepper, None)
    sphere = states[:, 0] ** 2 * (1 + PHI_F ** 2) + states[:, 1] ** 2 - 1
    return OrbitTrace(times + t_start, states, sphere[:, None], ("sphere", ), stepper, Direction.BACKWARD)


@frozen
class QuinticReport:
    t: float
    quintic_residual: float
    integrated_residual: float
    product_residual: float

    def passed(self, tol: float = 1e-10) -> bool:
        return max(self.quintic_residual, self.integrated_residual, self.product_residual) <= tol

    def to_json(self) -> Dict[str, Any]:
        return {
            "t": self.t,
            "quintic_residual": self.quintic_residual,
            "integrated_residual": self.integrated_residual,
            "product_residual": self.product_residual,
        }


def verify_r_quintic(t: float) -> QuinticReport:
    """Check r(t) against the quintic, its integrated form, and the product over the roots sin(2πj/5)."""
    _, r = singular_closed_form(t)
    big_t = tanh(2 * SQRT5 * t)
    quintic = 16 * r ** 5 - 20 * r ** 3 + 5 * r
    integrated = (4 * r * r - 2 * r - 1) ** 2 * (r + 1) / ((4 * r * r + 2 * r - 1) ** 2 * (r - 1))
    product = float(np.prod([r - sin(2 * np.pi * j / 5) for j in range(5)]))
    expected = -exp(4 * SQRT5 * t)
    return QuinticReport(
        t,
        abs(quintic - big_t),
        abs(integrated - expected) / max(1.0, abs(expected)),
        abs(product - big_t / 16),
    )
