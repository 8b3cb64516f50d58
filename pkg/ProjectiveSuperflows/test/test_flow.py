from __future__ import annotations

from math import sqrt
from typing import TYPE_CHECKING

import numpy as np
from pytest import mark, raises

from ..catalog import build_superflow
from ..consts import Direction, Stepper, SuperflowName
from ..flow import (PHI_F, SingularOrbitError, check_backward_orbit_relation, check_scaling_law,
                    check_translation_equation, flow_map, integrate_backward_system, integrate_field,
                    integrate_singular_system, singular_closed_form, singular_closed_form_angle, verify_r_quintic)
from ..poly import XYZ, MultiPoly, RationalVF
from . import spherical_superflow

if TYPE_CHECKING:  # pragma: no cover
    from pytest_benchmark.fixture import BenchmarkFixture

    from ..catalog import Superflow

assert spherical_superflow  # just need to access so mypy doesn't complain

x, y, z = MultiPoly.generators(XYZ)
ZERO = MultiPoly.zero(XYZ)
# ẋ = x² has the projective flow F(x, t) = x / (1 − xt)
SQUARE = RationalVF.polynomial((x * x, ZERO, ZERO))


@mark.parametrize("stepper", list(Stepper))
def test_closed_form_flow(stepper: Stepper) -> None:
    trace = integrate_field(SQUARE, (0.5, 1.0, -2.0), 1.0, stepper=stepper)
    np.testing.assert_allclose(trace.final, [1.0, 1.0, -2.0], atol=1e-6)
    assert trace.times[0] == 0.0
    assert trace.stepper is stepper
    assert trace.direction is Direction.FORWARD


def test_backward_in_time() -> None:
    trace = integrate_field(SQUARE, (0.5, 0.0, 0.0), -2.0)
    np.testing.assert_allclose(trace.final[0], 0.25, atol=1e-8)


def test_zero_time_and_bad_tolerance() -> None:
    trace = integrate_field(SQUARE, (0.5, 0.0, 0.0), 0.0)
    assert len(trace.times) == 1
    assert flow_map(SQUARE, (0.3, 0.2, 0.1), 0.0).value == (0.3, 0.2, 0.1)
    with raises(ValueError):
        integrate_field(SQUARE, (0.5, 0.0, 0.0), 1.0, tol=0)


def test_singular_start() -> None:
    v = RationalVF((x ** 3, ZERO, ZERO), x)
    with raises(SingularOrbitError) as info:
        integrate_field(v, (0.0, 1.0, 0.0), 1.0)
    assert info.value.time == 0.0
    np.testing.assert_array_equal(info.value.state, [0.0, 1.0, 0.0])


def test_translation_and_scaling() -> None:
    """The flow of a 2-homogenic field is a projective flow."""
    point = (0.2, -0.1, 0.3)
    assert check_translation_equation(SQUARE, point, 0.3, 0.4).passed
    assert check_scaling_law(SQUARE, point, 0.5, 1.7).passed
    t_field = build_superflow(SuperflowName.TETRAHEDRAL).field
    report = check_translation_equation(t_field, point, 0.15, 0.1)
    assert report.passed
    assert report.to_json()["passed"] is True


@mark.parametrize("varsigma", [0.2, -0.15, 0.05])
def test_backward_orbit_relation(varsigma: float) -> None:
    point = (0.2, -0.1, 0.3)
    report = check_backward_orbit_relation(SQUARE, point, 0.3, varsigma)
    assert report.passed, report
    assert report.name == f"backward-orbit-relation[{varsigma:g}]"
    i_field = build_superflow(SuperflowName.ICOSAHEDRAL).field
    assert check_backward_orbit_relation(i_field, (0.3, 0.1, -0.2), 0.2, varsigma).passed
    with raises(ValueError):
        check_backward_orbit_relation(SQUARE, point, 0.3, 0.0)


def test_backward_system_conserves_integrals(spherical_superflow: Superflow, benchmark: BenchmarkFixture) -> None:
    start = np.array([1.0, 2.0, 3.0]) / sqrt(14)
    trace = benchmark(integrate_backward_system, spherical_superflow, start, 0.5)
    assert trace.direction is Direction.BACKWARD
    assert all(drift < 1e-9 for drift in trace.residuals.values())
    assert trace.columns() == ["t", "x", "y", "z", *(f"{k}_drift" for k in spherical_superflow.integral_labels)]
    assert trace.rows().shape == (len(trace.times), 4 + len(spherical_superflow.integral_labels))
    np.testing.assert_allclose(np.linalg.norm(trace.states, axis=1), 1.0, atol=1e-8)
    with raises(ValueError):
        integrate_backward_system(spherical_superflow, 2 * start, 0.5)


def test_backward_system_of_polynomial_field() -> None:
    s = build_superflow(SuperflowName.TETRAHEDRAL)
    start = np.array([0.1, 0.15, -0.05])
    trace = integrate_backward_system(s, start, 1.0)
    forward = integrate_field(s.field, start, -1.0)
    np.testing.assert_allclose(trace.final, forward.final, atol=1e-8)
    assert set(trace.residuals) == {"x2-y2", "x2-z2"}
    assert max(trace.residuals.values()) < 1e-9


def test_singular_closed_form() -> None:
    """The closed-form orbit on y = φx starts at r = 0 and stays on the sphere."""
    p, r = singular_closed_form(0.0)
    assert r == 0.0
    for t in (0.0, 0.1, 0.4, 1.0):
        p, r = singular_closed_form(t)
        assert abs(p * p * (1 + PHI_F ** 2) + r * r - 1) < 1e-12
        np.testing.assert_allclose(singular_closed_form_angle(t), (p, r), atol=1e-12)
        report = verify_r_quintic(t)
        assert report.quintic_residual < 1e-10
        assert report.product_residual < 1e-10


def test_singular_system_matches_closed_form() -> None:
    """Integrating the reduced system from t = 0.1 to 1 stays on the closed-form orbit and its integrated quintic."""
    trace = integrate_singular_system(0.1, 1.0)
    assert trace.times[0] == 0.1
    assert abs(trace.times[-1] - 1.0) < 1e-12
    closed = np.array([singular_closed_form(t) for t in trace.times])
    np.testing.assert_allclose(trace.states, closed, atol=1e-8)
    assert trace.residuals["sphere"] < 1e-9
    for t in trace.times:
        report = verify_r_quintic(float(t))
        assert report.integrated_residual < 1e-9, report
        assert report.passed(1e-9)
