from __future__ import annotations

from math import pi, sqrt
from typing import TYPE_CHECKING

import numpy as np
from pytest import mark, raises

from ..catalog import build_superflow
from ..consts import FigureName, ProjectionKind, SuperflowName
from ..poly import XYZ, MultiPoly, RationalVF
from ..projection import (IncompatibleProjectionError, PoleError, alpha_beta_field, embed_flow_as_projective,
                          emit_figure_data, hyperbola_drift, orbit_equation_check, orbit_equation_identity,
                          polygon_area, project_field, render_projection, sample_projection, scaled_zero_residual,
                          singular_circle_images, stereo_inverse, stereo_map, verify_projection_contract)

if TYPE_CHECKING:  # pragma: no cover
    from pathlib import Path


def test_stereo_round_trip() -> None:
    rng = np.random.default_rng(12)
    plane = rng.uniform(-5, 5, size=(50, 2))
    sphere = stereo_inverse(plane)
    np.testing.assert_allclose(np.linalg.norm(sphere, axis=-1), 1.0, atol=1e-14)
    np.testing.assert_allclose(stereo_map(sphere), plane, atol=1e-10)
    np.testing.assert_allclose(stereo_map([0.0, 0.0, -1.0]), [0.0, 0.0])
    with raises(PoleError):
        stereo_map([[0.6, 0.0, 0.8], [0.0, 0.0, 1.0]])


def test_project_field_compatibility() -> None:
    ico = build_superflow(SuperflowName.ICOSAHEDRAL)
    tet = build_superflow(SuperflowName.TETRAHEDRAL)
    assert project_field(ico, "scaled").kind is ProjectionKind.STEREOGRAPHIC_SCALED
    assert project_field(tet, ProjectionKind.ORTHOGONAL_X0).superflow is SuperflowName.TETRAHEDRAL
    with raises(IncompatibleProjectionError):
        project_field(tet, ProjectionKind.STEREOGRAPHIC_TRUE)
    with raises(IncompatibleProjectionError):
        project_field(ico, ProjectionKind.ORTHOGONAL_DIAG)
    with raises(IncompatibleProjectionError):
        project_field(build_superflow(SuperflowName.PRISMATIC), ProjectionKind.STEREOGRAPHIC_SCALED)


def test_scaled_and_true_share_directions() -> None:
    """The two stereographic fields differ by the positive factor (α² + β² + 4)/8."""
    s = build_superflow(SuperflowName.OCTAHEDRAL)
    points = np.array([[0.3, -1.2], [2.0, 0.5], [-0.7, -0.7]])
    scaled = project_field(s, ProjectionKind.STEREOGRAPHIC_SCALED).at(points)
    true = project_field(s, ProjectionKind.STEREOGRAPHIC_TRUE).at(points)
    factor = (np.sum(points ** 2, axis=-1) + 4) / 8
    np.testing.assert_allclose(true, scaled * factor[:, None], atol=1e-14)


def test_fixed_points_are_planar_zeros() -> None:
    assert scaled_zero_residual(build_superflow(SuperflowName.ICOSAHEDRAL)) < 1e-9


@mark.parametrize("kind", [ProjectionKind.STEREOGRAPHIC_TRUE, ProjectionKind.STEREOGRAPHIC_SCALED])
def test_projection_contract(kind: ProjectionKind) -> None:
    s = build_superflow(SuperflowName.ICOSAHEDRAL)
    report = verify_projection_contract(s, kind, (1.0, 2.0, -3.0), 0.2)
    assert report.passed, report.to_json()
    assert verify_projection_contract(s, kind, (1.0, 2.0, -3.0), 0.0).residual == 0.0
    with raises(IncompatibleProjectionError):
        verify_projection_contract(s, ProjectionKind.ORTHOGONAL_X0, (1.0, 0.0, 0.0), 0.2)


def test_singular_circle_images() -> None:
    """Six icosahedral planes give two lines and four circles; the four octahedral planes give circles."""
    ico = singular_circle_images(SuperflowName.ICOSAHEDRAL)
    assert len(ico) == 6
    assert sum(image.is_line for image in ico) == 2
    octa = singular_circle_images("O")
    assert len(octa) == 4
    assert not any(image.is_line for image in octa)
    for image in octa:
        assert image.radius is not None
        assert abs(image.radius - 2 * sqrt(3)) < 1e-12
    everything = singular_circle_images()
    assert len(everything) == 10
    assert all(image.fit_residual < 1e-9 for image in everything)
    assert set(everything[0].to_json()) == {"source", "center", "radius", "direction", "fit_residual"}


def test_orbit_equation() -> None:
    """𝒲 is constant along the diagonal projection, exactly and at sample points."""
    assert orbit_equation_identity().is_zero()
    for alpha, beta in [(0.7, -0.3), (-1.5, 2.0), (0.1, 0.1)]:
        assert abs(orbit_equation_check(alpha, beta)) < 1e-9
    with raises(ZeroDivisionError):
        orbit_equation_check(0.0, 1.0)


def test_hyperbola_drift() -> None:
    assert hyperbola_drift((0.3, 0.2), 1.0) < 1e-6


def test_embed_flow_as_projective() -> None:
    lifted = embed_flow_as_projective(alpha_beta_field())
    assert lifted.is_two_homogenic()
    assert not lifted.components[2]
    one = MultiPoly.constant(1, ("alpha", "beta"))
    x, y, z = MultiPoly.generators(XYZ)
    constant = embed_flow_as_projective(RationalVF.polynomial((one, one)))
    assert constant.equivalent(RationalVF.polynomial((z * z, z * z, MultiPoly.zero(XYZ))))
    with raises(ValueError):
        embed_flow_as_projective(RationalVF.polynomial((x, y, z)))


def test_sample_projection() -> None:
    rows = sample_projection(SuperflowName.ICOSAHEDRAL, ProjectionKind.STEREOGRAPHIC_SCALED, 3.0, 5)
    assert rows.shape == (25, 4)
    assert rows[0, 0] == -3.0 and rows[-1, 1] == 3.0
    diag = sample_projection("T", "orthogonal-diag", 1.0, 4)
    np.testing.assert_allclose(diag[:, 2], diag[:, 0] * diag[:, 1])
    with raises(ValueError):
        sample_projection("I", "scaled", 3.0, 1)
    with raises(ValueError):
        sample_projection("I", "scaled", 0.0, 5)


def test_render_projection(tmp_path: Path) -> None:
    data = render_projection("I", "scaled", 7.0, 6, tmp_path / "ico.svg")
    assert data.boundary_count == 6
    csv_path, svg_path = data.paths
    assert csv_path.read_text().splitlines()[0] == "alpha,beta,Pi,Theta"
    assert len(csv_path.read_text().splitlines()) == 37
    assert svg_path.read_text().count('id="boundary-') == 6
    assert data.to_json()["name"] is None


def test_emit_figure_data(tmp_path: Path) -> None:
    data = emit_figure_data(FigureName.OCTAHEDRAL_CLOSE, 4, tmp_path / "octa")
    assert data.name is FigureName.OCTAHEDRAL_CLOSE
    assert data.boundary_count == 4
    assert all(p.exists() for p in data.paths)
    with raises(ValueError):
        emit_figure_data("icosahedral-wide", 1, tmp_path / "bad")
    with raises(ValueError):
        emit_figure_data("icosahedral-wide", 4, tmp_path / "bad", window=-1.0)
    with raises(ValueError):
        emit_figure_data("fig9", 4, tmp_path / "bad")


def test_polygon_area() -> None:
    assert polygon_area([(0, 0), (1, 0), (1, 1), (0, 1)]) == 1.0
    assert polygon_area([(0, 0), (0, 1), (1, 1), (1, 0)]) == 1.0


@mark.slow
def test_quadratic_deformation_keeps_area(tmp_path: Path) -> None:
    data = emit_figure_data(FigureName.QUADRATIC_DEFORMATION, 4, tmp_path / "deformation")
    assert data.boundary_count == 7
    assert len(data.areas) == 7
    for area in data.areas:
        assert abs(area - pi) < 0.01 * pi
    assert 'id="curve-6"' in data.paths[1].read_text()
