"""Planar pictures of the superflows.

The stereographic map τ(x, y, z) = (2x/(1−z), 2y/(1−z)) sends the unit sphere minus its north pole onto the plane
z = −1. A spherical superflow then becomes a planar field in two ways: the true image dτ(V), or the same field
multiplied by (1−z), whose orbits agree but whose clock runs slower near the pole. The tetrahedral field is
projected orthogonally instead, onto planes where its orbits become hyperbolas.
"""

from __future__ import annotations

from logging import getLogger
from math import pi, sqrt
from pathlib import Path
from typing import TYPE_CHECKING

import numpy as np
from attrs import field, frozen
from matplotlib.backends.backend_agg import FigureCanvasAgg
from matplotlib.figure import Figure
from scipy.integrate import solve_ivp

from .catalog import build_superflow, enumerate_fixed_points
from .consts import DEFAULT_TOL, MAX_STEP, FigureName, ProjectionKind, SuperflowName
from .field import PHI
from .flow import IntegrationError, ResidualReport, flow_map
from .poly import XYZ, MultiPoly, RationalFunction, RationalVF
from .util import write_csv

if TYPE_CHECKING:  # pragma: no cover
    from typing import Any, Callable, Dict, List, Optional, Sequence, Tuple, Union

    from numpy.typing import ArrayLike, NDArray

    from .catalog import Superflow

    Evaluator = Callable[[ArrayLike, ArrayLike], Tuple[NDArray[np.float64], NDArray[np.float64]]]

logger = getLogger(__name__)

PHI_F = float(PHI)
POLE_TOLERANCE = 1e-12
FIT_SAMPLES = 64
FIGURE_PIXELS = 1000
DEFORMATION_POINTS = 2048
DEFORMATION_STEP = 0.06
DEFORMATION_FRAMES = 7
DEFORMATION_ORBIT_LEVEL = 0.05
STEREOGRAPHIC_KINDS = frozenset({ProjectionKind.STEREOGRAPHIC_SCALED, ProjectionKind.STEREOGRAPHIC_TRUE})
ORTHOGONAL_KINDS = frozenset({ProjectionKind.ORTHOGONAL_X0, ProjectionKind.ORTHOGONAL_DIAG})
FIGURE_WINDOWS: Dict[FigureName, Tuple[SuperflowName, float]] = {
    FigureName.ICOSAHEDRAL_WIDE: (SuperflowName.ICOSAHEDRAL, 7.0),
    FigureName.ICOSAHEDRAL_CLOSE: (SuperflowName.ICOSAHEDRAL, 3.0),
    FigureName.OCTAHEDRAL_CLOSE: (SuperflowName.OCTAHEDRAL, 3.0),
}


class PoleError(ZeroDivisionError):
    """Raised when a point at the north pole is sent through τ."""


class IncompatibleProjectionError(ValueError):
    """Raised when a projection kind is asked of a superflow it does not apply to."""


def stereo_map(points: ArrayLike) -> NDArray[np.float64]:
    """τ(x, y, z) = (2x/(1−z), 2y/(1−z)); the last axis holds the coordinates."""
    pts = np.asarray(points, dtype=float)
    gap = 1 - pts[..., 2]
    if np.any(np.abs(gap) < POLE_TOLERANCE):
        raise PoleError("The north pole has no stereographic image")
    return np.stack([2 * pts[..., 0] / gap, 2 * pts[..., 1] / gap], axis=-1)


def stereo_inverse(points: ArrayLike) -> NDArray[np.float64]:
    """τ⁻¹(α, β) = (4α, 4β, α²+β²−4)/(α²+β²+4), a point of the unit sphere."""
    pts = np.asarray(points, dtype=float)
    a, b = pts[..., 0], pts[..., 1]
    s = a * a + b * b
    return np.stack([4 * a, 4 * b, s - 4], axis=-1) / (s + 4)[..., None]


@frozen
class ProjectedField:
    """A planar field given by a vectorized evaluator (α, β) ↦ (Π, Θ)."""

    kind: ProjectionKind
    superflow: SuperflowName
    evaluator: Evaluator = field(repr=False, eq=False)

    def __call__(self, alpha: ArrayLike, beta: ArrayLike) -> Tuple[NDArray[np.float64], NDArray[np.float64]]:
        return self.evaluator(alpha, beta)

    def at(self, points: ArrayLike) -> NDArray[np.float64]:
        pts = np.asarray(points, dtype=float)
        return np.stack(self(pts[..., 0], pts[..., 1]), axis=-1)


def _stereographic(s: Superflow, true: bool) -> Evaluator:
    def evaluate(alpha: ArrayLike, beta: ArrayLike) -> Tuple[NDArray[np.float64], NDArray[np.float64]]:
        a, b = np.broadcast_arrays(np.asarray(alpha, dtype=float), np.asarray(beta, dtype=float))
        v = s.vector(stereo_inverse(np.stack([a, b], axis=-1)))
        pi_ = 2 * v[..., 0] + a * v[..., 2]
        theta = 2 * v[..., 1] + b * v[..., 2]
        if true:
            factor = (a * a + b * b + 4) / 8
            return factor * pi_, factor * theta
        return pi_, theta

    return evaluate


def _orthogonal_x0(alpha: ArrayLike, beta: ArrayLike) -> Tuple[NDArray[np.float64], NDArray[np.float64]]:
    a, b = np.broadcast_arrays(np.asarray(alpha, dtype=float), np.asarray(beta, dtype=float))
    root = np.sqrt(1 + a * a)
    return b * root, a * root


def _orthogonal_diag(alpha: ArrayLike, beta: ArrayLike) -> Tuple[NDArray[np.float64], NDArray[np.float64]]:
    a, b = np.broadcast_arrays(np.asarray(alpha, dtype=float), np.asarray(beta, dtype=float))
    if np.any(a == 0):
        raise ZeroDivisionError("The diagonal projection is singular on α = 0")
    return a * b, a * a - 1 / (16 * a * a)


def project_field(s: Superflow, kind: Union[str, ProjectionKind]) -> ProjectedField:
    """Build the planar field of a superflow under one of the projections.

    Stereographic kinds apply to the spherical superflows 𝕀 and 𝕆; the orthogonal kinds apply to 𝕋̂.
    """
    kind = ProjectionKind(kind)
    if kind in STEREOGRAPHIC_KINDS:
        if s.name not in (SuperflowName.ICOSAHEDRAL, SuperflowName.OCTAHEDRAL):
            raise IncompatibleProjectionError(f"{kind.value} projection needs a spherical superflow, not {s.name}")
        return ProjectedField(kind, s.name, _stereographic(s, kind is ProjectionKind.STEREOGRAPHIC_TRUE))
    if s.name is not SuperflowName.TETRAHEDRAL:
        raise IncompatibleProjectionError(f"{kind.value} projection only applies to the tetrahedral superflow")
    evaluator = _orthogonal_x0 if kind is ProjectionKind.ORTHOGONAL_X0 else _orthogonal_diag
    return ProjectedField(kind, s.name, evaluator)


def _planar_solve(
    rhs: Callable[[float, NDArray[np.float64]], NDArray[np.float64]],
    y0: ArrayLike,
    t_end: float,
    tol: float,
    t_eval: Optional[NDArray[np.float64]] = None,
) -> NDArray[np.float64]:
    result = solve_ivp(rhs, (0.0, t_end), np.asarray(y0, dtype=float), method="RK45", rtol=tol, atol=tol,
                       max_step=MAX_STEP, t_eval=t_eval)
    if result.status == -1:
        raise IntegrationError(result.message)
    return result.y.T


def verify_projection_contract(
    s: Superflow,
    kind: Union[str, ProjectionKind],
    x: ArrayLike,
    t: float,
    tol: float = 1e-6,
    integrator_tol: float = DEFAULT_TOL,
    samples: int = 4,
) -> ResidualReport:
    """Compare the planar flow of τ(x) against τ(F(x, ·)) at a few sampled times.

    The true kind is compared time for time. The scaled kind runs a clock θ′ = 1 − z next to the planar state,
    so the planar point at time u is compared against τ(F(x, θ(u))).
    """
    kind = ProjectionKind(kind)
    if kind not in STEREOGRAPHIC_KINDS:
        raise IncompatibleProjectionError("The flow contract is checked for the stereographic kinds only")
    projected = project_field(s, kind)
    start = np.asarray(x, dtype=float)
    start = start / np.linalg.norm(start)
    if t == 0:
        return ResidualReport(f"projection-contract[{kind.value}]", 0.0, tol)
    times = np.linspace(0, t, samples + 1)[1:]

    def rhs(u: float, y: NDArray[np.float64]) -> NDArray[np.float64]:
        step = projected.at(y[:2])
        if kind is ProjectionKind.STEREOGRAPHIC_TRUE:
            return step
        return np.append(step, 1 - stereo_inverse(y[:2])[2])

    y0 = stereo_map(start)
    if kind is ProjectionKind.STEREOGRAPHIC_SCALED:
        y0 = np.append(y0, 0.0)
    planar = _planar_solve(rhs, y0, t, integrator_tol, times)
    residual = 0.0
    for u, state in zip(times, planar):
        clock = u if kind is ProjectionKind.STEREOGRAPHIC_TRUE else state[2]
        image = stereo_map(flow_map(s.field, start, clock, integrator_tol).value)
        residual = max(residual, float(np.max(np.abs(image - state[:2]))))
    logger.debug("%s contract for %s from %s: residual %g", kind.value, s.name.display, start, residual)
    return ResidualReport(f"projection-contract[{kind.value}]", residual, tol)


def scaled_zero_residual(s: Superflow) -> float:
    """Largest |Π, Θ| of the scaled icosahedral projection over the images of the visible fixed points."""
    points = [p.unit() for p in enumerate_fixed_points(s)]
    visible = np.array([p for p in points if 1 - p[2] > POLE_TOLERANCE])
    values = project_field(s, ProjectionKind.STEREOGRAPHIC_SCALED).at(stereo_map(visible))
    return float(np.max(np.linalg.norm(values, axis=-1)))


@frozen
class CircleImage:
    """The stereographic image of a great circle: a circle, or a line through the origin when it meets the pole."""

    source: str
    center: Optional[Tuple[float, float]]
    radius: Optional[float]
    fit_residual: float
    direction: Optional[Tuple[float, float]] = None

    @property
    def is_line(self) -> bool:
        return self.radius is None

    def to_json(self) -> Dict[str, Any]:
        return {
            "source": self.source,
            "center": self.center,
            "radius": self.radius,
            "direction": self.direction,
            "fit_residual": self.fit_residual,
        }


def _great_circle(normal: NDArray[np.float64], samples: int = FIT_SAMPLES) -> NDArray[np.float64]:
    n = normal / np.linalg.norm(normal)
    helper = np.array([1.0, 0.0, 0.0]) if abs(n[0]) < 0.9 else np.array([0.0, 1.0, 0.0])
    e1 = np.cross(n, helper)
    e1 /= np.linalg.norm(e1)
    e2 = np.cross(n, e1)
    angles = (np.arange(samples) + 0.5) * 2 * pi / samples
    ret = np.cos(angles)[:, None] * e1 + np.sin(angles)[:, None] * e2
    return ret[1 - ret[:, 2] > 1e-6]


def _kasa_fit(points: NDArray[np.float64]) -> Tuple[Tuple[float, float], float, float]:
    """Least-squares circle through planar points; returns centre, radius and the worst radial miss."""
    a, b = points[:, 0], points[:, 1]
    lhs = np.stack([a, b, np.ones_like(a)], axis=-1)
    (c1, c2, c3), *_ = np.linalg.lstsq(lhs, -(a * a + b * b), rcond=None)
    center = (-c1 / 2, -c2 / 2)
    radius = sqrt(center[0] ** 2 + center[1] ** 2 - c3)
    miss = np.abs(np.hypot(a - center[0], b - center[1]) - radius)
    return (float(center[0]), float(center[1])), float(radius), float(np.max(miss))


def _circle_image(source: str, normal: Sequence[float]) -> CircleImage:
    n = np.asarray(normal, dtype=float)
    n = n / np.linalg.norm(n)
    image = stereo_map(_great_circle(n))
    if abs(n[2]) < POLE_TOLERANCE:
        direction = (float(-n[1]), float(n[0]))
        miss = float(np.max(np.abs(image @ n[:2])))
        return CircleImage(source, None, None, miss, direction)
    center = (float(-2 * n[0] / n[2]), float(-2 * n[1] / n[2]))
    radius = float(2 / abs(n[2]))
    fit_center, fit_radius, miss = _kasa_fit(image)
    miss = max(miss, abs(fit_radius - radius), abs(fit_center[0] - center[0]), abs(fit_center[1] - center[1]))
    return CircleImage(source, center, radius, miss)


def icosahedral_planes() -> List[Tuple[str, Tuple[float, float, float]]]:
    """The six planes through the origin on which 𝒱 vanishes, as (label, normal)."""
    return [
        ("y=phi*x", (PHI_F, -1.0, 0.0)),
        ("y=-phi*x", (PHI_F, 1.0, 0.0)),
        ("z=phi*y", (0.0, -PHI_F, 1.0)),
        ("z=-phi*y", (0.0, PHI_F, 1.0)),
        ("x=phi*z", (1.0, 0.0, -PHI_F)),
        ("x=-phi*z", (1.0, 0.0, PHI_F)),
    ]


def octahedral_planes() -> List[Tuple[str, Tuple[float, float, float]]]:
    return [
        ("x+y+z=0", (1.0, 1.0, 1.0)),
        ("x+y-z=0", (1.0, 1.0, -1.0)),
        ("x-y+z=0", (1.0, -1.0, 1.0)),
        ("x-y-z=0", (1.0, -1.0, -1.0)),
    ]


def singular_circle_images(name: Optional[Union[str, SuperflowName]] = None) -> List[CircleImage]:
    """Images of the invariant great circles, each checked by fitting 64 sampled points.

    With no name, the icosahedral and octahedral families are both returned.
    """
    planes = []
    if name is None or SuperflowName(name) is SuperflowName.ICOSAHEDRAL:
        planes.extend(icosahedral_planes())
    if name is None or SuperflowName(name) is SuperflowName.OCTAHEDRAL:
        planes.extend(octahedral_planes())
    return [_circle_image(label, normal) for label, normal in planes]


def _orbit_function() -> Tuple[RationalFunction, RationalFunction, RationalFunction]:
    a, b = MultiPoly.generators(("alpha", "beta"))
    den = 16 * a * a
    w = RationalFunction.of((4 * a * a + 1) ** 2 - 16 * a * a * b * b, den)
    return w, RationalFunction.of(a * b), RationalFunction.of(16 * a ** 4 - 1, den)


def orbit_equation_identity() -> RationalFunction:
    """𝒲_α Π̂ + 𝒲_β Θ̂ for 𝒲 = (α + 1/(4α))² − β², as an exact rational function (it reduces to zero)."""
    w, pi_, theta = _orbit_function()
    return (w.diff("alpha") * pi_ + w.diff("beta") * theta).reduce()


def orbit_equation_check(alpha: float, beta: float) -> float:
    """Numeric value of 𝒲_α Π̂ + 𝒲_β Θ̂ at one point."""
    if alpha == 0:
        raise ZeroDivisionError("The orbit function is singular on α = 0")
    inner = alpha + 1 / (4 * alpha)
    w_a = 2 * inner * (1 - 1 / (4 * alpha * alpha))
    w_b = -2 * beta
    pi_, theta = _orthogonal_diag(alpha, beta)
    return float(w_a * pi_ + w_b * theta)


def hyperbola_drift(start: Sequence[float], t: float, tol: float = DEFAULT_TOL) -> float:
    """Largest change of α² − β² along the orthogonal-x0 field from start over [0, t]."""
    def rhs(u: float, y: NDArray[np.float64]) -> NDArray[np.float64]:
        return np.array(_orthogonal_x0(y[0], y[1]), dtype=float)

    states = _planar_solve(rhs, start, t, tol)
    level = states[:, 0] ** 2 - states[:, 1] ** 2
    return float(np.max(np.abs(level - level[0])))


def embed_flow_as_projective(v: RationalVF) -> RationalVF:
    """Lift a planar rational field to a 2-homogenic field in ℝ³ via f̃(x, y, z) = z²f(x/z, y/z).

    The last component is zero, so every plane z = const is invariant, and on z = 1 the lift is the input.
    """
    if v.n != 2:
        raise ValueError(f"Expected a planar field, got {v.n} components")
    xy = XYZ[:2]
    numerators = [MultiPoly(xy, c.terms) for c in v.components]
    denominator = MultiPoly(xy, v.denominator.terms)
    m = denominator.degree
    shifts = [2 + m - max(c.degree, 0) for c in numerators]
    low = min(0, *shifts)
    z = MultiPoly.variable("z", XYZ)
    lifted = [c.homogenize("z", max(c.degree, 0)) * z ** (k - low) for c, k in zip(numerators, shifts)]
    ret = RationalVF((*lifted, MultiPoly.zero(XYZ)), denominator.homogenize("z", m) * z ** (-low))
    if not ret.is_two_homogenic():
        raise ArithmeticError(f"The lift of {v} is not 2-homogenic")
    return ret


def alpha_beta_field() -> RationalVF:
    """The diagonal projection (αβ, α² − 1/(16α²)) as a planar rational field."""
    a, b = MultiPoly.generators(("alpha", "beta"))
    return RationalVF((16 * a ** 3 * b, 16 * a ** 4 - 1), 16 * a * a)


@frozen
class FigureData:
    """What a figure run produced: drawn boundary or curve count, enclosed areas, and written files."""

    name: Optional[FigureName]
    boundary_count: int
    areas: Tuple[float, ...] = field(converter=tuple)
    paths: Tuple[Path, ...] = field(converter=tuple)

    def to_json(self) -> Dict[str, Any]:
        return {
            "name": self.name.value if self.name is not None else None,
            "boundary_count": self.boundary_count,
            "areas": list(self.areas),
            "paths": [str(p) for p in self.paths],
        }


def _new_figure() -> Tuple[Figure, Any]:
    fig = Figure(figsize=(FIGURE_PIXELS / 100, FIGURE_PIXELS / 100), dpi=100)
    FigureCanvasAgg(fig)
    return fig, fig.add_subplot(1, 1, 1)


def _draw_boundary(ax: Any, image: CircleImage, index: int, window: float) -> None:
    if image.is_line:
        assert image.direction is not None
        d = np.asarray(image.direction)
        span = np.linspace(-3 * window, 3 * window, 2)
        xs, ys = span * d[0], span * d[1]
    else:
        assert image.center is not None and image.radius is not None
        angles = np.linspace(0, 2 * pi, 721)
        xs = image.center[0] + image.radius * np.cos(angles)
        ys = image.center[1] + image.radius * np.sin(angles)
    (line, ) = ax.plot(xs, ys, color="tab:red", linewidth=1.2)
    line.set_gid(f"boundary-{index}")


def sample_projection(
    name: Union[str, SuperflowName], kind: Union[str, ProjectionKind], window: float, grid: int
) -> NDArray[np.float64]:
    """Evaluate a projected field on a grid × grid lattice over [−window, window]²; rows are (α, β, Π, Θ)."""
    if grid < 2:
        raise ValueError(f"grid must be at least 2, got {grid}")
    if not window > 0:
        raise ValueError(f"window must be positive, got {window}")
    projected = project_field(build_superflow(name), kind)
    axis = np.linspace(-window, window, grid)
    alpha, beta = np.meshgrid(axis, axis, indexing="xy")
    pi_, theta = projected(alpha, beta)
    return np.stack([alpha.ravel(), beta.ravel(), pi_.ravel(), theta.ravel()], axis=-1)


def render_projection(
    name: Union[str, SuperflowName],
    kind: Union[str, ProjectionKind],
    window: float,
    grid: int,
    out: Union[str, Path],
) -> FigureData:
    """Write the sampled field as CSV and a quiver plot, with the singular circle images, as SVG next to ``out``."""
    name, kind, out = SuperflowName(name), ProjectionKind(kind), Path(out)
    rows = sample_projection(name, kind, window, grid)
    csv_path = write_csv(out.with_suffix(".csv"), ("alpha", "beta", "Pi", "Theta"), rows)
    alpha, beta, pi_, theta = (rows[:, k].reshape(grid, grid) for k in range(4))
    norm = np.hypot(pi_, theta)
    norm[norm == 0] = 1
    fig, ax = _new_figure()
    ax.quiver(alpha, beta, pi_ / norm, theta / norm, angles="xy", pivot="middle", color="k", width=0.002)
    images = singular_circle_images(name) if kind in STEREOGRAPHIC_KINDS else []
    for k, image in enumerate(images):
        _draw_boundary(ax, image, k, window)
    ax.set_xlim(-window, window)
    ax.set_ylim(-window, window)
    ax.set_aspect("equal")
    ax.set_xlabel("α")
    ax.set_ylabel("β")
    ax.set_title(f"{name.value} superflow, {kind.value} projection, |α|, |β| ≤ {window:g}")
    svg_path = out.with_suffix(".svg")
    svg_path.parent.mkdir(parents=True, exist_ok=True)
    fig.savefig(svg_path, format="svg")
    logger.info("wrote %s", svg_path)
    return FigureData(None, len(images), (), (csv_path, svg_path))


def _field_figure(which: FigureName, grid: int, out: Path, window: Optional[float]) -> FigureData:
    name, default_window = FIGURE_WINDOWS[which]
    data = render_projection(
        name, ProjectionKind.STEREOGRAPHIC_SCALED, default_window if window is None else window, grid, out
    )
    return FigureData(which, data.boundary_count, data.areas, data.paths)


def polygon_area(points: ArrayLike) -> float:
    """Shoelace area of a closed polygon given by its vertices in order."""
    pts = np.asarray(points, dtype=float)
    x, y = pts[:, 0], pts[:, 1]
    return float(abs(np.dot(x, np.roll(y, -1)) - np.dot(y, np.roll(x, -1))) / 2)


def deform_unit_circle(
    points: int = DEFORMATION_POINTS, frames: int = DEFORMATION_FRAMES, tol: float = 1e-9
) -> Tuple[NDArray[np.float64], NDArray[np.float64]]:
    """Carry the unit circle of the plane z = 1 along the 𝔸₄ flow; returns the times and (frame, point, xy)."""
    s = build_superflow(SuperflowName.ANTIPRISMATIC)
    angles = np.arange(points) * 2 * pi / points
    start = np.stack([np.cos(angles), np.sin(angles), np.ones(points)], axis=-1)
    times = DEFORMATION_STEP * np.arange(frames)

    def rhs(u: float, y: NDArray[np.float64]) -> NDArray[np.float64]:
        return s.vector(y.reshape(-1, 3)).ravel()

    result = solve_ivp(rhs, (0.0, float(times[-1])), start.ravel(), method="RK45", rtol=tol, atol=tol,
                       t_eval=times)
    if result.status == -1:
        raise IntegrationError(result.message)
    curves = result.y.T.reshape(frames, points, 3)[..., :2]
    return times, curves


def _deformation_figure(grid: int, out: Path) -> FigureData:
    times, curves = deform_unit_circle()
    areas = [polygon_area(c) for c in curves]
    csv_path = write_csv(out.with_suffix(".csv"), ("t", "area"), np.stack([times, areas], axis=-1))
    fig, ax = _new_figure()
    for j, curve in enumerate(curves):
        closed = np.vstack([curve, curve[:1]])
        (line, ) = ax.plot(closed[:, 0], closed[:, 1], linewidth=1.0, label=f"t = {times[j]:.2f}")
        line.set_gid(f"curve-{j}")
    axis = np.linspace(-2.5, 2.5, max(grid, 2) * 8)
    x, y = np.meshgrid(axis, axis)
    ax.contour(x, y, x ** 3 * y - x * y ** 3, levels=[DEFORMATION_ORBIT_LEVEL], colors="k", linewidths=0.8)
    ax.set_aspect("equal")
    ax.legend(loc="upper right")
    svg_path = out.with_suffix(".svg")
    svg_path.parent.mkdir(parents=True, exist_ok=True)
    fig.savefig(svg_path, format="svg")
    logger.info("wrote %s with areas %s", svg_path, ", ".join(f"{a:.6f}" for a in areas))
    return FigureData(FigureName.QUADRATIC_DEFORMATION, len(curves), areas, (csv_path, svg_path))


def emit_figure_data(
    which: Union[str, FigureName], grid: int, out: Union[str, Path], window: Optional[float] = None
) -> FigureData:
    """Write the CSV and SVG of one figure next to ``out`` (suffixes are replaced)."""
    which = FigureName(which)
    if grid < 2:
        raise ValueError(f"grid must be at least 2, got {grid}")
    if window is not None and not window > 0:
        raise ValueError(f"window must be positive, got {window}")
    out = Path(out)
    if which is FigureName.QUADRATIC_DEFORMATION:
        return _deformation_figure(grid, out)
    return _field_figure(which, grid, out, window)
