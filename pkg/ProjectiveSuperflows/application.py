"""Contains functions which are needed to run the runner script, but nowhere else."""

from __future__ import annotations

from argparse import ArgumentParser, ArgumentTypeError, Namespace
from fractions import Fraction
from logging import getLogger
from os import getenv
from typing import TYPE_CHECKING

import numpy as np

from .catalog import build_superflow, classify_level_set, enumerate_fixed_points, proposition_case
from .check import get_check
from .check.abstract import CheckSuite
from .check.numeric import start_point
from .consts import (AVAILABLE_CHECKS, DEFAULT_TOL, MIN_RESOLUTION, ExitCode, FigureName, ProjectionKind, Stepper,
                     SuperflowName)
from .curves import verify_identity_chain
from .flow import (check_backward_orbit_relation, check_scaling_law, check_translation_equation,
                   integrate_backward_system)
from .group import GroupSpec, build_catalog_group
from .invariant import superflow_verdict, verify_symmetric_extension
from .projection import emit_figure_data, render_projection, sample_projection
from .util import canonical_json, format_csv, round_sig_figs, seeded_rng, write_csv, write_output

if TYPE_CHECKING:  # pragma: no cover
    from typing import Any, Dict, List, Optional, Sequence

    from . import CheckResult

logger = getLogger(__name__)


def _group_spec(text: str) -> GroupSpec:
    try:
        return GroupSpec.parse(text)
    except ValueError as e:
        raise ArgumentTypeError(str(e))


def _vector(text: str) -> List[float]:
    try:
        ret = [float(c) for c in text.split(",")]
    except ValueError:
        raise ArgumentTypeError(f"expected comma-separated numbers, got {text!r}")
    if len(ret) != 3:
        raise ArgumentTypeError(f"expected three coordinates, got {len(ret)}")
    return ret


def _exact(text: str) -> Fraction:
    try:
        return Fraction(text)
    except ValueError:
        raise ArgumentTypeError(f"expected a rational number such as -1/20, got {text!r}")


def _positive(text: str) -> float:
    ret = float(text)
    if not ret > 0:
        raise ArgumentTypeError(f"expected a positive number, got {text!r}")
    return ret


def _non_negative_int(text: str) -> int:
    ret = int(text)
    if ret < 0:
        raise ArgumentTypeError(f"expected a non-negative integer, got {text!r}")
    return ret


def parse_args(*args: Any, **kwargs: Any) -> Namespace:
    """Parse arguments for the CLI."""
    main_parser = ArgumentParser(prog="ProjectiveSuperflows")
    main_parser.add_argument('--no-logging', action='store_false', dest='logging', default=True)
    main_parser.add_argument('-v', '--verbose', action='count', default=0)

    subparsers = main_parser.add_subparsers(dest='command', required=True)
    superflows = [n.value for n in SuperflowName]

    catalog_parser = subparsers.add_parser('catalog', help="Inspect the five catalog superflows")
    catalog_parser.add_argument('action', choices=['show', 'list'])
    catalog_parser.add_argument('name', nargs='?', choices=superflows)
    catalog_parser.add_argument('--fixed-points', action='store_true', help="Also list the 62 zeros (𝕀 only)")
    catalog_parser.add_argument('--group', action='store_true', help="Also dump every group element")
    catalog_parser.add_argument('-o', '--out', action='store')
    catalog_parser.set_defaults(func=catalog_command)

    solve_parser = subparsers.add_parser('solve-invariant', help="Sweep invariant fields of a group by degree")
    solve_parser.add_argument('--group', type=_group_spec, required=True, help='e.g. "icosahedral" or "cyclic:3"')
    solve_parser.add_argument('--max-denom-degree', type=_non_negative_int, required=True)
    solve_parser.add_argument('-o', '--out', action='store')
    solve_parser.set_defaults(func=solve_invariant_command)

    verdict_parser = subparsers.add_parser('verdict', help="Decide whether a group carries a superflow")
    target = verdict_parser.add_mutually_exclusive_group(required=True)
    target.add_argument('--group', type=_group_spec)
    target.add_argument('--superflow', choices=superflows)
    verdict_parser.add_argument('--max-denom-degree', type=_non_negative_int)
    verdict_parser.add_argument('-o', '--out', action='store')
    verdict_parser.set_defaults(func=verdict_command)

    orbit_parser = subparsers.add_parser('orbit', help="Integrate the backward system from one start")
    orbit_parser.add_argument('--superflow', choices=superflows, required=True)
    orbit_parser.add_argument('--start', type=_vector, required=True, help='as "x,y,z"')
    orbit_parser.add_argument('--t', dest='t_end', type=float, default=1.0)
    orbit_parser.add_argument('--tol', type=_positive, default=DEFAULT_TOL)
    orbit_parser.add_argument('--stepper', choices=[s.value for s in Stepper], default=Stepper.RK45.value)
    orbit_parser.add_argument('-o', '--out', action='store', help="CSV destination; a summary still goes to stdout")
    orbit_parser.set_defaults(func=orbit_command)

    flowcheck_parser = subparsers.add_parser('flowcheck', help="Randomized translation-equation cases")
    flowcheck_parser.add_argument('--superflow', choices=superflows, action='append', dest='names')
    flowcheck_parser.add_argument('--cases', type=int, default=20)
    flowcheck_parser.add_argument('--max-time', type=_positive, default=0.2)
    flowcheck_parser.add_argument('--tol', type=_positive, default=1e-7)
    flowcheck_parser.add_argument('--scaling', action='store_true', help="Also check F(λx, t/λ) = λF(x, t)")
    flowcheck_parser.add_argument(
        '--backward-relation', action='store_true', help="Also check φ(ςP(s)) = ςP(s−ς) along backward orbits"
    )
    flowcheck_parser.add_argument('-o', '--out', action='store')
    flowcheck_parser.set_defaults(func=flowcheck_command)

    curves_parser = subparsers.add_parser('curves', help="Verify the curves of the triple reduction")
    curves_parser.add_argument('action', choices=['verify', 'identities'])
    curves_parser.add_argument('--xi', type=_exact, help="Level; left symbolic by `identities` when absent")
    curves_parser.add_argument('--t', dest='t_end', type=_positive, default=1.0)
    curves_parser.add_argument('-o', '--out', action='store')
    curves_parser.set_defaults(func=curves_command)

    classify_parser = subparsers.add_parser('classify', help="Count components of 𝒱 = ξ on the sphere")
    classify_parser.add_argument('--xi', type=_exact, required=True)
    classify_parser.add_argument('--resolution', type=int, default=MIN_RESOLUTION)
    classify_parser.add_argument('-o', '--out', action='store')
    classify_parser.set_defaults(func=classify_command)

    project_parser = subparsers.add_parser('project', help="Sample a projected field, or emit a named figure")
    what = project_parser.add_mutually_exclusive_group(required=True)
    what.add_argument('--superflow', choices=superflows)
    what.add_argument('--figure', choices=[f.value for f in FigureName])
    project_parser.add_argument('--kind', choices=[k.value for k in ProjectionKind],
                                default=ProjectionKind.STEREOGRAPHIC_SCALED.value)
    project_parser.add_argument('--window', type=_positive)
    project_parser.add_argument('--grid', type=int, default=64)
    project_parser.add_argument('-o', '--out', action='store', help="Suffix is replaced by .csv and .svg")
    project_parser.set_defaults(func=project_command)

    extension_parser = subparsers.add_parser(
        'symmetric-extension', aliases=['prop-ext'], help="Solve the reducible family in dimension n + 1"
    )
    extension_parser.add_argument('-n', '--dimension', type=int, action='append', dest='dimensions')
    extension_parser.add_argument('-o', '--out', action='store')
    extension_parser.set_defaults(func=symmetric_extension_command)

    verify_parser = subparsers.add_parser('verify', help="Run registered checks and report each of them")
    verify_parser.add_argument('--all', action='store_true', dest='all_checks')
    for name in AVAILABLE_CHECKS:
        verify_parser.add_argument(
            f'--enable-{name.replace(".", "-")}', dest='checks', action='append_const', const=name
        )
    verify_parser.add_argument('--explain', action='store_true')
    verify_parser.add_argument('-o', '--out', action='store')
    verify_parser.set_defaults(func=verify_command)

    parsed: Namespace = main_parser.parse_args(*args, **kwargs)

    if parsed.command == 'catalog' and parsed.action == 'show' and parsed.name is None:
        catalog_parser.error("catalog show needs a superflow name")
    if parsed.command == 'verify':
        if parsed.all_checks:
            parsed.checks = list(AVAILABLE_CHECKS)
        elif not parsed.checks:
            verify_parser.error("pass --all or at least one --enable-<check>")
    if parsed.command == 'project' and parsed.grid < 2:
        project_parser.error("--grid must be at least 2")
    if parsed.command == 'classify' and parsed.resolution < 1:
        classify_parser.error("--resolution must be positive")

    return parsed


def _print_uncaught_args(kwargs: Dict[str, Any]) -> None:
    if getenv("DEBUG") and kwargs:
        print("Unrecognized arguments:")
        print("\n".join(f'{key}: {value}' for key, value in kwargs.items()))


def _emit(obj: Any, out: Optional[str]) -> None:
    write_output(canonical_json(obj), out)


def _report(result: CheckResult, out: Optional[str]) -> int:
    _emit(result, out)
    for failure in result.failures():
        got = round_sig_figs(failure.got) if isinstance(failure.got, float) else failure.got
        logger.error("%s: expected %s, got %s", failure.name, failure.expected, got)
    return ExitCode.OK if result.passed else ExitCode.FAILED


def catalog_command(
    action: str,
    name: Optional[str] = None,
    fixed_points: bool = False,
    group: bool = False,
    out: Optional[str] = None,
    **kwargs: Any
) -> int:
    """Show one catalog superflow, or list all of them."""
    _print_uncaught_args(kwargs)
    if action == 'list':
        listing = []
        for n in SuperflowName:
            s = build_superflow(n)
            listing.append({"name": n.value, "display": n.display, "group_order": s.symmetry_group.order,
                            "denominator": str(s.field.denominator)})
        _emit(listing, out)
        return ExitCode.OK
    s = build_superflow(name)  # type: ignore[arg-type]
    info = s.to_json()
    if group:
        info["group"] = s.symmetry_group.to_json()
    if fixed_points:
        info["fixed_points"] = [p.to_json() for p in enumerate_fixed_points(s)]
    _emit(info, out)
    return ExitCode.OK


def solve_invariant_command(group: GroupSpec, max_denom_degree: int, out: Optional[str] = None, **kwargs: Any) -> int:
    """Run the full degree sweep and dump every (character, denominator) pair with the witness basis."""
    _print_uncaught_args(kwargs)
    matrix_group = build_catalog_group(group)
    verdict = superflow_verdict(matrix_group, max_denom_degree)
    _emit({"group": {"spec": str(group), "order": matrix_group.order, "tag": matrix_group.tag.value},
           "verdict": verdict}, out)
    return ExitCode.OK


def verdict_command(
    group: Optional[GroupSpec] = None,
    superflow: Optional[str] = None,
    max_denom_degree: Optional[int] = None,
    out: Optional[str] = None,
    **kwargs: Any
) -> int:
    """Print the short verdict; for a catalog superflow the sweep runs up to its own denominator degree."""
    _print_uncaught_args(kwargs)
    if superflow is not None:
        s = build_superflow(superflow)
        matrix_group = s.symmetry_group
        degree = s.field.denominator.degree if max_denom_degree is None else max_denom_degree
    else:
        matrix_group = build_catalog_group(group)  # type: ignore[arg-type]
        degree = 4 if max_denom_degree is None else max_denom_degree
    verdict = superflow_verdict(matrix_group, degree)
    _emit({
        "group_order": matrix_group.order,
        "exists": verdict.exists,
        "reason": verdict.reason,
        "degree": verdict.degree,
        "family_dimension": verdict.family_dimension,
        "witness": str(verdict.witness.normalized()) if verdict.witness is not None else None,
    }, out)
    return ExitCode.OK


def orbit_command(
    superflow: str,
    start: Sequence[float],
    t_end: float = 1.0,
    tol: float = DEFAULT_TOL,
    stepper: str = Stepper.RK45.value,
    out: Optional[str] = None,
    **kwargs: Any
) -> int:
    """Integrate one orbit, writing every sample as CSV when asked and the summary as JSON."""
    _print_uncaught_args(kwargs)
    s = build_superflow(superflow)
    trace = integrate_backward_system(s, np.asarray(start, dtype=float), t_end, tol, Stepper(stepper))
    if out is not None:
        write_csv(out, trace.columns(), trace.rows())
    _emit(trace, None)
    return ExitCode.OK


def flowcheck_command(
    names: Optional[List[str]] = None,
    cases: int = 20,
    max_time: float = 0.2,
    tol: float = 1e-7,
    scaling: bool = False,
    backward_relation: bool = False,
    out: Optional[str] = None,
    **kwargs: Any
) -> int:
    """Check the translation equation at seeded random points and times.

    The scaling law and the backward orbit relation are checked alongside when asked for.
    """
    _print_uncaught_args(kwargs)
    report = []
    passed = True
    for name in (SuperflowName(n) for n in (names or [n.value for n in SuperflowName])):
        s = build_superflow(name)
        rng = seeded_rng(f"translation-{name.value}")
        for k in range(cases):
            x = start_point(s, rng)
            t, u = rng.uniform(0, max_time, size=2)
            result = check_translation_equation(s.field, x, float(t), float(u), tol)
            report.append({"superflow": name.value, "case": k, **result.to_json()})
            passed &= result.passed
            if scaling:
                lam = float(rng.uniform(0.5, 2.0))
                result = check_scaling_law(s.field, x, float(t), lam, tol)
                report.append({"superflow": name.value, "case": k, **result.to_json()})
                passed &= result.passed
            if backward_relation and u > 0:
                result = check_backward_orbit_relation(s.field, x, float(t), float(u), tol)
                report.append({"superflow": name.value, "case": k, **result.to_json()})
                passed &= result.passed
    _emit({"passed": passed, "cases": report}, out)
    return ExitCode.OK if passed else ExitCode.FAILED


def curves_command(
    action: str,
    xi: Optional[Fraction] = None,
    t_end: float = 1.0,
    out: Optional[str] = None,
    **kwargs: Any
) -> int:
    """Verify the curve residuals along an orbit, or the exact identity chain."""
    _print_uncaught_args(kwargs)
    if action == 'identities':
        report = verify_identity_chain(xi, strict=False)
        _emit(report, out)
        return ExitCode.OK if report.passed else ExitCode.FAILED
    options: Dict[str, Any] = {"t_end": t_end}
    if xi is not None:
        options["xi"] = float(xi)
    return _report(get_check("numeric.CurveResiduals").from_dict(options).run(), out)


def classify_command(xi: Fraction, resolution: int = MIN_RESOLUTION, out: Optional[str] = None, **kwargs: Any) -> int:
    """Count level-set components on the icosphere and compare against the exact case map."""
    _print_uncaught_args(kwargs)
    exact = proposition_case(xi)
    grid = classify_level_set(float(xi), resolution)
    _emit({"grid": grid, "exact": exact, "resolution": resolution,
           "agree": grid.component_count == exact.component_count}, out)
    return ExitCode.OK


def project_command(
    superflow: Optional[str] = None,
    figure: Optional[str] = None,
    kind: str = ProjectionKind.STEREOGRAPHIC_SCALED.value,
    window: Optional[float] = None,
    grid: int = 64,
    out: Optional[str] = None,
    **kwargs: Any
) -> int:
    """Sample a projected field (CSV to stdout without ``--out``), or write a named figure's CSV and SVG."""
    _print_uncaught_args(kwargs)
    if figure is not None:
        _emit(emit_figure_data(figure, grid, out or f"{figure}.svg", window), None)
        return ExitCode.OK
    window = 3.0 if window is None else window
    if out is None:
        rows = sample_projection(superflow, kind, window, grid)  # type: ignore[arg-type]
        write_output(format_csv(("alpha", "beta", "Pi", "Theta"), rows).rstrip("\n"))
        return ExitCode.OK
    _emit(render_projection(superflow, kind, window, grid, out), None)  # type: ignore[arg-type]
    return ExitCode.OK


def symmetric_extension_command(
    dimensions: Optional[List[int]] = None, out: Optional[str] = None, **kwargs: Any
) -> int:
    """Solve the constrained ansatz in each requested dimension."""
    _print_uncaught_args(kwargs)
    reports = [verify_symmetric_extension(n) for n in (dimensions or [3, 4])]
    _emit(reports, out)
    return ExitCode.OK if all(r.passed for r in reports) else ExitCode.FAILED


def verify_command(checks: List[str], explain: bool = False, out: Optional[str] = None, **kwargs: Any) -> int:
    """Run the selected checks as one suite and emit the structured report."""
    _print_uncaught_args(kwargs)
    suite = CheckSuite.from_names(checks)
    if explain:
        print(suite.explain())
    return _report(suite.run(), out)


def dispatch(args: Namespace) -> int:
    """Run a parsed command, turning domain errors into exit code 1."""
    try:
        return int(args.func(**vars(args)))
    except (ArithmeticError, ValueError, RuntimeError) as e:
        logger.exception("%s failed", args.command)
        print(f"error: {type(e).__name__}: {e}")
        return ExitCode.FAILED


def run(argv: Optional[Sequence[str]] = None) -> int:
    """Parse argv and run the command; usage errors give exit code 2."""
    try:
        args = parse_args(argv)
    except SystemExit as e:
        return ExitCode.OK if not e.code else ExitCode.USAGE
    return dispatch(args)
