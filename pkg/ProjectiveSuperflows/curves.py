"""Orbits of the icosahedral superflow as algebraic curves.

Along an orbit on the level 𝒱 = ξ the functions P = φ²p²−q², Q = φ²q²−r², R = φ²r²−p² satisfy P+Q+R = φ and
PQR = ξ. Each of them, paired with its derivative, parametrizes a plane curve; the substitution
Υ = (X³−φX²−ξ)/X collapses that curve to a simpler one. The exact identities behind those statements are checked
as polynomial identities here, and the curves themselves are checked along numeric orbits.
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from logging import getLogger
from math import sqrt
from typing import TYPE_CHECKING

import numpy as np
from attrs import field, frozen
from scipy.optimize import brentq

from .catalog import LEVEL_MAX, LEVEL_MIN, icosahedral_invariant, icosahedral_numerator
from .field import PHI, SQRT5, GoldenNumber
from .matrix import nullspace
from .poly import XYZ, MultiPoly

if TYPE_CHECKING:  # pragma: no cover
    from typing import Any, Dict, Optional, Sequence, Tuple, Union

    from numpy.typing import ArrayLike, NDArray

    from .flow import OrbitTrace

    Exact = Union[int, Fraction, GoldenNumber]

logger = getLogger(__name__)

PHI_F = float(PHI)
SQRT5_F = sqrt(5)
CYCLIC = {"P": (0, 1, 2), "Q": (1, 2, 0), "R": (2, 0, 1)}
RATIONAL_LEVEL = -PHI ** 3 / 6


class IdentityFailure(ArithmeticError):
    """Raised when an identity that should hold exactly leaves a nonzero remainder."""

    def __init__(self, name: str, remainder: MultiPoly) -> None:
        lead = remainder.leading_term()
        super().__init__(f"{name}: nonzero remainder, leading term {lead[1]} at {lead[0]} in {remainder.variables}")
        self.name = name
        self.remainder = remainder


class OutsideRealLocusError(ValueError):
    """Raised when (P, Q, R) does not come from a real point: a recovered square is negative."""


@frozen
class PQRState:
    P: float
    Q: float
    R: float

    @property
    def total(self) -> float:
        return self.P + self.Q + self.R

    @property
    def product(self) -> float:
        return self.P * self.Q * self.R


def pqr_array(states: ArrayLike) -> NDArray[np.float64]:
    """(P, Q, R) for an array of points; the last axis holds p, q, r."""
    pts = np.asarray(states, dtype=float)
    sq = pts ** 2
    phi2 = PHI_F ** 2
    return np.stack([phi2 * sq[..., 0] - sq[..., 1], phi2 * sq[..., 1] - sq[..., 2], phi2 * sq[..., 2] - sq[..., 0]],
                    axis=-1)


def pqr_transform(p: float, q: float, r: float) -> PQRState:
    return PQRState(*(float(v) for v in pqr_array((p, q, r))))


def pqr_inverse(P: float, Q: float, R: float, tol: float = 1e-12) -> Tuple[float, float, float]:
    """Recover (p², q², r²) from 4φp² = φ²P+Q+φ⁻²R and its cyclic shifts.

    Raises
    ------
    OutsideRealLocusError
        If one of the squares comes out below −tol.
    """
    phi2, phi_2 = PHI_F ** 2, PHI_F ** -2
    squares = (
        (phi2 * P + Q + phi_2 * R) / (4 * PHI_F),
        (phi_2 * P + phi2 * Q + R) / (4 * PHI_F),
        (P + phi_2 * Q + phi2 * R) / (4 * PHI_F),
    )
    if min(squares) < -tol:
        raise OutsideRealLocusError(f"({P}, {Q}, {R}) recovers squares {squares}")
    return tuple(max(s, 0.0) for s in squares)  # type: ignore[return-value]


def _family(x: Any, phi: Any, xi: Any) -> Dict[str, Any]:
    """f, g, h, 𝔩, 𝔱, 𝔭 = 𝔩𝔱 and 𝔮 = 4𝔱³ built from any ring elements standing for X, φ and ξ."""
    f = 7 * phi * x ** 3 - 7 * phi ** 2 * x ** 2 - (11 * xi + 2 * phi ** 3) * x - 7 * xi * phi
    g = x ** 3 - 2 * phi * x ** 2 + phi ** 2 * x - 4 * xi
    h = 2 * x ** 3 - phi * x ** 2 + xi
    ell = 14 * phi * x - 22 * xi - 4 * phi ** 3
    t = 20 * x ** 3 + 5 * phi ** 2 * x ** 2 - 90 * phi * xi * x - 135 * xi ** 2 - 20 * phi ** 3 * xi
    return {"f": f, "g": g, "h": h, "l": ell, "t": t, "p": ell * t, "q": 4 * t ** 3}


@frozen
class PolynomialFamily:
    """The polynomials in X attached to a level ξ; with ξ symbolic they live in ℚ(√5)[X, xi]."""

    xi: Optional[GoldenNumber]
    f: MultiPoly
    g: MultiPoly
    h: MultiPoly
    l: MultiPoly  # noqa: E741
    t: MultiPoly
    p: MultiPoly
    q: MultiPoly

    @property
    def variables(self) -> Tuple[str, ...]:
        return self.f.variables

    def as_dict(self) -> Dict[str, MultiPoly]:
        return {k: getattr(self, k) for k in ("f", "g", "h", "l", "t", "p", "q")}

    def to_json(self) -> Dict[str, Any]:
        return {"xi": None if self.xi is None else str(self.xi), **{k: str(v) for k, v in self.as_dict().items()}}


def _as_golden(xi: Exact) -> GoldenNumber:
    ret = GoldenNumber.coerce(xi)
    if ret is None:
        raise TypeError(f"ξ must be exact (int, Fraction or GoldenNumber), got {xi!r}")
    return ret


def polynomial_family(xi: Optional[Exact] = None) -> PolynomialFamily:
    """Build f, g, h, 𝔩, 𝔱, 𝔭, 𝔮 at an exact level, or with ξ as a second indeterminate when xi is None."""
    if xi is None:
        x, level = MultiPoly.generators(("X", "xi"))
        exact = None
    else:
        (x, ) = MultiPoly.generators(("X", ))
        exact = level = _as_golden(xi)
    return PolynomialFamily(exact, **_family(x, PHI, level))


def _upsilon_numerator(family: PolynomialFamily) -> MultiPoly:
    gens = MultiPoly.generators(family.variables)
    x = gens[0]
    level = gens[1] if family.xi is None else family.xi
    return x ** 3 - PHI * x ** 2 - level


def _compose(poly: MultiPoly, power: int, family: PolynomialFamily) -> MultiPoly:
    """X^power · poly(Υ), with Υ = (X³−φX²−ξ)/X, as a polynomial."""
    x = MultiPoly.variable("X", family.variables)
    numerator = _upsilon_numerator(family)
    powers: Dict[int, MultiPoly] = {}
    ret = MultiPoly.zero(family.variables)
    for exps, coef in poly.terms.items():
        k = exps[0]
        if k > power:
            raise ValueError(f"X^{power} does not clear the poles of a degree-{k} term")
        if k not in powers:
            powers[k] = numerator ** k * x ** (power - k)
        ret = ret + MultiPoly.monomial((0, *exps[1:]), family.variables, coef) * powers[k]
    return ret


@frozen
class IdentityReport:
    xi: Optional[str]
    checks: Dict[str, bool] = field(factory=dict)

    @property
    def passed(self) -> bool:
        return all(self.checks.values())

    def to_json(self) -> Dict[str, Any]:
        return {"xi": self.xi, "checks": dict(sorted(self.checks.items())), "passed": self.passed}


def _require(report: IdentityReport, name: str, remainder: MultiPoly, strict: bool) -> None:
    report.checks[name] = not remainder
    if remainder:
        logger.error("identity %s failed", name)
        if strict:
            raise IdentityFailure(name, remainder)
    else:
        logger.debug("identity %s holds", name)


def solve_p(xi: Exact) -> MultiPoly:
    """Recover the quartic 𝔭 from X⁴𝔭(Υ) = 10h²fg by comparing coefficients, as an exact linear solve."""
    family = polynomial_family(xi)
    x = MultiPoly.variable("X", family.variables)
    target = (family.h ** 2 * family.f * family.g).scale(10)
    columns = [_compose(x ** k, 4, family) for k in range(5)] + [-target]
    degrees = {e for c in columns for e in c.terms}
    rows = [{j: c.coefficient(e) for j, c in enumerate(columns) if c.coefficient(e)} for e in sorted(degrees)]
    kernel = nullspace(rows, len(columns))
    if len(kernel) != 1 or not kernel[0].get(5):
        raise IdentityFailure("p-solve", target)
    vec = kernel[0]
    scale = vec[5] ** -1
    return sum(((x ** k).scale(vec[k] * scale) for k in range(5) if vec.get(k)), MultiPoly.zero(family.variables))


def _weighted_homogeneous(poly: MultiPoly, weights: Sequence[int]) -> bool:
    return len({sum(w * k for w, k in zip(weights, e)) for e in poly.terms}) <= 1


def verify_identity_chain(xi: Optional[Exact] = None, strict: bool = True) -> IdentityReport:
    """Check every identity of the reduction exactly, at an exact ξ or with ξ symbolic (xi=None).

    Raises
    ------
    IdentityFailure
        On the first nonzero remainder when strict is set.
    """
    family = polynomial_family(xi)
    report = IdentityReport(None if family.xi is None else str(family.xi))
    f, g, h = family.f, family.g, family.h
    x = MultiPoly.variable("X", family.variables)
    _require(report, "compose-p", _compose(family.p, 4, family) - (h ** 2 * f * g).scale(10), strict)
    _require(report, "compose-q", _compose(family.q, 9, family) - (h ** 6 * g ** 3).scale(500), strict)
    _require(report, "compose-l", _compose(family.l, 1, family) - f.scale(2), strict)
    _require(report, "p-factors", family.p - family.l * family.t, strict)
    _require(report, "q-cube", family.q - (family.t ** 3).scale(4), strict)
    numerator = _upsilon_numerator(family)
    _require(report, "upsilon-derivative", numerator.diff("X") * x - numerator - h, strict)
    if family.xi is not None:
        _require(report, "p-solve", solve_p(family.xi) - family.p, strict)
    weighted = _family(*MultiPoly.generators(("X", "F", "Z")))
    for name in ("l", "t"):
        uneven = not _weighted_homogeneous(weighted[name], (2, 1, 3))
        _require(report, f"{name}-weights", weighted[name] if uneven else MultiPoly.zero(("X", "F", "Z")), strict)
    for name, remainder in sphere_identities().items():
        _require(report, name, remainder, strict)
    logger.info("identity chain at ξ = %s: %d checks, passed = %s", report.xi or "xi", len(report.checks),
                report.passed)
    return report


def _pqr_polys() -> Tuple[MultiPoly, MultiPoly, MultiPoly]:
    p, q, r = MultiPoly.generators(XYZ)
    phi2 = PHI * PHI
    return phi2 * p * p - q * q, phi2 * q * q - r * r, phi2 * r * r - p * p


def _derivatives() -> Tuple[MultiPoly, MultiPoly, MultiPoly]:
    """p′, q′, r′ of the backward system, as the negated polynomial numerators."""
    first = icosahedral_numerator()
    p, q, r = MultiPoly.generators(XYZ)
    return -first, -first.substitute((q, r, p)), -first.substitute((r, p, q))


@lru_cache(maxsize=None)
def sphere_identities() -> Dict[str, MultiPoly]:
    """Remainders of the identities in p, q, r; every value is the zero polynomial when the chain holds.

    The curve equation is homogenized to degree 30: φ ↦ P+Q+R (not in the constant φ⁵ after Y²), ξ ↦ PQR, and
    Y ↦ 2φ²pp′ − 2qq′ (cyclically for Q and R).
    """
    p, q, r = MultiPoly.generators(XYZ)
    coords = (p, q, r)
    big = _pqr_polys()
    P, Q, R = big
    w = p * p + q * q + r * r
    phi, phi2, phi_2 = PHI, PHI * PHI, PHI ** -2
    ret: Dict[str, MultiPoly] = {}
    for i, label in enumerate("pqr"):
        ret[f"inverse-{label}"] = (
            big[i] * phi2 + big[(i + 1) % 3] + big[(i + 2) % 3] * phi_2 - coords[i] * coords[i] * (4 * phi)
        )
    ret["pqr-sum"] = P + Q + R - w * phi
    ret["pqr-product"] = P * Q * R - icosahedral_invariant()
    alpha = P * P * Q + Q * Q * R + R * R * P
    beta = P * Q * Q + Q * R * R + R * P * P
    lhs = (p * q * r) ** 2 * (64 * phi ** 3)
    ret["cubic-expansion"] = lhs - (
        P * Q * R * 22 + P ** 3 + Q ** 3 + R ** 3 + (alpha + beta) * Fraction(13, 2) + (alpha - beta) * (SQRT5 / 2)
    )
    total, product = P + Q + R, P * Q * R
    # (α−β)² is the discriminant of (x−P)(x−Q)(x−R), written through P alone
    disc = (2 * P ** 3 - total * P * P + product) ** 2 * (P ** 3 - 2 * total * P * P + total * total * P - 4 * product)
    ret["discriminant"] = P ** 3 * (alpha - beta) ** 2 - disc
    derivs = _derivatives()
    for label, (i, j, _) in CYCLIC.items():
        x = big[i]
        y = coords[i] * derivs[i] * (2 * phi2) - coords[j] * derivs[j] * 2
        fam = _family(x, total, product)
        lhs = x * (y * y * phi ** 5 + fam["f"] * fam["g"] * 10) ** 2
        ret[f"curve-{label}"] = lhs - fam["h"] ** 2 * fam["g"] ** 3 * 500
        ret[f"derivative-{label}"] = y - coords[0] * coords[1] * coords[2] * x * (
            coords[j] * coords[j] * phi2 + coords[i] * coords[i] - coords[(i + 2) % 3] ** 2 * (phi2 + 1)
        ) * (40 - 8 * SQRT5)
    return ret


def rational_curve_remainder() -> MultiPoly:
    """At ξ = −φ³/6, the reduced curve in (Δ, y) = (φ⁻²Υ, φ⁻²Υ′) minus φ¹⁸/1296 times the rational one."""
    level = RATIONAL_LEVEL
    d, y = MultiPoly.generators(("D", "y"))
    fam = _family(d * PHI ** 2, PHI, level)
    upsilon_prime = y * PHI ** 2
    reduced = (upsilon_prime ** 2 * PHI ** 5 + fam["l"] * fam["t"]) ** 2 - fam["t"] ** 3 * 4
    c = 48 * d ** 3 + 12 * d ** 2 + 36 * d - 1
    rational = (36 * y ** 2 + 5 * (42 * d - 1) * c) ** 2 - 375 * c ** 3
    return reduced - rational * (PHI ** 18 / 1296)


def _family_numeric(x: NDArray[np.float64], xi: float) -> Dict[str, NDArray[np.float64]]:
    return _family(x, PHI_F, xi)


def _trace_derivatives(states: NDArray[np.float64]) -> NDArray[np.float64]:
    """(P′, Q′, R′) from the exact right-hand sides, never by differencing the trace."""
    first = _NUMERATOR
    p, q, r = states[:, 0], states[:, 1], states[:, 2]
    dp = -np.real(first.evaluate_numeric(states))
    dq = -np.real(first.evaluate_numeric(states[:, [1, 2, 0]]))
    dr = -np.real(first.evaluate_numeric(states[:, [2, 0, 1]]))
    phi2 = PHI_F ** 2
    return np.stack([2 * phi2 * p * dp - 2 * q * dq, 2 * phi2 * q * dq - 2 * r * dr, 2 * phi2 * r * dr - 2 * p * dp],
                    axis=-1)


_NUMERATOR = icosahedral_numerator()


def trace_level(trace: OrbitTrace) -> float:
    """ξ as measured at the first sample of the trace."""
    return float(np.real(icosahedral_invariant().evaluate_numeric(trace.states[0])))


def _require_samples(trace: OrbitTrace) -> None:
    if not len(trace.times):
        raise ValueError("empty trace")


def _normalized(diff: NDArray[np.float64], *terms: NDArray[np.float64]) -> float:
    scale = np.maximum.reduce([np.abs(t) for t in terms] + [np.full_like(diff, 1e-300)])
    return float(np.max(np.abs(diff) / scale))


def plane_curve_residual(trace: OrbitTrace, xi: Optional[float] = None, which: str = "P") -> float:
    """Max normalized residual of X(Y²φ⁵ + 10fg)² = 500h²g³ along the trace, with (X, Y) = (P, P′), etc."""
    _require_samples(trace)
    level = trace_level(trace) if xi is None else xi
    k = CYCLIC[which][0]
    x = pqr_array(trace.states)[:, k]
    y = _trace_derivatives(trace.states)[:, k]
    fam = _family_numeric(x, level)
    inner = y * y * PHI_F ** 5 + 10 * fam["f"] * fam["g"]
    lhs = x * inner ** 2
    rhs = 500 * fam["h"] ** 2 * fam["g"] ** 3
    big = np.abs(x) * (y * y * PHI_F ** 5 + np.abs(10 * fam["f"] * fam["g"])) ** 2
    return _normalized(lhs - rhs, lhs, rhs, big)


@frozen
class TripleReduction:
    upsilon: NDArray[np.float64] = field(eq=False, repr=False)
    upsilon_prime: NDArray[np.float64] = field(eq=False, repr=False)
    residual: float
    root_error: float
    agreement: float
    segments: Dict[str, int]

    def to_json(self) -> Dict[str, Any]:
        return {
            "samples": len(self.upsilon),
            "residual": self.residual,
            "root_error": self.root_error,
            "agreement": self.agreement,
            "segments": self.segments,
        }


def _segments(mask: NDArray[np.bool_]) -> int:
    """Number of maximal runs of True."""
    if not mask.any():
        return 0
    return int(mask[0]) + int(np.count_nonzero(mask[1:] & ~mask[:-1]))


def triple_reduction(trace: OrbitTrace, xi: Optional[float] = None, pole_guard: float = 1e-3) -> TripleReduction:
    """Υ = (X³−φX²−ξ)/X and Υ′ = hX′/X² along the trace, checked against (Y²φ⁵ + 𝔩𝔱)² = 4𝔱³.

    Samples where |X| < pole_guard are left out for that X; the segment counts record how the remaining samples
    split. Υ is taken from whichever of P, Q, R is largest in absolute value at each sample.
    """
    _require_samples(trace)
    level = trace_level(trace) if xi is None else xi
    big = pqr_array(trace.states)
    derivs = _trace_derivatives(trace.states)
    with np.errstate(divide="ignore", invalid="ignore"):
        upsilons = (big ** 3 - PHI_F * big ** 2 - level) / big
        primes = _family_numeric(big, level)["h"] / big ** 2 * derivs
    usable = np.abs(big) >= pole_guard
    segments = {label: _segments(usable[:, k]) for label, (k, _, _) in CYCLIC.items()}
    pick = np.argmax(np.abs(big), axis=1)
    rows = np.arange(len(big))
    upsilon, prime = upsilons[rows, pick], primes[rows, pick]
    spread = np.where(usable, upsilons, np.nan)
    agreement = float(np.nanmax(np.nanmax(spread, axis=1) - np.nanmin(spread, axis=1)))
    fam = _family_numeric(upsilon, level)
    lhs = (prime ** 2 * PHI_F ** 5 + fam["l"] * fam["t"]) ** 2
    rhs = 4 * fam["t"] ** 3
    residual = _normalized(lhs - rhs, lhs, rhs, (prime ** 2 * PHI_F ** 5 + np.abs(fam["l"] * fam["t"])) ** 2)
    root_error = 0.0
    for u, values in zip(upsilon, big):
        roots = np.sort(np.real(np.roots([1.0, -PHI_F, -u, -level])))
        root_error = max(root_error, float(np.max(np.abs(roots - np.sort(values)))))
    return TripleReduction(upsilon, prime, residual, root_error, agreement, segments)


def sum_product_residuals(trace: OrbitTrace, xi: Optional[float] = None) -> Tuple[float, float]:
    """Max |P+Q+R−φ| and |PQR−ξ| along the trace."""
    level = trace_level(trace) if xi is None else xi
    big = pqr_array(trace.states)
    return (float(np.max(np.abs(big.sum(axis=1) - PHI_F))), float(np.max(np.abs(big.prod(axis=1) - level))))


@frozen
class SquareIdentityReport:
    derivative_residual: float
    expansion_residual: float
    skipped: int

    def to_json(self) -> Dict[str, Any]:
        return {
            "derivative_residual": self.derivative_residual,
            "expansion_residual": self.expansion_residual,
            "skipped": self.skipped,
        }


def verify_square_identities(
    trace: OrbitTrace, xi: Optional[float] = None, floor: float = 1e-12
) -> SquareIdentityReport:
    """P′²/(P⁴−2φP³+φ²P²−4ξP) = 1280φ⁻²p²q²r² and the expansion of 64φ³p²q²r², sample by sample."""
    _require_samples(trace)
    level = trace_level(trace) if xi is None else xi
    big = pqr_array(trace.states)
    P, Q, R = big[:, 0], big[:, 1], big[:, 2]
    dP = _trace_derivatives(trace.states)[:, 0]
    squares = np.prod(trace.states ** 2, axis=1)
    den = P ** 4 - 2 * PHI_F * P ** 3 + PHI_F ** 2 * P ** 2 - 4 * level * P
    keep = np.abs(den) >= floor
    skipped = int(np.count_nonzero(~keep))
    if skipped:
        logger.warning("skipped %d samples where the recurrence denominator vanishes", skipped)
    expected = 1280 * PHI_F ** -2 * squares
    derivative = _normalized(dP[keep] ** 2 / den[keep] - expected[keep], expected[keep], dP[keep] ** 2 / den[keep]) \
        if keep.any() else 0.0
    alpha = P * P * Q + Q * Q * R + R * R * P
    beta = P * Q * Q + Q * R * R + R * P * P
    rhs = 22 * P * Q * R + P ** 3 + Q ** 3 + R ** 3 + 6.5 * (alpha + beta) + SQRT5_F / 2 * (alpha - beta)
    lhs = 64 * PHI_F ** 3 * squares
    expansion = float(np.max(np.abs(lhs - rhs)))
    return SquareIdentityReport(derivative, expansion, skipped)


def rational_curve_residual(trace: OrbitTrace) -> float:
    """Normalized residual of (36y² + 5(42Δ−1)C)² = 375C³, C = 48Δ³+12Δ²+36Δ−1, along a trace at ξ = −φ³/6."""
    reduction = triple_reduction(trace, float(RATIONAL_LEVEL))
    d = reduction.upsilon / PHI_F ** 2
    y = reduction.upsilon_prime / PHI_F ** 2
    c = 48 * d ** 3 + 12 * d ** 2 + 36 * d - 1
    lhs = (36 * y ** 2 + 5 * (42 * d - 1) * c) ** 2
    rhs = 375 * c ** 3
    return _normalized(lhs - rhs, lhs, rhs, (36 * y ** 2 + np.abs(5 * (42 * d - 1) * c)) ** 2)


def point_on_level(xi: float) -> NDArray[np.float64]:
    """A unit vector with 𝒱 = ξ, on the great-circle arc from (φ,1,0)/|·| to (1,1,1)/√3."""
    low, high = float(LEVEL_MIN), float(LEVEL_MAX)
    if not low <= xi <= high:
        raise ValueError(f"ξ = {xi} is outside [{low}, {high}]")
    a = np.array([PHI_F, 1.0, 0.0]) / sqrt(PHI_F ** 2 + 1)
    b = np.ones(3) / sqrt(3)
    invariant = icosahedral_invariant()

    def along(s: float) -> NDArray[np.float64]:
        v = (1 - s) * a + s * b
        return v / np.linalg.norm(v)

    def level(s: float) -> float:
        return float(np.real(invariant.evaluate_numeric(along(s)))) - xi

    if xi == low:
        return a
    if xi == high:
        return b
    return along(brentq(level, 0.0, 1.0, xtol=1e-15, rtol=4 * np.finfo(float).eps))
