"""Three-term closure of the inverse-square-squared term.

In the dimensionless variable x = (r/r0)^2 the squared interaction
contributes a 1/x^2 term.  Near the placement point x = 1 it is replaced
by the solvable form A1 + A2 x + A3 / x, matched in value and first two
derivatives.  The matching system is solved generically rather than
hard-coding its closed-form solution; the closed form is a regression
target in the tests.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import GridError
from .model import PhysicalParams, SampledFunction, SolverMode

__all__ = [
    "ApproxCoefficients",
    "ApproxErrorReport",
    "u_prefactor",
    "exact_u",
    "match_coefficients",
    "approx_u",
    "error_report",
]


@dataclass(frozen=True)
class ApproxCoefficients:
    """Closure coefficients, units fm^-2 (proportional to z0^2)."""

    a1: float
    a2: float
    a3: float


@dataclass(frozen=True)
class ApproxErrorReport:
    """Pointwise closeness of the closure over a radial window.

    sup and L2 aggregates are of the relative error |Ua - U| / |U|; the L2
    aggregate is the RMS over the sample grid.  Prefactors cancel in the
    ratio, so the report does not depend on the solver mode.
    """

    window: tuple[float, float]
    sup_rel_error: float
    l2_rel_error: float
    u_samples: SampledFunction
    ua_samples: SampledFunction
    rel_err_samples: SampledFunction


def u_prefactor(p: PhysicalParams, mode: SolverMode) -> float:
    """Scale carried by both the exact term and its closure, per mode."""
    return p.r0**2 / 4.0 if mode is SolverMode.PAPER else 0.25


def _check_positive_x(x) -> np.ndarray:
    arr = np.asarray(x, dtype=float)
    if np.any(arr <= 0.0):
        raise ValueError("x must be positive")
    return arr


def exact_u(x, p: PhysicalParams, mode: SolverMode):
    """Exact squared-interaction term in x = (r/r0)^2, mode-scaled.

    Accepts scalars or arrays.
    """
    arr = _check_positive_x(x)
    out = u_prefactor(p, mode) * p.z0**2 / arr**2
    return float(out) if np.isscalar(x) else out


def match_coefficients(p: PhysicalParams) -> ApproxCoefficients:
    """Solve the 3x3 matching system at x = 1 for (A1, A2, A3).

    Equates value, first and second derivative of A1 + A2 x + A3/x against
    z0^2/x^2 at x = 1.  The system is triangular and always nonsingular;
    the solution is exactly (-3 z0^2, z0^2, 3 z0^2).
    """
    if not (p.z0 > 0.0):
        raise ValueError(f"z0 must be positive, got {p.z0}")
    zsq = p.z0**2
    # rows: value, d/dx, d2/dx2 of A1 + A2 x + A3/x at x = 1
    mat = np.array([[1.0, 1.0, 1.0], [0.0, 1.0, -1.0], [0.0, 0.0, 2.0]])
    rhs = np.array([zsq, -2.0 * zsq, 6.0 * zsq])
    a1, a2, a3 = np.linalg.solve(mat, rhs)
    return ApproxCoefficients(float(a1), float(a2), float(a3))


def approx_u(x, coeffs: ApproxCoefficients, p: PhysicalParams, mode: SolverMode):
    """Closure A1 + A2 x + A3/x with the mode prefactor; exact at x = 1."""
    arr = _check_positive_x(x)
    out = u_prefactor(p, mode) * (coeffs.a1 + coeffs.a2 * arr + coeffs.a3 / arr)
    return float(out) if np.isscalar(x) else out


def error_report(
    p: PhysicalParams,
    mode: SolverMode,
    window: tuple[float, float],
    n_points: int,
    coeffs: ApproxCoefficients | None = None,
) -> ApproxErrorReport:
    """Sample the exact term and its closure on a uniform r-grid.

    Rejects windows on which the closure changes sign (the relative error
    is ill-defined near its zero); the raised error names the crossing
    radius.  With matched coefficients (the default) the closure is
    positive for all x > 0, so that guard only fires for hand-built
    coefficient sets.
    """
    r_lo, r_hi = window
    if not (0.0 < r_lo < r_hi):
        raise ValueError(f"window must satisfy 0 < r_lo < r_hi, got ({r_lo}, {r_hi})")
    if n_points < 2:
        raise ValueError(f"n_points must be at least 2, got {n_points}")

    if coeffs is None:
        coeffs = match_coefficients(p)
    r = np.linspace(r_lo, r_hi, n_points)
    x = (r / p.r0) ** 2
    u = exact_u(x, p, mode)
    ua = approx_u(x, coeffs, p, mode)

    sign_flip = np.nonzero(ua[:-1] * ua[1:] < 0.0)[0]
    if sign_flip.size:
        r_cross = 0.5 * (r[sign_flip[0]] + r[sign_flip[0] + 1])
        raise GridError(f"closure changes sign inside window near r={r_cross:.6g} fm")

    rel = np.abs(ua - u) / np.abs(u)
    return ApproxErrorReport(
        window=(float(r_lo), float(r_hi)),
        sup_rel_error=float(np.max(rel)),
        l2_rel_error=float(np.sqrt(np.mean(rel**2))),
        u_samples=SampledFunction(r, u),
        ua_samples=SampledFunction(r, ua),
        rel_err_samples=SampledFunction(r, rel),
    )
