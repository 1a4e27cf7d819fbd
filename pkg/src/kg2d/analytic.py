"""Analytic bound-state solver: reduced coefficients, quantization roots, wavefunctions.

With x = (r/r0)^2 and the three-term closure in place, the radial equation
takes the solvable form

    x u'' + u' + [beta1_sq - beta2^2 x - kappa_bar^2 / x] u = 0,

whose regular, decaying solution is x^kappa_bar exp(-beta2 x)
M(-n, 2 kappa_bar + 1; 2 beta2 x) and whose levels solve

    beta1_sq / (2 beta2) - kappa_bar = n + 1/2.

Energies are found by bracketing sign changes of that residual over a scan
window restricted to kappa_bar^2 > 0 and polishing with Brent's method;
each root's radial quantum number is confirmed by counting nodes of the
finite-difference oracle eigenvector rather than trusting root order.
Wavefunctions are evaluated in log space (the raw amplitude scale
underflows doubles at strong confinement) and normalized numerically with
int |u|^2 r dr = 1; the closed-form normalization is deliberately not
used.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.optimize import brentq

from . import oracle
from .approximation import match_coefficients
from .errors import (
    AmbiguousBracketError,
    GridError,
    KappaDomainError,
    NoBoundStateError,
    WeakFieldError,
)
from .model import (
    BoundState,
    CoefficientSet,
    PhysicalParams,
    QuantumNumbers,
    SampledFunction,
    SolverMode,
    StateSource,
)
from .specfun import kummer_poly_values

__all__ = [
    "QuantizationProblem",
    "RadialWavefunction",
    "SpectrumResult",
    "coefficients",
    "kappa_domain_max_energy",
    "default_scan",
    "quantization_residual",
    "solve_level",
    "solve_spectrum",
    "wavefunction",
    "charge_density",
    "density_peak_radius",
    "radial_integral",
    "ode_residual",
]

_RESIDUAL_TOL = 1e-6  # sanity bound on recorded quantization residuals
_NORM_RTOL = 1e-10
_TAIL_FRACTION = 1e-10


def coefficients(p: PhysicalParams, m: int, e: float, mode: SolverMode) -> CoefficientSet:
    """Reduced coefficient set at trial energy e (< 0) and magnetic index m.

    PAPER evaluates the printed formulas verbatim; DERIVED the
    dimensionally consistent re-derivation.  Both agree at r0 = 1 fm.
    Raises WeakFieldError / KappaDomainError when the respective square is
    non-positive.
    """
    if not e < 0.0:
        raise ValueError(f"trial energy must be negative (particle branch), got {e}")
    ac = match_coefficients(p)
    quarter_r0sq = p.r0**2 / 4.0
    if mode is SolverMode.PAPER:
        beta1_sq = quarter_r0sq * (e**2 - p.m0**2 + 2.0 * m * p.b0 + ac.a1)
        beta2_sq = quarter_r0sq * (p.b0**2 * p.r0**4 - ac.a2)
        kappa_sq = quarter_r0sq * (m**2 / p.r0**2 - 2.0 * p.z0 * e - ac.a3)
    else:
        beta1_sq = quarter_r0sq * (e**2 - p.m0**2 + 2.0 * m * p.b0) + ac.a1 / 4.0
        beta2_sq = (p.b0**2 * p.r0**4 - ac.a2) / 4.0
        kappa_sq = m**2 / 4.0 - p.z0 * p.r0 * e / 2.0 - ac.a3 / 4.0
    if beta2_sq <= 0.0:
        raise WeakFieldError(
            f"beta2_sq={beta2_sq:g} <= 0: field too weak (b0*r0^2={p.b0 * p.r0**2:g} <= z0={p.z0:g})"
        )
    if kappa_sq <= 0.0:
        raise KappaDomainError(
            f"kappa_sq={kappa_sq:g} <= 0 at E={e:g}: outside the bound-state domain for m={m}"
        )
    return CoefficientSet(float(beta1_sq), math.sqrt(beta2_sq), math.sqrt(kappa_sq), mode)


def kappa_domain_max_energy(p: PhysicalParams, m: int, mode: SolverMode) -> float:
    """Energy at which kappa_bar^2 crosses zero; the domain is E below this."""
    ac = match_coefficients(p)
    if mode is SolverMode.PAPER:
        return (m**2 / p.r0**2 - ac.a3) / (2.0 * p.z0)
    return (m**2 - ac.a3) / (2.0 * p.z0 * p.r0)


def default_scan(
    p: PhysicalParams, mode: SolverMode, m: int, n_brackets: int = 2000
) -> tuple[float, float, int]:
    """Default search window: 10 rest masses deep up to just inside the kappa domain."""
    bound = kappa_domain_max_energy(p, m, mode)
    if bound < 0.0:
        e_max = bound * (1.0 + 1e-9)
    else:
        e_max = -1e-9 * p.m0
    return (-10.0 * p.m0, e_max, n_brackets)


@dataclass(frozen=True)
class QuantizationProblem:
    """One (params, n, m, mode) level search over an energy window."""

    params: PhysicalParams
    qn: QuantumNumbers
    mode: SolverMode
    scan: tuple[float, float, int]

    def __post_init__(self) -> None:
        e_min, e_max, n_brackets = self.scan
        if not (e_min < e_max <= 0.0):
            raise ValueError(f"scan must satisfy e_min < e_max <= 0, got ({e_min}, {e_max})")
        if n_brackets < 10:
            raise ValueError(f"n_brackets must be at least 10, got {n_brackets}")


def quantization_residual(prob: QuantizationProblem, e: float) -> float:
    """F(E) = beta1_sq / (2 beta2) - kappa_bar - n - 1/2; roots are levels."""
    c = coefficients(prob.params, prob.qn.m, e, prob.mode)
    return c.beta1_sq / (2.0 * c.beta2) - c.kappa_bar - prob.qn.n - 0.5


def _residual_array(prob: QuantizationProblem, energies: np.ndarray) -> np.ndarray:
    """Vectorized residual; NaN where kappa_bar^2 <= 0."""
    p, m, n = prob.params, prob.qn.m, prob.qn.n
    ac = match_coefficients(p)
    quarter_r0sq = p.r0**2 / 4.0
    if prob.mode is SolverMode.PAPER:
        beta1_sq = quarter_r0sq * (energies**2 - p.m0**2 + 2.0 * m * p.b0 + ac.a1)
        beta2_sq = quarter_r0sq * (p.b0**2 * p.r0**4 - ac.a2)
        kappa_sq = quarter_r0sq * (m**2 / p.r0**2 - 2.0 * p.z0 * energies - ac.a3)
    else:
        beta1_sq = quarter_r0sq * (energies**2 - p.m0**2 + 2.0 * m * p.b0) + ac.a1 / 4.0
        beta2_sq = (p.b0**2 * p.r0**4 - ac.a2) / 4.0
        kappa_sq = m**2 / 4.0 - p.z0 * p.r0 * energies / 2.0 - ac.a3 / 4.0
    if beta2_sq <= 0.0:
        raise WeakFieldError(f"beta2_sq={beta2_sq:g} <= 0: field too weak")
    with np.errstate(invalid="ignore"):
        kappa = np.where(kappa_sq > 0.0, np.sqrt(np.abs(kappa_sq)), np.nan)
    return beta1_sq / (2.0 * math.sqrt(beta2_sq)) - kappa - n - 0.5


def _confirm_grid(p: PhysicalParams, c: CoefficientSet, n: int) -> tuple[float, float, int]:
    r_cut = p.r0 * math.sqrt(_decay_cutoff_x(c, n, drop=60.0))
    r_min = 1e-3 * p.r0
    n_points = max(1601, int(math.ceil((r_cut - r_min) / (1.5 * r_min))) + 1)
    return (r_min, r_cut, min(n_points, 20001))


def _confirmed_nodes(p: PhysicalParams, m: int, e: float, mode: SolverMode, c: CoefficientSet, n: int) -> int:
    return oracle.node_count_at(p, m, e, mode, grid=_confirm_grid(p, c, n))


def solve_level(prob: QuantizationProblem) -> BoundState:
    """Locate the level with the requested quantum numbers.

    Scans the window (clipped to the kappa domain) for sign changes of the
    quantization residual, polishes each bracket with Brent's method to
    relative 1e-10 in energy, and keeps the root whose oracle-confirmed
    node count equals n.  Raises NoBoundStateError when nothing qualifies
    and AmbiguousBracketError when several roots do.
    """
    p, qn, mode = prob.params, prob.qn, prob.mode
    e_min, e_max, n_brackets = prob.scan
    bound = kappa_domain_max_energy(p, qn.m, mode)
    hi = min(e_max, bound - max(abs(bound) * 1e-9, 1e-12))
    if hi <= e_min:
        raise NoBoundStateError(
            f"scan window [{e_min:g}, {e_max:g}] empty after kappa-domain restriction (E < {bound:g})"
        )

    grid = np.linspace(e_min, hi, n_brackets + 1)
    f_vals = _residual_array(prob, grid)
    if np.all(np.isnan(f_vals)):
        raise KappaDomainError("quantization residual undefined on the whole scan window")

    def f(e: float) -> float:
        return quantization_residual(prob, e)

    roots: list[float] = []
    for i in np.nonzero(f_vals == 0.0)[0]:
        roots.append(float(grid[i]))
    sign_change = np.nonzero(f_vals[:-1] * f_vals[1:] < 0.0)[0]
    for i in sign_change:
        roots.append(float(brentq(f, grid[i], grid[i + 1], xtol=1e-14, rtol=1e-12)))

    deduped: list[float] = []
    for r in sorted(roots):
        if not deduped or abs(r - deduped[-1]) > 1e-8 * abs(r):
            deduped.append(r)
    if not deduped:
        raise NoBoundStateError(
            f"no sign change of the quantization residual in [{e_min:g}, {hi:g}] for n={qn.n}, m={qn.m}"
        )

    matches = []
    for r in deduped:
        c = coefficients(p, qn.m, r, mode)
        if _confirmed_nodes(p, qn.m, r, mode, c, qn.n) == qn.n:
            matches.append((r, c))
    if not matches:
        raise NoBoundStateError(
            f"{len(deduped)} residual root(s) found but none carries {qn.n} nodes (m={qn.m})"
        )
    if len(matches) > 1:
        energies = ", ".join(f"{r:.6g}" for r, _ in matches)
        raise AmbiguousBracketError(
            f"{len(matches)} roots share node count {qn.n} (m={qn.m}): E in {{{energies}}}"
        )

    e_root, c_root = matches[0]
    return BoundState(
        qn=qn,
        energy=e_root,
        coeffs=c_root,
        residual=f(e_root),
        source=StateSource.ANALYTIC,
        params=p,
    )


@dataclass(frozen=True)
class SpectrumResult:
    """Solved levels plus the (qn, reason) list of levels that failed."""

    levels: tuple[BoundState, ...]
    failures: tuple[tuple[QuantumNumbers, str], ...]


def solve_spectrum(
    p: PhysicalParams,
    mode: SolverMode,
    n_max: int,
    m_list: list[int],
    scan: tuple[float, float, int] | None = None,
) -> SpectrumResult:
    """Solve all (n <= n_max, m in m_list) levels, aggregating failures.

    Absent levels are reported in failures, never fabricated.  With
    scan=None each m uses its own default window.
    """
    levels: list[BoundState] = []
    failures: list[tuple[QuantumNumbers, str]] = []
    for m in sorted(set(m_list)):
        window = scan if scan is not None else default_scan(p, mode, m)
        for n in range(n_max + 1):
            qn = QuantumNumbers(n, m)
            try:
                prob = QuantizationProblem(params=p, qn=qn, mode=mode, scan=window)
                levels.append(solve_level(prob))
            except Exception as exc:  # aggregate without aborting the sweep
                failures.append((qn, f"{type(exc).__name__}: {exc}"))
    levels.sort(key=lambda s: (s.qn.m, s.qn.n))
    return SpectrumResult(tuple(levels), tuple(failures))


# ---------------------------------------------------------------------------
# wavefunctions and densities
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class RadialWavefunction:
    """Normalized radial amplitude samples for one bound state.

    norm_constant multiplies the internal log-scaled evaluator (the raw
    amplitude scale is not representable in doubles at strong confinement),
    so only its positivity is meaningful.
    """

    state: BoundState
    norm_constant: float
    samples: SampledFunction

    def __post_init__(self) -> None:
        if not (self.norm_constant > 0.0):
            raise ValueError("norm_constant must be positive")


def _decay_cutoff_x(c: CoefficientSet, n: int, drop: float = 60.0) -> float:
    """x beyond which the squared amplitude has fallen `drop` e-folds from its peak."""
    k_eff = c.kappa_bar + n  # polynomial growth of M folded into the exponent
    b2 = c.beta2
    x_peak = k_eff / b2

    def g(x: float) -> float:
        return 2.0 * (k_eff * math.log(x) - b2 * x)

    g_peak = g(x_peak)
    hi = 3.0 * x_peak + drop / b2 + 1.0
    while g_peak - g(hi) < drop:
        hi *= 2.0
    lo = x_peak
    for _ in range(100):
        mid = 0.5 * (lo + hi)
        if g_peak - g(mid) >= drop:
            hi = mid
        else:
            lo = mid
    return hi


def _eval_scaled(p: PhysicalParams, c: CoefficientSet, n: int, r: np.ndarray) -> np.ndarray:
    """Bound-state amplitude x^kappa e^(-beta2 x) M(-n, 2 kappa + 1; 2 beta2 x), rescaled.

    The prefactor is evaluated in log space and referenced to its own peak,
    so values stay inside double range for any confinement strength.
    """
    r = np.asarray(r, dtype=float)
    x = (r / p.r0) ** 2
    m_vals = kummer_poly_values(n, 2.0 * c.kappa_bar + 1.0, 2.0 * c.beta2 * x)
    x_peak = c.kappa_bar / c.beta2
    log_ref = c.kappa_bar * math.log(x_peak) - c.beta2 * x_peak
    out = np.zeros_like(x)
    pos = x > 0.0
    with np.errstate(divide="ignore"):
        log_pref = c.kappa_bar * np.log(x[pos]) - c.beta2 * x[pos] - log_ref
    out[pos] = np.exp(log_pref) * m_vals[pos]
    return out


def _simpson_uniform(y: np.ndarray, h: float) -> float:
    if y.size < 3 or y.size % 2 == 0:
        raise ValueError("composite Simpson needs an odd number of points >= 3")
    return (y[0] + y[-1] + 4.0 * np.sum(y[1:-1:2]) + 2.0 * np.sum(y[2:-2:2])) * h / 3.0


def _adaptive_radial_sq_integral(
    p: PhysicalParams, c: CoefficientSet, n: int, a: float, b: float, rtol: float = _NORM_RTOL
) -> float:
    """int_a^b |u_scaled|^2 r dr by composite Simpson with grid doubling."""
    if b <= a:
        return 0.0
    n_pts = 1025
    prev = None
    while n_pts <= (1 << 21) + 1:
        r = np.linspace(a, b, n_pts)
        y = _eval_scaled(p, c, n, r) ** 2 * r
        val = _simpson_uniform(y, r[1] - r[0])
        if prev is not None and abs(val - prev) <= rtol * max(abs(val), 1e-300):
            return val
        prev = val
        n_pts = 2 * (n_pts - 1) + 1
    raise GridError("normalization quadrature did not converge")


def wavefunction(state: BoundState, grid: tuple[float, float, int]) -> RadialWavefunction:
    """Sample the normalized radial amplitude on [r_min, r_max].

    Rejects grids whose r_max cuts off more than 1e-10 of the normalized
    mass.  Normalization enforces int |u|^2 r dr = 1 (2D radial measure;
    the angular factor is carried separately by the full wavefunction).
    """
    if state.coeffs is None:
        raise ValueError("state carries no coefficient set; cannot build the closed-form amplitude")
    if abs(state.residual) > _RESIDUAL_TOL:
        raise ValueError(f"state residual {state.residual:g} exceeds solver tolerance")
    r_min, r_max, n_points = grid
    if not (0.0 <= r_min < r_max):
        raise ValueError(f"grid must satisfy 0 <= r_min < r_max, got ({r_min}, {r_max})")
    if n_points < 2:
        raise ValueError(f"n_points must be at least 2, got {n_points}")

    p, c, n = state.params, state.coeffs, state.qn.n
    r_big = p.r0 * math.sqrt(_decay_cutoff_x(c, n, drop=60.0))
    total = _adaptive_radial_sq_integral(p, c, n, 0.0, max(r_big, r_max))
    if r_max < r_big:
        tail = _adaptive_radial_sq_integral(p, c, n, r_max, r_big)
        if tail > _TAIL_FRACTION * total:
            raise GridError(
                f"grid too short: r_max={r_max:g} fm leaves tail mass fraction {tail / total:.3g} > {_TAIL_FRACTION:g}"
            )
    norm_constant = 1.0 / math.sqrt(total)
    r = np.linspace(r_min, r_max, n_points)
    u = norm_constant * _eval_scaled(p, c, n, r)
    return RadialWavefunction(state=state, norm_constant=norm_constant, samples=SampledFunction(r, u))


def suggested_r_max(state: BoundState, drop: float = 60.0) -> float:
    """Radius beyond which the state's squared amplitude is `drop` e-folds below peak."""
    if state.coeffs is None:
        raise ValueError("state carries no coefficient set")
    return state.params.r0 * math.sqrt(_decay_cutoff_x(state.coeffs, state.qn.n, drop=drop))


def charge_density(wf: RadialWavefunction) -> SampledFunction:
    """Conserved-density profile (-E/m0) |u(r)|^2; non-negative on the particle branch."""
    factor = -wf.state.energy / wf.state.params.m0
    return SampledFunction(wf.samples.r_values, factor * wf.samples.values**2)


def density_peak_radius(density: SampledFunction) -> float:
    """Radius of the largest sampled density value."""
    return float(density.r_values[int(np.argmax(density.values))])


def radial_integral(sf: SampledFunction) -> float:
    """int f(r) r dr over the sample grid (uniform spacing required).

    Composite Simpson; an even point count handles the final interval with
    a trapezoid.
    """
    r, v = sf.r_values, sf.values
    if r.size < 3:
        return float(np.trapezoid(v * r, r))
    h = r[1] - r[0]
    if not np.allclose(np.diff(r), h, rtol=1e-12, atol=1e-12):
        raise ValueError("radial_integral requires a uniformly spaced grid")
    y = v * r
    if r.size % 2 == 1:
        return float(_simpson_uniform(y, h))
    return float(_simpson_uniform(y[:-1], h) + 0.5 * h * (y[-2] + y[-1]))


def ode_residual(
    state: BoundState,
    n_eval: int = 2001,
    h: float | None = None,
) -> float:
    """Scaled max-norm defect of the closed-form amplitude in the reduced radial equation.

    Evaluates u'' + u'/r + w(r) u with fourth-order central differences of
    the analytically evaluated amplitude, where w is the reduced-coefficient
    bracket mapped back to r.  The maximum defect is divided by the largest
    individual term magnitude, so the result is scale-free.
    """
    if state.coeffs is None:
        raise ValueError("state carries no coefficient set")
    p, c, n = state.params, state.coeffs, state.qn.n
    if h is None:
        # balances 4th-order truncation against subtractive roundoff for
        # the confinement scales this model reaches
        h = 3e-4 * p.r0

    x_lo = _inner_cutoff_x(c, n, drop=40.0)
    x_hi = _decay_cutoff_x(c, n, drop=40.0)
    r_lo = max(p.r0 * math.sqrt(x_lo), 3.0 * h)
    r_hi = p.r0 * math.sqrt(x_hi)
    r = np.linspace(r_lo, r_hi, n_eval)

    u = {k: _eval_scaled(p, c, n, r + k * h) for k in (-2, -1, 0, 1, 2)}
    d2 = (-u[-2] + 16.0 * u[-1] - 30.0 * u[0] + 16.0 * u[1] - u[2]) / (12.0 * h * h)
    d1 = (u[-2] - 8.0 * u[-1] + 8.0 * u[1] - u[2]) / (12.0 * h)

    x = (r / p.r0) ** 2
    w = (4.0 / p.r0**2) * (c.beta1_sq - c.beta2**2 * x - c.kappa_bar**2 / x)
    defect = d2 + d1 / r + w * u[0]
    scale = max(np.max(np.abs(d2)), np.max(np.abs(d1 / r)), np.max(np.abs(w * u[0])))
    return float(np.max(np.abs(defect)) / scale)


def _inner_cutoff_x(c: CoefficientSet, n: int, drop: float = 40.0) -> float:
    """x below which the squared amplitude has fallen `drop` e-folds from its peak."""
    k_eff = c.kappa_bar + 0.0  # inner rise is set by the power alone
    b2 = c.beta2
    x_peak = k_eff / b2

    def g(x: float) -> float:
        return 2.0 * (k_eff * math.log(x) - b2 * x)

    g_peak = g(x_peak)
    lo, hi = x_peak * 1e-12, x_peak
    for _ in range(100):
        mid = 0.5 * (lo + hi)
        if g_peak - g(mid) >= drop:
            lo = mid
        else:
            hi = mid
    return lo
