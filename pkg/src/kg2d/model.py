"""Shared domain types and parameter validation.

Natural units throughout (hbar = c = e = 1): energies and masses in fm^-1,
lengths in fm, magnetic fields in fm^-2.  No unit conversions are offered.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field

import numpy as np

__all__ = [
    "SolverMode",
    "StateSource",
    "PhysicalParams",
    "QuantumNumbers",
    "CoefficientSet",
    "BoundState",
    "SampledFunction",
    "ValidationIssue",
    "ValidationReport",
    "validate_params",
    "APPROX_RANGE_FM_INV",
]

# Interaction strengths for which the inverse-square closure is considered
# quantitatively reliable; outside this window validation warns but proceeds.
APPROX_RANGE_FM_INV = (20.0, 50.0)


class SolverMode(enum.Enum):
    """Choice between the two published coefficient sets.

    The printed reduced coefficients carry extra powers of the placement
    radius relative to what the variable change actually produces; both
    variants coincide at r0 = 1 fm.  DERIVED uses the dimensionally
    consistent re-derivation, PAPER the formulas exactly as printed.
    """

    DERIVED = "derived"
    PAPER = "paper"

    @classmethod
    def from_string(cls, text: str) -> "SolverMode":
        key = text.strip().lower()
        if key == "derived":
            return cls.DERIVED
        if key in ("paper", "paper-literal"):
            return cls.PAPER
        raise ValueError(f"unknown solver mode {text!r} (expected 'derived' or 'paper')")


class StateSource(enum.Enum):
    """Provenance of a solved level."""

    ANALYTIC = "analytic"
    ORACLE_APPROX = "oracle-approx"
    ORACLE_EXACT = "oracle-exact-regularized"


@dataclass(frozen=True)
class PhysicalParams:
    """Model constants.

    m0: rest mass energy [fm^-1]
    z0: well strength parameter [fm^-1]
    r0: nuclear placement distance [fm]
    b0: uniform magnetic field magnitude [fm^-2]

    Construction never raises; use :func:`validate_params` to obtain a
    violation report.
    """

    m0: float
    z0: float
    r0: float
    b0: float


@dataclass(frozen=True)
class QuantumNumbers:
    """Radial index n >= 0 and magnetic index m (any integer)."""

    n: int
    m: int

    def __post_init__(self) -> None:
        if not isinstance(self.n, int) or isinstance(self.n, bool):
            raise TypeError("n must be an integer")
        if not isinstance(self.m, int) or isinstance(self.m, bool):
            raise TypeError("m must be an integer")
        if self.n < 0:
            raise ValueError(f"radial quantum number must be non-negative, got n={self.n}")


@dataclass(frozen=True)
class CoefficientSet:
    """Reduced quantities entering the quantization condition.

    beta1_sq may take either sign; beta2 and kappa_bar are the positive
    roots of their squares and must be positive by construction.
    """

    beta1_sq: float
    beta2: float
    kappa_bar: float
    mode: SolverMode

    def __post_init__(self) -> None:
        if not (self.beta2 > 0.0):
            raise ValueError(f"beta2 must be positive, got {self.beta2}")
        if not (self.kappa_bar > 0.0):
            raise ValueError(f"kappa_bar must be positive, got {self.kappa_bar}")


@dataclass(frozen=True)
class BoundState:
    """A solved level on the particle branch (E < 0).

    residual: for analytic states, the quantization residual at the
    solution; for oracle states, the achieved relative width of the final
    energy bracket.  coeffs is None only for oracle levels whose energy
    falls outside the reduced-coefficient domain.  params records the model
    constants the level was solved for, so wavefunction and density
    construction need no extra context.
    """

    qn: QuantumNumbers
    energy: float
    coeffs: CoefficientSet | None
    residual: float
    source: StateSource
    params: PhysicalParams

    def __post_init__(self) -> None:
        if not (self.energy < 0.0):
            raise ValueError(f"particle-branch energy must be negative, got {self.energy}")
        if self.coeffs is None and self.source is StateSource.ANALYTIC:
            raise ValueError("analytic states must carry their coefficient set")


@dataclass(frozen=True)
class SampledFunction:
    """A radial grid [fm] paired with equally many finite function values."""

    r_values: np.ndarray
    values: np.ndarray

    def __post_init__(self) -> None:
        r = np.asarray(self.r_values, dtype=float)
        v = np.asarray(self.values, dtype=float)
        if r.ndim != 1 or v.ndim != 1 or r.size != v.size:
            raise ValueError("r_values and values must be 1-D arrays of equal length")
        if r.size >= 2 and not np.all(np.diff(r) > 0.0):
            raise ValueError("r_values must be strictly increasing")
        if not (np.all(np.isfinite(r)) and np.all(np.isfinite(v))):
            raise ValueError("sampled function contains non-finite entries")
        r.setflags(write=False)
        v.setflags(write=False)
        object.__setattr__(self, "r_values", r)
        object.__setattr__(self, "values", v)

    def __len__(self) -> int:
        return int(self.r_values.size)


@dataclass(frozen=True)
class ValidationIssue:
    severity: str  # "error" | "warning"
    code: str
    message: str


@dataclass(frozen=True)
class ValidationReport:
    """Outcome of validate_params: ok iff no error-severity issues."""

    issues: tuple[ValidationIssue, ...] = field(default_factory=tuple)

    @property
    def ok(self) -> bool:
        return not any(i.severity == "error" for i in self.issues)

    @property
    def errors(self) -> tuple[ValidationIssue, ...]:
        return tuple(i for i in self.issues if i.severity == "error")

    @property
    def warnings(self) -> tuple[ValidationIssue, ...]:
        return tuple(i for i in self.issues if i.severity == "warning")

    def codes(self) -> tuple[str, ...]:
        return tuple(i.code for i in self.issues)


def validate_params(p: PhysicalParams, mode: SolverMode) -> ValidationReport:
    """Check model constants; reports violations instead of raising.

    Errors: non-finite or non-positive fields (b0 may be zero), and a
    weak-field violation when the squared harmonic coefficient for the
    chosen mode is non-positive (b0 * r0^2 <= z0).  Warning: interaction
    strength outside the quantitative-approximation window.
    """
    issues: list[ValidationIssue] = []

    for name, value, allow_zero in (
        ("m0", p.m0, False),
        ("z0", p.z0, False),
        ("r0", p.r0, False),
        ("b0", p.b0, True),
    ):
        if not math.isfinite(value):
            issues.append(ValidationIssue("error", f"nonfinite-{name}", f"{name} must be finite, got {value}"))
        elif value < 0.0 or (value == 0.0 and not allow_zero):
            kind = "non-negative" if allow_zero else "positive"
            issues.append(ValidationIssue("error", f"nonpositive-{name}", f"{name} must be {kind}, got {value}"))

    if not issues:
        lo, hi = APPROX_RANGE_FM_INV
        if not (lo <= p.z0 <= hi):
            issues.append(
                ValidationIssue(
                    "warning",
                    "approx-range",
                    f"z0={p.z0:g} fm^-1 outside [{lo:g}, {hi:g}] fm^-1; "
                    "the inverse-square closure is only validated inside that window",
                )
            )
        # Same sign condition in both modes: beta2_sq <= 0 iff b0^2 r0^4 <= z0^2.
        beta2_sq = (p.b0**2 * p.r0**4 - p.z0**2) / 4.0
        if mode is SolverMode.PAPER:
            beta2_sq *= p.r0**2
        if beta2_sq <= 0.0:
            issues.append(
                ValidationIssue(
                    "error",
                    "weak-field",
                    f"beta2_sq={beta2_sq:g} <= 0 (weak field: b0*r0^2={p.b0 * p.r0**2:g} "
                    f"<= z0={p.z0:g}); no harmonic confinement term",
                )
            )

    return ValidationReport(tuple(issues))
