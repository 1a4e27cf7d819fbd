"""Confluent hypergeometric (Kummer M) evaluation.

Only real arguments with b > 0 and z >= 0 are supported; that is all the
bound-state wavefunction needs.  For a equal to a non-positive integer -n
the function is the degree-n polynomial sum; because the alternating sum
can cancel eight or more digits at the parameter corners used here, the
scalar path builds every term in exact rational arithmetic (doubles are
rationals) and rounds once, which makes it correctly rounded.  Decay at
large z is always carried by an explicit exponential prefactor elsewhere,
never by M itself.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

__all__ = ["KummerArgs", "pochhammer", "kummer_m", "kummer_m_series", "kummer_poly_values"]

_SERIES_ABS_TOL = 1e-13
_SERIES_MAX_TERMS = 10_000


def _is_nonpositive_integer(x: float) -> bool:
    return x <= 0.0 and math.isfinite(x) and x == round(x)


@dataclass(frozen=True)
class KummerArgs:
    """Validated argument triple for M(a, b; z).

    b must not be a non-positive integer (pole of M); z must be finite and
    non-negative.
    """

    a: float
    b: float
    z: float

    def __post_init__(self) -> None:
        if not (math.isfinite(self.a) and math.isfinite(self.b) and math.isfinite(self.z)):
            raise ValueError("Kummer arguments must be finite")
        if _is_nonpositive_integer(self.b):
            raise ValueError(f"b={self.b} is a non-positive integer (pole of M)")
        if self.z < 0.0:
            raise ValueError(f"z must be non-negative, got {self.z}")


def pochhammer(a: float, k: int) -> float:
    """Rising factorial a (a+1) ... (a+k-1); equals 1 for k = 0."""
    if k < 0:
        raise ValueError(f"k must be non-negative, got {k}")
    out = 1.0
    for j in range(k):
        out *= a + j
    return out


def kummer_m(args: KummerArgs) -> float:
    """Kummer's confluent hypergeometric function M(a, b; z).

    Non-positive integer a returns the degree-n polynomial: the terms are
    chained as exact rationals and the finite sum rounds once, so the
    result is correctly rounded even where the alternating sum cancels
    deeply.  Any other a falls back to the convergent double-precision
    series summed with math.fsum to absolute tolerance 1e-13.
    """
    a, b, z = args.a, args.b, args.z
    if z == 0.0:
        return 1.0
    if _is_nonpositive_integer(a):
        n = int(round(-a))
        fb, fz = Fraction(b), Fraction(z)
        term = Fraction(1)
        total = Fraction(1)
        for k in range(n):
            term *= Fraction(-n + k) * fz
            term /= (fb + k) * (k + 1)
            total += term
        return float(total)
    terms = [1.0]
    t = 1.0
    for k in range(_SERIES_MAX_TERMS):
        t *= (a + k) * z / ((b + k) * (k + 1))
        terms.append(t)
        if abs(t) < _SERIES_ABS_TOL:
            return math.fsum(terms)
    raise ArithmeticError(f"Kummer series did not converge for a={a}, b={b}, z={z}")


def kummer_m_series(args: KummerArgs, tol: float = _SERIES_ABS_TOL, max_terms: int = _SERIES_MAX_TERMS) -> float:
    """Reference brute-force series for M(a, b; z).

    Every term is assembled from scratch as pochhammer(a,k) / pochhammer(b,k)
    * z^k / k!, a construction independent of the recurrence chaining in
    :func:`kummer_m`; for terminating a the per-term arithmetic is exact
    rational.  Kept as a test oracle.
    """
    a, b, z = args.a, args.b, args.z
    if _is_nonpositive_integer(a):
        n = int(round(-a))
        fb, fz = Fraction(b), Fraction(z)
        total = Fraction(0)
        for k in range(n + 1):
            num = Fraction(1)
            den = Fraction(1)
            for j in range(k):
                num *= -n + j
                den *= fb + j
            total += num / den * fz**k / math.factorial(k)
        return float(total)
    terms = []
    for k in range(max_terms + 1):
        t = pochhammer(a, k) / pochhammer(b, k) * z**k / math.factorial(k)
        terms.append(t)
        if k > 0 and abs(t) < tol:
            return math.fsum(terms)
    raise ArithmeticError(f"series oracle did not converge for a={a}, b={b}, z={z}")


def kummer_poly_values(n: int, b: float, z: np.ndarray) -> np.ndarray:
    """Vectorized M(-n, b; z) over an array of non-negative z.

    Terms are stacked and reduced with numpy's pairwise summation; n here
    is small (a radial quantum number), so the stack is cheap.
    """
    if n < 0:
        raise ValueError(f"polynomial degree must be non-negative, got {n}")
    if _is_nonpositive_integer(b):
        raise ValueError(f"b={b} is a non-positive integer (pole of M)")
    z = np.asarray(z, dtype=float)
    if np.any(z < 0.0):
        raise ValueError("z must be non-negative")
    terms = np.empty((n + 1,) + z.shape, dtype=float)
    t = np.ones_like(z)
    for k in range(n + 1):
        terms[k] = t
        t = t * ((-n + k) * z / ((b + k) * (k + 1)))
    return np.sum(terms, axis=0)
