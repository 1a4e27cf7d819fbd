"""Symmetric tridiagonal eigenvalue kernel: Sturm counts, bisection, inverse iteration.

All routines take the diagonal d (length n) and either the off-diagonal e
(length n-1) or its square e2.  The count of pivots of the LDL^T
factorization of T - sigma*I that are negative equals the number of
eigenvalues below sigma, which drives every bisection here.
"""

from __future__ import annotations

import numpy as np
from scipy.linalg import solve_banded

__all__ = [
    "count_below",
    "count_negative_quadratic",
    "gershgorin_bounds",
    "eigenvalue_by_index",
    "all_eigenvalues",
    "nearest_zero_eigenvalue",
    "inverse_iteration",
    "count_nodes",
    "symmetrize_offdiag",
]

_PIVOT_FLOOR = 1e-290


def count_below(d: np.ndarray, e2: np.ndarray, sigma: float) -> int:
    """Number of eigenvalues of the symmetric tridiagonal (d, e) below sigma.

    e2 holds the squared off-diagonal entries.  Zero pivots are nudged to a
    tiny negative value (ties count as below), which keeps bisection exact.
    """
    dl = d.tolist()
    el = e2.tolist()
    x = dl[0] - sigma
    count = 1 if x < 0.0 else 0
    for i in range(1, len(dl)):
        if -_PIVOT_FLOOR < x < _PIVOT_FLOOR:
            x = -_PIVOT_FLOOR
        x = dl[i] - sigma - el[i - 1] / x
        if x < 0.0:
            count += 1
    return count


def count_negative_quadratic(
    d0: np.ndarray, d1: np.ndarray, e2: np.ndarray, energies: np.ndarray
) -> np.ndarray:
    """Batched count of negative eigenvalues of T(E) with diagonal d0 + d1*E + E^2.

    One sequential pivot sweep, vectorized across the energy batch.  Used
    for energy scans where the operator depends quadratically on the trial
    energy and the off-diagonals are energy-independent.
    """
    en = np.asarray(energies, dtype=float)
    esq = en * en
    x = d0[0] + d1[0] * en + esq
    count = (x < 0.0).astype(np.int64)
    for i in range(1, d0.size):
        np.copyto(x, -_PIVOT_FLOOR, where=np.abs(x) < _PIVOT_FLOOR)
        x = (d0[i] + d1[i] * en + esq) - e2[i - 1] / x
        count += x < 0.0
    return count


def gershgorin_bounds(d: np.ndarray, e: np.ndarray) -> tuple[float, float]:
    """Interval certain to contain the whole spectrum."""
    radius = np.zeros_like(d)
    ae = np.abs(e)
    radius[:-1] += ae
    radius[1:] += ae
    return float(np.min(d - radius)), float(np.max(d + radius))


def eigenvalue_by_index(
    d: np.ndarray,
    e: np.ndarray,
    k: int,
    rtol: float = 1e-13,
    max_iter: int = 200,
) -> float:
    """k-th smallest eigenvalue (0-indexed) by Sturm bisection."""
    n = d.size
    if not 0 <= k < n:
        raise IndexError(f"eigenvalue index {k} out of range for dimension {n}")
    e2 = e * e
    lo, hi = gershgorin_bounds(d, e)
    scale = max(abs(lo), abs(hi), 1e-300)
    for _ in range(max_iter):
        mid = 0.5 * (lo + hi)
        if count_below(d, e2, mid) <= k:
            lo = mid
        else:
            hi = mid
        if hi - lo <= rtol * scale + rtol * abs(mid):
            break
    return 0.5 * (lo + hi)


def all_eigenvalues(d: np.ndarray, e: np.ndarray, rtol: float = 1e-13) -> np.ndarray:
    """All eigenvalues, ascending, each located independently by bisection."""
    return np.array([eigenvalue_by_index(d, e, k, rtol) for k in range(d.size)])


def nearest_zero_eigenvalue(d: np.ndarray, e: np.ndarray, rtol: float = 1e-13) -> float:
    """Signed eigenvalue of smallest magnitude."""
    n = d.size
    k = count_below(d, e * e, 0.0)
    candidates = []
    if k >= 1:
        candidates.append(eigenvalue_by_index(d, e, k - 1, rtol))
    if k < n:
        candidates.append(eigenvalue_by_index(d, e, k, rtol))
    return min(candidates, key=abs)


def inverse_iteration(
    d: np.ndarray,
    e: np.ndarray,
    shift: float = 0.0,
    n_iter: int = 4,
    seed: int = 2024,
) -> np.ndarray:
    """Eigenvector of the eigenvalue closest to the shift.

    Solves the shifted tridiagonal system with a pivoted banded LU; an
    exactly singular shift is nudged by a relative epsilon.  The returned
    vector has unit 2-norm and a deterministic sign (largest-magnitude
    component positive).
    """
    n = d.size
    scale = max(float(np.max(np.abs(d))), float(np.max(np.abs(e))) if e.size else 0.0, 1.0)
    ab = np.zeros((3, n))
    ab[0, 1:] = e
    ab[1, :] = d - shift
    ab[2, :-1] = e
    rng = np.random.default_rng(seed)
    v = rng.standard_normal(n)
    v /= np.linalg.norm(v)
    for attempt in range(3):
        try:
            for _ in range(n_iter):
                v = solve_banded((1, 1), ab, v, overwrite_b=False)
                v /= np.linalg.norm(v)
            break
        except np.linalg.LinAlgError:
            ab[1, :] = d - (shift + (attempt + 1) * 1e-12 * scale)
    peak = int(np.argmax(np.abs(v)))
    if v[peak] < 0.0:
        v = -v
    return v


def count_nodes(v: np.ndarray, rel_floor: float = 1e-8) -> int:
    """Strict sign changes of v, ignoring entries below rel_floor * max|v|.

    The floor discards roundoff-level tails (and sub-grid oscillatory
    junk near a singular cutoff) that would otherwise register as nodes.
    """
    vmax = float(np.max(np.abs(v)))
    if vmax == 0.0:
        return 0
    kept = v[np.abs(v) > rel_floor * vmax]
    signs = np.sign(kept)
    return int(np.count_nonzero(signs[:-1] * signs[1:] < 0.0))


def symmetrize_offdiag(sub: np.ndarray, sup: np.ndarray) -> np.ndarray:
    """Off-diagonal of the diagonal-similarity symmetrization of a tridiagonal.

    Row i couples to row i+1 through sup[i] and sub[i]; the symmetrized
    entry is sqrt(sup[i] * sub[i]), valid only when every product is
    positive (true for the radial operators here whenever the grid spacing
    resolves the first-derivative term).
    """
    prod = sup * sub
    if np.any(prod <= 0.0):
        raise ValueError("off-diagonal products must be positive to symmetrize")
    return np.sqrt(prod)
