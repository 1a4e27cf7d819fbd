import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from kg2d import tridiag


def random_system(rng, n):
    d = rng.uniform(-5.0, 5.0, n)
    e = rng.uniform(0.1, 2.0, n - 1) * rng.choice([-1.0, 1.0], n - 1)
    return d, e


def dense(d, e):
    t = np.diag(d)
    t += np.diag(e, 1) + np.diag(e, -1)
    return t


@settings(max_examples=150, deadline=None)
@given(data=st.data())
def test_count_below_matches_dense_eigensolve(data):
    n = data.draw(st.integers(min_value=1, max_value=50))
    d = np.array(data.draw(st.lists(st.floats(-10, 10), min_size=n, max_size=n)))
    e = np.array(data.draw(st.lists(st.floats(0.05, 3.0), min_size=n - 1, max_size=n - 1)))
    sigma = data.draw(st.floats(-15, 15))
    evals = np.linalg.eigvalsh(dense(d, e))
    if n and np.min(np.abs(evals - sigma)) < 1e-8 * max(1.0, np.max(np.abs(evals))):
        return  # shift sits on an eigenvalue; count is tie-broken by convention
    assert tridiag.count_below(d, e * e, sigma) == int(np.sum(evals < sigma))


def test_all_eigenvalues_match_dense_brute_force():
    rng = np.random.default_rng(12345)
    for _ in range(25):
        n = int(rng.integers(2, 51))
        d, e = random_system(rng, n)
        ref = np.linalg.eigvalsh(dense(d, e))
        got = tridiag.all_eigenvalues(d, e)
        scale = max(np.max(np.abs(ref)), 1e-30)
        assert np.max(np.abs(got - ref)) <= 1e-10 * scale


def test_eigenvalue_by_index_bounds():
    d = np.array([1.0, 2.0, 3.0])
    e = np.array([0.1, 0.1])
    with pytest.raises(IndexError):
        tridiag.eigenvalue_by_index(d, e, 3)


def test_count_negative_quadratic_matches_scalar_counts():
    rng = np.random.default_rng(7)
    n = 60
    d0 = rng.uniform(-50.0, 50.0, n)
    d1 = rng.uniform(-2.0, 2.0, n)
    e = rng.uniform(0.2, 1.5, n - 1)
    energies = np.linspace(-12.0, -0.5, 23)
    batch = tridiag.count_negative_quadratic(d0, d1, e * e, energies)
    for en, got in zip(energies, batch):
        diag = d0 + d1 * en + en * en
        assert got == tridiag.count_below(diag, e * e, 0.0)


def test_nearest_zero_eigenvalue():
    rng = np.random.default_rng(99)
    for _ in range(10):
        n = int(rng.integers(2, 40))
        d, e = random_system(rng, n)
        evals = np.linalg.eigvalsh(dense(d, e))
        want = evals[np.argmin(np.abs(evals))]
        got = tridiag.nearest_zero_eigenvalue(d, e)
        assert got == pytest.approx(want, rel=1e-9, abs=1e-11)


def test_inverse_iteration_recovers_eigenvector():
    rng = np.random.default_rng(21)
    n = 80
    d, e = random_system(rng, n)
    t = dense(d, e)
    evals, evecs = np.linalg.eigh(t)
    k = 17
    v = tridiag.inverse_iteration(d, e, shift=evals[k] + 1e-9)
    overlap = abs(v @ evecs[:, k])
    assert overlap == pytest.approx(1.0, abs=1e-8)
    assert np.linalg.norm(t @ v - evals[k] * v) <= 1e-8 * max(1.0, abs(evals[k]))


def test_count_nodes():
    assert tridiag.count_nodes(np.array([1.0, 2.0, -1.0, -2.0, 3.0])) == 2
    assert tridiag.count_nodes(np.array([1.0, 2.0, 3.0])) == 0
    assert tridiag.count_nodes(np.zeros(4)) == 0
    # sub-floor wiggles do not count
    v = np.array([1.0, 1e-12, -1e-12, 1.0, -1.0])
    assert tridiag.count_nodes(v) == 1
    assert tridiag.count_nodes(v, rel_floor=1e-14) == 3


def test_symmetrize_preserves_spectrum():
    rng = np.random.default_rng(5)
    n = 30
    d = rng.uniform(-3.0, 3.0, n)
    sup = rng.uniform(0.5, 2.0, n - 1)
    sub = rng.uniform(0.5, 2.0, n - 1)
    t = np.diag(d) + np.diag(sup, 1) + np.diag(sub, -1)
    off = tridiag.symmetrize_offdiag(sub, sup)
    sym_evals = np.linalg.eigvalsh(dense(d, off))
    raw_evals = np.sort(np.linalg.eigvals(t).real)
    assert np.allclose(sym_evals, raw_evals, rtol=1e-9, atol=1e-9)
    with pytest.raises(ValueError):
        tridiag.symmetrize_offdiag(-sub, sup)


def test_gershgorin_contains_spectrum():
    rng = np.random.default_rng(3)
    d, e = random_system(rng, 25)
    lo, hi = tridiag.gershgorin_bounds(d, e)
    evals = np.linalg.eigvalsh(dense(d, e))
    assert lo <= evals.min() and evals.max() <= hi
