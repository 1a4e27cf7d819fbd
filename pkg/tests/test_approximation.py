import numpy as np
import pytest

from kg2d.approximation import (
    ApproxCoefficients,
    approx_u,
    error_report,
    exact_u,
    match_coefficients,
)
from kg2d.errors import GridError
from kg2d.model import PhysicalParams, SolverMode


def params(z0: float, r0: float = 1.0) -> PhysicalParams:
    return PhysicalParams(m0=120.0, z0=z0, r0=r0, b0=200.0)


def test_exact_u_point_values():
    assert exact_u(1.0, params(30.0, 1.0), SolverMode.PAPER) == pytest.approx(225.0, rel=1e-15)
    for mode in SolverMode:
        assert exact_u(2.0, params(30.0, 1.0), mode) == pytest.approx(56.25, rel=1e-15)
    # direct substitution: z0^2 r0^2 / (4 x^2) = 900 * 0.25 / 4
    assert exact_u(1.0, params(30.0, 0.5), SolverMode.PAPER) == pytest.approx(56.25, rel=1e-15)
    with pytest.raises(ValueError):
        exact_u(0.0, params(30.0), SolverMode.DERIVED)
    with pytest.raises(ValueError):
        exact_u(-1.0, params(30.0), SolverMode.DERIVED)


@pytest.mark.parametrize("z0", [1.0, 30.0, 50.0])
def test_match_coefficients_closed_form_exactly(z0):
    c = match_coefficients(params(z0))
    assert (c.a1, c.a2, c.a3) == (-3.0 * z0**2, z0**2, 3.0 * z0**2)


def test_match_coefficients_scale_exactly_with_z0_squared():
    base = match_coefficients(params(1.0))
    for z0 in (7.0, 19.5, 44.0):
        c = match_coefficients(params(z0))
        for got, unit in ((c.a1, base.a1), (c.a2, base.a2), (c.a3, base.a3)):
            assert got / unit == pytest.approx(z0**2, rel=1e-14)


def test_approx_u_point_values():
    p = params(30.0, 1.0)
    c = match_coefficients(p)
    for mode in SolverMode:
        assert approx_u(1.0, c, p, mode) == exact_u(1.0, p, mode)  # matching point, exact
    # (900/4) * (-3 + 0.64 + 3/0.64)
    assert approx_u(0.64, c, p, SolverMode.DERIVED) == pytest.approx(523.6875, rel=1e-12)
    # far-window degradation: closure gives z0^2 * 1.75 * prefactor at x=4
    # against the exact z0^2/16 * prefactor; no closeness is claimed there
    ua = approx_u(4.0, c, p, SolverMode.DERIVED)
    u = exact_u(4.0, p, SolverMode.DERIVED)
    assert ua == pytest.approx(0.25 * 900.0 * 1.75, rel=1e-14)
    assert abs(ua - u) / u > 10.0
    with pytest.raises(ValueError):
        approx_u(0.0, c, p, SolverMode.DERIVED)


def test_difference_and_two_derivatives_vanish_at_matching_point():
    p = params(30.0)
    c = match_coefficients(p)
    h = 1e-4
    mode = SolverMode.DERIVED

    def diff(x: float) -> float:
        return approx_u(x, c, p, mode) - exact_u(x, p, mode)

    tol = 1e-6 * p.z0**2
    assert diff(1.0) == 0.0  # exact by construction
    d1 = (diff(1.0 + h) - diff(1.0 - h)) / (2.0 * h)
    d2 = (diff(1.0 + h) - 2.0 * diff(1.0) + diff(1.0 - h)) / h**2
    assert abs(d1) <= tol
    assert abs(d2) <= tol


def test_error_report_shrinks_at_matching_point():
    rep = error_report(params(30.0, 0.5), SolverMode.DERIVED, (0.5, 0.5 + 1e-4), 64)
    assert rep.sup_rel_error <= 1e-9


def test_error_report_reference_window():
    # x in [0.64, 1.44]: relative error is |x-1|^3, sup at the outer edge
    rep = error_report(params(30.0, 1.0), SolverMode.DERIVED, (0.8, 1.2), 1000)
    assert rep.sup_rel_error <= 0.10
    assert rep.sup_rel_error == pytest.approx(0.44**3, rel=1e-6)
    assert rep.l2_rel_error < rep.sup_rel_error
    assert len(rep.u_samples) == 1000


def test_error_report_scale_invariance_in_x():
    rep_a = error_report(params(30.0, 1.0), SolverMode.DERIVED, (0.8, 1.2), 777)
    rep_b = error_report(params(30.0, 0.5), SolverMode.DERIVED, (0.4, 0.6), 777)
    assert rep_a.sup_rel_error == pytest.approx(rep_b.sup_rel_error, rel=1e-12)
    assert rep_a.l2_rel_error == pytest.approx(rep_b.l2_rel_error, rel=1e-12)


def test_error_report_mode_independent():
    rep_d = error_report(params(30.0, 0.7), SolverMode.DERIVED, (0.3, 1.5), 333)
    rep_p = error_report(params(30.0, 0.7), SolverMode.PAPER, (0.3, 1.5), 333)
    assert np.allclose(rep_d.rel_err_samples.values, rep_p.rel_err_samples.values, rtol=1e-13)


def test_error_report_rejects_sign_changing_closure():
    # hand-built coefficients with a zero at x = 3
    bad = ApproxCoefficients(a1=-3.0, a2=1.0, a3=0.0)
    with pytest.raises(GridError, match="r="):
        error_report(params(30.0, 1.0), SolverMode.DERIVED, (1.0, 3.0), 200, coeffs=bad)


def test_error_report_window_validation():
    with pytest.raises(ValueError):
        error_report(params(30.0), SolverMode.DERIVED, (0.5, 0.2), 100)
    with pytest.raises(ValueError):
        error_report(params(30.0), SolverMode.DERIVED, (0.0, 0.2), 100)
    with pytest.raises(ValueError):
        error_report(params(30.0), SolverMode.DERIVED, (0.1, 0.2), 1)
