import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from kg2d.specfun import KummerArgs, kummer_m, kummer_m_series, kummer_poly_values, pochhammer

# grids pinned by the agreement requirements
N_GRID = range(11)
B_GRID = (0.5, 1.0, 3.0, 10.0, 57.0, 100.0)
Z_GRID = (0.0, 0.1, 1.0, 10.0, 50.0)


def test_pochhammer_small_cases():
    assert pochhammer(3.0, 0) == 1.0  # empty product
    assert pochhammer(-2.0, 2) == 2.0  # (-2)(-1)
    assert pochhammer(-2.0, 3) == 0.0  # factor reaches zero
    assert pochhammer(1.5, 3) == pytest.approx(1.5 * 2.5 * 3.5, rel=1e-15)
    with pytest.raises(ValueError):
        pochhammer(1.0, -1)


def test_kummer_point_values():
    assert kummer_m(KummerArgs(0.0, 5.5, 17.3)) == 1.0  # zero-degree polynomial
    assert kummer_m(KummerArgs(-1.0, 3.0, 3.0)) == 0.0  # 1 - z/b at z = b
    # 1 - 2/3 + 1/12 = 5/12, exact rational accumulation
    assert kummer_m(KummerArgs(-2.0, 3.0, 1.0)) == pytest.approx(5.0 / 12.0, rel=1e-15)


def test_kummer_args_rejects_poles_and_bad_z():
    with pytest.raises(ValueError):
        KummerArgs(-1.0, 0.0, 1.0)
    with pytest.raises(ValueError):
        KummerArgs(-1.0, -3.0, 1.0)
    with pytest.raises(ValueError):
        KummerArgs(-1.0, 2.0, -0.5)
    KummerArgs(-1.0, -2.5, 1.0)  # negative non-integer b is fine


def test_polynomial_path_matches_series_oracle():
    for n in N_GRID:
        for b in B_GRID:
            for z in Z_GRID:
                args = KummerArgs(-float(n), b, z)
                poly = kummer_m(args)
                series = kummer_m_series(args)
                assert abs(poly - series) <= 1e-12 * max(abs(poly), abs(series), 1e-290), (n, b, z)


def test_contiguous_recurrence_identity():
    # (b-a) M(a-1,b,z) + (2a-b+z) M(a,b,z) - a M(a+1,b,z) = 0
    for n in N_GRID:
        for b in B_GRID:
            for z in Z_GRID:
                a = -float(n)
                t1 = (b - a) * kummer_m(KummerArgs(a - 1.0, b, z))
                t2 = (2.0 * a - b + z) * kummer_m(KummerArgs(a, b, z))
                t3 = -a * kummer_m(KummerArgs(a + 1.0, b, z))
                scale = max(abs(t1), abs(t2), abs(t3), 1.0)
                assert abs(t1 + t2 + t3) <= 1e-9 * scale, (n, b, z)


@given(
    a=st.floats(min_value=-25.0, max_value=25.0, allow_nan=False),
    b=st.floats(min_value=0.25, max_value=150.0, allow_nan=False),
)
def test_value_at_origin_is_one(a, b):
    assert kummer_m(KummerArgs(a, b, 0.0)) == 1.0


def test_general_a_series_path():
    # non-integer a exercises the convergent-series branch on both sides
    args = KummerArgs(1.5, 4.0, 2.0)
    assert kummer_m(args) == pytest.approx(kummer_m_series(args), rel=1e-11)
    args = KummerArgs(0.5, 0.5, 3.0)  # M(b,b,z) = e^z
    assert kummer_m(args) == pytest.approx(math.exp(3.0), rel=1e-12)


def test_vectorized_polynomial_values():
    z = np.array([0.0, 0.3, 2.0, 7.5, 40.0, 300.0])
    for n in (0, 1, 4, 9):
        for b in (1.0, 12.5, 111.0):
            vec = kummer_poly_values(n, b, z)
            ref = np.array([kummer_m(KummerArgs(-float(n), b, float(zz))) for zz in z])
            assert np.allclose(vec, ref, rtol=1e-10, atol=1e-9 * np.max(np.abs(ref)))
    with pytest.raises(ValueError):
        kummer_poly_values(-1, 2.0, z)
    with pytest.raises(ValueError):
        kummer_poly_values(2, 2.0, np.array([-1.0]))
