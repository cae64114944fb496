import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from steklovmap import reference

eps_values = st.floats(0.02, 0.95)


def test_disk_eigenvalues():
    np.testing.assert_array_equal(reference.disk_eigenvalues(5), [0, 1, 1, 2, 2])
    np.testing.assert_array_equal(reference.disk_eigenvalues(1), [0])
    np.testing.assert_array_equal(reference.disk_eigenvalues(7), [0, 1, 1, 2, 2, 3, 3])
    with pytest.raises(ValueError):
        reference.disk_eigenvalues(0)


def test_half_radius_roots():
    lo, hi = reference.annulus_roots(0.5, 1)
    assert lo == pytest.approx((5 - math.sqrt(17)) / 2, rel=1e-14)
    assert hi == pytest.approx((5 + math.sqrt(17)) / 2, rel=1e-14)
    _, b, c = reference.annulus_polynomial(0.5, 1)
    assert (b, c) == (pytest.approx(-5), pytest.approx(2))


@given(eps_values, st.integers(1, 40))
def test_roots_solve_the_polynomial(eps, k):
    _, b, c = reference.annulus_polynomial(eps, k)
    for lam in reference.annulus_roots(eps, k):
        scale = lam * lam + abs(b * lam) + abs(c)
        assert abs(lam * lam + b * lam + c) <= 1e-10 * scale


@pytest.mark.parametrize("eps", [0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9])
def test_discriminant_positive(eps):
    for k in range(1, 51):
        _, b, c = reference.annulus_polynomial(eps, k)
        assert b * b - 4 * c > 0


@given(st.floats(0.005, 0.95), st.integers(1, 30))
def test_roots_make_mode_matrix_singular(eps, k):
    lo, hi = reference.annulus_roots(eps, k)
    for lam in (lo, hi):
        assert reference.mode_matrix_backward_error(eps, k, lam) <= 1e-12
    # a value between the roots is not an eigenvalue
    assert reference.mode_matrix_backward_error(eps, k, lo + 0.25 * (hi - lo)) > 1e-3


def test_scaled_mode_matrix_is_column_scaling():
    eps, k, lam = 0.3, 3, 2.0
    plain = reference.annulus_mode_matrix(eps, k, lam)
    scaled = reference.annulus_mode_matrix(eps, k, lam, scaled=True)
    np.testing.assert_allclose(scaled, plain * np.array([1.0, eps ** k]), rtol=1e-13)


@pytest.mark.parametrize("eps", [0.05, 0.2, 1 / math.e, 0.6, 0.9])
def test_radial_mode_satisfies_robin_conditions(eps):
    lam = reference.annulus_radial_eigenvalue(eps)
    u, ur = reference.annulus_radial_mode(eps)
    assert ur(1.0) - lam * u(1.0) == pytest.approx(0, abs=1e-12)
    assert ur(eps) + lam * u(eps) == pytest.approx(0, abs=1e-12 * lam)


def test_radial_eigenvalue_root_solve():
    # solve u_r(1) = lam u(1), -u_r(eps) = lam u(eps) for u = A ln r + 1 numerically
    eps = 1 / math.e
    from scipy.optimize import brentq

    def residual(lam):
        A = lam
        return -A / eps - lam * (A * math.log(eps) + 1)

    root = brentq(residual, 0.1, 50)
    assert reference.annulus_radial_eigenvalue(eps) == pytest.approx(root, rel=1e-12)
    assert root == pytest.approx(1 + math.e)


def test_radial_eigenvalue_limits():
    # a thin ring behaves like a strip of width 1 - eps: lam ~ 2 / (1 - eps)
    eps = 1 - 1e-4
    assert reference.annulus_radial_eigenvalue(eps) * (1 - eps) == pytest.approx(2, rel=1e-3)
    assert reference.annulus_radial_eigenvalue(1e-6) > 1e4
    # the alternative closed form fails the boundary conditions
    lam = reference.annulus_radial_eigenvalue_printed(0.3)
    u, ur = reference.annulus_radial_mode(0.3)
    assert abs(ur(1.0) - lam * u(1.0)) > 1e-3


def test_small_eps_closed_form():
    for eps in (1e-3, 0.01, 0.1, 0.3):
        assert reference.annulus_lambda1_small_eps(eps) == pytest.approx(reference.annulus_roots(eps, 1)[0],
                                                                        rel=1e-10)


def test_small_eps_tends_to_disk():
    vals = reference.annulus_eigenvalues(1e-4, 4)
    lows = sorted(reference.annulus_roots(1e-4, k)[0] for k in range(1, 5))
    np.testing.assert_allclose(lows, [1, 2, 3, 4], rtol=2e-4)
    assert vals[0] == 0 and np.all(np.diff(vals) >= 0)


def test_eigenvalue_list_structure():
    vals = reference.annulus_eigenvalues(0.5, 3)
    assert vals.size == 2 + 4 * 3
    assert vals[0] == 0
    assert np.min(np.abs(vals - (5 - math.sqrt(17)) / 2)) < 1e-12
    labelled = reference.annulus_eigenvalues_labelled(0.5, 3)
    assert [k for _, k in labelled].count(0) == 2
    with pytest.raises(ValueError):
        reference.annulus_eigenvalues(1.0, 3)
    with pytest.raises(ValueError):
        reference.annulus_eigenvalues(0.5, 0)


def test_perimeter_scan_maximum():
    eps = 0.01 + 1e-4 * np.arange(4901)
    rows = reference.annulus_normalized_scan(eps, "perimeter")
    i = int(np.argmax(rows[:, 2]))
    assert rows[i, 2] == pytest.approx(6.8064, abs=1e-3)
    assert rows[i, 0] == pytest.approx(0.1467, abs=5e-4)


def test_area_scan_decreasing():
    eps = 0.01 + 1e-3 * np.arange(980)
    rows = reference.annulus_normalized_scan(eps, "area")
    assert np.all(np.diff(rows[:, 2]) < 0)
    tiny = reference.annulus_normalized_scan([1e-6], "area")[0, 2]
    assert tiny == pytest.approx(math.sqrt(math.pi), rel=1e-4)
    with pytest.raises(ValueError):
        reference.annulus_normalized_scan(eps, "volume")
