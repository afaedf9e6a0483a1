import math

import numpy as np
import pytest
from scipy import special as sp

from dispdecay import special


ORDERS = (0.0, 0.5, 1.0, 1.5)


def test_j0_at_zero():
    assert special.bessel_j(0.0, 0.0) == 1.0


def test_half_integer_closed_form_at_pi():
    assert abs(special.bessel_j(0.5, math.pi)) < 1e-14


def test_first_zero_of_j0_by_bisection():
    lo, hi = 2.0, 3.0
    for _ in range(60):
        mid = 0.5 * (lo + hi)
        if special.bessel_j(0.0, lo) * special.bessel_j(0.0, mid) <= 0:
            hi = mid
        else:
            lo = mid
    assert abs(0.5 * (lo + hi) - 2.404825557695773) < 1e-9


@pytest.mark.parametrize("nu", ORDERS + (2.0, 2.5, -0.5))
def test_matches_scipy_oracle(nu):
    r = np.geomspace(1e-6, 1e4, 1000)
    assert np.max(np.abs(special.bessel_j(nu, r) - sp.jv(nu, r))) < 1e-10


def test_matches_mpmath_spot_checks():
    # independent high-precision oracle at awkward radii (switchover, large)
    mpmath = pytest.importorskip("mpmath")
    mpmath.mp.dps = 30
    for nu in ORDERS:
        for r in (1e-5, 0.5, 3.0, 11.9, 12.1, 14.0, 24.0, 150.0, 9876.5):
            ref = float(mpmath.besselj(nu, r))
            assert abs(special.bessel_j(nu, r) - ref) < 1e-11, (nu, r)


def test_rejects_negative_radius_and_bad_order():
    with pytest.raises(ValueError):
        special.bessel_j(0.0, -1.0)
    with pytest.raises(ValueError):
        special.bessel_j(0.3, 1.0)


def test_small_argument_envelope():
    # |J_nu(r)| <= 1.1 r^nu on (0, 1]
    r = np.geomspace(1e-8, 1.0, 1000)
    for nu in ORDERS:
        assert np.all(np.abs(special.bessel_j(nu, r)) <= 1.1 * r ** nu)


def test_decay_envelope():
    # sqrt(r) |J_nu(r)| <= 1 on [1, 1e4] for nu >= 0
    r = np.geomspace(1.0, 1e4, 4000)
    for nu in ORDERS:
        assert np.max(np.sqrt(r) * np.abs(special.bessel_j(nu, r))) <= 1.0


@pytest.mark.parametrize("nu", ORDERS)
def test_raising_identity_by_central_differences(nu):
    # d/dr (r^-nu J_nu) = -r^-nu J_{nu+1}
    h = 1e-4
    for r in (0.5, 1.0, 2.0, 5.0, 10.0, 50.0):
        left = ((r + h) ** -nu * special.bessel_j(nu, r + h)
                - (r - h) ** -nu * special.bessel_j(nu, r - h)) / (2 * h)
        right = -r ** -nu * special.bessel_j(nu + 1.0, r)
        assert abs(left - right) < 1e-6, (nu, r)


def test_bump_plateau_and_support():
    assert special.phi_bump(0.5) == 1.0
    assert special.phi_bump(2.5) == 0.0
    assert special.psi_bump(0.25) == 0.0
    assert special.psi_bump(3.0) == 0.0
    r = np.linspace(0, 5, 2001)
    vals = special.phi_bump(r)
    assert np.all((0.0 <= vals) & (vals <= 1.0))


def test_partition_of_unity_to_1e13():
    K = 20
    r = np.concatenate([[0.0], np.geomspace(2.0 ** -8, 2.0 ** K, 10_000)])
    total = special.phi_bump(r)
    for k in range(1, K + 1):
        total = total + special.psi_bump(r * 2.0 ** -k)
    assert np.max(np.abs(total - 1.0)) < 1e-13


def test_telescoped_value_at_three():
    val = special.phi_bump(3.0) + special.psi_bump(3.0 / 2) + special.psi_bump(3.0 / 4)
    assert abs(val - 1.0) < 1e-14


def test_lp_symbol_support_and_scale_invariance():
    assert special.lp_symbol(3, 4.0) == 0.0
    assert special.lp_symbol(0, 1.0) == 1.0
    for k in (-3, 0, 2, 7):
        assert special.lp_symbol(k, 2.0 ** k * 1.3) == special.psi_bump(1.3)


def test_shell_factor_limits():
    assert abs(special.bessel_shell_factor(3, 0.0) - math.sqrt(2 / math.pi)) < 1e-15
    assert special.bessel_shell_factor(2, np.array([0.0]))[0] == 1.0
    z = np.geomspace(1e-8, 10.0, 200)
    ref = np.sqrt(2 / math.pi) * np.sin(z) / z
    assert np.max(np.abs(special.bessel_shell_factor(3, z) - ref)) < 1e-12
    with pytest.raises(ValueError):
        special.bessel_shell_factor(4, 1.0)
