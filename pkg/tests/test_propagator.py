import math

import numpy as np
import pytest

from dispdecay import decay_fit, dispersion as dsp, propagator as prop


P2 = dsp.builtin("power(2)")


@pytest.fixture
def random_field():
    rng = np.random.default_rng(11)
    vals = rng.standard_normal(256) + 1j * rng.standard_normal(256)
    return prop.make_field(1, 256, 50.0, vals)


def test_grid_validation():
    with pytest.raises(ValueError):
        prop.make_field(1, 200, 10.0, np.zeros(200))  # not a power of two
    with pytest.raises(ValueError):
        prop.make_field(3, 64, 10.0, np.zeros((64,) * 3))
    with pytest.raises(ValueError):
        prop.make_field(2, 64, 10.0, np.zeros(64))


def test_round_trip_and_plancherel(random_field):
    back = prop.from_spectrum(1, 256, 50.0, random_field.spectrum())
    assert np.max(np.abs(back.values - random_field.values)) < 1e-12
    assert abs(prop.grid_norm(random_field, 2) /
               prop.sobolev_norm(random_field, 0.0) - 1.0) < 1e-12


def test_evolve_identity_and_unitarity(random_field):
    # at t = 0 the multiplier is exactly one, so the spectral product is
    # bitwise the input spectrum (compare through the same inverse transform)
    same = prop.evolve(P2, random_field, 0.0)
    reference = np.fft.ifft(random_field.spectrum())
    assert np.array_equal(same.values, reference)
    evolved = prop.evolve(P2, random_field, 2.7)
    assert abs(prop.grid_norm(evolved, 2) - prop.grid_norm(random_field, 2)) < 1e-12


def test_evolve_group_property(random_field):
    two_step = prop.evolve(P2, prop.evolve(P2, random_field, 1.1), 2.3)
    one_step = prop.evolve(P2, random_field, 3.4)
    assert np.max(np.abs(two_step.values - one_step.values)) < 1e-12


def test_gaussian_free_evolution_closed_form():
    N, L, sig, t = 2048, 400.0, 1.0, 3.0
    g = prop.gaussian_field(1, N, L, width=sig)
    evolved = prop.evolve(P2, g, t)
    x = prop.grid_points(1, N, L)
    a = sig ** 2 / 2 - 1j * t
    exact = sig / np.sqrt(2 * a) * np.exp(-x ** 2 / (4 * a))
    assert np.max(np.abs(evolved.values - exact)) < 1e-8


def test_kg_group_basics():
    N, L = 256, 60.0
    u0 = prop.gaussian_field(1, N, L)
    u1 = prop.make_field(1, N, L, np.full(N, 2.0))
    assert np.max(np.abs(prop.kg_group(u0, u1, 0.0).values - u0.values)) < 1e-12
    zero = u0.with_values(np.zeros(N, dtype=complex))
    const_mode = prop.kg_group(zero, u1, 0.7)
    assert np.max(np.abs(const_mode.values - 2.0 * math.sin(0.7))) < 1e-12
    with pytest.raises(ValueError):
        prop.kg_group(u0, prop.make_field(1, 128, 60.0, np.zeros(128)), 1.0)


@pytest.mark.parametrize("group,group_dt", [(prop.kg_group, prop.kg_group_dt),
                                            (prop.beam_group, prop.beam_group_dt)])
def test_energy_conservation(group, group_dt):
    # per-mode rotation keeps ||w u||_2^2 + ||u_t||_2^2 constant
    rng = np.random.default_rng(5)
    N, L = 256, 40.0
    u0 = prop.make_field(1, N, L, rng.standard_normal(N) + 1j * rng.standard_normal(N))
    u1 = prop.make_field(1, N, L, rng.standard_normal(N) + 1j * rng.standard_normal(N))
    quartic = group is prop.beam_group

    def energy(t):
        u = group(u0, u1, t)
        ut = group_dt(u0, u1, t)
        xi = prop.xi_norm(1, N, L)
        w = np.sqrt(1.0 + (xi ** 4 if quartic else xi ** 2))
        cell = L / N
        e_pot = cell / N * np.sum(np.abs(w * u.spectrum()) ** 2)
        e_kin = cell * np.sum(np.abs(ut.values) ** 2)
        return e_pot + e_kin

    e0 = energy(0.0)
    for t in (0.5, 2.0, 9.0):
        assert abs(energy(t) - e0) < 1e-10 * e0


def test_group_solves_second_order_equation():
    # finite-difference u_tt matches -(w^2) u with trapezoid-order error
    N, L, t = 256, 40.0, 1.3
    u0 = prop.gaussian_field(1, N, L)
    u1 = prop.band_limit(prop.gaussian_field(1, N, L, width=2.0), 2.0)
    xi = prop.xi_norm(1, N, L)
    w2 = 1.0 + xi ** 2
    target = prop.from_spectrum(1, N, L, -w2 * prop.kg_group(u0, u1, t).spectrum())
    residuals = []
    for h in (1e-2, 5e-3):
        fd = (prop.kg_group(u0, u1, t + h).values
              - 2.0 * prop.kg_group(u0, u1, t).values
              + prop.kg_group(u0, u1, t - h).values) / h ** 2
        residuals.append(np.max(np.abs(fd - target.values)))
    assert 3.0 < residuals[0] / residuals[1] < 5.0  # second order in h


def test_projector_partition_and_contraction(random_field):
    f = prop.band_limit(random_field, 10.0)
    total = prop.low_project(f).values.copy()
    for k in range(1, 12):
        total += prop.lp_project(f, k).values
    assert np.max(np.abs(total - f.values)) < 1e-12
    # no spectrum in the shell -> projector annihilates
    lowpass = prop.low_project(f)
    assert prop.grid_norm(prop.lp_project(lowpass, 8), 2) < 1e-13
    # psi^2 != psi: repeated projection contracts
    once = prop.lp_project(f, 2)
    twice = prop.lp_project(once, 2)
    assert prop.grid_norm(twice, 2) <= prop.grid_norm(once, 2)


def test_besov_single_shell():
    N, L = 256, 2 * math.pi
    spec = np.zeros(N, dtype=complex)
    spec[32] = 1.0
    shell = prop.from_spectrum(1, N, L, spec)
    for p in (2.0, 4.0, math.inf):
        expected = 2.0 ** 10 * prop.grid_norm(prop.lp_project(shell, 5), p)
        assert abs(prop.besov_norm(shell, 2.0, p, 2.0) - expected) < 1e-12


def test_besov_l2_equivalence_constants():
    rng = np.random.default_rng(42)
    lo, hi = 1.0, 0.0
    for _ in range(100):
        vals = rng.standard_normal(128) + 1j * rng.standard_normal(128)
        f = prop.band_limit(prop.make_field(1, 128, 30.0, vals), 10.0)
        ratio = prop.besov_norm(f, 0.0, 2.0, 2.0) / prop.grid_norm(f, 2)
        lo, hi = min(lo, ratio), max(hi, ratio)
    assert lo >= 0.5 and hi <= 2.0


def test_besov_truncation_stability():
    # band-limited data: doubling N leaves the shell sum unchanged
    N, L = 256, 40.0
    f = prop.band_limit(prop.gaussian_field(1, N, L), 4.0)
    fine = prop.from_spectrum(1, 2 * N, L, np.concatenate(
        [f.spectrum()[:N // 2], np.zeros(N, dtype=complex),
         f.spectrum()[N // 2:]]) * 2.0)
    for (s, p, q) in ((0.0, 2.0, 2.0), (1.5, 4.0, 2.0), (0.5, math.inf, 1.0)):
        a = prop.besov_norm(f, s, p, q)
        b = prop.besov_norm(fine, s, p, q)
        assert abs(a - b) < 1e-10 * max(a, 1.0)


def test_mixed_norm_edge_cases(random_field):
    spec = prop.NormSpec.lebesgue(2.0)
    single = prop.mixed_norm([(0.0, random_field)], math.inf, spec)
    assert single == prop.grid_norm(random_field, 2)
    with pytest.raises(ValueError):
        prop.mixed_norm([], 2.0, spec)
    with pytest.raises(ValueError):
        prop.mixed_norm([(1.0, random_field), (0.0, random_field)], 2.0, spec)


def test_norm_spec_dispatch(random_field):
    assert prop.norm(random_field, prop.NormSpec.lebesgue(math.inf)) == \
        prop.grid_norm(random_field, math.inf)
    assert prop.norm(random_field, prop.NormSpec.sobolev(1.0)) == \
        prop.sobolev_norm(random_field, 1.0)
    assert prop.norm(random_field, prop.NormSpec.besov(0.5, 2.0, 2.0)) == \
        prop.besov_norm(random_field, 0.5, 2.0, 2.0)


def test_group_decay_constraint_validation():
    g = prop.band_limit(prop.gaussian_field(1, 256, 60.0), 2.0)
    t = np.geomspace(1.0, 8.0, 8)
    with pytest.raises(ValueError, match="delta"):
        prop.group_decay_check("kg", 1, 0.0, -1.0, math.inf, 2.0, g, t, theta=1.0)
    with pytest.raises(ValueError, match="2 <= p"):
        prop.group_decay_check("kg", 1, 0.0, 0.5, 1.5, 2.0, g, t)
    with pytest.raises(ValueError, match="2 \\+ s"):
        prop.group_decay_check("beam", 1, 3.0, 0.0, math.inf, 2.0, g, t)


def test_fourth_group_p2_is_unitary_control():
    g = prop.band_limit(prop.gaussian_field(1, 512, 100.0), 2.0)
    t = np.geomspace(1.0, 64.0, 8)
    series = prop.group_decay_check("fourth", 1, 0.5, 0.5, 2.0, 2.0, g, t)
    assert abs(series.fitted_exponent) <= 0.02


def test_kg_group_decay_large_time():
    kg = dsp.builtin("klein_gordon")
    N, L = prop.auto_box(kg, 2.0, 128.0)
    g = prop.band_limit(prop.gaussian_field(1, N, L, width=1.0), 2.0)
    t = np.geomspace(16.0, 128.0, 8)
    series = prop.group_decay_check("kg", 1, 0.0, 0.5, math.inf, 2.0, g, t,
                                    theta=1.0)
    assert series.predicted_exponent == -0.5
    assert series.fitted_exponent <= -0.4


def test_beam_smalltime_lq_bound():
    N, L = 1024, 40.0
    u1 = prop.band_limit(prop.gaussian_field(2, N, L, width=0.22), 14.0)
    ts = np.geomspace(1.0 / 64.0, 0.5, 10)
    c, resid, expo = prop.beam_smalltime_check(u1, 4.0, ts)
    assert expo == 0.5  # 1 + n/q - n/2 at n=2, q=4
    assert resid < 0.15


def test_beam_large_time_lq_decay():
    N, L = 1024, 360.0
    u1 = prop.band_limit(prop.gaussian_field(2, N, L, width=1.5), 1.5)
    ts = np.geomspace(1.0, 16.0, 8)
    ratios = prop.beam_lq_ratio_series(u1, 4.0, ts)
    slope, _, _ = decay_fit.fit_exponent(ts, ratios)
    assert slope <= 2.0 / (2 * 4.0) - 2.0 / 4.0 + 0.1  # n/(2q) - n/4 + slack


def test_auto_box_scales_with_horizon():
    kg = dsp.builtin("klein_gordon")
    N1, L1 = prop.auto_box(kg, 2.0, 8.0)
    N2, L2 = prop.auto_box(kg, 2.0, 64.0)
    assert L2 > L1 and N2 >= N1
    assert math.pi * N1 / L1 >= 4.0 * 2.0  # Nyquist covers 4x the band
