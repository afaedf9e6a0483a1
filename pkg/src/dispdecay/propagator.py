"""Periodic-grid spectral propagators and the norms used to measure them.

Fields live on a uniform periodic grid in one or two dimensions; evolution
under exp(i t phi(sqrt(-Laplace))) is exact spectral multiplication, as are
the sine/cosine wave groups of the Klein-Gordon and beam equations.  The
box stands in for free space while the data stays spatially concentrated
and the sweep is short enough that wrap-around is negligible; ``auto_box``
sizes the grid from the data's frequency support and the group velocity.

Norm machinery: Lebesgue norms by grid quadrature, Sobolev by spectral
weights, Besov norms per the dyadic-shell definition with the shell sum
truncated at the grid Nyquist frequency, and mixed time-space norms by
trapezoid over supplied time samples.
"""

import math
from dataclasses import dataclass

import numpy as np

from . import special
from .decay_fit import decay_series
from .dispersion import builtin

__all__ = [
    "GridField",
    "NormSpec",
    "make_field",
    "from_spectrum",
    "gaussian_field",
    "random_band_limited_field",
    "band_limit",
    "auto_box",
    "evolve",
    "kg_group",
    "kg_group_dt",
    "beam_group",
    "beam_group_dt",
    "half_wave_multiplier",
    "lp_project",
    "low_project",
    "norm",
    "grid_norm",
    "sobolev_norm",
    "besov_norm",
    "mixed_norm",
    "group_decay_check",
    "center_line_profile",
    "beam_lq_ratio_series",
    "beam_smalltime_check",
]

_FREQ_CACHE = {}


@dataclass(frozen=True)
class GridField:
    """Complex field on a periodic grid; treated as an immutable value."""

    n: int
    N: int
    L: float
    values: np.ndarray

    def __post_init__(self):
        if self.n not in (1, 2):
            raise ValueError("grid fields support n in {1, 2}")
        if self.N & (self.N - 1) or self.N <= 0:
            raise ValueError("N must be a power of two")
        expected = (self.N,) * self.n
        if self.values.shape != expected:
            raise ValueError(f"values must have shape {expected}")

    @property
    def h(self):
        return self.L / self.N

    def spectrum(self):
        return np.fft.fftn(self.values)

    def with_values(self, values):
        return GridField(n=self.n, N=self.N, L=self.L, values=values)


def make_field(n, N, L, values):
    return GridField(n=n, N=N, L=L, values=np.asarray(values, dtype=complex))


def xi_norm(n, N, L):
    """|xi| on the fft grid, frequencies 2*pi*j/L."""
    key = (n, N, L)
    cached = _FREQ_CACHE.get(key)
    if cached is None:
        xi = 2.0 * math.pi * np.fft.fftfreq(N, d=L / N)
        if n == 1:
            cached = np.abs(xi)
        else:
            cached = np.sqrt(xi[:, None] ** 2 + xi[None, :] ** 2)
        if len(_FREQ_CACHE) > 32:
            _FREQ_CACHE.clear()
        _FREQ_CACHE[key] = cached
    return cached


def from_spectrum(n, N, L, spectrum):
    return make_field(n, N, L, np.fft.ifftn(np.asarray(spectrum, dtype=complex)))


def grid_points(n, N, L):
    x = (np.arange(N) - N // 2) * (L / N)
    if n == 1:
        return x
    return np.meshgrid(x, x, indexing="ij")


def gaussian_field(n, N, L, width=1.0, amplitude=1.0):
    """Centered real Gaussian exp(-|x|^2 / (2 width^2))."""
    if n == 1:
        x = grid_points(1, N, L)
        prof = np.exp(-x * x / (2.0 * width ** 2))
    else:
        X, Y = grid_points(2, N, L)
        prof = np.exp(-(X * X + Y * Y) / (2.0 * width ** 2))
    return make_field(n, N, L, amplitude * prof)


def band_limit(field, xi_cut):
    """Remove spectral content above xi_cut with the smooth low-pass profile.

    The symbol equals one below xi_cut/2 and vanishes above xi_cut, so the
    result has compactly supported spectrum.
    """
    sym = special.phi_bump(xi_norm(field.n, field.N, field.L) * (2.0 / xi_cut))
    return from_spectrum(field.n, field.N, field.L, sym * field.spectrum())


def random_band_limited_field(n, N, L, xi_max, rng, base_N=None):
    """Complex Gaussian spectral coefficients restricted to |xi| <= xi_max.

    ``base_N`` draws the coefficients on a coarser reference grid and embeds
    them, so refining N keeps the same underlying field.
    """
    base_N = base_N or N
    if base_N > N:
        raise ValueError("base_N cannot exceed N")
    base_xi = xi_norm(n, base_N, L)
    shape = (base_N,) * n
    coeff = rng.standard_normal(shape) + 1j * rng.standard_normal(shape)
    coeff *= special.phi_bump(base_xi * (2.0 / xi_max))
    if base_N == N:
        return from_spectrum(n, N, L, coeff * (N / base_N) ** n)
    spec = np.zeros((N,) * n, dtype=complex)
    half = base_N // 2
    if n == 1:
        spec[:half] = coeff[:half]
        spec[-half:] = coeff[-half:]
    else:
        idx = np.r_[0:half, base_N - half:base_N]
        tgt = np.r_[0:half, N - half:N]
        spec[np.ix_(tgt, tgt)] = coeff[np.ix_(idx, idx)]
    # unnormalized fft scaling: keep physical values independent of N
    return from_spectrum(n, N, L, spec * (N / base_N) ** n)


def auto_box(rel, xi_max, t_max, points_per_xi=4.0, factor=8.0):
    """(N, L) so wrap-around stays negligible over [0, t_max].

    L >= factor * (1 + t_max * max |phi'|) over the data's frequency
    support, and the Nyquist frequency exceeds points_per_xi * xi_max.
    """
    r = np.geomspace(max(xi_max * 1e-6, 1e-9), xi_max, 513)
    vmax = float(np.max(np.abs(rel.dphi(r))))
    L = factor * (1.0 + abs(t_max) * vmax)
    N = 1 << max(4, math.ceil(math.log2(L * points_per_xi * xi_max / math.pi)))
    return N, L


def _multiply(field, symbol):
    return from_spectrum(field.n, field.N, field.L, symbol * field.spectrum())


def evolve(rel, field, t):
    """Apply the unitary multiplier exp(i t phi(|xi|)) on the grid spectrum."""
    with np.errstate(divide="ignore", invalid="ignore"):
        phase = rel.phi(xi_norm(field.n, field.N, field.L))
    if not np.isfinite(phase).all():
        raise ValueError("dispersion phase is not finite on the grid frequencies")
    return _multiply(field, np.exp(1j * t * phase))


def _wave_omega(field, quartic):
    xi = xi_norm(field.n, field.N, field.L)
    return np.sqrt(1.0 + (xi ** 4 if quartic else xi ** 2))


def _check_same_grid(u0, u1):
    if (u0.n, u0.N, u0.L) != (u1.n, u1.N, u1.L):
        raise ValueError("fields must share a grid")


def kg_group(u0, u1, t):
    """cos(t w) u0 + sin(t w)/w u1 with w = sqrt(1 - Laplace)."""
    _check_same_grid(u0, u1)
    w = _wave_omega(u0, quartic=False)
    spec = np.cos(t * w) * u0.spectrum() + np.sin(t * w) / w * u1.spectrum()
    return from_spectrum(u0.n, u0.N, u0.L, spec)


def kg_group_dt(u0, u1, t):
    """Time derivative of kg_group: -w sin(t w) u0 + cos(t w) u1."""
    _check_same_grid(u0, u1)
    w = _wave_omega(u0, quartic=False)
    spec = -w * np.sin(t * w) * u0.spectrum() + np.cos(t * w) * u1.spectrum()
    return from_spectrum(u0.n, u0.N, u0.L, spec)


def beam_group(u0, u1, t):
    """cos(t w) u0 + sin(t w)/w u1 with w = sqrt(1 + Laplace^2)."""
    _check_same_grid(u0, u1)
    w = _wave_omega(u0, quartic=True)
    spec = np.cos(t * w) * u0.spectrum() + np.sin(t * w) / w * u1.spectrum()
    return from_spectrum(u0.n, u0.N, u0.L, spec)


def beam_group_dt(u0, u1, t):
    _check_same_grid(u0, u1)
    w = _wave_omega(u0, quartic=True)
    spec = -w * np.sin(t * w) * u0.spectrum() + np.cos(t * w) * u1.spectrum()
    return from_spectrum(u0.n, u0.N, u0.L, spec)


def half_wave_multiplier(kind, field, t):
    """exp(i t w) for the kg/beam frequencies, or the fourth-order flow."""
    if kind == "fourth":
        return evolve(builtin("schrodinger4"), field, t)
    w = _wave_omega(field, quartic=(kind == "beam"))
    return _multiply(field, np.exp(1j * t * w))


def lp_project(field, k):
    """Dyadic shell projector at scale k (spectral symbol psi(2^-k |xi|))."""
    return _multiply(field, special.lp_symbol(k, xi_norm(field.n, field.N, field.L)))


def low_project(field):
    """Low-frequency projector (spectral symbol phi(|xi|))."""
    return _multiply(field, special.phi_bump(xi_norm(field.n, field.N, field.L)))


@dataclass(frozen=True)
class NormSpec:
    """lebesgue(p) | sobolev(s) | besov(s, p, q)."""

    kind: str
    p: float = 2.0
    q: float = 2.0
    s: float = 0.0

    @classmethod
    def lebesgue(cls, p):
        return cls(kind="lebesgue", p=float(p))

    @classmethod
    def sobolev(cls, s):
        return cls(kind="sobolev", s=float(s))

    @classmethod
    def besov(cls, s, p, q):
        return cls(kind="besov", s=float(s), p=float(p), q=float(q))


def grid_norm(field, p):
    """Lebesgue norm by grid quadrature; p = inf is the grid max."""
    mag = np.abs(field.values)
    if math.isinf(p):
        return float(mag.max())
    if p < 1:
        raise ValueError("p must be >= 1")
    cell = field.h ** field.n
    return float((cell * np.sum(mag ** p)) ** (1.0 / p))


def sobolev_norm(field, s):
    """H^s norm via the spectral weight (1 + |xi|^2)^(s/2)."""
    xi = xi_norm(field.n, field.N, field.L)
    weighted = (1.0 + xi * xi) ** (0.5 * s) * field.spectrum()
    cell = field.h ** field.n
    return float(math.sqrt(cell / field.N ** field.n * np.sum(np.abs(weighted) ** 2)))


def _nyquist_shells(field):
    xi_max = math.pi * field.N / field.L
    return int(math.ceil(math.log2(xi_max))) + 1


def besov_norm(field, s, p, q):
    """Dyadic Besov norm; the shell sum stops at the grid Nyquist scale."""
    pieces = [grid_norm(low_project(field), p)]
    weights = [1.0]
    for k in range(1, _nyquist_shells(field) + 1):
        pieces.append(grid_norm(lp_project(field, k), p))
        weights.append(2.0 ** (k * s))
    terms = np.array(pieces) * np.array(weights)
    if math.isinf(q):
        return float(terms.max())
    return float(np.sum(terms ** q) ** (1.0 / q))


def norm(field, spec: NormSpec):
    if spec.kind == "lebesgue":
        return grid_norm(field, spec.p)
    if spec.kind == "sobolev":
        return sobolev_norm(field, spec.s)
    if spec.kind == "besov":
        return besov_norm(field, spec.s, spec.p, spec.q)
    raise ValueError(f"unknown norm kind {spec.kind!r}")


def mixed_norm(time_samples, q, spec: NormSpec):
    """L^q-in-time norm of spatial norms over (t, field) samples.

    Trapezoid in t for finite q, max for q = inf.  Samples must be sorted
    in time.
    """
    times = np.array([t for t, _ in time_samples], dtype=float)
    if len(times) == 0:
        raise ValueError("mixed_norm needs at least one sample")
    if np.any(np.diff(times) < 0):
        raise ValueError("time samples must be sorted")
    vals = np.array([norm(f, spec) for _, f in time_samples])
    if math.isinf(q):
        return float(vals.max())
    if len(times) == 1:
        return float(vals[0])
    return float(np.trapezoid(vals ** q, times) ** (1.0 / q))


_GROUPS = {
    "kg": lambda g, t: kg_group(g.with_values(np.zeros_like(g.values)), g, t),
    "beam": lambda g, t: beam_group(g.with_values(np.zeros_like(g.values)), g, t),
    "fourth": lambda g, t: evolve(builtin("schrodinger4"), g, t),
}


def _group_predicted_exponent(group, n, p, theta):
    delta = 0.5 - 1.0 / p
    if group == "kg":
        return -(n - 1 + theta) * delta
    if group == "beam":
        return -0.5 * n * delta
    if group == "fourth":
        return -n * delta
    raise ValueError("group must be 'kg', 'beam' or 'fourth'")


def _check_group_constraints(group, n, s, s2, p, theta):
    if not 2.0 <= p:
        raise ValueError("need 2 <= p on the output side")
    delta = 0.5 - 1.0 / p
    if group == "kg":
        if not 0.0 <= theta <= 1.0:
            raise ValueError("kg group needs 0 <= theta <= 1")
        if (n + 1 + theta) * delta > 1.0 + s2 - s + 1e-12:
            raise ValueError(
                f"violated (n+1+theta)*delta <= 1 + s' - s: "
                f"{(n + 1 + theta) * delta} > {1.0 + s2 - s}")
    elif group == "beam":
        if 2.0 + s2 - s < -1e-12:
            raise ValueError(f"violated 0 <= 2 + s' - s: {2.0 + s2 - s} < 0")
    elif group == "fourth":
        if s2 - s < -2.0 * n * delta - 1e-12:
            raise ValueError(
                f"violated -2n*delta <= s' - s: {s2 - s} < {-2.0 * n * delta}")
    else:
        raise ValueError("group must be 'kg', 'beam' or 'fourth'")


def group_decay_check(group, n, s, s2, p, q, data, t_values, theta=1.0,
                      slack=0.1, sharp=False):
    """Large-time decay of ||O(t) g||_{B^s_{p,q}} / ||g||_{B^s2_{p',q}}.

    O(t) is the sine group for kg/beam and the full flow for the
    fourth-order equation.  The exponent constraints of the matching decay
    statement are enforced up front and the fit is compared against its
    large-time exponent.
    """
    _check_group_constraints(group, n, s, s2, p, theta)
    if data.n != n:
        raise ValueError("data dimension mismatch")
    op = _GROUPS[group]
    p_dual = 1.0 / (1.0 - 1.0 / p) if p != math.inf else 1.0
    denom = besov_norm(data, s2, p_dual, q)
    t_values = np.asarray(t_values, dtype=float)
    ratios = np.array([besov_norm(op(data, float(t)), s, p, q) / denom
                       for t in t_values])
    predicted = _group_predicted_exponent(group, n, p, theta)
    return decay_series(t_values, ratios, predicted, slack=slack, sharp=sharp,
                        label=f"{group} n={n} p={p} q={q}")


def beam_lq_ratio_series(u1, q, t_values):
    """||B(t) u1||_q / ||u1||_{q'} for the beam group with u0 = 0."""
    q_dual = q / (q - 1.0)
    denom = grid_norm(u1, q_dual)
    zero = u1.with_values(np.zeros_like(u1.values))
    return np.array([grid_norm(beam_group(zero, u1, float(t)), q) / denom
                     for t in t_values])


def center_line_profile(field):
    """(x, |values|) along the axis line through the box center."""
    x = grid_points(1, field.N, field.L)
    if field.n == 1:
        return x, np.abs(field.values)
    return x, np.abs(field.values[:, field.N // 2])


def beam_smalltime_check(u1, q, t_values):
    """Fit a single constant c in ratio(t) <= c * t^(1 + n/q - n/2).

    Returns (c, rms log residual, exponent); the residual measures how well
    the fixed-exponent power law describes the small-time window.
    """
    n = u1.n
    exponent = 1.0 + n / q - 0.5 * n
    t_values = np.asarray(t_values, dtype=float)
    ratios = beam_lq_ratio_series(u1, q, t_values)
    logc = float(np.mean(np.log(ratios) - exponent * np.log(t_values)))
    resid = np.log(ratios) - exponent * np.log(t_values) - logc
    return math.exp(logc), float(np.sqrt(np.mean(resid ** 2))), exponent
