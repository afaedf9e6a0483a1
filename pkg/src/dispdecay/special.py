"""Bessel functions of the first kind and the smooth dyadic cutoff pair.

Half-integer orders use the closed spherical forms (with an ascending series
near the origin where those forms cancel).  Integer orders use the ascending
power series up to ``max(12, 2*nu)`` and the Hankel asymptotic expansion
beyond, with the expansion length tiered by argument size so large batches
stay cheap.  The cutoff pair (``phi_bump``, ``psi_bump``) is the
mollifier-based smooth step and its dyadic difference; together they
generate the frequency-shell partition of unity used everywhere else.
"""

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

__all__ = [
    "SUPPORTED_ORDERS",
    "bessel_order_for_dimension",
    "bessel_j",
    "bessel_shell_factor",
    "phi_bump",
    "psi_bump",
    "lp_symbol",
    "BumpPair",
    "CANONICAL_BUMPS",
]

# integer and half-integer orders, enough for dimensions 1..3 plus the
# raising identity J_nu -> J_{nu+1}
SUPPORTED_ORDERS = (-0.5, 0.0, 0.5, 1.0, 1.5, 2.0, 2.5)

_SERIES_TERMS = 42
_SERIES_COEFFS = {}


def bessel_order_for_dimension(n: int) -> float:
    """Order (n - 2) / 2 appearing in the radial Fourier reduction."""
    return 0.5 * (n - 2)


def _series_coefficients(nu):
    coeffs = _SERIES_COEFFS.get(nu)
    if coeffs is None:
        coeffs = [1.0 / (math.factorial(m) * math.gamma(m + nu + 1.0))
                  for m in range(_SERIES_TERMS)]
        _SERIES_COEFFS[nu] = coeffs
    return coeffs


def _bessel_series(nu, r):
    # J_nu(r) = (r/2)^nu * sum_m (-w)^m / (m! Gamma(m+nu+1)), w = (r/2)^2;
    # forward accumulation stops once the largest term falls below 1e-18
    # (the sum is O(1)), so small-argument blocks cost few passes
    w = 0.25 * r * r
    np.negative(w, out=w)
    w_max = float(-w.min()) if w.size else 0.0
    coeffs = _series_coefficients(nu)
    acc = np.full_like(r, coeffs[0])
    term = np.full_like(r, coeffs[0])
    bound = coeffs[0]
    for m in range(1, _SERIES_TERMS):
        ratio = coeffs[m] / coeffs[m - 1]
        np.multiply(term, w, out=term)
        np.multiply(term, ratio, out=term)
        acc += term
        bound *= w_max * ratio
        if bound < 1e-18:
            break
    if nu == 0.0:
        return acc
    scratch = np.multiply(r, 0.5)
    np.power(scratch, nu, out=scratch)
    acc *= scratch
    return acc


_HANKEL_TERMS = 24
_HANKEL_COEFFS = {}


def _hankel_coefficients(nu):
    # signed products a_k = prod_{j<=k} (4 nu^2 - (2j-1)^2) / (8^k k!) with
    # the alternating (-1)^(k//2) already folded in; split by parity into
    # the cosine (P) and sine (Q) series in powers of 1/r
    key = nu
    cached = _HANKEL_COEFFS.get(key)
    if cached is None:
        mu = 4.0 * nu * nu
        term = 1.0
        p_coeffs, q_coeffs = [1.0], []
        for k in range(1, _HANKEL_TERMS + 1):
            term = term * (mu - (2 * k - 1) ** 2) / (8.0 * k)
            signed = -term if (k // 2) % 2 else term
            if k % 2:
                q_coeffs.append(signed)
            else:
                p_coeffs.append(signed)
        cached = (np.array(p_coeffs), np.array(q_coeffs))
        _HANKEL_COEFFS[key] = cached
    return cached


def _bessel_asymptotic(nu, r):
    # Hankel expansion with the length tiered by the smallest argument in
    # the block; the first omitted term stays below ~1e-11 in every tier
    p_coeffs, q_coeffs = _hankel_coefficients(nu)
    r_min = float(r.min()) if r.size else math.inf
    if r_min >= 30.0:
        np_terms, nq_terms = 4, 3
    elif r_min >= 16.0:
        np_terms, nq_terms = 6, 5
    else:
        np_terms, nq_terms = len(p_coeffs), len(q_coeffs)
    w = r * r
    np.divide(1.0, w, out=w)
    p = np.full_like(r, p_coeffs[np_terms - 1])
    for c in p_coeffs[np_terms - 2::-1]:
        np.multiply(p, w, out=p)
        p += c
    q = np.full_like(r, q_coeffs[nq_terms - 1])
    for c in q_coeffs[nq_terms - 2::-1]:
        np.multiply(q, w, out=q)
        q += c
    q /= r
    chi = r - (0.5 * nu + 0.25) * math.pi
    trig = np.cos(chi)
    p *= trig
    np.sin(chi, out=trig)
    q *= trig
    p -= q
    amp = np.divide(2.0 / math.pi, r, out=w)
    np.sqrt(amp, out=amp)
    p *= amp
    return p


def _bessel_half_integer(nu, r):
    with np.errstate(divide="ignore", invalid="ignore"):
        amp = np.sqrt(2.0 / (math.pi * np.where(r > 0, r, 1.0)))
        amp = np.where(r > 0, amp, np.inf)
        if nu == -0.5:
            val = amp * np.cos(r)
        elif nu == 0.5:
            val = amp * np.sin(r)
        elif nu == 1.5:
            rr = np.where(r > 0, r, 1.0)
            val = amp * (np.sin(r) / rr - np.cos(r))
        else:  # nu == 2.5
            rr = np.where(r > 0, r, 1.0)
            val = amp * ((3.0 / (rr * rr) - 1.0) * np.sin(r) - 3.0 * np.cos(r) / rr)
    if nu > 0:
        # the closed forms cancel near the origin; the series is exact there
        small = r < 1.0
        if small.any():
            val = np.where(small, _bessel_series(nu, r), val)
    return val


def bessel_j(nu, r):
    """Bessel function J_nu(r) for supported half-integer/integer orders.

    Accepts scalars or arrays with r >= 0; absolute accuracy is ~1e-11 on
    [0, 1e4].  Unsupported orders and negative radii are rejected.
    """
    nu = float(nu)
    if nu not in SUPPORTED_ORDERS:
        raise ValueError(f"unsupported Bessel order {nu}; supported: {SUPPORTED_ORDERS}")
    arr = np.asarray(r, dtype=float)
    if np.any(arr < 0):
        raise ValueError("bessel_j requires r >= 0")
    scalar = arr.ndim == 0
    shape = arr.shape
    arr = np.atleast_1d(arr).ravel()
    if nu % 1.0 != 0.0:
        out = _bessel_half_integer(nu, arr)
    else:
        cutoff = max(12.0, 2.0 * abs(nu))
        out = np.empty_like(arr)
        # banding keeps the adaptive series/expansion lengths matched to
        # each argument range instead of the worst element of the call
        series_bands = ((arr < 4.0), (arr >= 4.0) & (arr <= cutoff))
        asym_edges = [cutoff] + [e for e in (16.0, 30.0) if e > cutoff] + [math.inf]
        for band in series_bands:
            if band.any():
                out[band] = _bessel_series(nu, arr[band])
        for lo_edge, hi_edge in zip(asym_edges, asym_edges[1:]):
            band = (arr > lo_edge) if lo_edge == cutoff else (arr >= lo_edge)
            if hi_edge < math.inf:
                band &= arr < hi_edge
            if band.any():
                out[band] = _bessel_asymptotic(nu, arr[band])
    out = out.reshape(shape)
    return float(out.ravel()[0]) if scalar else out


def bessel_shell_factor(n: int, z):
    """Radial-reduction factor z**(-(n-2)/2) J_{(n-2)/2}(z), continuous at 0.

    For n = 1 this is the cosine of the even extension (the factor 2 lives
    with the kernel prefactor).  The z -> 0 limit for n >= 2 equals
    2**(-(n-2)/2) / Gamma(n/2).
    """
    z = np.asarray(z, dtype=float)
    if n == 1:
        return np.cos(z)
    if n == 2:
        return bessel_j(0.0, np.abs(z))
    if n == 3:
        small = np.abs(z) < 1e-6
        if not small.any():
            return math.sqrt(2.0 / math.pi) * (np.sin(z) / z)
        safe = np.where(small, 1.0, z)
        core = np.where(small, 1.0 - z * z / 6.0, np.sin(safe) / safe)
        return math.sqrt(2.0 / math.pi) * core
    raise ValueError("supported dimensions are 1, 2, 3")


def _mollifier(s):
    # exp(-1/s) for s > 0, extended by 0
    s = np.asarray(s, dtype=float)
    out = np.zeros_like(s)
    pos = s > 0
    out[pos] = np.exp(-1.0 / s[pos])
    return out


def phi_bump(r):
    """Smooth low-pass profile: 1 on [0, 1], 0 on [2, inf), monotone between."""
    r = np.asarray(r, dtype=float)
    scalar = r.ndim == 0
    r = np.atleast_1d(r)
    a = _mollifier(2.0 - r)
    b = _mollifier(r - 1.0)
    out = a / (a + b)
    return float(out[0]) if scalar else out


def psi_bump(r):
    """Dyadic shell profile phi(r) - phi(2r), supported in [1/2, 2]."""
    r = np.asarray(r, dtype=float)
    return phi_bump(r) - phi_bump(2.0 * r)


def lp_symbol(k: int, xi_norm):
    """Frequency-shell symbol psi(2**-k |xi|), supported in [2**(k-1), 2**(k+1)]."""
    return psi_bump(np.asarray(xi_norm, dtype=float) * 2.0 ** (-k))


@dataclass(frozen=True)
class BumpPair:
    """A low-pass profile together with its dyadic shell difference."""

    phi: Callable
    psi: Callable
    max_tested_derivative: int = 4


CANONICAL_BUMPS = BumpPair(phi=phi_bump, psi=psi_bump)
