"""Bessel evaluation quality and the dyadic partition of unity.

The kernel machinery rests on two ingredients: accurate Bessel values for
the radial Fourier reduction and a smooth cutoff pair whose dilates tile
frequency space exactly.
"""

import numpy as np

from dispdecay import special

print("=== Bessel sample values ===")
print(f"J_0(0)        = {special.bessel_j(0.0, 0.0)}")
print(f"J_1/2(pi)     = {special.bessel_j(0.5, np.pi):.3e}  (sin(pi) = 0)")
print(f"J_0(2.404825557695773) = {special.bessel_j(0.0, 2.404825557695773):.3e}"
      "  (first zero)")

try:
    from scipy import special as sp
    r = np.geomspace(1e-6, 1e4, 2000)
    print("\nabsolute error against the scipy oracle on [1e-6, 1e4]:")
    for nu in (0.0, 0.5, 1.0, 1.5):
        err = np.max(np.abs(special.bessel_j(nu, r) - sp.jv(nu, r)))
        print(f"  nu = {nu:3}: {err:.2e}")
except ImportError:
    print("\n(scipy not installed; skipping the oracle comparison)")

print("\n=== envelopes from the classical Bessel bounds ===")
r_small = np.geomspace(1e-6, 1.0, 500)
r_large = np.geomspace(1.0, 1e4, 2000)
for nu in (0.0, 0.5, 1.0, 1.5):
    small = np.max(np.abs(special.bessel_j(nu, r_small)) / r_small ** nu)
    large = np.max(np.sqrt(r_large) * np.abs(special.bessel_j(nu, r_large)))
    print(f"  nu = {nu:3}: |J|/r^nu <= {small:.3f} on (0,1], "
          f"sqrt(r)|J| <= {large:.3f} on [1, 1e4]")

print("\n=== partition of unity ===")
K = 20
r = np.concatenate([[0.0], np.geomspace(2.0 ** -10, 2.0 ** K, 10_000)])
total = special.phi_bump(r)
for k in range(1, K + 1):
    total = total + special.psi_bump(r * 2.0 ** -k)
print(f"low-pass + {K} shells: max |sum - 1| = "
      f"{np.max(np.abs(total - 1.0)):.2e} on [0, 2^{K}]")
print(f"shell symbol support: psi(0.49) = {special.psi_bump(0.49):g}, "
      f"psi(1) = {special.psi_bump(1.0):g}, psi(2.01) = {special.psi_bump(2.01):g}")
